#pragma once

#include <optional>
#include <string>
#include <vector>

#include "irtforge/response_matrix.hpp"

namespace irtforge {

// Discrete approximation of a latent density: nodes strictly increasing,
// weights non-negative and summing to 1.
struct QuadratureGrid {
    std::vector<double> nodes;
    std::vector<double> weights;

    std::size_t size() const noexcept { return nodes.size(); }
    bool operator==(const QuadratureGrid&) const = default;
};

// `count` equally spaced nodes on [-span, span] (count odd, >= 11) weighted
// by the standard normal density and normalized.
QuadratureGrid make_grid(int count, double span);

inline constexpr int kDefaultGridCount = 41;
inline constexpr double kDefaultGridSpan = 5.0;
inline constexpr double kClampBound = 6.0;

enum class ItemStatus { ok, extreme_all_correct, extreme_all_incorrect, excluded };

const char* to_string(ItemStatus status) noexcept;
ItemStatus item_status_from_string(const std::string& s);

struct ItemEstimate {
    std::string item_id;
    double beta = 0.0;  // logits; +-kClampBound for extreme items, 0 for excluded
    std::optional<double> se;
    ItemStatus status = ItemStatus::ok;

    bool operator==(const ItemEstimate&) const = default;
};

struct ItemParams {
    std::vector<ItemEstimate> items;

    const ItemEstimate* find(const std::string& item_id) const;
    std::size_t count_ok() const;
    bool operator==(const ItemParams&) const = default;
};

struct Convergence {
    int cycles = 0;
    double max_param_change = 0.0;
    bool converged = false;
    // Marginal log-likelihood evaluated in each cycle's E-step.
    std::vector<double> loglik_trace;
};

struct CalibrationOptions {
    double tol = 1e-4;
    int max_cycles = 500;
    unsigned threads = 1;
};

struct Calibration {
    ItemParams params;
    Convergence convergence;
};

// Marginal maximum likelihood EM for Rasch difficulties with the latent
// density held fixed at `grid` (which pins the scale: mean 0, SD 1 for the
// default grid). Items with no observed 0 or no observed 1 are flagged
// extreme and clamped; items with no observations are excluded. Only
// observed cells enter the likelihood.
//
// Throws InvalidArgument when no item is calibratable. Non-convergence is
// reported through Convergence::converged, not thrown.
Calibration calibrate_mml(const ResponseMatrix& matrix, const QuadratureGrid& grid,
                          const CalibrationOptions& options = {});

// Additive shift mean(reference) - mean(params) over items that are ok in both.
double anchor_shift(const ItemParams& params, const ItemParams& reference);

// Applies anchor_shift to every beta of `params`. Requires at least two
// shared ok items.
ItemParams anchor_to(const ItemParams& params, const ItemParams& reference);

}  // namespace irtforge
