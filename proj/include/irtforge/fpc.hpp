#pragma once

#include <optional>
#include <string>
#include <vector>

#include "irtforge/calibrate.hpp"
#include "irtforge/response_matrix.hpp"

namespace irtforge {

// Latent proficiency distribution on fixed nodes. mean, sd and kurtosis
// (raw, normal = 3) are the exact moments of (nodes, weights).
struct LatentDist {
    QuadratureGrid grid;
    double mean = 0.0;
    double sd = 0.0;
    double kurtosis = 0.0;

    static LatentDist from_grid(QuadratureGrid grid);
};

inline constexpr double kDefaultWeightTol = 1e-3;

struct MwuMemOptions {
    int inner_updates = 10;
    double tol = kDefaultWeightTol;
    int max_cycles = 500;
    unsigned threads = 1;
};

struct LatentEstimate {
    LatentDist latent;
    int cycles = 0;
    bool converged = false;
    double max_weight_change = 0.0;
    // Marginal log-likelihood before every weight update.
    std::vector<double> loglik_trace;
    // Weight sums observed after every update; kept for invariant checks.
    std::vector<double> weight_sums;
};

// Item parameters taken as fixed from a bank with difficulties for every
// item. Throws InvalidArgument when any difficulty is missing.
ItemParams fixed_params_from_bank(const ItemBank& bank);

// Multiple-weights-updating, multiple-EM-cycles fixed-parameter calibration:
// item difficulties stay frozen and only the quadrature weights of the
// latent density are re-estimated. Each cycle applies `inner_updates`
// updates w_k <- mean_i posterior_ik, recomputing posteriors in between;
// stops when the largest weight change over a cycle drops below tol.
//
// Every matrix column must name an ok item in `fixed`. Respondents without
// observed cells are ignored; if none remain the matrix is rejected.
LatentEstimate estimate_latent_mwu_mem(const ResponseMatrix& matrix, const ItemParams& fixed,
                                       const QuadratureGrid& grid, const MwuMemOptions& options = {});

struct AbilityEstimate {
    std::string respondent_id;
    std::string source;
    double theta_hat = 0.0;
    double se = 0.0;
    int n_observed = 0;
    std::optional<double> infit;
    std::optional<double> outfit;

    bool operator==(const AbilityEstimate&) const = default;
};

using AbilityEstimates = std::vector<AbilityEstimate>;

// Posterior-mean (EAP) proficiency and posterior SD per respondent, using
// the latent weights as the prior. Throws on a respondent with no observed
// items.
AbilityEstimates eap_scores(const ResponseMatrix& matrix, const ItemParams& fixed, const LatentDist& latent);

// Fills infit / outfit mean squares for every respondent in `abilities`.
AbilityEstimates person_fit(const ResponseMatrix& matrix, const ItemParams& fixed, AbilityEstimates abilities);

}  // namespace irtforge
