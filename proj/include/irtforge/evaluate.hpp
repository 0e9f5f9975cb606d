#pragma once

#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "irtforge/calibrate.hpp"

namespace irtforge {

// Sample Pearson correlation. Requires equal lengths >= 3 and nonzero
// variance in both vectors.
double pearson(std::span<const double> x, std::span<const double> y);

// Pearson correlation of average ranks (ties share the mean rank).
double spearman(std::span<const double> x, std::span<const double> y);

// 1-based ranks with ties assigned their average rank.
std::vector<double> average_ranks(std::span<const double> x);

// sqrt(sum (estimate - truth)^2 / N).
double rmse(std::span<const double> estimate, std::span<const double> truth);

struct DistStats {
    std::string label;
    double mean = 0.0;
    double sd = 0.0;                  // sample SD, n-1 denominator
    std::optional<double> kurtosis;   // raw m4/m2^2; absent when n < 4 or sd == 0
    int n = 0;

    bool operator==(const DistStats&) const = default;
};

// Raw kurtosis m4/m2^2 from population moments; throws when n < 4 or the
// values are constant.
double raw_kurtosis(std::span<const double> values);

DistStats dist_stats(std::span<const double> thetas, std::string label);

struct ComparisonRow {
    std::string label;
    double pearson = 0.0;
    double spearman = 0.0;
    double rmse = 0.0;  // rmse_anchored when the comparison anchors, else rmse_raw
    double rmse_raw = 0.0;
    double rmse_anchored = 0.0;
    bool anchored = false;
    int n_items = 0;

    bool operator==(const ComparisonRow&) const = default;
};

struct ComparisonReport {
    std::vector<ComparisonRow> rows;

    bool operator==(const ComparisonReport&) const = default;
};

using LabelledParams = std::pair<std::string, ItemParams>;

// Compares every calibration in `others` with `benchmark` over the items
// that are ok in both (at least 3). Rows keep input order.
ComparisonReport compare_calibrations(const ItemParams& benchmark, std::span<const LabelledParams> others,
                                      bool anchor);

}  // namespace irtforge
