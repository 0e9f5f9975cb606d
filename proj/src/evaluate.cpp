#include "irtforge/evaluate.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "irtforge/error.hpp"

namespace irtforge {

namespace {

void check_pair(std::span<const double> x, std::span<const double> y, std::size_t min_len, const char* what) {
    if (x.size() != y.size()) throw InvalidArgument(std::string(what) + ": length mismatch");
    if (x.size() < min_len)
        throw InvalidArgument(std::string(what) + ": need at least " + std::to_string(min_len) + " values");
    for (std::size_t i = 0; i < x.size(); ++i)
        if (!std::isfinite(x[i]) || !std::isfinite(y[i])) throw InvalidArgument(std::string(what) + ": non-finite value");
}

double mean_of(std::span<const double> v) {
    return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

}  // namespace

double pearson(std::span<const double> x, std::span<const double> y) {
    check_pair(x, y, 3, "pearson");
    const double mx = mean_of(x), my = mean_of(y);
    double sxy = 0.0, sxx = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double dx = x[i] - mx, dy = y[i] - my;
        sxy += dx * dy;
        sxx += dx * dx;
        syy += dy * dy;
    }
    if (sxx == 0.0 || syy == 0.0) throw InvalidArgument("pearson: zero variance");
    return std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
}

std::vector<double> average_ranks(std::span<const double> x) {
    std::vector<std::size_t> order(x.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return x[a] < x[b]; });
    std::vector<double> ranks(x.size());
    std::size_t start = 0;
    while (start < order.size()) {
        std::size_t end = start + 1;
        while (end < order.size() && x[order[end]] == x[order[start]]) ++end;
        // positions start..end-1 hold ranks start+1..end
        const double rank = 0.5 * static_cast<double>(start + 1 + end);
        for (std::size_t p = start; p < end; ++p) ranks[order[p]] = rank;
        start = end;
    }
    return ranks;
}

double spearman(std::span<const double> x, std::span<const double> y) {
    check_pair(x, y, 3, "spearman");
    const auto rx = average_ranks(x);
    const auto ry = average_ranks(y);
    return pearson(rx, ry);
}

double rmse(std::span<const double> estimate, std::span<const double> truth) {
    check_pair(estimate, truth, 1, "rmse");
    double ss = 0.0;
    for (std::size_t i = 0; i < estimate.size(); ++i) {
        const double d = truth[i] - estimate[i];
        ss += d * d;
    }
    return std::sqrt(ss / static_cast<double>(estimate.size()));
}

double raw_kurtosis(std::span<const double> values) {
    if (values.size() < 4) throw InvalidArgument("kurtosis needs at least 4 values");
    const double m = mean_of(values);
    double m2 = 0.0, m4 = 0.0;
    for (double v : values) {
        const double d = v - m;
        m2 += d * d;
        m4 += d * d * d * d;
    }
    const double n = static_cast<double>(values.size());
    m2 /= n;
    m4 /= n;
    if (m2 == 0.0) throw InvalidArgument("kurtosis undefined for constant values");
    return m4 / (m2 * m2);
}

DistStats dist_stats(std::span<const double> thetas, std::string label) {
    if (thetas.size() < 2) throw InvalidArgument("dist_stats needs at least 2 values for '" + label + "'");
    for (double t : thetas)
        if (!std::isfinite(t)) throw InvalidArgument("dist_stats: non-finite value");
    DistStats s;
    s.label = std::move(label);
    s.n = static_cast<int>(thetas.size());
    s.mean = mean_of(thetas);
    double ss = 0.0;
    for (double t : thetas) ss += (t - s.mean) * (t - s.mean);
    s.sd = std::sqrt(ss / static_cast<double>(thetas.size() - 1));
    if (thetas.size() >= 4 && ss > 0.0) s.kurtosis = raw_kurtosis(thetas);
    return s;
}

ComparisonReport compare_calibrations(const ItemParams& benchmark, std::span<const LabelledParams> others,
                                      bool anchor) {
    ComparisonReport report;
    for (const auto& [label, params] : others) {
        std::vector<double> bench, other;
        for (const auto& b : benchmark.items) {
            if (b.status != ItemStatus::ok) continue;
            const ItemEstimate* o = params.find(b.item_id);
            if (!o || o->status != ItemStatus::ok) continue;
            bench.push_back(b.beta);
            other.push_back(o->beta);
        }
        if (bench.size() < 3)
            throw InvalidArgument("'" + label + "' shares only " + std::to_string(bench.size()) +
                                  " ok items with the benchmark (need 3)");
        ComparisonRow row;
        row.label = label;
        row.n_items = static_cast<int>(bench.size());
        row.pearson = pearson(other, bench);
        row.spearman = spearman(other, bench);
        row.rmse_raw = rmse(other, bench);
        const double shift = anchor_shift(params, benchmark);
        std::vector<double> shifted(other);
        for (auto& v : shifted) v += shift;
        row.rmse_anchored = rmse(shifted, bench);
        row.anchored = anchor;
        row.rmse = anchor ? row.rmse_anchored : row.rmse_raw;
        report.rows.push_back(std::move(row));
    }
    return report;
}

}  // namespace irtforge
