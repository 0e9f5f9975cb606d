#include "irtforge/fpc.hpp"

#include <algorithm>
#include <cmath>

#include "irtforge/error.hpp"
#include "irtforge/parallel.hpp"

namespace irtforge {

LatentDist LatentDist::from_grid(QuadratureGrid grid) {
    LatentDist d;
    double mean = 0.0;
    for (std::size_t k = 0; k < grid.size(); ++k) mean += grid.weights[k] * grid.nodes[k];
    double m2 = 0.0, m4 = 0.0;
    for (std::size_t k = 0; k < grid.size(); ++k) {
        const double dev = grid.nodes[k] - mean;
        m2 += grid.weights[k] * dev * dev;
        m4 += grid.weights[k] * dev * dev * dev * dev;
    }
    d.mean = mean;
    d.sd = std::sqrt(m2);
    d.kurtosis = m2 > 0.0 ? m4 / (m2 * m2) : 0.0;
    d.grid = std::move(grid);
    return d;
}

ItemParams fixed_params_from_bank(const ItemBank& bank) {
    const auto betas = bank.fixed_difficulties();
    ItemParams params;
    for (std::size_t j = 0; j < bank.size(); ++j) {
        if (!std::isfinite(betas[j]))
            throw InvalidArgument("fixed_difficulty of '" + bank.items()[j].item_id + "' is not finite");
        params.items.push_back({bank.items()[j].item_id, betas[j], std::nullopt, ItemStatus::ok});
    }
    return params;
}

namespace {

// Difficulties aligned with the matrix columns.
std::vector<double> aligned_betas(const ResponseMatrix& matrix, const ItemParams& fixed) {
    std::vector<double> betas;
    betas.reserve(matrix.num_items());
    for (const auto& id : matrix.item_ids()) {
        const ItemEstimate* est = fixed.find(id);
        if (!est) throw InvalidArgument("item '" + id + "' has no fixed parameter");
        if (est->status != ItemStatus::ok)
            throw InvalidArgument("item '" + id + "' is not usable as a fixed parameter (status " +
                                  to_string(est->status) + ")");
        betas.push_back(est->beta);
    }
    return betas;
}

// Row-wise likelihood over the grid, scaled by the row maximum:
// L_ik = exp(ll_ik - peak_i).
struct LikelihoodTable {
    std::vector<std::size_t> rows;
    std::vector<double> scaled;  // [row][node]
    std::vector<double> peak;
};

LikelihoodTable likelihood_table(const ResponseMatrix& matrix, const std::vector<double>& betas,
                                 const QuadratureGrid& grid, bool require_all) {
    LikelihoodTable t;
    const std::size_t n_nodes = grid.size();
    for (std::size_t i = 0; i < matrix.num_respondents(); ++i) {
        if (matrix.observed_in_row(i) == 0) {
            if (require_all)
                throw InvalidArgument("respondent '" + matrix.respondent(i).respondent_id + "' has no observed items");
            continue;
        }
        t.rows.push_back(i);
    }
    t.scaled.resize(t.rows.size() * n_nodes);
    t.peak.resize(t.rows.size());
    for (std::size_t r = 0; r < t.rows.size(); ++r) {
        double* out = t.scaled.data() + r * n_nodes;
        const auto row = matrix.row(t.rows[r]);
        for (std::size_t k = 0; k < n_nodes; ++k) out[k] = response_loglik(row, Theta{grid.nodes[k]}, betas);
        const double peak = *std::max_element(out, out + n_nodes);
        for (std::size_t k = 0; k < n_nodes; ++k) out[k] = std::exp(out[k] - peak);
        t.peak[r] = peak;
    }
    return t;
}

struct WeightUpdate {
    std::vector<double> weights;
    double loglik = 0.0;
};

// One EM weight update: returns mean posterior over respondents and the
// marginal log-likelihood under the incoming weights.
WeightUpdate update_weights(const LikelihoodTable& t, const std::vector<double>& weights, unsigned threads) {
    const std::size_t n_nodes = weights.size();
    const std::size_t n_rows = t.rows.size();
    const std::size_t n_chunks = chunk_count(n_rows);
    std::vector<std::vector<double>> partial(n_chunks);
    std::vector<double> partial_ll(n_chunks, 0.0);
    for_each_chunk(n_chunks, threads, [&](std::size_t c) {
        auto& acc = partial[c];
        acc.assign(n_nodes, 0.0);
        std::vector<double> post(n_nodes);
        const std::size_t end = std::min(n_rows, (c + 1) * kChunkSize);
        for (std::size_t r = c * kChunkSize; r < end; ++r) {
            const double* lik = t.scaled.data() + r * n_nodes;
            double total = 0.0;
            for (std::size_t k = 0; k < n_nodes; ++k) {
                post[k] = weights[k] * lik[k];
                total += post[k];
            }
            partial_ll[c] += t.peak[r] + std::log(total);
            const double inv = 1.0 / total;
            for (std::size_t k = 0; k < n_nodes; ++k) acc[k] += post[k] * inv;
        }
    });
    WeightUpdate out;
    out.weights.assign(n_nodes, 0.0);
    for (std::size_t c = 0; c < n_chunks; ++c) {
        out.loglik += partial_ll[c];
        for (std::size_t k = 0; k < n_nodes; ++k) out.weights[k] += partial[c][k];
    }
    double sum = 0.0;
    for (double w : out.weights) sum += w;
    for (auto& w : out.weights) w /= sum;
    return out;
}

}  // namespace

LatentEstimate estimate_latent_mwu_mem(const ResponseMatrix& matrix, const ItemParams& fixed,
                                       const QuadratureGrid& grid, const MwuMemOptions& options) {
    if (options.inner_updates < 1) throw InvalidArgument("inner_updates must be >= 1");
    if (options.max_cycles < 1) throw InvalidArgument("max_cycles must be >= 1");
    if (!(options.tol > 0.0)) throw InvalidArgument("tol must be positive");
    if (matrix.num_items() == 0 || matrix.num_respondents() == 0) throw InvalidArgument("empty response matrix");
    const auto betas = aligned_betas(matrix, fixed);
    const LikelihoodTable table = likelihood_table(matrix, betas, grid, false);
    if (table.rows.empty()) throw InvalidArgument("empty effective matrix: no respondent has an observed item");

    LatentEstimate est;
    std::vector<double> weights = grid.weights;
    for (int cycle = 1; cycle <= options.max_cycles; ++cycle) {
        const std::vector<double> start = weights;
        for (int u = 0; u < options.inner_updates; ++u) {
            WeightUpdate upd = update_weights(table, weights, options.threads);
            est.loglik_trace.push_back(upd.loglik);
            weights = std::move(upd.weights);
            double sum = 0.0;
            for (double w : weights) sum += w;
            est.weight_sums.push_back(sum);
        }
        double change = 0.0;
        for (std::size_t k = 0; k < weights.size(); ++k) change = std::max(change, std::abs(weights[k] - start[k]));
        est.cycles = cycle;
        est.max_weight_change = change;
        if (change < options.tol) {
            est.converged = true;
            break;
        }
    }
    est.latent = LatentDist::from_grid(QuadratureGrid{grid.nodes, weights});
    return est;
}

AbilityEstimates eap_scores(const ResponseMatrix& matrix, const ItemParams& fixed, const LatentDist& latent) {
    const auto betas = aligned_betas(matrix, fixed);
    const auto& grid = latent.grid;
    const LikelihoodTable table = likelihood_table(matrix, betas, grid, true);
    const std::size_t n_nodes = grid.size();
    AbilityEstimates out;
    out.reserve(table.rows.size());
    for (std::size_t r = 0; r < table.rows.size(); ++r) {
        const double* lik = table.scaled.data() + r * n_nodes;
        double total = 0.0, m1 = 0.0;
        for (std::size_t k = 0; k < n_nodes; ++k) {
            const double p = grid.weights[k] * lik[k];
            total += p;
            m1 += p * grid.nodes[k];
        }
        const double mean = m1 / total;
        double var = 0.0;
        for (std::size_t k = 0; k < n_nodes; ++k) {
            const double dev = grid.nodes[k] - mean;
            var += grid.weights[k] * lik[k] * dev * dev;
        }
        var /= total;
        const std::size_t i = table.rows[r];
        AbilityEstimate a;
        a.respondent_id = matrix.respondent(i).respondent_id;
        a.source = matrix.respondent(i).source;
        a.theta_hat = mean;
        a.se = std::sqrt(var);
        a.n_observed = static_cast<int>(matrix.observed_in_row(i));
        out.push_back(std::move(a));
    }
    return out;
}

AbilityEstimates person_fit(const ResponseMatrix& matrix, const ItemParams& fixed, AbilityEstimates abilities) {
    const auto betas = aligned_betas(matrix, fixed);
    for (auto& a : abilities) {
        const auto i = matrix.respondent_index(a.respondent_id);
        if (!i) throw InvalidArgument("respondent '" + a.respondent_id + "' not found in response matrix");
        const auto row = matrix.row(*i);
        double z2 = 0.0, sq_resid = 0.0, variance = 0.0;
        int n = 0;
        for (std::size_t j = 0; j < row.size(); ++j) {
            if (row[j] == kMissing) continue;
            const double p = rasch_prob(Theta{a.theta_hat}, Beta{betas[j]});
            const double v = p * (1.0 - p);
            const double resid = static_cast<double>(row[j]) - p;
            z2 += resid * resid / v;
            sq_resid += resid * resid;
            variance += v;
            ++n;
        }
        if (n == 0) throw InvalidArgument("respondent '" + a.respondent_id + "' has no observed items");
        a.outfit = z2 / n;
        a.infit = sq_resid / variance;
    }
    return abilities;
}

}  // namespace irtforge
