#include "irtforge/calibrate.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "irtforge/error.hpp"
#include "irtforge/parallel.hpp"

namespace irtforge {

QuadratureGrid make_grid(int count, double span) {
    if (count < 11 || count % 2 == 0) throw InvalidArgument("grid count must be odd and >= 11");
    if (!(span > 0.0) || !std::isfinite(span)) throw InvalidArgument("grid span must be positive");
    QuadratureGrid grid;
    grid.nodes.resize(static_cast<std::size_t>(count));
    grid.weights.resize(static_cast<std::size_t>(count));
    const int half = count / 2;
    const double step = span / half;
    for (int k = 0; k < count; ++k) {
        // Built from the centre outwards so the node set is exactly symmetric.
        grid.nodes[static_cast<std::size_t>(k)] = (k - half) * step;
    }
    for (int k = 0; k < count; ++k) {
        const double x = grid.nodes[static_cast<std::size_t>(k)];
        grid.weights[static_cast<std::size_t>(k)] = std::exp(-0.5 * x * x);
    }
    // Sum symmetric pairs so w[k] == w[count-1-k] survives normalization.
    double total = grid.weights[static_cast<std::size_t>(half)];
    for (int k = 0; k < half; ++k) total += 2.0 * grid.weights[static_cast<std::size_t>(k)];
    for (auto& w : grid.weights) w /= total;
    return grid;
}

const char* to_string(ItemStatus status) noexcept {
    switch (status) {
        case ItemStatus::ok: return "ok";
        case ItemStatus::extreme_all_correct: return "extreme_all_correct";
        case ItemStatus::extreme_all_incorrect: return "extreme_all_incorrect";
        case ItemStatus::excluded: return "excluded";
    }
    return "?";
}

ItemStatus item_status_from_string(const std::string& s) {
    if (s == "ok") return ItemStatus::ok;
    if (s == "extreme_all_correct") return ItemStatus::extreme_all_correct;
    if (s == "extreme_all_incorrect") return ItemStatus::extreme_all_incorrect;
    if (s == "excluded") return ItemStatus::excluded;
    throw InvalidArgument("unknown item status '" + s + "'");
}

const ItemEstimate* ItemParams::find(const std::string& item_id) const {
    for (const auto& it : items)
        if (it.item_id == item_id) return &it;
    return nullptr;
}

std::size_t ItemParams::count_ok() const {
    return static_cast<std::size_t>(
        std::count_if(items.begin(), items.end(), [](const ItemEstimate& e) { return e.status == ItemStatus::ok; }));
}

namespace {

struct EStepTotals {
    // Expected correct / attempted counts, [active item][node].
    std::vector<double> correct;
    std::vector<double> attempted;
    double loglik = 0.0;
};

class MmlEm {
public:
    MmlEm(const ResponseMatrix& matrix, const QuadratureGrid& grid, std::vector<std::size_t> active, unsigned threads)
        : matrix_(matrix), grid_(grid), active_(std::move(active)), threads_(threads) {
        log_weights_.reserve(grid_.size());
        for (double w : grid_.weights)
            log_weights_.push_back(w > 0.0 ? std::log(w) : -std::numeric_limits<double>::infinity());
        for (std::size_t i = 0; i < matrix_.num_respondents(); ++i) {
            const auto row = matrix_.row(i);
            if (std::any_of(active_.begin(), active_.end(), [&](std::size_t j) { return row[j] != kMissing; }))
                rows_.push_back(i);
        }
    }

    // betas indexed by position in `active`.
    EStepTotals estep(const std::vector<double>& betas) const {
        const std::size_t n_items = active_.size();
        const std::size_t n_nodes = grid_.size();
        std::vector<double> log_p(n_items * n_nodes), log_q(n_items * n_nodes);
        for (std::size_t a = 0; a < n_items; ++a)
            for (std::size_t k = 0; k < n_nodes; ++k) {
                const double d = grid_.nodes[k] - betas[a];
                log_p[a * n_nodes + k] = log_logistic(d);
                log_q[a * n_nodes + k] = log_logistic(-d);
            }

        const std::size_t n_chunks = chunk_count(rows_.size());
        std::vector<EStepTotals> partial(n_chunks);
        for_each_chunk(n_chunks, threads_, [&](std::size_t c) {
            EStepTotals& acc = partial[c];
            acc.correct.assign(n_items * n_nodes, 0.0);
            acc.attempted.assign(n_items * n_nodes, 0.0);
            std::vector<double> post(n_nodes);
            const std::size_t end = std::min(rows_.size(), (c + 1) * kChunkSize);
            for (std::size_t r = c * kChunkSize; r < end; ++r) {
                const auto row = matrix_.row(rows_[r]);
                for (std::size_t k = 0; k < n_nodes; ++k) post[k] = log_weights_[k];
                for (std::size_t a = 0; a < n_items; ++a) {
                    const Score x = row[active_[a]];
                    if (x == kMissing) continue;
                    const double* table = (x == kCorrect ? log_p.data() : log_q.data()) + a * n_nodes;
                    for (std::size_t k = 0; k < n_nodes; ++k) post[k] += table[k];
                }
                const double peak = *std::max_element(post.begin(), post.end());
                double total = 0.0;
                for (auto& v : post) {
                    v = std::exp(v - peak);
                    total += v;
                }
                acc.loglik += peak + std::log(total);
                for (auto& v : post) v /= total;
                for (std::size_t a = 0; a < n_items; ++a) {
                    const Score x = row[active_[a]];
                    if (x == kMissing) continue;
                    double* att = acc.attempted.data() + a * n_nodes;
                    for (std::size_t k = 0; k < n_nodes; ++k) att[k] += post[k];
                    if (x == kCorrect) {
                        double* cor = acc.correct.data() + a * n_nodes;
                        for (std::size_t k = 0; k < n_nodes; ++k) cor[k] += post[k];
                    }
                }
            }
        });

        EStepTotals totals;
        totals.correct.assign(n_items * n_nodes, 0.0);
        totals.attempted.assign(n_items * n_nodes, 0.0);
        for (const auto& p : partial) {
            totals.loglik += p.loglik;
            for (std::size_t m = 0; m < totals.correct.size(); ++m) {
                totals.correct[m] += p.correct[m];
                totals.attempted[m] += p.attempted[m];
            }
        }
        return totals;
    }

    // Maximizes sum_k r_k ln P + (n_k - r_k) ln(1-P) over beta by damped
    // Newton-Raphson on the score equation.
    double mstep_item(const EStepTotals& totals, std::size_t a, double beta) const {
        const std::size_t n_nodes = grid_.size();
        const double* cor = totals.correct.data() + a * n_nodes;
        const double* att = totals.attempted.data() + a * n_nodes;
        for (int iter = 0; iter < 100; ++iter) {
            double score = 0.0, info = 0.0;
            for (std::size_t k = 0; k < n_nodes; ++k) {
                const double p = logistic(grid_.nodes[k] - beta);
                score += cor[k] - att[k] * p;
                info += att[k] * p * (1.0 - p);
            }
            if (!(info > 0.0)) break;
            const double step = std::clamp(-score / info, -1.0, 1.0);
            const double next = std::clamp(beta + step, -kClampBound, kClampBound);
            const bool done = std::abs(next - beta) < 1e-12;
            beta = next;
            if (done) break;
        }
        return beta;
    }

    double standard_error(const EStepTotals& totals, std::size_t a, double beta) const {
        const std::size_t n_nodes = grid_.size();
        const double* att = totals.attempted.data() + a * n_nodes;
        double info = 0.0;
        for (std::size_t k = 0; k < n_nodes; ++k) {
            const double p = logistic(grid_.nodes[k] - beta);
            info += att[k] * p * (1.0 - p);
        }
        return 1.0 / std::sqrt(info);
    }

private:
    const ResponseMatrix& matrix_;
    const QuadratureGrid& grid_;
    std::vector<std::size_t> active_;
    unsigned threads_;
    std::vector<double> log_weights_;
    std::vector<std::size_t> rows_;
};

}  // namespace

Calibration calibrate_mml(const ResponseMatrix& matrix, const QuadratureGrid& grid, const CalibrationOptions& options) {
    if (grid.size() == 0 || grid.nodes.size() != grid.weights.size()) throw InvalidArgument("malformed quadrature grid");
    if (!(options.tol > 0.0)) throw InvalidArgument("tol must be positive");
    if (options.max_cycles < 1) throw InvalidArgument("max_cycles must be >= 1");

    const std::size_t n_items = matrix.num_items();
    Calibration result;
    result.params.items.resize(n_items);

    std::vector<std::size_t> active;
    std::vector<double> start;
    for (std::size_t j = 0; j < n_items; ++j) {
        std::size_t attempted = 0, correct = 0;
        for (std::size_t i = 0; i < matrix.num_respondents(); ++i) {
            const Score x = matrix.at(i, j);
            if (x == kMissing) continue;
            ++attempted;
            correct += static_cast<std::size_t>(x);
        }
        auto& est = result.params.items[j];
        est.item_id = matrix.item_ids()[j];
        if (attempted == 0) {
            est.status = ItemStatus::excluded;
        } else if (correct == attempted) {
            est.status = ItemStatus::extreme_all_correct;
            est.beta = -kClampBound;
        } else if (correct == 0) {
            est.status = ItemStatus::extreme_all_incorrect;
            est.beta = kClampBound;
        } else {
            active.push_back(j);
        }
    }
    if (active.empty()) throw InvalidArgument("no calibratable items (every item is extreme or unobserved)");

    // Likelihood sums run in item_id order so a column permutation of the
    // input reproduces the same floating-point result.
    std::sort(active.begin(), active.end(),
              [&](std::size_t a, std::size_t b) { return matrix.item_ids()[a] < matrix.item_ids()[b]; });
    std::vector<double> betas;
    betas.reserve(active.size());
    for (std::size_t j : active) {
        double attempted = 0, correct = 0;
        for (std::size_t i = 0; i < matrix.num_respondents(); ++i) {
            const Score x = matrix.at(i, j);
            if (x == kMissing) continue;
            attempted += 1;
            correct += x;
        }
        betas.push_back(std::clamp(std::log((attempted - correct) / correct), -kClampBound, kClampBound));
    }

    MmlEm em(matrix, grid, active, options.threads);
    auto& conv = result.convergence;
    for (int cycle = 1; cycle <= options.max_cycles; ++cycle) {
        const EStepTotals totals = em.estep(betas);
        conv.loglik_trace.push_back(totals.loglik);
        double max_change = 0.0;
        for (std::size_t a = 0; a < active.size(); ++a) {
            const double next = em.mstep_item(totals, a, betas[a]);
            max_change = std::max(max_change, std::abs(next - betas[a]));
            betas[a] = next;
        }
        conv.cycles = cycle;
        conv.max_param_change = max_change;
        if (max_change < options.tol) {
            conv.converged = true;
            break;
        }
    }

    const EStepTotals final_totals = em.estep(betas);
    for (std::size_t a = 0; a < active.size(); ++a) {
        auto& est = result.params.items[active[a]];
        est.status = ItemStatus::ok;
        est.beta = betas[a];
        est.se = em.standard_error(final_totals, a, betas[a]);
    }
    return result;
}

double anchor_shift(const ItemParams& params, const ItemParams& reference) {
    double sum_ref = 0.0, sum_par = 0.0;
    std::size_t shared = 0;
    for (const auto& p : params.items) {
        if (p.status != ItemStatus::ok) continue;
        const ItemEstimate* r = reference.find(p.item_id);
        if (!r || r->status != ItemStatus::ok) continue;
        sum_ref += r->beta;
        sum_par += p.beta;
        ++shared;
    }
    if (shared < 2) throw InvalidArgument("anchoring needs at least 2 shared ok items, found " + std::to_string(shared));
    return sum_ref / static_cast<double>(shared) - sum_par / static_cast<double>(shared);
}

ItemParams anchor_to(const ItemParams& params, const ItemParams& reference) {
    const double shift = anchor_shift(params, reference);
    ItemParams out = params;
    // Extreme items stay pinned at the clamp bound.
    for (auto& it : out.items)
        if (it.status == ItemStatus::ok) it.beta += shift;
    return out;
}

}  // namespace irtforge
