#include "irtforge/augment.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>

#include "irtforge/error.hpp"
#include "irtforge/random.hpp"

namespace irtforge {

const MatchPair* MatchPlan::find(const std::string& human_id) const {
    for (const auto& p : pairs)
        if (p.human_id == human_id) return &p;
    return nullptr;
}

namespace {

void require_same_items(const ResponseMatrix& a, const ResponseMatrix& b) {
    std::set<std::string> sa(a.item_ids().begin(), a.item_ids().end());
    std::set<std::string> sb(b.item_ids().begin(), b.item_ids().end());
    if (sa != sb) throw InvalidArgument("human and synthetic pools do not share the same item set");
}

}  // namespace

MatchPlan match_centroids(const ResponseMatrix& humans, const ResponseMatrix& synthetic) {
    require_same_items(humans, synthetic);
    if (synthetic.num_respondents() == 0) throw InvalidArgument("synthetic pool is empty");
    const ResponseMatrix syn = synthetic.with_columns(humans.item_ids());
    const std::size_t n_items = humans.num_items();

    MatchPlan plan;
    plan.pairs.reserve(humans.num_respondents());
    for (std::size_t h = 0; h < humans.num_respondents(); ++h) {
        const auto hrow = humans.row(h);
        std::optional<std::size_t> best;
        std::size_t best_diff = 0, best_overlap = 1;
        for (std::size_t s = 0; s < syn.num_respondents(); ++s) {
            const auto srow = syn.row(s);
            std::size_t overlap = 0, diff = 0;
            for (std::size_t j = 0; j < n_items; ++j) {
                if (hrow[j] == kMissing || srow[j] == kMissing) continue;
                ++overlap;
                diff += hrow[j] != srow[j];
            }
            if (overlap == 0)
                throw InvalidArgument("human '" + humans.respondent(h).respondent_id + "' and synthetic '" +
                                      syn.respondent(s).respondent_id + "' share no observed item");
            // diff/overlap compared exactly by cross-multiplication
            const std::size_t lhs = diff * best_overlap, rhs = best_diff * overlap;
            const bool better = !best || lhs < rhs ||
                                (lhs == rhs && syn.respondent(s).respondent_id < syn.respondent(*best).respondent_id);
            if (better) {
                best = s;
                best_diff = diff;
                best_overlap = overlap;
            }
        }
        plan.pairs.push_back({humans.respondent(h).respondent_id, syn.respondent(*best).respondent_id,
                              static_cast<double>(best_diff) / static_cast<double>(best_overlap),
                              static_cast<int>(best_overlap)});
    }
    return plan;
}

MixingProportions normalize_proportions(const std::map<std::string, double>& weights) {
    double total = 0.0;
    for (const auto& [source, w] : weights) {
        if (!std::isfinite(w) || w < 0.0) throw InvalidArgument("proportion for '" + source + "' must be >= 0");
        total += w;
    }
    if (!(total > 0.0)) throw InvalidArgument("proportions sum to zero");
    MixingProportions out;
    for (const auto& [source, w] : weights) out.fractions.push_back({source, w / total});
    return out;
}

MixingProportions learn_proportions(const MatchPlan& plan, const ResponseMatrix& synthetic) {
    if (plan.pairs.empty()) throw InvalidArgument("match plan is empty");
    std::map<std::string, double> counts;
    for (const auto& p : plan.pairs) {
        const auto i = synthetic.respondent_index(p.synthetic_id);
        if (!i) throw InvalidArgument("matched synthetic respondent '" + p.synthetic_id + "' not in synthetic pool");
        counts[synthetic.respondent(*i).source] += 1.0;
    }
    return normalize_proportions(counts);
}

std::map<std::string, std::size_t> apportion(const MixingProportions& proportions, std::size_t n) {
    struct Seat {
        std::string source;
        double remainder;
    };
    std::map<std::string, std::size_t> counts;
    std::vector<Seat> seats;
    std::size_t assigned = 0;
    for (const auto& f : proportions.fractions) {
        const double quota = static_cast<double>(n) * f.fraction;
        const double whole = std::floor(quota + 1e-9);
        counts[f.source] = static_cast<std::size_t>(whole);
        assigned += static_cast<std::size_t>(whole);
        seats.push_back({f.source, std::max(0.0, quota - whole)});
    }
    // Remainders within 1e-9 count as equal so rounding noise from
    // normalization cannot break a tie.
    std::stable_sort(seats.begin(), seats.end(), [](const Seat& a, const Seat& b) {
        if (std::abs(a.remainder - b.remainder) > 1e-9) return a.remainder > b.remainder;
        return a.source < b.source;
    });
    for (std::size_t s = 0; assigned < n && s < seats.size(); ++s, ++assigned) ++counts[seats[s].source];
    return counts;
}

ResponseMatrix resample_pool(const ResponseMatrix& synthetic, const MixingProportions& proportions, int n,
                             std::uint64_t seed) {
    if (n <= 0) throw InvalidArgument("resample size must be positive");
    std::map<std::string, std::vector<std::size_t>> by_source;
    for (std::size_t i = 0; i < synthetic.num_respondents(); ++i)
        by_source[synthetic.respondent(i).source].push_back(i);
    for (const auto& f : proportions.fractions)
        if (f.fraction > 0.0 && !by_source.count(f.source))
            throw InvalidArgument("source '" + f.source + "' absent from synthetic pool");

    const auto counts = apportion(proportions, static_cast<std::size_t>(n));
    Rng rng(seed);
    ResponseMatrix out(synthetic.item_ids());
    std::size_t k = 0;
    for (const auto& [source, count] : counts) {
        if (count == 0) continue;
        const auto& rows = by_source.at(source);
        for (std::size_t c = 0; c < count; ++c, ++k) {
            const std::size_t i = rows[rng.index(rows.size())];
            Respondent r = synthetic.respondent(i);
            r.respondent_id += "#r" + std::to_string(k + 1);
            out.add_row(std::move(r), synthetic.row(i));
        }
    }
    return out;
}

const char* to_string(Condition c) noexcept {
    switch (c) {
        case Condition::benchmark: return "benchmark";
        case Condition::exp1: return "exp1";
        case Condition::exp2: return "exp2";
        case Condition::exp3: return "exp3";
        case Condition::exp4: return "exp4";
    }
    return "?";
}

const char* display_label(Condition c) noexcept {
    switch (c) {
        case Condition::benchmark: return "Benchmark";
        case Condition::exp1: return "Experiment 1";
        case Condition::exp2: return "Experiment 2";
        case Condition::exp3: return "Experiment 3";
        case Condition::exp4: return "Experiment 4";
    }
    return "?";
}

Condition condition_from_string(const std::string& s) {
    for (Condition c : {Condition::benchmark, Condition::exp1, Condition::exp2, Condition::exp3, Condition::exp4})
        if (s == to_string(c)) return c;
    throw InvalidArgument("unknown condition '" + s + "'");
}

std::vector<std::string> default_half_sample(const ResponseMatrix& humans) {
    std::vector<std::string> ids;
    for (const auto& r : humans.respondents()) ids.push_back(r.respondent_id);
    std::sort(ids.begin(), ids.end());
    ids.resize((ids.size() + 1) / 2);
    return ids;
}

namespace {

void append_rows(ResponseMatrix& dst, const ResponseMatrix& src) {
    const ResponseMatrix aligned = src.with_columns(dst.item_ids());
    for (std::size_t i = 0; i < aligned.num_respondents(); ++i) dst.add_row(aligned.respondent(i), aligned.row(i));
}

ResponseMatrix half_sample_matrix(const PoolInputs& in) {
    const auto ids = in.half_sample.empty() ? default_half_sample(in.humans) : in.half_sample;
    std::vector<std::size_t> rows;
    for (const auto& id : ids) {
        const auto i = in.humans.respondent_index(id);
        if (!i) throw InvalidArgument("half-sample id '" + id + "' is not a human respondent");
        rows.push_back(*i);
    }
    std::sort(rows.begin(), rows.end());
    if (std::adjacent_find(rows.begin(), rows.end()) != rows.end())
        throw InvalidArgument("half-sample id list contains duplicates");
    return in.humans.select_rows(rows);
}

}  // namespace

ExperimentPool build_experiment_pool(Condition condition, const PoolInputs& in, std::uint64_t seed) {
    if (in.humans.num_respondents() == 0) throw InvalidArgument("human pool is empty");
    require_same_items(in.humans, in.synthetic);
    ExperimentPool pool;
    pool.condition = condition;
    pool.seed = seed;

    auto need_proportions = [&]() -> const MixingProportions& {
        if (!in.proportions) throw InvalidArgument(std::string(to_string(condition)) + " requires mixing proportions");
        return *in.proportions;
    };

    switch (condition) {
        case Condition::benchmark:
            pool.matrix = in.humans;
            break;
        case Condition::exp1:
            pool.matrix = half_sample_matrix(in);
            break;
        case Condition::exp2: {
            if (!in.plan) throw InvalidArgument("exp2 requires a match plan");
            pool.matrix = half_sample_matrix(in);
            const ResponseMatrix half = pool.matrix;
            ResponseMatrix matched(in.synthetic.item_ids());
            for (std::size_t h = 0; h < half.num_respondents(); ++h) {
                const auto& hid = half.respondent(h).respondent_id;
                const MatchPair* pair = in.plan->find(hid);
                if (!pair) throw InvalidArgument("match plan has no entry for human '" + hid + "'");
                const auto s = in.synthetic.respondent_index(pair->synthetic_id);
                if (!s) throw InvalidArgument("matched synthetic '" + pair->synthetic_id + "' not in synthetic pool");
                Respondent r = in.synthetic.respondent(*s);
                r.respondent_id += "#m" + std::to_string(h + 1);
                matched.add_row(std::move(r), in.synthetic.row(*s));
            }
            append_rows(pool.matrix, matched);
            break;
        }
        case Condition::exp3: {
            const auto& props = need_proportions();
            pool.matrix = half_sample_matrix(in);
            const int n = static_cast<int>(pool.matrix.num_respondents());
            append_rows(pool.matrix, resample_pool(in.synthetic, props, n, seed));
            break;
        }
        case Condition::exp4: {
            const auto& props = need_proportions();
            pool.matrix = ResponseMatrix(in.humans.item_ids());
            append_rows(pool.matrix, resample_pool(in.synthetic, props,
                                                   static_cast<int>(in.humans.num_respondents()), seed));
            break;
        }
    }
    pool.composition = pool.matrix.source_counts();
    return pool;
}

}  // namespace irtforge
