#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>
#include <tuple>
#include <vector>

#include <fmt/format.h>

#include "irtforge/augment.hpp"
#include "irtforge/error.hpp"
#include "irtforge/random.hpp"

using namespace irtforge;

namespace {

ResponseMatrix random_pool(const std::string& prefix, int n, int n_items, double missing, std::uint64_t seed,
                           const std::vector<std::string>& sources) {
    Rng rng(seed);
    std::vector<std::string> ids;
    for (int j = 0; j < n_items; ++j) ids.push_back(fmt::format("q{}", j + 1));
    ResponseMatrix m(ids);
    for (int i = 0; i < n; ++i) {
        std::vector<Score> row(static_cast<std::size_t>(n_items));
        for (auto& c : row) c = rng.uniform() < missing ? kMissing : static_cast<Score>(rng.bernoulli(0.5));
        row[0] = static_cast<Score>(rng.bernoulli(0.5));  // keeps every pair jointly observed
        m.add_row({fmt::format("{}{:02d}", prefix, i + 1), sources[static_cast<std::size_t>(i) % sources.size()]}, row);
    }
    return m;
}

// All-pairs search with floating distances; equal distances resolved by
// the smallest synthetic id.
MatchPlan brute_force(const ResponseMatrix& humans, const ResponseMatrix& syn) {
    MatchPlan plan;
    for (std::size_t h = 0; h < humans.num_respondents(); ++h) {
        std::vector<std::tuple<double, std::string, int>> all;
        for (std::size_t s = 0; s < syn.num_respondents(); ++s) {
            int overlap = 0, diff = 0;
            for (std::size_t j = 0; j < humans.num_items(); ++j) {
                const auto sj = *syn.item_index(humans.item_ids()[j]);
                const Score a = humans.at(h, j), b = syn.at(s, sj);
                if (a == kMissing || b == kMissing) continue;
                ++overlap;
                diff += a != b;
            }
            all.emplace_back(static_cast<double>(diff) / overlap, syn.respondent(s).respondent_id, overlap);
        }
        double best = 2.0;
        for (const auto& t : all) best = std::min(best, std::get<0>(t));
        std::vector<std::tuple<double, std::string, int>> tied;
        for (const auto& t : all)
            if (std::abs(std::get<0>(t) - best) < 1e-12) tied.push_back(t);
        std::sort(tied.begin(), tied.end(), [](const auto& a, const auto& b) { return std::get<1>(a) < std::get<1>(b); });
        plan.pairs.push_back({humans.respondent(h).respondent_id, std::get<1>(tied[0]), std::get<0>(tied[0]),
                              std::get<2>(tied[0])});
    }
    return plan;
}

MixingProportions props(std::map<std::string, double> w) { return normalize_proportions(w); }

}  // namespace

TEST_CASE("identical respondent matches at distance zero") {
    auto syn = random_pool("s", 5, 20, 0.0, 1, {"a"});
    ResponseMatrix humans(syn.item_ids());
    humans.add_row({"h1", "human"}, syn.row(2));
    const auto plan = match_centroids(humans, syn);
    REQUIRE(plan.pairs.size() == 1);
    CHECK(plan.pairs[0] == MatchPair{"h1", "s03", 0.0, 20});
}

TEST_CASE("equal distances go to the smallest id") {
    std::vector<std::string> items;
    for (int j = 0; j < 10; ++j) items.push_back(fmt::format("q{}", j));
    std::vector<Score> base(10, kCorrect);
    std::vector<Score> one_off = base, other_off = base;
    one_off[3] = kIncorrect;
    other_off[7] = kIncorrect;
    ResponseMatrix syn(items);
    syn.add_row({"s10", "b"}, one_off);
    syn.add_row({"s01", "a"}, other_off);
    ResponseMatrix humans(items);
    humans.add_row({"h", "human"}, base);
    const auto plan = match_centroids(humans, syn);
    CHECK(plan.pairs[0].synthetic_id == "s01");
    CHECK(plan.pairs[0].distance == doctest::Approx(0.10));
}

TEST_CASE("hand-enumerable 2 x 3 case") {
    ResponseMatrix humans({"a", "b", "c", "d"});
    ResponseMatrix syn({"a", "b", "c", "d"});
    const std::vector<Score> h1{1, 1, 0, 0}, h2{0, kMissing, 1, 1};
    humans.add_row({"h1", "human"}, h1);
    humans.add_row({"h2", "human"}, h2);
    const std::vector<Score> s1{1, 0, 0, 0}, s2{0, 1, 1, kMissing}, s3{1, 1, 1, 1};
    syn.add_row({"s1", "x"}, s1);
    syn.add_row({"s2", "y"}, s2);
    syn.add_row({"s3", "z"}, s3);
    // h1: s1 1/4, s2 2/3, s3 2/4 -> s1. h2: s1 3/3, s2 0/2, s3 1/3 -> s2.
    const auto plan = match_centroids(humans, syn);
    CHECK(plan.pairs[0] == MatchPair{"h1", "s1", 0.25, 4});
    CHECK(plan.pairs[1] == MatchPair{"h2", "s2", 0.0, 2});
    CHECK(plan == brute_force(humans, syn));
}

TEST_CASE("matching equals exhaustive search and ignores row order") {
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
        const auto humans = random_pool("h", 10, 6, 0.3, seed, {"human"});
        const auto syn = random_pool("s", 30, 6, 0.3, seed + 100, {"a", "b", "c"});
        const auto plan = match_centroids(humans, syn);
        CHECK(plan == brute_force(humans, syn));

        std::vector<std::size_t> order(syn.num_respondents());
        std::iota(order.begin(), order.end(), 0);
        Rng rng(seed);
        for (std::size_t i = order.size() - 1; i > 0; --i) std::swap(order[i], order[rng.index(i + 1)]);
        auto shuffled = syn.select_rows(order);
        std::vector<std::string> cols = syn.item_ids();
        std::reverse(cols.begin(), cols.end());
        shuffled = shuffled.with_columns(cols);
        CHECK(match_centroids(humans, shuffled) == plan);
    }
}

TEST_CASE("matching errors") {
    ResponseMatrix humans({"a", "b"});
    ResponseMatrix syn({"a", "b"});
    const std::vector<Score> h{1, kMissing}, s{kMissing, 0};
    humans.add_row({"h", "human"}, h);
    syn.add_row({"s", "x"}, s);
    CHECK_THROWS_AS(match_centroids(humans, syn), InvalidArgument);
    ResponseMatrix other({"a", "c"});
    CHECK_THROWS_AS(match_centroids(humans, other), InvalidArgument);
}

TEST_CASE("learn_proportions") {
    ResponseMatrix syn({"q"});
    const std::vector<Score> r{1};
    syn.add_row({"a1", "A"}, r);
    syn.add_row({"a2", "A"}, r);
    syn.add_row({"b1", "B"}, r);
    MatchPlan even{{{"h1", "a1", 0, 1}, {"h2", "a2", 0, 1}, {"h3", "b1", 0, 1}, {"h4", "b1", 0, 1}}};
    CHECK(learn_proportions(even, syn) == MixingProportions{{{"A", 0.5}, {"B", 0.5}}});
    MatchPlan skew{{{"h1", "a1", 0, 1}, {"h2", "a1", 0, 1}, {"h3", "a2", 0, 1}, {"h4", "b1", 0, 1}}};
    CHECK(learn_proportions(skew, syn) == MixingProportions{{{"A", 0.75}, {"B", 0.25}}});
    CHECK_THROWS_AS(learn_proportions(MatchPlan{}, syn), InvalidArgument);
}

TEST_CASE("reported matched-pool proportions are renormalized") {
    const std::map<std::string, double> reported{{"gpt3.5", 0.36}, {"gemini", 0.12}, {"llama3", 0.08},
                                                 {"gpt4", 0.08},   {"cohere", 0.06}, {"llama2", 0.03}};
    double raw = 0;
    for (const auto& [k, v] : reported) raw += v;
    CHECK(raw == doctest::Approx(0.73));
    const auto p = normalize_proportions(reported);
    double sum = 0;
    for (const auto& f : p.fractions) sum += f.fraction;
    CHECK(std::abs(sum - 1.0) <= 1e-9);
    CHECK(p.fractions.front().source == "cohere");
    const auto it = std::find_if(p.fractions.begin(), p.fractions.end(), [](const auto& f) { return f.source == "gpt3.5"; });
    CHECK(it->fraction == doctest::Approx(0.36 / 0.73));
}

TEST_CASE("apportion fixtures") {
    using Counts = std::map<std::string, std::size_t>;
    CHECK(apportion(props({{"A", 0.5}, {"B", 0.3}, {"C", 0.2}}), 10) == Counts{{"A", 5}, {"B", 3}, {"C", 2}});
    CHECK(apportion(props({{"A", 1}, {"B", 1}, {"C", 1}}), 10) == Counts{{"A", 4}, {"B", 3}, {"C", 3}});
    CHECK(apportion(props({{"C", 1}, {"B", 1}, {"A", 1}}), 11) == Counts{{"A", 4}, {"B", 4}, {"C", 3}});
    // 50 * (36,12,8,8,6,3)/73 = 24.66, 8.22, 5.48, 5.48, 4.11, 2.05
    const auto c = apportion(props({{"gpt3.5", 36}, {"gemini", 12}, {"llama3", 8}, {"gpt4", 8}, {"cohere", 6}, {"llama2", 3}}), 50);
    CHECK(c == Counts{{"cohere", 4}, {"gemini", 8}, {"gpt3.5", 25}, {"gpt4", 6}, {"llama2", 2}, {"llama3", 5}});
}

TEST_CASE("apportion always hands out exactly n seats") {
    Rng rng(8);
    for (int rep = 0; rep < 300; ++rep) {
        std::map<std::string, double> w;
        const int k = 1 + static_cast<int>(rng.index(7));
        for (int s = 0; s < k; ++s) w[fmt::format("s{}", s)] = rng.uniform() < 0.2 ? 0.0 : rng.uniform();
        w["s0"] += 0.01;
        const std::size_t n = 1 + rng.index(200);
        const auto p = props(w);
        const auto counts = apportion(p, n);
        std::size_t total = 0;
        for (const auto& f : p.fractions) {
            const double quota = static_cast<double>(n) * f.fraction;
            CHECK(static_cast<double>(counts.at(f.source)) >= std::floor(quota + 1e-9) - 1e-12);
            CHECK(static_cast<double>(counts.at(f.source)) <= std::floor(quota + 1e-9) + 1);
            total += counts.at(f.source);
        }
        CHECK(total == n);
    }
}

TEST_CASE("resample_pool") {
    const auto syn = random_pool("s", 30, 8, 0.0, 3, {"A", "B", "C"});
    const auto p = props({{"A", 0.5}, {"B", 0.3}, {"C", 0.2}});
    const auto a = resample_pool(syn, p, 10, 42);
    const auto b = resample_pool(syn, p, 10, 42);
    CHECK(a == b);
    CHECK(a.num_respondents() == 10);
    CHECK(a.source_counts() == std::map<std::string, std::size_t>{{"A", 5}, {"B", 3}, {"C", 2}});
    for (std::size_t i = 0; i < a.num_respondents(); ++i) {
        const auto& id = a.respondent(i).respondent_id;
        const auto base = id.substr(0, id.find("#r"));
        const auto src = syn.respondent_index(base);
        REQUIRE(src.has_value());
        CHECK(syn.respondent(*src).source == a.respondent(i).source);
        CHECK(std::equal(a.row(i).begin(), a.row(i).end(), syn.row(*src).begin()));
    }
    CHECK_THROWS_AS(resample_pool(syn, props({{"Z", 1.0}}), 5, 1), InvalidArgument);
    CHECK_THROWS_AS(resample_pool(syn, p, 0, 1), InvalidArgument);
}

TEST_CASE("experiment pools follow the size rules") {
    for (int n_humans : {100, 7}) {
        const auto humans = random_pool("h", n_humans, 10, 0.1, 5, {"human"});
        const auto syn = random_pool("s", 60, 10, 0.1, 6, {"gpt3.5", "gemini", "llama2"});
        const auto half = static_cast<std::size_t>((n_humans + 1) / 2);
        const auto plan = match_centroids(humans, syn);
        const auto proportions = learn_proportions(plan, syn);
        const PoolInputs in{humans, syn, plan, proportions, {}};

        const auto bench = build_experiment_pool(Condition::benchmark, in, 9);
        CHECK(bench.matrix.num_respondents() == static_cast<std::size_t>(n_humans));
        const auto e1 = build_experiment_pool(Condition::exp1, in, 9);
        CHECK(e1.matrix.num_respondents() == half);
        CHECK(e1.composition == std::map<std::string, std::size_t>{{"human", half}});
        const auto e2 = build_experiment_pool(Condition::exp2, in, 9);
        CHECK(e2.matrix.num_respondents() == 2 * half);
        const auto e3 = build_experiment_pool(Condition::exp3, in, 9);
        CHECK(e3.matrix.num_respondents() == 2 * half);
        CHECK(e3.composition.at("human") == half);
        const auto e4 = build_experiment_pool(Condition::exp4, in, 9);
        CHECK(e4.matrix.num_respondents() == static_cast<std::size_t>(n_humans));
        CHECK(e4.composition.count("human") == 0);

        for (const auto* pool : {&e2, &e3, &e4}) {
            std::size_t total = 0;
            for (const auto& [s, c] : pool->composition) total += c;
            CHECK(total == pool->matrix.num_respondents());
            for (const auto& r : pool->matrix.respondents()) {
                const auto base = r.respondent_id.substr(0, r.respondent_id.find('#'));
                CHECK((humans.respondent_index(base) || syn.respondent_index(base)));
            }
        }
        // exp2 adds exactly the matched partners of the half sample.
        for (std::size_t i = half; i < e2.matrix.num_respondents(); ++i) {
            const auto& human_id = e2.matrix.respondent(i - half).respondent_id;
            const auto& id = e2.matrix.respondent(i).respondent_id;
            CHECK(id.substr(0, id.find('#')) == plan.find(human_id)->synthetic_id);
        }
    }
}

TEST_CASE("half sample selection") {
    ResponseMatrix humans({"q"});
    const std::vector<Score> r{1};
    for (const char* id : {"h3", "h1", "h5", "h2", "h4"}) humans.add_row({id, "human"}, r);
    CHECK(default_half_sample(humans) == std::vector<std::string>{"h1", "h2", "h3"});

    const auto syn = humans;
    PoolInputs in{humans, syn, std::nullopt, std::nullopt, {"h5", "h4"}};
    const auto e1 = build_experiment_pool(Condition::exp1, in, 0);
    CHECK(e1.matrix.num_respondents() == 2);
    CHECK_THROWS_AS(build_experiment_pool(Condition::exp2, in, 0), InvalidArgument);
    CHECK_THROWS_AS(build_experiment_pool(Condition::exp3, in, 0), InvalidArgument);
    CHECK_THROWS_AS(build_experiment_pool(Condition::exp4, in, 0), InvalidArgument);
    PoolInputs bad{humans, syn, std::nullopt, std::nullopt, {"nobody"}};
    CHECK_THROWS_AS(build_experiment_pool(Condition::exp1, bad, 0), InvalidArgument);
}

TEST_CASE("condition names") {
    CHECK(condition_from_string("exp3") == Condition::exp3);
    CHECK(std::string(display_label(Condition::benchmark)) == "Benchmark");
    CHECK_THROWS_AS(condition_from_string("exp9"), InvalidArgument);
}
