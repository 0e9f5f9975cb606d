#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "irtforge/calibrate.hpp"
#include "irtforge/error.hpp"
#include "irtforge/evaluate.hpp"
#include "irtforge/random.hpp"
#include "irtforge/simulate.hpp"
#include "support.hpp"

using namespace irtforge;
using irtforge::testing::simulate_group;

namespace {

std::vector<double> ok_betas(const ItemParams& p) {
    std::vector<double> out;
    for (const auto& it : p.items)
        if (it.status == ItemStatus::ok) out.push_back(it.beta);
    return out;
}

ItemParams make_params(const std::vector<double>& betas) {
    ItemParams p;
    for (std::size_t j = 0; j < betas.size(); ++j) p.items.push_back({"i" + std::to_string(j), betas[j], 0.1, ItemStatus::ok});
    return p;
}

}  // namespace

TEST_CASE("make_grid construction") {
    const auto g = make_grid(41, 5.0);
    REQUIRE(g.size() == 41);
    CHECK(g.nodes[20] == 0.0);
    CHECK(g.nodes.front() == -5.0);
    CHECK(g.nodes.back() == 5.0);
    double sum = 0, m1 = 0, m2 = 0;
    for (std::size_t k = 0; k < g.size(); ++k) {
        CHECK(g.weights[k] >= 0.0);
        CHECK(g.weights[k] == g.weights[g.size() - 1 - k]);
        CHECK(g.nodes[k] == -g.nodes[g.size() - 1 - k]);
        if (k > 0) CHECK(g.nodes[k] > g.nodes[k - 1]);
        sum += g.weights[k];
        m1 += g.weights[k] * g.nodes[k];
        m2 += g.weights[k] * g.nodes[k] * g.nodes[k];
    }
    CHECK(std::abs(sum - 1.0) < 1e-12);
    CHECK(std::abs(m1) < 1e-12);
    CHECK(std::abs(m2 - 1.0) < 0.01);

    CHECK_THROWS_AS(make_grid(40, 5.0), InvalidArgument);
    CHECK_THROWS_AS(make_grid(9, 5.0), InvalidArgument);
    CHECK_THROWS_AS(make_grid(41, 0.0), InvalidArgument);
}

TEST_CASE("label-swap symmetry") {
    ResponseMatrix m({"a", "b"});
    const std::vector<Score> r1{1, 0}, r2{0, 1};
    m.add_row({"p1", "human"}, r1);
    m.add_row({"p2", "human"}, r2);
    const auto cal = calibrate_mml(m, make_grid(41, 5.0));
    REQUIRE(cal.params.count_ok() == 2);
    CHECK(std::abs(cal.params.items[0].beta + cal.params.items[1].beta) < 1e-9);
}

TEST_CASE("extreme and excluded items") {
    ResponseMatrix m({"easy", "hard", "mid", "mid2", "gone"});
    const std::vector<std::vector<Score>> rows{
        {1, 0, 1, 0, kMissing}, {1, 0, 0, 1, kMissing}, {1, 0, 1, 1, kMissing}, {1, kMissing, 0, 0, kMissing}};
    for (std::size_t i = 0; i < rows.size(); ++i) m.add_row({"p" + std::to_string(i), "human"}, rows[i]);
    const auto cal = calibrate_mml(m, make_grid(41, 5.0));
    const auto& p = cal.params;
    CHECK(p.find("easy")->status == ItemStatus::extreme_all_correct);
    CHECK(p.find("easy")->beta == -6.0);
    CHECK_FALSE(p.find("easy")->se.has_value());
    CHECK(p.find("hard")->status == ItemStatus::extreme_all_incorrect);
    CHECK(p.find("hard")->beta == 6.0);
    CHECK(p.find("gone")->status == ItemStatus::excluded);
    CHECK(p.find("mid")->status == ItemStatus::ok);
    CHECK(*p.find("mid")->se > 0.0);
    for (const auto& it : p.items)
        if (it.status == ItemStatus::ok) CHECK(std::abs(it.beta) <= 6.0);
}

TEST_CASE("no calibratable items is an error") {
    ResponseMatrix m({"a"});
    const std::vector<Score> r{1};
    m.add_row({"p", "h"}, r);
    CHECK_THROWS_AS(calibrate_mml(m, make_grid(41, 5.0)), InvalidArgument);
}

TEST_CASE("recovery on simulated data") {
    const auto bank = equally_spaced_bank(20, -2.0, 2.0);
    const auto m = simulate_group(500, 0.0, 1.0, bank, 7);
    const auto cal = calibrate_mml(m, make_grid(41, 5.0));
    CHECK(cal.convergence.converged);
    const auto est = ok_betas(cal.params);
    const auto truth = bank.fixed_difficulties();
    REQUIRE(est.size() == truth.size());
    CHECK(pearson(est, truth) >= 0.97);
    CHECK(rmse(est, truth) <= 0.15);
}

TEST_CASE("marginal log-likelihood is monotone") {
    const auto bank = equally_spaced_bank(15, -2.5, 1.5);
    for (std::uint64_t seed : {1u, 2u, 3u}) {
        const auto m = simulate_group(300, 0.3, 1.2, bank, seed, 0.2);
        const auto cal = calibrate_mml(m, make_grid(41, 5.0));
        const auto& tr = cal.convergence.loglik_trace;
        REQUIRE(tr.size() >= 2);
        for (std::size_t c = 1; c < tr.size(); ++c) CHECK(tr[c] >= tr[c - 1] - 1e-9);
    }
}

TEST_CASE("thread count does not change results") {
    const auto bank = equally_spaced_bank(12, -2.0, 2.0);
    const auto m = simulate_group(700, 0.0, 1.0, bank, 21, 0.1);
    const auto grid = make_grid(41, 5.0);
    CalibrationOptions one, many;
    many.threads = 4;
    const auto a = calibrate_mml(m, grid, one);
    const auto b = calibrate_mml(m, grid, many);
    CHECK(a.params == b.params);
    CHECK(a.convergence.loglik_trace == b.convergence.loglik_trace);
}

TEST_CASE("column permutation permutes estimates") {
    const auto bank = equally_spaced_bank(10, -2.0, 2.0);
    const auto m = simulate_group(300, 0.0, 1.0, bank, 31, 0.1);
    std::vector<std::string> order = m.item_ids();
    std::reverse(order.begin(), order.end());
    std::swap(order[2], order[5]);
    const auto grid = make_grid(41, 5.0);
    const auto a = calibrate_mml(m, grid);
    const auto b = calibrate_mml(m.with_columns(order), grid);
    for (const auto& it : a.params.items) {
        const ItemEstimate* other = b.params.find(it.item_id);
        REQUIRE(other != nullptr);
        CHECK(other->beta == it.beta);
        CHECK(other->se == it.se);
    }
}

TEST_CASE("scale is pinned by the latent distribution") {
    // Shifting persons and items together leaves the data, and therefore
    // the estimates, unchanged.
    const auto bank = equally_spaced_bank(12, -2.0, 2.0);
    std::vector<Item> shifted_items;
    for (const auto& it : bank.items()) shifted_items.push_back({it.item_id, {}, {}, *it.fixed_difficulty + 1.5});
    const ItemBank shifted(shifted_items);
    const auto a = simulate_group(400, 0.0, 1.0, bank, 41);
    const auto b = simulate_group(400, 1.5, 1.0, shifted, 41);
    const auto grid = make_grid(41, 5.0);
    const auto ca = calibrate_mml(a, grid);
    const auto cb = calibrate_mml(b, grid);
    CHECK(ca.params == cb.params);
    // Reruns reproduce the same mean.
    const auto est = ok_betas(calibrate_mml(a, grid).params);
    const auto est0 = ok_betas(ca.params);
    CHECK(std::accumulate(est.begin(), est.end(), 0.0) == std::accumulate(est0.begin(), est0.end(), 0.0));
}

TEST_CASE("max_cycles limit reports non-convergence") {
    const auto bank = equally_spaced_bank(10, -2.0, 2.0);
    const auto m = simulate_group(200, 0.0, 1.0, bank, 5);
    CalibrationOptions o;
    o.max_cycles = 1;
    const auto cal = calibrate_mml(m, make_grid(41, 5.0), o);
    CHECK_FALSE(cal.convergence.converged);
    CHECK(cal.convergence.cycles == 1);
}

TEST_CASE("anchor_to") {
    const auto ref = make_params({-1.0, 0.2, 0.7, 1.4});
    CHECK(anchor_shift(ref, ref) == 0.0);
    CHECK(anchor_to(ref, ref) == ref);

    auto plus = make_params({-0.5, 0.7, 1.2, 1.9});
    CHECK(anchor_shift(plus, ref) == doctest::Approx(-0.5).epsilon(1e-14));
    const auto back = anchor_to(plus, ref);
    for (std::size_t j = 0; j < 4; ++j) CHECK(back.items[j].beta == doctest::Approx(ref.items[j].beta).epsilon(1e-14));

    Rng rng(77);
    for (int rep = 0; rep < 100; ++rep) {
        std::vector<double> r(10), p(10);
        const double c = rng.normal(0, 2);
        for (int j = 0; j < 10; ++j) {
            r[j] = rng.normal(0, 1);
            p[j] = r[j] + c + rng.normal(0, 0.3);
        }
        const auto out = anchor_to(make_params(p), make_params(r));
        double diff = 0;
        for (int j = 0; j < 10; ++j) diff += out.items[j].beta - r[j];
        CHECK(std::abs(diff / 10) < 1e-12);
    }
}

TEST_CASE("anchor_to needs two shared ok items") {
    auto a = make_params({0.1, 0.2, 0.3});
    auto b = make_params({0.0, 0.0, 0.0});
    b.items[1].status = ItemStatus::extreme_all_correct;
    b.items[2].status = ItemStatus::excluded;
    CHECK_THROWS_AS(anchor_to(a, b), InvalidArgument);
    b.items[2].status = ItemStatus::ok;
    CHECK_NOTHROW(anchor_to(a, b));
}

TEST_CASE("anchor_to leaves extreme items at the bound") {
    auto a = make_params({0.0, 1.0, -6.0});
    a.items[2].status = ItemStatus::extreme_all_correct;
    a.items[2].se.reset();
    const auto r = make_params({1.0, 2.0, 0.0});
    const auto out = anchor_to(a, r);
    CHECK(out.items[0].beta == 1.0);
    CHECK(out.items[2].beta == -6.0);
}
