#include <doctest.h>

#include <cmath>
#include <limits>
#include <vector>

#include "irtforge/error.hpp"
#include "irtforge/random.hpp"
#include "irtforge/rasch.hpp"

using namespace irtforge;

namespace {

// Textbook form, evaluated in long double.
double naive_prob(double theta, double beta) {
    const long double e = std::exp(static_cast<long double>(theta - beta));
    return static_cast<double>(e / (1.0L + e));
}

}  // namespace

TEST_CASE("rasch_prob reference values") {
    CHECK(rasch_prob(Theta{0}, Beta{0}) == 0.5);
    CHECK(rasch_prob(Theta{1}, Beta{0}) == doctest::Approx(std::exp(1.0) / (1.0 + std::exp(1.0))).epsilon(1e-15));
    CHECK(rasch_prob(Theta{1}, Beta{0}) == doctest::Approx(0.731059).epsilon(1e-6));
    CHECK(rasch_prob(Theta{0}, Beta{std::log(3.0)}) == doctest::Approx(0.25).epsilon(1e-14));
}

TEST_CASE("rasch_prob agrees with the textbook form") {
    Rng rng(101);
    for (int i = 0; i < 2000; ++i) {
        const double t = rng.normal(0, 4), b = rng.normal(0, 4);
        CHECK(std::abs(rasch_prob(Theta{t}, Beta{b}) - naive_prob(t, b)) < 1e-14);
    }
}

TEST_CASE("rasch_prob stays finite and inside (0,1) at extreme differences") {
    for (double d : {-700.0, -300.0, -40.0, 40.0, 300.0, 700.0}) {
        const double p = rasch_prob(Theta{d}, Beta{0});
        CHECK(std::isfinite(p));
        CHECK(p >= 0.0);
        CHECK(p <= 1.0);
    }
    CHECK(rasch_prob(Theta{30}, Beta{0}) < 1.0);
    CHECK(rasch_prob(Theta{-30}, Beta{0}) > 0.0);
}

TEST_CASE("rasch_prob rejects non-finite input") {
    const double inf = std::numeric_limits<double>::infinity();
    const double nan = std::numeric_limits<double>::quiet_NaN();
    CHECK_THROWS_AS(rasch_prob(Theta{inf}, Beta{0}), InvalidArgument);
    CHECK_THROWS_AS(rasch_prob(Theta{0}, Beta{nan}), InvalidArgument);
    CHECK_THROWS_AS(item_information(Theta{nan}, Beta{0}), InvalidArgument);
}

TEST_CASE("complementarity, monotonicity and translation") {
    Rng rng(5);
    for (int i = 0; i < 5000; ++i) {
        const double t = rng.normal(0, 3), b = rng.normal(0, 3), c = rng.normal(0, 5);
        CHECK(std::abs(rasch_prob(Theta{t}, Beta{b}) + rasch_prob(Theta{b}, Beta{t}) - 1.0) < 1e-12);
        CHECK(std::abs(rasch_prob(Theta{t + c}, Beta{b + c}) - rasch_prob(Theta{t}, Beta{b})) < 1e-12);
        const double h = 0.01 + rng.uniform();
        CHECK(rasch_prob(Theta{t + h}, Beta{b}) > rasch_prob(Theta{t}, Beta{b}));
        CHECK(rasch_prob(Theta{t}, Beta{b + h}) < rasch_prob(Theta{t}, Beta{b}));
    }
}

TEST_CASE("response_loglik") {
    const std::vector<double> one{0.0};
    const std::vector<double> two{0.0, 0.0};
    const std::vector<Score> p1{kCorrect};
    const std::vector<Score> p10{kCorrect, kIncorrect};
    const std::vector<Score> none{kMissing, kMissing};
    CHECK(response_loglik(p1, Theta{0}, one) == doctest::Approx(-0.693147).epsilon(1e-6));
    CHECK(response_loglik(p10, Theta{0}, two) == doctest::Approx(-1.386294).epsilon(1e-6));
    CHECK(response_loglik(none, Theta{1.3}, two) == 0.0);
    CHECK_THROWS_AS(response_loglik(p1, Theta{0}, two), InvalidArgument);
}

TEST_CASE("response_loglik equals the log of the product of probabilities") {
    Rng rng(9);
    for (int rep = 0; rep < 200; ++rep) {
        std::vector<double> betas(12);
        std::vector<Score> pattern(12);
        for (int j = 0; j < 12; ++j) {
            betas[j] = rng.normal(0, 1.5);
            const double u = rng.uniform();
            pattern[j] = u < 0.2 ? kMissing : (u < 0.6 ? kIncorrect : kCorrect);
        }
        const double theta = rng.normal(0, 1.5);
        long double prod = 1.0L;
        for (int j = 0; j < 12; ++j) {
            if (pattern[j] == kMissing) continue;
            const double p = naive_prob(theta, betas[j]);
            prod *= pattern[j] == kCorrect ? p : 1.0 - p;
        }
        CHECK(response_loglik(pattern, Theta{theta}, betas) == doctest::Approx(static_cast<double>(std::log(prod))).epsilon(1e-12));
    }
}

TEST_CASE("loglik gradient matches central differences") {
    Rng rng(13);
    for (int rep = 0; rep < 200; ++rep) {
        std::vector<double> betas(15);
        std::vector<Score> pattern(15);
        for (int j = 0; j < 15; ++j) {
            betas[j] = rng.normal(0, 2);
            const double u = rng.uniform();
            pattern[j] = u < 0.1 ? kMissing : (u < 0.55 ? kIncorrect : kCorrect);
        }
        const double t = rng.normal(0, 2);
        const double h = 1e-5;
        const double fd = (response_loglik(pattern, Theta{t + h}, betas) - response_loglik(pattern, Theta{t - h}, betas)) / (2 * h);
        CHECK(std::abs(response_loglik_gradient(pattern, Theta{t}, betas) - fd) < 1e-6);
    }
}

TEST_CASE("item_information") {
    CHECK(item_information(Theta{0}, Beta{0}) == 0.25);
    const double p = 1.0 / (1.0 + std::exp(-10.0));
    CHECK(item_information(Theta{10}, Beta{0}) == doctest::Approx(p * (1 - p)).epsilon(1e-12));
    CHECK(item_information(Theta{10}, Beta{0}) == doctest::Approx(4.54e-5).epsilon(1e-3));
    Rng rng(3);
    for (int i = 0; i < 1000; ++i) {
        const double t = rng.normal(0, 3), b = rng.normal(0, 3);
        CHECK(item_information(Theta{t}, Beta{b}) == doctest::Approx(item_information(Theta{b}, Beta{t})).epsilon(1e-14));
        CHECK(item_information(Theta{t}, Beta{b}) <= 0.25);
    }
}

TEST_CASE("log_logistic is stable") {
    CHECK(log_logistic(-800.0) == doctest::Approx(-800.0));
    CHECK(log_logistic(800.0) == 0.0);
    CHECK(log_logistic(0.0) == doctest::Approx(std::log(0.5)));
}
