#include "irtforge/rasch.hpp"

#include <cmath>
#include <string>

#include "irtforge/error.hpp"

namespace irtforge {

namespace {

void require_finite(double v, const char* name) {
    if (!std::isfinite(v)) throw InvalidArgument(std::string(name) + " must be finite");
}

}  // namespace

double logistic(double x) noexcept {
    if (x >= 0.0) return 1.0 / (1.0 + std::exp(-x));
    const double e = std::exp(x);
    return e / (1.0 + e);
}

double log_logistic(double x) noexcept {
    if (x >= 0.0) return -std::log1p(std::exp(-x));
    return x - std::log1p(std::exp(x));
}

double rasch_prob(Theta theta, Beta beta) {
    require_finite(theta.value, "theta");
    require_finite(beta.value, "beta");
    return logistic(theta.value - beta.value);
}

double response_loglik(std::span<const Score> pattern, Theta theta, std::span<const double> betas) {
    if (pattern.size() != betas.size()) throw InvalidArgument("response_loglik: pattern/betas length mismatch");
    require_finite(theta.value, "theta");
    double ll = 0.0;
    for (std::size_t j = 0; j < pattern.size(); ++j) {
        if (pattern[j] == kMissing) continue;
        require_finite(betas[j], "beta");
        const double d = theta.value - betas[j];
        // ln(1-P) = ln(logistic(-d))
        ll += pattern[j] == kCorrect ? log_logistic(d) : log_logistic(-d);
    }
    return ll;
}

double response_loglik_gradient(std::span<const Score> pattern, Theta theta,
                                std::span<const double> betas) {
    if (pattern.size() != betas.size()) throw InvalidArgument("response_loglik_gradient: length mismatch");
    double g = 0.0;
    for (std::size_t j = 0; j < pattern.size(); ++j) {
        if (pattern[j] == kMissing) continue;
        g += static_cast<double>(pattern[j]) - rasch_prob(theta, Beta{betas[j]});
    }
    return g;
}

double item_information(Theta theta, Beta beta) {
    const double p = rasch_prob(theta, beta);
    return p * (1.0 - p);
}

}  // namespace irtforge
