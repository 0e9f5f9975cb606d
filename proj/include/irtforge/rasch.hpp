#pragma once

#include <cstdint>
#include <span>

namespace irtforge {

// Latent proficiency of a respondent, in logits.
struct Theta {
    double value = 0.0;
};

// Item difficulty, in logits.
struct Beta {
    double value = 0.0;
};

// Cell value of a response matrix.
using Score = std::int8_t;
inline constexpr Score kIncorrect = 0;
inline constexpr Score kCorrect = 1;
inline constexpr Score kMissing = -1;

// Logistic function 1/(1+e^-x), evaluated without overflow for any finite x.
double logistic(double x) noexcept;

// log(logistic(x)), stable for large |x|.
double log_logistic(double x) noexcept;

// P(correct | theta, beta) under the Rasch model. Throws InvalidArgument on
// non-finite input.
double rasch_prob(Theta theta, Beta beta);

// Sum over observed cells of x ln P + (1-x) ln(1-P). Missing cells add 0.
double response_loglik(std::span<const Score> pattern, Theta theta, std::span<const double> betas);

// d/dtheta of response_loglik: sum over observed cells of (x - P).
double response_loglik_gradient(std::span<const Score> pattern, Theta theta,
                                std::span<const double> betas);

// Fisher information P(1-P) of a single item at theta.
double item_information(Theta theta, Beta beta);

}  // namespace irtforge
