#include "irtforge/simulate.hpp"

#include <cmath>

#include <fmt/format.h>

#include "irtforge/error.hpp"
#include "irtforge/random.hpp"

namespace irtforge {

const PopulationComponent& PopulationSpec::component(const std::string& label) const {
    for (const auto& c : components)
        if (c.label == label) return c;
    throw InvalidArgument("no population component labelled '" + label + "'");
}

int PopulationSpec::total() const {
    int n = 0;
    for (const auto& c : components) n += c.n;
    return n;
}

void validate(const PopulationSpec& spec) {
    if (spec.components.empty()) throw InvalidArgument("population spec has no components");
    for (const auto& c : spec.components) {
        if (c.label.empty()) throw InvalidArgument("population component with empty label");
        if (c.n < 1) throw InvalidArgument("component '" + c.label + "' needs n >= 1");
        if (!std::isfinite(c.mean)) throw InvalidArgument("component '" + c.label + "' has non-finite mean");
        if (!std::isfinite(c.sd) || c.sd < 0.0) throw InvalidArgument("component '" + c.label + "' needs sd >= 0");
    }
    if (!(spec.missing_rate >= 0.0 && spec.missing_rate < 1.0))
        throw InvalidArgument("missing_rate must lie in [0, 1)");
}

std::vector<LabelledTheta> sample_thetas(const PopulationSpec& spec) {
    validate(spec);
    Rng rng(spec.seed);
    std::vector<LabelledTheta> out;
    out.reserve(static_cast<std::size_t>(spec.total()));
    for (const auto& c : spec.components) {
        for (int i = 0; i < c.n; ++i) {
            const double theta = c.sd == 0.0 ? c.mean : rng.normal(c.mean, c.sd);
            out.push_back({fmt::format("{}_{:04d}", c.label, i + 1), c.label, theta});
        }
    }
    return out;
}

ResponseMatrix simulate_responses(std::span<const LabelledTheta> thetas, const std::vector<std::string>& item_ids,
                                  std::span<const double> betas, double missing_rate, std::uint64_t seed) {
    if (item_ids.size() != betas.size()) throw InvalidArgument("item_ids and betas differ in length");
    if (!(missing_rate >= 0.0 && missing_rate < 1.0)) throw InvalidArgument("missing_rate must lie in [0, 1)");
    ResponseMatrix matrix(item_ids);
    Rng rng(seed);
    std::vector<Score> row(betas.size());
    for (const auto& t : thetas) {
        for (std::size_t j = 0; j < betas.size(); ++j)
            row[j] = rng.bernoulli(rasch_prob(Theta{t.theta}, Beta{betas[j]})) ? kCorrect : kIncorrect;
        if (missing_rate > 0.0) {
            std::vector<bool> mask(betas.size());
            bool empty = true;
            for (int attempt = 0; attempt < 2 && empty; ++attempt) {
                empty = true;
                for (std::size_t j = 0; j < betas.size(); ++j) {
                    mask[j] = rng.uniform() < missing_rate;
                    if (!mask[j]) empty = false;
                }
            }
            if (empty) throw InvalidArgument("masking left respondent '" + t.respondent_id + "' with no observed item");
            for (std::size_t j = 0; j < betas.size(); ++j)
                if (mask[j]) row[j] = kMissing;
        }
        matrix.add_row({t.respondent_id, t.source}, row);
    }
    return matrix;
}

PopulationSpec paper_analogue_population() {
    PopulationSpec spec;
    spec.components = {
        {"human", 100, 0.00, 0.98},   {"cohere", 150, -0.40, 0.34}, {"gpt3.5", 150, 0.27, 0.58},
        {"gpt4", 150, 0.00, 0.31},    {"gemini", 150, -0.54, 0.29}, {"llama2", 150, -1.81, 0.44},
        {"llama3", 150, 0.37, 0.51},
    };
    return spec;
}

ItemBank equally_spaced_bank(int n, double lo, double hi) {
    if (n < 1) throw InvalidArgument("bank needs at least one item");
    std::vector<Item> items;
    for (int j = 0; j < n; ++j) {
        const double beta = n == 1 ? lo : lo + (hi - lo) * j / (n - 1);
        items.push_back({fmt::format("q{}", j + 1), std::nullopt, std::nullopt, beta});
    }
    return ItemBank(std::move(items));
}

}  // namespace irtforge
