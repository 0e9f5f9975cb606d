#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "irtforge/response_matrix.hpp"

namespace irtforge {

struct PopulationComponent {
    std::string label;  // becomes the respondents' source
    int n = 0;
    double mean = 0.0;
    double sd = 0.0;

    bool operator==(const PopulationComponent&) const = default;
};

struct PopulationSpec {
    std::vector<PopulationComponent> components;
    double missing_rate = 0.0;
    std::uint64_t seed = 0;

    const PopulationComponent& component(const std::string& label) const;
    int total() const;
    bool operator==(const PopulationSpec&) const = default;
};

// Throws InvalidArgument if the spec is unusable.
void validate(const PopulationSpec& spec);

struct LabelledTheta {
    std::string respondent_id;  // "<label>_<0001-based index>"
    std::string source;
    double theta = 0.0;
};

// Normal draws N(mean, sd^2) per component, in component order.
std::vector<LabelledTheta> sample_thetas(const PopulationSpec& spec);

// Bernoulli(rasch_prob) cells, each independently masked with probability
// missing_rate. A fully masked row gets one fresh mask; a second failure
// throws.
ResponseMatrix simulate_responses(std::span<const LabelledTheta> thetas, const std::vector<std::string>& item_ids,
                                  std::span<const double> betas, double missing_rate, std::uint64_t seed);

// Seven normal components with the reported human and LLM proficiency
// means/SDs: 100 humans and 150 respondents per LLM.
PopulationSpec paper_analogue_population();

// n equally spaced difficulties on [lo, hi] with ids q1..qn.
ItemBank equally_spaced_bank(int n, double lo, double hi);

}  // namespace irtforge
