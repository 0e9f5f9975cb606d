#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "irtforge/response_matrix.hpp"

namespace irtforge {

struct MatchPair {
    std::string human_id;
    std::string synthetic_id;
    double distance = 0.0;  // share of jointly observed items answered differently
    int overlap = 0;        // jointly observed items

    bool operator==(const MatchPair&) const = default;
};

struct MatchPlan {
    std::vector<MatchPair> pairs;  // one per human, in human row order

    const MatchPair* find(const std::string& human_id) const;
    bool operator==(const MatchPlan&) const = default;
};

// Pairs every human with its nearest synthetic respondent by normalized
// Hamming distance over jointly observed items. Ties go to the
// lexicographically smallest synthetic_id; synthetic rows may be reused.
// Both pools must cover the same item ids (column order may differ).
MatchPlan match_centroids(const ResponseMatrix& humans, const ResponseMatrix& synthetic);

struct SourceFraction {
    std::string source;
    double fraction = 0.0;

    bool operator==(const SourceFraction&) const = default;
};

// Sorted by source label; fractions sum to 1.
struct MixingProportions {
    std::vector<SourceFraction> fractions;

    bool operator==(const MixingProportions&) const = default;
};

// Normalizes non-negative weights into MixingProportions.
MixingProportions normalize_proportions(const std::map<std::string, double>& weights);

// Share of each synthetic source among the matched respondents.
MixingProportions learn_proportions(const MatchPlan& plan, const ResponseMatrix& synthetic);

// Largest-remainder apportionment of n seats. Equal remainders go to the
// lexicographically smallest source first.
std::map<std::string, std::size_t> apportion(const MixingProportions& proportions, std::size_t n);

// Draws n respondents: per-source counts from apportion(), rows sampled
// uniformly with replacement within each source. Output ids are
// "<original id>#r<k>" with k the output row number.
ResponseMatrix resample_pool(const ResponseMatrix& synthetic, const MixingProportions& proportions, int n,
                             std::uint64_t seed);

enum class Condition { benchmark, exp1, exp2, exp3, exp4 };

const char* to_string(Condition c) noexcept;
// Display label used in report tables ("Benchmark", "Experiment 1", ...).
const char* display_label(Condition c) noexcept;
Condition condition_from_string(const std::string& s);

struct ExperimentPool {
    Condition condition = Condition::benchmark;
    ResponseMatrix matrix;
    std::map<std::string, std::size_t> composition;
    std::uint64_t seed = 0;
};

// The first ceil(N/2) respondent ids in ascending id order.
std::vector<std::string> default_half_sample(const ResponseMatrix& humans);

struct PoolInputs {
    const ResponseMatrix& humans;
    const ResponseMatrix& synthetic;
    std::optional<MatchPlan> plan;
    std::optional<MixingProportions> proportions;
    // Explicit half-sample ids; default_half_sample() when empty.
    std::vector<std::string> half_sample;
};

// benchmark: all humans; exp1: half sample H; exp2: H plus each member's
// matched synthetic respondent; exp3: H plus |H| resampled synthetic rows;
// exp4: N resampled synthetic rows. Columns follow the human matrix.
ExperimentPool build_experiment_pool(Condition condition, const PoolInputs& inputs, std::uint64_t seed);

}  // namespace irtforge
