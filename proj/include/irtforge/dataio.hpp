#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "irtforge/augment.hpp"
#include "irtforge/calibrate.hpp"
#include "irtforge/evaluate.hpp"
#include "irtforge/fpc.hpp"
#include "irtforge/response_matrix.hpp"
#include "irtforge/simulate.hpp"

namespace irtforge {

inline constexpr const char* kToolVersion = "0.1.0";

enum class ResponseFormat { wide_csv, long_jsonl };

// Accepts "wide", "wide_csv", "long", "long_jsonl".
ResponseFormat response_format_from_string(const std::string& s);

struct LoadOptions {
    // When set, columns are validated against the bank and reordered to
    // bank order; bank items without a column become all-missing.
    const ItemBank* bank = nullptr;
    // Reject all-missing rows into LoadReport::rejected instead of failing.
    bool drop_empty_rows = false;
};

struct LoadReport {
    std::size_t rows_read = 0;
    std::size_t rows_retained = 0;
    std::size_t items = 0;
    std::vector<std::string> rejected;
};

// Wide CSV: header "respondent_id,source,<item ids...>", cells 0, 1, NA or
// empty (missing). Long JSONL: one {"respondent_id","source","item_id",
// "score"} object per line; absent records are missing. Lines starting with
// '#' are comments in both formats. Errors throw InputError naming the
// source and line.
ResponseMatrix parse_responses(std::string_view text, ResponseFormat format, const std::string& source_name,
                               const LoadOptions& options = {}, LoadReport* report = nullptr);
ResponseMatrix load_responses(const std::filesystem::path& path, ResponseFormat format,
                              const LoadOptions& options = {}, LoadReport* report = nullptr);

// `comment` (if non-empty) is emitted as a leading "# ..." line.
std::string format_responses(const ResponseMatrix& matrix, ResponseFormat format, const std::string& comment = {});
void save_responses(const ResponseMatrix& matrix, const std::filesystem::path& path, ResponseFormat format,
                    const std::string& comment = {});

ItemBank parse_item_bank(std::string_view text, const std::string& source_name);
ItemBank load_item_bank(const std::filesystem::path& path);
std::string format_item_bank(const ItemBank& bank);

// Sorted keys, two-space indent, floating values at 6 significant digits.
// Throws InvalidArgument on NaN or infinity.
std::string canonical_json(const nlohmann::json& value);

std::string sha256_hex(std::string_view bytes);

struct InputDigest {
    std::string name;  // file name without directories
    std::string sha256;

    bool operator==(const InputDigest&) const = default;
};

InputDigest digest_file(const std::filesystem::path& path);

struct Provenance {
    std::vector<InputDigest> inputs;
    std::string tool_version = kToolVersion;

    bool operator==(const Provenance&) const = default;
};

struct ConvergenceSummary {
    int cycles = 0;
    double max_param_change = 0.0;
    bool converged = false;

    bool operator==(const ConvergenceSummary&) const = default;
};

struct ResultBundle {
    std::optional<std::string> label;
    ItemParams item_params;
    LatentDist latent;
    std::optional<AbilityEstimates> ability;
    ConvergenceSummary convergence;
    std::optional<std::uint64_t> seed;
    Provenance provenance;
    std::vector<DistStats> dist_stats;
    std::map<std::string, LatentDist> latent_by_source;
    std::map<std::string, std::size_t> composition;
    std::optional<MatchPlan> match_plan;
    std::optional<MixingProportions> proportions;
};

std::string format_bundle(const ResultBundle& bundle);
ResultBundle parse_bundle(std::string_view text, const std::string& source_name);
// Serializes fully before touching the file, so a bundle that cannot be
// encoded (e.g. NaN) leaves nothing behind.
void write_bundle(const ResultBundle& bundle, const std::filesystem::path& path);
ResultBundle load_bundle(const std::filesystem::path& path);

PopulationSpec parse_population_spec(std::string_view text, const std::string& source_name);
PopulationSpec load_population_spec(const std::filesystem::path& path);

ComparisonReport parse_comparison_report(std::string_view text, const std::string& source_name);

std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, std::string_view contents);

// nlohmann::json ADL hooks.
void to_json(nlohmann::json& j, const ItemParams& p);
void from_json(const nlohmann::json& j, ItemParams& p);
void to_json(nlohmann::json& j, const LatentDist& d);
void from_json(const nlohmann::json& j, LatentDist& d);
void to_json(nlohmann::json& j, const AbilityEstimate& a);
void from_json(const nlohmann::json& j, AbilityEstimate& a);
void to_json(nlohmann::json& j, const DistStats& s);
void from_json(const nlohmann::json& j, DistStats& s);
void to_json(nlohmann::json& j, const ComparisonReport& r);
void from_json(const nlohmann::json& j, ComparisonReport& r);
void to_json(nlohmann::json& j, const MatchPlan& p);
void from_json(const nlohmann::json& j, MatchPlan& p);
void to_json(nlohmann::json& j, const MixingProportions& p);
void from_json(const nlohmann::json& j, MixingProportions& p);
void to_json(nlohmann::json& j, const PopulationSpec& s);
void from_json(const nlohmann::json& j, PopulationSpec& s);
void to_json(nlohmann::json& j, const ResultBundle& b);
void from_json(const nlohmann::json& j, ResultBundle& b);

}  // namespace irtforge
