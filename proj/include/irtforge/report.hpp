#pragma once

#include <span>
#include <string>

#include "irtforge/calibrate.hpp"
#include "irtforge/evaluate.hpp"
#include "irtforge/fpc.hpp"

namespace irtforge {

enum class MapFormat { text, svg };
enum class ReportFormat { text, json };

MapFormat map_format_from_string(const std::string& s);
ReportFormat report_format_from_string(const std::string& s);

// Bin width of the text map, in logits.
inline constexpr double kWrightBinWidth = 0.25;

// Item-person map on one logit axis running from the lowest value at the
// top to the highest at the bottom. Items sorted by (beta, item_id); each
// plotted item gets its own row. Extreme items carry a '*' flag. Throws
// when no item has status ok.
std::string render_wright_map(const ItemParams& params, std::span<const AbilityEstimate> abilities, MapFormat format);

// Comparison table (Generating Source / Pearson / Spearman / RMSE)
// followed by the distribution table. Text rounds to 2 decimals (half to
// even); JSON is canonical.
std::string render_experiment_report(const ComparisonReport& report, std::span<const DistStats> stats,
                                     ReportFormat format);

// Distribution table alone (Generating Model / Mean / SD / Kurtosis / N).
std::string render_distribution_table(std::span<const DistStats> stats, ReportFormat format);

// Rounds the 6-significant-digit representation of v to 2 decimals,
// ties to even. Never returns "-0.00".
std::string format_2dp(double v);

}  // namespace irtforge
