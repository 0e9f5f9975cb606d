#include "irtforge/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <map>
#include <vector>

#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include "irtforge/dataio.hpp"
#include "irtforge/error.hpp"

namespace irtforge {

MapFormat map_format_from_string(const std::string& s) {
    if (s == "text") return MapFormat::text;
    if (s == "svg") return MapFormat::svg;
    throw InvalidArgument("unknown map format '" + s + "' (expected text or svg)");
}

ReportFormat report_format_from_string(const std::string& s) {
    if (s == "text") return ReportFormat::text;
    if (s == "json") return ReportFormat::json;
    throw InvalidArgument("unknown report format '" + s + "' (expected text or json)");
}

std::string format_2dp(double v) {
    if (!std::isfinite(v)) return "NA";
    const double v6 = std::strtod(fmt::format("{:.6g}", v).c_str(), nullptr);
    const std::string fixed = fmt::format("{:.12f}", std::abs(v6));
    const auto dot = fixed.find('.');
    std::string int_part = fixed.substr(0, dot);
    const std::string frac = fixed.substr(dot + 1);
    long long cents = std::stoll(int_part) * 100 + std::stoll(frac.substr(0, 2));
    const std::string rest = frac.substr(2);
    const std::string half = "5" + std::string(rest.size() - 1, '0');
    if (rest > half || (rest == half && cents % 2 == 1)) ++cents;
    const bool negative = v6 < 0.0 && cents != 0;
    return fmt::format("{}{}.{:02d}", negative ? "-" : "", cents / 100, cents % 100);
}

namespace {

// Display width of UTF-8 text (code points).
std::size_t display_width(const std::string& s) {
    return static_cast<std::size_t>(std::count_if(s.begin(), s.end(), [](char c) { return (c & 0xC0) != 0x80; }));
}

std::string pad_right(const std::string& s, std::size_t width) {
    const std::size_t w = display_width(s);
    return w >= width ? s : s + std::string(width - w, ' ');
}

std::string pad_left(const std::string& s, std::size_t width) {
    const std::size_t w = display_width(s);
    return w >= width ? s : std::string(width - w, ' ') + s;
}

std::string xml_escape(const std::string& s) {
    std::string out;
    for (char c : s) {
        switch (c) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '"': out += "&quot;"; break;
            default: out += c;
        }
    }
    return out;
}

struct PlottedItem {
    std::string id;
    double beta;
    bool extreme;
};

struct MapLayout {
    std::vector<PlottedItem> items;  // sorted by (beta, id)
    std::vector<std::string> excluded;
    long first_bin = 0, last_bin = 0;
    std::map<long, std::size_t> persons;  // bin -> count
    std::map<long, std::vector<const PlottedItem*>> item_bins;
    std::size_t n_persons = 0;
};

long bin_of(double v) { return static_cast<long>(std::floor(v / kWrightBinWidth)); }

MapLayout layout_map(const ItemParams& params, std::span<const AbilityEstimate> abilities) {
    MapLayout m;
    for (const auto& it : params.items) {
        if (it.status == ItemStatus::excluded) m.excluded.push_back(it.item_id);
        else m.items.push_back({it.item_id, it.beta, it.status != ItemStatus::ok});
    }
    if (params.count_ok() == 0) throw InvalidArgument("Wright map needs at least one item with status ok");
    std::sort(m.items.begin(), m.items.end(), [](const PlottedItem& a, const PlottedItem& b) {
        return a.beta != b.beta ? a.beta < b.beta : a.id < b.id;
    });
    double lo = m.items.front().beta, hi = m.items.back().beta;
    for (const auto& a : abilities) {
        lo = std::min(lo, a.theta_hat);
        hi = std::max(hi, a.theta_hat);
        ++m.persons[bin_of(a.theta_hat)];
    }
    m.n_persons = abilities.size();
    m.first_bin = bin_of(lo - 0.5);
    m.last_bin = bin_of(hi + 0.5);
    for (const auto& it : m.items) m.item_bins[bin_of(it.beta)].push_back(&it);
    return m;
}

constexpr std::size_t kBarWidth = 30;

std::string wright_text(const MapLayout& m) {
    std::size_t max_count = 0;
    for (const auto& [b, c] : m.persons) max_count = std::max(max_count, c);
    const std::size_t per_mark = std::max<std::size_t>(1, (max_count + kBarWidth - 1) / kBarWidth);

    std::string out;
    out += "Wright map (logits, ascending from top; persons: EAP point estimates)\n";
    out += fmt::format("{:>7} | {} | {}\n", "logit", pad_right("persons", kBarWidth), "items");
    out += std::string(7, '-') + "-+-" + std::string(kBarWidth, '-') + "-+-" + std::string(12, '-') + "\n";
    for (long b = m.first_bin; b <= m.last_bin; ++b) {
        std::string bar;
        if (auto it = m.persons.find(b); it != m.persons.end())
            bar = std::string((it->second + per_mark - 1) / per_mark, '#');
        const std::string label = fmt::format("{:7.2f}", static_cast<double>(b) * kWrightBinWidth);
        const auto items_it = m.item_bins.find(b);
        if (items_it == m.item_bins.end()) {
            std::string line = label + " | " + pad_right(bar, kBarWidth) + " |";
            out += line + "\n";
            continue;
        }
        bool first = true;
        for (const PlottedItem* item : items_it->second) {
            const std::string name = item->id + (item->extreme ? "*" : "");
            if (first) out += label + " | " + pad_right(bar, kBarWidth) + " | " + name + "\n";
            else out += std::string(7, ' ') + " | " + std::string(kBarWidth, ' ') + " | " + name + "\n";
            first = false;
        }
    }
    out += fmt::format("persons: {} (each '#' = up to {})\n", m.n_persons, per_mark);
    if (std::any_of(m.items.begin(), m.items.end(), [](const PlottedItem& i) { return i.extreme; }))
        out += "* extreme item (all correct or all incorrect), shown at the clamp bound\n";
    if (!m.excluded.empty()) {
        out += "excluded (no observations):";
        for (const auto& id : m.excluded) out += " " + id;
        out += "\n";
    }
    return out;
}

std::string wright_svg(const MapLayout& m) {
    // One SVG row per text row so both renderings carry the same content.
    struct Row {
        std::string label;
        std::size_t persons = 0;
        std::string item;
    };
    std::vector<Row> rows;
    std::size_t max_count = 0;
    for (long b = m.first_bin; b <= m.last_bin; ++b) {
        Row r;
        r.label = fmt::format("{:.2f}", static_cast<double>(b) * kWrightBinWidth);
        if (auto it = m.persons.find(b); it != m.persons.end()) r.persons = it->second;
        max_count = std::max(max_count, r.persons);
        const auto items_it = m.item_bins.find(b);
        if (items_it == m.item_bins.end()) {
            rows.push_back(r);
            continue;
        }
        bool first = true;
        for (const PlottedItem* item : items_it->second) {
            Row x = first ? r : Row{};
            x.item = item->id + (item->extreme ? "*" : "");
            rows.push_back(x);
            first = false;
        }
    }
    const double row_h = 16.0, top = 40.0, axis_x = 320.0, bar_max = 240.0;
    const double height = top + row_h * static_cast<double>(rows.size()) + 30.0;
    std::string out;
    out += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    out += fmt::format(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"560\" height=\"{:.0f}\" "
        "font-family=\"monospace\" font-size=\"12\">\n",
        height);
    out += "<text x=\"10\" y=\"20\">Wright map (logits, ascending from top; persons: EAP point estimates)</text>\n";
    out += fmt::format("<line x1=\"{0:.1f}\" y1=\"{1:.1f}\" x2=\"{0:.1f}\" y2=\"{2:.1f}\" stroke=\"black\"/>\n", axis_x,
                       top - 4.0, top + row_h * static_cast<double>(rows.size()));
    for (std::size_t i = 0; i < rows.size(); ++i) {
        const double y = top + row_h * static_cast<double>(i);
        const auto& r = rows[i];
        if (!r.label.empty())
            out += fmt::format("<text x=\"10\" y=\"{:.1f}\">{}</text>\n", y + 12.0, r.label);
        if (r.persons > 0) {
            const double w = bar_max * static_cast<double>(r.persons) / static_cast<double>(max_count);
            out += fmt::format("<rect x=\"{:.1f}\" y=\"{:.1f}\" width=\"{:.1f}\" height=\"{:.1f}\" fill=\"gray\"/>\n",
                               axis_x - 4.0 - w, y + 2.0, w, row_h - 4.0);
        }
        if (!r.item.empty())
            out += fmt::format("<text x=\"{:.1f}\" y=\"{:.1f}\">{}</text>\n", axis_x + 8.0, y + 12.0,
                               xml_escape(r.item));
    }
    out += fmt::format("<text x=\"10\" y=\"{:.1f}\">persons: {}</text>\n", height - 10.0, m.n_persons);
    out += "</svg>\n";
    return out;
}

std::string comparison_text(const ComparisonReport& report) {
    std::size_t label_w = display_width("Generating Source");
    for (const auto& r : report.rows) label_w = std::max(label_w, display_width(r.label));
    label_w += 2;
    constexpr std::size_t w = 12;
    std::string out = pad_right("Generating Source", label_w) + pad_left("Pearson ρ", w) +
                      pad_left("Spearman ρ", w) + pad_left("RMSE", w) + "\n";
    for (const auto& r : report.rows)
        out += pad_right(r.label, label_w) + pad_left(format_2dp(r.pearson), w) +
               pad_left(format_2dp(r.spearman), w) + pad_left(format_2dp(r.rmse), w) + "\n";
    return out;
}

std::string distribution_text(std::span<const DistStats> stats) {
    std::size_t label_w = display_width("Generating Model");
    for (const auto& s : stats) label_w = std::max(label_w, display_width(s.label));
    label_w += 2;
    constexpr std::size_t w = 10;
    const std::string sd_head = "Standard Deviation (SD)";
    std::string out = pad_right("Generating Model", label_w) + pad_left("Mean", w) +
                      pad_left(sd_head, sd_head.size() + 3) + pad_left("Kurtosis", w) + pad_left("N", 8) + "\n";
    for (const auto& s : stats)
        out += pad_right(s.label, label_w) + pad_left(format_2dp(s.mean), w) +
               pad_left(format_2dp(s.sd), sd_head.size() + 3) +
               pad_left(s.kurtosis ? format_2dp(*s.kurtosis) : "NA", w) + pad_left(std::to_string(s.n), 8) + "\n";
    return out;
}

}  // namespace

std::string render_wright_map(const ItemParams& params, std::span<const AbilityEstimate> abilities,
                              MapFormat format) {
    const MapLayout layout = layout_map(params, abilities);
    return format == MapFormat::text ? wright_text(layout) : wright_svg(layout);
}

std::string render_distribution_table(std::span<const DistStats> stats, ReportFormat format) {
    if (format == ReportFormat::json)
        return canonical_json(nlohmann::json{{"distributions", std::vector<DistStats>(stats.begin(), stats.end())}});
    return distribution_text(stats);
}

std::string render_experiment_report(const ComparisonReport& report, std::span<const DistStats> stats,
                                     ReportFormat format) {
    if (report.rows.empty()) throw InvalidArgument("experiment report has no rows");
    if (format == ReportFormat::json)
        return canonical_json(nlohmann::json{{"comparison", report},
                                             {"distributions", std::vector<DistStats>(stats.begin(), stats.end())}});
    std::string out = comparison_text(report);
    if (!stats.empty()) out += "\n" + distribution_text(stats);
    return out;
}

}  // namespace irtforge
