#include "irtforge/dataio.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include <fmt/format.h>
#include <openssl/evp.h>

#include "irtforge/error.hpp"

namespace irtforge {

using nlohmann::json;

ResponseFormat response_format_from_string(const std::string& s) {
    if (s == "wide" || s == "wide_csv") return ResponseFormat::wide_csv;
    if (s == "long" || s == "long_jsonl") return ResponseFormat::long_jsonl;
    throw InvalidArgument("unknown response format '" + s + "' (expected wide or long)");
}

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InputError(path.string(), 0, "cannot open file");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const std::filesystem::path& path, std::string_view contents) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot open '" + path.string() + "' for writing");
    out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
    out.flush();
    if (!out) throw Error("failed writing '" + path.string() + "'");
}

namespace {

// Splits text into lines (LF, tolerating a trailing CR) and hands each
// non-blank, non-comment line to fn with its 1-based number.
template <class Fn>
void for_each_data_line(std::string_view text, Fn&& fn) {
    std::size_t line_no = 0, pos = 0;
    while (pos <= text.size()) {
        const std::size_t nl = text.find('\n', pos);
        std::string_view line = text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
        if (!line.empty() && line.front() != '#') fn(line, line_no);
        if (nl == std::string_view::npos) break;
        pos = nl + 1;
    }
}

std::vector<std::string> split_csv(std::string_view line, const std::string& name, std::size_t line_no) {
    std::vector<std::string> fields;
    std::string field;
    std::size_t i = 0;
    while (true) {
        field.clear();
        if (i < line.size() && line[i] == '"') {
            ++i;
            while (true) {
                if (i >= line.size()) throw InputError(name, line_no, "unterminated quoted field");
                if (line[i] == '"') {
                    if (i + 1 < line.size() && line[i + 1] == '"') {
                        field += '"';
                        i += 2;
                        continue;
                    }
                    ++i;
                    break;
                }
                field += line[i++];
            }
            if (i < line.size() && line[i] != ',') throw InputError(name, line_no, "text after closing quote");
        } else {
            while (i < line.size() && line[i] != ',') field += line[i++];
        }
        fields.push_back(field);
        if (i >= line.size()) break;
        ++i;  // comma
    }
    return fields;
}

std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + "\"";
}

struct RowBuilder {
    const std::string& name;
    const LoadOptions& options;
    LoadReport& report;
    ResponseMatrix matrix;

    void add(Respondent r, const std::vector<Score>& cells, std::size_t line_no) {
        ++report.rows_read;
        if (std::all_of(cells.begin(), cells.end(), [](Score s) { return s == kMissing; })) {
            if (!options.drop_empty_rows)
                throw InputError(name, line_no, "respondent '" + r.respondent_id + "' has no observed responses");
            report.rejected.push_back(r.respondent_id);
            return;
        }
        if (matrix.respondent_index(r.respondent_id))
            throw InputError(name, line_no, "duplicate respondent_id '" + r.respondent_id + "'");
        matrix.add_row(std::move(r), cells);
    }
};

void check_columns_against_bank(const std::vector<std::string>& items, const LoadOptions& options,
                                const std::string& name, std::size_t line_no) {
    if (!options.bank) return;
    for (const auto& id : items)
        if (!options.bank->index_of(id)) throw InputError(name, line_no, "item '" + id + "' is not in the item bank");
}

ResponseMatrix finish(ResponseMatrix matrix, const LoadOptions& options, LoadReport& report) {
    if (options.bank) {
        const auto ids = options.bank->item_ids();
        matrix = matrix.with_columns(ids, true);
    }
    report.rows_retained = matrix.num_respondents();
    report.items = matrix.num_items();
    return matrix;
}

ResponseMatrix parse_wide(std::string_view text, const std::string& name, const LoadOptions& options,
                          LoadReport& report) {
    std::optional<RowBuilder> builder;
    std::size_t n_fields = 0;
    for_each_data_line(text, [&](std::string_view line, std::size_t line_no) {
        auto fields = split_csv(line, name, line_no);
        if (!builder) {
            if (fields.size() < 3 || fields[0] != "respondent_id" || fields[1] != "source")
                throw InputError(name, line_no, "header must start with respondent_id,source and name at least one item");
            std::vector<std::string> items(fields.begin() + 2, fields.end());
            std::set<std::string> seen;
            for (const auto& id : items) {
                if (id.empty()) throw InputError(name, line_no, "empty item_id in header");
                if (!seen.insert(id).second) throw InputError(name, line_no, "duplicate item column '" + id + "'");
            }
            check_columns_against_bank(items, options, name, line_no);
            n_fields = fields.size();
            builder.emplace(RowBuilder{name, options, report, ResponseMatrix(std::move(items))});
            return;
        }
        if (fields.size() != n_fields)
            throw InputError(name, line_no,
                             fmt::format("expected {} fields, found {}", n_fields, fields.size()));
        if (fields[0].empty()) throw InputError(name, line_no, "empty respondent_id");
        if (fields[1].empty()) throw InputError(name, line_no, "empty source");
        std::vector<Score> cells;
        cells.reserve(n_fields - 2);
        for (std::size_t f = 2; f < n_fields; ++f) {
            const auto& v = fields[f];
            if (v == "1") cells.push_back(kCorrect);
            else if (v == "0") cells.push_back(kIncorrect);
            else if (v.empty() || v == "NA") cells.push_back(kMissing);
            else
                throw InputError(name, line_no,
                                 fmt::format("malformed cell '{}' in column '{}'", v, builder->matrix.item_ids()[f - 2]));
        }
        builder->add({fields[0], fields[1]}, cells, line_no);
    });
    if (!builder) throw InputError(name, 0, "missing header row");
    return finish(std::move(builder->matrix), options, report);
}

ResponseMatrix parse_long(std::string_view text, const std::string& name, const LoadOptions& options,
                          LoadReport& report) {
    struct Person {
        std::string source;
        std::size_t first_line;
        std::map<std::size_t, Score> scores;
    };
    std::vector<std::string> items;
    std::map<std::string, std::size_t> item_pos;
    std::vector<std::string> order;
    std::map<std::string, Person> people;

    for_each_data_line(text, [&](std::string_view line, std::size_t line_no) {
        json rec;
        try {
            rec = json::parse(line);
        } catch (const json::parse_error& e) {
            throw InputError(name, line_no, std::string("invalid JSON: ") + e.what());
        }
        if (!rec.is_object()) throw InputError(name, line_no, "record is not a JSON object");
        auto str_field = [&](const char* key) {
            auto it = rec.find(key);
            if (it == rec.end() || !it->is_string() || it->get<std::string>().empty())
                throw InputError(name, line_no, std::string("missing or empty string field '") + key + "'");
            return it->get<std::string>();
        };
        const std::string rid = str_field("respondent_id");
        const std::string source = str_field("source");
        const std::string item = str_field("item_id");
        auto sc = rec.find("score");
        if (sc == rec.end() || !sc->is_number_integer() || (sc->get<long long>() != 0 && sc->get<long long>() != 1))
            throw InputError(name, line_no, "score must be 0 or 1");
        if (options.bank && !options.bank->index_of(item))
            throw InputError(name, line_no, "item '" + item + "' is not in the item bank");
        auto [pos_it, new_item] = item_pos.emplace(item, items.size());
        if (new_item) items.push_back(item);
        auto [pit, new_person] = people.emplace(rid, Person{source, line_no, {}});
        if (new_person) order.push_back(rid);
        else if (pit->second.source != source)
            throw InputError(name, line_no, "respondent '" + rid + "' has conflicting source labels");
        if (!pit->second.scores.emplace(pos_it->second, static_cast<Score>(sc->get<int>())).second)
            throw InputError(name, line_no, "duplicate record for respondent '" + rid + "', item '" + item + "'");
    });

    if (items.empty()) throw InputError(name, 0, "no response records");
    RowBuilder builder{name, options, report, ResponseMatrix(items)};
    std::vector<Score> cells(items.size());
    for (const auto& rid : order) {
        const Person& p = people.at(rid);
        std::fill(cells.begin(), cells.end(), kMissing);
        for (const auto& [j, s] : p.scores) cells[j] = s;
        builder.add({rid, p.source}, cells, p.first_line);
    }
    return finish(std::move(builder.matrix), options, report);
}

}  // namespace

ResponseMatrix parse_responses(std::string_view text, ResponseFormat format, const std::string& source_name,
                               const LoadOptions& options, LoadReport* report) {
    LoadReport local;
    LoadReport& rep = report ? *report : local;
    rep = LoadReport{};
    try {
        return format == ResponseFormat::wide_csv ? parse_wide(text, source_name, options, rep)
                                                  : parse_long(text, source_name, options, rep);
    } catch (const InputError&) {
        throw;
    } catch (const Error& e) {
        throw InputError(source_name, 0, e.what());
    }
}

ResponseMatrix load_responses(const std::filesystem::path& path, ResponseFormat format, const LoadOptions& options,
                              LoadReport* report) {
    return parse_responses(read_file(path), format, path.string(), options, report);
}

std::string format_responses(const ResponseMatrix& matrix, ResponseFormat format, const std::string& comment) {
    std::string out;
    if (!comment.empty()) out += "# " + comment + "\n";
    if (format == ResponseFormat::wide_csv) {
        out += "respondent_id,source";
        for (const auto& id : matrix.item_ids()) out += "," + csv_field(id);
        out += "\n";
        for (std::size_t i = 0; i < matrix.num_respondents(); ++i) {
            out += csv_field(matrix.respondent(i).respondent_id) + "," + csv_field(matrix.respondent(i).source);
            for (Score s : matrix.row(i)) out += s == kMissing ? ",NA" : (s == kCorrect ? ",1" : ",0");
            out += "\n";
        }
    } else {
        for (std::size_t i = 0; i < matrix.num_respondents(); ++i) {
            const auto row = matrix.row(i);
            for (std::size_t j = 0; j < row.size(); ++j) {
                if (row[j] == kMissing) continue;
                json rec = {{"respondent_id", matrix.respondent(i).respondent_id},
                            {"source", matrix.respondent(i).source},
                            {"item_id", matrix.item_ids()[j]},
                            {"score", static_cast<int>(row[j])}};
                out += rec.dump() + "\n";
            }
        }
    }
    return out;
}

void save_responses(const ResponseMatrix& matrix, const std::filesystem::path& path, ResponseFormat format,
                    const std::string& comment) {
    write_file(path, format_responses(matrix, format, comment));
}

ItemBank parse_item_bank(std::string_view text, const std::string& source_name) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw InputError(source_name, 0, std::string("invalid JSON: ") + e.what());
    }
    if (!doc.is_object() || !doc.contains("items") || !doc["items"].is_array())
        throw InputError(source_name, 0, "item bank must be an object with an 'items' array");
    std::vector<Item> items;
    for (const auto& e : doc["items"]) {
        if (!e.is_object() || !e.contains("item_id") || !e["item_id"].is_string())
            throw InputError(source_name, 0, "every item needs a string item_id");
        Item item;
        item.item_id = e["item_id"].get<std::string>();
        auto opt_str = [&](const char* key) -> std::optional<std::string> {
            if (!e.contains(key) || e[key].is_null()) return std::nullopt;
            if (!e[key].is_string()) throw InputError(source_name, 0, std::string(key) + " must be a string");
            return e[key].get<std::string>();
        };
        item.stem = opt_str("stem");
        item.answer_key = opt_str("answer_key");
        if (e.contains("fixed_difficulty") && !e["fixed_difficulty"].is_null()) {
            if (!e["fixed_difficulty"].is_number())
                throw InputError(source_name, 0, "fixed_difficulty of '" + item.item_id + "' must be a number");
            item.fixed_difficulty = e["fixed_difficulty"].get<double>();
        }
        items.push_back(std::move(item));
    }
    try {
        return ItemBank(std::move(items));
    } catch (const InvalidArgument& e) {
        throw InputError(source_name, 0, e.what());
    }
}

ItemBank load_item_bank(const std::filesystem::path& path) { return parse_item_bank(read_file(path), path.string()); }

std::string format_item_bank(const ItemBank& bank) {
    json items = json::array();
    for (const auto& it : bank.items()) {
        json e = {{"item_id", it.item_id}};
        e["stem"] = it.stem ? json(*it.stem) : json(nullptr);
        e["answer_key"] = it.answer_key ? json(*it.answer_key) : json(nullptr);
        e["fixed_difficulty"] = it.fixed_difficulty ? json(*it.fixed_difficulty) : json(nullptr);
        items.push_back(std::move(e));
    }
    return canonical_json(json{{"items", items}});
}

namespace {

void dump_canonical(const json& v, int indent, std::string& out) {
    const std::string pad(static_cast<std::size_t>(indent) * 2, ' ');
    const std::string inner(static_cast<std::size_t>(indent + 1) * 2, ' ');
    switch (v.type()) {
        case json::value_t::object: {
            if (v.empty()) {
                out += "{}";
                return;
            }
            out += "{\n";
            bool first = true;
            for (auto it = v.begin(); it != v.end(); ++it) {  // std::map: keys already sorted
                if (!first) out += ",\n";
                first = false;
                out += inner + json(it.key()).dump() + ": ";
                dump_canonical(it.value(), indent + 1, out);
            }
            out += "\n" + pad + "}";
            return;
        }
        case json::value_t::array: {
            if (v.empty()) {
                out += "[]";
                return;
            }
            const bool scalars = std::none_of(v.begin(), v.end(), [](const json& e) { return e.is_structured(); });
            if (scalars) {
                out += "[";
                for (std::size_t i = 0; i < v.size(); ++i) {
                    if (i) out += ", ";
                    dump_canonical(v[i], indent + 1, out);
                }
                out += "]";
                return;
            }
            out += "[\n";
            for (std::size_t i = 0; i < v.size(); ++i) {
                if (i) out += ",\n";
                out += inner;
                dump_canonical(v[i], indent + 1, out);
            }
            out += "\n" + pad + "]";
            return;
        }
        case json::value_t::number_float: {
            const double d = v.get<double>();
            if (!std::isfinite(d)) throw InvalidArgument("cannot encode non-finite number in JSON output");
            out += d == 0.0 ? "0" : fmt::format("{:.6g}", d);
            return;
        }
        default:
            out += v.dump();
    }
}

template <class T>
json opt(const std::optional<T>& v) {
    return v ? json(*v) : json(nullptr);
}

template <class T>
std::optional<T> get_opt(const json& j, const char* key) {
    if (!j.contains(key) || j.at(key).is_null()) return std::nullopt;
    return j.at(key).get<T>();
}

}  // namespace

std::string canonical_json(const json& value) {
    std::string out;
    dump_canonical(value, 0, out);
    out += "\n";
    return out;
}

std::string sha256_hex(std::string_view bytes) {
    unsigned char digest[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    if (EVP_Digest(bytes.data(), bytes.size(), digest, &len, EVP_sha256(), nullptr) != 1)
        throw Error("SHA-256 computation failed");
    std::string hex;
    for (unsigned int i = 0; i < len; ++i) hex += fmt::format("{:02x}", digest[i]);
    return hex;
}

InputDigest digest_file(const std::filesystem::path& path) {
    return {path.filename().string(), sha256_hex(read_file(path))};
}

void to_json(json& j, const ItemParams& p) {
    j = json::array();
    for (const auto& it : p.items)
        j.push_back({{"item_id", it.item_id}, {"beta", it.beta}, {"se", opt(it.se)}, {"status", to_string(it.status)}});
}

void from_json(const json& j, ItemParams& p) {
    p.items.clear();
    for (const auto& e : j) {
        ItemEstimate it;
        it.item_id = e.at("item_id").get<std::string>();
        it.beta = e.at("beta").get<double>();
        it.se = get_opt<double>(e, "se");
        it.status = item_status_from_string(e.at("status").get<std::string>());
        p.items.push_back(std::move(it));
    }
}

void to_json(json& j, const LatentDist& d) {
    j = {{"nodes", d.grid.nodes}, {"weights", d.grid.weights}, {"mean", d.mean}, {"sd", d.sd}, {"kurtosis", d.kurtosis}};
}

void from_json(const json& j, LatentDist& d) {
    d.grid.nodes = j.at("nodes").get<std::vector<double>>();
    d.grid.weights = j.at("weights").get<std::vector<double>>();
    d.mean = j.at("mean").get<double>();
    d.sd = j.at("sd").get<double>();
    d.kurtosis = j.at("kurtosis").get<double>();
}

void to_json(json& j, const AbilityEstimate& a) {
    j = {{"respondent_id", a.respondent_id}, {"source", a.source}, {"theta_hat", a.theta_hat}, {"se", a.se},
         {"n_observed", a.n_observed},       {"infit", opt(a.infit)}, {"outfit", opt(a.outfit)}};
}

void from_json(const json& j, AbilityEstimate& a) {
    a.respondent_id = j.at("respondent_id").get<std::string>();
    a.source = j.at("source").get<std::string>();
    a.theta_hat = j.at("theta_hat").get<double>();
    a.se = j.at("se").get<double>();
    a.n_observed = j.at("n_observed").get<int>();
    a.infit = get_opt<double>(j, "infit");
    a.outfit = get_opt<double>(j, "outfit");
}

void to_json(json& j, const DistStats& s) {
    j = {{"label", s.label}, {"mean", s.mean}, {"sd", s.sd}, {"kurtosis", opt(s.kurtosis)}, {"n", s.n}};
}

void from_json(const json& j, DistStats& s) {
    s.label = j.at("label").get<std::string>();
    s.mean = j.at("mean").get<double>();
    s.sd = j.at("sd").get<double>();
    s.kurtosis = get_opt<double>(j, "kurtosis");
    s.n = j.at("n").get<int>();
}

void to_json(json& j, const ComparisonReport& r) {
    j = json::array();
    for (const auto& row : r.rows)
        j.push_back({{"label", row.label},
                     {"pearson", row.pearson},
                     {"spearman", row.spearman},
                     {"rmse", row.rmse},
                     {"rmse_raw", row.rmse_raw},
                     {"rmse_anchored", row.rmse_anchored},
                     {"anchored", row.anchored},
                     {"n_items", row.n_items}});
}

void from_json(const json& j, ComparisonReport& r) {
    r.rows.clear();
    for (const auto& e : j) {
        ComparisonRow row;
        row.label = e.at("label").get<std::string>();
        row.pearson = e.at("pearson").get<double>();
        row.spearman = e.at("spearman").get<double>();
        row.rmse = e.at("rmse").get<double>();
        row.rmse_raw = e.at("rmse_raw").get<double>();
        row.rmse_anchored = e.at("rmse_anchored").get<double>();
        row.anchored = e.at("anchored").get<bool>();
        row.n_items = e.at("n_items").get<int>();
        r.rows.push_back(std::move(row));
    }
}

void to_json(json& j, const MatchPlan& p) {
    j = json::array();
    for (const auto& m : p.pairs)
        j.push_back({{"human_id", m.human_id},
                     {"synthetic_id", m.synthetic_id},
                     {"distance", m.distance},
                     {"overlap", m.overlap}});
}

void from_json(const json& j, MatchPlan& p) {
    p.pairs.clear();
    for (const auto& e : j)
        p.pairs.push_back({e.at("human_id").get<std::string>(), e.at("synthetic_id").get<std::string>(),
                           e.at("distance").get<double>(), e.at("overlap").get<int>()});
}

void to_json(json& j, const MixingProportions& p) {
    j = json::object();
    for (const auto& f : p.fractions) j[f.source] = f.fraction;
}

void from_json(const json& j, MixingProportions& p) {
    std::map<std::string, double> weights;
    for (auto it = j.begin(); it != j.end(); ++it) weights[it.key()] = it.value().get<double>();
    p = normalize_proportions(weights);
}

void to_json(json& j, const PopulationSpec& s) {
    json comps = json::array();
    for (const auto& c : s.components) comps.push_back({{"label", c.label}, {"n", c.n}, {"mean", c.mean}, {"sd", c.sd}});
    j = {{"components", comps}, {"missing_rate", s.missing_rate}, {"seed", s.seed}};
}

void from_json(const json& j, PopulationSpec& s) {
    s.components.clear();
    for (const auto& c : j.at("components"))
        s.components.push_back({c.at("label").get<std::string>(), c.at("n").get<int>(), c.at("mean").get<double>(),
                                c.at("sd").get<double>()});
    s.missing_rate = j.value("missing_rate", 0.0);
    s.seed = j.value("seed", std::uint64_t{0});
}

void to_json(json& j, const ResultBundle& b) {
    json inputs = json::array();
    for (const auto& in : b.provenance.inputs) inputs.push_back({{"name", in.name}, {"sha256", in.sha256}});
    j = {{"label", opt(b.label)},
         {"item_params", b.item_params},
         {"latent", b.latent},
         {"ability", b.ability ? json(*b.ability) : json(nullptr)},
         {"convergence",
          {{"cycles", b.convergence.cycles},
           {"max_param_change", b.convergence.max_param_change},
           {"converged", b.convergence.converged}}},
         {"seed", opt(b.seed)},
         {"provenance", {{"inputs", inputs}, {"tool_version", b.provenance.tool_version}}},
         {"dist_stats", b.dist_stats},
         {"latent_by_source", b.latent_by_source},
         {"composition", b.composition},
         {"match_plan", b.match_plan ? json(*b.match_plan) : json(nullptr)},
         {"proportions", b.proportions ? json(*b.proportions) : json(nullptr)}};
}

void from_json(const json& j, ResultBundle& b) {
    b.label = get_opt<std::string>(j, "label");
    b.item_params = j.at("item_params").get<ItemParams>();
    b.latent = j.at("latent").get<LatentDist>();
    b.ability = get_opt<AbilityEstimates>(j, "ability");
    const auto& c = j.at("convergence");
    b.convergence = {c.at("cycles").get<int>(), c.at("max_param_change").get<double>(), c.at("converged").get<bool>()};
    b.seed = get_opt<std::uint64_t>(j, "seed");
    const auto& prov = j.at("provenance");
    b.provenance.inputs.clear();
    for (const auto& in : prov.at("inputs"))
        b.provenance.inputs.push_back({in.at("name").get<std::string>(), in.at("sha256").get<std::string>()});
    b.provenance.tool_version = prov.at("tool_version").get<std::string>();
    b.dist_stats = j.value("dist_stats", std::vector<DistStats>{});
    b.latent_by_source = j.value("latent_by_source", std::map<std::string, LatentDist>{});
    b.composition = j.value("composition", std::map<std::string, std::size_t>{});
    b.match_plan = get_opt<MatchPlan>(j, "match_plan");
    b.proportions = get_opt<MixingProportions>(j, "proportions");
}

std::string format_bundle(const ResultBundle& bundle) { return canonical_json(json(bundle)); }

namespace {

template <class T>
T parse_as(std::string_view text, const std::string& source_name, const char* what) {
    try {
        return json::parse(text).get<T>();
    } catch (const json::exception& e) {
        throw InputError(source_name, 0, std::string("invalid ") + what + ": " + e.what());
    } catch (const InvalidArgument& e) {
        throw InputError(source_name, 0, e.what());
    }
}

}  // namespace

ResultBundle parse_bundle(std::string_view text, const std::string& source_name) {
    return parse_as<ResultBundle>(text, source_name, "result bundle");
}

void write_bundle(const ResultBundle& bundle, const std::filesystem::path& path) {
    const std::string text = format_bundle(bundle);
    write_file(path, text);
}

ResultBundle load_bundle(const std::filesystem::path& path) { return parse_bundle(read_file(path), path.string()); }

PopulationSpec parse_population_spec(std::string_view text, const std::string& source_name) {
    auto spec = parse_as<PopulationSpec>(text, source_name, "population spec");
    try {
        validate(spec);
    } catch (const InvalidArgument& e) {
        throw InputError(source_name, 0, e.what());
    }
    return spec;
}

PopulationSpec load_population_spec(const std::filesystem::path& path) {
    return parse_population_spec(read_file(path), path.string());
}

ComparisonReport parse_comparison_report(std::string_view text, const std::string& source_name) {
    try {
        const json doc = json::parse(text);
        return doc.at("comparison").get<ComparisonReport>();
    } catch (const json::exception& e) {
        throw InputError(source_name, 0, std::string("invalid experiment report: ") + e.what());
    }
}

}  // namespace irtforge
