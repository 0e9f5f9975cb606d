#include "irtforge/response_matrix.hpp"

#include <algorithm>
#include <set>

#include "irtforge/error.hpp"

namespace irtforge {

ItemBank::ItemBank(std::vector<Item> items) : items_(std::move(items)) {
    if (items_.empty()) throw InvalidArgument("item bank has no items");
    std::set<std::string> seen;
    for (const auto& item : items_) {
        if (item.item_id.empty()) throw InvalidArgument("item bank contains an empty item_id");
        if (!seen.insert(item.item_id).second)
            throw InvalidArgument("duplicate item_id '" + item.item_id + "' in item bank");
    }
}

std::vector<std::string> ItemBank::item_ids() const {
    std::vector<std::string> ids;
    ids.reserve(items_.size());
    for (const auto& item : items_) ids.push_back(item.item_id);
    return ids;
}

std::optional<std::size_t> ItemBank::index_of(const std::string& item_id) const {
    for (std::size_t j = 0; j < items_.size(); ++j)
        if (items_[j].item_id == item_id) return j;
    return std::nullopt;
}

bool ItemBank::has_all_fixed_difficulties() const {
    return std::all_of(items_.begin(), items_.end(),
                       [](const Item& it) { return it.fixed_difficulty.has_value(); });
}

std::vector<double> ItemBank::fixed_difficulties() const {
    std::vector<double> out;
    out.reserve(items_.size());
    for (const auto& item : items_) {
        if (!item.fixed_difficulty)
            throw InvalidArgument("item '" + item.item_id + "' has no fixed_difficulty");
        out.push_back(*item.fixed_difficulty);
    }
    return out;
}

ResponseMatrix::ResponseMatrix(std::vector<std::string> item_ids) : item_ids_(std::move(item_ids)) {
    std::set<std::string> seen;
    for (const auto& id : item_ids_) {
        if (id.empty()) throw InvalidArgument("empty item_id in response matrix");
        if (!seen.insert(id).second) throw InvalidArgument("duplicate item column '" + id + "'");
    }
}

void ResponseMatrix::add_row(Respondent respondent, std::span<const Score> scores) {
    if (respondent.respondent_id.empty()) throw InvalidArgument("empty respondent_id");
    if (scores.size() != item_ids_.size())
        throw InvalidArgument("row for '" + respondent.respondent_id + "' has " + std::to_string(scores.size()) +
                              " cells, expected " + std::to_string(item_ids_.size()));
    for (Score s : scores)
        if (s != kCorrect && s != kIncorrect && s != kMissing)
            throw InvalidArgument("invalid cell value for '" + respondent.respondent_id + "'");
    if (row_index_.count(respondent.respondent_id))
        throw InvalidArgument("duplicate respondent_id '" + respondent.respondent_id + "'");
    row_index_.emplace(respondent.respondent_id, respondents_.size());
    respondents_.push_back(std::move(respondent));
    cells_.insert(cells_.end(), scores.begin(), scores.end());
}

std::optional<std::size_t> ResponseMatrix::item_index(const std::string& item_id) const {
    auto it = std::find(item_ids_.begin(), item_ids_.end(), item_id);
    if (it == item_ids_.end()) return std::nullopt;
    return static_cast<std::size_t>(it - item_ids_.begin());
}

std::optional<std::size_t> ResponseMatrix::respondent_index(const std::string& respondent_id) const {
    auto it = row_index_.find(respondent_id);
    if (it == row_index_.end()) return std::nullopt;
    return it->second;
}

std::size_t ResponseMatrix::observed_in_row(std::size_t i) const {
    auto r = row(i);
    return static_cast<std::size_t>(std::count_if(r.begin(), r.end(), [](Score s) { return s != kMissing; }));
}

std::size_t ResponseMatrix::missing_cells() const {
    return static_cast<std::size_t>(std::count(cells_.begin(), cells_.end(), kMissing));
}

std::map<std::string, std::size_t> ResponseMatrix::source_counts() const {
    std::map<std::string, std::size_t> counts;
    for (const auto& r : respondents_) ++counts[r.source];
    return counts;
}

ResponseMatrix ResponseMatrix::filter_source(const std::string& source) const {
    std::vector<std::size_t> rows;
    for (std::size_t i = 0; i < respondents_.size(); ++i)
        if (respondents_[i].source == source) rows.push_back(i);
    return select_rows(rows);
}

ResponseMatrix ResponseMatrix::select_rows(std::span<const std::size_t> rows) const {
    ResponseMatrix out(item_ids_);
    for (std::size_t i : rows) out.add_row(respondents_.at(i), row(i));
    return out;
}

ResponseMatrix ResponseMatrix::with_columns(std::span<const std::string> item_ids, bool allow_new) const {
    std::vector<std::optional<std::size_t>> source_col;
    source_col.reserve(item_ids.size());
    for (const auto& id : item_ids) {
        auto j = item_index(id);
        if (!j && !allow_new) throw InvalidArgument("item '" + id + "' not present in response matrix");
        source_col.push_back(j);
    }
    ResponseMatrix out(std::vector<std::string>(item_ids.begin(), item_ids.end()));
    std::vector<Score> buf(item_ids.size());
    for (std::size_t i = 0; i < respondents_.size(); ++i) {
        for (std::size_t k = 0; k < item_ids.size(); ++k) buf[k] = source_col[k] ? at(i, *source_col[k]) : kMissing;
        out.add_row(respondents_[i], buf);
    }
    return out;
}

}  // namespace irtforge
