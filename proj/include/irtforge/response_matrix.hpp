#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "irtforge/rasch.hpp"

namespace irtforge {

struct Item {
    std::string item_id;
    std::optional<std::string> stem;
    std::optional<std::string> answer_key;
    std::optional<double> fixed_difficulty;  // logits

    bool operator==(const Item&) const = default;
};

// Ordered item bank. Order defines column order everywhere downstream.
class ItemBank {
public:
    ItemBank() = default;
    // Throws InvalidArgument on empty list, empty id or duplicate id.
    explicit ItemBank(std::vector<Item> items);

    const std::vector<Item>& items() const noexcept { return items_; }
    std::size_t size() const noexcept { return items_.size(); }
    std::vector<std::string> item_ids() const;
    std::optional<std::size_t> index_of(const std::string& item_id) const;

    bool has_all_fixed_difficulties() const;
    // Fixed difficulties in bank order; throws InvalidArgument naming the
    // first item lacking one.
    std::vector<double> fixed_difficulties() const;

    bool operator==(const ItemBank&) const = default;

private:
    std::vector<Item> items_;
};

struct Respondent {
    std::string respondent_id;
    std::string source;

    bool operator==(const Respondent&) const = default;
};

// Persons x items dichotomous scores. Cells are kCorrect, kIncorrect or
// kMissing, stored row-major.
class ResponseMatrix {
public:
    ResponseMatrix() = default;
    explicit ResponseMatrix(std::vector<std::string> item_ids);

    // Appends a row; throws InvalidArgument on duplicate id, wrong length or
    // an invalid cell value.
    void add_row(Respondent respondent, std::span<const Score> scores);

    std::size_t num_respondents() const noexcept { return respondents_.size(); }
    std::size_t num_items() const noexcept { return item_ids_.size(); }

    const std::vector<std::string>& item_ids() const noexcept { return item_ids_; }
    const std::vector<Respondent>& respondents() const noexcept { return respondents_; }
    const Respondent& respondent(std::size_t i) const { return respondents_.at(i); }

    std::span<const Score> row(std::size_t i) const {
        return {cells_.data() + i * item_ids_.size(), item_ids_.size()};
    }
    Score at(std::size_t i, std::size_t j) const { return cells_[i * item_ids_.size() + j]; }

    std::optional<std::size_t> item_index(const std::string& item_id) const;
    std::optional<std::size_t> respondent_index(const std::string& respondent_id) const;

    std::size_t observed_in_row(std::size_t i) const;
    std::size_t missing_cells() const;

    // Respondent counts per source label.
    std::map<std::string, std::size_t> source_counts() const;

    // Rows whose source equals `source`, in original order.
    ResponseMatrix filter_source(const std::string& source) const;
    ResponseMatrix select_rows(std::span<const std::size_t> rows) const;
    // Reorders (and optionally subsets) columns to `item_ids`. Unknown ids
    // throw; ids listed in `item_ids` but absent here become all-missing
    // columns only when `allow_new` is set.
    ResponseMatrix with_columns(std::span<const std::string> item_ids, bool allow_new = false) const;

    bool operator==(const ResponseMatrix&) const = default;

private:
    std::vector<std::string> item_ids_;
    std::vector<Respondent> respondents_;
    std::vector<Score> cells_;
    std::map<std::string, std::size_t> row_index_;
};

}  // namespace irtforge
