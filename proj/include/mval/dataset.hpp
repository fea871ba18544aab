#pragma once

#include <cstddef>
#include <filesystem>
#include <string>
#include <vector>

#include "mval/types.hpp"

namespace mval {

using Features = std::vector<int>;

// Single-view categorical data; rows[i][f] < arities[f].
struct CategoricalDataset {
    std::vector<std::size_t> arities;
    std::vector<Features> rows;
    std::vector<Label> labels;

    std::size_t size() const { return rows.size(); }
    void validate() const;
};

struct TwoViewDataset {
    std::vector<std::size_t> arities1;
    std::vector<std::size_t> arities2;
    std::vector<Features> view1;
    std::vector<Features> view2;
    std::vector<Label> labels;

    std::size_t size() const { return labels.size(); }
    const std::vector<Features>& rows(View v) const { return v == View::first ? view1 : view2; }
    const std::vector<std::size_t>& arities(View v) const { return v == View::first ? arities1 : arities2; }
    void validate() const;
};

// Text format: a header line of tab-separated arities, then one example per line of
// tab-separated codes with the label last. Two-view files put a literal "|" column
// between the view-1 and view-2 arities in the header and between the codes on each row.
void write_dataset(const CategoricalDataset& d, const std::filesystem::path& path);
CategoricalDataset read_dataset(const std::filesystem::path& path);
void write_dataset(const TwoViewDataset& d, const std::filesystem::path& path);
TwoViewDataset read_two_view_dataset(const std::filesystem::path& path);

std::string dataset_to_text(const CategoricalDataset& d);
std::string dataset_to_text(const TwoViewDataset& d);
CategoricalDataset dataset_from_text(const std::string& text);
TwoViewDataset two_view_dataset_from_text(const std::string& text);

}  // namespace mval
