#include "mval/pool.hpp"

#include <string>

namespace mval {

LabelOracle::LabelOracle(std::vector<Label> hidden)
    : hidden_(std::move(hidden)), queried_(hidden_.size(), false) {}

Label LabelOracle::query(std::size_t index) {
    if (index >= hidden_.size()) throw InvalidArgument("query index out of range");
    if (queried_[index]) throw DoubleQuery("instance " + std::to_string(index) + " was already queried");
    queried_[index] = true;
    ++revealed_;
    return hidden_[index];
}

std::vector<std::size_t> LabelOracle::unqueried() const {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < queried_.size(); ++i) {
        if (!queried_[i]) out.push_back(i);
    }
    return out;
}

}  // namespace mval
