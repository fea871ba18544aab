#pragma once

#include <cstddef>
#include <vector>

#include "mval/types.hpp"

namespace mval {

// Hidden labels of an unlabeled pool plus the record of which ones were paid for.
// Labels are fixed at construction so a run can be replayed exactly.
class LabelOracle {
public:
    LabelOracle() = default;
    explicit LabelOracle(std::vector<Label> hidden);

    std::size_t size() const { return hidden_.size(); }
    bool queried(std::size_t index) const { return queried_.at(index); }

    // Reveals a label and charges one unit of cost. Asking twice throws DoubleQuery.
    Label query(std::size_t index);

    // Number of labels revealed so far; the experiment's cost meter.
    std::size_t labels_revealed() const { return revealed_; }

    std::vector<std::size_t> unqueried() const;

    // Evaluation-only access; never handed to a learner.
    Label peek(std::size_t index) const { return hidden_.at(index); }

private:
    std::vector<Label> hidden_;
    std::vector<bool> queried_;
    std::size_t revealed_ = 0;
};

// World-mode pool: i.i.d. cluster pairs with pre-drawn labels.
struct Pool {
    std::vector<ClusterPair> instances;
    LabelOracle oracle;

    std::size_t size() const { return instances.size(); }
};

}  // namespace mval
