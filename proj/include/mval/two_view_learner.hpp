#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "mval/cluster_world.hpp"
#include "mval/dataset.hpp"
#include "mval/learners.hpp"

namespace mval {

// Per-view learners over a fixed unlabeled pool. Instances are pool indices; the
// learner owns whatever representation each view needs.
class TwoViewLearner {
public:
    virtual ~TwoViewLearner() = default;

    virtual std::size_t pool_size() const = 0;

    // Retrains both views from scratch on the given labeled pool instances.
    virtual void fit(std::span<const std::size_t> labeled, std::span<const Label> labels) = 0;

    virtual Label predict(View v, std::size_t instance) const = 0;

    // Current per-view hypotheses when the learner works on a cluster world.
    virtual std::optional<std::pair<Hypothesis, Hypothesis>> hypotheses() const { return std::nullopt; }
};

// Cluster ERM in each view; instances are the pool's cluster pairs.
class ClusterErmLearner final : public TwoViewLearner {
public:
    ClusterErmLearner(std::span<const ClusterPair> instances, std::size_t n1, std::size_t n2);

    std::size_t pool_size() const override { return instances_.size(); }
    void fit(std::span<const std::size_t> labeled, std::span<const Label> labels) override;
    Label predict(View v, std::size_t instance) const override;
    std::optional<std::pair<Hypothesis, Hypothesis>> hypotheses() const override;

    void set(Hypothesis h1, Hypothesis h2);

private:
    std::span<const ClusterPair> instances_;
    Hypothesis h1_;
    Hypothesis h2_;
};

// Categorical naive Bayes in each view. Pool instance i is dataset row pool_rows[i];
// rows outside the pool (the test split) are only ever passed to predict_features.
class NaiveBayesLearner final : public TwoViewLearner {
public:
    NaiveBayesLearner(const TwoViewDataset& data, std::vector<std::size_t> pool_rows, double smoothing = 1.0);

    std::size_t pool_size() const override { return pool_rows_.size(); }
    void fit(std::span<const std::size_t> labeled, std::span<const Label> labels) override;
    Label predict(View v, std::size_t instance) const override;

    Label predict_features(View v, const Features& x) const;

private:
    const TwoViewDataset& data_;
    std::vector<std::size_t> pool_rows_;
    double smoothing_;
    std::optional<NaiveBayesModel> models_[2];
};

}  // namespace mval
