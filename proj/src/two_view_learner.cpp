#include "mval/two_view_learner.hpp"

namespace mval {

ClusterErmLearner::ClusterErmLearner(std::span<const ClusterPair> instances, std::size_t n1, std::size_t n2)
    : instances_(instances),
      h1_(View::first, std::vector<bool>(n1, false)),
      h2_(View::second, std::vector<bool>(n2, false)) {}

void ClusterErmLearner::fit(std::span<const std::size_t> labeled, std::span<const Label> labels) {
    if (labeled.size() != labels.size()) throw InvalidArgument("labeled indices and labels differ in length");
    std::vector<LabeledCluster> d1, d2;
    d1.reserve(labeled.size());
    d2.reserve(labeled.size());
    for (std::size_t i = 0; i < labeled.size(); ++i) {
        const ClusterPair& p = instances_[labeled[i]];
        d1.push_back({p.a, labels[i]});
        d2.push_back({p.b, labels[i]});
    }
    h1_ = erm_cluster(d1, View::first, h1_.clusters());
    h2_ = erm_cluster(d2, View::second, h2_.clusters());
}

Label ClusterErmLearner::predict(View v, std::size_t instance) const {
    const ClusterPair& p = instances_[instance];
    return v == View::first ? h1_.predict(p.a) : h2_.predict(p.b);
}

std::optional<std::pair<Hypothesis, Hypothesis>> ClusterErmLearner::hypotheses() const {
    return std::make_pair(h1_, h2_);
}

void ClusterErmLearner::set(Hypothesis h1, Hypothesis h2) {
    if (h1.view() != View::first || h2.view() != View::second || h1.clusters() != h1_.clusters() ||
        h2.clusters() != h2_.clusters()) {
        throw InvalidArgument("hypotheses do not match the learner's views");
    }
    h1_ = std::move(h1);
    h2_ = std::move(h2);
}

NaiveBayesLearner::NaiveBayesLearner(const TwoViewDataset& data, std::vector<std::size_t> pool_rows,
                                     double smoothing)
    : data_(data), pool_rows_(std::move(pool_rows)), smoothing_(smoothing) {
    for (auto r : pool_rows_) {
        if (r >= data_.size()) throw InvalidArgument("pool row outside the dataset");
    }
}

void NaiveBayesLearner::fit(std::span<const std::size_t> labeled, std::span<const Label> labels) {
    if (labeled.size() != labels.size()) throw InvalidArgument("labeled indices and labels differ in length");
    // Train on the queried labels only; the dataset's own label column is never read here.
    std::vector<std::size_t> idx(labeled.size());
    for (std::size_t i = 0; i < labeled.size(); ++i) idx[i] = i;
    for (View v : {View::first, View::second}) {
        std::vector<Features> rows;
        rows.reserve(labeled.size());
        for (auto i : labeled) rows.push_back(data_.rows(v)[pool_rows_.at(i)]);
        models_[view_index(v)] = nb_train(rows, labels, idx, data_.arities(v), smoothing_);
    }
}

Label NaiveBayesLearner::predict(View v, std::size_t instance) const {
    return predict_features(v, data_.rows(v)[pool_rows_.at(instance)]);
}

Label NaiveBayesLearner::predict_features(View v, const Features& x) const {
    const auto& m = models_[view_index(v)];
    if (!m) throw Error("naive Bayes learner used before fit");
    return nb_predict(*m, x);
}

}  // namespace mval
