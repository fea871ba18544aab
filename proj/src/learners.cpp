#include "mval/learners.hpp"

#include <bit>
#include <cmath>
#include <cstdint>
#include <limits>
#include <string>

namespace mval {

namespace {

void check_data(std::span<const LabeledCluster> data, std::size_t clusters) {
    if (data.empty()) throw InvalidArgument("ERM needs at least one labeled example");
    for (const auto& e : data) {
        if (e.cluster >= clusters) throw InvalidArgument("labeled cluster index out of range");
    }
}

bool global_majority_positive(std::span<const LabeledCluster> data) {
    std::size_t pos = 0;
    for (const auto& e : data) pos += e.label == Label::positive;
    return 2 * pos > data.size();
}

}  // namespace

Hypothesis erm_cluster(std::span<const LabeledCluster> data, View view, std::size_t clusters) {
    check_data(data, clusters);
    std::vector<std::size_t> pos(clusters, 0), neg(clusters, 0);
    for (const auto& e : data) (e.label == Label::positive ? pos : neg)[e.cluster]++;
    const bool fallback = global_majority_positive(data);
    std::vector<bool> bits(clusters);
    for (std::size_t c = 0; c < clusters; ++c) {
        bits[c] = pos[c] == neg[c] ? fallback : pos[c] > neg[c];
    }
    return Hypothesis(view, std::move(bits));
}

std::size_t empirical_risk(const Hypothesis& h, std::span<const LabeledCluster> data) {
    std::size_t mistakes = 0;
    for (const auto& e : data) mistakes += h.predict(e.cluster) != e.label;
    return mistakes;
}

Hypothesis erm_bruteforce(std::span<const LabeledCluster> data, View view, std::size_t clusters) {
    if (clusters > kBruteForceMaxClusters) {
        throw InvalidArgument("exhaustive ERM supports at most " + std::to_string(kBruteForceMaxClusters) +
                              " clusters");
    }
    check_data(data, clusters);
    const std::uint64_t all = (std::uint64_t{1} << clusters) - 1;
    const std::uint64_t preferred = global_majority_positive(data) ? all : 0;
    std::size_t best_risk = std::numeric_limits<std::size_t>::max();
    int best_distance = std::numeric_limits<int>::max();
    std::uint64_t best_mask = 0;
    for (std::uint64_t mask = 0; mask <= all; ++mask) {
        std::size_t risk = 0;
        for (const auto& e : data) {
            const bool predicted = (mask >> e.cluster) & 1U;
            risk += predicted != (e.label == Label::positive);
        }
        const int distance = std::popcount(mask ^ preferred);
        if (risk < best_risk || (risk == best_risk && distance < best_distance)) {
            best_risk = risk;
            best_distance = distance;
            best_mask = mask;
        }
    }
    return Hypothesis::from_mask(view, clusters, best_mask);
}

double NaiveBayesModel::log_prior(Label y) const {
    const double total = class_count[0] + class_count[1];
    return std::log((class_count[to_int(y)] + smoothing) / (total + 2.0 * smoothing));
}

double NaiveBayesModel::log_likelihood(Label y, std::size_t feature, int value) const {
    if (feature >= arities.size() || value < 0 || static_cast<std::size_t>(value) >= arities[feature]) {
        throw InvalidArgument("feature value outside the model's arity");
    }
    const int k = to_int(y);
    return std::log((counts[k][feature][static_cast<std::size_t>(value)] + smoothing) /
                    (class_count[k] + smoothing * static_cast<double>(arities[feature])));
}

double NaiveBayesModel::log_score(Label y, const Features& x) const {
    if (x.size() != arities.size()) throw InvalidArgument("feature vector width differs from the model");
    double s = log_prior(y);
    for (std::size_t f = 0; f < x.size(); ++f) s += log_likelihood(y, f, x[f]);
    return s;
}

NaiveBayesModel nb_train(const std::vector<Features>& rows, std::span<const Label> labels,
                         std::span<const std::size_t> indices, const std::vector<std::size_t>& arities,
                         double smoothing) {
    if (!(smoothing > 0.0)) throw InvalidArgument("smoothing must be positive");
    if (rows.size() != labels.size()) throw InvalidArgument("rows and labels differ in length");
    NaiveBayesModel m;
    m.arities = arities;
    m.smoothing = smoothing;
    for (auto& per_class : m.counts) {
        per_class.resize(arities.size());
        for (std::size_t f = 0; f < arities.size(); ++f) per_class[f].assign(arities[f], 0.0);
    }
    for (auto i : indices) {
        const Features& x = rows.at(i);
        if (x.size() != arities.size()) throw InvalidArgument("feature vector width differs from arities");
        const int k = to_int(labels[i]);
        m.class_count[k] += 1.0;
        for (std::size_t f = 0; f < x.size(); ++f) {
            if (x[f] < 0 || static_cast<std::size_t>(x[f]) >= arities[f]) {
                throw InvalidArgument("feature value outside its arity");
            }
            m.counts[k][f][static_cast<std::size_t>(x[f])] += 1.0;
        }
    }
    return m;
}

NaiveBayesModel nb_train(const std::vector<Features>& rows, std::span<const Label> labels,
                         const std::vector<std::size_t>& arities, double smoothing) {
    std::vector<std::size_t> all(rows.size());
    for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
    return nb_train(rows, labels, all, arities, smoothing);
}

Label nb_predict(const NaiveBayesModel& model, const Features& x) {
    return to_label(model.log_score(Label::positive, x) > model.log_score(Label::negative, x));
}

}  // namespace mval
