#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "mval/cluster_world.hpp"
#include "mval/dataset.hpp"

namespace mval {

struct LabeledCluster {
    std::size_t cluster = 0;
    Label label = Label::negative;
};

// Empirical risk minimization over all cluster subsets. A cluster is positive iff
// its labeled majority is 1. Ties and unseen clusters take the global label majority
// of the data; a global tie gives 0.
Hypothesis erm_cluster(std::span<const LabeledCluster> data, View view, std::size_t clusters);

inline constexpr std::size_t kBruteForceMaxClusters = 20;

// Exhaustive search over all 2^n hypotheses. Among minimizers it returns the one
// closest in Hamming distance to the constant global-majority hypothesis.
Hypothesis erm_bruteforce(std::span<const LabeledCluster> data, View view, std::size_t clusters);

// Number of training mistakes of h on data.
std::size_t empirical_risk(const Hypothesis& h, std::span<const LabeledCluster> data);

struct NaiveBayesModel {
    std::vector<std::size_t> arities;
    double smoothing = 1.0;
    double class_count[2] = {0.0, 0.0};
    // counts[class][feature][value]
    std::vector<std::vector<double>> counts[2];

    double log_prior(Label y) const;
    double log_likelihood(Label y, std::size_t feature, int value) const;
    double log_score(Label y, const Features& x) const;
};

// Additive smoothing on priors and per-feature value counts; smoothing = 1 is Laplace.
NaiveBayesModel nb_train(const std::vector<Features>& rows, std::span<const Label> labels,
                         const std::vector<std::size_t>& arities, double smoothing = 1.0);

// Same, over the subset `indices` of rows/labels.
NaiveBayesModel nb_train(const std::vector<Features>& rows, std::span<const Label> labels,
                         std::span<const std::size_t> indices, const std::vector<std::size_t>& arities,
                         double smoothing = 1.0);

// argmax of log prior + sum of log likelihoods; ties go to 0.
Label nb_predict(const NaiveBayesModel& model, const Features& x);

}  // namespace mval
