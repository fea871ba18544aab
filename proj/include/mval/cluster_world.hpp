#pragma once

#include <cstddef>
#include <initializer_list>
#include <vector>

#include "mval/types.hpp"

namespace mval {

inline constexpr double kExactTolerance = 1e-12;

// Finite two-view distribution. Instances are cluster pairs (a, b); every quantity
// (marginals, conditionals, risks) is an exact finite sum over the n1 x n2 table.
class ClusterWorld {
public:
    // pair_mass and label_prob are row-major n1 x n2 tables.
    ClusterWorld(std::size_t n1, std::size_t n2, std::vector<double> pair_mass,
                 std::vector<double> label_prob);

    std::size_t n1() const { return n1_; }
    std::size_t n2() const { return n2_; }
    std::size_t clusters(View v) const { return v == View::first ? n1_ : n2_; }

    double mass(std::size_t a, std::size_t b) const { return pair_mass_[a * n2_ + b]; }
    double psi(std::size_t a, std::size_t b) const { return label_prob_[a * n2_ + b]; }
    double mass(ClusterPair p) const { return mass(p.a, p.b); }
    double psi(ClusterPair p) const { return psi(p.a, p.b); }

    const std::vector<double>& pair_mass() const { return pair_mass_; }
    const std::vector<double>& label_prob() const { return label_prob_; }

    // Marginal probability of a single cluster in one view.
    double marginal(View v, std::size_t cluster) const;

    friend bool operator==(const ClusterWorld&, const ClusterWorld&) = default;

private:
    std::size_t n1_;
    std::size_t n2_;
    std::vector<double> pair_mass_;
    std::vector<double> label_prob_;
};

// Subset of one view's clusters predicted positive. Hypotheses never split a cluster.
class Hypothesis {
public:
    Hypothesis(View view, std::vector<bool> positive);
    static Hypothesis from_indices(View view, std::size_t clusters,
                                   std::initializer_list<std::size_t> positive);
    static Hypothesis from_indices(View view, std::size_t clusters,
                                   const std::vector<std::size_t>& positive);
    static Hypothesis from_mask(View view, std::size_t clusters, std::uint64_t mask);

    View view() const { return view_; }
    std::size_t clusters() const { return positive_.size(); }
    bool contains(std::size_t cluster) const { return positive_[cluster]; }
    Label predict(std::size_t cluster) const { return to_label(positive_[cluster]); }
    const std::vector<bool>& membership() const { return positive_; }
    std::vector<std::size_t> positive_indices() const;

    Hypothesis complement() const;

    friend bool operator==(const Hypothesis&, const Hypothesis&) = default;

private:
    View view_;
    std::vector<bool> positive_;
};

struct CombinedClassifier {
    Combination mode = Combination::plus;
    Hypothesis h1;
    Hypothesis h2;

    CombinedClassifier(Combination m, Hypothesis first, Hypothesis second);
};

Label predict_combined(const CombinedClassifier& c, ClusterPair instance);
Label predict_combined(Combination mode, Label first, Label second);

// A set of cluster pairs; the common currency for contention regions, Bayes regions
// and anything else measured under the joint distribution.
class PairSet {
public:
    PairSet(std::size_t n1, std::size_t n2, bool value = false);

    static PairSet lift(const Hypothesis& h, std::size_t n1, std::size_t n2);
    static PairSet of(const CombinedClassifier& c);

    std::size_t n1() const { return n1_; }
    std::size_t n2() const { return n2_; }
    bool contains(std::size_t a, std::size_t b) const { return bits_[a * n2_ + b]; }
    bool contains(ClusterPair p) const { return contains(p.a, p.b); }
    void set(std::size_t a, std::size_t b, bool v) { bits_[a * n2_ + b] = v; }

    PairSet operator~() const;
    PairSet operator&(const PairSet& o) const;
    PairSet operator|(const PairSet& o) const;
    PairSet operator^(const PairSet& o) const;
    PairSet operator-(const PairSet& o) const { return *this & ~o; }

    friend bool operator==(const PairSet&, const PairSet&) = default;

private:
    std::size_t n1_;
    std::size_t n2_;
    std::vector<bool> bits_;
};

// Probability of a pair region.
double mass(const ClusterWorld& w, const PairSet& region);
// Probability of (region and y = label).
double labeled_mass(const ClusterWorld& w, const PairSet& region, Label y);

double phi(const ClusterWorld& w, View view, std::size_t cluster);

Hypothesis bayes_set(const ClusterWorld& w, View view);

// Joint reference region S1* ∩ S2* lifted to pairs. Equals the common Bayes set when
// the two views' Bayes sets agree on the support.
PairSet reference_region(const ClusterWorld& w);

double error_rate(const ClusterWorld& w, const PairSet& predicted_positive);
double error_rate(const ClusterWorld& w, const Hypothesis& h);
double error_rate(const ClusterWorld& w, const CombinedClassifier& c);

// Per-view: R(S) - R(S_v*). Combined: R(c) - R(S1* ∩ S2*).
double excess_error(const ClusterWorld& w, const Hypothesis& h);
double excess_error(const ClusterWorld& w, const CombinedClassifier& c);

// Integral form: sum over S Δ S_v* of |2 phi - 1| times cluster mass.
double excess_error_integral(const ClusterWorld& w, const Hypothesis& h);

// Pr(h - ref) + Pr(ref - h) under the view marginal.
double pseudo_delta(const ClusterWorld& w, const Hypothesis& h, const Hypothesis& ref);
// Same distance for pair regions under the joint distribution.
double pseudo_delta(const ClusterWorld& w, const PairSet& a, const PairSet& b);

PairSet contention_region(const Hypothesis& h1, const Hypothesis& h2);
double contention_mass(const ClusterWorld& w, const Hypothesis& h1, const Hypothesis& h2);

struct WorldMeasures {
    Hypothesis bayes_set_1;
    Hypothesis bayes_set_2;
    double bayes_risk_1 = 0.0;
    double bayes_risk_2 = 0.0;
    double joint_bayes_intersection_risk = 0.0;

    const Hypothesis& bayes_set(View v) const { return v == View::first ? bayes_set_1 : bayes_set_2; }
    double bayes_risk(View v) const { return v == View::first ? bayes_risk_1 : bayes_risk_2; }
};

WorldMeasures measures(const ClusterWorld& w);

}  // namespace mval
