#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include <json.hpp>

#include "mval/algorithms.hpp"
#include "mval/cluster_world.hpp"

namespace mval {

// ---- Tsybakov noise condition ----------------------------------------------------

struct TsybakovPoint {
    double t = 0.0;
    double probability = 0.0;  // Pr(|phi - 1/2| <= t), conditional on the region when given
    double bound = 0.0;        // C0 t^λ
    double violation = 0.0;    // probability - bound
};

struct TsybakovReport {
    View view = View::first;
    double c0 = 0.0;
    double lambda = 0.0;
    bool restricted = false;
    std::vector<TsybakovPoint> points;
    double worst_violation = 0.0;
    double worst_t = 0.0;
    bool pass = false;  // worst_violation <= kExactTolerance
};

// Evaluates Pr(|phi_v - 1/2| <= t) - C0 t^λ on the grid. The grid is completed with
// every distinct cluster margin in (0, 1/2] and with 1/2; the probability is a step
// function that only rises at margins, so this covers the supremum over (0, 1/2].
// Mass at margin exactly 0 is reported as the t -> 0+ limit (t = 0, bound 0).
// With a region, probabilities are conditional on that set of pairs.
TsybakovReport tsybakov_check(const ClusterWorld& w, View view, double c0, double lambda,
                              std::vector<double> t_grid = {}, const PairSet* region = nullptr);

// ---- d >= C1 d_Δ^k -------------------------------------------------------------

struct Eq2Entry {
    double d = 0.0;        // excess error
    double d_delta = 0.0;  // pseudo-distance to the Bayes set
    double slack = 0.0;    // d - C1 d_delta^k
};

struct Eq2Report {
    double c1 = 0.0;
    double k = 0.0;
    std::vector<Eq2Entry> entries;
    double worst_slack = 0.0;
    std::size_t worst_index = 0;
    bool pass = false;  // every slack >= -kExactTolerance
};

// Requires tsybakov_check(w, view, c0, λ) to pass; throws InvalidArgument otherwise.
Eq2Report eq2_check(const ClusterWorld& w, View view, double c0, double lambda,
                    std::span<const Hypothesis> hypotheses);

// Uniformly random subsets of one view's clusters.
std::vector<Hypothesis> sample_hypotheses(std::size_t clusters, View view, std::size_t count, std::uint64_t seed);

// ---- α-expansion -------------------------------------------------------------------

enum class ExpansionMode {
    exact_bayes,   // reference region S* = S1* lifted to pairs (the views' Bayes sets agree)
    intersection,  // reference region S1* ∩ S2*
};

// Hypothesis class audited per view: subsets within Hamming distance `max_flips` of
// that view's Bayes set. The default is every subset.
struct HypothesisClass {
    std::size_t max_flips = SIZE_MAX;
};

inline constexpr std::size_t kExactHypothesesPerView = std::size_t{1} << 12;

struct ExpansionReport {
    ExpansionMode mode = ExpansionMode::exact_bayes;
    double alpha = 0.0;
    bool vacuous = false;  // no pair with a positive denominator
    bool exact = true;     // false: sampled pairs, alpha is an upper-bound estimate
    std::size_t pairs_evaluated = 0;
    std::size_t pairs_skipped = 0;  // zero denominator
    std::optional<Hypothesis> witness1;
    std::optional<Hypothesis> witness2;
    double witness_contention = 0.0;  // Pr(S1 ⊕ S2)
    double witness_disagreement = 0.0;  // Pr(S1∩S2 - S*) + Pr(~S1∩~S2 - ~S*)
    bool expanding() const { return !vacuous && alpha > 0.0; }
};

// Both terms of the expansion inequality for one pair, summed directly over the table.
struct ExpansionTerms {
    double contention = 0.0;
    double disagreement = 0.0;
};
ExpansionTerms expansion_terms(const ClusterWorld& w, const Hypothesis& s1, const Hypothesis& s2,
                               const PairSet& reference);
PairSet expansion_reference(const ClusterWorld& w, ExpansionMode mode);

// Infimum of contention / disagreement over the class. Enumerates exactly when each
// view's class has at most 2^12 members, otherwise evaluates `samples` random pairs.
// The first minimizer in enumeration order is the witness; alpha is recomputed from
// the witness with expansion_terms.
ExpansionReport estimate_alpha(const ClusterWorld& w, ExpansionMode mode, const HypothesisClass& cls = {},
                               std::size_t samples = 100000, std::uint64_t seed = 0);

// Members of the class for one view in a fixed order (ascending Hamming distance,
// then ascending mask). Throws if the class exceeds `limit`.
std::vector<Hypothesis> enumerate_class(const ClusterWorld& w, View view, const HypothesisClass& cls,
                                        std::size_t limit = kExactHypothesesPerView);

// ---- β-condition ---------------------------------------------------------------------

struct BetaReport {
    double beta = 0.0;
    double contention_mass = 0.0;  // world mode; the sample size in sample mode
    bool small = false;            // beta <= epsilon: both combinations are near-equivalent
};

BetaReport estimate_beta(const ClusterWorld& w, const Hypothesis& h1, const Hypothesis& h2, double epsilon = 0.0);
BetaReport estimate_beta(std::span<const Label> contention_labels, double epsilon = 0.0);

// ---- Per-round diagnostics ------------------------------------------------------------

struct NonDegradationFlag {
    std::size_t round = 0;  // transition round -> round + 1
    View view = View::first;
    bool defined = false;   // complement of Q has positive mass
    double before = 0.0;    // Pr(S_v^i Δ S_v* | ~Q_i)
    double after = 0.0;     // Pr(S_v^{i+1} Δ S_v* | ~Q_i)
    bool holds = false;
};

std::vector<NonDegradationFlag> nondegradation_check(const RunTrace& trace, const ClusterWorld& w);

struct RoundDiagnostics {
    std::size_t round = 0;
    double contention_mass = 0.0;
    std::optional<double> gamma;  // undefined when the contention mass is 0
    std::optional<double> tau;    // from round 1 on; undefined when T1 ⊕ T2 has no mass
    double d_intersection = 0.0;  // d_Δ(S1 ∩ S2, S*)
    double d_union = 0.0;         // d_Δ(S1 ∪ S2, S*)
    // d_Δ(S1∩S2, S*) - [(1/2 - γ) Pr(Q) + Pr(S1∩S2 - S*) + Pr(~S1∩~S2 - ~S*)], and the
    // union analogue with (1/2 + γ). Zero up to rounding whenever γ is defined.
    double intersection_residual = 0.0;
    double union_residual = 0.0;
    double excess_plus = 0.0;
    double excess_minus = 0.0;
};

// S* is the joint reference region S1* ∩ S2*.
std::vector<RoundDiagnostics> diagnostics(const RunTrace& trace, const ClusterWorld& w);

struct IntersectionGap {
    double gap = 0.0;    // R(S1* ∩ S2*) - max_v R(S_v*)
    double bound = 0.0;  // Pr(S1* ⊕ S2*)
    bool holds = false;
};

IntersectionGap intersection_gap(const ClusterWorld& w);

// ---- JSON export -----------------------------------------------------------------------

void to_json(nlohmann::json& j, const TsybakovReport& r);
void to_json(nlohmann::json& j, const ExpansionReport& r);
void to_json(nlohmann::json& j, const RoundDiagnostics& r);
void to_json(nlohmann::json& j, const BetaReport& r);
void to_json(nlohmann::json& j, const Eq2Report& r);
void to_json(nlohmann::json& j, const IntersectionGap& r);
void to_json(nlohmann::json& j, const NonDegradationFlag& r);

}  // namespace mval
