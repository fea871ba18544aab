#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "mval/cluster_world.hpp"
#include "mval/pool.hpp"
#include "mval/schedule.hpp"
#include "mval/two_view_learner.hpp"

namespace mval {

enum class Algorithm { table1, table2, random };

const char* to_string(Algorithm a);
Algorithm algorithm_from_string(const std::string& s);

// One entry per trained pair of classifiers. Round 0 holds the m0 random queries;
// round r >= 1 holds the queries drawn from the previous round's contention set
// (plus table2's extra draws from outside it).
struct RoundRecord {
    std::size_t round = 0;
    std::size_t from_contention = 0;  // labels drawn from Q this round
    std::size_t from_rest = 0;        // labels drawn from U - Q (table2 extras, fallbacks, random sampling)
    std::size_t labels_cumulative = 0;
    std::size_t shortfall = 0;        // requested minus delivered
    std::size_t contention_size = 0;  // unqueried pool points where the new classifiers disagree
    std::vector<std::size_t> contention_queries;
    std::vector<std::size_t> rest_queries;
    std::optional<Hypothesis> h1;
    std::optional<Hypothesis> h2;
};

struct RunTrace {
    Algorithm algorithm = Algorithm::table1;
    std::vector<RoundRecord> rounds;
    bool converged = false;  // stopped early because the views agreed on the whole unqueried pool
    std::size_t labels() const { return rounds.empty() ? 0 : rounds.back().labels_cumulative; }
};

struct RunOptions {
    // Tops up contention shortfalls from U - Q, so every round spends its full budget
    // and no run stops early. Off by default: the plain loops stop on an empty
    // contention set and record shortfalls.
    bool fill_from_rest = false;
    // Called after each round's retraining.
    std::function<void(const RoundRecord&, const TwoViewLearner&)> on_round;
};

// Unqueried pool indices where the two views currently disagree.
std::vector<std::size_t> contention_set(const TwoViewLearner& learner, const LabelOracle& oracle);
std::vector<std::size_t> contention_set(const Hypothesis& h1, const Hypothesis& h2, const Pool& pool);

// table1: m0 random labels, then each round queries m_i points drawn uniformly from
// the current contention set and retrains both views on everything labeled so far.
RunTrace run_table1(LabelOracle& oracle, TwoViewLearner& learner, const Schedule& schedule,
                    std::uint64_t seed, const RunOptions& options = {});
RunTrace run_table1(Pool& pool, std::size_t n1, std::size_t n2, const Schedule& schedule,
                    std::uint64_t seed);

// table2: as table1, but round i also draws (2^i - 1) m_i labels uniformly from
// outside the contention set before retraining.
RunTrace run_table2(LabelOracle& oracle, TwoViewLearner& learner, const Schedule& schedule,
                    std::uint64_t seed, const RunOptions& options = {});
RunTrace run_table2(Pool& pool, std::size_t n1, std::size_t n2, const Schedule& schedule,
                    std::uint64_t seed);

// Baseline with the same budget shape: m0 then `per_round` labels per round, drawn
// uniformly from all unqueried points.
RunTrace run_random_sampling(LabelOracle& oracle, TwoViewLearner& learner, std::uint64_t initial,
                             std::uint64_t per_round, std::size_t rounds, std::uint64_t seed,
                             const RunOptions& options = {});

struct ChooserParams {
    double beta = 0.2;
    double delta = 0.05;
};

struct ChooserResult {
    Combination chosen = Combination::plus;
    double p_positive = 0.5;  // fraction of sampled contention labels equal to 1
    double p_negative = 0.5;
    std::size_t labels_requested = 0;
    std::size_t labels_used = 0;
    bool views_agree = false;  // empty contention set: h+ and h- coincide on the pool
    bool shortfall = false;    // fewer contention points than requested
};

// h+ and h- differ only on the contention set, where h+ says 0 and h- says 1, so
// R(h+) - R(h-) = Pr(Q, y=1) - Pr(Q, y=0). Picks minus when the sampled positive
// fraction exceeds the negative one, plus otherwise.
ChooserResult choose_combined(const TwoViewLearner& learner, LabelOracle& oracle, const ChooserParams& params,
                              std::uint64_t seed);
ChooserResult choose_combined(const Hypothesis& h1, const Hypothesis& h2, Pool& pool,
                              const ChooserParams& params, std::uint64_t seed);

// Label-free plug-in choice from labels already paid for: the same rule applied to the
// labeled points that sit in the current contention set.
Combination choose_from_labeled(const TwoViewLearner& learner, std::span<const std::size_t> labeled,
                                std::span<const Label> labels);

struct FullRun {
    RunTrace trace;
    ChooserResult chooser;
    std::optional<CombinedClassifier> classifier;  // world mode only
    std::size_t total_labels = 0;
};

FullRun run_full(LabelOracle& oracle, TwoViewLearner& learner, Algorithm algorithm, const Schedule& schedule,
                 const ChooserParams& chooser, std::uint64_t seed, const RunOptions& options = {});
FullRun run_full(Pool& pool, std::size_t n1, std::size_t n2, Algorithm algorithm, const Schedule& schedule,
                 const ChooserParams& chooser, std::uint64_t seed);

}  // namespace mval
