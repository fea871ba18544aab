#include "mval/algorithms.hpp"

#include <algorithm>
#include <limits>

#include "mval/rng.hpp"

namespace mval {

const char* to_string(Algorithm a) {
    switch (a) {
        case Algorithm::table1: return "table1";
        case Algorithm::table2: return "table2";
        case Algorithm::random: return "random";
    }
    return "?";
}

Algorithm algorithm_from_string(const std::string& s) {
    if (s == "table1") return Algorithm::table1;
    if (s == "table2") return Algorithm::table2;
    if (s == "random") return Algorithm::random;
    throw InvalidArgument("unknown algorithm '" + s + "' (expected table1, table2 or random)");
}

std::vector<std::size_t> contention_set(const TwoViewLearner& learner, const LabelOracle& oracle) {
    std::vector<std::size_t> q;
    for (std::size_t i = 0; i < oracle.size(); ++i) {
        if (oracle.queried(i)) continue;
        if (learner.predict(View::first, i) != learner.predict(View::second, i)) q.push_back(i);
    }
    return q;
}

std::vector<std::size_t> contention_set(const Hypothesis& h1, const Hypothesis& h2, const Pool& pool) {
    ClusterErmLearner learner(pool.instances, h1.clusters(), h2.clusters());
    learner.set(h1, h2);
    return contention_set(learner, pool.oracle);
}

namespace {

// Labels gathered by one run, in query order.
class RunState {
public:
    RunState(LabelOracle& oracle, TwoViewLearner& learner, std::uint64_t seed, const RunOptions& options)
        : oracle_(oracle), learner_(learner), rng_(seed), options_(options) {
        if (learner.pool_size() != oracle.size()) throw InvalidArgument("learner and oracle cover different pools");
    }

    std::vector<std::size_t> draw(const std::vector<std::size_t>& from, std::uint64_t k) {
        return rng_.sample(from, static_cast<std::size_t>(std::min<std::uint64_t>(k, from.size())));
    }

    void query(const std::vector<std::size_t>& indices) {
        for (auto i : indices) {
            labels_.push_back(oracle_.query(i));
            labeled_.push_back(i);
        }
    }

    std::vector<std::size_t> outside(const std::vector<std::size_t>& q) const {
        std::vector<bool> in_q(oracle_.size(), false);
        for (auto i : q) in_q[i] = true;
        std::vector<std::size_t> rest;
        for (std::size_t i = 0; i < oracle_.size(); ++i) {
            if (!oracle_.queried(i) && !in_q[i]) rest.push_back(i);
        }
        return rest;
    }

    // Retrains, measures the new contention set and appends the record.
    void finish_round(RunTrace& trace, RoundRecord rec) {
        learner_.fit(labeled_, labels_);
        rec.round = trace.rounds.size();
        rec.labels_cumulative = labeled_.size();
        rec.contention_size = contention_set(learner_, oracle_).size();
        if (auto hs = learner_.hypotheses()) {
            rec.h1 = std::move(hs->first);
            rec.h2 = std::move(hs->second);
        }
        trace.rounds.push_back(std::move(rec));
        if (options_.on_round) options_.on_round(trace.rounds.back(), learner_);
    }

    void initial_round(RunTrace& trace, std::uint64_t m0) {
        const auto all = oracle_.unqueried();
        if (all.size() < m0) throw InvalidArgument("pool has fewer unqueried points than the initial sample");
        RoundRecord rec;
        rec.rest_queries = draw(all, m0);
        rec.from_rest = rec.rest_queries.size();
        query(rec.rest_queries);
        finish_round(trace, std::move(rec));
    }

    LabelOracle& oracle() { return oracle_; }
    TwoViewLearner& learner() { return learner_; }
    const RunOptions& options() const { return options_; }

private:
    LabelOracle& oracle_;
    TwoViewLearner& learner_;
    Rng rng_;
    const RunOptions& options_;
    std::vector<std::size_t> labeled_;
    std::vector<Label> labels_;
};

void check_schedule(const Schedule& s) {
    if (s.m.size() != s.rounds + 1) throw InvalidArgument("schedule needs rounds + 1 query counts");
}

std::uint64_t doubling_extra(std::size_t i, std::uint64_t m) {
    if (i >= 63) throw InvalidArgument("round index too large for doubling budget");
    const std::uint64_t factor = (std::uint64_t{1} << i) - 1;
    if (m != 0 && factor > std::numeric_limits<std::uint64_t>::max() / m) {
        throw InvalidArgument("doubling budget overflows");
    }
    return factor * m;
}

}  // namespace

RunTrace run_table1(LabelOracle& oracle, TwoViewLearner& learner, const Schedule& schedule, std::uint64_t seed,
                    const RunOptions& options) {
    check_schedule(schedule);
    RunState st(oracle, learner, seed, options);
    RunTrace trace;
    trace.algorithm = Algorithm::table1;
    st.initial_round(trace, schedule.initial());
    for (std::size_t i = 1; i <= schedule.rounds; ++i) {
        const auto q = contention_set(st.learner(), st.oracle());
        if (q.empty() && !options.fill_from_rest) {
            trace.converged = true;
            break;
        }
        const std::uint64_t want = schedule.per_round(i);
        RoundRecord rec;
        rec.contention_queries = st.draw(q, want);
        rec.from_contention = rec.contention_queries.size();
        std::uint64_t missing = want - rec.from_contention;
        if (missing > 0 && options.fill_from_rest) {
            rec.rest_queries = st.draw(st.outside(q), missing);
            rec.from_rest = rec.rest_queries.size();
            missing -= rec.from_rest;
        }
        rec.shortfall = static_cast<std::size_t>(missing);
        if (rec.from_contention + rec.from_rest == 0) {
            trace.converged = q.empty();
            break;
        }
        st.query(rec.contention_queries);
        st.query(rec.rest_queries);
        st.finish_round(trace, std::move(rec));
    }
    return trace;
}

RunTrace run_table2(LabelOracle& oracle, TwoViewLearner& learner, const Schedule& schedule, std::uint64_t seed,
                    const RunOptions& options) {
    check_schedule(schedule);
    RunState st(oracle, learner, seed, options);
    RunTrace trace;
    trace.algorithm = Algorithm::table2;
    st.initial_round(trace, schedule.initial());
    for (std::size_t i = 1; i <= schedule.rounds; ++i) {
        const auto q = contention_set(st.learner(), st.oracle());
        if (q.empty() && !options.fill_from_rest) {
            trace.converged = true;
            break;
        }
        const std::uint64_t want_q = schedule.per_round(i);
        const std::uint64_t want_rest = doubling_extra(i, want_q);
        RoundRecord rec;
        rec.contention_queries = st.draw(q, want_q);
        rec.from_contention = rec.contention_queries.size();
        std::uint64_t rest_target = want_rest;
        if (options.fill_from_rest) rest_target += want_q - rec.from_contention;
        rec.rest_queries = st.draw(st.outside(q), rest_target);
        rec.from_rest = rec.rest_queries.size();
        rec.shortfall = static_cast<std::size_t>(want_q + want_rest - rec.from_contention - rec.from_rest);
        if (rec.from_contention + rec.from_rest == 0) {
            trace.converged = q.empty();
            break;
        }
        st.query(rec.contention_queries);
        st.query(rec.rest_queries);
        st.finish_round(trace, std::move(rec));
    }
    return trace;
}

RunTrace run_random_sampling(LabelOracle& oracle, TwoViewLearner& learner, std::uint64_t initial,
                             std::uint64_t per_round, std::size_t rounds, std::uint64_t seed,
                             const RunOptions& options) {
    RunState st(oracle, learner, seed, options);
    RunTrace trace;
    trace.algorithm = Algorithm::random;
    st.initial_round(trace, initial);
    for (std::size_t i = 1; i <= rounds; ++i) {
        const auto left = st.oracle().unqueried();
        if (left.empty()) break;
        RoundRecord rec;
        rec.rest_queries = st.draw(left, per_round);
        rec.from_rest = rec.rest_queries.size();
        rec.shortfall = static_cast<std::size_t>(per_round - rec.from_rest);
        st.query(rec.rest_queries);
        st.finish_round(trace, std::move(rec));
    }
    return trace;
}

RunTrace run_table1(Pool& pool, std::size_t n1, std::size_t n2, const Schedule& schedule, std::uint64_t seed) {
    ClusterErmLearner learner(pool.instances, n1, n2);
    return run_table1(pool.oracle, learner, schedule, seed);
}

RunTrace run_table2(Pool& pool, std::size_t n1, std::size_t n2, const Schedule& schedule, std::uint64_t seed) {
    ClusterErmLearner learner(pool.instances, n1, n2);
    return run_table2(pool.oracle, learner, schedule, seed);
}

ChooserResult choose_combined(const TwoViewLearner& learner, LabelOracle& oracle, const ChooserParams& params,
                              std::uint64_t seed) {
    ChooserResult r;
    r.labels_requested = static_cast<std::size_t>(chooser_sample_size(params.beta, params.delta));
    const auto q = contention_set(learner, oracle);
    if (q.empty()) {
        r.views_agree = true;
        return r;
    }
    Rng rng(seed);
    const auto picked = rng.sample(q, std::min(q.size(), r.labels_requested));
    r.shortfall = picked.size() < r.labels_requested;
    std::size_t pos = 0;
    for (auto i : picked) pos += oracle.query(i) == Label::positive;
    r.labels_used = picked.size();
    r.p_positive = static_cast<double>(pos) / static_cast<double>(picked.size());
    r.p_negative = 1.0 - r.p_positive;
    r.chosen = r.p_positive > r.p_negative ? Combination::minus : Combination::plus;
    return r;
}

ChooserResult choose_combined(const Hypothesis& h1, const Hypothesis& h2, Pool& pool, const ChooserParams& params,
                              std::uint64_t seed) {
    ClusterErmLearner learner(pool.instances, h1.clusters(), h2.clusters());
    learner.set(h1, h2);
    return choose_combined(learner, pool.oracle, params, seed);
}

Combination choose_from_labeled(const TwoViewLearner& learner, std::span<const std::size_t> labeled,
                                std::span<const Label> labels) {
    std::size_t pos = 0, neg = 0;
    for (std::size_t k = 0; k < labeled.size(); ++k) {
        const auto i = labeled[k];
        if (learner.predict(View::first, i) == learner.predict(View::second, i)) continue;
        (labels[k] == Label::positive ? pos : neg)++;
    }
    return pos > neg ? Combination::minus : Combination::plus;
}

FullRun run_full(LabelOracle& oracle, TwoViewLearner& learner, Algorithm algorithm, const Schedule& schedule,
                 const ChooserParams& chooser, std::uint64_t seed, const RunOptions& options) {
    FullRun out;
    const std::uint64_t loop_seed = derive_seed(seed, 0);
    switch (algorithm) {
        case Algorithm::table1: out.trace = run_table1(oracle, learner, schedule, loop_seed, options); break;
        case Algorithm::table2: out.trace = run_table2(oracle, learner, schedule, loop_seed, options); break;
        case Algorithm::random:
            out.trace = run_random_sampling(oracle, learner, schedule.initial(),
                                            schedule.rounds >= 1 ? schedule.per_round(1) : 0, schedule.rounds,
                                            loop_seed, options);
            break;
    }
    out.chooser = choose_combined(learner, oracle, chooser, derive_seed(seed, 1));
    out.total_labels = out.trace.labels() + out.chooser.labels_used;
    if (auto hs = learner.hypotheses()) {
        out.classifier.emplace(out.chooser.chosen, std::move(hs->first), std::move(hs->second));
    }
    return out;
}

FullRun run_full(Pool& pool, std::size_t n1, std::size_t n2, Algorithm algorithm, const Schedule& schedule,
                 const ChooserParams& chooser, std::uint64_t seed) {
    ClusterErmLearner learner(pool.instances, n1, n2);
    return run_full(pool.oracle, learner, algorithm, schedule, chooser, seed);
}

}  // namespace mval
