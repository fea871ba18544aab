#include <doctest.h>

#include <cmath>

#include "mval/learners.hpp"
#include "mval/two_view_learner.hpp"
#include "support.hpp"

using namespace mval;

namespace {

std::vector<LabeledCluster> labeled(std::initializer_list<std::pair<std::size_t, int>> items) {
    std::vector<LabeledCluster> out;
    for (auto [c, y] : items) out.push_back({c, to_label(y == 1)});
    return out;
}

// Independent oracle: minimum training error over all 2^n subsets.
std::size_t oracle_min_risk(const std::vector<LabeledCluster>& data, std::size_t n) {
    std::size_t best = data.size();
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << n); ++mask) {
        std::size_t risk = 0;
        for (const auto& e : data) risk += (((mask >> e.cluster) & 1U) != 0) != (e.label == Label::positive);
        best = std::min(best, risk);
    }
    return best;
}

}  // namespace

TEST_CASE("ERM tie rule example") {
    const auto data = labeled({{0, 1}, {0, 1}, {0, 0}, {1, 0}});
    // Global labels are two 1s and two 0s: a tie, so the unseen cluster 2 goes to 0.
    CHECK(erm_cluster(data, View::first, 3) == Hypothesis::from_indices(View::first, 3, {0}));
    CHECK(erm_bruteforce(data, View::first, 3) == Hypothesis::from_indices(View::first, 3, {0}));
}

TEST_CASE("ERM with all-positive labels marks every cluster positive") {
    const auto data = labeled({{1, 1}, {3, 1}});
    CHECK(erm_cluster(data, View::second, 5) == Hypothesis::from_indices(View::second, 5, {0, 1, 2, 3, 4}));
}

TEST_CASE("ERM edge cases") {
    CHECK_THROWS_AS(erm_cluster({}, View::first, 3), InvalidArgument);
    CHECK_THROWS_AS(erm_cluster(labeled({{3, 1}}), View::first, 3), InvalidArgument);
    CHECK(erm_bruteforce(labeled({{2, 1}}), View::first, 4).contains(2));
    CHECK(erm_bruteforce(labeled({{0, 0}, {0, 1}}), View::first, 1).positive_indices().empty());
    CHECK(erm_cluster(labeled({{0, 0}, {0, 1}}), View::first, 1).positive_indices().empty());
    CHECK_THROWS_AS(erm_bruteforce(labeled({{0, 1}}), View::first, kBruteForceMaxClusters + 1), InvalidArgument);
}

TEST_CASE("ERM matches exhaustive search on random labeled sets") {
    Rng rng(2024);
    for (int trial = 0; trial < 200; ++trial) {
        const std::size_t n = 1 + rng.index(10);
        const std::size_t size = 1 + rng.index(30);
        std::vector<LabeledCluster> data;
        for (std::size_t i = 0; i < size; ++i) data.push_back({rng.index(n), to_label(rng.bernoulli(0.5))});
        const auto fast = erm_cluster(data, View::first, n);
        const auto slow = erm_bruteforce(data, View::first, n);
        CHECK(empirical_risk(fast, data) == oracle_min_risk(data, n));
        CHECK(empirical_risk(slow, data) == oracle_min_risk(data, n));
        CHECK(fast == slow);
    }
}

TEST_CASE("adding an agreeing example never flips a cluster majority") {
    Rng rng(5);
    for (int trial = 0; trial < 200; ++trial) {
        const std::size_t n = 1 + rng.index(6);
        std::vector<LabeledCluster> data;
        for (std::size_t i = 0, size = 1 + rng.index(15); i < size; ++i) {
            data.push_back({rng.index(n), to_label(rng.bernoulli(0.5))});
        }
        const std::size_t c = rng.index(n);
        std::size_t pos = 0, neg = 0;
        for (const auto& e : data) {
            if (e.cluster == c) (e.label == Label::positive ? pos : neg)++;
        }
        if (pos == neg) continue;
        const Label majority = to_label(pos > neg);
        data.push_back({c, majority});
        CHECK(erm_cluster(data, View::first, n).predict(c) == majority);
    }
}

TEST_CASE("naive Bayes hand posterior") {
    const std::vector<Features> rows = {{1}, {1}, {1}, {0}, {0}, {0}};
    const std::vector<Label> y = {Label::positive, Label::positive, Label::positive,
                                  Label::negative, Label::negative, Label::negative};
    const auto m = nb_train(rows, y, {2});
    CHECK(nb_predict(m, {1}) == Label::positive);
    CHECK(nb_predict(m, {0}) == Label::negative);
    CHECK(std::abs(m.log_score(Label::positive, {1}) - std::log(0.5 * 4.0 / 5.0)) <= 1e-12);
    CHECK(std::abs(m.log_score(Label::negative, {1}) - std::log(0.5 * 1.0 / 5.0)) <= 1e-12);
}

TEST_CASE("naive Bayes breaks symmetric ties toward 0") {
    const std::vector<Features> rows = {{0, 1}, {1, 0}};
    const std::vector<Label> y = {Label::positive, Label::negative};
    const auto m = nb_train(rows, y, {2, 2});
    CHECK(m.log_score(Label::positive, {0, 0}) == m.log_score(Label::negative, {0, 0}));
    CHECK(nb_predict(m, {0, 0}) == Label::negative);
}

TEST_CASE("naive Bayes scores are finite for every input") {
    const std::vector<Features> rows = {{0, 0, 0}};
    const std::vector<Label> y = {Label::positive};
    const auto m = nb_train(rows, y, {3, 3, 3});
    for (int a = 0; a < 3; ++a) {
        for (int b = 0; b < 3; ++b) {
            for (int c = 0; c < 3; ++c) {
                for (Label cls : {Label::negative, Label::positive}) CHECK(std::isfinite(m.log_score(cls, {a, b, c})));
            }
        }
    }
    CHECK_THROWS_AS(m.log_score(Label::positive, {0, 0, 3}), InvalidArgument);
    CHECK_THROWS_AS(m.log_score(Label::positive, {0, 0}), InvalidArgument);
    CHECK_THROWS_AS(nb_train(rows, y, {3, 3, 3}, 0.0), InvalidArgument);
    CHECK_THROWS_AS(nb_train({{0, 0, 5}}, y, {3, 3, 3}), InvalidArgument);
}

TEST_CASE("duplicating the training set leaves naive Bayes unchanged when smoothing scales with it") {
    SynthBaseParams p;
    p.size = 40;
    p.features = 6;
    p.arity = 3;
    p.flip_noise = 0.3;
    const auto base = synth_base(p, 19).data;
    std::vector<Features> rows2 = base.rows;
    rows2.insert(rows2.end(), base.rows.begin(), base.rows.end());
    std::vector<Label> y2 = base.labels;
    y2.insert(y2.end(), base.labels.begin(), base.labels.end());
    const auto once = nb_train(base.rows, base.labels, base.arities, 1.0);
    const auto twice = nb_train(rows2, y2, base.arities, 2.0);
    const auto probe = synth_base(p, 20).data;
    for (const auto& x : probe.rows) {
        CHECK(nb_predict(once, x) == nb_predict(twice, x));
        for (Label cls : {Label::negative, Label::positive}) CHECK(once.log_score(cls, x) == twice.log_score(cls, x));
    }
}

TEST_CASE("naive Bayes learner trains on the labels it is given") {
    SynthBaseParams p;
    p.features = 8;
    auto data = make_semi_artificial(p, 4, 120);
    std::vector<std::size_t> pool_rows;
    for (std::size_t i = 0; i < 100; ++i) pool_rows.push_back(i);
    const std::vector<std::size_t> idx = {0, 1, 2, 3, 4, 5, 6, 7, 8, 9};
    std::vector<Label> y;
    for (auto i : idx) y.push_back(data.labels[i]);

    NaiveBayesLearner a(data, pool_rows);
    a.fit(idx, y);
    std::vector<Label> before;
    for (std::size_t r = 0; r < data.size(); ++r) before.push_back(a.predict_features(View::first, data.view1[r]));

    auto scrambled = data;
    for (std::size_t r = 10; r < scrambled.size(); ++r) scrambled.labels[r] = to_label(r % 2 == 0);
    NaiveBayesLearner b(scrambled, pool_rows);
    b.fit(idx, y);
    for (std::size_t r = 0; r < data.size(); ++r) CHECK(b.predict_features(View::first, data.view1[r]) == before[r]);

    NaiveBayesLearner unfit(data, pool_rows);
    CHECK_THROWS_AS(unfit.predict(View::first, 0), Error);
    CHECK_THROWS_AS(NaiveBayesLearner(data, {500}), InvalidArgument);
}

TEST_CASE("cluster learner retrains from scratch") {
    const auto w = testing::w4();
    auto pool = sample_pool(w, 200, 3);
    ClusterErmLearner l(pool.instances, 4, 4);
    std::vector<std::size_t> idx;
    std::vector<Label> y;
    for (std::size_t i = 0; i < 50; ++i) {
        idx.push_back(i);
        y.push_back(pool.oracle.peek(i));
    }
    l.fit(idx, y);
    const auto first = l.hypotheses();
    l.fit(std::span(idx).first(10), std::span(y).first(10));
    ClusterErmLearner fresh(pool.instances, 4, 4);
    fresh.fit(std::span(idx).first(10), std::span(y).first(10));
    CHECK(l.hypotheses() == fresh.hypotheses());
    REQUIRE(first);
    for (std::size_t i = 0; i < pool.size(); ++i) {
        CHECK(l.predict(View::first, i) == l.hypotheses()->first.predict(pool.instances[i].a));
    }
}
