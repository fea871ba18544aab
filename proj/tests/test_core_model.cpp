#include <doctest.h>

#include "support.hpp"

using namespace mval;
using testing::oracle_error;
using testing::oracle_mass;
using testing::w4;

namespace {

Hypothesis h1_of(std::initializer_list<std::size_t> c, std::size_t n = 4) {
    return Hypothesis::from_indices(View::first, n, c);
}
Hypothesis h2_of(std::initializer_list<std::size_t> c, std::size_t n = 4) {
    return Hypothesis::from_indices(View::second, n, c);
}

ClusterWorld half_world() { return ClusterWorld(2, 2, {0.25, 0.25, 0.25, 0.25}, {0.5, 0.5, 0.5, 0.5}); }

}  // namespace

TEST_CASE("phi marginalizes the W4 table") {
    const auto w = w4();
    CHECK(phi(w, View::first, 0) == doctest::Approx(0.9).epsilon(1e-12));
    CHECK(phi(w, View::second, 3) == doctest::Approx(0.1).epsilon(1e-12));
    for (std::size_t c = 0; c < 4; ++c) {
        CHECK(std::abs(phi(w, View::first, c) - testing::oracle_phi(w, View::first, c)) <= 1e-12);
    }
    CHECK(phi(half_world(), View::second, 1) == 0.5);
}

TEST_CASE("phi rejects clusters without mass") {
    const ClusterWorld w(2, 2, {0.5, 0.5, 0.0, 0.0}, {0.3, 0.3, 0.3, 0.3});
    CHECK_THROWS_AS(phi(w, View::first, 1), DegenerateCluster);
    CHECK_NOTHROW(phi(w, View::second, 1));
}

TEST_CASE("world construction validates the tables") {
    CHECK_THROWS_AS(ClusterWorld(1, 2, {0.5, 0.6}, {0.5, 0.5}), InvalidArgument);
    CHECK_THROWS_AS(ClusterWorld(1, 2, {0.5, 0.5}, {0.5, 1.5}), InvalidArgument);
    CHECK_THROWS_AS(ClusterWorld(1, 2, {-0.5, 1.5}, {0.5, 0.5}), InvalidArgument);
    CHECK_THROWS_AS(ClusterWorld(2, 2, {1.0}, {0.5}), InvalidArgument);
}

TEST_CASE("bayes sets use the >= 1/2 convention") {
    const auto w = w4();
    CHECK(bayes_set(w, View::first) == h1_of({0, 1}));
    CHECK(bayes_set(w, View::second) == h2_of({0, 1}));
    CHECK(bayes_set(half_world(), View::first) == Hypothesis::from_indices(View::first, 2, {0, 1}));
}

TEST_CASE("error rates on W4") {
    const auto w = w4();
    CHECK(error_rate(w, bayes_set(w, View::first)) == doctest::Approx(0.1).epsilon(1e-12));
    CHECK(error_rate(w, CombinedClassifier(Combination::plus, h1_of({0, 1}), h2_of({0}))) ==
          doctest::Approx(0.3).epsilon(1e-12));
    const auto m = measures(w);
    CHECK(std::abs(error_rate(w, m.bayes_set_1.complement()) - (1.0 - m.bayes_risk_1)) <= 1e-12);
}

TEST_CASE("excess error examples") {
    const auto w = w4();
    CHECK(std::abs(excess_error(w, h1_of({0})) - 0.2) <= 1e-12);
    CHECK(excess_error(w, bayes_set(w, View::second)) == 0.0);
    CHECK(std::abs(excess_error(w, CombinedClassifier(Combination::minus, h1_of({0, 1}), h2_of({0})))) <= 1e-12);
}

TEST_CASE("pseudo distance examples") {
    const auto w = w4();
    CHECK(std::abs(pseudo_delta(w, h1_of({0}), h1_of({0, 1})) - 0.25) <= 1e-12);
    CHECK(pseudo_delta(w, h1_of({2}), h1_of({2})) == 0.0);
    CHECK(std::abs(pseudo_delta(w, h1_of({}), h1_of({0, 1, 2, 3})) - 1.0) <= 1e-12);
    CHECK_THROWS_AS(pseudo_delta(w, h1_of({0}), h2_of({0})), InvalidArgument);
}

TEST_CASE("contention mass examples") {
    const auto w = w4();
    CHECK(std::abs(contention_mass(w, h1_of({0, 1}), h2_of({0})) - 0.25) <= 1e-12);
    CHECK(contention_mass(w, h1_of({0, 3}), h2_of({0, 3})) == 0.0);
    CHECK(std::abs(contention_mass(w, h1_of({0, 1}), h2_of({2, 3})) - 1.0) <= 1e-12);
    const auto q = contention_region(h1_of({0, 1}), h2_of({0}));
    CHECK(q.contains(1, 1));
    CHECK_FALSE(q.contains(0, 0));
}

TEST_CASE("combination rules") {
    CHECK(predict_combined(Combination::plus, Label::positive, Label::negative) == Label::negative);
    CHECK(predict_combined(Combination::minus, Label::positive, Label::negative) == Label::positive);
    for (auto m : {Combination::plus, Combination::minus}) {
        CHECK(predict_combined(m, Label::positive, Label::positive) == Label::positive);
        CHECK(predict_combined(m, Label::negative, Label::negative) == Label::negative);
    }
    CHECK_THROWS_AS(CombinedClassifier(Combination::plus, h2_of({0}), h2_of({0})), InvalidArgument);
}

TEST_CASE("plus never predicts above minus; they differ exactly on the contention set") {
    Rng rng(11);
    for (int trial = 0; trial < 200; ++trial) {
        const auto h1 = testing::random_hypothesis(5, View::first, rng);
        const auto h2 = testing::random_hypothesis(6, View::second, rng);
        const CombinedClassifier p(Combination::plus, h1, h2), m(Combination::minus, h1, h2);
        const auto q = contention_region(h1, h2);
        for (std::size_t a = 0; a < 5; ++a) {
            for (std::size_t b = 0; b < 6; ++b) {
                const int yp = to_int(predict_combined(p, {a, b})), ym = to_int(predict_combined(m, {a, b}));
                CHECK(yp <= ym);
                CHECK((yp != ym) == q.contains(a, b));
            }
        }
    }
}

TEST_CASE("error difference identity and the plus/minus bounds on random worlds") {
    for (std::uint64_t s = 0; s < 20; ++s) {
        const auto w = testing::random_world(5, 4, 100 + s);
        const auto ref = reference_region(w);
        Rng rng(s);
        for (int trial = 0; trial < 50; ++trial) {
            const auto h1 = testing::random_hypothesis(5, View::first, rng);
            const auto h2 = testing::random_hypothesis(4, View::second, rng);
            const double rp = oracle_error(w, [&](auto a, auto b) { return h1.contains(a) && h2.contains(b); });
            const double rm = oracle_error(w, [&](auto a, auto b) { return h1.contains(a) || h2.contains(b); });
            double q1 = 0.0, q0 = 0.0;
            for (std::size_t a = 0; a < 5; ++a) {
                for (std::size_t b = 0; b < 4; ++b) {
                    if (h1.contains(a) == h2.contains(b)) continue;
                    q1 += w.mass(a, b) * w.psi(a, b);
                    q0 += w.mass(a, b) * (1.0 - w.psi(a, b));
                }
            }
            CHECK(std::abs((rp - rm) - (q1 - q0)) <= 1e-12);
            const double rp_lib = error_rate(w, CombinedClassifier(Combination::plus, h1, h2));
            const double rm_lib = error_rate(w, CombinedClassifier(Combination::minus, h1, h2));
            CHECK(std::abs(rp_lib - rp) <= 1e-12);
            CHECK(std::abs(rm_lib - rm) <= 1e-12);

            const double r_ref = oracle_error(w, [&](auto a, auto b) { return ref.contains(a, b); });
            const double d_int = oracle_mass(w, [&](auto a, auto b) {
                return (h1.contains(a) && h2.contains(b)) != ref.contains(a, b);
            });
            const double d_uni = oracle_mass(w, [&](auto a, auto b) {
                return (h1.contains(a) || h2.contains(b)) != ref.contains(a, b);
            });
            CHECK(rp - r_ref <= d_int + 1e-12);
            CHECK(rm - r_ref <= d_uni + 1e-12);
        }
    }
}

TEST_CASE("excess error agrees with its integral form and sits below the pseudo distance") {
    for (std::uint64_t s = 0; s < 20; ++s) {
        const auto w = testing::random_world(6, 3, 500 + s);
        Rng rng(s);
        for (View v : {View::first, View::second}) {
            const auto best = bayes_set(w, v);
            for (int trial = 0; trial < 30; ++trial) {
                const auto h = testing::random_hypothesis(w.clusters(v), v, rng);
                const double d = excess_error(w, h);
                CHECK(std::abs(d - excess_error_integral(w, h)) <= 1e-12);
                const double dd = pseudo_delta(w, h, best);
                CHECK(d >= -1e-12);
                CHECK(d <= dd + 1e-12);
                CHECK(dd <= 1.0 + 1e-12);
            }
        }
    }
}

TEST_CASE("world measures respect their ranges") {
    for (std::uint64_t s = 0; s < 30; ++s) {
        const auto w = testing::random_world(4, 5, 900 + s);
        const auto m = measures(w);
        for (View v : {View::first, View::second}) {
            CHECK(m.bayes_risk(v) >= 0.0);
            CHECK(m.bayes_risk(v) <= 0.5 + 1e-12);
        }
        // No pair-level rule beats predicting each pair's majority label.
        double pair_bayes = 0.0;
        for (std::size_t a = 0; a < w.n1(); ++a) {
            for (std::size_t b = 0; b < w.n2(); ++b) pair_bayes += w.mass(a, b) * std::min(w.psi(a, b), 1.0 - w.psi(a, b));
        }
        CHECK(m.joint_bayes_intersection_risk >= pair_bayes - 1e-12);
    }
}

TEST_CASE("world JSON round-trips bit for bit") {
    for (std::uint64_t s = 0; s < 10; ++s) {
        const auto w = testing::random_world(3, 4, 42 + s);
        CHECK(world_from_json(world_to_json(w)) == w);
    }
    CHECK_THROWS_AS(world_from_json("{\"n1\": 1}"), InvalidArgument);
    CHECK_THROWS_AS(world_from_json("not json"), InvalidArgument);
    const auto path = std::filesystem::temp_directory_path() / "mval_world_roundtrip.json";
    write_world(w4(), path);
    CHECK(read_world(path) == w4());
    std::filesystem::remove(path);
}

TEST_CASE("checked-in W4 fixture matches the generator") { CHECK(read_world(testing::fixture("w4.json")) == w4()); }
