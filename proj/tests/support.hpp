#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <vector>

#include "mval/cluster_world.hpp"
#include "mval/datagen.hpp"
#include "mval/rng.hpp"
#include "mval/world_io.hpp"

namespace testing {

using namespace mval;

inline std::filesystem::path fixture(const char* name) { return std::filesystem::path(MVAL_FIXTURE_DIR) / name; }

inline ClusterWorld w4() { return build_world(w4_spec(), 0); }

// Random joint table with some zero cells, masses normalized by the sum.
inline ClusterWorld random_world(std::size_t n1, std::size_t n2, std::uint64_t seed) {
    Rng rng(seed);
    std::vector<double> mass(n1 * n2), psi(n1 * n2);
    double total = 0.0;
    for (auto& m : mass) {
        m = rng.bernoulli(0.25) ? 0.0 : rng.uniform() + 0.01;
        total += m;
    }
    for (auto& m : mass) m /= total;
    double check = 0.0;
    for (double m : mass) check += m;
    *std::max_element(mass.begin(), mass.end()) += 1.0 - check;
    for (auto& p : psi) p = rng.uniform();
    return ClusterWorld(n1, n2, mass, psi);
}

inline Hypothesis random_hypothesis(std::size_t n, View v, Rng& rng) {
    std::vector<bool> bits(n);
    for (std::size_t c = 0; c < n; ++c) bits[c] = rng.bernoulli(0.5);
    return Hypothesis(v, bits);
}

// Direct sums over the pair table; independent of the library's region algebra.
inline double oracle_error(const ClusterWorld& w, const std::function<bool(std::size_t, std::size_t)>& predict_one) {
    double r = 0.0;
    for (std::size_t a = 0; a < w.n1(); ++a) {
        for (std::size_t b = 0; b < w.n2(); ++b) {
            r += w.mass(a, b) * (predict_one(a, b) ? 1.0 - w.psi(a, b) : w.psi(a, b));
        }
    }
    return r;
}

inline double oracle_mass(const ClusterWorld& w, const std::function<bool(std::size_t, std::size_t)>& in) {
    double r = 0.0;
    for (std::size_t a = 0; a < w.n1(); ++a) {
        for (std::size_t b = 0; b < w.n2(); ++b) {
            if (in(a, b)) r += w.mass(a, b);
        }
    }
    return r;
}

inline double oracle_phi(const ClusterWorld& w, View v, std::size_t c) {
    double num = 0.0, den = 0.0;
    for (std::size_t a = 0; a < w.n1(); ++a) {
        for (std::size_t b = 0; b < w.n2(); ++b) {
            if ((v == View::first ? a : b) != c) continue;
            num += w.mass(a, b) * w.psi(a, b);
            den += w.mass(a, b);
        }
    }
    return num / den;
}

}  // namespace testing
