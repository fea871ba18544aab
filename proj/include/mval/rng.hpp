#pragma once

#include <cstdint>
#include <random>
#include <vector>

namespace mval {

// splitmix64 finalizer; used to derive independent stream seeds from a master seed.
inline std::uint64_t mix_seed(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

// Seed for stream `counter` under `master`. Runs, methods and sub-steps each take a
// distinct counter so any single run can be replayed in isolation.
inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t counter) {
    return mix_seed(mix_seed(master) ^ mix_seed(counter + 0x632be59bd9b4e019ULL));
}

// mt19937_64 with distribution code kept in-house: the standard distributions are
// implementation-defined, and output bytes must not depend on the library vendor.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next() { return engine_(); }

    // Uniform in [0, 1) with 53 random bits.
    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    // Uniform integer in [0, n). Rejection sampling, no modulo bias.
    std::size_t index(std::size_t n) {
        const std::uint64_t bound = static_cast<std::uint64_t>(n);
        const std::uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
        std::uint64_t r;
        do {
            r = engine_();
        } while (r >= limit);
        return static_cast<std::size_t>(r % bound);
    }

    bool bernoulli(double p) { return uniform() < p; }

    template <typename T>
    void shuffle(std::vector<T>& v) {
        for (std::size_t i = v.size(); i > 1; --i) {
            std::swap(v[i - 1], v[index(i)]);
        }
    }

    // k distinct elements of `from`, in draw order (partial Fisher-Yates).
    template <typename T>
    std::vector<T> sample(std::vector<T> from, std::size_t k) {
        if (k > from.size()) k = from.size();
        for (std::size_t i = 0; i < k; ++i) {
            std::swap(from[i], from[i + index(from.size() - i)]);
        }
        from.resize(k);
        return from;
    }

private:
    std::mt19937_64 engine_;
};

}  // namespace mval
