#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "mval/cluster_world.hpp"
#include "mval/dataset.hpp"
#include "mval/pool.hpp"

namespace mval {

// Declarative cluster world. Both views have `clusters_per_view` clusters and share the
// class layout; each view-1 cluster links to `compatibility` view-2 clusters of its own
// class. Links are circulant within a class: position j links to positions
// j, j+1, ..., j+compatibility-1 (mod class size), so every view-2 cluster also
// receives exactly `compatibility` links.
struct WorldSpec {
    std::size_t clusters_per_view = 4;
    std::size_t compatibility = 1;
    std::vector<std::size_t> positive_clusters;  // class layout; the rest are negative
    std::vector<double> margins;                 // |psi - 1/2|; one value, or one per view-1 cluster
    std::vector<double> masses;                  // empty = uniform; else one per view-1 cluster
    bool shuffle_links = false;                  // permute view-2 positions within each class by seed
};

// Pair mass of a view-1 cluster is split evenly over its links; psi(a, b) = 1/2 ± margin(a).
// View-1 marginals reproduce the spec margins exactly. View-2 marginals do too whenever
// margins and masses are constant within a class or compatibility is 1 without shuffling.
ClusterWorld build_world(const WorldSpec& spec, std::uint64_t seed);

// The four-cluster reference world: identity pairing, uniform mass, clusters {0,1}
// positive, margin 0.4 everywhere.
WorldSpec w4_spec();

Pool sample_pool(const ClusterWorld& w, std::size_t m, std::uint64_t seed);

struct SynthBaseParams {
    std::size_t clusters_per_class = 1;
    std::size_t features = 20;
    std::size_t arity = 4;
    double flip_noise = 0.2;
    double positive_fraction = 0.5;
    std::size_t size = 1600;
};

struct BaseDataset {
    CategoricalDataset data;
    std::vector<std::vector<Features>> prototypes;  // [class][cluster]
    std::vector<std::size_t> cluster_of;            // prototype index of each example
};

// Each class is a uniform mixture of categorical prototypes; every feature keeps its
// prototype value with probability 1 - flip_noise and otherwise takes one of the
// other values uniformly.
BaseDataset synth_base(const SynthBaseParams& p, std::uint64_t seed);

inline constexpr std::size_t kSemiArtificialSize = 800;

// Pairs distinct same-class base examples by a uniform random matching inside each
// class, then keeps `size` of the matched pairs in random order.
TwoViewDataset semi_artificial(const CategoricalDataset& base, std::uint64_t seed,
                               std::size_t size = kSemiArtificialSize);

// synth_base sized for `size` matches followed by semi_artificial.
TwoViewDataset make_semi_artificial(SynthBaseParams p, std::uint64_t seed,
                                    std::size_t size = kSemiArtificialSize);

}  // namespace mval
