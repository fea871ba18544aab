#include "mval/datagen.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "mval/rng.hpp"

namespace mval {

namespace {

double per_cluster(const std::vector<double>& v, std::size_t i) { return v.size() == 1 ? v[0] : v[i]; }

}  // namespace

WorldSpec w4_spec() {
    WorldSpec s;
    s.clusters_per_view = 4;
    s.compatibility = 1;
    s.positive_clusters = {0, 1};
    s.margins = {0.4};
    return s;
}

ClusterWorld build_world(const WorldSpec& spec, std::uint64_t seed) {
    const std::size_t n = spec.clusters_per_view;
    if (n == 0) throw InvalidArgument("world needs at least one cluster per view");
    if (spec.compatibility < 1) throw InvalidArgument("compatibility must be >= 1");
    if (spec.margins.size() != 1 && spec.margins.size() != n) {
        throw InvalidArgument("margins must have one entry or one per cluster");
    }
    for (double m : spec.margins) {
        if (!(m >= 0.0 && m <= 0.5)) throw InvalidArgument("margins must lie in [0, 1/2]");
    }
    std::vector<double> row_mass(n, 1.0 / static_cast<double>(n));
    if (!spec.masses.empty()) {
        if (spec.masses.size() != n) throw InvalidArgument("masses must have one entry per cluster");
        double total = 0.0;
        for (double m : spec.masses) {
            if (!(m > 0.0)) throw InvalidArgument("cluster masses must be positive");
            total += m;
        }
        if (std::abs(total - 1.0) > kExactTolerance) throw InvalidArgument("cluster masses must sum to 1");
        row_mass = spec.masses;
    }

    std::vector<bool> positive(n, false);
    for (auto c : spec.positive_clusters) {
        if (c >= n) throw InvalidArgument("positive cluster index out of range");
        positive[c] = true;
    }

    Rng rng(seed);
    std::vector<double> pair_mass(n * n, 0.0);
    std::vector<double> label_prob(n * n, 0.5);
    for (bool cls : {true, false}) {
        std::vector<std::size_t> members;
        for (std::size_t c = 0; c < n; ++c) {
            if (positive[c] == cls) members.push_back(c);
        }
        if (members.empty()) continue;
        const std::size_t k = members.size();
        if (spec.compatibility > k) {
            throw InvalidArgument("compatibility " + std::to_string(spec.compatibility) + " exceeds the " +
                                  std::to_string(k) + " clusters of class " + (cls ? "1" : "0"));
        }
        std::vector<std::size_t> partners = members;
        if (spec.shuffle_links) rng.shuffle(partners);
        for (std::size_t j = 0; j < k; ++j) {
            const std::size_t a = members[j];
            const double margin = per_cluster(spec.margins, a);
            const double p = cls ? 0.5 + margin : 0.5 - margin;
            for (std::size_t t = 0; t < spec.compatibility; ++t) {
                const std::size_t b = partners[(j + t) % k];
                pair_mass[a * n + b] = row_mass[a] / static_cast<double>(spec.compatibility);
                label_prob[a * n + b] = p;
            }
        }
    }
    return ClusterWorld(n, n, std::move(pair_mass), std::move(label_prob));
}

Pool sample_pool(const ClusterWorld& w, std::size_t m, std::uint64_t seed) {
    if (m < 1) throw InvalidArgument("pool size must be >= 1");
    // Inverse-CDF sampling over the flattened pair table.
    std::vector<double> cdf(w.pair_mass().size());
    std::partial_sum(w.pair_mass().begin(), w.pair_mass().end(), cdf.begin());
    Rng rng(seed);
    Pool pool;
    pool.instances.reserve(m);
    std::vector<Label> labels;
    labels.reserve(m);
    for (std::size_t i = 0; i < m; ++i) {
        const double u = rng.uniform() * cdf.back();
        auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
        std::size_t cell = static_cast<std::size_t>(it - cdf.begin());
        if (cell >= cdf.size()) cell = cdf.size() - 1;
        // Skip zero-mass cells that share a CDF value with their successor.
        while (w.pair_mass()[cell] <= 0.0 && cell + 1 < cdf.size()) ++cell;
        const ClusterPair p{cell / w.n2(), cell % w.n2()};
        pool.instances.push_back(p);
        labels.push_back(to_label(rng.bernoulli(w.psi(p))));
    }
    pool.oracle = LabelOracle(std::move(labels));
    return pool;
}

BaseDataset synth_base(const SynthBaseParams& p, std::uint64_t seed) {
    if (p.features < 1) throw InvalidArgument("features must be >= 1");
    if (p.clusters_per_class < 1) throw InvalidArgument("clusters_per_class must be >= 1");
    if (p.arity < 2) throw InvalidArgument("arity must be >= 2");
    if (!(p.flip_noise >= 0.0 && p.flip_noise < 0.5)) throw InvalidArgument("flip_noise must lie in [0, 1/2)");
    if (!(p.positive_fraction >= 0.0 && p.positive_fraction <= 1.0)) {
        throw InvalidArgument("positive_fraction must lie in [0, 1]");
    }

    Rng rng(seed);
    BaseDataset out;
    out.prototypes.assign(2, {});
    for (auto& cls : out.prototypes) {
        for (std::size_t k = 0; k < p.clusters_per_class; ++k) {
            Features proto(p.features);
            for (auto& v : proto) v = static_cast<int>(rng.index(p.arity));
            cls.push_back(std::move(proto));
        }
    }
    out.data.arities.assign(p.features, p.arity);
    out.data.rows.reserve(p.size);
    for (std::size_t i = 0; i < p.size; ++i) {
        const Label y = to_label(rng.bernoulli(p.positive_fraction));
        const std::size_t k = rng.index(p.clusters_per_class);
        const Features& proto = out.prototypes[static_cast<std::size_t>(to_int(y))][k];
        Features row(p.features);
        for (std::size_t f = 0; f < p.features; ++f) {
            if (rng.bernoulli(p.flip_noise)) {
                // One of the arity - 1 other values.
                const int shift = 1 + static_cast<int>(rng.index(p.arity - 1));
                row[f] = (proto[f] + shift) % static_cast<int>(p.arity);
            } else {
                row[f] = proto[f];
            }
        }
        out.data.rows.push_back(std::move(row));
        out.data.labels.push_back(y);
        out.cluster_of.push_back(k);
    }
    return out;
}

TwoViewDataset semi_artificial(const CategoricalDataset& base, std::uint64_t seed, std::size_t size) {
    base.validate();
    Rng rng(seed);
    std::vector<std::pair<std::size_t, std::size_t>> matches;
    for (Label cls : {Label::negative, Label::positive}) {
        std::vector<std::size_t> members;
        for (std::size_t i = 0; i < base.size(); ++i) {
            if (base.labels[i] == cls) members.push_back(i);
        }
        if (members.size() == 1) {
            throw InvalidArgument("class " + std::to_string(to_int(cls)) + " has a single example; cannot pair");
        }
        rng.shuffle(members);
        for (std::size_t j = 0; j + 1 < members.size(); j += 2) matches.emplace_back(members[j], members[j + 1]);
    }
    if (matches.size() < size) {
        throw InvalidArgument("base data yields " + std::to_string(matches.size()) + " same-class pairs, need " +
                              std::to_string(size));
    }
    rng.shuffle(matches);
    matches.resize(size);

    TwoViewDataset d;
    d.arities1 = base.arities;
    d.arities2 = base.arities;
    for (const auto& [i, j] : matches) {
        d.view1.push_back(base.rows[i]);
        d.view2.push_back(base.rows[j]);
        d.labels.push_back(base.labels[i]);
    }
    return d;
}

TwoViewDataset make_semi_artificial(SynthBaseParams p, std::uint64_t seed, std::size_t size) {
    // Odd class counts waste at most one example per class; +4 keeps a margin.
    p.size = 2 * size + 4;
    const auto base = synth_base(p, derive_seed(seed, 0));
    return semi_artificial(base.data, derive_seed(seed, 1), size);
}

}  // namespace mval
