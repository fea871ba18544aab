#include "mval/cluster_world.hpp"

#include <cmath>
#include <string>

namespace mval {

const char* to_string(Combination c) { return c == Combination::plus ? "plus" : "minus"; }

ClusterWorld::ClusterWorld(std::size_t n1, std::size_t n2, std::vector<double> pair_mass,
                           std::vector<double> label_prob)
    : n1_(n1), n2_(n2), pair_mass_(std::move(pair_mass)), label_prob_(std::move(label_prob)) {
    if (n1_ == 0 || n2_ == 0) throw InvalidArgument("cluster world needs at least one cluster per view");
    if (pair_mass_.size() != n1_ * n2_ || label_prob_.size() != n1_ * n2_) {
        throw InvalidArgument("pair_mass and label_prob must both be n1 x n2 tables");
    }
    double total = 0.0;
    for (std::size_t i = 0; i < pair_mass_.size(); ++i) {
        const double m = pair_mass_[i];
        const double p = label_prob_[i];
        if (!(m >= 0.0) || !std::isfinite(m)) throw InvalidArgument("pair_mass entries must be finite and >= 0");
        if (!(p >= 0.0 && p <= 1.0)) throw InvalidArgument("label_prob entries must lie in [0, 1]");
        total += m;
    }
    if (std::abs(total - 1.0) > kExactTolerance) {
        throw InvalidArgument("pair_mass must sum to 1 (got " + std::to_string(total) + ")");
    }
}

double ClusterWorld::marginal(View v, std::size_t cluster) const {
    double m = 0.0;
    if (v == View::first) {
        for (std::size_t b = 0; b < n2_; ++b) m += mass(cluster, b);
    } else {
        for (std::size_t a = 0; a < n1_; ++a) m += mass(a, cluster);
    }
    return m;
}

Hypothesis::Hypothesis(View view, std::vector<bool> positive)
    : view_(view), positive_(std::move(positive)) {}

Hypothesis Hypothesis::from_indices(View view, std::size_t clusters,
                                    std::initializer_list<std::size_t> positive) {
    return from_indices(view, clusters, std::vector<std::size_t>(positive));
}

Hypothesis Hypothesis::from_indices(View view, std::size_t clusters,
                                    const std::vector<std::size_t>& positive) {
    std::vector<bool> bits(clusters, false);
    for (auto c : positive) {
        if (c >= clusters) throw InvalidArgument("hypothesis index out of range");
        bits[c] = true;
    }
    return Hypothesis(view, std::move(bits));
}

Hypothesis Hypothesis::from_mask(View view, std::size_t clusters, std::uint64_t mask) {
    std::vector<bool> bits(clusters, false);
    for (std::size_t c = 0; c < clusters; ++c) bits[c] = (mask >> c) & 1U;
    return Hypothesis(view, std::move(bits));
}

std::vector<std::size_t> Hypothesis::positive_indices() const {
    std::vector<std::size_t> out;
    for (std::size_t c = 0; c < positive_.size(); ++c) {
        if (positive_[c]) out.push_back(c);
    }
    return out;
}

Hypothesis Hypothesis::complement() const {
    auto bits = positive_;
    bits.flip();
    return Hypothesis(view_, std::move(bits));
}

CombinedClassifier::CombinedClassifier(Combination m, Hypothesis first, Hypothesis second)
    : mode(m), h1(std::move(first)), h2(std::move(second)) {
    if (h1.view() != View::first || h2.view() != View::second) {
        throw InvalidArgument("combined classifier needs a view-1 and a view-2 hypothesis");
    }
}

Label predict_combined(Combination mode, Label first, Label second) {
    const bool p1 = first == Label::positive;
    const bool p2 = second == Label::positive;
    return to_label(mode == Combination::plus ? (p1 && p2) : (p1 || p2));
}

Label predict_combined(const CombinedClassifier& c, ClusterPair instance) {
    return predict_combined(c.mode, c.h1.predict(instance.a), c.h2.predict(instance.b));
}

PairSet::PairSet(std::size_t n1, std::size_t n2, bool value)
    : n1_(n1), n2_(n2), bits_(n1 * n2, value) {}

PairSet PairSet::lift(const Hypothesis& h, std::size_t n1, std::size_t n2) {
    PairSet s(n1, n2);
    for (std::size_t a = 0; a < n1; ++a) {
        for (std::size_t b = 0; b < n2; ++b) {
            s.set(a, b, h.view() == View::first ? h.contains(a) : h.contains(b));
        }
    }
    return s;
}

PairSet PairSet::of(const CombinedClassifier& c) {
    const std::size_t n1 = c.h1.clusters();
    const std::size_t n2 = c.h2.clusters();
    PairSet s(n1, n2);
    for (std::size_t a = 0; a < n1; ++a) {
        for (std::size_t b = 0; b < n2; ++b) {
            s.set(a, b, predict_combined(c, {a, b}) == Label::positive);
        }
    }
    return s;
}

PairSet PairSet::operator~() const {
    PairSet r = *this;
    r.bits_.flip();
    return r;
}

namespace {

template <typename Op>
PairSet combine(const PairSet& x, const PairSet& y, Op op) {
    if (x.n1() != y.n1() || x.n2() != y.n2()) throw InvalidArgument("pair set shape mismatch");
    PairSet r(x.n1(), x.n2());
    for (std::size_t a = 0; a < x.n1(); ++a) {
        for (std::size_t b = 0; b < x.n2(); ++b) r.set(a, b, op(x.contains(a, b), y.contains(a, b)));
    }
    return r;
}

void check_shape(const ClusterWorld& w, const PairSet& s) {
    if (s.n1() != w.n1() || s.n2() != w.n2()) throw InvalidArgument("region does not match world shape");
}

void check_view(const ClusterWorld& w, const Hypothesis& h) {
    if (h.clusters() != w.clusters(h.view())) throw InvalidArgument("hypothesis does not match world view size");
}

}  // namespace

PairSet PairSet::operator&(const PairSet& o) const {
    return combine(*this, o, [](bool x, bool y) { return x && y; });
}
PairSet PairSet::operator|(const PairSet& o) const {
    return combine(*this, o, [](bool x, bool y) { return x || y; });
}
PairSet PairSet::operator^(const PairSet& o) const {
    return combine(*this, o, [](bool x, bool y) { return x != y; });
}

double mass(const ClusterWorld& w, const PairSet& region) {
    check_shape(w, region);
    double m = 0.0;
    for (std::size_t a = 0; a < w.n1(); ++a) {
        for (std::size_t b = 0; b < w.n2(); ++b) {
            if (region.contains(a, b)) m += w.mass(a, b);
        }
    }
    return m;
}

double labeled_mass(const ClusterWorld& w, const PairSet& region, Label y) {
    check_shape(w, region);
    double m = 0.0;
    for (std::size_t a = 0; a < w.n1(); ++a) {
        for (std::size_t b = 0; b < w.n2(); ++b) {
            if (!region.contains(a, b)) continue;
            const double p = w.psi(a, b);
            m += w.mass(a, b) * (y == Label::positive ? p : 1.0 - p);
        }
    }
    return m;
}

double phi(const ClusterWorld& w, View view, std::size_t cluster) {
    if (cluster >= w.clusters(view)) throw InvalidArgument("cluster index out of range");
    double m = 0.0;
    double pos = 0.0;
    const std::size_t other_n = view == View::first ? w.n2() : w.n1();
    for (std::size_t j = 0; j < other_n; ++j) {
        const ClusterPair p = view == View::first ? ClusterPair{cluster, j} : ClusterPair{j, cluster};
        m += w.mass(p);
        pos += w.mass(p) * w.psi(p);
    }
    if (m <= 0.0) {
        throw DegenerateCluster("cluster " + std::to_string(cluster) + " of view " +
                                std::to_string(view_index(view) + 1) + " has zero mass");
    }
    return pos / m;
}

Hypothesis bayes_set(const ClusterWorld& w, View view) {
    const std::size_t n = w.clusters(view);
    std::vector<bool> bits(n, false);
    for (std::size_t c = 0; c < n; ++c) {
        // Zero-mass clusters never affect any risk; they stay out of the Bayes set.
        if (w.marginal(view, c) <= 0.0) continue;
        bits[c] = phi(w, view, c) >= 0.5;
    }
    return Hypothesis(view, std::move(bits));
}

PairSet reference_region(const ClusterWorld& w) {
    return PairSet::lift(bayes_set(w, View::first), w.n1(), w.n2()) &
           PairSet::lift(bayes_set(w, View::second), w.n1(), w.n2());
}

double error_rate(const ClusterWorld& w, const PairSet& predicted_positive) {
    check_shape(w, predicted_positive);
    double r = 0.0;
    for (std::size_t a = 0; a < w.n1(); ++a) {
        for (std::size_t b = 0; b < w.n2(); ++b) {
            const double p = w.psi(a, b);
            r += w.mass(a, b) * (predicted_positive.contains(a, b) ? 1.0 - p : p);
        }
    }
    return r;
}

double error_rate(const ClusterWorld& w, const Hypothesis& h) {
    check_view(w, h);
    return error_rate(w, PairSet::lift(h, w.n1(), w.n2()));
}

double error_rate(const ClusterWorld& w, const CombinedClassifier& c) {
    check_view(w, c.h1);
    check_view(w, c.h2);
    return error_rate(w, PairSet::of(c));
}

double excess_error(const ClusterWorld& w, const Hypothesis& h) {
    return error_rate(w, h) - error_rate(w, bayes_set(w, h.view()));
}

double excess_error(const ClusterWorld& w, const CombinedClassifier& c) {
    return error_rate(w, c) - error_rate(w, reference_region(w));
}

double excess_error_integral(const ClusterWorld& w, const Hypothesis& h) {
    check_view(w, h);
    const Hypothesis best = bayes_set(w, h.view());
    double d = 0.0;
    for (std::size_t c = 0; c < h.clusters(); ++c) {
        if (h.contains(c) == best.contains(c) || w.marginal(h.view(), c) <= 0.0) continue;
        d += std::abs(2.0 * phi(w, h.view(), c) - 1.0) * w.marginal(h.view(), c);
    }
    return d;
}

double pseudo_delta(const ClusterWorld& w, const Hypothesis& h, const Hypothesis& ref) {
    if (h.view() != ref.view()) throw InvalidArgument("pseudo_delta needs hypotheses on the same view");
    check_view(w, h);
    check_view(w, ref);
    double d = 0.0;
    for (std::size_t c = 0; c < h.clusters(); ++c) {
        if (h.contains(c) != ref.contains(c)) d += w.marginal(h.view(), c);
    }
    return d;
}

double pseudo_delta(const ClusterWorld& w, const PairSet& a, const PairSet& b) {
    return mass(w, a ^ b);
}

PairSet contention_region(const Hypothesis& h1, const Hypothesis& h2) {
    if (h1.view() != View::first || h2.view() != View::second) {
        throw InvalidArgument("contention needs a view-1 and a view-2 hypothesis");
    }
    const std::size_t n1 = h1.clusters();
    const std::size_t n2 = h2.clusters();
    return PairSet::lift(h1, n1, n2) ^ PairSet::lift(h2, n1, n2);
}

double contention_mass(const ClusterWorld& w, const Hypothesis& h1, const Hypothesis& h2) {
    check_view(w, h1);
    check_view(w, h2);
    return mass(w, contention_region(h1, h2));
}

WorldMeasures measures(const ClusterWorld& w) {
    Hypothesis s1 = bayes_set(w, View::first);
    Hypothesis s2 = bayes_set(w, View::second);
    const double r1 = error_rate(w, s1);
    const double r2 = error_rate(w, s2);
    const double joint = error_rate(w, reference_region(w));
    return WorldMeasures{std::move(s1), std::move(s2), r1, r2, joint};
}

}  // namespace mval
