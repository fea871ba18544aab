#include "mval/audit.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>

#include "mval/rng.hpp"

namespace mval {

namespace {

// Margin |phi - 1/2| per cluster; clusters without mass get no margin.
std::vector<std::optional<double>> cluster_margins(const ClusterWorld& w, View view) {
    std::vector<std::optional<double>> out(w.clusters(view));
    for (std::size_t c = 0; c < out.size(); ++c) {
        if (w.marginal(view, c) > 0.0) out[c] = std::abs(phi(w, view, c) - 0.5);
    }
    return out;
}

// Mass assigned to each cluster of `view`, restricted to the region when one is given.
std::vector<double> cluster_mass(const ClusterWorld& w, View view, const PairSet* region) {
    std::vector<double> m(w.clusters(view), 0.0);
    for (std::size_t a = 0; a < w.n1(); ++a) {
        for (std::size_t b = 0; b < w.n2(); ++b) {
            if (region && !region->contains(a, b)) continue;
            m[view == View::first ? a : b] += w.mass(a, b);
        }
    }
    return m;
}

double binomial(std::size_t n, std::size_t k) {
    double r = 1.0;
    for (std::size_t i = 1; i <= k; ++i) r = r * static_cast<double>(n - k + i) / static_cast<double>(i);
    return r;
}

double class_size(std::size_t n, const HypothesisClass& cls) {
    double total = 0.0;
    for (std::size_t k = 0; k <= std::min(n, cls.max_flips); ++k) total += binomial(n, k);
    return total;
}

Hypothesis flip(const Hypothesis& center, const std::vector<std::size_t>& positions) {
    auto bits = center.membership();
    for (auto p : positions) bits[p] = !bits[p];
    return Hypothesis(center.view(), std::move(bits));
}

Hypothesis sample_member(const Hypothesis& center, const HypothesisClass& cls, Rng& rng) {
    const std::size_t n = center.clusters();
    const std::size_t r = std::min(n, cls.max_flips);
    if (r == n) {
        std::vector<bool> bits(n);
        for (std::size_t c = 0; c < n; ++c) bits[c] = rng.bernoulli(0.5);
        return Hypothesis(center.view(), std::move(bits));
    }
    // Uniform over the ball: distance k with weight C(n, k), then a uniform k-subset.
    const double total = class_size(n, cls);
    double u = rng.uniform() * total;
    std::size_t k = 0;
    for (; k < r; ++k) {
        const double wk = binomial(n, k);
        if (u < wk) break;
        u -= wk;
    }
    std::vector<std::size_t> all(n);
    for (std::size_t c = 0; c < n; ++c) all[c] = c;
    return flip(center, rng.sample(all, k));
}

}  // namespace

TsybakovReport tsybakov_check(const ClusterWorld& w, View view, double c0, double lambda, std::vector<double> t_grid,
                              const PairSet* region) {
    if (!(c0 > 0.0) || !(lambda > 0.0)) throw InvalidArgument("C0 and lambda must be positive");
    for (double t : t_grid) {
        if (!(t > 0.0 && t <= 0.5)) throw InvalidArgument("t grid values must lie in (0, 1/2]");
    }
    const auto margins = cluster_margins(w, view);
    const auto weight = cluster_mass(w, view, region);
    double total = 0.0;
    for (double m : weight) total += m;
    if (!(total > 0.0)) throw InvalidArgument("Tsybakov region has zero mass");

    for (const auto& m : margins) {
        if (m && *m > 0.0) t_grid.push_back(*m);
    }
    t_grid.push_back(0.5);
    std::sort(t_grid.begin(), t_grid.end());
    t_grid.erase(std::unique(t_grid.begin(), t_grid.end()), t_grid.end());

    TsybakovReport r;
    r.view = view;
    r.c0 = c0;
    r.lambda = lambda;
    r.restricted = region != nullptr;
    r.worst_violation = -std::numeric_limits<double>::infinity();

    auto probability_at = [&](double t) {
        double p = 0.0;
        for (std::size_t c = 0; c < margins.size(); ++c) {
            if (margins[c] && *margins[c] <= t) p += weight[c];
        }
        return p / total;
    };
    auto record = [&](double t, double p, double bound) {
        TsybakovPoint pt{t, p, bound, p - bound};
        if (pt.violation > r.worst_violation) {
            r.worst_violation = pt.violation;
            r.worst_t = t;
        }
        r.points.push_back(pt);
    };

    const double at_zero = probability_at(0.0);
    if (at_zero > 0.0) record(0.0, at_zero, 0.0);
    for (double t : t_grid) record(t, probability_at(t), c0 * std::pow(t, lambda));
    r.pass = r.worst_violation <= kExactTolerance;
    return r;
}

std::vector<Hypothesis> sample_hypotheses(std::size_t clusters, View view, std::size_t count, std::uint64_t seed) {
    Rng rng(seed);
    std::vector<Hypothesis> out;
    out.reserve(count);
    for (std::size_t i = 0; i < count; ++i) {
        std::vector<bool> bits(clusters);
        for (std::size_t c = 0; c < clusters; ++c) bits[c] = rng.bernoulli(0.5);
        out.emplace_back(view, std::move(bits));
    }
    return out;
}

Eq2Report eq2_check(const ClusterWorld& w, View view, double c0, double lambda, std::span<const Hypothesis> hypotheses) {
    if (!tsybakov_check(w, view, c0, lambda).pass) {
        throw InvalidArgument("world does not satisfy the Tsybakov condition at the given (C0, lambda)");
    }
    Eq2Report r;
    r.c1 = tsybakov_constant(c0, lambda);
    r.k = tsybakov_exponent(lambda);
    r.worst_slack = std::numeric_limits<double>::infinity();
    const Hypothesis best = bayes_set(w, view);
    for (std::size_t i = 0; i < hypotheses.size(); ++i) {
        const auto& h = hypotheses[i];
        if (h.view() != view) throw InvalidArgument("hypothesis on the wrong view");
        Eq2Entry e;
        e.d = excess_error(w, h);
        e.d_delta = pseudo_delta(w, h, best);
        e.slack = e.d - r.c1 * std::pow(e.d_delta, r.k);
        if (e.slack < r.worst_slack) {
            r.worst_slack = e.slack;
            r.worst_index = i;
        }
        r.entries.push_back(e);
    }
    r.pass = hypotheses.empty() || r.worst_slack >= -kExactTolerance;
    return r;
}

PairSet expansion_reference(const ClusterWorld& w, ExpansionMode mode) {
    if (mode == ExpansionMode::intersection) return reference_region(w);
    return PairSet::lift(bayes_set(w, View::first), w.n1(), w.n2());
}

ExpansionTerms expansion_terms(const ClusterWorld& w, const Hypothesis& s1, const Hypothesis& s2,
                               const PairSet& reference) {
    const PairSet l1 = PairSet::lift(s1, w.n1(), w.n2());
    const PairSet l2 = PairSet::lift(s2, w.n1(), w.n2());
    ExpansionTerms t;
    t.contention = mass(w, l1 ^ l2);
    t.disagreement = mass(w, (l1 & l2) - reference) + mass(w, (~l1 & ~l2) - ~reference);
    return t;
}

std::vector<Hypothesis> enumerate_class(const ClusterWorld& w, View view, const HypothesisClass& cls,
                                        std::size_t limit) {
    const std::size_t n = w.clusters(view);
    if (n > 62 || class_size(n, cls) > static_cast<double>(limit)) {
        throw InvalidArgument("hypothesis class too large to enumerate");
    }
    const Hypothesis center = bayes_set(w, view);
    std::vector<Hypothesis> out;
    for (std::size_t k = 0; k <= std::min(n, cls.max_flips); ++k) {
        if (k == 0) {
            out.push_back(center);
            continue;
        }
        // Gosper's hack: k-bit masks in ascending order.
        std::uint64_t mask = (std::uint64_t{1} << k) - 1;
        const std::uint64_t end = std::uint64_t{1} << n;
        while (mask < end) {
            std::vector<std::size_t> positions;
            for (std::size_t c = 0; c < n; ++c) {
                if ((mask >> c) & 1U) positions.push_back(c);
            }
            out.push_back(flip(center, positions));
            const std::uint64_t low = mask & (~mask + 1);
            const std::uint64_t ripple = mask + low;
            mask = (((ripple ^ mask) >> 2) / low) | ripple;
        }
    }
    return out;
}

ExpansionReport estimate_alpha(const ClusterWorld& w, ExpansionMode mode, const HypothesisClass& cls,
                               std::size_t samples, std::uint64_t seed) {
    const PairSet ref = expansion_reference(w, mode);
    ExpansionReport r;
    r.mode = mode;
    double best = std::numeric_limits<double>::infinity();

    const bool enumerable = w.n1() <= 62 && w.n2() <= 62 &&
                            class_size(w.n1(), cls) <= static_cast<double>(kExactHypothesesPerView) &&
                            class_size(w.n2(), cls) <= static_cast<double>(kExactHypothesesPerView);
    if (enumerable) {
        const auto c1 = enumerate_class(w, View::first, cls);
        const auto c2 = enumerate_class(w, View::second, cls);
        const std::size_t n1 = w.n1(), n2 = w.n2();
        // Per view-2 cluster, the four partial sums that depend only on S1.
        std::vector<double> num_in(n2), num_out(n2), den_in(n2), den_out(n2);
        std::size_t best_i = 0, best_j = 0;
        for (std::size_t i = 0; i < c1.size(); ++i) {
            const auto& s1 = c1[i];
            std::fill(num_in.begin(), num_in.end(), 0.0);
            std::fill(num_out.begin(), num_out.end(), 0.0);
            std::fill(den_in.begin(), den_in.end(), 0.0);
            std::fill(den_out.begin(), den_out.end(), 0.0);
            for (std::size_t a = 0; a < n1; ++a) {
                for (std::size_t b = 0; b < n2; ++b) {
                    const double m = w.mass(a, b);
                    if (s1.contains(a)) {
                        num_out[b] += m;
                        if (!ref.contains(a, b)) den_in[b] += m;
                    } else {
                        num_in[b] += m;
                        if (ref.contains(a, b)) den_out[b] += m;
                    }
                }
            }
            for (std::size_t j = 0; j < c2.size(); ++j) {
                const auto& s2 = c2[j];
                double num = 0.0, den = 0.0;
                for (std::size_t b = 0; b < n2; ++b) {
                    if (s2.contains(b)) {
                        num += num_in[b];
                        den += den_in[b];
                    } else {
                        num += num_out[b];
                        den += den_out[b];
                    }
                }
                ++r.pairs_evaluated;
                if (!(den > 0.0)) {
                    ++r.pairs_skipped;
                    continue;
                }
                const double ratio = num / den;
                if (ratio < best) {
                    best = ratio;
                    best_i = i;
                    best_j = j;
                }
            }
        }
        if (std::isfinite(best)) {
            r.witness1 = c1[best_i];
            r.witness2 = c2[best_j];
        }
    } else {
        r.exact = false;
        Rng rng(seed);
        const Hypothesis b1 = bayes_set(w, View::first);
        const Hypothesis b2 = bayes_set(w, View::second);
        for (std::size_t s = 0; s < samples; ++s) {
            Hypothesis s1 = sample_member(b1, cls, rng);
            Hypothesis s2 = sample_member(b2, cls, rng);
            const auto t = expansion_terms(w, s1, s2, ref);
            ++r.pairs_evaluated;
            if (!(t.disagreement > 0.0)) {
                ++r.pairs_skipped;
                continue;
            }
            const double ratio = t.contention / t.disagreement;
            if (ratio < best) {
                best = ratio;
                r.witness1 = std::move(s1);
                r.witness2 = std::move(s2);
            }
        }
    }

    if (!r.witness1) {
        r.vacuous = true;
        r.alpha = std::numeric_limits<double>::infinity();
        return r;
    }
    const auto t = expansion_terms(w, *r.witness1, *r.witness2, ref);
    r.witness_contention = t.contention;
    r.witness_disagreement = t.disagreement;
    r.alpha = t.contention / t.disagreement;
    return r;
}

BetaReport estimate_beta(const ClusterWorld& w, const Hypothesis& h1, const Hypothesis& h2, double epsilon) {
    const PairSet q = contention_region(h1, h2);
    const double pq = mass(w, q);
    if (!(pq > 0.0)) throw InvalidArgument("beta is undefined on an empty contention region");
    BetaReport r;
    r.contention_mass = pq;
    r.beta = std::abs(labeled_mass(w, q, Label::positive) - labeled_mass(w, q, Label::negative)) / pq;
    r.small = r.beta <= epsilon;
    return r;
}

BetaReport estimate_beta(std::span<const Label> contention_labels, double epsilon) {
    if (contention_labels.empty()) throw InvalidArgument("beta is undefined without contention labels");
    std::size_t pos = 0;
    for (auto y : contention_labels) pos += y == Label::positive;
    const double n = static_cast<double>(contention_labels.size());
    BetaReport r;
    r.contention_mass = n;
    r.beta = std::abs(static_cast<double>(pos) - (n - static_cast<double>(pos))) / n;
    r.small = r.beta <= epsilon;
    return r;
}

namespace {

std::pair<const Hypothesis&, const Hypothesis&> round_hypotheses(const RoundRecord& rec) {
    if (!rec.h1 || !rec.h2) throw InvalidArgument("trace has no hypotheses; audits need a world-mode run");
    return {*rec.h1, *rec.h2};
}

}  // namespace

std::vector<NonDegradationFlag> nondegradation_check(const RunTrace& trace, const ClusterWorld& w) {
    std::vector<NonDegradationFlag> flags;
    const Hypothesis best[2] = {bayes_set(w, View::first), bayes_set(w, View::second)};
    for (std::size_t i = 0; i + 1 < trace.rounds.size(); ++i) {
        const auto [a1, a2] = round_hypotheses(trace.rounds[i]);
        const auto [b1, b2] = round_hypotheses(trace.rounds[i + 1]);
        const PairSet outside = ~contention_region(a1, a2);
        const double m = mass(w, outside);
        for (View v : {View::first, View::second}) {
            NonDegradationFlag f;
            f.round = i;
            f.view = v;
            f.defined = m > 0.0;
            if (f.defined) {
                const auto& ref = best[view_index(v)];
                const auto& before = v == View::first ? a1 : a2;
                const auto& after = v == View::first ? b1 : b2;
                const PairSet lref = PairSet::lift(ref, w.n1(), w.n2());
                f.before = mass(w, (PairSet::lift(before, w.n1(), w.n2()) ^ lref) & outside) / m;
                f.after = mass(w, (PairSet::lift(after, w.n1(), w.n2()) ^ lref) & outside) / m;
                f.holds = f.after <= f.before + kExactTolerance;
            }
            flags.push_back(f);
        }
    }
    return flags;
}

std::vector<RoundDiagnostics> diagnostics(const RunTrace& trace, const ClusterWorld& w) {
    const PairSet ref = reference_region(w);
    std::vector<RoundDiagnostics> out;
    for (std::size_t i = 0; i < trace.rounds.size(); ++i) {
        const auto [h1, h2] = round_hypotheses(trace.rounds[i]);
        const PairSet l1 = PairSet::lift(h1, w.n1(), w.n2());
        const PairSet l2 = PairSet::lift(h2, w.n1(), w.n2());
        const PairSet q = l1 ^ l2;
        RoundDiagnostics d;
        d.round = i;
        d.contention_mass = mass(w, q);
        d.d_intersection = pseudo_delta(w, l1 & l2, ref);
        d.d_union = pseudo_delta(w, l1 | l2, ref);
        const double agreed_wrong = mass(w, (l1 & l2) - ref) + mass(w, (~l1 & ~l2) & ref);
        double g = 0.0;
        if (d.contention_mass > 0.0) {
            d.gamma = mass(w, q - ref) / d.contention_mass - 0.5;
            g = *d.gamma;
        }
        d.intersection_residual = d.d_intersection - ((0.5 - g) * d.contention_mass + agreed_wrong);
        d.union_residual = d.d_union - ((0.5 + g) * d.contention_mass + agreed_wrong);
        if (i > 0) {
            const auto [p1, p2] = round_hypotheses(trace.rounds[i - 1]);
            const PairSet outside = ~contention_region(p1, p2);
            const PairSet t = (l1 & outside) ^ (l2 & outside);
            const double mt = mass(w, t);
            if (mt > 0.0) d.tau = mass(w, t - ref) / mt - 0.5;
        }
        d.excess_plus = excess_error(w, CombinedClassifier(Combination::plus, h1, h2));
        d.excess_minus = excess_error(w, CombinedClassifier(Combination::minus, h1, h2));
        out.push_back(d);
    }
    return out;
}

IntersectionGap intersection_gap(const ClusterWorld& w) {
    const auto m = measures(w);
    IntersectionGap g;
    g.gap = m.joint_bayes_intersection_risk - std::max(m.bayes_risk_1, m.bayes_risk_2);
    g.bound = contention_mass(w, m.bayes_set_1, m.bayes_set_2);
    g.holds = g.gap <= g.bound + kExactTolerance;
    return g;
}

namespace {

nlohmann::json optional_json(const std::optional<double>& v) { return v ? nlohmann::json(*v) : nlohmann::json(); }

nlohmann::json hypothesis_json(const std::optional<Hypothesis>& h) {
    if (!h) return nullptr;
    return {{"view", view_index(h->view()) + 1}, {"positive", h->positive_indices()}};
}

}  // namespace

void to_json(nlohmann::json& j, const TsybakovReport& r) {
    auto pts = nlohmann::json::array();
    for (const auto& p : r.points) {
        pts.push_back({{"t", p.t}, {"probability", p.probability}, {"bound", p.bound}, {"violation", p.violation}});
    }
    j = {{"type", "tsybakov"},  {"view", view_index(r.view) + 1},     {"c0", r.c0},
         {"lambda", r.lambda},  {"restricted", r.restricted},         {"worst_violation", r.worst_violation},
         {"worst_t", r.worst_t}, {"pass", r.pass},                    {"points", pts}};
}

void to_json(nlohmann::json& j, const ExpansionReport& r) {
    j = {{"type", "expansion"},
         {"mode", r.mode == ExpansionMode::exact_bayes ? "exact" : "intersection"},
         {"alpha", r.vacuous ? nlohmann::json("vacuous") : nlohmann::json(r.alpha)},
         {"vacuous", r.vacuous},
         {"exact", r.exact},
         {"expanding", r.expanding()},
         {"pairs_evaluated", r.pairs_evaluated},
         {"pairs_skipped", r.pairs_skipped},
         {"witness_contention", r.witness_contention},
         {"witness_disagreement", r.witness_disagreement},
         {"witness", {hypothesis_json(r.witness1), hypothesis_json(r.witness2)}}};
}

void to_json(nlohmann::json& j, const RoundDiagnostics& r) {
    j = {{"type", "round_diagnostics"},
         {"round", r.round},
         {"contention_mass", r.contention_mass},
         {"gamma", optional_json(r.gamma)},
         {"tau", optional_json(r.tau)},
         {"d_intersection", r.d_intersection},
         {"d_union", r.d_union},
         {"intersection_residual", r.intersection_residual},
         {"union_residual", r.union_residual},
         {"excess_plus", r.excess_plus},
         {"excess_minus", r.excess_minus}};
}

void to_json(nlohmann::json& j, const BetaReport& r) {
    j = {{"type", "beta"}, {"beta", r.beta}, {"contention_mass", r.contention_mass}, {"small", r.small}};
}

void to_json(nlohmann::json& j, const Eq2Report& r) {
    j = {{"type", "eq2"},
         {"c1", r.c1},
         {"k", r.k},
         {"hypotheses", r.entries.size()},
         {"worst_slack", r.entries.empty() ? nlohmann::json() : nlohmann::json(r.worst_slack)},
         {"worst_index", r.worst_index},
         {"pass", r.pass}};
}

void to_json(nlohmann::json& j, const IntersectionGap& r) {
    j = {{"type", "intersection_gap"}, {"gap", r.gap}, {"bound", r.bound}, {"holds", r.holds}};
}

void to_json(nlohmann::json& j, const NonDegradationFlag& r) {
    j = {{"round", r.round}, {"view", view_index(r.view) + 1}, {"defined", r.defined},
         {"before", r.before}, {"after", r.after},               {"holds", r.holds}};
}

}  // namespace mval
