#include "mval/schedule.hpp"

#include <cmath>

#include "mval/types.hpp"

namespace mval {

namespace {

void require_positive(double v, const char* name) {
    if (!(v > 0.0) || !std::isfinite(v)) throw InvalidArgument(std::string(name) + " must be positive and finite");
}

std::uint64_t checked_ceil(double v) {
    // Beyond 2^63 the count is meaningless as a label budget.
    if (!(v < 9.2e18)) throw InvalidArgument("schedule size overflows a 64-bit count");
    return static_cast<std::uint64_t>(std::ceil(v));
}

}  // namespace

double tsybakov_exponent(double lambda) {
    require_positive(lambda, "lambda");
    return (1.0 + lambda) / lambda;
}

double tsybakov_constant(double c0, double lambda) {
    require_positive(c0, "c0");
    require_positive(lambda, "lambda");
    return 2.0 * std::pow(c0, -1.0 / lambda) * lambda * std::pow(lambda + 1.0, -1.0 - 1.0 / lambda);
}

double contraction_rate(double alpha) {
    require_positive(alpha, "alpha");
    return (5.0 * alpha + 8.0) / (6.0 * alpha + 8.0);
}

std::size_t rounds_for(double epsilon, double alpha) {
    require_positive(epsilon, "epsilon");
    if (!(epsilon < 0.125)) throw InvalidArgument("epsilon must be below 1/8");
    const double ratio = 2.0 * std::log(1.0 / (8.0 * epsilon)) / std::log(1.0 / contraction_rate(alpha));
    return static_cast<std::size_t>(std::ceil(ratio));
}

double uniform_sample_size(double epsilon, double delta, double c, double vc) {
    require_positive(epsilon, "epsilon");
    require_positive(delta, "delta");
    require_positive(c, "c");
    require_positive(vc, "vc");
    return c / (epsilon * epsilon) * (vc + std::log(1.0 / delta));
}

Schedule schedule_theory(const TheoryParams& p) {
    require_positive(p.epsilon, "epsilon");
    require_positive(p.delta, "delta");
    require_positive(p.alpha, "alpha");
    require_positive(p.lambda, "lambda");
    require_positive(p.c0, "c0");
    require_positive(p.c, "c");
    require_positive(p.vc, "vc");
    if (!(p.delta < 1.0)) throw InvalidArgument("delta must be below 1");

    Schedule s;
    s.mode = ScheduleMode::theory;
    s.params = p;
    s.k = tsybakov_exponent(p.lambda);
    s.c1 = tsybakov_constant(p.c0, p.lambda);
    s.c2 = contraction_rate(p.alpha);
    s.rounds = rounds_for(p.epsilon, p.alpha);
    // Sample size that drives each view to d <= C1 / 16^k with confidence δ / (16 (s+1)).
    const double m = std::pow(256.0, s.k) * p.c / (s.c1 * s.c1) *
                     (p.vc + std::log(16.0 * static_cast<double>(s.rounds + 1) / p.delta));
    s.m.assign(s.rounds + 1, checked_ceil(m));
    return s;
}

Schedule schedule_practical(std::size_t rounds, std::uint64_t initial, std::uint64_t per_round) {
    if (rounds < 1) throw InvalidArgument("rounds must be >= 1");
    if (initial < 1 || per_round < 1) throw InvalidArgument("query counts must be >= 1");
    Schedule s;
    s.mode = ScheduleMode::practical;
    s.rounds = rounds;
    s.m.assign(rounds + 1, per_round);
    s.m[0] = initial;
    return s;
}

std::uint64_t chooser_sample_size(double beta, double delta) {
    if (!(beta > 0.0 && beta <= 1.0)) throw InvalidArgument("beta must lie in (0, 1]");
    if (!(delta > 0.0 && delta < 1.0)) throw InvalidArgument("delta must lie in (0, 1)");
    return checked_ceil(2.0 * std::log(4.0 / delta) / (beta * beta));
}

}  // namespace mval
