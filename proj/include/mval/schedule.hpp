#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

namespace mval {

struct TheoryParams {
    double epsilon = 0.01;
    double delta = 0.05;
    double alpha = 1.0;   // expansion factor
    double lambda = 1.0;  // Tsybakov exponent
    double c0 = 1.0;      // Tsybakov constant
    double c = 1.0;       // universal constant of the uniform-convergence sample size
    double vc = 1.0;      // VC dimension bound over both views
};

enum class ScheduleMode { theory, practical };

// Query schedule for the multi-view loops: m[0] labels up front, then m[i] in round i
// for i = 1..rounds. Theory mode evaluates the closed-form sizes; practical mode uses
// user-chosen constants.
struct Schedule {
    ScheduleMode mode = ScheduleMode::practical;
    std::size_t rounds = 1;
    std::vector<std::uint64_t> m;
    std::optional<TheoryParams> params;
    double k = 0.0;
    double c1 = 0.0;
    double c2 = 0.0;

    std::uint64_t initial() const { return m.front(); }
    std::uint64_t per_round(std::size_t i) const { return m.at(i); }
};

// k = (1 + λ) / λ
double tsybakov_exponent(double lambda);
// C1 = 2 C0^(-1/λ) λ (λ + 1)^(-1 - 1/λ)
double tsybakov_constant(double c0, double lambda);
// C2 = (5α + 8) / (6α + 8)
double contraction_rate(double alpha);
// ceil(2 ln(1/(8ε)) / ln(1/C2)); the ratio of logs does not depend on the base.
std::size_t rounds_for(double epsilon, double alpha);
// C / ε² (V + ln(1/δ)), natural log.
double uniform_sample_size(double epsilon, double delta, double c, double vc);

Schedule schedule_theory(const TheoryParams& p);
Schedule schedule_practical(std::size_t rounds, std::uint64_t initial, std::uint64_t per_round);

// ceil(2 ln(4/δ) / β²): labels the h+/h- chooser draws from the contention set.
std::uint64_t chooser_sample_size(double beta, double delta);

}  // namespace mval
