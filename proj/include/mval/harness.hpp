#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "mval/algorithms.hpp"
#include "mval/datagen.hpp"
#include "mval/schedule.hpp"

namespace mval {

enum class ExperimentMode { world, dataset };

struct ExperimentConfig {
    ExperimentMode mode = ExperimentMode::dataset;

    // World mode: a fixture file wins over the inline spec.
    WorldSpec world = w4_spec();
    std::optional<std::filesystem::path> fixture;
    std::size_t pool_size = 0;  // 0: 100 x the largest label budget

    // Dataset mode.
    SynthBaseParams dataset;
    std::size_t dataset_size = kSemiArtificialSize;
    double test_fraction = 0.25;
    double smoothing = 1.0;

    std::vector<Algorithm> algorithms = {Algorithm::table1, Algorithm::random};
    std::size_t initial = 10;
    std::size_t queries_per_round = 2;
    std::size_t rounds = 40;
    std::optional<TheoryParams> theory;  // replaces initial/queries_per_round/rounds when set
    ChooserParams chooser{0.5, 0.1};

    std::size_t runs = 20;
    std::uint64_t seed = 1;
    std::size_t threads = 0;  // 0: hardware concurrency
    std::filesystem::path out_dir = "out";

    Schedule schedule() const;
    void validate() const;
};

ExperimentConfig config_from_json(const nlohmann::json& j);
nlohmann::json config_to_json(const ExperimentConfig& c);
ExperimentConfig read_config(const std::filesystem::path& path);

// Seeds: run r uses derive_seed(seed, r). Within a run, stream 0 builds the pool or
// dataset and stream 1 the test split, shared by every method; method a uses
// derive_seed(run_seed, 16 + a) for its queries and derive_seed of that for the chooser.
std::uint64_t run_seed(const ExperimentConfig& c, std::size_t run);

// One checkpoint. Rounds 0..s are the loop's retraining points, scored with the
// label-free plug-in choice; the last row of a run is the chooser checkpoint,
// including the chooser's labels.
struct TraceRow {
    std::size_t run_id = 0;
    Algorithm algorithm = Algorithm::table1;
    std::size_t round = 0;
    std::size_t labels_cumulative = 0;
    double contention = 0.0;  // exact mass in world mode, unqueried pool count in dataset mode
    double error_plus = 0.0;
    double error_minus = 0.0;
    double error_chosen = 0.0;
    std::optional<double> excess_exact;  // world mode only
    bool final = false;
};

struct CurvePoint {
    std::string method;
    std::size_t labels_used = 0;
    double mean_error = 0.0;
    double std_error = 0.0;  // sample standard deviation over runs
    std::size_t runs = 0;

    friend bool operator==(const CurvePoint&, const CurvePoint&) = default;
};

struct ExperimentResult {
    std::vector<TraceRow> rows;
    std::vector<CurvePoint> curve;
};

std::vector<TraceRow> run_single(const ExperimentConfig& c, Algorithm algorithm, std::size_t run);
ExperimentResult run_experiment(const ExperimentConfig& c);

// Mean and standard deviation of error_chosen per (method, labels_used), methods in
// the given order, label counts ascending.
std::vector<CurvePoint> aggregate(const std::vector<TraceRow>& rows, const std::vector<Algorithm>& order);

std::string trace_csv(const std::vector<TraceRow>& rows);
std::string curve_csv(const std::vector<CurvePoint>& curve);
std::vector<CurvePoint> parse_curve_csv(const std::string& text);

void write_text(const std::filesystem::path& path, const std::string& text);
void write_trace_csv(const std::vector<TraceRow>& rows, const std::filesystem::path& path);
void write_curve_csv(const std::vector<CurvePoint>& curve, const std::filesystem::path& path);
std::vector<CurvePoint> read_curve_csv(const std::filesystem::path& path);

}  // namespace mval
