#include <doctest.h>

#include <cstdlib>
#include <fstream>
#include <map>
#include <sstream>
#include <sys/wait.h>

#include "mval/harness.hpp"
#include "mval/plot.hpp"
#include "support.hpp"

using namespace mval;

namespace {

ExperimentConfig small_dataset_config() {
    ExperimentConfig c;
    c.mode = ExperimentMode::dataset;
    c.dataset.features = 8;
    c.dataset.clusters_per_class = 2;
    c.dataset_size = 200;
    c.initial = 6;
    c.rounds = 5;
    c.runs = 3;
    c.seed = 42;
    return c;
}

ExperimentConfig small_world_config() {
    ExperimentConfig c;
    c.mode = ExperimentMode::world;
    c.world = w4_spec();
    c.world.compatibility = 2;
    c.initial = 8;
    c.queries_per_round = 4;
    c.rounds = 4;
    c.runs = 4;
    c.pool_size = 2000;
    return c;
}

int exit_code(const std::string& args) {
    const std::string cmd = std::string(MVALCTL_PATH) + " " + args + " > /dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string capture(const std::string& args) {
    const auto path = std::filesystem::temp_directory_path() / "mvalctl_capture.txt";
    const std::string cmd = std::string(MVALCTL_PATH) + " " + args + " > " + path.string() + " 2>&1";
    [[maybe_unused]] const int status = std::system(cmd.c_str());
    std::ifstream in(path);
    std::stringstream ss;
    ss << in.rdbuf();
    std::filesystem::remove(path);
    return ss.str();
}

}  // namespace

TEST_CASE("experiment output shape") {
    const auto c = small_dataset_config();
    const auto res = run_experiment(c);
    std::map<std::pair<std::size_t, Algorithm>, std::size_t> rows, finals;
    for (const auto& r : res.rows) {
        ++rows[{r.run_id, r.algorithm}];
        finals[{r.run_id, r.algorithm}] += r.final;
        CHECK_FALSE(r.excess_exact);
        CHECK(r.error_chosen >= 0.0);
        CHECK(r.error_chosen <= 1.0);
    }
    CHECK(rows.size() == c.runs * c.algorithms.size());
    for (const auto& [key, n] : rows) CHECK(n == c.rounds + 2);
    for (const auto& [key, n] : finals) CHECK(n == 1);
    for (const auto& p : res.curve) CHECK(p.runs == c.runs);
}

TEST_CASE("methods share the label budget at every checkpoint") {
    for (const auto& c : {small_dataset_config(), small_world_config()}) {
        const auto res = run_experiment(c);
        std::map<std::tuple<std::size_t, std::size_t, bool>, std::vector<std::size_t>> labels;
        for (const auto& r : res.rows) labels[{r.run_id, r.round, r.final}].push_back(r.labels_cumulative);
        for (const auto& [key, v] : labels) {
            REQUIRE(v.size() == 2);
            CHECK(v[0] == v[1]);
        }
    }
}

TEST_CASE("experiments are deterministic and independent of the thread count") {
    auto c = small_world_config();
    c.threads = 1;
    const auto a = trace_csv(run_experiment(c).rows);
    c.threads = 3;
    const auto b = trace_csv(run_experiment(c).rows);
    CHECK(a == b);
    c.seed = 2;
    CHECK(trace_csv(run_experiment(c).rows) != a);

    const auto d = small_dataset_config();
    CHECK(curve_csv(run_experiment(d).curve) == curve_csv(run_experiment(d).curve));
}

TEST_CASE("a single run matches its slice of the experiment") {
    const auto c = small_world_config();
    const auto res = run_experiment(c);
    const auto one = run_single(c, Algorithm::table1, 2);
    std::vector<TraceRow> slice;
    for (const auto& r : res.rows) {
        if (r.run_id == 2 && r.algorithm == Algorithm::table1) slice.push_back(r);
    }
    CHECK(trace_csv(one) == trace_csv(slice));
}

TEST_CASE("world mode reports exact excess and reaches zero on a noiseless world") {
    auto c = small_world_config();
    c.world.margins = {0.5};
    c.rounds = 6;
    const auto res = run_experiment(c);
    for (const auto& r : res.rows) {
        REQUIRE(r.excess_exact);
        if (r.final) CHECK(*r.excess_exact == 0.0);
    }
}

TEST_CASE("noiseless data with a large budget drives test error to zero") {
    auto c = small_dataset_config();
    c.dataset.flip_noise = 0.0;
    c.dataset.clusters_per_class = 1;
    c.rounds = 20;
    const auto res = run_experiment(c);
    for (const auto& r : res.rows) {
        if (r.final) CHECK(r.error_chosen <= 0.02);
    }
}

TEST_CASE("aggregation") {
    std::vector<TraceRow> rows(3);
    rows[0] = {0, Algorithm::table1, 0, 10, 0.0, 0.0, 0.0, 0.2, std::nullopt, false};
    rows[1] = {1, Algorithm::table1, 0, 10, 0.0, 0.0, 0.0, 0.4, std::nullopt, false};
    rows[2] = {0, Algorithm::random, 0, 10, 0.0, 0.0, 0.0, 0.5, std::nullopt, false};
    const auto curve = aggregate(rows, {Algorithm::table1, Algorithm::random});
    REQUIRE(curve.size() == 2);
    CHECK(curve[0].method == "table1");
    CHECK(curve[0].runs == 2);
    CHECK(std::abs(curve[0].mean_error - 0.3) <= 1e-12);
    CHECK(std::abs(curve[0].std_error - std::sqrt(0.02)) <= 1e-12);
    CHECK(curve[1].runs == 1);
    CHECK(curve[1].std_error == 0.0);
}

TEST_CASE("curve CSV round-trips") {
    const std::vector<CurvePoint> curve = {{"table1", 10, 0.1 + 0.2, 1.0 / 3.0, 20}, {"random", 12, 0.25, 0.0, 20}};
    CHECK(parse_curve_csv(curve_csv(curve)) == curve);
    const auto path = std::filesystem::temp_directory_path() / "mval_curve" / "curve.csv";
    write_curve_csv(curve, path);
    CHECK(read_curve_csv(path) == curve);
    std::filesystem::remove_all(path.parent_path());
    CHECK_THROWS(curve_csv({}));
    CHECK_THROWS(parse_curve_csv("a,b\n1,2\n"));
    CHECK_THROWS(parse_curve_csv("method,labels_used,mean_error,std_error,runs\ntable1,x,0.1,0,1\n"));
}

TEST_CASE("SVG has one polyline per method") {
    const std::vector<CurvePoint> curve = {{"table1", 10, 0.3, 0.0, 2}, {"table1", 12, 0.2, 0.0, 2},
                                           {"random", 10, 0.35, 0.0, 2}, {"random", 12, 0.3, 0.0, 2}};
    const auto svg = render_svg(curve, "test");
    std::size_t count = 0;
    for (auto pos = svg.find("<polyline"); pos != std::string::npos; pos = svg.find("<polyline", pos + 1)) ++count;
    CHECK(count == 2);
    CHECK(svg.find("table1") != std::string::npos);
    CHECK(svg.find("random") != std::string::npos);
    CHECK_THROWS_AS(render_svg({}), InvalidArgument);
}

TEST_CASE("config JSON validation") {
    const auto c = small_world_config();
    const auto j = config_to_json(c);
    CHECK(config_to_json(config_from_json(j)) == j);

    auto bad = j;
    bad["runs"] = 0;
    CHECK_THROWS(config_from_json(bad));
    bad = j;
    bad["test_fraction"] = 1.0;
    CHECK_THROWS(config_from_json(bad));
    bad = j;
    bad["unknown_key"] = 1;
    CHECK_THROWS(config_from_json(bad));
    bad = j;
    bad["algorithms"] = {"nope"};
    CHECK_THROWS(config_from_json(bad));
    bad = j;
    bad["chooser"]["beta"] = 0.0;
    CHECK_THROWS(config_from_json(bad));
}

TEST_CASE("command line exit codes") {
    CHECK(exit_code("") == 1);
    CHECK(exit_code("--help") == 0);
    CHECK(exit_code("schedule --epsilon 0.01 --delta 0.05 --alpha 1 --lambda 1 --c0 1 --c 1 --vc 1") == 0);
    CHECK(capture("schedule --epsilon 0.01 --delta 0.05 --alpha 1 --lambda 1 --c0 1 --c 1 --vc 1").find("s=69") !=
          std::string::npos);
    const std::string w4 = testing::fixture("w4.json").string();
    const auto audit = capture("world audit --fixture " + w4 + " --c0 2.5 --lambda 1");
    CHECK(audit.find("PASS") != std::string::npos);
    CHECK(exit_code("world audit --fixture /nonexistent/world.json") == 2);
    CHECK(exit_code("schedule --epsilon 2") == 2);
}
