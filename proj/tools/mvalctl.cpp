#include <cstdio>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <fmt/core.h>
#include <json.hpp>

#include "mval/audit.hpp"
#include "mval/harness.hpp"
#include "mval/plot.hpp"
#include "mval/world_io.hpp"

using namespace mval;

namespace {

struct Options {
    std::uint64_t seed = 1;
    bool seed_set = false;
    std::string config;
    std::string out;
    std::string fixture;

    // world gen
    bool w4 = false;
    WorldSpec spec;
    // world audit
    double c0 = 2.5;
    double lambda = 1.0;
    std::size_t max_flips = 1;
    double epsilon = 0.0;
    // schedule
    TheoryParams theory;
    // run
    std::string algorithm = "table1";
    std::size_t run = 0;
    // plot
    std::string input;
    std::string title;
};

ExperimentConfig load_config(const Options& o) {
    ExperimentConfig c = o.config.empty() ? ExperimentConfig{} : read_config(o.config);
    if (o.seed_set) c.seed = o.seed;
    if (!o.fixture.empty()) {
        c.mode = ExperimentMode::world;
        c.fixture = o.fixture;
    }
    if (!o.out.empty()) c.out_dir = o.out;
    return c;
}

int world_gen(const Options& o) {
    const WorldSpec spec = o.w4 ? w4_spec() : o.spec;
    const ClusterWorld w = build_world(spec, o.seed);
    if (o.out.empty()) {
        std::cout << world_to_json(w) << "\n";
    } else {
        write_world(w, o.out);
    }
    return 0;
}

int world_audit(const Options& o) {
    if (o.fixture.empty()) throw InvalidArgument("world audit needs --fixture");
    const ClusterWorld w = read_world(o.fixture);
    nlohmann::json report;
    bool pass = true;
    for (View v : {View::first, View::second}) {
        const auto t = tsybakov_check(w, v, o.c0, o.lambda);
        pass = pass && t.pass;
        report["tsybakov"].push_back(t);
    }
    const HypothesisClass cls{o.max_flips};
    report["expansion"].push_back(estimate_alpha(w, ExpansionMode::exact_bayes, cls, 100000, o.seed));
    report["expansion"].push_back(estimate_alpha(w, ExpansionMode::intersection, cls, 100000, o.seed));
    report["intersection_gap"] = intersection_gap(w);
    const auto m = measures(w);
    if (contention_mass(w, m.bayes_set_1, m.bayes_set_2) > 0.0) {
        report["bayes_beta"] = estimate_beta(w, m.bayes_set_1, m.bayes_set_2, o.epsilon);
    }
    report["pass"] = pass;
    std::cout << report.dump(2) << "\n" << (pass ? "PASS" : "FAIL") << "\n";
    return 0;
}

int schedule(const Options& o) {
    const Schedule s = schedule_theory(o.theory);
    std::cout << fmt::format("k={}\nC1={}\nC2={}\ns={}\n", s.k, s.c1, s.c2, s.rounds);
    for (std::size_t i = 0; i < s.m.size(); ++i) std::cout << fmt::format("m[{}]={}\n", i, s.m[i]);
    return 0;
}

int run(const Options& o) {
    const ExperimentConfig c = load_config(o);
    const auto rows = run_single(c, algorithm_from_string(o.algorithm), o.run);
    if (o.out.empty()) {
        std::cout << trace_csv(rows);
    } else {
        write_trace_csv(rows, c.out_dir / fmt::format("trace_{}_{}.csv", o.algorithm, o.run));
    }
    return 0;
}

int curve(const Options& o) {
    const ExperimentConfig c = load_config(o);
    const auto result = run_experiment(c);
    write_trace_csv(result.rows, c.out_dir / "trace.csv");
    write_curve_csv(result.curve, c.out_dir / "curve.csv");
    emit_svg(result.curve, c.out_dir / "curve.svg");
    std::cout << curve_csv(result.curve);
    return 0;
}

int plot(const Options& o) {
    if (o.input.empty() || o.out.empty()) throw InvalidArgument("plot needs --in and --out");
    emit_svg(read_curve_csv(o.input), o.out, o.title);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Multi-view active learning toolkit"};
    app.require_subcommand(1);
    Options o;
    auto seed_opt = [&](CLI::App* sub) {
        sub->add_option_function<std::uint64_t>(
            "--seed", [&](std::uint64_t s) { o.seed = s, o.seed_set = true; }, "Master seed");
    };

    auto* world = app.add_subcommand("world", "Build or audit cluster worlds");
    world->require_subcommand(1);
    auto* gen = world->add_subcommand("gen", "Generate a world from a declarative spec");
    seed_opt(gen);
    gen->add_flag("--w4", o.w4, "Four-cluster reference world");
    gen->add_option("--clusters", o.spec.clusters_per_view, "Clusters per view");
    gen->add_option("--compatibility", o.spec.compatibility, "Links per view-1 cluster");
    gen->add_option("--positive", o.spec.positive_clusters, "Positive clusters");
    gen->add_option("--margin", o.spec.margins, "Margins |psi - 1/2|");
    gen->add_option("--masses", o.spec.masses, "Per-cluster masses");
    gen->add_flag("--shuffle", o.spec.shuffle_links, "Shuffle view-2 positions");
    gen->add_option("--out", o.out, "Output file (default stdout)");
    auto* audit = world->add_subcommand("audit", "Tsybakov, expansion and intersection audits");
    seed_opt(audit);
    audit->add_option("--fixture", o.fixture, "World JSON")->required();
    audit->add_option("--c0", o.c0, "Tsybakov constant");
    audit->add_option("--lambda", o.lambda, "Tsybakov exponent");
    audit->add_option("--max-flips", o.max_flips, "Hamming radius of the audited hypothesis class");
    audit->add_option("--epsilon", o.epsilon, "Threshold for the small-beta flag");

    auto* sched = app.add_subcommand("schedule", "Print the theory schedule");
    sched->add_option("--epsilon", o.theory.epsilon);
    sched->add_option("--delta", o.theory.delta);
    sched->add_option("--alpha", o.theory.alpha);
    sched->add_option("--lambda", o.theory.lambda);
    sched->add_option("--c0", o.theory.c0);
    sched->add_option("--c", o.theory.c);
    sched->add_option("--vc", o.theory.vc);

    auto* run_cmd = app.add_subcommand("run", "Run one algorithm once and print its trace CSV");
    auto* curve_cmd = app.add_subcommand("curve", "Run the full experiment and write CSV and SVG output");
    for (auto* sub : {run_cmd, curve_cmd}) {
        seed_opt(sub);
        sub->add_option("--config", o.config, "Experiment config JSON");
        sub->add_option("--fixture", o.fixture, "World JSON; switches to world mode");
        sub->add_option("--out", o.out, "Output directory");
    }
    run_cmd->add_option("--algorithm", o.algorithm, "table1, table2 or random");
    run_cmd->add_option("--run", o.run, "Run index");

    auto* plot_cmd = app.add_subcommand("plot", "Render a curve CSV as SVG");
    plot_cmd->add_option("--in", o.input, "Curve CSV")->required();
    plot_cmd->add_option("--out", o.out, "SVG file")->required();
    plot_cmd->add_option("--title", o.title);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        std::cerr << app.help();
        return 1;
    }

    try {
        if (*world) return *gen ? world_gen(o) : world_audit(o);
        if (*sched) return schedule(o);
        if (*run_cmd) return run(o);
        if (*curve_cmd) return curve(o);
        if (*plot_cmd) return plot(o);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 1;
}
