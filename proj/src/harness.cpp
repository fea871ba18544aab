#include "mval/harness.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <memory>
#include <set>
#include <sstream>
#include <thread>

#include <fmt/core.h>

#include "mval/rng.hpp"
#include "mval/world_io.hpp"

namespace mval {

namespace {

using nlohmann::json;

void reject_unknown(const json& j, std::initializer_list<const char*> allowed, const std::string& where) {
    if (!j.is_object()) throw InvalidArgument(where + " must be a JSON object");
    for (const auto& item : j.items()) {
        bool known = false;
        for (const char* k : allowed) known = known || item.key() == k;
        if (!known) throw InvalidArgument("unknown key '" + item.key() + "' in " + where);
    }
}

template <typename T>
void read_field(const json& j, const char* key, T& out) {
    if (j.contains(key)) out = j.at(key).get<T>();
}

WorldSpec world_spec_from_json(const json& j) {
    reject_unknown(j, {"clusters_per_view", "compatibility", "positive_clusters", "margins", "masses", "shuffle_links"},
                   "world");
    WorldSpec s;
    s.positive_clusters.clear();
    s.margins.clear();
    read_field(j, "clusters_per_view", s.clusters_per_view);
    read_field(j, "compatibility", s.compatibility);
    read_field(j, "positive_clusters", s.positive_clusters);
    read_field(j, "margins", s.margins);
    read_field(j, "masses", s.masses);
    read_field(j, "shuffle_links", s.shuffle_links);
    return s;
}

json world_spec_to_json(const WorldSpec& s) {
    return {{"clusters_per_view", s.clusters_per_view}, {"compatibility", s.compatibility},
            {"positive_clusters", s.positive_clusters}, {"margins", s.margins},
            {"masses", s.masses},                       {"shuffle_links", s.shuffle_links}};
}

std::string num(double x) { return fmt::format("{}", x); }

}  // namespace

Schedule ExperimentConfig::schedule() const {
    if (theory) return schedule_theory(*theory);
    return schedule_practical(rounds, initial, queries_per_round);
}

void ExperimentConfig::validate() const {
    if (runs < 1) throw InvalidArgument("runs must be >= 1");
    if (!(test_fraction > 0.0 && test_fraction < 1.0)) throw InvalidArgument("test_fraction must lie in (0, 1)");
    if (algorithms.empty()) throw InvalidArgument("at least one algorithm is required");
    std::set<Algorithm> seen(algorithms.begin(), algorithms.end());
    if (seen.size() != algorithms.size()) throw InvalidArgument("algorithms must not repeat");
    if (!(smoothing > 0.0)) throw InvalidArgument("smoothing must be positive");
    chooser_sample_size(chooser.beta, chooser.delta);
    schedule();
}

ExperimentConfig config_from_json(const json& j) {
    reject_unknown(j,
                   {"mode", "world", "fixture", "pool_size", "dataset", "dataset_size", "test_fraction", "smoothing",
                    "algorithms", "initial", "queries_per_round", "rounds", "theory", "chooser", "runs", "seed",
                    "threads", "out_dir"},
                   "config");
    ExperimentConfig c;
    try {
        if (j.contains("mode")) {
            const auto m = j.at("mode").get<std::string>();
            if (m == "world") {
                c.mode = ExperimentMode::world;
            } else if (m == "dataset") {
                c.mode = ExperimentMode::dataset;
            } else {
                throw InvalidArgument("mode must be 'world' or 'dataset'");
            }
        }
        if (j.contains("world")) c.world = world_spec_from_json(j.at("world"));
        if (j.contains("fixture")) c.fixture = j.at("fixture").get<std::string>();
        read_field(j, "pool_size", c.pool_size);
        if (j.contains("dataset")) {
            const auto& d = j.at("dataset");
            reject_unknown(d, {"clusters_per_class", "features", "arity", "flip_noise", "positive_fraction"},
                           "dataset");
            read_field(d, "clusters_per_class", c.dataset.clusters_per_class);
            read_field(d, "features", c.dataset.features);
            read_field(d, "arity", c.dataset.arity);
            read_field(d, "flip_noise", c.dataset.flip_noise);
            read_field(d, "positive_fraction", c.dataset.positive_fraction);
        }
        read_field(j, "dataset_size", c.dataset_size);
        read_field(j, "test_fraction", c.test_fraction);
        read_field(j, "smoothing", c.smoothing);
        if (j.contains("algorithms")) {
            c.algorithms.clear();
            for (const auto& a : j.at("algorithms")) c.algorithms.push_back(algorithm_from_string(a.get<std::string>()));
        }
        read_field(j, "initial", c.initial);
        read_field(j, "queries_per_round", c.queries_per_round);
        read_field(j, "rounds", c.rounds);
        if (j.contains("theory")) {
            const auto& t = j.at("theory");
            reject_unknown(t, {"epsilon", "delta", "alpha", "lambda", "c0", "c", "vc"}, "theory");
            TheoryParams p;
            read_field(t, "epsilon", p.epsilon);
            read_field(t, "delta", p.delta);
            read_field(t, "alpha", p.alpha);
            read_field(t, "lambda", p.lambda);
            read_field(t, "c0", p.c0);
            read_field(t, "c", p.c);
            read_field(t, "vc", p.vc);
            c.theory = p;
        }
        if (j.contains("chooser")) {
            const auto& ch = j.at("chooser");
            reject_unknown(ch, {"beta", "delta"}, "chooser");
            read_field(ch, "beta", c.chooser.beta);
            read_field(ch, "delta", c.chooser.delta);
        }
        read_field(j, "runs", c.runs);
        read_field(j, "seed", c.seed);
        read_field(j, "threads", c.threads);
        if (j.contains("out_dir")) c.out_dir = j.at("out_dir").get<std::string>();
    } catch (const json::exception& e) {
        throw InvalidArgument(std::string("bad config: ") + e.what());
    }
    c.validate();
    return c;
}

json config_to_json(const ExperimentConfig& c) {
    json j;
    j["mode"] = c.mode == ExperimentMode::world ? "world" : "dataset";
    j["world"] = world_spec_to_json(c.world);
    if (c.fixture) j["fixture"] = c.fixture->string();
    j["pool_size"] = c.pool_size;
    j["dataset"] = {{"clusters_per_class", c.dataset.clusters_per_class},
                    {"features", c.dataset.features},
                    {"arity", c.dataset.arity},
                    {"flip_noise", c.dataset.flip_noise},
                    {"positive_fraction", c.dataset.positive_fraction}};
    j["dataset_size"] = c.dataset_size;
    j["test_fraction"] = c.test_fraction;
    j["smoothing"] = c.smoothing;
    j["algorithms"] = json::array();
    for (auto a : c.algorithms) j["algorithms"].push_back(to_string(a));
    j["initial"] = c.initial;
    j["queries_per_round"] = c.queries_per_round;
    j["rounds"] = c.rounds;
    if (c.theory) {
        const auto& t = *c.theory;
        j["theory"] = {{"epsilon", t.epsilon}, {"delta", t.delta}, {"alpha", t.alpha}, {"lambda", t.lambda},
                       {"c0", t.c0},           {"c", t.c},         {"vc", t.vc}};
    }
    j["chooser"] = {{"beta", c.chooser.beta}, {"delta", c.chooser.delta}};
    j["runs"] = c.runs;
    j["seed"] = c.seed;
    j["threads"] = c.threads;
    j["out_dir"] = c.out_dir.string();
    return j;
}

ExperimentConfig read_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open config " + path.string());
    json j;
    try {
        j = json::parse(in);
    } catch (const json::exception& e) {
        throw InvalidArgument("config " + path.string() + " is not valid JSON: " + e.what());
    }
    auto c = config_from_json(j);
    if (c.fixture && c.fixture->is_relative()) c.fixture = path.parent_path() / *c.fixture;
    return c;
}

std::uint64_t run_seed(const ExperimentConfig& c, std::size_t run) { return derive_seed(c.seed, run); }

namespace {

// Data shared by every method within one run.
struct RunData {
    std::optional<ClusterWorld> world;
    std::optional<Pool> pool;
    std::optional<TwoViewDataset> data;
    std::vector<std::size_t> pool_rows;
    std::vector<std::size_t> test_rows;
};

ClusterWorld experiment_world(const ExperimentConfig& c) {
    if (c.fixture) return read_world(*c.fixture);
    return build_world(c.world, c.seed);
}

std::size_t auto_pool_size(const ExperimentConfig& c) {
    if (c.pool_size > 0) return c.pool_size;
    const Schedule s = c.schedule();
    std::uint64_t budget = chooser_sample_size(c.chooser.beta, c.chooser.delta);
    for (auto m : s.m) budget += m;
    return static_cast<std::size_t>(100 * budget);
}

RunData prepare_run(const ExperimentConfig& c, const std::optional<ClusterWorld>& world, std::size_t run) {
    const std::uint64_t rs = run_seed(c, run);
    RunData d;
    if (c.mode == ExperimentMode::world) {
        d.world = *world;
        d.pool = sample_pool(*d.world, auto_pool_size(c), derive_seed(rs, 0));
        return d;
    }
    d.data = make_semi_artificial(c.dataset, derive_seed(rs, 0), c.dataset_size);
    std::vector<std::size_t> order(d.data->size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    Rng rng(derive_seed(rs, 1));
    rng.shuffle(order);
    const auto n_test = static_cast<std::size_t>(std::llround(c.test_fraction * static_cast<double>(order.size())));
    if (n_test == 0 || n_test >= order.size()) throw InvalidArgument("test split leaves an empty side");
    d.test_rows.assign(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(n_test));
    d.pool_rows.assign(order.begin() + static_cast<std::ptrdiff_t>(n_test), order.end());
    std::sort(d.test_rows.begin(), d.test_rows.end());
    std::sort(d.pool_rows.begin(), d.pool_rows.end());
    return d;
}

std::vector<TraceRow> run_method(const ExperimentConfig& c, const RunData& d, Algorithm algorithm, std::size_t run) {
    const Schedule schedule = c.schedule();
    const std::uint64_t method_seed = derive_seed(run_seed(c, run), 16 + static_cast<std::uint64_t>(algorithm));

    std::optional<Pool> pool;
    std::unique_ptr<TwoViewLearner> learner;
    LabelOracle* oracle = nullptr;
    std::optional<LabelOracle> dataset_oracle;
    const NaiveBayesLearner* nb = nullptr;
    if (d.world) {
        pool = *d.pool;
        learner = std::make_unique<ClusterErmLearner>(pool->instances, d.world->n1(), d.world->n2());
        oracle = &pool->oracle;
    } else {
        std::vector<Label> hidden;
        hidden.reserve(d.pool_rows.size());
        for (auto r : d.pool_rows) hidden.push_back(d.data->labels[r]);
        dataset_oracle.emplace(std::move(hidden));
        oracle = &*dataset_oracle;
        auto l = std::make_unique<NaiveBayesLearner>(*d.data, d.pool_rows, c.smoothing);
        nb = l.get();
        learner = std::move(l);
    }

    auto world_error = [&](Combination mode) {
        auto hs = learner->hypotheses();
        return error_rate(*d.world, CombinedClassifier(mode, hs->first, hs->second));
    };
    // Held-out test error of both combinations at once.
    auto test_errors = [&]() {
        std::size_t wrong_plus = 0, wrong_minus = 0;
        for (auto r : d.test_rows) {
            const Label y1 = nb->predict_features(View::first, d.data->view1[r]);
            const Label y2 = nb->predict_features(View::second, d.data->view2[r]);
            const Label y = d.data->labels[r];
            wrong_plus += predict_combined(Combination::plus, y1, y2) != y;
            wrong_minus += predict_combined(Combination::minus, y1, y2) != y;
        }
        const double n = static_cast<double>(d.test_rows.size());
        return std::pair{static_cast<double>(wrong_plus) / n, static_cast<double>(wrong_minus) / n};
    };

    std::vector<TraceRow> rows;
    std::vector<std::size_t> labeled;
    std::vector<Label> labels;
    auto checkpoint = [&](std::size_t round, double contention, Combination chosen, bool final) {
        TraceRow row;
        row.run_id = run;
        row.algorithm = algorithm;
        row.round = round;
        row.labels_cumulative = oracle->labels_revealed();
        row.contention = contention;
        row.final = final;
        if (d.world) {
            row.error_plus = world_error(Combination::plus);
            row.error_minus = world_error(Combination::minus);
            auto hs = learner->hypotheses();
            row.excess_exact = excess_error(*d.world, CombinedClassifier(chosen, hs->first, hs->second));
        } else {
            std::tie(row.error_plus, row.error_minus) = test_errors();
        }
        row.error_chosen = chosen == Combination::plus ? row.error_plus : row.error_minus;
        rows.push_back(row);
    };
    auto contention_now = [&](const RoundRecord& rec) {
        if (d.world) return contention_mass(*d.world, *rec.h1, *rec.h2);
        return static_cast<double>(rec.contention_size);
    };

    RunOptions options;
    options.fill_from_rest = true;
    options.on_round = [&](const RoundRecord& rec, const TwoViewLearner& l) {
        for (auto i : rec.contention_queries) labeled.push_back(i);
        for (auto i : rec.rest_queries) labeled.push_back(i);
        labels.resize(labeled.size());
        for (std::size_t k = labels.size() - rec.from_contention - rec.from_rest; k < labeled.size(); ++k) {
            labels[k] = oracle->peek(labeled[k]);
        }
        checkpoint(rec.round, contention_now(rec), choose_from_labeled(l, labeled, labels), false);
    };

    const std::uint64_t loop_seed = derive_seed(method_seed, 0);
    RunTrace trace;
    switch (algorithm) {
        case Algorithm::table1: trace = run_table1(*oracle, *learner, schedule, loop_seed, options); break;
        case Algorithm::table2: trace = run_table2(*oracle, *learner, schedule, loop_seed, options); break;
        case Algorithm::random:
            trace = run_random_sampling(*oracle, *learner, schedule.initial(), schedule.per_round(1), schedule.rounds,
                                        loop_seed, options);
            break;
    }

    const ChooserResult chooser = choose_combined(*learner, *oracle, c.chooser, derive_seed(method_seed, 1));
    // Pad the chooser's shortfall with uniform labels so every method spends the same budget.
    if (chooser.labels_used < chooser.labels_requested) {
        Rng rng(derive_seed(method_seed, 2));
        for (auto i : rng.sample(oracle->unqueried(), chooser.labels_requested - chooser.labels_used)) {
            oracle->query(i);
        }
    }
    checkpoint(trace.rounds.size(), contention_now(trace.rounds.back()), chooser.chosen, true);
    return rows;
}

}  // namespace

std::vector<TraceRow> run_single(const ExperimentConfig& c, Algorithm algorithm, std::size_t run) {
    c.validate();
    std::optional<ClusterWorld> world;
    if (c.mode == ExperimentMode::world) world = experiment_world(c);
    return run_method(c, prepare_run(c, world, run), algorithm, run);
}

ExperimentResult run_experiment(const ExperimentConfig& c) {
    c.validate();
    std::optional<ClusterWorld> world;
    if (c.mode == ExperimentMode::world) world = experiment_world(c);

    std::vector<std::vector<TraceRow>> per_run(c.runs);
    std::vector<std::string> failures(c.runs);
    std::atomic<std::size_t> next{0};
    auto worker = [&]() {
        for (std::size_t r = next++; r < c.runs; r = next++) {
            try {
                const RunData d = prepare_run(c, world, r);
                for (auto a : c.algorithms) {
                    auto rows = run_method(c, d, a, r);
                    per_run[r].insert(per_run[r].end(), rows.begin(), rows.end());
                }
            } catch (const std::exception& e) {
                failures[r] = e.what();
            }
        }
    };
    std::size_t threads = c.threads ? c.threads : std::max(1u, std::thread::hardware_concurrency());
    threads = std::min(threads, c.runs);
    std::vector<std::thread> pool;
    for (std::size_t t = 1; t < threads; ++t) pool.emplace_back(worker);
    worker();
    for (auto& t : pool) t.join();

    for (std::size_t r = 0; r < c.runs; ++r) {
        if (!failures[r].empty()) {
            throw Error(fmt::format("run {} (seed {}) failed: {}", r, run_seed(c, r), failures[r]));
        }
    }
    ExperimentResult out;
    for (auto& rows : per_run) out.rows.insert(out.rows.end(), rows.begin(), rows.end());
    out.curve = aggregate(out.rows, c.algorithms);
    return out;
}

std::vector<CurvePoint> aggregate(const std::vector<TraceRow>& rows, const std::vector<Algorithm>& order) {
    std::vector<CurvePoint> out;
    for (auto a : order) {
        std::map<std::size_t, std::vector<double>> by_labels;
        for (const auto& row : rows) {
            if (row.algorithm == a) by_labels[row.labels_cumulative].push_back(row.error_chosen);
        }
        for (const auto& [labels, errors] : by_labels) {
            CurvePoint p;
            p.method = to_string(a);
            p.labels_used = labels;
            p.runs = errors.size();
            double sum = 0.0;
            for (double e : errors) sum += e;
            p.mean_error = sum / static_cast<double>(p.runs);
            if (p.runs > 1) {
                double ss = 0.0;
                for (double e : errors) ss += (e - p.mean_error) * (e - p.mean_error);
                p.std_error = std::sqrt(ss / static_cast<double>(p.runs - 1));
            }
            out.push_back(p);
        }
    }
    return out;
}

std::string trace_csv(const std::vector<TraceRow>& rows) {
    std::string s =
        "run_id,algorithm,round,labels_cumulative,contention_mass_or_size,error_plus,error_minus,error_chosen,"
        "excess_exact\n";
    for (const auto& r : rows) {
        s += fmt::format("{},{},{},{},{},{},{},{},{}\n", r.run_id, to_string(r.algorithm), r.round,
                         r.labels_cumulative, num(r.contention), num(r.error_plus), num(r.error_minus),
                         num(r.error_chosen), r.excess_exact ? num(*r.excess_exact) : "");
    }
    return s;
}

std::string curve_csv(const std::vector<CurvePoint>& curve) {
    if (curve.empty()) throw InvalidArgument("empty curve table");
    std::string s = "method,labels_used,mean_error,std_error,runs\n";
    for (const auto& p : curve) {
        s += fmt::format("{},{},{},{},{}\n", p.method, p.labels_used, num(p.mean_error), num(p.std_error), p.runs);
    }
    return s;
}

namespace {

template <typename T>
T parse_number(const std::string& field, std::size_t line) {
    T v{};
    const auto* end = field.data() + field.size();
    const auto res = std::from_chars(field.data(), end, v);
    if (res.ec != std::errc{} || res.ptr != end) {
        throw InvalidArgument(fmt::format("curve CSV line {}: bad number '{}'", line, field));
    }
    return v;
}

}  // namespace

std::vector<CurvePoint> parse_curve_csv(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line) || line != "method,labels_used,mean_error,std_error,runs") {
        throw InvalidArgument("curve CSV header mismatch");
    }
    std::vector<CurvePoint> out;
    std::size_t n = 1;
    while (std::getline(in, line)) {
        ++n;
        if (line.empty()) continue;
        std::vector<std::string> f;
        std::istringstream ls(line);
        for (std::string cell; std::getline(ls, cell, ',');) f.push_back(cell);
        if (f.size() != 5) throw InvalidArgument(fmt::format("curve CSV line {}: expected 5 fields", n));
        CurvePoint p;
        p.method = f[0];
        p.labels_used = parse_number<std::size_t>(f[1], n);
        p.mean_error = parse_number<double>(f[2], n);
        p.std_error = parse_number<double>(f[3], n);
        p.runs = parse_number<std::size_t>(f[4], n);
        out.push_back(p);
    }
    return out;
}

void write_text(const std::filesystem::path& path, const std::string& text) {
    std::error_code ec;
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path(), ec);
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot write " + path.string());
    out << text;
    if (!out.flush()) throw Error("write failed for " + path.string());
}

void write_trace_csv(const std::vector<TraceRow>& rows, const std::filesystem::path& path) {
    write_text(path, trace_csv(rows));
}

void write_curve_csv(const std::vector<CurvePoint>& curve, const std::filesystem::path& path) {
    write_text(path, curve_csv(curve));
}

std::vector<CurvePoint> read_curve_csv(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_curve_csv(ss.str());
}

}  // namespace mval
