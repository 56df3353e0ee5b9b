// sbar: simulate event streams, discover models from them with bounded
// memory, and evaluate convergence against reference behaviour.

#include "sbar/experiment.hpp"
#include "sbar/simulate.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

namespace fs = std::filesystem;
using namespace sbar;

namespace {

enum Exit { ok = 0, usage = 1, parse = 2, invariant = 3 };

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct InvariantError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct Options {
    std::string input = "-";
    std::string format = "ndjson";
    std::string miner = "inductive";
    std::size_t dc = 100;
    std::size_t da = 100;
    std::size_t activities = 100;
    std::string policy = "lossy";
    bool eager = true;
    std::string view = "multiset";
    std::size_t horizon = 0;
    std::size_t every = 1000;
    std::string out = ".";
    std::string sim_out = "-";
    bool debug_assert = false;
    double dep_threshold = 0.9;
    std::uint64_t min_count = 1;
    double noise = 0.0;

    std::string model = "loan";
    std::string post_model;
    std::size_t drift_at = 0;
    std::size_t cases = 100;
    std::size_t concurrency = 10;
    std::uint64_t seed = 1;

    std::string reference_log;
    std::string reference_model;
    std::vector<std::string> extra_logs;
    std::string csv;
    bool no_precision = false;
};

MinerConfig miner_config(const Options& o) {
    MinerConfig m;
    m.kind = parse_miner(o.miner);
    const auto policy = parse_policy(o.policy);
    m.df.cases = SketchConfig{policy, o.dc, o.eager};
    m.df.pairs = SketchConfig{policy, o.da, o.eager};
    m.df.activities = SketchConfig{policy, o.activities, o.eager};
    m.view.kind = parse_view(o.view);
    if (o.horizon > 0) m.view.horizon = o.horizon;
    m.dep_threshold = o.dep_threshold;
    m.min_count = o.min_count;
    m.noise = o.noise;
    return m;
}

ProcessTree model_from(const std::string& spec) {
    if (spec == "loan") return loan_model();
    if (spec == "loan_drift") return loan_model_drifted();
    return load_tree(spec);
}

std::vector<Event> read_all(const std::string& path, Format format) {
    auto src = LineSource::open(path, format);
    std::vector<Event> events;
    while (auto e = src->next()) events.push_back(std::move(*e));
    return events;
}

std::string padded(std::uint64_t i) {
    std::ostringstream os;
    os << std::setw(9) << std::setfill('0') << i;
    return os.str();
}

fs::path ensure_dir(const std::string& dir) {
    fs::path p(dir);
    fs::create_directories(p);
    return p;
}

void write_snapshot(const fs::path& dir, std::uint64_t index, const DiscoveredModel& m) {
    const auto stem = dir / ("model_" + padded(index));
    std::ofstream dot(stem.string() + ".dot");
    if (m.graph) {
        write_dot(dot, *m.graph);
        return;
    }
    if (m.ts) {
        write_dot(dot, *m.ts);
        return;
    }
    write_dot(dot, m.net, "model_" + padded(index));
    std::ofstream pnml(stem.string() + ".pnml");
    write_pnml(pnml, m.net, "model_" + padded(index));
}

int cmd_discover(const Options& o) {
    const auto cfg = miner_config(o);
    auto src = LineSource::open(o.input, parse_format(o.format));
    const auto dir = ensure_dir(o.out);
    StreamingMiner miner(cfg);
    std::uint64_t index = 0;
    std::uint64_t written = 0;
    while (auto e = src->next()) {
        ++index;
        miner.update(*e);
        if (o.debug_assert && !miner.within_budget()) {
            throw InvariantError("sketch budget exceeded after event " + std::to_string(index));
        }
        if (o.every > 0 && index % o.every == 0) {
            write_snapshot(dir, index, miner.discover());
            written = index;
        }
    }
    if (written != index || index == 0) write_snapshot(dir, index, miner.discover());
    return Exit::ok;
}

int cmd_simulate(const Options& o) {
    std::vector<Event> events;
    SimModel pre{model_from(o.model), o.concurrency};
    if (o.drift_at > 0) {
        if (o.post_model.empty()) throw UsageError("--drift-at requires --post-model");
        DriftSpec spec{pre, SimModel{model_from(o.post_model), o.concurrency}, o.drift_at};
        events = simulate_drift(spec, o.cases, o.seed);
    } else {
        events = simulate(pre, o.cases, o.seed);
    }
    std::ofstream file;
    std::ostream* os = &std::cout;
    if (o.sim_out != "-" && !o.sim_out.empty()) {
        file.open(o.sim_out);
        if (!file) throw std::runtime_error("cannot write '" + o.sim_out + "'");
        os = &file;
    }
    for (const auto& e : events) *os << write_ndjson(e) << '\n';
    return Exit::ok;
}

int cmd_evaluate(const Options& o) {
    if (o.reference_log.empty() || o.reference_model.empty()) {
        throw UsageError("evaluate needs --reference-log and --reference-model");
    }
    const auto cfg = miner_config(o);
    const auto format = parse_format(o.format);
    ExperimentSetup setup;
    setup.miner = cfg;
    setup.every = o.every == 0 ? 1 : o.every;
    setup.compute_precision = !o.no_precision;
    setup.check_budgets = o.debug_assert;
    setup.logs.push_back({"reference", to_log(read_all(o.reference_log, format))});
    for (const auto& spec : o.extra_logs) {
        const auto eq = spec.find('=');
        if (eq == std::string::npos) throw UsageError("--extra-log expects NAME=FILE");
        setup.logs.push_back({spec.substr(0, eq), to_log(read_all(spec.substr(eq + 1), format))});
    }
    if (o.reference_model == "batch") {
        setup.reference_net = discover_batch(cfg, setup.logs.front().log).net;
    } else if (fs::path(o.reference_model).extension() == ".pnml") {
        setup.reference_net = load_pnml(o.reference_model);
    } else {
        setup.reference_net = tree_to_petri(load_tree(o.reference_model));
    }

    auto src = LineSource::open(o.input, format);
    const auto series = run_convergence_experiment(*src, setup);
    if (!series.budget_violations.empty()) {
        throw InvariantError("sketch budget exceeded after event " + std::to_string(series.budget_violations.front()));
    }
    const auto csv_path = o.csv.empty() ? (ensure_dir(o.out) / "metrics.csv").string() : o.csv;
    std::ofstream csv(csv_path);
    if (!csv) throw std::runtime_error("cannot write '" + csv_path + "'");
    write_csv(csv, series);
    std::cout << format_summary(summarize(series)) << '\n';
    return Exit::ok;
}

void add_miner_options(CLI::App* sub, Options& o) {
    sub->add_option("--miner", o.miner, "Discovery back-end")
        ->check(CLI::IsMember({"flower", "alpha", "heuristics", "inductive", "ts"}));
    sub->add_option("--dc", o.dc, "Case budget |D^C|")->check(CLI::PositiveNumber);
    sub->add_option("--da", o.da, "Pair budget |D^A|")->check(CLI::PositiveNumber);
    sub->add_option("--activities", o.activities, "Activity census budget")->check(CLI::PositiveNumber);
    sub->add_option("--policy", o.policy, "Sketch policy")
        ->check(CLI::IsMember({"lossy", "spacesaving", "frequent"}));
    sub->add_flag("--eager,!--no-eager", o.eager, "Keep Lossy Counting within budget between bucket boundaries");
    sub->add_option("--view", o.view, "Transition-system view")->check(CLI::IsMember({"prefix", "set", "multiset"}));
    sub->add_option("--horizon", o.horizon, "View horizon (0 = unbounded)");
    sub->add_option("--dep-threshold", o.dep_threshold, "Heuristics dependency threshold")
        ->check(CLI::Range(0.0, 1.0));
    sub->add_option("--min-count", o.min_count, "Heuristics minimum pair count");
    sub->add_option("--noise", o.noise, "Inductive infrequent-edge filter")->check(CLI::Range(0.0, 1.0));
    sub->add_option("--format", o.format, "Input format")->check(CLI::IsMember({"ndjson", "csv"}));
    sub->add_option("--input,-i", o.input, "Event stream ('-' for standard input)");
    sub->add_option("--every", o.every, "Sample interval in events");
    sub->add_flag("--debug-assert", o.debug_assert, "Check sketch budgets after every event");
}

// Turns `key = value` lines into `--key value` arguments placed before the
// command-line ones, so explicit flags win.
std::vector<std::string> config_args(const std::string& path) {
    std::vector<std::string> args;
    for (const auto& [k, v] : load_config(path)) args.push_back("--" + k + "=" + v);
    return args;
}

}  // namespace

int main(int argc, char** argv) {
    Options o;
    CLI::App app{"Streaming process discovery with bounded memory"};
    app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast)->always_capture_default();
    app.require_subcommand(1);

    auto* discover = app.add_subcommand("discover", "Discover models from an event stream");
    add_miner_options(discover, o);
    discover->add_option("--out", o.out, "Output directory")->envname("SBAR_OUTPUT_DIR");

    auto* simulate = app.add_subcommand("simulate", "Generate an event stream from a process tree");
    simulate->add_option("--model", o.model, "Tree file, or 'loan' / 'loan_drift'");
    simulate->add_option("--post-model", o.post_model, "Tree followed by cases after the drift point");
    simulate->add_option("--drift-at", o.drift_at, "Last case following --model");
    simulate->add_option("--cases", o.cases, "Number of cases")->check(CLI::PositiveNumber);
    simulate->add_option("--concurrency", o.concurrency, "Maximum active cases")->check(CLI::PositiveNumber);
    simulate->add_option("--seed", o.seed, "Random seed");
    simulate->add_option("--out,-o", o.sim_out, "Output file ('-' for standard output)");

    auto* evaluate = app.add_subcommand("evaluate", "Track fitness, precision and footprint distance");
    add_miner_options(evaluate, o);
    evaluate->add_option("--reference-log", o.reference_log, "Complete log as an event stream");
    evaluate->add_option("--reference-model", o.reference_model, "Tree file, PNML file, or 'batch' for the offline model");
    evaluate->add_option("--extra-log", o.extra_logs, "Additional fitness log NAME=FILE")
        ->multi_option_policy(CLI::MultiOptionPolicy::TakeAll);
    evaluate->add_option("--csv", o.csv, "Metric series output (default <out>/metrics.csv)");
    evaluate->add_option("--out", o.out, "Output directory")->envname("SBAR_OUTPUT_DIR");
    evaluate->add_flag("--no-precision", o.no_precision, "Skip precision computation");

    std::vector<std::string> args;
    for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
    for (auto* sub : {discover, simulate, evaluate}) sub->add_option("--config", "Flat key = value file");

    try {
        // Expand --config before CLI11 sees the arguments.
        std::vector<std::string> expanded;
        for (std::size_t i = 0; i < args.size(); ++i) {
            if (args[i] == "--config" && i + 1 < args.size()) {
                auto extra = config_args(args[i + 1]);
                const auto at = expanded.empty() ? expanded.end() : expanded.begin() + 1;
                expanded.insert(at, extra.begin(), extra.end());
                ++i;
            } else if (args[i].rfind("--config=", 0) == 0) {
                auto extra = config_args(args[i].substr(9));
                const auto at = expanded.empty() ? expanded.end() : expanded.begin() + 1;
                expanded.insert(at, extra.begin(), extra.end());
            } else {
                expanded.push_back(args[i]);
            }
        }
        std::reverse(expanded.begin(), expanded.end());
        app.parse(expanded);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? Exit::ok : Exit::usage;
    } catch (const std::exception& e) {
        std::cerr << "sbar: " << e.what() << '\n';
        return Exit::usage;
    }

    try {
        if (*discover) return cmd_discover(o);
        if (*simulate) return cmd_simulate(o);
        return cmd_evaluate(o);
    } catch (const UsageError& e) {
        std::cerr << "sbar: " << e.what() << '\n';
        return Exit::usage;
    } catch (const ParseError& e) {
        std::cerr << "sbar: parse error: " << e.what() << '\n';
        return Exit::parse;
    } catch (const TreeSyntaxError& e) {
        std::cerr << "sbar: model syntax error at " << e.what() << '\n';
        return Exit::parse;
    } catch (const InvariantError& e) {
        std::cerr << "sbar: invariant violation: " << e.what() << '\n';
        return Exit::invariant;
    } catch (const std::invalid_argument& e) {
        std::cerr << "sbar: " << e.what() << '\n';
        return Exit::usage;
    } catch (const std::exception& e) {
        std::cerr << "sbar: " << e.what() << '\n';
        return Exit::parse;
    }
}
