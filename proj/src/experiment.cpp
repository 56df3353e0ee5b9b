#include "sbar/experiment.hpp"

#include <chrono>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <numeric>
#include <sstream>

namespace sbar {

MinerKind parse_miner(std::string_view name) {
    if (name == "flower") return MinerKind::flower;
    if (name == "alpha") return MinerKind::alpha;
    if (name == "heuristics") return MinerKind::heuristics;
    if (name == "inductive") return MinerKind::inductive;
    if (name == "ts") return MinerKind::ts;
    throw std::invalid_argument("unknown miner '" + std::string(name) + "'");
}

std::string_view to_string(MinerKind k) {
    switch (k) {
    case MinerKind::flower: return "flower";
    case MinerKind::alpha: return "alpha";
    case MinerKind::heuristics: return "heuristics";
    case MinerKind::inductive: return "inductive";
    case MinerKind::ts: return "ts";
    }
    return "?";
}

namespace {

DiscoveredModel from_df(const MinerConfig& cfg, const DirectlyFollows& df) {
    DiscoveredModel out;
    switch (cfg.kind) {
    case MinerKind::flower: {
        std::set<Activity> acts;
        for (const auto& [a, n] : df.activities) acts.insert(a);
        out.net = flower_discover(acts);
        break;
    }
    case MinerKind::alpha:
        try {
            out.net = alpha_discover(df);
        } catch (const DiscoveryError& e) {
            out.error = e.what();
        }
        break;
    case MinerKind::heuristics:
        out.graph = heuristics_dependency(df, cfg.dep_threshold, cfg.min_count);
        out.net = dependency_to_petri(*out.graph);
        break;
    case MinerKind::inductive:
        out.tree = inductive_discover(df, InductiveOptions{cfg.noise});
        out.net = tree_to_petri(*out.tree);
        break;
    case MinerKind::ts: throw std::logic_error("ts miner has no directly-follows input");
    }
    return out;
}

DiscoveredModel from_ts(TransitionSystem ts) {
    DiscoveredModel out;
    out.net = ts_to_petri(ts);
    out.ts = std::move(ts);
    return out;
}

// Structure of a net up to place names; equal signatures replay identically.
std::string net_signature(const PetriNet& net) {
    std::ostringstream os;
    for (const auto& t : net.transitions()) {
        os << (t.label ? t.label->str() : std::string("~")) << '(';
        for (auto p : t.inputs) os << p << ',';
        os << ")(";
        for (auto p : t.outputs) os << p << ',';
        os << ')';
    }
    os << '|';
    for (const auto& [p, k] : net.initial) os << p << ':' << k << ',';
    os << '|';
    for (const auto& [p, k] : net.final) os << p << ':' << k << ',';
    return os.str();
}

}  // namespace

DiscoveredModel discover_batch(const MinerConfig& cfg, const EventLog& log) {
    if (cfg.kind == MinerKind::ts) return from_ts(transition_system(log, cfg.view));
    return from_df(cfg, directly_follows(log));
}

// ---------------------------------------------------------------------------

StreamingMiner::StreamingMiner(MinerConfig cfg) : cfg_(std::move(cfg)) {
    if (cfg_.kind == MinerKind::ts) {
        ts_.emplace(cfg_.view, cfg_.df.cases);
    } else {
        df_.emplace(cfg_.df);
    }
}

void StreamingMiner::update(const Event& e) {
    if (ts_) {
        ts_->update(e);
    } else {
        df_->update(e);
    }
}

Probe StreamingMiner::timed_update(const Event& e) {
    const auto t0 = std::chrono::steady_clock::now();
    update(e);
    const auto t1 = std::chrono::steady_clock::now();
    return Probe{static_cast<std::uint64_t>(std::chrono::duration_cast<std::chrono::nanoseconds>(t1 - t0).count()),
                 entry_count(), byte_estimate()};
}

DiscoveredModel StreamingMiner::discover() const {
    if (ts_) return from_ts(ts_emit(*ts_));
    return from_df(cfg_, df_->extract());
}

std::size_t StreamingMiner::entry_count() const {
    if (ts_) return ts_->cases().size() + ts_->system().edges.size();
    return df_->entry_count();
}

std::size_t StreamingMiner::byte_estimate() const {
    if (ts_) return ts_->cases().size() * kCaseEntryBytes + ts_->system().edges.size() * kPairEntryBytes;
    return df_->byte_estimate();
}

bool StreamingMiner::within_budget() const {
    if (ts_) return ts_->cases().size() <= ts_->cases().budget();
    return df_->cases().size() <= df_->cases().budget() && df_->pairs().size() <= df_->pairs().budget() &&
           df_->census().size() <= df_->census().budget();
}

// ---------------------------------------------------------------------------

MetricSeries run_convergence_experiment(EventSource& stream, const ExperimentSetup& setup) {
    if (setup.every == 0) throw std::invalid_argument("sample interval must be >= 1");
    MetricSeries series;
    for (std::size_t i = 1; i < setup.logs.size(); ++i) series.extra_names.push_back(setup.logs[i].name);

    std::vector<Activity> labels = setup.labels;
    if (labels.empty() && setup.reference_net) {
        std::set<Activity> seen;
        for (const auto& t : setup.reference_net->transitions()) {
            if (t.label) seen.insert(*t.label);
        }
        labels.assign(seen.begin(), seen.end());
    }
    std::optional<FootprintMatrix> ref_fm;
    if (setup.reference_net) ref_fm = footprint(*setup.reference_net, labels);

    StreamingMiner miner(setup.miner);
    std::string last_signature;
    MetricRecord cached;
    bool have_cached = false;

    auto sample = [&](std::uint64_t index, const Probe& p) {
        const auto model = miner.discover();
        const auto sig = net_signature(model.net);
        if (!have_cached || sig != last_signature) {
            cached = MetricRecord{};
            if (!setup.logs.empty()) {
                cached.fitness = replay_fitness(model.net, setup.logs.front().log);
                if (setup.compute_precision) cached.precision = precision_escaping(model.net, setup.logs.front().log);
                for (std::size_t i = 1; i < setup.logs.size(); ++i) {
                    cached.extra_fitness.push_back(replay_fitness(model.net, setup.logs[i].log));
                }
            }
            if (ref_fm) cached.distance = matrix_distance(footprint(model.net, labels), *ref_fm);
            last_signature = sig;
            have_cached = true;
        }
        MetricRecord r = cached;
        r.event = index;
        r.ns = p.ns;
        r.entries = p.entries;
        r.bytes = p.bytes;
        series.records.push_back(std::move(r));
    };

    std::uint64_t index = 0;
    Probe last;
    while (auto e = stream.next()) {
        ++index;
        last = miner.timed_update(*e);
        series.update_ns.push_back(last.ns);
        series.max_entries = std::max(series.max_entries, last.entries);
        if (setup.check_budgets && !miner.within_budget()) series.budget_violations.push_back(index);
        if (index % setup.every == 0) sample(index, last);
    }
    if (index > 0 && index % setup.every != 0) sample(index, last);
    return series;
}

void write_csv(std::ostream& os, const MetricSeries& s) {
    os << "event,fitness,precision,distance,ns,entries,bytes";
    for (const auto& n : s.extra_names) os << ",fitness_" << n;
    os << '\n';
    os << std::setprecision(6) << std::fixed;
    for (const auto& r : s.records) {
        os << r.event << ',' << r.fitness << ',' << r.precision << ',' << r.distance << ',' << r.ns << ','
           << r.entries << ',' << r.bytes;
        for (double f : r.extra_fitness) os << ',' << f;
        os << '\n';
    }
}

double mean(const std::vector<double>& xs) {
    if (xs.empty()) return 0.0;
    return std::accumulate(xs.begin(), xs.end(), 0.0) / static_cast<double>(xs.size());
}

double stdev(const std::vector<double>& xs) {
    if (xs.empty()) return 0.0;
    const double m = mean(xs);
    double sq = 0;
    for (double x : xs) sq += (x - m) * (x - m);
    return std::sqrt(sq / static_cast<double>(xs.size()));
}

double ls_slope(const std::vector<double>& ys) {
    const auto n = static_cast<double>(ys.size());
    if (ys.size() < 2) return 0.0;
    const double mx = (n - 1) / 2.0;
    const double my = mean(ys);
    double num = 0, den = 0;
    for (std::size_t i = 0; i < ys.size(); ++i) {
        const double dx = static_cast<double>(i) - mx;
        num += dx * (ys[i] - my);
        den += dx * dx;
    }
    return num / den;
}

Summary summarize(const MetricSeries& s) {
    Summary out;
    std::vector<double> ns(s.update_ns.begin(), s.update_ns.end());
    out.mean_ns = mean(ns);
    out.stdev_ns = stdev(ns);
    if (s.records.empty()) return out;
    const auto& last = s.records.back();
    out.fitness = last.fitness;
    out.precision = last.precision;
    out.distance = last.distance;
    const std::size_t tail = std::max<std::size_t>(1, (s.records.size() + 9) / 10);
    std::vector<double> fit;
    for (std::size_t i = s.records.size() - tail; i < s.records.size(); ++i) fit.push_back(s.records[i].fitness);
    out.tail_fitness_stdev = stdev(fit);
    out.stabilized = out.tail_fitness_stdev <= kStabilityThreshold;
    return out;
}

std::string format_summary(const Summary& s) {
    std::ostringstream os;
    os << std::fixed << std::setprecision(6) << "final fitness=" << s.fitness << " precision=" << s.precision
       << " distance=" << s.distance << std::setprecision(1) << " mean_ns=" << s.mean_ns
       << " stdev_ns=" << s.stdev_ns << std::setprecision(6) << " tail_fitness_stdev=" << s.tail_fitness_stdev
       << (s.stabilized ? " stabilized" : " not stabilized");
    return os.str();
}

std::map<std::string, std::string> parse_config(std::istream& in) {
    std::map<std::string, std::string> out;
    std::string line;
    std::size_t no = 0;
    auto trim = [](std::string s) {
        const auto b = s.find_first_not_of(" \t\r");
        if (b == std::string::npos) return std::string();
        const auto e = s.find_last_not_of(" \t\r");
        return s.substr(b, e - b + 1);
    };
    while (std::getline(in, line)) {
        ++no;
        if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) throw ParseError(no, "expected key = value");
        auto key = trim(line.substr(0, eq));
        if (key.empty()) throw ParseError(no, "empty key");
        out[key] = trim(line.substr(eq + 1));
    }
    return out;
}

std::map<std::string, std::string> load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open config '" + path + "'");
    return parse_config(in);
}

}  // namespace sbar
