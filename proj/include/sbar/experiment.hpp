#pragma once

#include "sbar/abstractions.hpp"
#include "sbar/discovery.hpp"
#include "sbar/evaluation.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

namespace sbar {

enum class MinerKind { flower, alpha, heuristics, inductive, ts };

MinerKind parse_miner(std::string_view name);
std::string_view to_string(MinerKind k);

struct MinerConfig {
    MinerKind kind = MinerKind::inductive;
    /// D^C, D^A and the activity census. For `ts` only `df.cases` is used.
    DfConfig df = DfConfig::uniform({});
    ViewSpec view;
    double dep_threshold = 0.9;
    std::uint64_t min_count = 1;
    double noise = 0.0;
};

/// Output of one discovery call. `net` is always set; the native model of the
/// back-end is kept alongside.
struct DiscoveredModel {
    PetriNet net;
    std::optional<ProcessTree> tree;
    std::optional<DependencyGraph> graph;
    std::optional<TransitionSystem> ts;
    /// Set when the back-end refused its input (alpha without start or end
    /// activities); `net` is then empty.
    std::optional<std::string> error;
};

/// Batch model of a complete log, built with the same back-end.
DiscoveredModel discover_batch(const MinerConfig& cfg, const EventLog& log);

struct Probe {
    std::uint64_t ns = 0;
    std::size_t entries = 0;
    std::size_t bytes = 0;
};

/// Abstraction maintenance plus discovery for one configured back-end.
class StreamingMiner {
public:
    explicit StreamingMiner(MinerConfig cfg);

    void update(const Event& e);
    /// Wall-clock time of update() only, then the resident sizes.
    Probe timed_update(const Event& e);
    DiscoveredModel discover() const;

    /// Resident entries: D^C + D^A (ts: D^C + edges).
    std::size_t entry_count() const;
    std::size_t byte_estimate() const;
    /// Resident sketch entries within their configured budgets.
    bool within_budget() const;

    const MinerConfig& config() const { return cfg_; }
    const std::optional<DfState>& df() const { return df_; }
    const std::optional<TsState>& ts() const { return ts_; }

private:
    MinerConfig cfg_;
    std::optional<DfState> df_;
    std::optional<TsState> ts_;
};

struct MetricRecord {
    std::uint64_t event = 0;
    double fitness = 1.0;
    double precision = 1.0;
    double distance = 0.0;
    std::uint64_t ns = 0;
    std::size_t entries = 0;
    std::size_t bytes = 0;
    /// Fitness against the additional reference logs, in order.
    std::vector<double> extra_fitness;
};

struct MetricSeries {
    std::vector<std::string> extra_names;
    std::vector<MetricRecord> records;
    /// update() time of every processed event, not only sampled ones.
    std::vector<std::uint64_t> update_ns;
    /// Events after which a sketch exceeded its budget (only when checked).
    std::vector<std::uint64_t> budget_violations;
    std::size_t max_entries = 0;
};

struct NamedLog {
    std::string name;
    EventLog log;
};

struct ExperimentSetup {
    MinerConfig miner;
    std::size_t every = 1;
    /// First log drives `fitness` and `precision`; others add fitness columns.
    std::vector<NamedLog> logs;
    /// Footprint reference; the distance is 0 throughout when absent.
    std::optional<PetriNet> reference_net;
    /// Label universe for the footprint; defaults to the reference net's
    /// visible labels, sorted.
    std::vector<Activity> labels;
    bool check_budgets = false;
    bool compute_precision = true;
};

/// Consumes `stream` to exhaustion. Metrics are sampled every `every` events
/// and after the last one.
MetricSeries run_convergence_experiment(EventSource& stream, const ExperimentSetup& setup);

/// `event,fitness,precision,distance,ns,entries,bytes` plus one
/// `fitness_<name>` column per additional log.
void write_csv(std::ostream& os, const MetricSeries& s);

struct Summary {
    double fitness = 1.0;
    double precision = 1.0;
    double distance = 0.0;
    double mean_ns = 0.0;
    double stdev_ns = 0.0;
    /// Standard deviation of fitness over the last 10% of samples.
    double tail_fitness_stdev = 0.0;
    bool stabilized = true;
};

inline constexpr double kStabilityThreshold = 0.01;

Summary summarize(const MetricSeries& s);
std::string format_summary(const Summary& s);

double mean(const std::vector<double>& xs);
double stdev(const std::vector<double>& xs);
/// Least-squares slope of ys against their index.
double ls_slope(const std::vector<double>& ys);

/// Flat `key = value` file; `#` starts a comment, blank lines are skipped.
/// Throws ParseError on a line without `=`.
std::map<std::string, std::string> parse_config(std::istream& in);
std::map<std::string, std::string> load_config(const std::string& path);

}  // namespace sbar
