#pragma once

#include "sbar/event.hpp"
#include "sbar/sketch.hpp"

#include <cstdint>
#include <deque>
#include <map>
#include <optional>
#include <ostream>
#include <set>
#include <string>
#include <tuple>
#include <unordered_map>
#include <vector>

namespace sbar {

// ---------------------------------------------------------------------------
// Directly-follows

/// Counted a > b relation with derived start/end activities.
struct DirectlyFollows {
    std::map<ActivityPair, std::uint64_t> pairs;
    std::map<Activity, std::uint64_t> activities;
    std::set<Activity> starts;
    std::set<Activity> ends;

    std::uint64_t count(const Activity& a, const Activity& b) const {
        auto it = pairs.find({a, b});
        return it == pairs.end() ? 0 : it->second;
    }

    /// Fills `starts`/`ends` from the pairs: no incoming (outgoing) pair from
    /// (to) a different activity. Activities must already be populated.
    void derive_starts_ends();
};

/// Batch computation over a complete log; starts/ends are the first/last
/// activities of the traces.
DirectlyFollows directly_follows(const EventLog& log);

/// Byte model for resident-size estimates: hash node, counter, and the
/// D^C last-activity slot or the D^A key pair (short-string storage).
inline constexpr std::size_t kCaseEntryBytes = 112;
inline constexpr std::size_t kPairEntryBytes = 104;

struct DfConfig {
    SketchConfig cases;
    SketchConfig pairs;
    SketchConfig activities;

    static DfConfig uniform(SketchConfig c) { return {c, c, c}; }
};

/// Streaming state: D^C (case -> last activity), D^A (pair counts) and an
/// activity census.
class DfState {
public:
    explicit DfState(DfConfig cfg);

    void update(const Event& e);
    DirectlyFollows extract() const;

    const BudgetSketch<CaseId>& cases() const { return cases_; }
    const BudgetSketch<ActivityPair>& pairs() const { return pairs_; }
    const BudgetSketch<Activity>& census() const { return census_; }
    std::optional<Activity> last_activity(const CaseId& c) const;
    /// Diagnostic only; not used to derive start activities.
    std::optional<Activity> first_seen(const CaseId& c) const;

    /// Resident entries in D^C and D^A.
    std::size_t entry_count() const { return cases_.size() + pairs_.size(); }
    std::size_t byte_estimate() const;

private:
    void forget(const std::vector<CaseId>& evicted);

    BudgetSketch<CaseId> cases_;
    BudgetSketch<ActivityPair> pairs_;
    BudgetSketch<Activity> census_;
    std::unordered_map<CaseId, Activity> last_;
    std::unordered_map<CaseId, Activity> first_;
};

// ---------------------------------------------------------------------------
// Prefix-closure

/// Batch prefix-closure, including the empty trace when the log is non-empty.
std::set<Trace> prefix_closure(const EventLog& log);

class PrefixState {
public:
    PrefixState(SketchConfig cases, SketchConfig prefixes);

    void update(const Event& e);

    const BudgetSketch<Trace>& prefixes() const { return prefixes_; }
    const BudgetSketch<CaseId>& cases() const { return cases_; }
    std::optional<Trace> running_prefix(const CaseId& c) const;
    std::set<Trace> prefix_keys() const;

private:
    BudgetSketch<CaseId> cases_;
    BudgetSketch<Trace> prefixes_;
    std::unordered_map<CaseId, Trace> running_;
};

// ---------------------------------------------------------------------------
// Transition systems

enum class ViewKind { prefix, set, multiset };

ViewKind parse_view(std::string_view name);

struct ViewSpec {
    ViewKind kind = ViewKind::multiset;
    /// Number of most recent activities the view is built from; unbounded when
    /// empty.
    std::optional<std::size_t> horizon;
};

/// Canonical state label: prefix `<a,b>`, set `{a,b}`, multiset `[a,b^2]`.
std::string render_view(ViewKind kind, const std::deque<Activity>& window);

struct TsEdge {
    std::string from;
    Activity activity;
    std::string to;
    friend auto operator<=>(const TsEdge&, const TsEdge&) = default;
    friend bool operator==(const TsEdge&, const TsEdge&) = default;
};

struct TransitionSystem {
    std::string initial;
    std::set<std::string> states;
    std::map<TsEdge, std::uint64_t> edges;

    std::uint64_t total_count() const;
    friend bool operator==(const TransitionSystem&, const TransitionSystem&) = default;
};

TransitionSystem transition_system(const EventLog& log, ViewSpec view);

/// D^C keeps each resident case's last `horizon` activities and the edges it
/// contributed, so that evicted cases can be pruned from the system.
class TsState {
public:
    TsState(ViewSpec view, SketchConfig cases);

    void update(const Event& e);
    /// Removes case `c`'s contribution; unknown cases are ignored.
    void prune_case(const CaseId& c);

    const TransitionSystem& system() const { return ts_; }
    TransitionSystem snapshot() const { return ts_; }
    const BudgetSketch<CaseId>& cases() const { return cases_; }
    const ViewSpec& view() const { return view_; }
    /// Events that produced an edge still present in the system.
    std::uint64_t live_events() const;

private:
    struct Track {
        std::deque<Activity> window;
        std::vector<TsEdge> contributed;
    };

    void drop_unreachable();

    ViewSpec view_;
    BudgetSketch<CaseId> cases_;
    std::unordered_map<CaseId, Track> tracks_;
    TransitionSystem ts_;
};

// ---------------------------------------------------------------------------
// Dumps

/// `from,to,count` with a header line.
void write_df_csv(std::ostream& os, const DirectlyFollows& df);
void write_dot(std::ostream& os, const DirectlyFollows& df);
void write_dot(std::ostream& os, const TransitionSystem& ts);

}  // namespace sbar
