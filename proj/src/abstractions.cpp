#include "sbar/abstractions.hpp"

#include <algorithm>

namespace sbar {

namespace {

std::string dot_quote(const std::string& s) {
    std::string out = "\"";
    for (char c : s) {
        if (c == '"' || c == '\\') out += '\\';
        out += c;
    }
    return out + "\"";
}

}  // namespace

void DirectlyFollows::derive_starts_ends() {
    starts.clear();
    ends.clear();
    std::set<Activity> has_pred, has_succ;
    for (const auto& [p, n] : pairs) {
        if (p.first == p.second) continue;
        has_succ.insert(p.first);
        has_pred.insert(p.second);
    }
    for (const auto& [a, n] : activities) {
        if (!has_pred.count(a)) starts.insert(a);
        if (!has_succ.count(a)) ends.insert(a);
    }
}

DirectlyFollows directly_follows(const EventLog& log) {
    DirectlyFollows df;
    for (const auto& [trace, count] : log) {
        if (trace.empty()) continue;
        df.starts.insert(trace.front());
        df.ends.insert(trace.back());
        for (std::size_t i = 0; i < trace.size(); ++i) {
            df.activities[trace[i]] += count;
            if (i + 1 < trace.size()) df.pairs[{trace[i], trace[i + 1]}] += count;
        }
    }
    return df;
}

// ---------------------------------------------------------------------------

DfState::DfState(DfConfig cfg) : cases_(cfg.cases), pairs_(cfg.pairs), census_(cfg.activities) {}

void DfState::update(const Event& e) {
    const auto& c = e.case_id;
    std::optional<Activity> prev;
    if (auto it = last_.find(c); it != last_.end()) prev = it->second;

    forget(cases_.insert(c));
    if (prev) {
        pairs_.insert({*prev, e.activity});
        if (cases_.contains(c)) last_.insert_or_assign(c, e.activity);
    } else if (cases_.contains(c)) {
        last_.insert_or_assign(c, e.activity);
        first_.insert_or_assign(c, e.activity);
    }
    census_.insert(e.activity);
}

void DfState::forget(const std::vector<CaseId>& evicted) {
    for (const auto& c : evicted) {
        last_.erase(c);
        first_.erase(c);
    }
}

DirectlyFollows DfState::extract() const {
    DirectlyFollows df;
    for (auto& [p, n] : pairs_.entries()) {
        df.activities.try_emplace(p.first, 0);
        df.activities.try_emplace(p.second, 0);
        df.pairs.emplace(p, n);
    }
    for (auto& [a, n] : census_.entries()) df.activities.insert_or_assign(a, n);
    df.derive_starts_ends();
    return df;
}

std::optional<Activity> DfState::last_activity(const CaseId& c) const {
    auto it = last_.find(c);
    if (it == last_.end()) return std::nullopt;
    return it->second;
}

std::optional<Activity> DfState::first_seen(const CaseId& c) const {
    auto it = first_.find(c);
    if (it == first_.end()) return std::nullopt;
    return it->second;
}

std::size_t DfState::byte_estimate() const {
    return cases_.size() * kCaseEntryBytes + pairs_.size() * kPairEntryBytes;
}

// ---------------------------------------------------------------------------

std::set<Trace> prefix_closure(const EventLog& log) {
    std::set<Trace> out;
    for (const auto& [trace, count] : log) {
        Trace prefix;
        out.insert(prefix);
        for (const auto& a : trace) {
            prefix.push_back(a);
            out.insert(prefix);
        }
    }
    return out;
}

PrefixState::PrefixState(SketchConfig cases, SketchConfig prefixes) : cases_(cases), prefixes_(prefixes) {}

void PrefixState::update(const Event& e) {
    const auto& c = e.case_id;
    auto it = running_.find(c);
    const bool known = it != running_.end();
    std::optional<Trace> extended;
    if (known) {
        extended = it->second;
        extended->push_back(e.activity);
    }

    for (const auto& gone : cases_.insert(c)) running_.erase(gone);

    if (extended) {
        prefixes_.insert(*extended);
        if (cases_.contains(c)) running_.insert_or_assign(c, std::move(*extended));
    } else {
        prefixes_.insert(Trace{});
        Trace first{e.activity};
        prefixes_.insert(first);
        if (cases_.contains(c)) running_.insert_or_assign(c, std::move(first));
    }
}

std::optional<Trace> PrefixState::running_prefix(const CaseId& c) const {
    auto it = running_.find(c);
    if (it == running_.end()) return std::nullopt;
    return it->second;
}

std::set<Trace> PrefixState::prefix_keys() const {
    std::set<Trace> out;
    for (auto& [t, n] : prefixes_.entries()) out.insert(t);
    return out;
}

// ---------------------------------------------------------------------------

ViewKind parse_view(std::string_view name) {
    if (name == "prefix") return ViewKind::prefix;
    if (name == "set") return ViewKind::set;
    if (name == "multiset") return ViewKind::multiset;
    throw std::invalid_argument("unknown view '" + std::string(name) + "'");
}

std::string render_view(ViewKind kind, const std::deque<Activity>& window) {
    std::string s;
    switch (kind) {
    case ViewKind::prefix: {
        s = "<";
        bool first = true;
        for (const auto& a : window) {
            if (!first) s += ',';
            s += a.str();
            first = false;
        }
        return s + ">";
    }
    case ViewKind::set: {
        std::set<Activity> members(window.begin(), window.end());
        s = "{";
        bool first = true;
        for (const auto& a : members) {
            if (!first) s += ',';
            s += a.str();
            first = false;
        }
        return s + "}";
    }
    case ViewKind::multiset: {
        std::map<Activity, std::size_t> counts;
        for (const auto& a : window) ++counts[a];
        s = "[";
        bool first = true;
        for (const auto& [a, n] : counts) {
            if (!first) s += ',';
            s += a.str();
            if (n > 1) s += "^" + std::to_string(n);
            first = false;
        }
        return s + "]";
    }
    }
    return s;
}

std::uint64_t TransitionSystem::total_count() const {
    std::uint64_t n = 0;
    for (const auto& [e, k] : edges) n += k;
    return n;
}

namespace {

void push_window(std::deque<Activity>& window, const Activity& a, const ViewSpec& view) {
    window.push_back(a);
    if (view.horizon && window.size() > *view.horizon) window.pop_front();
}

}  // namespace

TransitionSystem transition_system(const EventLog& log, ViewSpec view) {
    TransitionSystem ts;
    ts.initial = render_view(view.kind, {});
    ts.states.insert(ts.initial);
    for (const auto& [trace, count] : log) {
        std::deque<Activity> window;
        for (const auto& a : trace) {
            auto from = render_view(view.kind, window);
            push_window(window, a, view);
            auto to = render_view(view.kind, window);
            ts.states.insert(from);
            ts.states.insert(to);
            ts.edges[TsEdge{std::move(from), a, std::move(to)}] += count;
        }
    }
    return ts;
}

TsState::TsState(ViewSpec view, SketchConfig cases) : view_(view), cases_(cases) {
    if (view_.horizon && *view_.horizon == 0) throw std::invalid_argument("view horizon must be >= 1");
    ts_.initial = render_view(view_.kind, {});
    ts_.states.insert(ts_.initial);
}

void TsState::update(const Event& e) {
    const auto& c = e.case_id;
    for (const auto& gone : cases_.insert(c)) prune_case(gone);
    if (!cases_.contains(c)) return;

    auto& track = tracks_[c];
    auto from = render_view(view_.kind, track.window);
    push_window(track.window, e.activity, view_);
    auto to = render_view(view_.kind, track.window);
    ts_.states.insert(from);
    ts_.states.insert(to);
    TsEdge edge{std::move(from), e.activity, std::move(to)};
    ++ts_.edges[edge];
    track.contributed.push_back(std::move(edge));
}

void TsState::prune_case(const CaseId& c) {
    auto it = tracks_.find(c);
    if (it == tracks_.end()) return;
    for (const auto& edge : it->second.contributed) {
        auto e = ts_.edges.find(edge);
        if (e != ts_.edges.end() && --e->second == 0) ts_.edges.erase(e);
    }
    tracks_.erase(it);
    drop_unreachable();
}

void TsState::drop_unreachable() {
    std::map<std::string, std::vector<std::string>> succ;
    for (const auto& [e, n] : ts_.edges) succ[e.from].push_back(e.to);
    std::set<std::string> seen{ts_.initial};
    std::vector<std::string> todo{ts_.initial};
    while (!todo.empty()) {
        auto s = std::move(todo.back());
        todo.pop_back();
        for (const auto& t : succ[s]) {
            if (seen.insert(t).second) todo.push_back(t);
        }
    }
    std::erase_if(ts_.edges, [&](const auto& kv) { return !seen.count(kv.first.from); });
    ts_.states = std::move(seen);
}

std::uint64_t TsState::live_events() const { return ts_.total_count(); }

// ---------------------------------------------------------------------------

void write_df_csv(std::ostream& os, const DirectlyFollows& df) {
    os << "from,to,count\n";
    for (const auto& [p, n] : df.pairs) os << p.first << ',' << p.second << ',' << n << '\n';
}

void write_dot(std::ostream& os, const DirectlyFollows& df) {
    os << "digraph dfg {\n";
    for (const auto& [a, n] : df.activities) {
        os << "  " << dot_quote(a.str()) << " [shape=box,label=" << dot_quote(a.str() + " (" + std::to_string(n) + ")");
        if (df.starts.count(a)) os << ",color=green";
        if (df.ends.count(a)) os << ",peripheries=2";
        os << "];\n";
    }
    for (const auto& [p, n] : df.pairs) {
        os << "  " << dot_quote(p.first.str()) << " -> " << dot_quote(p.second.str()) << " [label=\"" << n << "\"];\n";
    }
    os << "}\n";
}

void write_dot(std::ostream& os, const TransitionSystem& ts) {
    os << "digraph ts {\n";
    std::map<std::string, std::size_t> id;
    for (const auto& s : ts.states) {
        const auto n = id.size();
        id[s] = n;
        os << "  s" << n << " [shape=circle,label=" << dot_quote(s);
        if (s == ts.initial) os << ",style=bold";
        os << "];\n";
    }
    for (const auto& [e, n] : ts.edges) {
        os << "  s" << id[e.from] << " -> s" << id[e.to] << " [label=" << dot_quote(e.activity.str())
           << ",weight=" << n << "];\n";
    }
    os << "}\n";
}

}  // namespace sbar
