#include "sbar/discovery.hpp"

#include <algorithm>
#include <bit>
#include <cstdint>
#include <deque>
#include <functional>
#include <iomanip>
#include <numeric>
#include <sstream>
#include <unordered_set>

namespace sbar {

PetriNet flower_discover(const std::set<Activity>& activities) {
    PetriNet net;
    const auto p = net.add_place("flower");
    for (const auto& a : activities) {
        const auto t = net.add_transition(a.str(), a);
        net.add_input(t, p);
        net.add_output(t, p);
    }
    net.initial = {{p, 1}};
    net.final = {{p, 1}};
    return net;
}

// ---------------------------------------------------------------------------
// alpha

namespace {

using Mask = std::uint64_t;

struct AlphaPlace {
    Mask in;
    Mask out;
    friend bool operator==(const AlphaPlace&, const AlphaPlace&) = default;
    friend auto operator<=>(const AlphaPlace&, const AlphaPlace&) = default;
};

struct AlphaPlaceHash {
    std::size_t operator()(const AlphaPlace& p) const noexcept {
        return std::hash<Mask>{}(p.in * 0x9e3779b97f4a7c15ULL ^ p.out);
    }
};

std::string mask_name(Mask m, const std::vector<Activity>& acts) {
    std::string s = "{";
    bool first = true;
    for (std::size_t i = 0; i < acts.size(); ++i) {
        if (!(m >> i & 1)) continue;
        if (!first) s += ',';
        s += acts[i].str();
        first = false;
    }
    return s + "}";
}

}  // namespace

PetriNet alpha_discover(const DirectlyFollows& df) {
    if (df.starts.empty() || df.ends.empty()) {
        throw DiscoveryError("alpha: start and end activities must be non-empty");
    }
    std::set<Activity> alphabet(df.starts.begin(), df.starts.end());
    alphabet.insert(df.ends.begin(), df.ends.end());
    for (const auto& [a, n] : df.activities) alphabet.insert(a);
    for (const auto& [p, n] : df.pairs) {
        alphabet.insert(p.first);
        alphabet.insert(p.second);
    }
    const std::vector<Activity> acts(alphabet.begin(), alphabet.end());
    if (acts.size() > kAlphaMaxActivities) {
        throw DiscoveryError("alpha: alphabet of " + std::to_string(acts.size()) + " activities exceeds " +
                             std::to_string(kAlphaMaxActivities));
    }
    const std::size_t n = acts.size();
    auto index = [&](const Activity& a) {
        return static_cast<std::size_t>(std::lower_bound(acts.begin(), acts.end(), a) - acts.begin());
    };

    std::vector<Mask> follows(n, 0);
    for (const auto& [p, cnt] : df.pairs) follows[index(p.first)] |= Mask{1} << index(p.second);
    auto f = [&](std::size_t a, std::size_t b) { return (follows[a] >> b & 1) != 0; };

    std::vector<Mask> causal(n, 0), choice(n, 0);
    for (std::size_t a = 0; a < n; ++a) {
        for (std::size_t b = 0; b < n; ++b) {
            if (f(a, b) && !f(b, a)) causal[a] |= Mask{1} << b;
            if (!f(a, b) && !f(b, a)) choice[a] |= Mask{1} << b;
        }
    }
    auto valid = [&](const AlphaPlace& p) {
        for (std::size_t a = 0; a < n; ++a) {
            if (p.in >> a & 1) {
                if ((p.out & ~causal[a]) != 0 || (p.in & ~choice[a]) != 0) return false;
            }
            if (p.out >> a & 1) {
                if ((p.out & ~choice[a]) != 0) return false;
            }
        }
        return true;
    };

    std::vector<AlphaPlace> basic;
    for (std::size_t a = 0; a < n; ++a) {
        for (std::size_t b = 0; b < n; ++b) {
            AlphaPlace p{Mask{1} << a, Mask{1} << b};
            if ((causal[a] >> b & 1) && valid(p)) basic.push_back(p);
        }
    }
    std::unordered_set<AlphaPlace, AlphaPlaceHash> seen(basic.begin(), basic.end());
    std::deque<AlphaPlace> work(basic.begin(), basic.end());
    while (!work.empty()) {
        const auto p = work.front();
        work.pop_front();
        for (const auto& q : basic) {
            AlphaPlace m{p.in | q.in, p.out | q.out};
            if (m == p || seen.count(m) || !valid(m)) continue;
            seen.insert(m);
            work.push_back(m);
        }
    }
    std::vector<AlphaPlace> maximal;
    for (const auto& p : seen) {
        bool dominated = false;
        for (const auto& q : seen) {
            if (!(p == q) && (p.in & q.in) == p.in && (p.out & q.out) == p.out) {
                dominated = true;
                break;
            }
        }
        if (!dominated) maximal.push_back(p);
    }
    std::sort(maximal.begin(), maximal.end());

    PetriNet net;
    std::vector<TransitionId> trans(n);
    for (std::size_t a = 0; a < n; ++a) trans[a] = net.add_transition(acts[a].str(), acts[a]);
    const auto source = net.add_place("source");
    const auto sink = net.add_place("sink");
    for (const auto& s : df.starts) net.add_input(trans[index(s)], source);
    for (const auto& e : df.ends) net.add_output(trans[index(e)], sink);
    for (const auto& p : maximal) {
        const auto place = net.add_place("(" + mask_name(p.in, acts) + "," + mask_name(p.out, acts) + ")");
        for (std::size_t a = 0; a < n; ++a) {
            if (p.in >> a & 1) net.add_output(trans[a], place);
            if (p.out >> a & 1) net.add_input(trans[a], place);
        }
    }
    net.initial = {{source, 1}};
    net.final = {{sink, 1}};
    return net;
}

// ---------------------------------------------------------------------------
// heuristics

double dependency_value(const DirectlyFollows& df, const Activity& a, const Activity& b) {
    const double ab = static_cast<double>(df.count(a, b));
    if (a == b) return ab / (ab + 1.0);
    const double ba = static_cast<double>(df.count(b, a));
    return (ab - ba) / (ab + ba + 1.0);
}

DependencyGraph heuristics_dependency(const DirectlyFollows& df, double dep_threshold, std::uint64_t min_count) {
    DependencyGraph g;
    g.nodes = df.activities;
    for (const auto& [p, cnt] : df.pairs) {
        if (cnt < min_count) continue;
        const double v = dependency_value(df, p.first, p.second);
        if (v >= dep_threshold) g.edges.emplace(p, v);
    }
    return g;
}

PetriNet dependency_to_petri(const DependencyGraph& g) {
    PetriNet net;
    std::map<Activity, TransitionId> trans;
    for (const auto& [a, n] : g.nodes) trans.emplace(a, net.add_transition(a.str(), a));
    const auto source = net.add_place("source");
    const auto sink = net.add_place("sink");
    std::set<Activity> has_in, has_out;
    for (const auto& [e, v] : g.edges) {
        if (!trans.count(e.first) || !trans.count(e.second)) continue;
        const auto p = net.add_place(e.first.str() + "=>" + e.second.str());
        net.add_output(trans.at(e.first), p);
        net.add_input(trans.at(e.second), p);
        if (e.first != e.second) {
            has_out.insert(e.first);
            has_in.insert(e.second);
        }
    }
    for (const auto& [a, t] : trans) {
        if (!has_in.count(a)) net.add_input(t, source);
        if (!has_out.count(a)) net.add_output(t, sink);
    }
    net.initial = {{source, 1}};
    net.final = {{sink, 1}};
    return net;
}

void write_dot(std::ostream& os, const DependencyGraph& g) {
    os << "digraph dependency {\n";
    for (const auto& [a, n] : g.nodes) {
        os << "  \"" << a << "\" [shape=box,label=\"" << a << "\\n" << n << "\"];\n";
    }
    for (const auto& [e, v] : g.edges) {
        std::ostringstream label;
        label << std::fixed << std::setprecision(3) << v;
        os << "  \"" << e.first << "\" -> \"" << e.second << "\" [label=\"" << label.str() << "\"];\n";
    }
    os << "}\n";
}

// ---------------------------------------------------------------------------
// inductive

namespace {

struct Dfg {
    std::vector<Activity> nodes;
    std::vector<std::vector<std::uint64_t>> w;
    std::vector<bool> start;
    std::vector<bool> end;

    std::size_t size() const { return nodes.size(); }
    bool edge(std::size_t a, std::size_t b) const { return w[a][b] > 0; }
};

using Part = std::vector<std::size_t>;
using Cut = std::vector<Part>;

struct UnionFind {
    std::vector<std::size_t> parent;
    explicit UnionFind(std::size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
    std::size_t find(std::size_t x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    }
    void unite(std::size_t a, std::size_t b) { parent[find(a)] = find(b); }

    Cut groups() {
        std::map<std::size_t, Part> by_root;
        for (std::size_t i = 0; i < parent.size(); ++i) by_root[find(i)].push_back(i);
        Cut out;
        for (auto& [r, p] : by_root) out.push_back(std::move(p));
        std::sort(out.begin(), out.end());
        return out;
    }
};

Dfg from_df(const DirectlyFollows& df, double noise) {
    Dfg g;
    for (const auto& [a, n] : df.activities) g.nodes.push_back(a);
    const auto n = g.nodes.size();
    g.w.assign(n, std::vector<std::uint64_t>(n, 0));
    g.start.assign(n, false);
    g.end.assign(n, false);
    auto index = [&](const Activity& a) {
        return static_cast<std::size_t>(std::lower_bound(g.nodes.begin(), g.nodes.end(), a) - g.nodes.begin());
    };
    for (const auto& [p, cnt] : df.pairs) {
        if (!df.activities.count(p.first) || !df.activities.count(p.second)) continue;
        g.w[index(p.first)][index(p.second)] = cnt;
    }
    for (const auto& s : df.starts) {
        if (df.activities.count(s)) g.start[index(s)] = true;
    }
    for (const auto& e : df.ends) {
        if (df.activities.count(e)) g.end[index(e)] = true;
    }
    if (noise > 0) {
        for (std::size_t a = 0; a < n; ++a) {
            const auto max_out = *std::max_element(g.w[a].begin(), g.w[a].end());
            for (std::size_t b = 0; b < n; ++b) {
                if (static_cast<double>(g.w[a][b]) < noise * static_cast<double>(max_out)) g.w[a][b] = 0;
            }
        }
    }
    return g;
}

enum class Boundary { keep, crossing };

// Sub-graph on `part`. With `crossing`, nodes entered (left) from outside the
// part also become start (end) activities.
Dfg project(const Dfg& g, const Part& part, Boundary rule) {
    Dfg s;
    const auto n = part.size();
    std::vector<bool> inside(g.size(), false);
    for (auto i : part) inside[i] = true;
    s.w.assign(n, std::vector<std::uint64_t>(n, 0));
    for (std::size_t i = 0; i < n; ++i) {
        const auto gi = part[i];
        s.nodes.push_back(g.nodes[gi]);
        for (std::size_t j = 0; j < n; ++j) s.w[i][j] = g.w[gi][part[j]];
        bool st = g.start[gi], en = g.end[gi];
        if (rule == Boundary::crossing) {
            for (std::size_t x = 0; x < g.size(); ++x) {
                if (inside[x]) continue;
                st = st || g.edge(x, gi);
                en = en || g.edge(gi, x);
            }
        }
        s.start.push_back(st);
        s.end.push_back(en);
    }
    return s;
}

std::optional<Cut> exclusive_cut(const Dfg& g) {
    UnionFind uf(g.size());
    for (std::size_t a = 0; a < g.size(); ++a) {
        for (std::size_t b = 0; b < g.size(); ++b) {
            if (g.edge(a, b)) uf.unite(a, b);
        }
    }
    auto parts = uf.groups();
    if (parts.size() < 2) return std::nullopt;
    return parts;
}

std::vector<std::vector<bool>> reachability(const Dfg& g) {
    const auto n = g.size();
    std::vector<std::vector<bool>> r(n, std::vector<bool>(n, false));
    for (std::size_t a = 0; a < n; ++a) {
        for (std::size_t b = 0; b < n; ++b) r[a][b] = g.edge(a, b);
    }
    for (std::size_t k = 0; k < n; ++k) {
        for (std::size_t a = 0; a < n; ++a) {
            if (!r[a][k]) continue;
            for (std::size_t b = 0; b < n; ++b) {
                if (r[k][b]) r[a][b] = true;
            }
        }
    }
    return r;
}

std::optional<Cut> sequence_cut(const Dfg& g) {
    const auto n = g.size();
    const auto r = reachability(g);
    UnionFind uf(n);
    for (std::size_t a = 0; a < n; ++a) {
        for (std::size_t b = a + 1; b < n; ++b) {
            if (r[a][b] == r[b][a]) uf.unite(a, b);
        }
    }
    auto parts = uf.groups();
    if (parts.size() < 2) return std::nullopt;
    auto before = [&](const Part& x, const Part& y) {
        for (auto a : x) {
            for (auto b : y) {
                if (r[a][b]) return true;
            }
        }
        return false;
    };
    // Order by number of groups that reach a group; validated below.
    std::vector<std::pair<std::size_t, Part>> ranked;
    for (const auto& p : parts) {
        std::size_t preds = 0;
        for (const auto& q : parts) {
            if (&p != &q && before(q, p)) ++preds;
        }
        ranked.emplace_back(preds, p);
    }
    std::sort(ranked.begin(), ranked.end());
    Cut ordered;
    for (auto& [k, p] : ranked) ordered.push_back(std::move(p));
    for (std::size_t i = 0; i < ordered.size(); ++i) {
        for (std::size_t j = i + 1; j < ordered.size(); ++j) {
            for (auto a : ordered[i]) {
                for (auto b : ordered[j]) {
                    if (!r[a][b] || r[b][a]) return std::nullopt;
                }
            }
        }
    }
    return ordered;
}

std::optional<Cut> parallel_cut(const Dfg& g) {
    const auto n = g.size();
    UnionFind uf(n);
    for (std::size_t a = 0; a < n; ++a) {
        for (std::size_t b = a + 1; b < n; ++b) {
            if (!(g.edge(a, b) && g.edge(b, a))) uf.unite(a, b);
        }
    }
    auto comps = uf.groups();
    auto complete = [&](const Part& p) {
        bool st = false, en = false;
        for (auto a : p) {
            st = st || g.start[a];
            en = en || g.end[a];
        }
        return st && en;
    };
    Cut good, lacking;
    for (auto& c : comps) (complete(c) ? good : lacking).push_back(std::move(c));
    if (good.empty()) return std::nullopt;
    for (const auto& c : lacking) good.front().insert(good.front().end(), c.begin(), c.end());
    if (good.size() < 2) return std::nullopt;
    for (auto& p : good) std::sort(p.begin(), p.end());
    std::sort(good.begin(), good.end());
    return good;
}

std::optional<Cut> loop_cut(const Dfg& g) {
    const auto n = g.size();
    std::vector<bool> in_do(n, false);
    bool any_start = false, any_end = false;
    for (std::size_t a = 0; a < n; ++a) {
        in_do[a] = g.start[a] || g.end[a];
        any_start = any_start || g.start[a];
        any_end = any_end || g.end[a];
    }
    if (!any_start || !any_end) return std::nullopt;

    UnionFind uf(n);
    for (std::size_t a = 0; a < n; ++a) {
        for (std::size_t b = 0; b < n; ++b) {
            if (!in_do[a] && !in_do[b] && g.edge(a, b)) uf.unite(a, b);
        }
    }
    Cut redo;
    for (auto& c : uf.groups()) {
        if (!in_do[c.front()]) redo.push_back(std::move(c));
    }

    auto valid_redo = [&](const Part& c) {
        std::vector<bool> inside(n, false);
        for (auto x : c) inside[x] = true;
        bool entered = false, left = false;
        for (std::size_t a = 0; a < n; ++a) {
            if (inside[a]) continue;
            for (auto x : c) {
                if (g.edge(a, x)) {
                    if (!in_do[a] || !g.end[a]) return false;
                    entered = true;
                    for (std::size_t e = 0; e < n; ++e) {
                        if (g.end[e] && !g.edge(e, x)) return false;
                    }
                }
                if (g.edge(x, a)) {
                    if (!in_do[a] || !g.start[a]) return false;
                    left = true;
                    for (std::size_t s = 0; s < n; ++s) {
                        if (g.start[s] && !g.edge(x, s)) return false;
                    }
                }
            }
        }
        return entered && left;
    };

    bool changed = true;
    while (changed) {
        changed = false;
        for (auto it = redo.begin(); it != redo.end(); ++it) {
            if (!valid_redo(*it)) {
                for (auto x : *it) in_do[x] = true;
                redo.erase(it);
                changed = true;
                break;
            }
        }
    }
    if (redo.empty()) return std::nullopt;
    Part body;
    for (std::size_t a = 0; a < n; ++a) {
        if (in_do[a]) body.push_back(a);
    }
    Cut out{body};
    out.insert(out.end(), redo.begin(), redo.end());
    return out;
}

ProcessTree flower_of(const Dfg& g) {
    std::vector<ProcessTree> leaves;
    for (const auto& a : g.nodes) leaves.push_back(ProcessTree::leaf(a));
    return ProcessTree::loop({ProcessTree::silent(), ProcessTree::xor_of(std::move(leaves))});
}

ProcessTree mine(const Dfg& g) {
    if (g.size() == 0) return ProcessTree::silent();
    if (g.size() == 1) {
        auto leaf = ProcessTree::leaf(g.nodes.front());
        if (g.edge(0, 0)) return ProcessTree::loop({std::move(leaf), ProcessTree::silent()});
        return leaf;
    }
    auto recurse = [&](ProcessTree::Kind kind, const Cut& cut, auto&& rule_for) {
        ProcessTree t;
        t.kind = kind;
        for (std::size_t i = 0; i < cut.size(); ++i) t.children.push_back(mine(project(g, cut[i], rule_for(i))));
        return t;
    };
    if (auto cut = exclusive_cut(g)) {
        return recurse(ProcessTree::Kind::xor_, *cut, [](std::size_t) { return Boundary::keep; });
    }
    if (auto cut = sequence_cut(g)) {
        return recurse(ProcessTree::Kind::seq, *cut, [](std::size_t) { return Boundary::crossing; });
    }
    if (auto cut = parallel_cut(g)) {
        return recurse(ProcessTree::Kind::and_, *cut, [](std::size_t) { return Boundary::keep; });
    }
    if (auto cut = loop_cut(g)) {
        if (cut->size() == 2) {
            return recurse(ProcessTree::Kind::loop, *cut,
                           [](std::size_t i) { return i == 0 ? Boundary::keep : Boundary::crossing; });
        }
        ProcessTree redo;
        redo.kind = ProcessTree::Kind::xor_;
        for (std::size_t i = 1; i < cut->size(); ++i) redo.children.push_back(mine(project(g, (*cut)[i], Boundary::crossing)));
        return ProcessTree::loop({mine(project(g, cut->front(), Boundary::keep)), std::move(redo)});
    }
    return flower_of(g);
}

}  // namespace

ProcessTree inductive_discover(const DirectlyFollows& df, InductiveOptions opts) {
    return flatten(mine(from_df(df, opts.noise)));
}

// ---------------------------------------------------------------------------
// tree -> net

namespace {

class TreeTranslator {
public:
    PetriNet run(const ProcessTree& t) {
        const auto source = net_.add_place("source");
        const auto sink = net_.add_place("sink");
        translate(t, source, sink);
        net_.initial = {{source, 1}};
        net_.final = {{sink, 1}};
        return std::move(net_);
    }

private:
    PlaceId place() { return net_.add_place("p" + std::to_string(net_.places().size())); }

    TransitionId silent(PlaceId in, PlaceId out) {
        const auto t = net_.add_transition("tau_" + std::to_string(taus_++), std::nullopt);
        net_.add_input(t, in);
        net_.add_output(t, out);
        return t;
    }

    void translate(const ProcessTree& t, PlaceId in, PlaceId out) {
        using K = ProcessTree::Kind;
        switch (t.kind) {
        case K::leaf: {
            const auto tr = net_.add_transition(t.activity->str(), t.activity);
            net_.add_input(tr, in);
            net_.add_output(tr, out);
            return;
        }
        case K::silent: silent(in, out); return;
        case K::seq: {
            PlaceId cur = in;
            for (std::size_t i = 0; i < t.children.size(); ++i) {
                const PlaceId next = i + 1 == t.children.size() ? out : place();
                translate(t.children[i], cur, next);
                cur = next;
            }
            return;
        }
        case K::xor_:
            for (const auto& c : t.children) translate(c, in, out);
            return;
        case K::and_: {
            const auto split = net_.add_transition("tau_" + std::to_string(taus_++), std::nullopt);
            const auto join = net_.add_transition("tau_" + std::to_string(taus_++), std::nullopt);
            net_.add_input(split, in);
            net_.add_output(join, out);
            for (const auto& c : t.children) {
                const auto a = place();
                const auto b = place();
                net_.add_output(split, a);
                net_.add_input(join, b);
                translate(c, a, b);
            }
            return;
        }
        case K::loop: {
            const auto entry = place();
            const auto exit = place();
            silent(in, entry);
            translate(t.children[0], entry, exit);
            for (std::size_t i = 1; i < t.children.size(); ++i) translate(t.children[i], exit, entry);
            silent(exit, out);
            return;
        }
        }
    }

    PetriNet net_;
    std::size_t taus_ = 0;
};

}  // namespace

PetriNet tree_to_petri(const ProcessTree& t) {
    t.validate();
    return TreeTranslator{}.run(t);
}

TransitionSystem ts_emit(const TsState& s) { return s.snapshot(); }

PetriNet ts_to_petri(const TransitionSystem& ts) {
    PetriNet net;
    std::map<std::string, PlaceId> place;
    for (const auto& s : ts.states) place.emplace(s, net.add_place(s));
    for (const auto& [e, n] : ts.edges) {
        const auto t = net.add_transition(e.from + "-" + e.activity.str(), e.activity);
        net.add_input(t, place.at(e.from));
        net.add_output(t, place.at(e.to));
    }
    if (auto it = place.find(ts.initial); it != place.end()) net.initial = {{it->second, 1}};
    return net;
}

}  // namespace sbar
