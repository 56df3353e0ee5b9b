#include "sbar/evaluation.hpp"

#include <cmath>
#include <deque>
#include <map>
#include <unordered_map>

namespace sbar {

double ReplayCounts::fitness() const {
    const double m = consumed == 0 ? 0.0 : static_cast<double>(missing) / static_cast<double>(consumed);
    const double r = produced == 0 ? 0.0 : static_cast<double>(remaining) / static_cast<double>(produced);
    return 0.5 * (1.0 - m) + 0.5 * (1.0 - r);
}

namespace {

class Replayer {
public:
    explicit Replayer(const PetriNet& net) : net_(net) {
        for (TransitionId t = 0; t < net.transitions().size(); ++t) {
            const auto& tr = net.transitions()[t];
            if (tr.label) {
                by_label_[tr.label->str()].push_back(t);
            } else {
                silent_.push_back(t);
            }
        }
    }

    const std::vector<TransitionId>* candidates(const Activity& a) const {
        auto it = by_label_.find(a.str());
        return it == by_label_.end() ? nullptr : &it->second;
    }

    /// Shortest sequence of silent firings from `m` to a marking satisfying
    /// `goal`; empty when `m` already does.
    template <class Goal>
    std::optional<std::vector<TransitionId>> silent_path(const Marking& m, Goal&& goal) const {
        if (goal(m)) return std::vector<TransitionId>{};
        if (silent_.empty()) return std::nullopt;
        struct Node {
            Marking marking;
            std::size_t parent;
            TransitionId via;
            std::size_t depth;
        };
        const std::size_t max_depth = 2 * net_.transitions().size();
        std::vector<Node> nodes{{m, 0, 0, 0}};
        std::set<Marking> seen{m};
        for (std::size_t head = 0; head < nodes.size(); ++head) {
            if (nodes[head].depth >= max_depth) continue;
            for (auto t : silent_) {
                if (!net_.enabled(nodes[head].marking, t)) continue;
                auto next = net_.fire(nodes[head].marking, t);
                if (!seen.insert(next).second) continue;
                nodes.push_back({std::move(next), head, t, nodes[head].depth + 1});
                if (goal(nodes.back().marking)) {
                    std::vector<TransitionId> path;
                    for (std::size_t i = nodes.size() - 1; i != 0; i = nodes[i].parent) path.push_back(nodes[i].via);
                    return std::vector<TransitionId>(path.rbegin(), path.rend());
                }
                if (seen.size() >= kSilentSearchCap) return std::nullopt;
            }
        }
        return std::nullopt;
    }

    void fire(Marking& m, TransitionId t, ReplayCounts& c) const {
        c.consumed += net_.transitions()[t].inputs.size();
        c.produced += net_.transitions()[t].outputs.size();
        m = net_.fire(m, t);
    }

    /// Fires `a` without creating tokens, using silent moves if needed.
    bool step_fitting(Marking& m, const Activity& a, ReplayCounts& c) const {
        const auto* ts = candidates(a);
        if (!ts) return false;
        for (auto t : *ts) {
            if (net_.enabled(m, t)) {
                fire(m, t, c);
                return true;
            }
        }
        auto path = silent_path(m, [&](const Marking& x) {
            for (auto t : *ts) {
                if (net_.enabled(x, t)) return true;
            }
            return false;
        });
        if (!path) return false;
        for (auto t : *path) fire(m, t, c);
        for (auto t : *ts) {
            if (net_.enabled(m, t)) {
                fire(m, t, c);
                return true;
            }
        }
        return false;
    }

    void step_forced(Marking& m, const Activity& a, ReplayCounts& c) const {
        const auto* ts = candidates(a);
        if (!ts) {
            ++c.missing;
            ++c.consumed;
            return;
        }
        TransitionId best = ts->front();
        std::uint64_t best_deficit = UINT64_MAX;
        for (auto t : *ts) {
            const auto d = deficit(m, t);
            if (d < best_deficit) {
                best = t;
                best_deficit = d;
            }
        }
        std::map<PlaceId, std::uint32_t> need;
        for (auto p : net_.transitions()[best].inputs) ++need[p];
        for (const auto& [p, k] : need) {
            const auto have = m.count(p) ? m.at(p) : 0u;
            if (have < k) {
                c.missing += k - have;
                m[p] = k;
            }
        }
        fire(m, best, c);
    }

    void finish(Marking& m, ReplayCounts& c) const {
        if (auto path = silent_path(m, [&](const Marking& x) { return x == net_.final; })) {
            for (auto t : *path) fire(m, t, c);
        }
        c.consumed += token_count(net_.final);
        for (const auto& [p, k] : net_.final) {
            const auto have = m.count(p) ? m.at(p) : 0u;
            if (have < k) c.missing += k - have;
        }
        for (const auto& [p, k] : m) {
            const auto want = net_.final.count(p) ? net_.final.at(p) : 0u;
            if (k > want) c.remaining += k - want;
        }
    }

    std::set<Activity> enabled_visible(const Marking& m) const {
        std::set<Activity> out;
        std::set<Marking> seen{m};
        std::deque<Marking> todo{m};
        while (!todo.empty() && seen.size() < kSilentSearchCap) {
            auto x = std::move(todo.front());
            todo.pop_front();
            for (TransitionId t = 0; t < net_.transitions().size(); ++t) {
                if (!net_.enabled(x, t)) continue;
                const auto& tr = net_.transitions()[t];
                if (tr.label) {
                    out.insert(*tr.label);
                } else {
                    auto next = net_.fire(x, t);
                    if (seen.insert(next).second) todo.push_back(std::move(next));
                }
            }
        }
        return out;
    }

private:
    std::uint64_t deficit(const Marking& m, TransitionId t) const {
        std::map<PlaceId, std::uint32_t> need;
        for (auto p : net_.transitions()[t].inputs) ++need[p];
        std::uint64_t d = 0;
        for (const auto& [p, k] : need) {
            const auto have = m.count(p) ? m.at(p) : 0u;
            if (have < k) d += k - have;
        }
        return d;
    }

    const PetriNet& net_;
    std::unordered_map<std::string, std::vector<TransitionId>> by_label_;
    std::vector<TransitionId> silent_;
};

ReplayCounts replay_with(const Replayer& r, const PetriNet& net, const Trace& trace) {
    ReplayCounts c;
    Marking m = net.initial;
    c.produced = token_count(m);
    for (const auto& a : trace) {
        if (!r.step_fitting(m, a, c)) r.step_forced(m, a, c);
    }
    r.finish(m, c);
    return c;
}

}  // namespace

ReplayCounts replay_trace(const PetriNet& net, const Trace& trace) {
    return replay_with(Replayer(net), net, trace);
}

double replay_fitness(const PetriNet& net, const EventLog& log) {
    const Replayer r(net);
    double sum = 0;
    std::uint64_t n = 0;
    for (const auto& [trace, count] : log) {
        sum += static_cast<double>(count) * replay_with(r, net, trace).fitness();
        n += count;
    }
    return n == 0 ? 1.0 : sum / static_cast<double>(n);
}

std::set<Activity> enabled_activities(const PetriNet& net, const Marking& m) {
    return Replayer(net).enabled_visible(m);
}

double precision_escaping(const PetriNet& net, const EventLog& log) {
    struct State {
        std::uint64_t weight = 0;
        std::set<Activity> observed;
        std::size_t enabled = 0;
    };
    const Replayer r(net);
    std::map<Trace, State> states;
    for (const auto& [trace, count] : log) {
        Marking m = net.initial;
        ReplayCounts scratch;
        Trace prefix;
        for (const auto& a : trace) {
            auto [it, fresh] = states.try_emplace(prefix);
            if (fresh) it->second.enabled = r.enabled_visible(m).size();
            if (!r.step_fitting(m, a, scratch)) break;
            it->second.weight += count;
            it->second.observed.insert(a);
            prefix.push_back(a);
        }
    }
    double num = 0, den = 0;
    for (const auto& [p, s] : states) {
        if (s.weight == 0 || s.enabled == 0) continue;
        const double w = static_cast<double>(s.weight);
        num += w * static_cast<double>(s.observed.size()) / static_cast<double>(s.enabled);
        den += w;
    }
    return den == 0 ? 1.0 : num / den;
}

// ---------------------------------------------------------------------------

FootprintMatrix footprint(const PetriNet& net, const std::vector<Activity>& labels) {
    const auto n = labels.size();
    std::map<Activity, std::size_t> index;
    for (std::size_t i = 0; i < n; ++i) index.emplace(labels[i], i);

    std::vector<std::set<std::size_t>> into(net.places().size()), out_of(net.places().size());
    std::vector<bool> present(n, false);
    for (const auto& tr : net.transitions()) {
        if (!tr.label) continue;
        auto it = index.find(*tr.label);
        if (it == index.end()) continue;
        present[it->second] = true;
        for (auto p : tr.outputs) into[p].insert(it->second);
        for (auto p : tr.inputs) out_of[p].insert(it->second);
    }
    FootprintMatrix fm{labels, std::vector<int>(n * n, 0)};
    for (PlaceId p = 0; p < net.places().size(); ++p) {
        for (auto i : into[p]) {
            for (auto j : out_of[p]) fm.cells[i * n + j] = 1;
        }
    }
    for (std::size_t i = 0; i < n; ++i) {
        if (present[i]) continue;
        for (std::size_t j = 0; j < n; ++j) {
            fm.cells[i * n + j] = -1;
            fm.cells[j * n + i] = -1;
        }
    }
    return fm;
}

double matrix_distance(const FootprintMatrix& m, const FootprintMatrix& ref) {
    if (m.labels != ref.labels) throw LabelMismatch("footprint matrices use different label orders");
    double sum = 0;
    for (std::size_t i = 0; i < m.cells.size(); ++i) {
        const double d = m.cells[i] - ref.cells[i];
        sum += d * d;
    }
    return std::sqrt(sum);
}

}  // namespace sbar
