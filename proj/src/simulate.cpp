#include "sbar/simulate.hpp"

#include <memory>
#include <random>
#include <stdexcept>

namespace sbar {

namespace {

// Remaining behaviour of a running case, advanced by derivatives.
struct Term;
using TermPtr = std::shared_ptr<const Term>;

struct Term {
    enum class Kind { done, leaf, seq, xor_, and_, star };
    Kind kind = Kind::done;
    std::optional<Activity> activity;
    std::vector<TermPtr> parts;  // star: {redo, body}
};

using Step = std::pair<Activity, TermPtr>;

const TermPtr& done() {
    static const TermPtr d = std::make_shared<Term>();
    return d;
}

TermPtr make(Term::Kind k, std::vector<TermPtr> parts) {
    auto t = std::make_shared<Term>();
    t->kind = k;
    t->parts = std::move(parts);
    return t;
}

TermPtr make_seq(std::vector<TermPtr> parts) {
    std::vector<TermPtr> kept;
    for (auto& p : parts) {
        if (p->kind != Term::Kind::done) kept.push_back(std::move(p));
    }
    if (kept.empty()) return done();
    if (kept.size() == 1) return kept.front();
    return make(Term::Kind::seq, std::move(kept));
}

TermPtr compile(const ProcessTree& t) {
    using K = ProcessTree::Kind;
    std::vector<TermPtr> kids;
    for (const auto& c : t.children) kids.push_back(compile(c));
    switch (t.kind) {
    case K::leaf: {
        auto leaf = std::make_shared<Term>();
        leaf->kind = Term::Kind::leaf;
        leaf->activity = t.activity;
        return leaf;
    }
    case K::silent: return done();
    case K::seq: return make_seq(std::move(kids));
    case K::xor_: return make(Term::Kind::xor_, std::move(kids));
    case K::and_: return make(Term::Kind::and_, std::move(kids));
    case K::loop: {
        auto body = kids.front();
        std::vector<TermPtr> redos(kids.begin() + 1, kids.end());
        auto star = make(Term::Kind::star, {make(Term::Kind::xor_, std::move(redos)), body});
        return make_seq({body, star});
    }
    }
    return done();
}

bool nullable(const TermPtr& t) {
    switch (t->kind) {
    case Term::Kind::done:
    case Term::Kind::star: return true;
    case Term::Kind::leaf: return false;
    case Term::Kind::xor_:
        for (const auto& p : t->parts) {
            if (nullable(p)) return true;
        }
        return false;
    case Term::Kind::seq:
    case Term::Kind::and_:
        for (const auto& p : t->parts) {
            if (!nullable(p)) return false;
        }
        return true;
    }
    return true;
}

std::vector<Step> steps(const TermPtr& t);

std::vector<Step> seq_steps(const std::vector<TermPtr>& parts, std::size_t from) {
    std::vector<Step> out;
    for (std::size_t i = from; i < parts.size(); ++i) {
        for (auto& [a, next] : steps(parts[i])) {
            std::vector<TermPtr> rest{next};
            rest.insert(rest.end(), parts.begin() + static_cast<std::ptrdiff_t>(i) + 1, parts.end());
            out.emplace_back(a, make_seq(std::move(rest)));
        }
        if (!nullable(parts[i])) break;
    }
    return out;
}

std::vector<Step> steps(const TermPtr& t) {
    switch (t->kind) {
    case Term::Kind::done: return {};
    case Term::Kind::leaf: return {Step{*t->activity, done()}};
    case Term::Kind::seq: return seq_steps(t->parts, 0);
    case Term::Kind::xor_: {
        std::vector<Step> out;
        for (const auto& p : t->parts) {
            auto s = steps(p);
            out.insert(out.end(), s.begin(), s.end());
        }
        return out;
    }
    case Term::Kind::and_: {
        std::vector<Step> out;
        for (std::size_t i = 0; i < t->parts.size(); ++i) {
            for (auto& [a, next] : steps(t->parts[i])) {
                auto parts = t->parts;
                parts[i] = next;
                out.emplace_back(a, make(Term::Kind::and_, std::move(parts)));
            }
        }
        return out;
    }
    case Term::Kind::star: {
        // star = eps + (redo body) star; stepping through a nullable
        // (redo body) would only reach star again.
        std::vector<Step> out;
        for (auto& [a, next] : seq_steps({t->parts[0], t->parts[1]}, 0)) {
            out.emplace_back(a, make_seq({next, t}));
        }
        return out;
    }
    }
    return {};
}

struct RunningCase {
    CaseId id;
    TermPtr term;
    std::vector<Step> options;
    bool may_finish;
};

RunningCase start_case(std::size_t number, const TermPtr& root) {
    auto opts = steps(root);
    return RunningCase{CaseId(std::to_string(number)), root, std::move(opts), nullable(root)};
}

std::vector<Event> run(const std::vector<TermPtr>& roots, std::size_t switch_at, std::size_t concurrency,
                       std::size_t num_cases, std::uint64_t seed) {
    if (num_cases == 0) throw std::invalid_argument("num_cases must be >= 1");
    if (concurrency == 0) throw std::invalid_argument("concurrency must be >= 1");
    std::mt19937_64 rng(seed);
    std::vector<Event> out;
    std::vector<RunningCase> active;
    std::size_t next_case = 1;

    while (true) {
        while (active.size() < concurrency && next_case <= num_cases) {
            const auto& root = (next_case <= switch_at || roots.size() == 1) ? roots[0] : roots[1];
            auto c = start_case(next_case++, root);
            if (!c.options.empty()) active.push_back(std::move(c));
        }
        if (active.empty()) break;

        std::size_t total = 0;
        for (const auto& c : active) total += c.options.size() + (c.may_finish ? 1 : 0);
        std::uniform_int_distribution<std::size_t> pick(0, total - 1);
        std::size_t r = pick(rng);

        std::size_t idx = 0;
        for (; idx < active.size(); ++idx) {
            const auto n = active[idx].options.size() + (active[idx].may_finish ? 1 : 0);
            if (r < n) break;
            r -= n;
        }
        auto& c = active[idx];
        if (r == c.options.size()) {
            active.erase(active.begin() + static_cast<std::ptrdiff_t>(idx));
            continue;
        }
        auto [activity, next] = c.options[r];
        out.push_back(Event{c.id, activity, out.size() + 1});
        c.term = next;
        c.options = steps(next);
        c.may_finish = nullable(next);
        if (c.options.empty()) active.erase(active.begin() + static_cast<std::ptrdiff_t>(idx));
    }
    return out;
}

}  // namespace

std::vector<Event> simulate(const SimModel& model, std::size_t num_cases, std::uint64_t seed) {
    model.tree.validate();
    return run({compile(model.tree)}, num_cases, model.concurrency, num_cases, seed);
}

std::vector<Event> simulate_drift(const DriftSpec& spec, std::size_t num_cases, std::uint64_t seed) {
    if (spec.switch_at < 1) throw std::invalid_argument("switch-at-case must be >= 1");
    if (num_cases <= spec.switch_at) throw std::invalid_argument("num_cases must exceed the drift point");
    spec.pre.tree.validate();
    spec.post.tree.validate();
    return run({compile(spec.pre.tree), compile(spec.post.tree)}, spec.switch_at, spec.pre.concurrency, num_cases,
               seed);
}

std::set<Trace> language(const SimModel& model, std::size_t bound) {
    if (bound == 0) throw std::invalid_argument("bound must be >= 1");
    return tree_language(model.tree, bound);
}

ProcessTree loan_model() {
    return parse_tree(R"((seq start
      (loop check_completeness (seq return_application receive_update))
      (and (seq check_credit assess_risk) appraise_property)
      assess_eligibility
      (xor reject
           (seq (and prepare_pack send_quote) verify_repayment (xor approve cancel)))
      end))");
}

ProcessTree loan_model_drifted() {
    return parse_tree(R"((seq start
      (loop check_completeness (seq return_application receive_update))
      (xor (seq check_credit assess_risk) appraise_property)
      assess_eligibility
      (xor reject
           (seq (and prepare_pack send_quote) verify_repayment (and approve cancel)))
      end))");
}

}  // namespace sbar
