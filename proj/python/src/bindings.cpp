#include "sbar/abstractions.hpp"
#include "sbar/discovery.hpp"
#include "sbar/evaluation.hpp"
#include "sbar/experiment.hpp"
#include "sbar/petri_net.hpp"
#include "sbar/process_tree.hpp"
#include "sbar/simulate.hpp"

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

namespace py = pybind11;
using namespace sbar;

namespace {

using PyTrace = std::vector<std::string>;

Trace to_trace(const PyTrace& t) {
    Trace out;
    out.reserve(t.size());
    for (const auto& a : t) out.emplace_back(a);
    return out;
}

PyTrace from_trace(const Trace& t) {
    PyTrace out;
    for (const auto& a : t) out.push_back(a.str());
    return out;
}

EventLog to_event_log(const std::vector<PyTrace>& traces) {
    EventLog log;
    for (const auto& t : traces) ++log[to_trace(t)];
    return log;
}

std::vector<Event> to_events(const std::vector<std::pair<std::string, std::string>>& events) {
    std::vector<Event> out;
    out.reserve(events.size());
    for (const auto& [c, a] : events) out.push_back(Event{CaseId(c), Activity(a), std::nullopt});
    return out;
}

template <class F>
std::string render(F&& f) {
    std::ostringstream os;
    f(os);
    return os.str();
}

ProcessTree tree_from(const std::string& spec) {
    if (spec == "loan") return loan_model();
    if (spec == "loan_drift") return loan_model_drifted();
    return parse_tree(spec);
}

MinerConfig miner_config(const std::string& miner, std::size_t dc, std::size_t da, std::size_t activities,
                         const std::string& policy, bool eager, const std::string& view, std::size_t horizon,
                         double dep_threshold, std::uint64_t min_count, double noise) {
    MinerConfig m;
    m.kind = parse_miner(miner);
    const auto p = parse_policy(policy);
    m.df.cases = SketchConfig{p, dc, eager};
    m.df.pairs = SketchConfig{p, da, eager};
    m.df.activities = SketchConfig{p, activities, eager};
    m.view.kind = parse_view(view);
    if (horizon > 0) m.view.horizon = horizon;
    m.dep_threshold = dep_threshold;
    m.min_count = min_count;
    m.noise = noise;
    return m;
}

// Keyword arguments shared by StreamingMiner and evaluate().
#define SBAR_MINER_ARGS                                                                                           \
    py::arg("miner") = "inductive", py::arg("dc") = 75, py::arg("da") = 75, py::arg("activities") = 1000,        \
    py::arg("policy") = "lossy", py::arg("eager") = true, py::arg("view") = "multiset", py::arg("horizon") = 0,   \
    py::arg("dep_threshold") = 0.9, py::arg("min_count") = 1, py::arg("noise") = 0.0

}  // namespace

PYBIND11_MODULE(_sbar, m) {
    m.doc() = "Streaming process discovery with bounded memory";

    py::register_exception<ParseError>(m, "ParseError", PyExc_ValueError);
    py::register_exception<TreeSyntaxError>(m, "TreeSyntaxError", PyExc_ValueError);
    py::register_exception<DiscoveryError>(m, "DiscoveryError", PyExc_RuntimeError);
    py::register_exception<LabelMismatch>(m, "LabelMismatch", PyExc_ValueError);

    py::class_<PetriNet>(m, "PetriNet")
        .def_property_readonly("places", [](const PetriNet& n) { return n.places(); })
        .def_property_readonly("transitions",
                               [](const PetriNet& n) {
                                   std::vector<std::pair<std::string, std::optional<std::string>>> out;
                                   for (const auto& t : n.transitions()) {
                                       out.emplace_back(t.name, t.label ? std::optional(t.label->str()) : std::nullopt);
                                   }
                                   return out;
                               })
        .def_property_readonly("arc_count", &PetriNet::arc_count)
        .def("to_dot", [](const PetriNet& n) { return render([&](std::ostream& os) { write_dot(os, n); }); })
        .def("to_pnml", [](const PetriNet& n) { return render([&](std::ostream& os) { write_pnml(os, n); }); })
        .def_static("from_pnml",
                    [](const std::string& text) {
                        std::istringstream in(text);
                        return read_pnml(in);
                    })
        .def(
            "replay",
            [](const PetriNet& n, const PyTrace& t) {
                const auto r = replay_trace(n, to_trace(t));
                py::dict d;
                d["produced"] = r.produced;
                d["consumed"] = r.consumed;
                d["missing"] = r.missing;
                d["remaining"] = r.remaining;
                d["fitness"] = r.fitness();
                return d;
            },
            py::arg("trace"))
        .def(
            "fitness", [](const PetriNet& n, const std::vector<PyTrace>& log) { return replay_fitness(n, to_event_log(log)); },
            py::arg("log"))
        .def(
            "precision",
            [](const PetriNet& n, const std::vector<PyTrace>& log) { return precision_escaping(n, to_event_log(log)); },
            py::arg("log"));

    py::class_<ProcessTree>(m, "ProcessTree")
        .def(py::init([](const std::string& text) { return parse_tree(text); }), py::arg("text"))
        .def("__str__", [](const ProcessTree& t) { return to_sexpr(t); })
        .def("__repr__", [](const ProcessTree& t) { return "ProcessTree('" + to_sexpr(t) + "')"; })
        .def("__eq__", [](const ProcessTree& a, const ProcessTree& b) { return a == b; })
        .def(
            "language",
            [](const ProcessTree& t, std::size_t bound) {
                std::vector<PyTrace> out;
                for (const auto& tr : tree_language(t, bound)) out.push_back(from_trace(tr));
                return out;
            },
            py::arg("bound") = 2)
        .def("to_petri", &tree_to_petri);

    py::class_<DirectlyFollows>(m, "DirectlyFollows")
        .def_property_readonly("pairs",
                               [](const DirectlyFollows& d) {
                                   std::map<std::pair<std::string, std::string>, std::uint64_t> out;
                                   for (const auto& [p, n] : d.pairs) out[{p.first.str(), p.second.str()}] = n;
                                   return out;
                               })
        .def_property_readonly("activities",
                               [](const DirectlyFollows& d) {
                                   std::map<std::string, std::uint64_t> out;
                                   for (const auto& [a, n] : d.activities) out[a.str()] = n;
                                   return out;
                               })
        .def_property_readonly("starts",
                               [](const DirectlyFollows& d) {
                                   std::set<std::string> out;
                                   for (const auto& a : d.starts) out.insert(a.str());
                                   return out;
                               })
        .def_property_readonly("ends", [](const DirectlyFollows& d) {
            std::set<std::string> out;
            for (const auto& a : d.ends) out.insert(a.str());
            return out;
        });

    m.def(
        "directly_follows", [](const std::vector<PyTrace>& log) { return directly_follows(to_event_log(log)); },
        py::arg("log"), "Batch directly-follows abstraction of a list of traces.");
    m.def(
        "inductive", [](const DirectlyFollows& df, double noise) { return inductive_discover(df, InductiveOptions{noise}); },
        py::arg("df"), py::arg("noise") = 0.0);
    m.def("alpha", &alpha_discover, py::arg("df"));
    m.def(
        "heuristics",
        [](const DirectlyFollows& df, double threshold, std::uint64_t min_count) {
            return dependency_to_petri(heuristics_dependency(df, threshold, min_count));
        },
        py::arg("df"), py::arg("threshold") = 0.9, py::arg("min_count") = 1);
    m.def(
        "flower",
        [](const std::vector<std::string>& acts) {
            std::set<Activity> s;
            for (const auto& a : acts) s.emplace(a);
            return flower_discover(s);
        },
        py::arg("activities"));

    m.def(
        "simulate",
        [](const std::string& model, std::size_t cases, std::uint64_t seed, std::size_t concurrency,
           const std::string& post_model, std::size_t drift_at) {
            const SimModel pre{tree_from(model), concurrency};
            const auto events = drift_at > 0
                                    ? simulate_drift(DriftSpec{pre, SimModel{tree_from(post_model), concurrency}, drift_at},
                                                     cases, seed)
                                    : simulate(pre, cases, seed);
            std::vector<std::pair<std::string, std::string>> out;
            out.reserve(events.size());
            for (const auto& e : events) out.emplace_back(e.case_id.str(), e.activity.str());
            return out;
        },
        py::arg("model"), py::arg("cases"), py::arg("seed") = 0, py::arg("concurrency") = 10,
        py::arg("post_model") = "", py::arg("drift_at") = 0,
        "Simulated (case, activity) events. `model` is tree text, 'loan' or 'loan_drift'.");

    m.def(
        "footprint_distance",
        [](const PetriNet& net, const PetriNet& ref, const std::vector<std::string>& labels) {
            std::vector<Activity> ls(labels.begin(), labels.end());
            return matrix_distance(footprint(net, ls), footprint(ref, ls));
        },
        py::arg("net"), py::arg("reference"), py::arg("labels"));

    py::class_<StreamingMiner>(m, "StreamingMiner")
        .def(py::init([](const std::string& miner, std::size_t dc, std::size_t da, std::size_t activities,
                         const std::string& policy, bool eager, const std::string& view, std::size_t horizon,
                         double dep_threshold, std::uint64_t min_count, double noise) {
                 return StreamingMiner(miner_config(miner, dc, da, activities, policy, eager, view, horizon,
                                                    dep_threshold, min_count, noise));
             }),
             SBAR_MINER_ARGS)
        .def(
            "update",
            [](StreamingMiner& s, const std::string& c, const std::string& a) {
                s.update(Event{CaseId(c), Activity(a), std::nullopt});
            },
            py::arg("case"), py::arg("activity"))
        .def(
            "feed",
            [](StreamingMiner& s, const std::vector<std::pair<std::string, std::string>>& events) {
                for (const auto& e : to_events(events)) s.update(e);
            },
            py::arg("events"))
        .def("discover", [](const StreamingMiner& s) { return s.discover().net; })
        .def("tree",
             [](const StreamingMiner& s) {
                 auto d = s.discover();
                 return d.tree;
             })
        .def("directly_follows",
             [](const StreamingMiner& s) {
                 if (!s.df()) throw std::invalid_argument("ts miner keeps no directly-follows state");
                 return s.df()->extract();
             })
        .def_property_readonly("entry_count", &StreamingMiner::entry_count)
        .def_property_readonly("within_budget", &StreamingMiner::within_budget);

    m.def(
        "evaluate",
        [](const std::vector<std::pair<std::string, std::string>>& events, const std::vector<PyTrace>& reference_log,
           std::optional<PetriNet> reference_net, std::size_t every, const std::string& miner, std::size_t dc,
           std::size_t da, std::size_t activities, const std::string& policy, bool eager, const std::string& view,
           std::size_t horizon, double dep_threshold, std::uint64_t min_count, double noise) {
            ExperimentSetup setup;
            setup.miner =
                miner_config(miner, dc, da, activities, policy, eager, view, horizon, dep_threshold, min_count, noise);
            setup.every = every;
            setup.logs.push_back({"reference", to_event_log(reference_log)});
            if (reference_net) {
                setup.reference_net = std::move(*reference_net);
            } else {
                setup.reference_net = discover_batch(setup.miner, setup.logs.front().log).net;
            }
            VectorSource src(to_events(events));
            src.close();
            const auto series = run_convergence_experiment(src, setup);
            py::dict out;
            std::vector<std::uint64_t> ev;
            std::vector<double> fit, prec, dist;
            for (const auto& r : series.records) {
                ev.push_back(r.event);
                fit.push_back(r.fitness);
                prec.push_back(r.precision);
                dist.push_back(r.distance);
            }
            const auto s = summarize(series);
            out["event"] = ev;
            out["fitness"] = fit;
            out["precision"] = prec;
            out["distance"] = dist;
            out["stabilized"] = s.stabilized;
            out["summary"] = format_summary(s);
            return out;
        },
        py::arg("events"), py::arg("reference_log"), py::arg("reference_net") = py::none(), py::arg("every") = 100,
        SBAR_MINER_ARGS,
        "Replays `events`, sampling fitness, precision and footprint distance every `every` events. Without a "
        "reference net the batch model of the reference log is used.");
}
