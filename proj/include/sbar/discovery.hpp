#pragma once

#include "sbar/abstractions.hpp"
#include "sbar/petri_net.hpp"
#include "sbar/process_tree.hpp"

#include <map>
#include <ostream>
#include <set>
#include <stdexcept>

namespace sbar {

/// Raised when a back-end cannot build a model from its input.
class DiscoveryError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// One marked place; one self-looping transition per activity.
PetriNet flower_discover(const std::set<Activity>& activities);

/// Largest alphabet the alpha back-end accepts.
inline constexpr std::size_t kAlphaMaxActivities = 64;

/// Classic alpha construction over the directly-follows relation and its
/// start/end activities. Throws DiscoveryError on empty starts or ends, or
/// an alphabet larger than kAlphaMaxActivities.
PetriNet alpha_discover(const DirectlyFollows& df);

struct DependencyGraph {
    std::map<Activity, std::uint64_t> nodes;
    std::map<ActivityPair, double> edges;
};

/// a => b = (|a>b| - |b>a|) / (|a>b| + |b>a| + 1) for a != b, and
/// |a>a| / (|a>a| + 1) for self-loops.
double dependency_value(const DirectlyFollows& df, const Activity& a, const Activity& b);

/// Keeps edges with a => b >= dep_threshold and |a>b| >= min_count.
DependencyGraph heuristics_dependency(const DirectlyFollows& df, double dep_threshold = 0.9,
                                      std::uint64_t min_count = 1);

/// Structural net of a dependency graph: a transition per node, a place per
/// edge, a source place feeding nodes without incoming edges and a sink place
/// fed by nodes without outgoing edges.
PetriNet dependency_to_petri(const DependencyGraph& g);

struct InductiveOptions {
    /// Edges (a,b) with |a>b| < noise * max_x |a>x| are dropped before cut
    /// detection. 0 disables the filter.
    double noise = 0.0;
};

/// Directly-follows based inductive discovery. Cuts are tried in the order
/// exclusive, sequence, parallel, loop; when none applies the sub-graph
/// becomes loop(tau, xor(activities)).
ProcessTree inductive_discover(const DirectlyFollows& df, InductiveOptions opts = {});

/// Compositional translation into a workflow net with one source and one
/// sink place; operators are glued with silent transitions.
PetriNet tree_to_petri(const ProcessTree& t);

/// Snapshot of the maintained transition system.
TransitionSystem ts_emit(const TsState& s);

/// State-machine net: a place per state, a labelled transition per edge.
/// The initial state is marked; the final marking is empty.
PetriNet ts_to_petri(const TransitionSystem& ts);

void write_dot(std::ostream& os, const DependencyGraph& g);

}  // namespace sbar
