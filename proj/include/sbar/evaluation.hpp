#pragma once

#include "sbar/event.hpp"
#include "sbar/petri_net.hpp"

#include <cstdint>
#include <optional>
#include <set>
#include <stdexcept>
#include <vector>

namespace sbar {

// ---------------------------------------------------------------------------
// Token replay

/// Per-trace token counts. The initial marking counts as produced and the
/// final marking as consumed.
struct ReplayCounts {
    std::uint64_t produced = 0;
    std::uint64_t consumed = 0;
    std::uint64_t missing = 0;
    std::uint64_t remaining = 0;

    bool fits() const { return missing == 0 && remaining == 0; }
    /// 1/2 (1 - m/c) + 1/2 (1 - r/p).
    double fitness() const;
};

/// Silent moves are searched breadth-first, at most 2 |T| deep and over at
/// most kSilentSearchCap markings. An activity with no transition in the net
/// counts as one missing and one consumed token.
inline constexpr std::size_t kSilentSearchCap = 10000;

ReplayCounts replay_trace(const PetriNet& net, const Trace& trace);

/// Frequency-weighted mean of trace fitness; 1 for an empty log.
double replay_fitness(const PetriNet& net, const EventLog& log);

/// Escaping-edges precision. Each distinct prefix reached by fitting replay
/// is a state weighted by the number of traces through it; the state scores
/// |activities observed next| / |visible activities enabled|, silent closure
/// included. Trace ends are not states, and a non-fitting suffix contributes
/// nothing. 1 when no state exists.
double precision_escaping(const PetriNet& net, const EventLog& log);

/// Visible labels enabled at `m` or after silent moves from `m`.
std::set<Activity> enabled_activities(const PetriNet& net, const Marking& m);

// ---------------------------------------------------------------------------
// Footprint

struct FootprintMatrix {
    std::vector<Activity> labels;
    /// Row-major, labels.size() squared cells in {-1, 0, 1}.
    std::vector<int> cells;

    int at(std::size_t i, std::size_t j) const { return cells[i * labels.size() + j]; }
    friend bool operator==(const FootprintMatrix&, const FootprintMatrix&) = default;
};

class LabelMismatch : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// cell(i,j) = 1 iff a place has an input from a transition labelled
/// labels[i] and an output to one labelled labels[j]; rows and columns of
/// labels absent from the net are -1.
FootprintMatrix footprint(const PetriNet& net, const std::vector<Activity>& labels);

/// Euclidean distance over all cells. Throws LabelMismatch when the label
/// orders differ.
double matrix_distance(const FootprintMatrix& m, const FootprintMatrix& ref);

}  // namespace sbar
