#pragma once

#include "sbar/event.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

namespace sbar {

using PlaceId = std::size_t;
using TransitionId = std::size_t;

/// Marking as a sparse multiset over places; zero entries are never stored.
using Marking = std::map<PlaceId, std::uint32_t>;

/// Labeled place/transition net with unit arc weights. Transitions without a
/// label are silent.
class PetriNet {
public:
    struct Transition {
        std::string name;
        std::optional<Activity> label;
        std::vector<PlaceId> inputs;
        std::vector<PlaceId> outputs;
    };

    PlaceId add_place(std::string name);
    TransitionId add_transition(std::string name, std::optional<Activity> label);
    /// Arc p -> t.
    void add_input(TransitionId t, PlaceId p);
    /// Arc t -> p.
    void add_output(TransitionId t, PlaceId p);

    const std::vector<std::string>& places() const noexcept { return places_; }
    const std::vector<Transition>& transitions() const noexcept { return transitions_; }
    std::size_t arc_count() const;

    Marking initial;
    Marking final;

    bool enabled(const Marking& m, TransitionId t) const;
    /// Fires `t`, which must be enabled.
    Marking fire(const Marking& m, TransitionId t) const;

    /// Transitions whose label equals `a`.
    std::vector<TransitionId> transitions_for(const Activity& a) const;

private:
    std::vector<std::string> places_;
    std::vector<Transition> transitions_;
};

std::size_t token_count(const Marking& m);
/// m >= sub componentwise.
bool covers(const Marking& m, const Marking& sub);

void write_dot(std::ostream& os, const PetriNet& net, const std::string& name = "net");
/// PNML, Place/Transition net type, single page, with initial marking; the
/// final marking is recorded as a tool-specific element.
void write_pnml(std::ostream& os, const PetriNet& net, const std::string& id = "net");

/// Reads the subset written by write_pnml: places, transitions (a transition
/// is silent when marked invisible by a tool-specific element), arcs, the
/// initial marking and optional final markings. Throws std::runtime_error on
/// malformed input.
PetriNet read_pnml(std::istream& in);
PetriNet load_pnml(const std::string& path);

}  // namespace sbar
