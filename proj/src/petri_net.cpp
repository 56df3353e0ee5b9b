#include "sbar/petri_net.hpp"

#include <boost/property_tree/ptree.hpp>
#include <boost/property_tree/xml_parser.hpp>

#include <fstream>
#include <map>
#include <stdexcept>

namespace sbar {

namespace {

std::string xml_escape(const std::string& s) {
    std::string out;
    for (char c : s) {
        switch (c) {
        case '&': out += "&amp;"; break;
        case '<': out += "&lt;"; break;
        case '>': out += "&gt;"; break;
        case '"': out += "&quot;"; break;
        default: out += c;
        }
    }
    return out;
}

std::string dot_escape(const std::string& s) {
    std::string out;
    for (char c : s) {
        if (c == '"' || c == '\\') out += '\\';
        out += c;
    }
    return out;
}

}  // namespace

PlaceId PetriNet::add_place(std::string name) {
    places_.push_back(std::move(name));
    return places_.size() - 1;
}

TransitionId PetriNet::add_transition(std::string name, std::optional<Activity> label) {
    transitions_.push_back(Transition{std::move(name), std::move(label), {}, {}});
    return transitions_.size() - 1;
}

void PetriNet::add_input(TransitionId t, PlaceId p) {
    if (t >= transitions_.size() || p >= places_.size()) throw std::out_of_range("arc endpoint");
    transitions_[t].inputs.push_back(p);
}

void PetriNet::add_output(TransitionId t, PlaceId p) {
    if (t >= transitions_.size() || p >= places_.size()) throw std::out_of_range("arc endpoint");
    transitions_[t].outputs.push_back(p);
}

std::size_t PetriNet::arc_count() const {
    std::size_t n = 0;
    for (const auto& t : transitions_) n += t.inputs.size() + t.outputs.size();
    return n;
}

bool PetriNet::enabled(const Marking& m, TransitionId t) const {
    // Inputs may repeat a place; count demand per place.
    const auto& in = transitions_[t].inputs;
    for (std::size_t i = 0; i < in.size(); ++i) {
        std::uint32_t need = 0;
        for (auto p : in) need += (p == in[i]);
        auto it = m.find(in[i]);
        if (it == m.end() || it->second < need) return false;
    }
    return true;
}

Marking PetriNet::fire(const Marking& m, TransitionId t) const {
    Marking next = m;
    for (auto p : transitions_[t].inputs) {
        auto it = next.find(p);
        if (it == next.end() || it->second == 0) throw std::logic_error("firing a disabled transition");
        if (--it->second == 0) next.erase(it);
    }
    for (auto p : transitions_[t].outputs) ++next[p];
    return next;
}

std::vector<TransitionId> PetriNet::transitions_for(const Activity& a) const {
    std::vector<TransitionId> out;
    for (TransitionId t = 0; t < transitions_.size(); ++t) {
        if (transitions_[t].label == a) out.push_back(t);
    }
    return out;
}

std::size_t token_count(const Marking& m) {
    std::size_t n = 0;
    for (const auto& [p, k] : m) n += k;
    return n;
}

bool covers(const Marking& m, const Marking& sub) {
    for (const auto& [p, k] : sub) {
        auto it = m.find(p);
        if (it == m.end() || it->second < k) return false;
    }
    return true;
}

void write_dot(std::ostream& os, const PetriNet& net, const std::string& name) {
    os << "digraph \"" << dot_escape(name) << "\" {\n  rankdir=LR;\n";
    for (PlaceId p = 0; p < net.places().size(); ++p) {
        os << "  p" << p << " [shape=circle,label=\"";
        if (auto it = net.initial.find(p); it != net.initial.end()) os << std::string(it->second, '*');
        os << "\",xlabel=\"" << dot_escape(net.places()[p]) << "\"";
        if (net.final.count(p)) os << ",peripheries=2";
        os << "];\n";
    }
    for (TransitionId t = 0; t < net.transitions().size(); ++t) {
        const auto& tr = net.transitions()[t];
        os << "  t" << t << " [shape=box,";
        if (tr.label) {
            os << "label=\"" << dot_escape(tr.label->str()) << "\"";
        } else {
            os << "label=\"\",style=filled,fillcolor=black,width=0.15";
        }
        os << "];\n";
    }
    for (TransitionId t = 0; t < net.transitions().size(); ++t) {
        for (auto p : net.transitions()[t].inputs) os << "  p" << p << " -> t" << t << ";\n";
        for (auto p : net.transitions()[t].outputs) os << "  t" << t << " -> p" << p << ";\n";
    }
    os << "}\n";
}

void write_pnml(std::ostream& os, const PetriNet& net, const std::string& id) {
    os << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    os << "<pnml>\n  <net id=\"" << xml_escape(id)
       << "\" type=\"http://www.pnml.org/version-2009/grammar/ptnet\">\n";
    os << "    <page id=\"page0\">\n";
    for (PlaceId p = 0; p < net.places().size(); ++p) {
        os << "      <place id=\"p" << p << "\">\n        <name><text>" << xml_escape(net.places()[p])
           << "</text></name>\n";
        if (auto it = net.initial.find(p); it != net.initial.end()) {
            os << "        <initialMarking><text>" << it->second << "</text></initialMarking>\n";
        }
        os << "      </place>\n";
    }
    for (TransitionId t = 0; t < net.transitions().size(); ++t) {
        const auto& tr = net.transitions()[t];
        os << "      <transition id=\"t" << t << "\">\n        <name><text>"
           << xml_escape(tr.label ? tr.label->str() : tr.name) << "</text></name>\n";
        if (!tr.label) {
            os << "        <toolspecific tool=\"sbar\" version=\"1\" activity=\"$invisible$\"/>\n";
        }
        os << "      </transition>\n";
    }
    std::size_t arc = 0;
    for (TransitionId t = 0; t < net.transitions().size(); ++t) {
        for (auto p : net.transitions()[t].inputs) {
            os << "      <arc id=\"a" << arc++ << "\" source=\"p" << p << "\" target=\"t" << t << "\"/>\n";
        }
        for (auto p : net.transitions()[t].outputs) {
            os << "      <arc id=\"a" << arc++ << "\" source=\"t" << t << "\" target=\"p" << p << "\"/>\n";
        }
    }
    os << "    </page>\n    <finalmarkings>\n      <marking>\n";
    for (const auto& [p, k] : net.final) {
        os << "        <place idref=\"p" << p << "\"><text>" << k << "</text></place>\n";
    }
    os << "      </marking>\n    </finalmarkings>\n  </net>\n</pnml>\n";
}

PetriNet read_pnml(std::istream& in) {
    namespace pt = boost::property_tree;
    pt::ptree doc;
    try {
        pt::read_xml(in, doc);
    } catch (const pt::xml_parser_error& e) {
        throw std::runtime_error(std::string("PNML: ") + e.what());
    }
    const auto net_node = doc.get_child_optional("pnml.net");
    if (!net_node) throw std::runtime_error("PNML: missing <pnml><net>");

    PetriNet net;
    std::map<std::string, PlaceId> places;
    std::map<std::string, TransitionId> transitions;
    std::vector<const pt::ptree*> arcs;
    auto text_of = [](const pt::ptree& node, const char* path) {
        return node.template get<std::string>(std::string(path) + ".text", "");
    };

    auto visit = [&](const pt::ptree& container, auto&& self) -> void {
        for (const auto& [tag, node] : container) {
            if (tag == "page") {
                self(node, self);
            } else if (tag == "place") {
                const auto id = node.template get<std::string>("<xmlattr>.id");
                const auto name = text_of(node, "name");
                const auto p = net.add_place(name.empty() ? id : name);
                places[id] = p;
                if (auto m = node.template get_optional<std::uint32_t>("initialMarking.text"); m && *m > 0) net.initial[p] = *m;
            } else if (tag == "transition") {
                const auto id = node.template get<std::string>("<xmlattr>.id");
                const auto name = text_of(node, "name");
                bool silent = false;
                for (const auto& [ctag, child] : node) {
                    if (ctag == "toolspecific" && child.template get<std::string>("<xmlattr>.activity", "") == "$invisible$") {
                        silent = true;
                    }
                }
                std::optional<Activity> label;
                if (!silent && !name.empty()) label = Activity(name);
                transitions[id] = net.add_transition(name.empty() ? id : name, label);
            } else if (tag == "arc") {
                arcs.push_back(&node);
            }
        }
    };
    visit(*net_node, visit);

    for (const auto* arc : arcs) {
        const auto src = arc->get<std::string>("<xmlattr>.source");
        const auto dst = arc->get<std::string>("<xmlattr>.target");
        if (places.count(src) && transitions.count(dst)) {
            net.add_input(transitions.at(dst), places.at(src));
        } else if (transitions.count(src) && places.count(dst)) {
            net.add_output(transitions.at(src), places.at(dst));
        } else {
            throw std::runtime_error("PNML: arc " + src + " -> " + dst + " does not join a place and a transition");
        }
    }
    if (auto finals = net_node->get_child_optional("finalmarkings.marking")) {
        for (const auto& [tag, node] : *finals) {
            if (tag != "place") continue;
            const auto ref = node.get<std::string>("<xmlattr>.idref");
            if (!places.count(ref)) throw std::runtime_error("PNML: final marking names unknown place " + ref);
            if (const auto k = node.get<std::uint32_t>("text", 0); k > 0) net.final[places.at(ref)] = k;
        }
    }
    return net;
}

PetriNet load_pnml(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open '" + path + "'");
    return read_pnml(in);
}

}  // namespace sbar
