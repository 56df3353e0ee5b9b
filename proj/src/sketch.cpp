#include "sbar/sketch.hpp"

namespace sbar {

Policy parse_policy(std::string_view name) {
    if (name == "lossy" || name == "lossy_counting") return Policy::lossy_counting;
    if (name == "spacesaving" || name == "space_saving") return Policy::space_saving;
    if (name == "frequent" || name == "misra_gries") return Policy::frequent;
    throw std::invalid_argument("unknown sketch policy '" + std::string(name) + "'");
}

std::string_view to_string(Policy p) {
    switch (p) {
    case Policy::space_saving: return "spacesaving";
    case Policy::lossy_counting: return "lossy";
    case Policy::frequent: return "frequent";
    }
    return "?";
}

}  // namespace sbar
