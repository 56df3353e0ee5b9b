#pragma once

#include "sbar/event.hpp"
#include "sbar/process_tree.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace sbar {

struct SimModel {
    ProcessTree tree;
    /// Maximum number of simultaneously active cases.
    std::size_t concurrency = 10;
};

/// Gradual drift: cases 1..switch_at follow `pre`, later cases follow `post`.
/// The interleaving bound is taken from `pre`.
struct DriftSpec {
    SimModel pre;
    SimModel post;
    std::size_t switch_at = 1;
};

/// Interleaves `num_cases` complete executions of the model's tree. Case ids
/// are "1".."num_cases"; event seq numbers count from 1. Deterministic in
/// (model, num_cases, seed).
std::vector<Event> simulate(const SimModel& model, std::size_t num_cases, std::uint64_t seed);

std::vector<Event> simulate_drift(const DriftSpec& spec, std::size_t num_cases, std::uint64_t seed);

/// Bounded language of the model (loops unrolled to `bound` body executions).
std::set<Trace> language(const SimModel& model, std::size_t bound);

/// The bundled 15-activity loan-application model and its drifted variant
/// (the and/xor blocks swapped).
ProcessTree loan_model();
ProcessTree loan_model_drifted();

}  // namespace sbar
