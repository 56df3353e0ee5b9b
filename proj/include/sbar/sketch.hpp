#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

namespace sbar {

enum class Policy { space_saving, lossy_counting, frequent };

Policy parse_policy(std::string_view name);
std::string_view to_string(Policy p);

/// Budget and eviction policy for one sketch. `eager` only affects Lossy
/// Counting: when set, |X| never exceeds the budget, even between bucket
/// boundaries.
struct SketchConfig {
    Policy policy = Policy::lossy_counting;
    std::size_t budget = 100;
    bool eager = true;

    static constexpr std::size_t unbounded_budget = std::numeric_limits<std::size_t>::max();
    static SketchConfig unbounded(Policy p = Policy::lossy_counting) { return {p, unbounded_budget, false}; }
};

/// Bounded counted associative collection X : K -> v with one of three
/// heavy-hitter update rules (Space Saving, Lossy Counting, Frequent).
///
/// Counters are unbounded. Ties on the minimum counter (Space Saving, and the
/// eager Lossy overflow) go to the least-recently-updated entry.
///
/// Lossy Counting admits new keys with v = Delta + 1 and runs the bucket
/// cleanup (remove v <= Delta, then Delta = floor(i/k)) whenever floor(i/k)
/// advances. Without `eager`, |X| is not bounded by k; with `eager`, an insert
/// into a full sketch first evicts the minimum entry.
template <class K, class Hash = std::hash<K>>
class BudgetSketch {
public:
    explicit BudgetSketch(SketchConfig cfg) : cfg_(cfg) {
        if (cfg_.budget == 0) throw std::invalid_argument("sketch budget must be >= 1");
    }
    BudgetSketch(Policy p, std::size_t budget, bool eager = false) : BudgetSketch(SketchConfig{p, budget, eager}) {}

    /// Observes `key`; returns the keys evicted by this observation, sorted.
    std::vector<K> insert(const K& key) {
        ++seen_;
        ++tick_;
        std::vector<K> evicted;
        if (auto it = slots_.find(key); it != slots_.end()) {
            ++it->second.count;
            it->second.touched = tick_;
        } else {
            switch (cfg_.policy) {
            case Policy::space_saving: admit_space_saving(key, evicted); break;
            case Policy::lossy_counting: admit_lossy(key, evicted); break;
            case Policy::frequent: admit_frequent(key, evicted); break;
            }
        }
        if (cfg_.policy == Policy::lossy_counting) bucket_cleanup(evicted);
        std::sort(evicted.begin(), evicted.end());
        return evicted;
    }

    std::optional<std::uint64_t> get(const K& key) const {
        auto it = slots_.find(key);
        if (it == slots_.end()) return std::nullopt;
        return it->second.count;
    }
    bool contains(const K& key) const { return slots_.count(key) != 0; }

    /// Snapshot of resident entries, sorted by key.
    std::vector<std::pair<K, std::uint64_t>> entries() const {
        std::vector<std::pair<K, std::uint64_t>> out;
        out.reserve(slots_.size());
        for (const auto& [k, s] : slots_) out.emplace_back(k, s.count);
        std::sort(out.begin(), out.end());
        return out;
    }

    /// Drops `key` without touching counters of other entries.
    bool erase(const K& key) { return slots_.erase(key) != 0; }

    std::size_t size() const noexcept { return slots_.size(); }
    bool empty() const noexcept { return slots_.empty(); }
    const SketchConfig& config() const noexcept { return cfg_; }
    std::size_t budget() const noexcept { return cfg_.budget; }
    Policy policy() const noexcept { return cfg_.policy; }
    /// Lossy Counting's Delta (0 for the other policies).
    std::uint64_t delta() const noexcept { return delta_; }
    /// Number of insert calls so far (i).
    std::uint64_t observed() const noexcept { return seen_; }
    /// Smallest resident counter, 0 when empty.
    std::uint64_t min_count() const {
        std::uint64_t m = 0;
        bool first = true;
        for (const auto& [k, s] : slots_) {
            if (first || s.count < m) m = s.count;
            first = false;
        }
        return m;
    }

private:
    struct Slot {
        std::uint64_t count;
        std::uint64_t touched;
    };

    bool full() const { return slots_.size() >= cfg_.budget; }

    typename std::unordered_map<K, Slot, Hash>::iterator min_slot() {
        auto best = slots_.begin();
        for (auto it = slots_.begin(); it != slots_.end(); ++it) {
            if (it->second.count < best->second.count ||
                (it->second.count == best->second.count && it->second.touched < best->second.touched)) {
                best = it;
            }
        }
        return best;
    }

    void admit_space_saving(const K& key, std::vector<K>& evicted) {
        if (!full()) {
            slots_.emplace(key, Slot{1, tick_});
            return;
        }
        auto victim = min_slot();
        const auto inherited = victim->second.count;
        evicted.push_back(victim->first);
        slots_.erase(victim);
        slots_.emplace(key, Slot{inherited + 1, tick_});
    }

    void admit_lossy(const K& key, std::vector<K>& evicted) {
        if (cfg_.eager && full()) {
            auto victim = min_slot();
            evicted.push_back(victim->first);
            slots_.erase(victim);
        }
        slots_.emplace(key, Slot{delta_ + 1, tick_});
    }

    void bucket_cleanup(std::vector<K>& evicted) {
        const std::uint64_t bucket = seen_ / cfg_.budget;
        if (bucket == delta_) return;
        for (auto it = slots_.begin(); it != slots_.end();) {
            if (it->second.count <= delta_) {
                evicted.push_back(it->first);
                it = slots_.erase(it);
            } else {
                ++it;
            }
        }
        delta_ = bucket;
    }

    void admit_frequent(const K& key, std::vector<K>& evicted) {
        if (!full()) {
            slots_.emplace(key, Slot{1, tick_});
            return;
        }
        for (auto it = slots_.begin(); it != slots_.end();) {
            if (--it->second.count == 0) {
                evicted.push_back(it->first);
                it = slots_.erase(it);
            } else {
                ++it;
            }
        }
    }

    SketchConfig cfg_;
    std::unordered_map<K, Slot, Hash> slots_;
    std::uint64_t seen_ = 0;
    std::uint64_t tick_ = 0;
    std::uint64_t delta_ = 0;
};

}  // namespace sbar
