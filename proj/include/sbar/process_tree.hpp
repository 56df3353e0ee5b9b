#pragma once

#include "sbar/event.hpp"

#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace sbar {

/// Block-structured process model. Loops are `loop(body, redo_1, ..., redo_n)`:
/// body, then any number of (one redo, body) rounds.
struct ProcessTree {
    enum class Kind { leaf, silent, seq, xor_, and_, loop };

    Kind kind = Kind::silent;
    std::optional<Activity> activity;  // leaf only
    std::vector<ProcessTree> children;

    static ProcessTree leaf(Activity a) { return {Kind::leaf, std::move(a), {}}; }
    static ProcessTree leaf(const char* a) { return leaf(Activity(a)); }
    static ProcessTree silent() { return {}; }
    static ProcessTree seq(std::vector<ProcessTree> c) { return {Kind::seq, std::nullopt, std::move(c)}; }
    static ProcessTree xor_of(std::vector<ProcessTree> c) { return {Kind::xor_, std::nullopt, std::move(c)}; }
    static ProcessTree and_of(std::vector<ProcessTree> c) { return {Kind::and_, std::nullopt, std::move(c)}; }
    static ProcessTree loop(std::vector<ProcessTree> c) { return {Kind::loop, std::nullopt, std::move(c)}; }

    bool is_operator() const { return kind != Kind::leaf && kind != Kind::silent; }

    /// Throws std::invalid_argument if an operator has too few children.
    void validate() const;

    /// Visible labels in the tree.
    std::set<Activity> activities() const;
    std::size_t leaf_count() const;

    friend bool operator==(const ProcessTree&, const ProcessTree&) = default;
};

class TreeSyntaxError : public std::runtime_error {
public:
    TreeSyntaxError(std::size_t offset, const std::string& msg)
        : std::runtime_error("position " + std::to_string(offset) + ": " + msg), offset_(offset) {}
    std::size_t offset() const noexcept { return offset_; }

private:
    std::size_t offset_;
};

/// Parses the s-expression syntax: `(seq a (and b c) (xor d tau) (loop e f))`.
/// `;` starts a comment running to end of line.
ProcessTree parse_tree(std::string_view text);
ProcessTree load_tree(const std::string& path);
std::string to_sexpr(const ProcessTree& t);

/// All traces of `t` with every loop body executed at most `bound` times.
std::set<Trace> tree_language(const ProcessTree& t, std::size_t bound);

/// Same-operator nesting is flattened (seq in seq, xor in xor, and in and).
ProcessTree flatten(ProcessTree t);

}  // namespace sbar
