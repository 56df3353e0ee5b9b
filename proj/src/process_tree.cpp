#include "sbar/process_tree.hpp"

#include <cctype>
#include <fstream>
#include <sstream>

namespace sbar {

namespace {

const char* op_name(ProcessTree::Kind k) {
    switch (k) {
    case ProcessTree::Kind::seq: return "seq";
    case ProcessTree::Kind::xor_: return "xor";
    case ProcessTree::Kind::and_: return "and";
    case ProcessTree::Kind::loop: return "loop";
    default: return "";
    }
}

class Parser {
public:
    explicit Parser(std::string_view text) : text_(text) {}

    ProcessTree parse() {
        auto t = node();
        skip();
        if (pos_ != text_.size()) throw TreeSyntaxError(pos_, "trailing input");
        return t;
    }

private:
    void skip() {
        while (pos_ < text_.size()) {
            if (std::isspace(static_cast<unsigned char>(text_[pos_]))) {
                ++pos_;
            } else if (text_[pos_] == ';') {
                while (pos_ < text_.size() && text_[pos_] != '\n') ++pos_;
            } else {
                break;
            }
        }
    }

    std::string atom() {
        const auto start = pos_;
        while (pos_ < text_.size()) {
            char c = text_[pos_];
            if (std::isspace(static_cast<unsigned char>(c)) || c == '(' || c == ')' || c == ';') break;
            ++pos_;
        }
        if (pos_ == start) throw TreeSyntaxError(pos_, "expected a label or '('");
        return std::string(text_.substr(start, pos_ - start));
    }

    ProcessTree node() {
        skip();
        if (pos_ >= text_.size()) throw TreeSyntaxError(pos_, "unexpected end of input");
        if (text_[pos_] == ')') throw TreeSyntaxError(pos_, "unexpected ')'");
        if (text_[pos_] != '(') {
            auto name = atom();
            if (name == "tau") return ProcessTree::silent();
            return ProcessTree::leaf(Activity(name));
        }
        const auto open = pos_++;
        skip();
        const auto op_pos = pos_;
        auto op = atom();
        ProcessTree t;
        if (op == "seq") {
            t.kind = ProcessTree::Kind::seq;
        } else if (op == "xor") {
            t.kind = ProcessTree::Kind::xor_;
        } else if (op == "and") {
            t.kind = ProcessTree::Kind::and_;
        } else if (op == "loop") {
            t.kind = ProcessTree::Kind::loop;
        } else {
            throw TreeSyntaxError(op_pos, "unknown operator '" + op + "'");
        }
        while (true) {
            skip();
            if (pos_ >= text_.size()) throw TreeSyntaxError(open, "unclosed '('");
            if (text_[pos_] == ')') {
                ++pos_;
                break;
            }
            t.children.push_back(node());
        }
        const std::size_t need = t.kind == ProcessTree::Kind::loop ? 2 : 1;
        if (t.children.size() < need) {
            throw TreeSyntaxError(open, "'" + op + "' needs at least " + std::to_string(need) + " children");
        }
        return t;
    }

    std::string_view text_;
    std::size_t pos_ = 0;
};

using Language = std::set<Trace>;

void interleave(const Trace& u, std::size_t i, const Trace& v, std::size_t j, Trace& cur, Language& out) {
    if (i == u.size() && j == v.size()) {
        out.insert(cur);
        return;
    }
    if (i < u.size()) {
        cur.push_back(u[i]);
        interleave(u, i + 1, v, j, cur, out);
        cur.pop_back();
    }
    if (j < v.size()) {
        cur.push_back(v[j]);
        interleave(u, i, v, j + 1, cur, out);
        cur.pop_back();
    }
}

Language concat(const Language& a, const Language& b) {
    Language out;
    for (const auto& u : a) {
        for (const auto& v : b) {
            Trace t = u;
            t.insert(t.end(), v.begin(), v.end());
            out.insert(std::move(t));
        }
    }
    return out;
}

Language shuffle(const Language& a, const Language& b) {
    Language out;
    Trace cur;
    for (const auto& u : a) {
        for (const auto& v : b) interleave(u, 0, v, 0, cur, out);
    }
    return out;
}

}  // namespace

void ProcessTree::validate() const {
    switch (kind) {
    case Kind::leaf:
        if (!activity) throw std::invalid_argument("leaf without activity");
        return;
    case Kind::silent: return;
    case Kind::loop:
        if (children.size() < 2) throw std::invalid_argument("loop needs >= 2 children");
        break;
    default:
        if (children.empty()) throw std::invalid_argument(std::string(op_name(kind)) + " needs >= 1 child");
    }
    for (const auto& c : children) c.validate();
}

std::set<Activity> ProcessTree::activities() const {
    std::set<Activity> out;
    if (kind == Kind::leaf) out.insert(*activity);
    for (const auto& c : children) out.merge(c.activities());
    return out;
}

std::size_t ProcessTree::leaf_count() const {
    if (!is_operator()) return 1;
    std::size_t n = 0;
    for (const auto& c : children) n += c.leaf_count();
    return n;
}

ProcessTree parse_tree(std::string_view text) { return Parser(text).parse(); }

ProcessTree load_tree(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open model '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_tree(ss.str());
}

std::string to_sexpr(const ProcessTree& t) {
    switch (t.kind) {
    case ProcessTree::Kind::leaf: return t.activity->str();
    case ProcessTree::Kind::silent: return "tau";
    default: break;
    }
    std::string s = "(";
    s += op_name(t.kind);
    for (const auto& c : t.children) s += " " + to_sexpr(c);
    return s + ")";
}

std::set<Trace> tree_language(const ProcessTree& t, std::size_t bound) {
    using K = ProcessTree::Kind;
    switch (t.kind) {
    case K::leaf: return {Trace{*t.activity}};
    case K::silent: return {Trace{}};
    case K::seq: {
        Language out{Trace{}};
        for (const auto& c : t.children) out = concat(out, tree_language(c, bound));
        return out;
    }
    case K::xor_: {
        Language out;
        for (const auto& c : t.children) out.merge(tree_language(c, bound));
        return out;
    }
    case K::and_: {
        Language out{Trace{}};
        for (const auto& c : t.children) out = shuffle(out, tree_language(c, bound));
        return out;
    }
    case K::loop: {
        const auto body = tree_language(t.children[0], bound);
        Language redo;
        for (std::size_t i = 1; i < t.children.size(); ++i) redo.merge(tree_language(t.children[i], bound));
        const auto round = concat(redo, body);
        Language out = body;
        Language cur = body;
        for (std::size_t n = 1; n < bound; ++n) {
            cur = concat(cur, round);
            out.insert(cur.begin(), cur.end());
        }
        return out;
    }
    }
    return {};
}

ProcessTree flatten(ProcessTree t) {
    if (!t.is_operator()) return t;
    std::vector<ProcessTree> kids;
    for (auto& c : t.children) {
        auto f = flatten(std::move(c));
        const bool associative = t.kind != ProcessTree::Kind::loop;
        if (associative && f.kind == t.kind) {
            for (auto& g : f.children) kids.push_back(std::move(g));
        } else {
            kids.push_back(std::move(f));
        }
    }
    t.children = std::move(kids);
    return t;
}

}  // namespace sbar
