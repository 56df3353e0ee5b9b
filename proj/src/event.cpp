#include "sbar/event.hpp"

#include <json.hpp>

#include <fstream>
#include <iostream>
#include <sstream>
#include <unordered_map>

namespace sbar {

namespace {

std::string_view trim(std::string_view s) {
    const auto ws = " \t\r\n";
    const auto b = s.find_first_not_of(ws);
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(ws);
    return s.substr(b, e - b + 1);
}

std::vector<std::string_view> split_csv(std::string_view line) {
    std::vector<std::string_view> cols;
    std::size_t start = 0;
    while (true) {
        const auto comma = line.find(',', start);
        if (comma == std::string_view::npos) {
            cols.push_back(trim(line.substr(start)));
            break;
        }
        cols.push_back(trim(line.substr(start, comma - start)));
        start = comma + 1;
    }
    return cols;
}

bool is_csv_header(std::string_view line) {
    const auto cols = split_csv(line);
    return cols.size() >= 2 && cols[0] == "case" && cols[1] == "activity";
}

}  // namespace

Format parse_format(std::string_view name) {
    if (name == "ndjson") return Format::ndjson;
    if (name == "csv") return Format::csv;
    throw std::invalid_argument("unknown format '" + std::string(name) + "'");
}

Event read_ndjson(std::string_view line, std::size_t line_no) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(line);
    } catch (const nlohmann::json::parse_error& e) {
        throw ParseError(line_no, std::string("malformed JSON: ") + e.what());
    }
    if (!j.is_object()) throw ParseError(line_no, "expected a JSON object");
    auto field = [&](const char* name) -> std::string {
        auto it = j.find(name);
        if (it == j.end()) throw ParseError(line_no, std::string("missing field '") + name + "'");
        if (!it->is_string()) throw ParseError(line_no, std::string("field '") + name + "' is not a string");
        return it->get<std::string>();
    };
    auto case_text = field("case");
    auto activity_text = field("activity");
    if (case_text.empty()) throw ParseError(line_no, "empty case id");
    if (activity_text.empty()) throw ParseError(line_no, "empty activity");
    return Event{CaseId(std::move(case_text)), Activity(std::move(activity_text)), std::nullopt};
}

Event read_csv(std::string_view line, std::size_t line_no) {
    const auto cols = split_csv(line);
    if (cols.size() < 2) throw ParseError(line_no, "expected at least 2 columns (case,activity)");
    if (cols[0].empty()) throw ParseError(line_no, "empty case id");
    if (cols[1].empty()) throw ParseError(line_no, "empty activity");
    return Event{CaseId(std::string(cols[0])), Activity(std::string(cols[1])), std::nullopt};
}

std::string write_ndjson(const Event& e) {
    nlohmann::json j = {{"case", e.case_id.str()}, {"activity", e.activity.str()}};
    return j.dump();
}

LineSource::LineSource(std::istream& in, Format format) : in_(&in), format_(format) {}

std::unique_ptr<LineSource> LineSource::open(const std::string& path, Format format) {
    if (path == "-") return std::make_unique<LineSource>(std::cin, format);
    auto file = std::make_unique<std::ifstream>(path);
    if (!*file) throw std::runtime_error("cannot open '" + path + "'");
    auto src = std::make_unique<LineSource>(*file, format);
    src->owned_ = std::move(file);
    return src;
}

std::optional<Event> LineSource::next() {
    std::string line;
    while (!done_) {
        if (!std::getline(*in_, line)) {
            done_ = true;
            break;
        }
        ++line_no_;
        const auto body = trim(line);
        if (body.empty()) continue;
        if (format_ == Format::csv && line_no_ == 1 && is_csv_header(body)) continue;
        Event e = format_ == Format::ndjson ? read_ndjson(body, line_no_) : read_csv(body, line_no_);
        e.seq = ++seq_;
        return e;
    }
    return std::nullopt;
}

VectorSource::VectorSource(std::vector<Event> events) : queue_(events.begin(), events.end()), closed_(true) {}

std::optional<Event> VectorSource::next() {
    if (queue_.empty()) return std::nullopt;
    Event e = std::move(queue_.front());
    queue_.pop_front();
    e.seq = ++seq_;
    return e;
}

std::vector<std::pair<CaseId, Trace>> traces_by_case(const std::vector<Event>& events) {
    std::vector<std::pair<CaseId, Trace>> out;
    std::unordered_map<CaseId, std::size_t> index;
    for (const auto& e : events) {
        auto [it, fresh] = index.try_emplace(e.case_id, out.size());
        if (fresh) out.emplace_back(e.case_id, Trace{});
        out[it->second].second.push_back(e.activity);
    }
    return out;
}

EventLog to_log(const std::vector<Event>& events) {
    EventLog log;
    for (auto& [c, t] : traces_by_case(events)) ++log[t];
    return log;
}

std::vector<Event> log_to_stream(const EventLog& log) {
    std::vector<Event> out;
    std::uint64_t case_no = 0;
    for (const auto& [trace, count] : log) {
        for (std::uint64_t k = 0; k < count; ++k) {
            CaseId c(std::to_string(++case_no));
            for (const auto& a : trace) out.push_back(Event{c, a, out.size() + 1});
        }
    }
    return out;
}

Trace make_trace(std::string_view spaced) {
    Trace t;
    std::istringstream in{std::string(spaced)};
    std::string tok;
    while (in >> tok) t.emplace_back(tok);
    return t;
}

std::string to_string(const Trace& t) {
    std::string s = "<";
    for (std::size_t i = 0; i < t.size(); ++i) {
        if (i) s += ',';
        s += t[i].str();
    }
    return s + ">";
}

}  // namespace sbar
