#pragma once

#include <compare>
#include <cstdint>
#include <deque>
#include <functional>
#include <istream>
#include <map>
#include <memory>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace sbar {

/// Non-empty opaque text label. `Tag` keeps activities and case ids apart.
template <class Tag>
class Label {
public:
    explicit Label(std::string text) : text_(std::move(text)) {
        if (text_.empty()) {
            throw std::invalid_argument(std::string(Tag::what) + " must be non-empty");
        }
    }
    explicit Label(const char* text) : Label(std::string(text)) {}

    const std::string& str() const noexcept { return text_; }

    friend bool operator==(const Label&, const Label&) = default;
    friend auto operator<=>(const Label&, const Label&) = default;
    friend std::ostream& operator<<(std::ostream& os, const Label& l) { return os << l.text_; }

private:
    std::string text_;
};

struct ActivityTag { static constexpr const char* what = "activity"; };
struct CaseTag { static constexpr const char* what = "case id"; };

using Activity = Label<ActivityTag>;
using CaseId = Label<CaseTag>;

using Trace = std::vector<Activity>;
using ActivityPair = std::pair<Activity, Activity>;

/// Finite multiset of traces.
using EventLog = std::map<Trace, std::uint64_t>;

struct Event {
    CaseId case_id;
    Activity activity;
    std::optional<std::uint64_t> seq;

    friend bool operator==(const Event&, const Event&) = default;
};

/// Thrown for malformed input records. `line` is 1-based.
class ParseError : public std::runtime_error {
public:
    ParseError(std::size_t line, const std::string& msg)
        : std::runtime_error("line " + std::to_string(line) + ": " + msg), line_(line) {}
    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

enum class Format { ndjson, csv };

Format parse_format(std::string_view name);

Event read_ndjson(std::string_view line, std::size_t line_no = 1);
Event read_csv(std::string_view line, std::size_t line_no = 1);
std::string write_ndjson(const Event& e);

/// Pull-based event producer. `next()` returns nothing both when no event is
/// available yet and when the stream has ended; `exhausted()` tells them apart.
class EventSource {
public:
    virtual ~EventSource() = default;
    virtual std::optional<Event> next() = 0;
    virtual bool exhausted() const = 0;
};

/// Replays a line-oriented stream (file or standard input). Blank lines are
/// skipped; a leading CSV header `case,activity,...` is skipped.
class LineSource final : public EventSource {
public:
    LineSource(std::istream& in, Format format);
    /// Opens and owns `path`; "-" reads standard input.
    static std::unique_ptr<LineSource> open(const std::string& path, Format format);

    std::optional<Event> next() override;
    bool exhausted() const override { return done_; }

private:
    std::unique_ptr<std::istream> owned_;
    std::istream* in_;
    Format format_;
    std::size_t line_no_ = 0;
    std::uint64_t seq_ = 0;
    bool done_ = false;
};

/// In-memory source; also used as a push queue in tests.
class VectorSource final : public EventSource {
public:
    VectorSource() = default;
    explicit VectorSource(std::vector<Event> events);

    void push(Event e) { queue_.push_back(std::move(e)); }
    void close() { closed_ = true; }

    std::optional<Event> next() override;
    bool exhausted() const override { return closed_ && queue_.empty(); }

private:
    std::deque<Event> queue_;
    std::uint64_t seq_ = 0;
    bool closed_ = false;
};

/// Groups events by case (in first-appearance order) into traces.
std::vector<std::pair<CaseId, Trace>> traces_by_case(const std::vector<Event>& events);
EventLog to_log(const std::vector<Event>& events);

/// Flattens a log into a stream, trace after trace; case ids are "1", "2", ...
std::vector<Event> log_to_stream(const EventLog& log);

/// Convenience: "a b c" -> <a,b,c>.
Trace make_trace(std::string_view spaced);

std::string to_string(const Trace& t);

}  // namespace sbar

template <class Tag>
struct std::hash<sbar::Label<Tag>> {
    std::size_t operator()(const sbar::Label<Tag>& l) const noexcept {
        return std::hash<std::string>{}(l.str());
    }
};

template <>
struct std::hash<sbar::ActivityPair> {
    std::size_t operator()(const sbar::ActivityPair& p) const noexcept {
        std::size_t h = std::hash<std::string>{}(p.first.str());
        return h ^ (std::hash<std::string>{}(p.second.str()) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2));
    }
};

template <>
struct std::hash<sbar::Trace> {
    std::size_t operator()(const sbar::Trace& t) const noexcept {
        std::size_t h = t.size();
        for (const auto& a : t) {
            h ^= std::hash<std::string>{}(a.str()) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
        }
        return h;
    }
};
