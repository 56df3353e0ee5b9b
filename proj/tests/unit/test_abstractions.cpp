#include "sbar/abstractions.hpp"

#include "oracles.hpp"

#include <doctest.h>

#include <sstream>

using namespace sbar;

namespace {

Event ev(const char* c, const char* a) { return Event{CaseId(c), Activity(a), std::nullopt}; }

EventLog interleaved() { return {{make_trace("a b c d"), 1}, {make_trace("a c b d"), 1}}; }

const SketchConfig kAmple = SketchConfig::unbounded();

ActivityPair pr(const char* a, const char* b) { return {Activity(a), Activity(b)}; }

}  // namespace

TEST_CASE("df update follows the case's last activity") {
    DfState s(DfConfig::uniform(kAmple));
    s.update(ev("1", "a"));
    CHECK(s.last_activity(CaseId("1")) == Activity("a"));
    CHECK(s.pairs().size() == 0);
    s.update(ev("1", "b"));
    CHECK(s.pairs().get(pr("a", "b")) == 1u);
    CHECK(s.last_activity(CaseId("1")) == Activity("b"));
    CHECK(s.first_seen(CaseId("1")) == Activity("a"));
}

TEST_CASE("interleaved log pairs and derived starts/ends") {
    DfState s(DfConfig::uniform(kAmple));
    for (const auto& e : log_to_stream(interleaved())) s.update(e);
    const auto df = s.extract();
    const std::map<ActivityPair, std::uint64_t> expected{{pr("a", "b"), 1}, {pr("a", "c"), 1}, {pr("b", "c"), 1},
                                                          {pr("b", "d"), 1}, {pr("c", "b"), 1}, {pr("c", "d"), 1}};
    CHECK(df.pairs == expected);
    CHECK(df.starts == std::set<Activity>{Activity("a")});
    CHECK(df.ends == std::set<Activity>{Activity("d")});
    CHECK(df.activities.at(Activity("b")) == 2);
}

TEST_CASE("empty and self-loop extraction") {
    DfState s(DfConfig::uniform(kAmple));
    const auto empty = s.extract();
    CHECK(empty.pairs.empty());
    CHECK(empty.starts.empty());
    CHECK(empty.ends.empty());
    s.update(ev("1", "a"));
    s.update(ev("1", "a"));
    const auto loop = s.extract();
    CHECK(loop.starts == std::set<Activity>{Activity("a")});
    CHECK(loop.ends == std::set<Activity>{Activity("a")});
}

TEST_CASE("no pair bridges an eviction") {
    // One case slot: case 2 pushes case 1 out, so 1's next event starts afresh.
    DfConfig cfg{SketchConfig{Policy::space_saving, 1, true}, kAmple, kAmple};
    DfState s(cfg);
    s.update(ev("1", "a"));
    s.update(ev("2", "x"));
    s.update(ev("1", "b"));
    CHECK_FALSE(s.pairs().contains(pr("a", "b")));
    CHECK(s.pairs().size() == 0);
    CHECK(s.last_activity(CaseId("1")) == Activity("b"));
    CHECK_FALSE(s.last_activity(CaseId("2")));
}

TEST_CASE("df state byte model") {
    DfState s(DfConfig::uniform(kAmple));
    CHECK(s.entry_count() == 0);
    CHECK(s.byte_estimate() == 0);
    s.update(ev("1", "a"));
    s.update(ev("1", "b"));
    CHECK(s.entry_count() == 2);
    CHECK(s.byte_estimate() == kCaseEntryBytes + kPairEntryBytes);
}

TEST_CASE("prefix maintenance") {
    PrefixState s(kAmple, kAmple);
    s.update(ev("1", "a"));
    CHECK(s.prefix_keys() == std::set<Trace>{Trace{}, make_trace("a")});
    CHECK(s.running_prefix(CaseId("1")) == make_trace("a"));
    s.update(ev("1", "b"));
    CHECK(s.prefix_keys().count(make_trace("a b")));
    CHECK(s.running_prefix(CaseId("1")) == make_trace("a b"));
}

TEST_CASE("prefix closure of the interleaved log has eight prefixes") {
    PrefixState s(kAmple, kAmple);
    for (const auto& e : log_to_stream(interleaved())) s.update(e);
    const std::set<Trace> expected{Trace{},           make_trace("a"),       make_trace("a b"),
                                   make_trace("a c"), make_trace("a b c"),   make_trace("a c b"),
                                   make_trace("a b c d"), make_trace("a c b d")};
    CHECK(s.prefix_keys() == expected);
    CHECK(prefix_closure(interleaved()) == expected);
}

TEST_CASE("view rendering") {
    const std::deque<Activity> w{Activity("b"), Activity("a"), Activity("b")};
    CHECK(render_view(ViewKind::prefix, w) == "<b,a,b>");
    CHECK(render_view(ViewKind::set, w) == "{a,b}");
    CHECK(render_view(ViewKind::multiset, w) == "[a,b^2]");
    CHECK(render_view(ViewKind::multiset, {}) == "[]");
    CHECK(parse_view("set") == ViewKind::set);
    CHECK_THROWS(parse_view("bag"));
}

TEST_CASE("multiset view, unbounded, on the interleaved log") {
    TsState s(ViewSpec{ViewKind::multiset, std::nullopt}, kAmple);
    for (const auto& e : log_to_stream(interleaved())) s.update(e);
    const auto ts = s.snapshot();
    CHECK(ts.states == std::set<std::string>{"[]", "[a]", "[a,b]", "[a,c]", "[a,b,c]", "[a,b,c,d]"});
    std::set<std::tuple<std::string, std::string, std::string>> edges;
    for (const auto& [e, n] : ts.edges) edges.insert({e.from, e.activity.str(), e.to});
    const std::set<std::tuple<std::string, std::string, std::string>> expected{
        {"[]", "a", "[a]"},          {"[a]", "b", "[a,b]"},     {"[a]", "c", "[a,c]"},
        {"[a,b]", "c", "[a,b,c]"},   {"[a,c]", "b", "[a,b,c]"}, {"[a,b,c]", "d", "[a,b,c,d]"}};
    CHECK(edges == expected);
}

TEST_CASE("set view with horizon 1 on the interleaved log") {
    TsState s(ViewSpec{ViewKind::set, 1}, kAmple);
    for (const auto& e : log_to_stream(interleaved())) s.update(e);
    const auto ts = s.snapshot();
    CHECK(ts.states == std::set<std::string>{"{}", "{a}", "{b}", "{c}", "{d}"});
    CHECK(ts.edges.size() == 7);
    CHECK(ts.edges.count(TsEdge{"{b}", Activity("c"), "{c}"}));
    CHECK(ts.edges.count(TsEdge{"{c}", Activity("b"), "{b}"}));
}

TEST_CASE("empty stream gives only the initial state") {
    TsState s(ViewSpec{}, kAmple);
    CHECK(s.system().states == std::set<std::string>{"[]"});
    CHECK(s.system().edges.empty());
    CHECK_THROWS(TsState(ViewSpec{ViewKind::set, 0}, kAmple));
}

TEST_CASE("pruning") {
    SUBCASE("single case resets the system") {
        TsState s(ViewSpec{}, kAmple);
        for (const char* a : {"a", "b", "c"}) s.update(ev("1", a));
        s.prune_case(CaseId("1"));
        CHECK(s.system().states == std::set<std::string>{"[]"});
        CHECK(s.system().edges.empty());
    }
    SUBCASE("two identical cases halve the counts") {
        TsState s(ViewSpec{}, kAmple);
        for (const char* c : {"1", "2"}) {
            for (const char* a : {"a", "b"}) s.update(ev(c, a));
        }
        const auto before = s.snapshot();
        s.prune_case(CaseId("1"));
        CHECK(s.system().states == before.states);
        for (const auto& [e, n] : s.system().edges) CHECK(n * 2 == before.edges.at(e));
    }
    SUBCASE("unknown case is a no-op") {
        TsState s(ViewSpec{}, kAmple);
        s.update(ev("1", "a"));
        const auto before = s.snapshot();
        s.prune_case(CaseId("9"));
        CHECK(s.snapshot() == before);
    }
}

TEST_CASE("eviction prunes the evicted case's contribution") {
    TsState s(ViewSpec{ViewKind::prefix, std::nullopt}, SketchConfig{Policy::space_saving, 1, true});
    s.update(ev("1", "a"));
    s.update(ev("1", "b"));
    s.update(ev("2", "x"));
    CHECK(s.system().edges.size() == 1);
    CHECK(s.system().edges.count(TsEdge{"<>", Activity("x"), "<x>"}));
    CHECK(s.live_events() == 1);
}

TEST_CASE("dumps") {
    DfState s(DfConfig::uniform(kAmple));
    for (const auto& e : log_to_stream(interleaved())) s.update(e);
    std::ostringstream csv, dot;
    write_df_csv(csv, s.extract());
    CHECK(csv.str().rfind("from,to,count\na,b,1\n", 0) == 0);
    write_dot(dot, s.extract());
    CHECK(dot.str().find("\"a\" -> \"b\"") != std::string::npos);
}
