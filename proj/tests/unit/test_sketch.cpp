#include "sbar/sketch.hpp"

#include "oracles.hpp"

#include <doctest.h>

#include <random>
#include <string>

using namespace sbar;
using S = BudgetSketch<std::string>;

TEST_CASE("frequent below budget admits") {
    S s(Policy::frequent, 2);
    CHECK(s.insert("a").empty());
    CHECK(s.get("a") == 1u);
}

TEST_CASE("frequent when full decrements and does not admit") {
    S s(Policy::frequent, 1);
    s.insert("a");
    const auto ev = s.insert("b");
    CHECK(ev == std::vector<std::string>{"a"});
    CHECK(s.size() == 0);
    CHECK_FALSE(s.contains("b"));
}

TEST_CASE("space saving inherits the minimum") {
    S s(Policy::space_saving, 1);
    s.insert("a");
    s.insert("a");
    s.insert("a");
    const auto ev = s.insert("b");
    CHECK(ev == std::vector<std::string>{"a"});
    CHECK(s.get("b") == 4u);
    CHECK_FALSE(s.get("a").has_value());
}

TEST_CASE("space saving evicts the least recently updated minimum") {
    S s(Policy::space_saving, 2);
    s.insert("a");
    s.insert("b");
    CHECK(s.insert("c") == std::vector<std::string>{"a"});
}

TEST_CASE("lossy counting bucket boundaries") {
    S s(Policy::lossy_counting, 2, false);
    s.insert("a");  // i=1, Delta=0
    CHECK(s.delta() == 0);
    CHECK(s.get("a") == 1u);
    s.insert("b");  // i=2: cleanup of v <= 0 removes nothing, Delta=1
    CHECK(s.delta() == 1);
    CHECK(s.size() == 2);
    s.insert("c");  // i=3: admitted with Delta+1
    CHECK(s.delta() == 1);
    CHECK(s.get("c") == 2u);
    const auto ev = s.insert("d");  // i=4: cleanup removes v <= 1
    CHECK(ev == std::vector<std::string>{"a", "b"});
    CHECK(s.delta() == 2);
}

TEST_CASE("lossy counting may exceed the budget between boundaries") {
    // a,a,a,a,b,c with k=2 leaves three entries after the i=6 cleanup.
    S s(Policy::lossy_counting, 2, false);
    for (const char* k : {"a", "a", "a", "a", "b", "c"}) s.insert(k);
    CHECK(s.size() == 3);
    CHECK(s.size() <= 2 * s.budget() - 1);
}

TEST_CASE("eager lossy counting stays within budget") {
    S s(Policy::lossy_counting, 2, true);
    for (const char* k : {"a", "a", "a", "a", "b", "c"}) {
        s.insert(k);
        CHECK(s.size() <= 2);
    }
    CHECK(s.contains("a"));
}

TEST_CASE("get and entries") {
    S s(Policy::space_saving, 3);
    CHECK(s.entries().empty());
    s.insert("b");
    s.insert("b");
    s.insert("a");
    CHECK(s.entries() == std::vector<std::pair<std::string, std::uint64_t>>{{"a", 1}, {"b", 2}});
    CHECK_FALSE(s.get("z"));
}

TEST_CASE("policy names") {
    CHECK(parse_policy("lossy") == Policy::lossy_counting);
    CHECK(parse_policy("spacesaving") == Policy::space_saving);
    CHECK(parse_policy("frequent") == Policy::frequent);
    CHECK(to_string(Policy::frequent) == "frequent");
    CHECK_THROWS_AS(parse_policy("lru"), std::invalid_argument);
    CHECK_THROWS_AS(S(Policy::frequent, 0), std::invalid_argument);
}

TEST_CASE("equal inputs give equal states") {
    std::mt19937_64 rng(5);
    std::vector<std::string> keys;
    std::uniform_int_distribution<int> d(0, 9);
    for (int i = 0; i < 500; ++i) keys.push_back(std::to_string(d(rng)));
    for (auto p : {Policy::space_saving, Policy::lossy_counting, Policy::frequent}) {
        S x(p, 4, true), y(p, 4, true);
        for (const auto& k : keys) {
            CHECK(x.insert(k) == y.insert(k));
        }
        CHECK(x.entries() == y.entries());
    }
}

TEST_CASE("budget bound holds for every policy") {
    std::mt19937_64 rng(9);
    std::uniform_int_distribution<int> d(0, 30);
    for (auto p : {Policy::space_saving, Policy::lossy_counting, Policy::frequent}) {
        S s(p, 5, true);
        for (int i = 0; i < 2000; ++i) {
            s.insert(std::to_string(d(rng)));
            REQUIRE(s.size() <= 5);
        }
    }
}
