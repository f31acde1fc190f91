#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <takeover/chain.hpp>
#include <takeover/errors.hpp>
#include <takeover/graph.hpp>

using namespace takeover;

TEST_CASE("graph actions are own node first, then ascending neighbors") {
    Graph g = make_graph(4, {{0, 2}, {0, 1}, {2, 3}, {3, 0}});
    REQUIRE(g.actions.size() == 4);
    CHECK(g.actions[0] == std::vector<int>{0, 1, 2});
    CHECK(g.actions[1] == std::vector<int>{1});
    CHECK(g.actions[2] == std::vector<int>{2, 3});
    CHECK(g.actions[3] == std::vector<int>{3, 0});
}

TEST_CASE("self-loops and parallel edges collapse in the action sets") {
    Graph g = make_graph(3, {{0, 0}, {0, 1}, {0, 1}, {1, 2}, {1, 2}, {2, 2}});
    CHECK(g.actions[0] == std::vector<int>{0, 1});
    CHECK(g.actions[1] == std::vector<int>{1, 2});
    CHECK(g.actions[2] == std::vector<int>{2});
    CHECK(is_action_of(g, 0, 0));
    CHECK(is_action_of(g, 0, 1));
    CHECK_FALSE(is_action_of(g, 0, 2));
}

TEST_CASE("make_graph reports every bad edge at once") {
    try {
        make_graph(2, {{0, 5}, {-1, 0}, {3, 3}, {0, 1}});
        FAIL("expected SpecError");
    } catch (const SpecError& e) {
        // three offending edges, each with its own message
        CHECK(e.issues.size() == 3);
    }
    CHECK_THROWS_AS(make_graph(-1, {}), SpecError);
    CHECK_THROWS_AS(make_graph(0, {}), SpecError);
}

TEST_CASE("graph holder update") {
    Graph g = make_graph(3, {{0, 1}, {0, 2}, {1, 0}, {1, 2}, {2, 0}});

    SUBCASE("agreeing on a move carries the holder there") {
        CHECK(next_node(g, 0, 1, 1) == 1);
        CHECK(next_node(g, 1, 2, 2) == 2);
    }
    SUBCASE("agreeing on staying keeps the holder") {
        CHECK(next_node(g, 0, 0, 0) == 0);
    }
    SUBCASE("a lone mover gets their target") {
        CHECK(next_node(g, 0, 1, 0) == 1);
        CHECK(next_node(g, 0, 0, 2) == 2);
        CHECK(next_node(g, 1, 1, 0) == 0);
    }
    SUBCASE("contested distinct moves cancel") {
        CHECK(next_node(g, 0, 1, 2) == 0);
        CHECK(next_node(g, 1, 0, 2) == 1);
    }
    SUBCASE("invalid actions are rejected") {
        CHECK_THROWS_AS(next_node(g, 2, 1, 2), SpecError);  // 1 not reachable from 2
        CHECK_THROWS_AS(next_node(g, 0, 0, 7), SpecError);
    }
}

TEST_CASE("make_chain validates interior targets") {
    Chain c = make_chain(3);
    CHECK(c.node_count() == 4);
    CHECK(c.down[1] == 0);
    CHECK(c.up[2] == 3);

    // one entry per node; the end entries are ignored
    Chain skip = make_chain(4, {0, 0, 0, 2, 0}, {0, 4, 3, 4, 0});
    CHECK(skip.down[3] == 2);
    CHECK(skip.up[1] == 4);

    CHECK_THROWS_AS(make_chain(0), SpecError);
    // down must be strictly below the node, up strictly above
    CHECK_THROWS_AS(make_chain(3, {0, 0, 2, 0}, {0, 2, 3, 0}), SpecError);
    CHECK_THROWS_AS(make_chain(3, {0, 0, 1, 0}, {0, 2, 2, 0}), SpecError);
    CHECK_THROWS_AS(make_chain(3, {0, 0, 1, 0}, {0, 2}), SpecError);
}

TEST_CASE("chain holder update") {
    Chain c = make_chain(3);
    auto idle_at = [](int n) { return ChainAction::move(n); };

    SUBCASE("bottom node") {
        // adversary takeover against an idle defender escalates to 1
        CHECK(next_node(c, 0, idle_at(0), ChainAction::take()) == 1);
        // defender takeover re-secures the node
        CHECK(next_node(c, 0, ChainAction::take(), idle_at(0)) == 0);
        // both acting cancels out
        CHECK(next_node(c, 0, ChainAction::take(), ChainAction::take()) == 0);
        CHECK(next_node(c, 0, idle_at(0), idle_at(0)) == 0);
    }
    SUBCASE("top node") {
        // defender takeover against an idle adversary pushes back to 2
        CHECK(next_node(c, 3, ChainAction::take(), idle_at(3)) == 2);
        CHECK(next_node(c, 3, idle_at(3), ChainAction::take()) == 3);
        CHECK(next_node(c, 3, ChainAction::take(), ChainAction::take()) == 3);
    }
    SUBCASE("interior node") {
        CHECK(next_node(c, 2, ChainAction::move(1), idle_at(2)) == 1);
        CHECK(next_node(c, 2, idle_at(2), ChainAction::move(3)) == 3);
        // contested distinct moves cancel
        CHECK(next_node(c, 2, ChainAction::move(1), ChainAction::move(3)) == 2);
        CHECK(next_node(c, 2, idle_at(2), idle_at(2)) == 2);
    }
    SUBCASE("invalid actions are rejected") {
        CHECK_THROWS_AS(next_node(c, 2, ChainAction::move(3), idle_at(2)), SpecError);
        CHECK_THROWS_AS(next_node(c, 0, idle_at(0), ChainAction::move(1)), SpecError);
        CHECK_THROWS_AS(next_node(c, 1, ChainAction::take(), idle_at(1)), SpecError);
    }
}

TEST_CASE("chain with custom interior targets moves to them") {
    Chain c = make_chain(4, {0, 0, 0, 1, 0}, {0, 3, 4, 4, 0});
    CHECK(next_node(c, 3, ChainAction::move(1), ChainAction::move(4)) == 3);
    CHECK(next_node(c, 3, ChainAction::move(1), ChainAction::move(3)) == 1);
    CHECK(next_node(c, 1, ChainAction::move(1), ChainAction::move(3)) == 3);
    CHECK(next_node(c, 1, ChainAction::move(0), ChainAction::move(1)) == 0);
}
