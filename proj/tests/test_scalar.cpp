#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <takeover/errors.hpp>
#include <takeover/scalar.hpp>
#include <takeover/sim.hpp>
#include <vector>

using namespace takeover;

namespace {

Table constant_rows(int rows, const std::vector<double>& row) {
    return Table(rows, row);
}

// 4-node outbreak graph used by the bundled example; handy as a nontrivial
//fixed instance: S->I, I->S, I->R, I->D, R->S.
ScalarSpec outbreak_spec(int horizon) {
    ScalarSpec s;
    s.graph = make_graph(4, {{0, 1}, {1, 0}, {1, 2}, {1, 3}, {2, 0}});
    s.horizon = horizon;
    s.f = constant_rows(horizon, {1, 1, 1, 1});
    s.g = constant_rows(horizon + 1, {1.5, 2.2, 1.0, 2.5});
    s.d = constant_rows(horizon, {0.7, 0.5, 0.8, 0.2});
    s.a = constant_rows(horizon, {0.5, 0.7, 0.1, 0.9});
    return s;
}

ScalarSpec random_spec(Rng& rng) {
    int n = 2 + static_cast<int>(rng.next_u64() % 4);  // 2..5 nodes
    std::vector<std::pair<int, int>> edges;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            if (i != j && rng.next_double() < 0.6) edges.push_back({i, j});
    if (edges.empty()) edges.push_back({0, n - 1});
    ScalarSpec s;
    s.graph = make_graph(n, edges);
    s.horizon = 1 + static_cast<int>(rng.next_u64() % 8);
    auto fill = [&](int rows, double lo, double hi) {
        Table t(rows, std::vector<double>(n));
        for (auto& r : t)
            for (double& x : r) x = lo + (hi - lo) * rng.next_double();
        return t;
    };
    s.f = fill(s.horizon, 0.6, 1.4);
    s.g = fill(s.horizon + 1, 0.0, 2.0);
    s.d = fill(s.horizon, 0.0, 1.5);
    s.a = fill(s.horizon, 0.0, 1.5);
    return s;
}

}  // namespace

TEST_CASE("stage matrix on a two-node swap graph") {
    Graph g = make_graph(2, {{0, 1}, {1, 0}});
    GameForm form = game_form(g);
    REQUIRE(form.node_count() == 2);
    // node 0: options {stay, move to 1} for both players
    REQUIRE(form.nodes[0].defender.size() == 2);
    CHECK(form.nodes[0].defender[0].cost_node == -1);
    CHECK(form.nodes[0].defender[1].target == 1);
    CHECK(form.nodes[0].defender[1].cost_node == 1);

    GameMatrix m = scaled_cost_to_go(form.nodes[0], {1, 1}, {1, 1}, {1, 1}, {1, 3});
    REQUIRE(m.rows == 2);
    REQUIRE(m.cols == 2);
    CHECK(m.at(0, 0) == 1.0);  // both idle
    CHECK(m.at(0, 1) == 2.0);  // adversary flips: 3 - 1
    CHECK(m.at(1, 0) == 4.0);  // defender flips: 3 + 1
    CHECK(m.at(1, 1) == 3.0);  // agreed move: 3 + 1 - 1
}

TEST_CASE("state scaling is read at the landing node") {
    Graph g = make_graph(2, {{0, 1}, {1, 0}});
    GameForm form = game_form(g);
    GameMatrix m = scaled_cost_to_go(form.nodes[0], {2, 3}, {0, 0}, {0, 0}, {1, 1});
    CHECK(m.at(0, 0) == 4.0);  // stays at 0: f=2
    CHECK(m.at(0, 1) == 9.0);  // lands at 1: f=3
    CHECK(m.at(1, 1) == 9.0);
}

TEST_CASE("terminal coefficients are the terminal cost row, bit for bit") {
    ScalarSpec s = outbreak_spec(3);
    s.g[3] = {0.1, 1.0 / 3.0, std::nextafter(2.0, 3.0), 0.7};
    ScalarTable t = solve_lp(lower(s));
    REQUIRE(t.p.size() == 4);
    for (int v = 0; v < 4; ++v) CHECK(t.p[3][v] == s.g[3][v]);
}

TEST_CASE("outbreak example: frozen coefficient goldens") {
    ScalarSpec s = outbreak_spec(20);
    ScalarTable t = solve_lp(lower(s));

    // first decision epoch
    CHECK(t.p[0][0] == doctest::Approx(41.478423941266435).epsilon(1e-10));
    CHECK(t.p[0][1] == doctest::Approx(42.70743033328288).epsilon(1e-10));
    CHECK(t.p[0][2] == doctest::Approx(39.94941754925001).epsilon(1e-10));
    CHECK(t.p[0][3] == doctest::Approx(52.5).epsilon(1e-12));
    // last decision epoch
    CHECK(t.p[19][0] == doctest::Approx(3.0).epsilon(1e-12));
    CHECK(t.p[19][1] == doctest::Approx(4.147368421052631).epsilon(1e-10));
    CHECK(t.p[19][2] == doctest::Approx(2.0).epsilon(1e-12));
    // the absorbing node is a closed form: g + (horizon - k) * (g - a + d)
    for (int k = 0; k <= 20; ++k) CHECK(t.p[k][3] == doctest::Approx(2.5 * (21 - k)).epsilon(1e-12));

    // every stored policy row certifies its stage game
    ScalarProblem prob = lower(s);
    for (int k = 19; k >= 0; --k) {
        for (int v = 0; v < 4; ++v) {
            GameMatrix m = scaled_cost_to_go(prob.form.nodes[v], prob.f[k], prob.d[k], prob.a[k],
                                             t.p[k + 1]);
            GameSolution sol;
            sol.value = t.p[k][v] - prob.g[k][v];
            sol.row_strategy = t.policy_defender[k][v];
            sol.col_strategy = t.policy_adversary[k][v];
            CHECK(verify_solution(m, sol, 1e-8).ok);
        }
    }

    // qualitative play at the infected node, first epoch: the defender never
    // retreats to the absorbing node, the adversary mostly pushes toward it
    // (option order at node I is [I, S, R, D])
    CHECK(t.policy_defender[0][1][3] <= 1e-9);
    CHECK(t.policy_adversary[0][1][3] >= 0.9);
}

TEST_CASE("coefficients are nonnegative and monotone in the stage cost") {
    Rng rng(2026);
    for (int trial = 0; trial < 25; ++trial) {
        ScalarSpec s = random_spec(rng);
        ScalarTable t = solve_lp(lower(s));
        for (const auto& row : t.p)
            for (double x : row) CHECK(x >= -1e-12);

        ScalarSpec bigger = s;
        for (auto& row : bigger.g)
            for (double& x : row) x += 0.25;
        ScalarTable t2 = solve_lp(lower(bigger));
        for (size_t k = 0; k < t.p.size(); ++k)
            for (size_t v = 0; v < t.p[k].size(); ++v)
                CHECK(t2.p[k][v] >= t.p[k][v] - 1e-9);
    }
}

TEST_CASE("zero costs solve to identically zero") {
    ScalarSpec s = outbreak_spec(6);
    for (auto* tab : {&s.g, &s.d, &s.a})
        for (auto& row : *tab)
            for (double& x : row) x = 0.0;
    ScalarTable t = solve_lp(lower(s));
    for (const auto& row : t.p)
        for (double x : row) CHECK(x == 0.0);
}

TEST_CASE("only f^2 matters: flipping the sign of f changes nothing") {
    Rng rng(77);
    ScalarSpec s = random_spec(rng);
    ScalarTable base = solve_lp(lower(s));
    ScalarSpec flipped = s;
    for (auto& row : flipped.f)
        for (double& x : row) x = -x;
    ScalarTable t = solve_lp(lower(flipped));
    for (size_t k = 0; k < base.p.size(); ++k)
        for (size_t v = 0; v < base.p[k].size(); ++v)
            CHECK(t.p[k][v] == doctest::Approx(base.p[k][v]).epsilon(1e-13));
}

TEST_CASE("validation collects every violation") {
    ScalarSpec s = outbreak_spec(2);
    s.g[1][2] = -0.5;                  // negative cost
    s.d[0][1] = std::nan("");          // non-finite
    s.a.pop_back();                    // wrong row count
    try {
        validate(lower(s));
        FAIL("expected SpecError");
    } catch (const SpecError& e) {
        CHECK(e.issues.size() >= 3);
    }
    CHECK_THROWS_AS(solve_lp(lower(s)), SpecError);
}

TEST_CASE("horizon must be positive") {
    ScalarSpec s = outbreak_spec(1);
    s.horizon = 0;
    s.f.clear();
    s.d.clear();
    s.a.clear();
    s.g.resize(1);
    CHECK_THROWS_AS(validate(lower(s)), SpecError);
}

TEST_CASE("value_at scales by x^2 and rejects bad indices") {
    ScalarSpec s = outbreak_spec(4);
    ScalarTable t = solve_lp(lower(s));
    CHECK(value_at(t, 0, 2, 2.0) == doctest::Approx(4.0 * t.p[0][2]).epsilon(1e-15));
    CHECK(value_at(t, 4, 1, 1.0) == doctest::Approx(t.p[4][1]).epsilon(1e-15));
    CHECK(value_at(t, 2, 3, 0.0) == 0.0);
    CHECK_THROWS_AS(value_at(t, 5, 0, 1.0), SpecError);
    CHECK_THROWS_AS(value_at(t, -1, 0, 1.0), SpecError);
    CHECK_THROWS_AS(value_at(t, 0, 4, 1.0), SpecError);
}

TEST_CASE("chain lowering charges the contested node, graph lowering the target") {
    ChainSpec c;
    c.chain = make_chain(2);
    c.horizon = 1;
    c.f = constant_rows(1, {1, 1, 1});
    c.g = constant_rows(2, {0, 0, 0});
    c.d = constant_rows(1, {0.25, 0.5, 0.75});
    c.a = constant_rows(1, {0.25, 0.5, 0.75});
    ScalarProblem p = lower(c);
    REQUIRE(p.form.node_count() == 3);
    // interior node 1: the defender's move option pays node 1's price
    CHECK(p.form.nodes[1].defender[1].target == 0);
    CHECK(p.form.nodes[1].defender[1].cost_node == 1);
    CHECK(p.form.nodes[1].adversary[1].target == 2);
    CHECK(p.form.nodes[1].adversary[1].cost_node == 1);
    // bottom node: the adversary's takeover escalates but is priced at node 0
    CHECK(p.form.nodes[0].adversary[1].target == 1);
    CHECK(p.form.nodes[0].adversary[1].cost_node == 0);
    // top node: the defender's takeover pushes down, priced at node 2
    CHECK(p.form.nodes[2].defender[1].target == 1);
    CHECK(p.form.nodes[2].defender[1].cost_node == 2);
}
