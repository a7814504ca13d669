#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <numeric>

#include "beltforge/rng.hpp"
#include "beltforge/sim.hpp"

using namespace beltforge;

namespace {

SolutionMatrix from_codes(int n, std::initializer_list<std::pair<Vec2, int>> placements) {
    SolutionMatrix s(n);
    for (auto& [pos, code] : placements) s.set(pos, code);
    return s;
}

// The corner route from the input port (2,0) down to the output port (0,2).
SolutionMatrix corner_route() {
    return from_codes(3, {{{2, 0}, 4}, {{1, 0}, 4}, {{0, 0}, 3}, {{0, 1}, 3}, {{0, 2}, 3}});
}

SolutionMatrix random_solution(int n, Rng& rng, double empty_prob = 0.5) {
    SolutionMatrix s(n);
    for (int y = 0; y < n; ++y)
        for (int x = 0; x < n; ++x)
            if (!rng.bernoulli(empty_prob)) s.set({x, y}, rng.uniform_int(1, 8));
    return s;
}

}  // namespace

TEST_CASE("flow successors follow belt facings and stop at the playfield edge") {
    ProblemMatrix p = make_benchmark(3, false, 0);
    FlowGraph flow = build_flow(p, corner_route());
    CHECK(flow.successor_of({2, 0}) == Vec2{1, 0});
    CHECK(flow.successor_of({1, 0}) == Vec2{0, 0});
    CHECK(flow.successor_of({0, 0}) == Vec2{0, 1});
    CHECK(flow.successor_of({0, 1}) == Vec2{0, 2});
    CHECK_FALSE(flow.successor_of({0, 2}).has_value());  // south of (0,2) is wall
    CHECK_FALSE(flow.successor_of({1, 1}).has_value());  // empty cell
    CHECK(flow.underground_pairs.empty());
}

TEST_CASE("belts push onto empty and obstacle cells alike") {
    ProblemMatrix p(3, {{1, 1}}, {2, 0}, {0, 2}, Direction::North, Direction::South);
    SolutionMatrix s = from_codes(3, {{{1, 0}, 3}, {{0, 0}, 2}});
    FlowGraph flow = build_flow(p, s);
    CHECK(flow.successor_of({1, 0}) == Vec2{1, 1});  // facing the obstacle
    CHECK(flow.successor_of({0, 0}) == Vec2{1, 0});
}

TEST_CASE("underground pairing is greedy, gap-limited and direction-matched") {
    ProblemMatrix p6 = make_benchmark(6, false, 0);

    SUBCASE("nearest same-facing cell within five steps pairs") {
        SolutionMatrix s = from_codes(6, {{{0, 0}, 6}, {{5, 0}, 6}});  // east, gap 4
        FlowGraph flow = build_flow(p6, s);
        REQUIRE(flow.underground_pairs.size() == 1);
        CHECK(flow.underground_pairs[0] == std::pair{Vec2{0, 0}, Vec2{5, 0}});
        CHECK(flow.successor_of({0, 0}) == Vec2{5, 0});
        CHECK_FALSE(flow.successor_of({5, 0}).has_value());  // exit faces the wall
    }

    SUBCASE("a gap of five cells is out of reach") {
        ProblemMatrix p12 = make_benchmark(12, false, 0);
        SolutionMatrix s = from_codes(12, {{{0, 0}, 6}, {{6, 0}, 6}});
        FlowGraph flow = build_flow(p12, s);
        CHECK(flow.underground_pairs.empty());
        CHECK_FALSE(flow.successor_of({0, 0}).has_value());
        CHECK_FALSE(flow.successor_of({6, 0}).has_value());
    }

    SUBCASE("facing must match") {
        SolutionMatrix s = from_codes(6, {{{0, 0}, 6}, {{2, 0}, 8}});  // east meets west
        FlowGraph flow = build_flow(p6, s);
        CHECK(flow.underground_pairs.empty());
    }

    SUBCASE("an entry may serve as a later pair's exit") {
        // West-facing chain: the scan pairs (2,0)->(0,0) first, then (4,0)
        // reuses (2,0) as its exit, forming a relay.
        SolutionMatrix s = from_codes(6, {{{0, 0}, 8}, {{2, 0}, 8}, {{4, 0}, 8}});
        FlowGraph flow = build_flow(p6, s);
        REQUIRE(flow.underground_pairs.size() == 2);
        CHECK(flow.underground_pairs[0] == std::pair{Vec2{2, 0}, Vec2{0, 0}});
        CHECK(flow.underground_pairs[1] == std::pair{Vec2{4, 0}, Vec2{2, 0}});
        CHECK(flow.successor_of({4, 0}) == Vec2{2, 0});
        CHECK(flow.successor_of({2, 0}) == Vec2{0, 0});
    }

    SUBCASE("surface belts may cross the gap") {
        SolutionMatrix s = from_codes(6, {{{0, 0}, 6}, {{3, 0}, 6}, {{1, 0}, 3}});
        FlowGraph flow = build_flow(p6, s);
        REQUIRE(flow.underground_pairs.size() == 1);
        CHECK(flow.underground_pairs[0] == std::pair{Vec2{0, 0}, Vec2{3, 0}});
        CHECK(flow.successor_of({1, 0}) == Vec2{1, 1});  // the crossing belt is unaffected
    }
}

TEST_CASE("corner route hand trace: four insertions, three deliveries") {
    ProblemMatrix p = make_benchmark(3, false, 0);
    SimConfig cfg;
    cfg.ticks = 12;
    cfg.inserter_period = 3;
    CHECK(insertion_attempts(cfg) == 4);

    SimResult r = simulate(p, corner_route(), cfg);
    CHECK(r.items_in == 4);
    CHECK(r.items_out == 3);
    CHECK(r.items_on_grid == 1);
    CHECK(evaluate(p, corner_route(), cfg, Weights{}) == 0.875);
    CHECK(result_csv_row(r, cfg, Weights{}) == "4,3,0.8750000000");
}

TEST_CASE("extraction ignores the facing of the cell at the output port") {
    ProblemMatrix p = make_benchmark(3, false, 0);
    SolutionMatrix s = corner_route();
    s.set({0, 2}, 4);  // west, pointing at the wall
    SimConfig cfg;
    cfg.ticks = 12;
    cfg.inserter_period = 3;
    SimResult r = simulate(p, s, cfg);
    CHECK(r.items_in == 4);
    CHECK(r.items_out == 3);
}

TEST_CASE("a lone belt away from the input port moves nothing") {
    ProblemMatrix p = make_benchmark(3, false, 0);
    SolutionMatrix s = from_codes(3, {{{1, 1}, 2}});
    SimResult r = simulate(p, s, SimConfig{});
    CHECK(r.items_in == 0);
    CHECK(r.items_out == 0);
}

TEST_CASE("a dead-end route can absorb every insertion without delivering") {
    // Hook: (2,0)W (1,0)S (1,1)W (0,1)N; items pile up on the hook and the
    // empty cell (0,0), so all four insertions succeed and none deliver.
    ProblemMatrix p = make_benchmark(3, false, 0);
    SolutionMatrix s = from_codes(3, {{{2, 0}, 4}, {{1, 0}, 3}, {{1, 1}, 4}, {{0, 1}, 1}});
    SimConfig cfg;
    cfg.ticks = 12;
    cfg.inserter_period = 3;
    SimResult r = simulate(p, s, cfg);
    CHECK(r.items_in == insertion_attempts(cfg));
    CHECK(r.items_out == 0);
    CHECK(evaluate(p, s, cfg, Weights{}) == 0.5);  // the input weight, exactly
}

TEST_CASE("items slide onto a belt regardless of its facing and stall there") {
    ProblemMatrix p = make_benchmark(3, false, 0);
    // (2,0) pushes west into a north-facing belt whose own successor is wall.
    SolutionMatrix s = from_codes(3, {{{2, 0}, 4}, {{1, 0}, 1}});
    SimConfig cfg;
    cfg.ticks = 12;
    cfg.inserter_period = 3;
    SimResult r = simulate(p, s, cfg);
    CHECK(r.items_in == 2);
    CHECK(r.items_out == 0);
    CHECK(r.items_on_grid == 2);
}

TEST_CASE("a preloaded two-cell cycle keeps its items circulating") {
    ProblemMatrix p = make_benchmark(3, false, 0);
    SolutionMatrix s = from_codes(3, {{{2, 0}, 4}, {{1, 0}, 4}, {{0, 0}, 2}});
    SimConfig cfg;
    cfg.ticks = 40;
    cfg.inserter_period = 3;
    cfg.record_occupancy = true;
    SimResult r = simulate(p, s, cfg);
    CHECK(r.items_in == 3);
    CHECK(r.items_out == 0);
    CHECK(r.items_on_grid == 3);
    // Steady state: the cycle cells and the blocked feeder stay occupied.
    const std::vector<Vec2> full{{0, 0}, {1, 0}, {2, 0}};
    CHECK(r.occupancy.back() == full);
    CHECK(r.occupancy[r.occupancy.size() - 2] == full);
}

TEST_CASE("underground traversal costs one tick regardless of the gap") {
    ProblemMatrix p = make_benchmark(3, false, 0);
    // (2,0)S (2,1)S then an underground hop (2,2) -> (0,2) onto the output.
    SolutionMatrix s = from_codes(3, {{{2, 0}, 3}, {{2, 1}, 3}, {{2, 2}, 8}, {{0, 2}, 8}});
    SimConfig cfg;
    cfg.ticks = 12;
    cfg.inserter_period = 3;
    SimResult r = simulate(p, s, cfg);
    CHECK(r.items_in == 4);
    CHECK(r.items_out == 3);
    CHECK(evaluate(p, s, cfg, Weights{}) == 0.875);
}

TEST_CASE("an unpaired underground at the input port accepts items but goes nowhere") {
    ProblemMatrix p = make_benchmark(3, false, 0);
    SolutionMatrix s = from_codes(3, {{{2, 0}, 5}});
    SimConfig cfg;
    cfg.ticks = 12;
    cfg.inserter_period = 3;
    SimResult r = simulate(p, s, cfg);
    CHECK(r.items_in == 1);
    CHECK(r.items_out == 0);
}

TEST_CASE("simulation refuses infeasible solutions and bad configs") {
    ProblemMatrix p = make_benchmark(3, false, 0);
    CHECK_THROWS_AS(simulate(p, SolutionMatrix(3), SimConfig{}), std::invalid_argument);

    ProblemMatrix walled(3, {{1, 1}}, {2, 0}, {0, 2}, Direction::North, Direction::South);
    SolutionMatrix on_obstacle = from_codes(3, {{{1, 1}, 2}});
    CHECK_THROWS_AS(simulate(walled, on_obstacle, SimConfig{}), std::invalid_argument);

    SimConfig bad;
    bad.ticks = 0;
    CHECK_THROWS_AS(simulate(p, corner_route(), bad), std::invalid_argument);
    bad = SimConfig{};
    bad.inserter_period = 0;
    CHECK_THROWS_AS(simulate(p, corner_route(), bad), std::invalid_argument);
    bad = SimConfig{};
    bad.belt_capacity = 2;
    CHECK_THROWS_AS(simulate(p, corner_route(), bad), std::invalid_argument);
}

TEST_CASE("evaluation scores infeasible overlays zero and feasible ones positive") {
    ProblemMatrix p = make_benchmark(3, false, 0);
    CHECK(evaluate(p, SolutionMatrix(3), SimConfig{}, Weights{}) == 0.0);

    SolutionMatrix idle = from_codes(3, {{{1, 1}, 2}});
    CHECK(evaluate(p, idle, SimConfig{}, Weights{}) == kFeasibleFloor);

    ProblemMatrix walled(3, {{1, 1}}, {2, 0}, {0, 2}, Direction::North, Direction::South);
    CHECK(evaluate(walled, idle, SimConfig{}, Weights{}) == 0.0);
}

TEST_CASE("weights must be a convex split") {
    ProblemMatrix p = make_benchmark(3, false, 0);
    Weights bad{0.7, 0.2};
    CHECK_THROWS_AS(evaluate(p, corner_route(), SimConfig{}, bad), std::invalid_argument);
    Weights negative{1.5, -0.5};
    CHECK_THROWS_AS(evaluate(p, corner_route(), SimConfig{}, negative), std::invalid_argument);
    Weights output_only{1.0, 0.0};
    CHECK(evaluate(p, corner_route(), SimConfig{}, output_only) > 0.9);
}

TEST_CASE("random runs conserve items and respect the count bounds") {
    Rng rng(31);
    SimConfig cfg;
    cfg.record_occupancy = true;
    for (int trial = 0; trial < 300; ++trial) {
        const int size = (trial % 2 == 0) ? 3 : 6;
        ProblemMatrix p = make_benchmark(size, trial % 4 < 2, 17 + trial);
        SolutionMatrix s = random_solution(size, rng);
        if (!check_feasible(p, s).feasible) continue;
        SimResult r = simulate(p, s, cfg);
        CHECK(r.items_in == r.items_out + r.items_on_grid);
        CHECK(r.items_out >= 0);
        CHECK(r.items_out <= r.items_in);
        CHECK(r.items_in <= insertion_attempts(cfg));
        REQUIRE(static_cast<int>(r.occupancy.size()) == cfg.ticks);
        CHECK(static_cast<int>(r.occupancy.back().size()) == r.items_on_grid);
    }
}

TEST_CASE("movement resolution does not depend on traversal order") {
    Rng rng(77);
    SimConfig cfg;
    for (int trial = 0; trial < 120; ++trial) {
        const int size = (trial % 2 == 0) ? 3 : 6;
        ProblemMatrix p = make_benchmark(size, false, 3 + trial);
        SolutionMatrix s = random_solution(size, rng, 0.3);
        if (!check_feasible(p, s).feasible) continue;
        SimResult base = simulate(p, s, cfg);
        std::vector<int> order(static_cast<std::size_t>(size) * size);
        std::iota(order.begin(), order.end(), 0);
        for (int shuffle = 0; shuffle < 4; ++shuffle) {
            rng.shuffle(order);
            SimResult other = simulate_ordered(p, s, cfg, order);
            CHECK(other.items_in == base.items_in);
            CHECK(other.items_out == base.items_out);
            CHECK(other.items_on_grid == base.items_on_grid);
        }
    }
}

TEST_CASE("simulation is deterministic") {
    ProblemMatrix p = make_benchmark(6, true, 5);
    Rng rng(8);
    SolutionMatrix s = random_solution(6, rng, 0.3);
    for (int y = 0; y < 6; ++y)
        for (int x = 0; x < 6; ++x)
            if (p.has_obstacle({x, y})) s.set({x, y}, 0);
    s.set({5, 0}, 2);
    REQUIRE(check_feasible(p, s).feasible);
    SimConfig cfg;
    cfg.record_occupancy = true;
    SimResult a = simulate(p, s, cfg);
    SimResult b = simulate(p, s, cfg);
    CHECK(a.items_in == b.items_in);
    CHECK(a.items_out == b.items_out);
    CHECK(a.occupancy == b.occupancy);
}

TEST_CASE("insertion attempts round up") {
    SimConfig cfg;
    cfg.ticks = 10;
    cfg.inserter_period = 3;
    CHECK(insertion_attempts(cfg) == 4);  // t = 0, 3, 6, 9
    cfg.ticks = 120;
    CHECK(insertion_attempts(cfg) == 40);
    cfg.ticks = 1;
    CHECK(insertion_attempts(cfg) == 1);
}
