// End-to-end acceptance checks, one printed line per criterion. The binary
// exits with the number of failed criteria, so a zero exit is a full pass.
// Set BELTFORGE_NIGHTLY=1 to run the exhaustive small-board enumeration
// instead of the sampled tier.

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <filesystem>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "beltforge/backend.hpp"
#include "beltforge/bench.hpp"
#include "beltforge/erl.hpp"
#include "beltforge/grid.hpp"
#include "beltforge/psa.hpp"
#include "beltforge/qgp.hpp"
#include "beltforge/rcon.hpp"
#include "beltforge/rng.hpp"
#include "beltforge/sim.hpp"
#include "fake_rcon_server.hpp"

using namespace beltforge;

namespace {

constexpr std::uint64_t kSeedStep = 0x9E3779B97F4A7C15ull;

using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point t0) {
    return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
}

std::string fmt(const char* pattern, ...) {
    char buffer[512];
    va_list args;
    va_start(args, pattern);
    std::vsnprintf(buffer, sizeof buffer, pattern, args);
    va_end(args);
    return buffer;
}

struct Outcome {
    bool pass = false;
    std::string details;
};

Outcome pass(std::string details) { return {true, std::move(details)}; }
Outcome fail(std::string details) { return {false, std::move(details)}; }

double median(std::vector<double> values) {
    std::sort(values.begin(), values.end());
    const std::size_t n = values.size();
    return n % 2 ? values[n / 2] : 0.5 * (values[n / 2 - 1] + values[n / 2]);
}

SolutionMatrix corner_route() {
    SolutionMatrix s(3);
    s.set({2, 0}, 4);
    s.set({1, 0}, 4);
    s.set({0, 0}, 3);
    s.set({0, 1}, 3);
    s.set({0, 2}, 3);
    return s;
}

// A solver's answer counts as solved only when it actually delivers an item.
bool delivers(const ProblemMatrix& problem, const SolutionMatrix& solution, const SimConfig& sim) {
    if (!check_feasible(problem, solution).feasible) return false;
    return simulate(problem, solution, sim).items_out >= 1;
}

SolutionMatrix random_feasible(const ProblemMatrix& problem, Rng& rng) {
    const int n = problem.size();
    SolutionMatrix s(n);
    for (int y = 0; y < n; ++y)
        for (int x = 0; x < n; ++x)
            if (!problem.has_obstacle({x, y})) s.set({x, y}, rng.uniform_int(0, kMaxCode));
    for (int y = 0; y < n; ++y)
        for (int x = 0; x < n; ++x)
            if (s.at({x, y}) > 0) return s;
    for (int y = 0; y < n; ++y)
        for (int x = 0; x < n; ++x)
            if (!problem.has_obstacle({x, y})) {
                s.set({x, y}, 1);
                return s;
            }
    throw std::logic_error("instance with no free cell");
}

// 1. Infeasible overlays score exactly zero with the right classification and
//    every feasible overlay lands in (0,1], swept over all one-cell overlays.
Outcome constraint_gating() {
    const auto t0 = Clock::now();
    const SimConfig sim;
    const Weights weights;
    int feasible_cases = 0;
    int obstacle_cases = 0;
    for (const bool obstacles : {false, true}) {
        const ProblemMatrix problem = make_benchmark(3, obstacles, 0);
        const SolutionMatrix empty(3);
        const FeasibilityReport empty_report = check_feasible(problem, empty);
        if (empty_report.feasible || empty_report.violated.empty() ||
            constraint_name(empty_report.violated.front()) != "HC2")
            return fail("all-empty overlay not rejected as HC2");
        if (evaluate(problem, empty, sim, weights) != 0.0)
            return fail("all-empty overlay fitness is not exactly 0");
        for (int y = 0; y < 3; ++y)
            for (int x = 0; x < 3; ++x)
                for (int code = 1; code <= kMaxCode; ++code) {
                    SolutionMatrix s(3);
                    s.set({x, y}, code);
                    const FeasibilityReport report = check_feasible(problem, s);
                    const double fitness = evaluate(problem, s, sim, weights);
                    if (problem.has_obstacle({x, y})) {
                        ++obstacle_cases;
                        if (report.feasible || report.violated.empty() ||
                            constraint_name(report.violated.front()) != "HC1")
                            return fail(fmt("obstacle overlap at (%d,%d) not rejected as HC1", x, y));
                        if (fitness != 0.0)
                            return fail(fmt("obstacle overlap at (%d,%d) fitness is not exactly 0", x, y));
                    } else {
                        ++feasible_cases;
                        if (!report.feasible)
                            return fail(fmt("single placement at (%d,%d) wrongly infeasible", x, y));
                        if (!(fitness > 0.0 && fitness <= 1.0))
                            return fail(fmt("feasible fitness %.12g outside (0,1]", fitness));
                    }
                }
    }
    const double ms = ms_since(t0);
    if (ms >= 1000.0) return fail(fmt("took %.0f ms, cap is 1000 ms", ms));
    return pass(fmt("%d feasible and %d obstacle placements gated exactly in %.1f ms",
                    feasible_cases, obstacle_cases, ms));
}

// 2. The five-belt corner route on the empty 3x3 board, 12 ticks, period 3.
Outcome corner_route_trace() {
    const ProblemMatrix problem = make_benchmark(3, false, 0);
    const SolutionMatrix route = corner_route();
    SimConfig sim;
    sim.ticks = 12;
    sim.inserter_period = 3;
    const Weights weights;
    const auto t0 = Clock::now();
    const SimResult result = simulate(problem, route, sim);
    const double fitness = evaluate(problem, route, sim, weights);
    const double ms = ms_since(t0);
    if (result.items_in != 4 || result.items_out != 3)
        return fail(fmt("expected i=4 o=3, got i=%d o=%d", result.items_in, result.items_out));
    if (fitness != 0.875) return fail(fmt("fitness %.12g is not exactly 0.875", fitness));
    if (ms >= 1.0) return fail(fmt("took %.3f ms, cap is 1 ms", ms));
    return pass(fmt("i=4 o=3 fitness=0.875 in %.3f ms", ms));
}

// 3. Item conservation and throughput bounds over random feasible overlays on
//    every benchmark board.
Outcome item_conservation() {
    const auto t0 = Clock::now();
    const SimConfig sim;
    const int cap = insertion_attempts(sim);
    Rng rng(kSeedStep);
    int total = 0;
    for (const int size : {3, 6, 12})
        for (const bool obstacles : {false, true}) {
            const ProblemMatrix problem = make_benchmark(size, obstacles, 0);
            for (int r = 0; r < 1667; ++r) {
                const SolutionMatrix s = random_feasible(problem, rng);
                const SimResult result = simulate(problem, s, sim);
                ++total;
                if (result.items_in != result.items_out + result.items_on_grid)
                    return fail(fmt("conservation broken on %dx%d%s: i=%d o=%d left=%d", size, size,
                                    obstacles ? "o" : "", result.items_in, result.items_out,
                                    result.items_on_grid));
                if (result.items_out > result.items_in || result.items_in > cap)
                    return fail(fmt("throughput bound broken on %dx%d%s: i=%d o=%d cap=%d", size,
                                    size, obstacles ? "o" : "", result.items_in, result.items_out,
                                    cap));
            }
        }
    const double ms = ms_since(t0);
    if (ms >= 30000.0) return fail(fmt("took %.1f s, cap is 30 s", ms / 1000.0));
    return pass(fmt("%d random overlays conserved items in %.1f s", total, ms / 1000.0));
}

// 4. No surface-belt overlay on the empty 3x3 board beats the corner route.
//    The nightly tier enumerates all 5^9 overlays; the default tier samples.
Outcome small_board_oracle() {
    const auto t0 = Clock::now();
    const ProblemMatrix problem = make_benchmark(3, false, 0);
    const SimConfig sim;
    const Weights weights;
    const double corner = evaluate(problem, corner_route(), sim, weights);
    if (corner != 0.9875) return fail(fmt("corner route fitness %.12g is not 0.9875", corner));
    const char* nightly_env = std::getenv("BELTFORGE_NIGHTLY");
    const bool nightly = nightly_env && *nightly_env && std::string_view(nightly_env) != "0";
    double max_seen = 0.0;
    long count = 0;
    if (nightly) {
        std::array<int, 9> codes{};
        for (;;) {
            SolutionMatrix s(3);
            for (int i = 0; i < 9; ++i) s.set({i % 3, i / 3}, codes[i]);
            const double fitness = evaluate(problem, s, sim, weights);
            ++count;
            if (fitness > 1.0) return fail(fmt("enumerated fitness %.12g exceeds 1", fitness));
            max_seen = std::max(max_seen, fitness);
            int digit = 0;
            while (digit < 9 && ++codes[digit] == 5) codes[digit++] = 0;
            if (digit == 9) break;
        }
        if (max_seen != corner)
            return fail(fmt("exhaustive max %.12g differs from corner route %.12g", max_seen, corner));
    } else {
        Rng rng(kSeedStep * 7);
        for (count = 0; count < 100000; ++count) {
            SolutionMatrix s(3);
            for (int y = 0; y < 3; ++y)
                for (int x = 0; x < 3; ++x) s.set({x, y}, rng.uniform_int(0, 4));
            const double fitness = evaluate(problem, s, sim, weights);
            if (fitness > 1.0) return fail(fmt("sampled fitness %.12g exceeds 1", fitness));
            max_seen = std::max(max_seen, fitness);
        }
        if (max_seen > corner)
            return fail(fmt("sampled overlay %.12g beats the corner route %.12g", max_seen, corner));
    }
    const double ms = ms_since(t0);
    if (ms >= 1800000.0) return fail(fmt("took %.0f s, cap is 1800 s", ms / 1000.0));
    return pass(fmt("%s tier, %ld overlays, max fitness %.6f, corner route optimal, %.1f s",
                    nightly ? "exhaustive" : "sampled", count, max_seen, ms / 1000.0));
}

// 5. Cooling-schedule length and the Metropolis acceptance probability.
Outcome annealing_schedule() {
    if (iteration_count(1.0, 0.01, 0.95) != 90)
        return fail(fmt("iteration_count(1.0, 0.01, 0.95) = %d, want 90",
                        iteration_count(1.0, 0.01, 0.95)));
    if (iteration_count(1.0, 0.001, 0.9) != 66)
        return fail(fmt("iteration_count(1.0, 0.001, 0.9) = %d, want 66",
                        iteration_count(1.0, 0.001, 0.9)));
    Rng rng(kSeedStep * 3);
    const int draws = 100000;
    int accepted = 0;
    for (int k = 0; k < draws; ++k)
        if (accept_worse(0.5, 0.4, 0.6, rng)) ++accepted;
    const double rate = static_cast<double>(accepted) / draws;
    const double expected = std::exp(-0.4);
    if (std::fabs(rate - expected) >= 0.01)
        return fail(fmt("acceptance rate %.4f not within 0.01 of %.4f", rate, expected));
    return pass(fmt("schedule lengths 90 and 66 exact, acceptance rate %.4f vs %.4f", rate, expected));
}

// 6. Annealing routinely solves the small board and routinely misses the big
//    one under the same budget.
Outcome annealing_capability() {
    const auto t0 = Clock::now();
    SimBackend backend;
    const SimConfig sim;
    const Weights weights;
    const PsaConfig config;  // derives the 167-iteration schedule
    const ProblemMatrix small = make_benchmark(3, false, 0);
    const ProblemMatrix large = make_benchmark(12, false, 0);
    int small_hits = 0;
    int large_hits = 0;
    for (int k = 0; k < 20; ++k) {
        const std::uint64_t seed = kSeedStep * static_cast<std::uint64_t>(k + 1);
        if (delivers(small, run_psa(small, backend, sim, weights, config, seed).best, sim))
            ++small_hits;
        if (delivers(large, run_psa(large, backend, sim, weights, config, seed).best, sim))
            ++large_hits;
    }
    const double ms = ms_since(t0);
    if (small_hits < 16) return fail(fmt("3x3 solved in only %d/20 runs, need 16", small_hits));
    if (large_hits > 4) return fail(fmt("12x12 solved in %d/20 runs, allowed at most 4", large_hits));
    if (ms >= 600000.0) return fail(fmt("took %.0f s, cap is 600 s", ms / 1000.0));
    return pass(fmt("3x3 solved %d/20, 12x12 solved %d/20, %.1f s", small_hits, large_hits,
                    ms / 1000.0));
}

// 7. Genome search solves both small boards at high rate and is never the
//    weaker solver on the 3x3 board across repeated comparisons.
Outcome genome_search_capability() {
    const auto t0 = Clock::now();
    SimBackend backend;
    const SimConfig sim;
    const Weights weights;
    const QgpConfig config;  // 167 generations, population 30
    const ProblemMatrix small = make_benchmark(3, false, 0);
    const ProblemMatrix medium = make_benchmark(6, false, 0);
    int small_hits = 0;
    int medium_hits = 0;
    for (int k = 0; k < 20; ++k) {
        const std::uint64_t seed = kSeedStep * static_cast<std::uint64_t>(k + 1);
        if (delivers(small, run_qgp(small, backend, sim, weights, config, seed).best, sim))
            ++small_hits;
        if (delivers(medium, run_qgp(medium, backend, sim, weights, config, seed).best, sim))
            ++medium_hits;
    }
    if (small_hits < 18) return fail(fmt("3x3 solved in only %d/20 runs, need 18", small_hits));
    if (medium_hits < 14) return fail(fmt("6x6 solved in only %d/20 runs, need 14", medium_hits));
    PsaConfig psa_config;
    psa_config.iterations = 167;
    int wins = 0;
    for (int rep = 0; rep < 10; ++rep) {
        std::vector<double> psa_finals;
        std::vector<double> qgp_finals;
        for (int r = 0; r < 5; ++r) {
            const std::uint64_t seed =
                kSeedStep * static_cast<std::uint64_t>(100 + rep) + static_cast<std::uint64_t>(r);
            psa_finals.push_back(run_psa(small, backend, sim, weights, psa_config, seed).best_fitness);
            qgp_finals.push_back(run_qgp(small, backend, sim, weights, config, seed).best_fitness);
        }
        if (median(qgp_finals) >= median(psa_finals)) ++wins;
    }
    const double ms = ms_since(t0);
    if (wins < 8) return fail(fmt("genome medians beat annealing in only %d/10 repetitions", wins));
    if (ms >= 1800000.0) return fail(fmt("took %.0f s, cap is 1800 s", ms / 1000.0));
    return pass(fmt("3x3 %d/20, 6x6 %d/20, median wins %d/10, %.1f s", small_hits, medium_hits,
                    wins, ms / 1000.0));
}

// 8. Environment and policy mechanics: fixed episode length, the 9-cell view
//    with walls past the board edge, deterministic argmax, exact replay.
Outcome episode_mechanics() {
    const ProblemMatrix problem = make_benchmark(3, false, 0);
    BeltEnv env(problem);
    int steps = 0;
    while (!env.done()) {
        env.step(Action::MoveNorth);
        ++steps;
    }
    if (steps != 20) return fail(fmt("episode ran %d steps, want exactly 20", steps));
    bool threw = false;
    try {
        env.step(Action::MoveNorth);
    } catch (const std::logic_error&) {
        threw = true;
    }
    if (!threw) return fail("stepping a finished episode did not throw");

    BeltEnv corner_env(problem);
    corner_env.step(Action::MoveNorth);
    corner_env.step(Action::MoveWest);
    if (corner_env.agent() != Vec2{0, 0}) return fail("agent did not reach the corner");
    const std::array<int, 9> view = corner_env.observe();
    const std::array<int, 9> expected{-2, -2, -2, -2, 0, 0, -2, 0, 0};
    if (view != expected)
        return fail(fmt("corner view {%d,%d,%d,%d,%d,%d,%d,%d,%d} differs from walls-outside shape",
                        view[0], view[1], view[2], view[3], view[4], view[5], view[6], view[7],
                        view[8]));

    const std::array<int, 9> window{3, 0, 0, 0, 0, 0, 0, 0, 0};
    std::array<double, 8> memory{};
    if (policy_action({}, window, memory) != Action::MoveNorth)
        return fail("all-zero registers did not break ties toward action 0");
    const std::vector<Instruction> tied{{Opcode::Add, 2, 0, 0}, {Opcode::Add, 5, 0, 0}};
    memory.fill(0.0);
    if (policy_action(tied, window, memory) != Action::MoveSouth)
        return fail("equal maxima did not break ties toward the lower action index");

    // Counts calls in m0, then walks north, east, and keeps placing a south
    // belt on the input port, so the episode earns a nonzero reward.
    const std::vector<Instruction> program{
        {Opcode::Sub, 15, 24, 24},  // m7 = 0
        {Opcode::Div, 14, 24, 24},  // m6 = 0/0 -> 1
        {Opcode::Add, 8, 17, 23},   // m0 += 1, the call counter
        {Opcode::Add, 13, 23, 23},  // m5 = 2
        {Opcode::Add, 12, 22, 23},  // m4 = 3
        {Opcode::Copy, 6, 17, 0},   // a6 = count
        {Opcode::Sub, 0, 21, 17},   // a0 = 3 - count
        {Opcode::Sub, 9, 17, 23},   // m1 = count - 1
        {Opcode::Sub, 10, 21, 17},  // m2 = 3 - count
        {Opcode::Mul, 11, 18, 19},  // m3 = m1 * m2
        {Opcode::Add, 1, 20, 20},   // a1 = 2 * m3, peaks at count 2
    };
    SimBackend backend;
    const SimConfig sim;
    const Weights weights;
    Policy first{program, {}};
    Policy second{program, {}};
    const double reward_a = run_episode(first, problem, backend, sim, weights);
    const double reward_b = run_episode(second, problem, backend, sim, weights);
    if (reward_a <= 0.0) return fail("scripted walk earned no reward");
    if (reward_a != reward_b)
        return fail(fmt("replay reward %.17g differs from %.17g", reward_a, reward_b));
    if (first.fitness_history != second.fitness_history)
        return fail("replay recorded a different fitness history");
    return pass(fmt("20-step episodes, walls-outside view, deterministic argmax, replay reward %.10g",
                    reward_a));
}

// 9. Evolved policies generalize across freshly drawn boards, and obstacles
//    do not make that easier.
Outcome policy_generalization() {
    const auto t0 = Clock::now();
    SimBackend backend;
    const SimConfig sim;
    const Weights weights;
    const ErlConfig config;
    std::vector<double> plain_solved;
    std::vector<double> obstacle_solved;
    for (int k = 0; k < 10; ++k) {
        const std::uint64_t seed = kSeedStep * static_cast<std::uint64_t>(k + 1);
        const ErlResult plain = run_erl(3, false, backend, sim, weights, config, seed);
        const ErlResult obst = run_erl(3, true, backend, sim, weights, config, seed);
        plain_solved.push_back(plain.trace.back().unique_solved);
        obstacle_solved.push_back(obst.trace.back().unique_solved);
    }
    const auto hits = static_cast<int>(
        std::count_if(plain_solved.begin(), plain_solved.end(), [](double v) { return v >= 2.0; }));
    const double plain_median = median(plain_solved);
    const double obstacle_median = median(obstacle_solved);
    const double ms = ms_since(t0);
    if (hits < 5) return fail(fmt("best policy solved >=2 boards in only %d/10 runs", hits));
    if (plain_median < obstacle_median)
        return fail(fmt("median solved %.1f without obstacles < %.1f with", plain_median,
                        obstacle_median));
    if (ms >= 3600000.0) return fail(fmt("took %.0f s, cap is 3600 s", ms / 1000.0));
    return pass(fmt(">=2 boards solved in %d/10 runs, medians %.1f vs %.1f, %.1f s", hits,
                    plain_median, obstacle_median, ms / 1000.0));
}

// 10. Wire format golden bytes, round-trip property, auth failure, and the
//     client timeout, all against an in-process scripted server.
Outcome wire_protocol() {
    const std::string wire = encode_packet(1, kRconAuth, "pass");
    const std::string golden{"\x0e\x00\x00\x00\x01\x00\x00\x00\x03\x00\x00\x00"
                             "pass\x00\x00",
                             18};
    if (wire != golden) return fail("auth packet does not match the 18-byte golden form");

    Rng rng(kSeedStep * 5);
    for (int k = 0; k < 10000; ++k) {
        RconPacket packet;
        packet.id = rng.uniform_int(-1000000000, 1000000000);
        packet.ptype = rng.uniform_int(0, 5);
        std::string body(static_cast<std::size_t>(rng.uniform_int(0, 80)), '\0');
        for (char& c : body) c = static_cast<char>(rng.uniform_int(1, 255));
        packet.body = body;
        if (decode_packet(encode_packet(packet.id, packet.ptype, packet.body)) != packet)
            return fail(fmt("round-trip mismatch on packet %d", k));
    }

    {
        FakeRconServer server([](const RconPacket&) -> std::vector<RconPacket> {
            return {{-1, kRconExec, ""}};
        });
        RconClient client("127.0.0.1", server.port(), 2.0);
        bool threw = false;
        try {
            client.authenticate("wrong");
        } catch (const AuthError&) {
            threw = true;
        }
        if (!threw) return fail("rejected auth did not raise AuthError");
    }

    double waited = 0.0;
    {
        FakeRconServer server([](const RconPacket&) -> std::vector<RconPacket> { return {}; });
        RconClient client("127.0.0.1", server.port());
        const auto t0 = Clock::now();
        bool threw = false;
        try {
            client.authenticate("pass");
        } catch (const TimeoutError&) {
            threw = true;
        }
        waited = ms_since(t0) / 1000.0;
        if (!threw) return fail("silent server did not raise TimeoutError");
        if (waited < 4.0 || waited > 8.0)
            return fail(fmt("default timeout fired after %.1f s, expected about 5 s", waited));
    }
    return pass(fmt("golden bytes, 10000 round-trips, auth rejection, timeout after %.1f s", waited));
}

std::string drop_last_column(const std::string& csv) {
    std::string out;
    std::size_t start = 0;
    while (start < csv.size()) {
        std::size_t end = csv.find('\n', start);
        if (end == std::string::npos) end = csv.size();
        const std::string_view line(csv.data() + start, end - start);
        const std::size_t comma = line.rfind(',');
        out.append(line.substr(0, comma == std::string_view::npos ? line.size() : comma));
        out.push_back('\n');
        start = end + 1;
    }
    return out;
}

// 11. Two executions of the full suite with one fixed config produce
//     byte-identical result tables once wall-clock columns are dropped.
Outcome suite_determinism() {
    const auto t0 = Clock::now();
    SuiteConfig config;
    config.run.budget = 8;
    config.run.replicates = 2;
    config.run.seed = 2026;
    config.run.erl.population = 8;
    config.run.erl.episodes_per_gen = 2;
    config.jobs = 4;
    const auto base = std::filesystem::temp_directory_path() / "beltforge_acceptance";
    std::filesystem::remove_all(base);
    std::array<std::string, 2> traces;
    std::array<std::string, 2> curves;
    std::array<std::string, 2> summaries;
    for (int pass_index = 0; pass_index < 2; ++pass_index) {
        const std::filesystem::path out = base / ("run" + std::to_string(pass_index));
        std::filesystem::create_directories(out);
        config.out_dir = out.string();
        const SuiteResult result = run_suite(config);
        for (const SuiteCellResult& cell : result.cells)
            if (!cell.ok)
                return fail(fmt("cell %s/%s failed: %s", cell.algorithm.c_str(),
                                cell.problem.c_str(), cell.error.c_str()));
        traces[pass_index] = drop_last_column(read_text_file(result.trace_path));
        curves[pass_index] = read_text_file(result.curves_path);
        summaries[pass_index] = read_text_file(result.summary_path);
    }
    std::filesystem::remove_all(base);
    if (traces[0] != traces[1]) return fail("trace tables differ between executions");
    if (curves[0] != curves[1]) return fail("curve tables differ between executions");
    if (summaries[0] != summaries[1]) return fail("summary tables differ between executions");
    const double ms = ms_since(t0);
    return pass(fmt("14 cells x 2 executions byte-identical without timing columns, %.1f s",
                    ms / 1000.0));
}

}  // namespace

int main() {
    struct Entry {
        int number;
        const char* name;
        Outcome (*check)();
    };
    const Entry entries[] = {
        {1, "constraint gating", constraint_gating},
        {2, "corner-route hand trace", corner_route_trace},
        {3, "item conservation", item_conservation},
        {4, "small-board oracle", small_board_oracle},
        {5, "annealing schedule", annealing_schedule},
        {6, "annealing capability split", annealing_capability},
        {7, "genome search capability", genome_search_capability},
        {8, "episode mechanics", episode_mechanics},
        {9, "policy generalization", policy_generalization},
        {10, "wire protocol", wire_protocol},
        {11, "suite determinism", suite_determinism},
    };
    int failures = 0;
    for (const Entry& entry : entries) {
        Outcome outcome;
        try {
            outcome = entry.check();
        } catch (const std::exception& ex) {
            outcome = fail(std::string("unexpected exception: ") + ex.what());
        }
        std::printf("[%s] %2d %s: %s\n", outcome.pass ? "PASS" : "FAIL", entry.number, entry.name,
                    outcome.details.c_str());
        std::fflush(stdout);
        if (!outcome.pass) ++failures;
    }
    std::printf("%d/11 criteria passed\n", 11 - failures);
    return failures;
}
