#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "beltforge/backend.hpp"
#include "beltforge/grid.hpp"
#include "beltforge/rng.hpp"
#include "beltforge/sim.hpp"

namespace beltforge {

enum class Action {
    MoveNorth,
    MoveEast,
    MoveSouth,
    MoveWest,
    PlaceNorth,  // belt code 1
    PlaceEast,   // belt code 2
    PlaceSouth,  // belt code 3
    PlaceWest    // belt code 4
};
inline constexpr int kActionCount = 8;

// Agent walking a playfield, placing surface belts under itself. Episodes
// last exactly `episode_steps` steps; stepping a finished episode throws.
class BeltEnv {
public:
    explicit BeltEnv(const ProblemMatrix& problem, int episode_steps = 20);

    // 3x3 window centered on the agent, row-major; cells outside the
    // playfield read as the wall code -2, obstacles as -1, everything else
    // as the working overlay code.
    std::array<int, 9> observe() const;

    void step(Action action);
    bool done() const { return timestep_ >= episode_steps_; }
    int timestep() const { return timestep_; }
    Vec2 agent() const { return agent_; }
    const SolutionMatrix& working() const { return working_; }

private:
    const ProblemMatrix* problem_;
    SolutionMatrix working_;
    Vec2 agent_;
    int timestep_ = 0;
    int episode_steps_;
};

// Register machine mapping an observation to an action. Sources read the 9
// window slots, then the 8 action registers, then the 8 memory registers;
// destinations are the action and memory registers. Division by zero yields
// 1, and skipgt jumps over the next instruction when src1 > src2.
enum class Opcode { Add, Sub, Mul, Div, Copy, SkipGt };

struct Instruction {
    Opcode op;
    int dst;   // 0..7 action, 8..15 memory
    int src1;  // 0..8 window, 9..16 action, 17..24 memory
    int src2;
    bool operator==(const Instruction&) const = default;
};

inline constexpr int kMinProgram = 8;
inline constexpr int kMaxProgram = 256;

struct Policy {
    std::vector<Instruction> program;
    std::vector<double> fitness_history;  // newest last, capped by the caller
    bool operator==(const Policy&) const = default;
};

// Runs the program on one observation. Action registers start at zero each
// call; `memory` persists across calls within an episode. Returns the argmax
// action register, lowest index on ties.
Action policy_action(const std::vector<Instruction>& program, const std::array<int, 9>& window,
                     std::array<double, 8>& memory);

// Plays one full episode from a fresh environment and zeroed memory, scores
// the final overlay through the backend, and appends the reward to the
// policy's fitness history (dropping the oldest entry past `history_cap`).
// `final_working` receives the end-of-episode overlay when non-null.
double run_episode(Policy& policy, const ProblemMatrix& problem, EvalBackend& backend,
                   const SimConfig& sim, const Weights& weights, int history_cap = 100,
                   SolutionMatrix* final_working = nullptr);

// Mean of the recorded episode rewards; zero when none have been recorded.
double policy_fitness(const Policy& policy);

struct ErlConfig {
    int population = 50;  // even, at least 4
    int generations = 100;
    int episodes_per_gen = 5;
    int history_cap = 100;
    double crossover_prob = 0.5;
    double replace_prob = 0.05;
    double insert_prob = 0.1;
    double delete_prob = 0.1;
    int init_min = 8;
    int init_max = 32;
};

struct ErlTraceRow {
    int generation;
    double best_fitness;
    // Distinct problems on which the best policy delivered at least one item,
    // counted over its remembered episodes (the fitness history window).
    int unique_solved;
    double wall_ms;
};

struct ErlResult {
    Policy best;
    double best_fitness = 0.0;
    std::vector<ErlTraceRow> trace;
};

// Generational evolution over policies: each generation draws fresh problems,
// scores every policy on all of them, keeps the better half, and refills with
// mutated crossovers or clones.
ErlResult run_erl(int size, bool with_obstacles, EvalBackend& backend, const SimConfig& sim,
                  const Weights& weights, const ErlConfig& config, std::uint64_t seed);

std::string erl_trace_csv(const std::vector<ErlTraceRow>& trace);

// One instruction per line: "<opcode> <dst> <src1> <src2>" with named
// registers, e.g. "add a0 in4 m2".
std::string format_policy(const std::vector<Instruction>& program);
std::vector<Instruction> parse_policy(const std::string& text);

}  // namespace beltforge
