#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "beltforge/grid.hpp"

namespace beltforge {

// Successor relation of a solution overlay. A belt pushes onto the adjacent
// cell it faces unless that cell lies outside the playfield; a paired
// underground entry pushes onto its exit; an unpaired underground pushes
// nowhere.
struct FlowGraph {
    int size = 0;
    std::vector<int> successor;                         // cell index, -1 when absent
    std::vector<std::pair<Vec2, Vec2>> underground_pairs;  // (entry, exit)

    std::optional<Vec2> successor_of(Vec2 p) const;
};

FlowGraph build_flow(const ProblemMatrix& problem, const SolutionMatrix& solution);

struct SimConfig {
    int ticks = 120;
    int inserter_period = 3;
    int belt_capacity = 1;  // the model only supports one item per cell
    bool record_occupancy = false;
};

// Number of insertion attempts over a run, and the fitness normalizer.
int insertion_attempts(const SimConfig& config);

struct SimResult {
    int items_in = 0;
    int items_out = 0;
    int items_on_grid = 0;                  // still travelling when time ran out
    std::vector<std::vector<Vec2>> occupancy;  // per-tick snapshots when recorded
};

struct Weights {
    double output_weight = 0.5;  // rewards delivered items
    double input_weight = 0.5;   // rewards items taken from the input chest
};

// One CSV row "items_in,items_out,fitness" under the given weights.
std::string result_csv_row(const SimResult& result, const SimConfig& config, const Weights& weights);

// Deterministic tick simulation. Throws std::invalid_argument when the
// solution is infeasible for the problem or the config is malformed.
SimResult simulate(const ProblemMatrix& problem, const SolutionMatrix& solution,
                   const SimConfig& config);

// Same simulation but resolving movement in the given cell visiting order;
// results are order-independent by construction, and tests exercise that.
SimResult simulate_ordered(const ProblemMatrix& problem, const SolutionMatrix& solution,
                           const SimConfig& config, const std::vector<int>& visit_order);

// Fitness shared by every evaluation backend. Feasible evaluations are
// strictly positive so a zero score always means an infeasible overlay.
inline constexpr double kFeasibleFloor = 1e-9;

double fitness_from_counts(int items_in, int items_out, const SimConfig& config,
                           const Weights& weights);

// Full evaluation: infeasible solutions score exactly 0 without simulating.
double evaluate(const ProblemMatrix& problem, const SolutionMatrix& solution,
                const SimConfig& config, const Weights& weights);

}  // namespace beltforge
