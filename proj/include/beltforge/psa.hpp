#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "beltforge/backend.hpp"
#include "beltforge/grid.hpp"
#include "beltforge/rng.hpp"
#include "beltforge/sim.hpp"

namespace beltforge {

struct PsaConfig {
    double initial_temperature = 1.0;
    double final_temperature = 0.0094;
    double cooling_rate = 0.9724;
    int chains = 20;
    int iterations = 0;  // 0 derives the count from the cooling schedule
};

// Iterations needed to cool initial_temperature to final_temperature or below.
int iteration_count(double initial_temperature, double final_temperature, double cooling_rate);

// Copy of `solution` with k cells rewritten to fresh codes; k shrinks with
// the temperature, down to single-cell moves near the end of the schedule.
SolutionMatrix select_neighbor(const SolutionMatrix& solution, double temperature,
                               const PsaConfig& config, Rng& rng);

// Metropolis rule for a move that lowers fitness.
bool accept_worse(double temperature, double new_fitness, double old_fitness, Rng& rng);

struct PsaTraceRow {
    int iteration;
    double temperature;
    double best_fitness;  // best across all chains so far
    double wall_ms;
};

struct PsaResult {
    SolutionMatrix best{1};
    double best_fitness = 0.0;
    std::vector<double> chain_best;
    std::vector<PsaTraceRow> trace;
};

// Independent annealing chains sharing one cooling schedule; chain c draws
// from Rng(seed ^ c), so a chain's trajectory only depends on its own seed.
PsaResult run_psa(const ProblemMatrix& problem, EvalBackend& backend, const SimConfig& sim,
                  const Weights& weights, const PsaConfig& config, std::uint64_t seed);

std::string psa_trace_csv(const std::vector<PsaTraceRow>& trace);

}  // namespace beltforge
