#pragma once

#include "beltforge/grid.hpp"
#include "beltforge/sim.hpp"

namespace beltforge {

// Scores a candidate overlay for a problem. Implementations must agree on
// the fitness scale so optimizers can swap one for another.
class EvalBackend {
public:
    virtual ~EvalBackend() = default;
    virtual double evaluate(const ProblemMatrix& problem, const SolutionMatrix& solution,
                            const SimConfig& config, const Weights& weights) = 0;
};

// In-process backend running the tick simulation.
class SimBackend final : public EvalBackend {
public:
    double evaluate(const ProblemMatrix& problem, const SolutionMatrix& solution,
                    const SimConfig& config, const Weights& weights) override;
};

}  // namespace beltforge
