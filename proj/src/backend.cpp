#include "beltforge/backend.hpp"

namespace beltforge {

double SimBackend::evaluate(const ProblemMatrix& problem, const SolutionMatrix& solution,
                            const SimConfig& config, const Weights& weights) {
    return beltforge::evaluate(problem, solution, config, weights);
}

}  // namespace beltforge
