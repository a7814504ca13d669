#include "beltforge/psa.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <stdexcept>
#include <unordered_map>

namespace beltforge {

namespace {

constexpr double kInitEmptyProb = 0.7;

void validate_schedule(double t0, double tf, double cr) {
    if (!(t0 > 0.0)) throw std::invalid_argument("initial temperature must be positive");
    if (!(tf > 0.0) || tf > t0)
        throw std::invalid_argument("final temperature must lie in (0, initial]");
    if (!(cr > 0.0) || cr >= 1.0) throw std::invalid_argument("cooling rate must lie in (0, 1)");
}

void validate_config(const PsaConfig& c) {
    validate_schedule(c.initial_temperature, c.final_temperature, c.cooling_rate);
    if (c.chains < 1) throw std::invalid_argument("need at least one chain");
    if (c.iterations < 0) throw std::invalid_argument("iterations must be non-negative");
}

struct CellsHash {
    std::size_t operator()(const std::vector<int>& cells) const {
        std::size_t h = 1469598103934665603ull;
        for (int v : cells) {
            h ^= static_cast<std::size_t>(static_cast<unsigned int>(v));
            h *= 1099511628211ull;
        }
        return h;
    }
};

SolutionMatrix random_init(int size, Rng& rng) {
    SolutionMatrix s(size);
    for (int y = 0; y < size; ++y)
        for (int x = 0; x < size; ++x)
            if (!rng.bernoulli(kInitEmptyProb)) s.set({x, y}, rng.uniform_int(1, 8));
    return s;
}

}  // namespace

int iteration_count(double initial_temperature, double final_temperature, double cooling_rate) {
    validate_schedule(initial_temperature, final_temperature, cooling_rate);
    const double steps =
        std::ceil(std::log(final_temperature / initial_temperature) / std::log(cooling_rate));
    return steps < 0.0 ? 0 : static_cast<int>(steps);
}

SolutionMatrix select_neighbor(const SolutionMatrix& solution, double temperature,
                               const PsaConfig& config, Rng& rng) {
    const int n_cells = solution.size() * solution.size();
    const double scaled = temperature / config.initial_temperature;
    const int k_max = std::max(1, static_cast<int>(std::ceil(n_cells * scaled)));
    const int k = rng.uniform_int(1, std::min(k_max, n_cells));
    SolutionMatrix neighbor = solution;
    for (int idx : rng.sample_indices(n_cells, k)) {
        const Vec2 pos{idx % solution.size(), idx / solution.size()};
        const int current = neighbor.at(pos);
        const int r = rng.below(8);
        neighbor.set(pos, r + (r >= current ? 1 : 0));
    }
    return neighbor;
}

bool accept_worse(double temperature, double new_fitness, double old_fitness, Rng& rng) {
    return rng.uniform_double() < std::exp((new_fitness - old_fitness) / temperature);
}

PsaResult run_psa(const ProblemMatrix& problem, EvalBackend& backend, const SimConfig& sim,
                  const Weights& weights, const PsaConfig& config, std::uint64_t seed) {
    validate_config(config);
    const int iters = config.iterations > 0
                          ? config.iterations
                          : iteration_count(config.initial_temperature, config.final_temperature,
                                            config.cooling_rate);
    const auto start = std::chrono::steady_clock::now();

    struct Chain {
        Rng rng;
        SolutionMatrix current{1};
        double current_fitness = 0.0;
        double best_fitness = 0.0;
        std::unordered_map<std::vector<int>, double, CellsHash> memo;
    };

    auto score = [&](Chain& ch, const SolutionMatrix& s) {
        auto it = ch.memo.find(s.cells());
        if (it != ch.memo.end()) return it->second;
        const double f = backend.evaluate(problem, s, sim, weights);
        ch.memo.emplace(s.cells(), f);
        return f;
    };

    PsaResult result;
    std::vector<Chain> chains;
    chains.reserve(static_cast<std::size_t>(config.chains));
    for (int c = 0; c < config.chains; ++c) {
        Chain ch{Rng(seed ^ static_cast<std::uint64_t>(c)), SolutionMatrix{1}, 0.0, 0.0, {}};
        ch.current = random_init(problem.size(), ch.rng);
        ch.current_fitness = score(ch, ch.current);
        ch.best_fitness = ch.current_fitness;
        if (chains.empty() || ch.current_fitness > result.best_fitness) {
            result.best = ch.current;
            result.best_fitness = ch.current_fitness;
        }
        chains.push_back(std::move(ch));
    }

    double temperature = config.initial_temperature;
    for (int it = 1; it <= iters; ++it) {
        temperature *= config.cooling_rate;
        for (auto& ch : chains) {
            SolutionMatrix neighbor = select_neighbor(ch.current, temperature, config, ch.rng);
            const double f = score(ch, neighbor);
            const bool accepted = f >= ch.current_fitness ||
                                  accept_worse(temperature, f, ch.current_fitness, ch.rng);
            if (accepted) {
                ch.current = std::move(neighbor);
                ch.current_fitness = f;
                if (f > ch.best_fitness) ch.best_fitness = f;
                if (f > result.best_fitness) {
                    result.best = ch.current;
                    result.best_fitness = f;
                }
            }
        }
        const double wall_ms =
            std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start)
                .count();
        result.trace.push_back({it, temperature, result.best_fitness, wall_ms});
    }

    result.chain_best.reserve(chains.size());
    for (const auto& ch : chains) result.chain_best.push_back(ch.best_fitness);
    return result;
}

std::string psa_trace_csv(const std::vector<PsaTraceRow>& trace) {
    std::string out = "iteration,temperature,best_fitness\n";
    char buf[128];
    for (const auto& row : trace) {
        std::snprintf(buf, sizeof(buf), "%d,%.10f,%.10f\n", row.iteration, row.temperature,
                      row.best_fitness);
        out += buf;
    }
    return out;
}

}  // namespace beltforge
