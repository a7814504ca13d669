#include "beltforge/sim.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <stdexcept>

namespace beltforge {

std::optional<Vec2> FlowGraph::successor_of(Vec2 p) const {
    const int s = successor[static_cast<std::size_t>(p.y) * size + p.x];
    if (s < 0) return std::nullopt;
    return Vec2{s % size, s / size};
}

FlowGraph build_flow(const ProblemMatrix& problem, const SolutionMatrix& solution) {
    const int n = problem.size();
    FlowGraph flow;
    flow.size = n;
    flow.successor.assign(static_cast<std::size_t>(n) * n, -1);

    auto idx = [n](Vec2 p) { return p.y * n + p.x; };
    auto code_at = [&](int i) { return solution.cells()[static_cast<std::size_t>(i)]; };

    // Pair undergrounds first: scan row-major, each still-unpaired cell
    // claims the nearest same-facing underground within five cells ahead
    // that is not already someone's exit.
    std::vector<std::uint8_t> is_entry(flow.successor.size(), 0);
    std::vector<std::uint8_t> is_exit(flow.successor.size(), 0);
    for (int i = 0; i < n * n; ++i) {
        if (!is_underground(code_at(i)) || is_entry[i] || is_exit[i]) continue;
        const Vec2 p{i % n, i / n};
        const Direction d = code_direction(code_at(i));
        for (int k = 1; k <= 5; ++k) {
            const Vec2 q{p.x + k * direction_dx(d), p.y + k * direction_dy(d)};
            if (!problem.in_bounds(q)) break;
            const int j = idx(q);
            if (!is_underground(code_at(j)) || code_direction(code_at(j)) != d || is_exit[j]) continue;
            is_entry[i] = 1;
            is_exit[j] = 1;
            flow.underground_pairs.push_back({p, q});
            flow.successor[i] = j;
            break;
        }
    }

    for (int i = 0; i < n * n; ++i) {
        const int code = code_at(i);
        if (is_belt(code) || (is_underground(code) && is_exit[i] && !is_entry[i])) {
            const Vec2 p{i % n, i / n};
            const Vec2 q = step(p, code_direction(code));
            if (problem.in_bounds(q)) flow.successor[i] = idx(q);
        }
        // Unpaired undergrounds keep successor -1: they are dead terrain.
    }
    return flow;
}

int insertion_attempts(const SimConfig& config) {
    return (config.ticks - 1) / config.inserter_period + 1;
}

namespace {

void validate_config(const SimConfig& config) {
    if (config.ticks < 1) throw std::invalid_argument("ticks must be positive");
    if (config.inserter_period < 1) throw std::invalid_argument("inserter period must be positive");
    if (config.belt_capacity != 1) throw std::invalid_argument("belt capacity is fixed at 1");
}

void validate_weights(const Weights& weights) {
    if (weights.output_weight < 0 || weights.input_weight < 0)
        throw std::invalid_argument("weights must be non-negative");
    if (std::abs(weights.output_weight + weights.input_weight - 1.0) > 1e-9)
        throw std::invalid_argument("weights must sum to 1");
}

// Per-tick movement resolution. An occupied cell moves when its target is
// free (or being vacated), and it is the row-major-first occupied
// predecessor of that target; the priority rule makes the outcome
// independent of the order cells are visited in. A chain of such decisions
// closing on itself is a fully occupied cycle, which rotates.
struct MoveResolver {
    const std::vector<int>& successor;
    const std::vector<int>& pred_start;   // CSR layout over predecessor lists
    const std::vector<int>& pred_cells;
    std::vector<std::uint8_t>& occupied;
    std::vector<std::uint8_t> state;

    enum : std::uint8_t { kUnknown = 0, kVisiting, kMoves, kStays };

    explicit MoveResolver(const std::vector<int>& succ, const std::vector<int>& ps,
                          const std::vector<int>& pc, std::vector<std::uint8_t>& occ)
        : successor(succ), pred_start(ps), pred_cells(pc), occupied(occ),
          state(succ.size(), kUnknown) {}

    int winner(int target) const {
        for (int k = pred_start[target]; k < pred_start[target + 1]; ++k) {
            if (occupied[pred_cells[k]]) return pred_cells[k];
        }
        return -1;
    }

    bool moves(int cell) {
        if (state[cell] == kMoves) return true;
        if (state[cell] == kStays) return false;
        if (state[cell] == kVisiting) return true;  // cycle closed: rotate
        state[cell] = kVisiting;
        bool ok = false;
        const int target = successor[cell];
        if (target >= 0 && winner(target) == cell) {
            ok = occupied[target] ? moves(target) : true;
        }
        state[cell] = ok ? kMoves : kStays;
        return ok;
    }
};

SimResult run_simulation(const ProblemMatrix& problem, const SolutionMatrix& solution,
                         const SimConfig& config, const std::vector<int>* visit_order) {
    validate_config(config);
    const FeasibilityReport report = check_feasible(problem, solution);
    if (!report.feasible)
        throw std::invalid_argument("simulate requires a feasible solution (got " +
                                    constraint_name(report.violated.front()) + " violation)");

    const int n = problem.size();
    const int cells = n * n;
    const FlowGraph flow = build_flow(problem, solution);

    // Predecessor lists in CSR form, cell indices ascending within each list.
    std::vector<int> pred_start(cells + 1, 0);
    for (int i = 0; i < cells; ++i)
        if (flow.successor[i] >= 0) ++pred_start[flow.successor[i] + 1];
    for (int i = 0; i < cells; ++i) pred_start[i + 1] += pred_start[i];
    std::vector<int> pred_cells(pred_start[cells]);
    {
        std::vector<int> cursor(pred_start.begin(), pred_start.end() - 1);
        for (int i = 0; i < cells; ++i)
            if (flow.successor[i] >= 0) pred_cells[cursor[flow.successor[i]]++] = i;
    }

    std::vector<int> default_order(cells);
    std::iota(default_order.begin(), default_order.end(), 0);
    const std::vector<int>& order = visit_order ? *visit_order : default_order;

    auto idx = [n](Vec2 p) { return p.y * n + p.x; };
    const int insert_idx = idx(problem.insert_at());
    const int extract_idx = idx(problem.extract_at());
    const bool insert_is_transport = is_transport(solution.cells()[insert_idx]);
    const bool extract_is_transport = is_transport(solution.cells()[extract_idx]);

    std::vector<std::uint8_t> occupied(cells, 0);
    std::vector<std::uint8_t> next(cells, 0);
    SimResult result;

    for (int t = 0; t < config.ticks; ++t) {
        if (extract_is_transport && occupied[extract_idx]) {
            occupied[extract_idx] = 0;
            ++result.items_out;
        }

        MoveResolver resolver(flow.successor, pred_start, pred_cells, occupied);
        std::fill(next.begin(), next.end(), 0);
        for (int cell : order) {
            if (!occupied[cell]) continue;
            next[resolver.moves(cell) ? flow.successor[cell] : cell] = 1;
        }
        occupied.swap(next);

        if (t % config.inserter_period == 0 && insert_is_transport && !occupied[insert_idx]) {
            occupied[insert_idx] = 1;
            ++result.items_in;
        }

        if (config.record_occupancy) {
            std::vector<Vec2> snapshot;
            for (int i = 0; i < cells; ++i)
                if (occupied[i]) snapshot.push_back({i % n, i / n});
            result.occupancy.push_back(std::move(snapshot));
        }
    }

    result.items_on_grid = static_cast<int>(std::count(occupied.begin(), occupied.end(), 1));
    if (result.items_in != result.items_out + result.items_on_grid)
        throw std::logic_error("item conservation violated");
    return result;
}

std::string format_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.10f", v);
    return buf;
}

}  // namespace

SimResult simulate(const ProblemMatrix& problem, const SolutionMatrix& solution,
                   const SimConfig& config) {
    return run_simulation(problem, solution, config, nullptr);
}

SimResult simulate_ordered(const ProblemMatrix& problem, const SolutionMatrix& solution,
                           const SimConfig& config, const std::vector<int>& visit_order) {
    return run_simulation(problem, solution, config, &visit_order);
}

double fitness_from_counts(int items_in, int items_out, const SimConfig& config,
                           const Weights& weights) {
    validate_config(config);
    validate_weights(weights);
    const double raw = (weights.output_weight * items_out + weights.input_weight * items_in) /
                       insertion_attempts(config);
    return std::max(raw, kFeasibleFloor);
}

double evaluate(const ProblemMatrix& problem, const SolutionMatrix& solution,
                const SimConfig& config, const Weights& weights) {
    validate_config(config);
    validate_weights(weights);
    if (!check_feasible(problem, solution).feasible) return 0.0;
    const SimResult result = simulate(problem, solution, config);
    return fitness_from_counts(result.items_in, result.items_out, config, weights);
}

std::string result_csv_row(const SimResult& result, const SimConfig& config,
                           const Weights& weights) {
    return std::to_string(result.items_in) + "," + std::to_string(result.items_out) + "," +
           format_double(fitness_from_counts(result.items_in, result.items_out, config, weights));
}

}  // namespace beltforge
