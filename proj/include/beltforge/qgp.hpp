#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "beltforge/backend.hpp"
#include "beltforge/grid.hpp"
#include "beltforge/rng.hpp"
#include "beltforge/sim.hpp"

namespace beltforge {

enum class TokenKind { Operator, Object, Position, Matrix };

// One genome element: either an operator call or an operand it may consume.
struct Token {
    TokenKind kind = TokenKind::Matrix;
    std::string name;  // operator tokens only
    int code = 0;      // object tokens only
    Vec2 pos{0, 0};    // position tokens only

    static Token op(std::string op_name) { return {TokenKind::Operator, std::move(op_name), 0, {0, 0}}; }
    static Token object(int object_code) { return {TokenKind::Object, {}, object_code, {0, 0}}; }
    static Token position(Vec2 p) { return {TokenKind::Position, {}, 0, p}; }
    static Token matrix() { return {TokenKind::Matrix, {}, 0, {0, 0}}; }
    bool operator==(const Token&) const = default;
};

using Genome = std::vector<Token>;

struct OperatorSpec {
    std::string name;
    int position_inputs = 0;
    int object_inputs = 0;
    std::function<SolutionMatrix(const ProblemMatrix&, const SolutionMatrix&,
                                 const std::vector<Vec2>&, const std::vector<int>&)>
        apply;
};

// Registry of grid-editing operators the interpreter can dispatch to.
class OperatorSet {
public:
    static const OperatorSet& standard();  // place and connect

    void add(OperatorSpec spec);
    const OperatorSpec* find(const std::string& name) const;
    const std::vector<OperatorSpec>& all() const { return specs_; }

private:
    std::vector<OperatorSpec> specs_;
};

// Writes `code` at `pos` unless an obstacle occupies it.
SolutionMatrix op_place(const ProblemMatrix& problem, const SolutionMatrix& in, Vec2 pos, int code);

// Lays an L-shaped belt run from `a` to `b`: horizontal leg first, then the
// vertical leg owning the corner; every cell faces its next step and the
// endpoint keeps its approach direction. Obstacle cells are skipped.
SolutionMatrix op_connect(const ProblemMatrix& problem, const SolutionMatrix& in, Vec2 a, Vec2 b);

// Runs a genome: operands are collected up front (plus one empty-overlay
// seed), then operators fire front-to-back whenever their inputs bind, each
// output becoming the freshest matrix. Returns the last output, or an empty
// overlay when nothing fired.
SolutionMatrix interpret(const Genome& genome, const ProblemMatrix& problem,
                         const OperatorSet& ops = OperatorSet::standard());

struct QgpConfig {
    int population = 30;
    int generations = 167;
    int init_length = 40;
    int max_length = 100;
    int tournament = 5;
    double operator_prob = 0.2;  // share of operator tokens in fresh material
    double replace_prob = 0.02;  // per token
    double insert_prob = 0.01;   // per genome
    double delete_prob = 0.01;   // per genome
};

struct QgpTraceRow {
    int generation;
    double best_fitness;
    double mean_fitness;
    double wall_ms;
};

struct QgpResult {
    Genome best_genome;
    SolutionMatrix best{1};
    double best_fitness = 0.0;
    std::vector<QgpTraceRow> trace;
};

QgpResult run_qgp(const ProblemMatrix& problem, EvalBackend& backend, const SimConfig& sim,
                  const Weights& weights, const QgpConfig& config, std::uint64_t seed,
                  const OperatorSet& ops = OperatorSet::standard());

std::string qgp_trace_csv(const std::vector<QgpTraceRow>& trace);

// One token per line: "OP <name>", "OBJ <code>", "POS <x> <y>", "MAT".
std::string format_genome(const Genome& genome);
Genome parse_genome(const std::string& text);

}  // namespace beltforge
