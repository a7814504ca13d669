#include "beltforge/qgp.hpp"

#include <chrono>
#include <cstdio>
#include <sstream>
#include <stdexcept>

namespace beltforge {

namespace {

void validate_config(const QgpConfig& c) {
    if (c.population < 2) throw std::invalid_argument("population must hold at least two genomes");
    if (c.generations < 1) throw std::invalid_argument("need at least one generation");
    if (c.max_length < 1) throw std::invalid_argument("max length must be positive");
    if (c.init_length < 1 || c.init_length > c.max_length)
        throw std::invalid_argument("init length must lie in [1, max length]");
    if (c.tournament < 1) throw std::invalid_argument("tournament size must be positive");
    for (double p : {c.operator_prob, c.replace_prob, c.insert_prob, c.delete_prob})
        if (p < 0.0 || p > 1.0) throw std::invalid_argument("probabilities must lie in [0, 1]");
}

Token random_token(int size, const OperatorSet& ops, const QgpConfig& config, Rng& rng) {
    if (rng.bernoulli(config.operator_prob)) {
        const auto& all = ops.all();
        return Token::op(all[static_cast<std::size_t>(rng.below(static_cast<int>(all.size())))].name);
    }
    switch (rng.below(3)) {
        case 0: return Token::object(rng.uniform_int(1, 8));
        case 1: {
            const int x = static_cast<int>(rng.below(size));
            const int y = static_cast<int>(rng.below(size));
            return Token::position({x, y});
        }
        default: return Token::matrix();
    }
}

int tournament_pick(const std::vector<double>& fitness, int rounds, Rng& rng) {
    int best = rng.below(static_cast<int>(fitness.size()));
    for (int i = 1; i < rounds; ++i) {
        const int contender = rng.below(static_cast<int>(fitness.size()));
        if (fitness[contender] > fitness[best]) best = contender;
    }
    return best;
}

}  // namespace

void OperatorSet::add(OperatorSpec spec) {
    if (find(spec.name)) throw std::invalid_argument("duplicate operator: " + spec.name);
    specs_.push_back(std::move(spec));
}

const OperatorSpec* OperatorSet::find(const std::string& name) const {
    for (const auto& spec : specs_)
        if (spec.name == name) return &spec;
    return nullptr;
}

const OperatorSet& OperatorSet::standard() {
    static const OperatorSet set = [] {
        OperatorSet s;
        s.add({"place", 1, 1,
               [](const ProblemMatrix& problem, const SolutionMatrix& in,
                  const std::vector<Vec2>& pos, const std::vector<int>& obj) {
                   return op_place(problem, in, pos[0], obj[0]);
               }});
        s.add({"connect", 2, 0,
               [](const ProblemMatrix& problem, const SolutionMatrix& in,
                  const std::vector<Vec2>& pos, const std::vector<int>&) {
                   return op_connect(problem, in, pos[0], pos[1]);
               }});
        return s;
    }();
    return set;
}

SolutionMatrix op_place(const ProblemMatrix& problem, const SolutionMatrix& in, Vec2 pos,
                        int code) {
    SolutionMatrix out = in;
    if (!problem.has_obstacle(pos)) out.set(pos, code);
    return out;
}

SolutionMatrix op_connect(const ProblemMatrix& problem, const SolutionMatrix& in, Vec2 a, Vec2 b) {
    std::vector<Vec2> path;
    const int sx = (b.x > a.x) - (b.x < a.x);
    for (int x = a.x; x != b.x; x += sx) path.push_back({x, a.y});
    const int sy = (b.y > a.y) - (b.y < a.y);
    for (int y = a.y; y != b.y; y += sy) path.push_back({b.x, y});
    path.push_back(b);

    SolutionMatrix out = in;
    auto leg = [](Vec2 from, Vec2 to) {
        if (to.x > from.x) return Direction::East;
        if (to.x < from.x) return Direction::West;
        if (to.y > from.y) return Direction::South;
        return Direction::North;
    };
    for (std::size_t i = 0; i < path.size(); ++i) {
        Direction facing;
        if (i + 1 < path.size()) facing = leg(path[i], path[i + 1]);
        else if (path.size() > 1) facing = leg(path[i - 1], path[i]);
        else facing = Direction::South;  // degenerate single-cell run
        if (!problem.has_obstacle(path[i])) out.set(path[i], belt_code(facing));
    }
    return out;
}

SolutionMatrix interpret(const Genome& genome, const ProblemMatrix& problem,
                         const OperatorSet& ops) {
    const int n = problem.size();
    struct Operand {
        TokenKind kind;
        int code;
        Vec2 pos;
        bool consumed;
    };
    std::vector<Operand> operands;
    std::vector<SolutionMatrix> matrices;
    matrices.emplace_back(n);  // seed overlay
    std::vector<const OperatorSpec*> queue;

    for (const Token& t : genome) {
        switch (t.kind) {
            case TokenKind::Operator: {
                const OperatorSpec* spec = ops.find(t.name);
                if (!spec) throw std::invalid_argument("unknown operator: " + t.name);
                queue.push_back(spec);
                break;
            }
            case TokenKind::Object:
                if (t.code < 1 || t.code > 8)
                    throw std::invalid_argument("object code out of range");
                operands.push_back({t.kind, t.code, {0, 0}, false});
                break;
            case TokenKind::Position:
                if (t.pos.x < 0 || t.pos.x >= n || t.pos.y < 0 || t.pos.y >= n)
                    throw std::invalid_argument("position outside the playfield");
                operands.push_back({t.kind, 0, t.pos, false});
                break;
            case TokenKind::Matrix:
                matrices.emplace_back(n);
                break;
        }
    }

    std::vector<bool> done(queue.size(), false);
    bool fired_any = false;
    bool progress = true;
    while (progress) {
        progress = false;
        for (std::size_t qi = 0; qi < queue.size(); ++qi) {
            if (done[qi]) continue;
            const OperatorSpec* spec = queue[qi];
            std::vector<std::size_t> pos_at;
            std::vector<std::size_t> obj_at;
            for (std::size_t oi = 0; oi < operands.size(); ++oi) {
                if (operands[oi].consumed) continue;
                if (operands[oi].kind == TokenKind::Position &&
                    pos_at.size() < static_cast<std::size_t>(spec->position_inputs))
                    pos_at.push_back(oi);
                else if (operands[oi].kind == TokenKind::Object &&
                         obj_at.size() < static_cast<std::size_t>(spec->object_inputs))
                    obj_at.push_back(oi);
            }
            if (pos_at.size() < static_cast<std::size_t>(spec->position_inputs) ||
                obj_at.size() < static_cast<std::size_t>(spec->object_inputs))
                continue;  // starved; may bind after a later fire frees nothing, so stays idle

            std::vector<Vec2> positions;
            for (std::size_t oi : pos_at) {
                positions.push_back(operands[oi].pos);
                operands[oi].consumed = true;
            }
            std::vector<int> objects;
            for (std::size_t oi : obj_at) {
                objects.push_back(operands[oi].code);
                operands[oi].consumed = true;
            }
            matrices.push_back(spec->apply(problem, matrices.back(), positions, objects));
            done[qi] = true;
            fired_any = true;
            progress = true;
            break;  // restart the scan so earlier idle operators see the new state
        }
    }
    return fired_any ? matrices.back() : SolutionMatrix(n);
}

QgpResult run_qgp(const ProblemMatrix& problem, EvalBackend& backend, const SimConfig& sim,
                  const Weights& weights, const QgpConfig& config, std::uint64_t seed,
                  const OperatorSet& ops) {
    validate_config(config);
    if (ops.all().empty()) throw std::invalid_argument("operator set is empty");
    const auto start = std::chrono::steady_clock::now();
    Rng rng(seed);
    const int n = problem.size();

    std::vector<Genome> pop(static_cast<std::size_t>(config.population));
    for (auto& g : pop) {
        g.reserve(static_cast<std::size_t>(config.init_length));
        for (int i = 0; i < config.init_length; ++i) g.push_back(random_token(n, ops, config, rng));
    }

    QgpResult result;
    for (int gen = 1; gen <= config.generations; ++gen) {
        std::vector<double> fitness(pop.size());
        double sum = 0.0;
        int best_idx = 0;
        for (std::size_t i = 0; i < pop.size(); ++i) {
            fitness[i] = backend.evaluate(problem, interpret(pop[i], problem, ops), sim, weights);
            sum += fitness[i];
            if (fitness[i] > fitness[static_cast<std::size_t>(best_idx)])
                best_idx = static_cast<int>(i);
        }
        if (gen == 1 || fitness[static_cast<std::size_t>(best_idx)] > result.best_fitness) {
            result.best_genome = pop[static_cast<std::size_t>(best_idx)];
            result.best_fitness = fitness[static_cast<std::size_t>(best_idx)];
        }
        const double wall_ms =
            std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start)
                .count();
        result.trace.push_back(
            {gen, result.best_fitness, sum / static_cast<double>(pop.size()), wall_ms});
        if (gen == config.generations) break;

        std::vector<Genome> next;
        next.reserve(pop.size());
        for (int c = 0; c < config.population - 1; ++c) {
            const Genome& p1 = pop[static_cast<std::size_t>(tournament_pick(fitness, config.tournament, rng))];
            const Genome& p2 = pop[static_cast<std::size_t>(tournament_pick(fitness, config.tournament, rng))];
            const int c1 = rng.uniform_int(1, static_cast<int>(p1.size()));
            const int c2 = rng.uniform_int(0, static_cast<int>(p2.size()));
            Genome child(p1.begin(), p1.begin() + c1);
            child.insert(child.end(), p2.begin() + c2, p2.end());
            if (static_cast<int>(child.size()) > config.max_length)
                child.resize(static_cast<std::size_t>(config.max_length));
            for (auto& t : child)
                if (rng.bernoulli(config.replace_prob)) t = random_token(n, ops, config, rng);
            if (rng.bernoulli(config.insert_prob) &&
                static_cast<int>(child.size()) < config.max_length) {
                const int at = rng.uniform_int(0, static_cast<int>(child.size()));
                child.insert(child.begin() + at, random_token(n, ops, config, rng));
            }
            if (rng.bernoulli(config.delete_prob) && child.size() > 1)
                child.erase(child.begin() + rng.below(static_cast<int>(child.size())));
            next.push_back(std::move(child));
        }
        next.push_back(pop[static_cast<std::size_t>(best_idx)]);  // elite survives untouched
        pop = std::move(next);
    }
    result.best = interpret(result.best_genome, problem, ops);
    return result;
}

std::string qgp_trace_csv(const std::vector<QgpTraceRow>& trace) {
    std::string out = "generation,best_fitness,mean_fitness\n";
    char buf[128];
    for (const auto& row : trace) {
        std::snprintf(buf, sizeof(buf), "%d,%.10f,%.10f\n", row.generation, row.best_fitness,
                      row.mean_fitness);
        out += buf;
    }
    return out;
}

std::string format_genome(const Genome& genome) {
    std::string out;
    for (const Token& t : genome) {
        switch (t.kind) {
            case TokenKind::Operator: out += "OP " + t.name + "\n"; break;
            case TokenKind::Object: out += "OBJ " + std::to_string(t.code) + "\n"; break;
            case TokenKind::Position:
                out += "POS " + std::to_string(t.pos.x) + " " + std::to_string(t.pos.y) + "\n";
                break;
            case TokenKind::Matrix: out += "MAT\n"; break;
        }
    }
    return out;
}

Genome parse_genome(const std::string& text) {
    Genome genome;
    std::istringstream in(text);
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        std::istringstream fields(line);
        std::string kind;
        fields >> kind;
        const auto fail = [&](const char* why) {
            throw std::invalid_argument("genome line " + std::to_string(line_no) + ": " + why);
        };
        if (kind == "OP") {
            std::string name;
            if (!(fields >> name)) fail("missing operator name");
            genome.push_back(Token::op(name));
        } else if (kind == "OBJ") {
            int code = 0;
            if (!(fields >> code)) fail("missing object code");
            if (code < 1 || code > 8) fail("object code out of range");
            genome.push_back(Token::object(code));
        } else if (kind == "POS") {
            int x = 0;
            int y = 0;
            if (!(fields >> x >> y)) fail("position needs two coordinates");
            if (x < 0 || y < 0) fail("coordinates must be non-negative");
            genome.push_back(Token::position({x, y}));
        } else if (kind == "MAT") {
            genome.push_back(Token::matrix());
        } else {
            fail("unknown token");
        }
        std::string extra;
        if (fields >> extra) fail("trailing input");
    }
    return genome;
}

}  // namespace beltforge
