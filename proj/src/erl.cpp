#include "beltforge/erl.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <numeric>
#include <sstream>
#include <stdexcept>
#include <unordered_set>

namespace beltforge {

namespace {

constexpr int kEpisodeSteps = 20;
constexpr int kOpcodeCount = 6;
constexpr int kDstCount = 16;
constexpr int kSrcCount = 25;

void validate_program(const std::vector<Instruction>& program) {
    if (static_cast<int>(program.size()) < kMinProgram ||
        static_cast<int>(program.size()) > kMaxProgram)
        throw std::invalid_argument("program length must lie in [8, 256]");
    for (const Instruction& ins : program) {
        if (ins.dst < 0 || ins.dst >= kDstCount || ins.src1 < 0 || ins.src1 >= kSrcCount ||
            ins.src2 < 0 || ins.src2 >= kSrcCount)
            throw std::invalid_argument("instruction register out of range");
    }
}

void validate_config(const ErlConfig& c) {
    if (c.population < 4 || c.population % 2 != 0)
        throw std::invalid_argument("population must be even and at least 4");
    if (c.generations < 1) throw std::invalid_argument("need at least one generation");
    if (c.episodes_per_gen < 1) throw std::invalid_argument("need at least one episode per generation");
    if (c.history_cap < 1) throw std::invalid_argument("history cap must be positive");
    for (double p : {c.crossover_prob, c.replace_prob, c.insert_prob, c.delete_prob})
        if (p < 0.0 || p > 1.0) throw std::invalid_argument("probabilities must lie in [0, 1]");
    if (c.init_min < kMinProgram || c.init_max > kMaxProgram || c.init_min > c.init_max)
        throw std::invalid_argument("init lengths must lie in [8, 256]");
}

Instruction random_instruction(Rng& rng) {
    Instruction ins;
    ins.op = static_cast<Opcode>(rng.below(kOpcodeCount));
    ins.dst = static_cast<int>(rng.below(kDstCount));
    ins.src1 = static_cast<int>(rng.below(kSrcCount));
    ins.src2 = static_cast<int>(rng.below(kSrcCount));
    return ins;
}

std::vector<Instruction> crossover_programs(const std::vector<Instruction>& a,
                                            const std::vector<Instruction>& b, Rng& rng) {
    for (int attempt = 0; attempt < 16; ++attempt) {
        const int c1 = rng.uniform_int(1, static_cast<int>(a.size()));
        const int c2 = rng.uniform_int(0, static_cast<int>(b.size()));
        const int len = c1 + static_cast<int>(b.size()) - c2;
        if (len < kMinProgram || len > kMaxProgram) continue;
        std::vector<Instruction> out(a.begin(), a.begin() + c1);
        out.insert(out.end(), b.begin() + c2, b.end());
        return out;
    }
    return a;  // no compatible cut found; fall back to a clone
}

void mutate_program(std::vector<Instruction>& program, const ErlConfig& config, Rng& rng) {
    for (Instruction& ins : program)
        if (rng.bernoulli(config.replace_prob)) ins = random_instruction(rng);
    if (rng.bernoulli(config.insert_prob) && static_cast<int>(program.size()) < kMaxProgram) {
        const int at = rng.uniform_int(0, static_cast<int>(program.size()));
        program.insert(program.begin() + at, random_instruction(rng));
    }
    if (rng.bernoulli(config.delete_prob) && static_cast<int>(program.size()) > kMinProgram)
        program.erase(program.begin() + rng.below(static_cast<int>(program.size())));
}

// Identifies a problem by content so repeat encounters dedupe in solved counts.
std::string problem_key(const ProblemMatrix& problem) {
    const int full = problem.full_size();
    std::string key;
    key.reserve(static_cast<std::size_t>(full) * static_cast<std::size_t>(full) * 3);
    for (int y = 0; y < full; ++y)
        for (int x = 0; x < full; ++x) {
            key += std::to_string(problem.full_cell({x, y}));
            key += ',';
        }
    return key;
}

// One remembered episode: which problem it ran on and whether the final
// layout delivered at least one item.
struct SolveMark {
    std::string problem;
    bool solved;
};

}  // namespace

BeltEnv::BeltEnv(const ProblemMatrix& problem, int episode_steps)
    : problem_(&problem),
      working_(problem.size()),
      agent_{problem.size() / 2, problem.size() / 2},
      episode_steps_(episode_steps) {
    if (episode_steps < 1) throw std::invalid_argument("episodes need at least one step");
}

std::array<int, 9> BeltEnv::observe() const {
    std::array<int, 9> window;
    const int n = problem_->size();
    const int full = problem_->full_size();
    int slot = 0;
    for (int dy = -1; dy <= 1; ++dy) {
        for (int dx = -1; dx <= 1; ++dx) {
            const Vec2 pos{agent_.x + dx, agent_.y + dy};
            if (pos.x >= 0 && pos.x < n && pos.y >= 0 && pos.y < n) {
                // Problem codes outrank the working overlay inside the playfield.
                window[slot] = problem_->has_obstacle(pos) ? kObstacle : working_.at(pos);
            } else {
                const Vec2 f{pos.x + ProblemMatrix::kWallThickness,
                             pos.y + ProblemMatrix::kWallThickness};
                window[slot] = (f.x < 0 || f.x >= full || f.y < 0 || f.y >= full)
                                   ? kWall
                                   : problem_->full_cell(f);
            }
            ++slot;
        }
    }
    return window;
}

void BeltEnv::step(Action action) {
    if (done()) throw std::logic_error("episode is over");
    const int n = problem_->size();
    switch (action) {
        case Action::MoveNorth: agent_.y = std::max(0, agent_.y - 1); break;
        case Action::MoveSouth: agent_.y = std::min(n - 1, agent_.y + 1); break;
        case Action::MoveWest: agent_.x = std::max(0, agent_.x - 1); break;
        case Action::MoveEast: agent_.x = std::min(n - 1, agent_.x + 1); break;
        case Action::PlaceNorth:
        case Action::PlaceEast:
        case Action::PlaceSouth:
        case Action::PlaceWest:
            if (!problem_->has_obstacle(agent_))
                working_.set(agent_, static_cast<int>(action) - static_cast<int>(Action::PlaceNorth) + 1);
            break;
    }
    ++timestep_;
}

Action policy_action(const std::vector<Instruction>& program, const std::array<int, 9>& window,
                     std::array<double, 8>& memory) {
    std::array<double, 8> action{};
    const auto read = [&](int src) {
        if (src < 0 || src >= kSrcCount) throw std::invalid_argument("source register out of range");
        if (src < 9) return static_cast<double>(window[static_cast<std::size_t>(src)]);
        if (src < 17) return action[static_cast<std::size_t>(src - 9)];
        return memory[static_cast<std::size_t>(src - 17)];
    };
    const auto write = [&](int dst, double value) {
        if (dst < 0 || dst >= kDstCount) throw std::invalid_argument("destination register out of range");
        if (dst < 8) action[static_cast<std::size_t>(dst)] = value;
        else memory[static_cast<std::size_t>(dst - 8)] = value;
    };

    for (std::size_t pc = 0; pc < program.size(); ++pc) {
        const Instruction& ins = program[pc];
        switch (ins.op) {
            case Opcode::Add: write(ins.dst, read(ins.src1) + read(ins.src2)); break;
            case Opcode::Sub: write(ins.dst, read(ins.src1) - read(ins.src2)); break;
            case Opcode::Mul: write(ins.dst, read(ins.src1) * read(ins.src2)); break;
            case Opcode::Div: {
                const double divisor = read(ins.src2);
                write(ins.dst, divisor == 0.0 ? 1.0 : read(ins.src1) / divisor);
                break;
            }
            case Opcode::Copy: write(ins.dst, read(ins.src1)); break;
            case Opcode::SkipGt:
                if (read(ins.src1) > read(ins.src2)) ++pc;
                break;
        }
    }

    int best = 0;
    for (int i = 1; i < kActionCount; ++i)
        if (action[static_cast<std::size_t>(i)] > action[static_cast<std::size_t>(best)]) best = i;
    return static_cast<Action>(best);
}

double run_episode(Policy& policy, const ProblemMatrix& problem, EvalBackend& backend,
                   const SimConfig& sim, const Weights& weights, int history_cap,
                   SolutionMatrix* final_working) {
    validate_program(policy.program);
    if (history_cap < 1) throw std::invalid_argument("history cap must be positive");

    BeltEnv env(problem, kEpisodeSteps);
    std::array<double, 8> memory{};
    while (!env.done()) env.step(policy_action(policy.program, env.observe(), memory));

    const double reward = backend.evaluate(problem, env.working(), sim, weights);
    policy.fitness_history.push_back(reward);
    while (static_cast<int>(policy.fitness_history.size()) > history_cap)
        policy.fitness_history.erase(policy.fitness_history.begin());
    if (final_working) *final_working = env.working();
    return reward;
}

double policy_fitness(const Policy& policy) {
    if (policy.fitness_history.empty()) return 0.0;
    const double sum =
        std::accumulate(policy.fitness_history.begin(), policy.fitness_history.end(), 0.0);
    return sum / static_cast<double>(policy.fitness_history.size());
}

ErlResult run_erl(int size, bool with_obstacles, EvalBackend& backend, const SimConfig& sim,
                  const Weights& weights, const ErlConfig& config, std::uint64_t seed) {
    validate_config(config);
    const auto start = std::chrono::steady_clock::now();
    Rng rng(seed);

    std::vector<Policy> pop(static_cast<std::size_t>(config.population));
    for (Policy& p : pop) {
        const int len = rng.uniform_int(config.init_min, config.init_max);
        p.program.reserve(static_cast<std::size_t>(len));
        for (int i = 0; i < len; ++i) p.program.push_back(random_instruction(rng));
    }

    ErlResult result;
    const std::size_t half = pop.size() / 2;
    std::vector<std::vector<SolveMark>> records(pop.size());
    for (int gen = 1; gen <= config.generations; ++gen) {
        std::vector<ProblemMatrix> problems;
        std::vector<std::string> keys;
        problems.reserve(static_cast<std::size_t>(config.episodes_per_gen));
        keys.reserve(static_cast<std::size_t>(config.episodes_per_gen));
        for (int j = 0; j < config.episodes_per_gen; ++j) {
            problems.push_back(gen_problem(size, with_obstacles, rng));
            keys.push_back(problem_key(problems.back()));
        }

        std::vector<double> fitness(pop.size());
        for (std::size_t i = 0; i < pop.size(); ++i) {
            SolutionMatrix final_working(size);
            for (std::size_t j = 0; j < problems.size(); ++j) {
                run_episode(pop[i], problems[j], backend, sim, weights, config.history_cap,
                            &final_working);
                bool solved = false;
                if (check_feasible(problems[j], final_working).feasible)
                    solved = simulate(problems[j], final_working, sim).items_out >= 1;
                records[i].push_back({keys[j], solved});
                while (static_cast<int>(records[i].size()) > config.history_cap)
                    records[i].erase(records[i].begin());
            }
            fitness[i] = policy_fitness(pop[i]);
        }

        std::size_t best = 0;
        for (std::size_t i = 1; i < pop.size(); ++i)
            if (fitness[i] > fitness[best]) best = i;

        // Distinct problems the current champion has ever delivered on, within
        // its remembered episode window.
        std::unordered_set<std::string> solved_problems;
        for (const SolveMark& mark : records[best])
            if (mark.solved) solved_problems.insert(mark.problem);
        const int unique_solved = static_cast<int>(solved_problems.size());

        const double wall_ms =
            std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start)
                .count();
        result.trace.push_back({gen, fitness[best], unique_solved, wall_ms});

        if (gen == config.generations) {
            result.best = pop[best];
            result.best_fitness = fitness[best];
            break;
        }

        std::vector<std::size_t> order(pop.size());
        std::iota(order.begin(), order.end(), 0u);
        std::stable_sort(order.begin(), order.end(),
                         [&](std::size_t a, std::size_t b) { return fitness[a] > fitness[b]; });
        std::vector<Policy> next;
        std::vector<std::vector<SolveMark>> next_records;
        next.reserve(pop.size());
        next_records.reserve(pop.size());
        for (std::size_t k = 0; k < half; ++k) {
            next.push_back(std::move(pop[order[k]]));
            next_records.push_back(std::move(records[order[k]]));
        }
        while (next.size() < static_cast<std::size_t>(config.population)) {
            Policy child;
            if (rng.bernoulli(config.crossover_prob)) {
                const Policy& p1 = next[static_cast<std::size_t>(rng.below(static_cast<int>(half)))];
                const Policy& p2 = next[static_cast<std::size_t>(rng.below(static_cast<int>(half)))];
                child.program = crossover_programs(p1.program, p2.program, rng);
            } else {
                child.program =
                    next[static_cast<std::size_t>(rng.below(static_cast<int>(half)))].program;
            }
            mutate_program(child.program, config, rng);
            next.push_back(std::move(child));
            next_records.emplace_back();
        }
        pop = std::move(next);
        records = std::move(next_records);
    }
    return result;
}

std::string erl_trace_csv(const std::vector<ErlTraceRow>& trace) {
    std::string out = "generation,best_fitness,unique_solved\n";
    char buf[96];
    for (const auto& row : trace) {
        std::snprintf(buf, sizeof(buf), "%d,%.10f,%d\n", row.generation, row.best_fitness,
                      row.unique_solved);
        out += buf;
    }
    return out;
}

namespace {

const char* opcode_name(Opcode op) {
    switch (op) {
        case Opcode::Add: return "add";
        case Opcode::Sub: return "sub";
        case Opcode::Mul: return "mul";
        case Opcode::Div: return "div";
        case Opcode::Copy: return "copy";
        case Opcode::SkipGt: return "skipgt";
    }
    return "";
}

std::string dst_name(int dst) {
    return dst < 8 ? "a" + std::to_string(dst) : "m" + std::to_string(dst - 8);
}

std::string src_name(int src) {
    if (src < 9) return "in" + std::to_string(src);
    if (src < 17) return "a" + std::to_string(src - 9);
    return "m" + std::to_string(src - 17);
}

int parse_dst(const std::string& name) {
    if (name.size() == 2 && name[0] == 'a' && name[1] >= '0' && name[1] <= '7')
        return name[1] - '0';
    if (name.size() == 2 && name[0] == 'm' && name[1] >= '0' && name[1] <= '7')
        return 8 + name[1] - '0';
    throw std::invalid_argument("bad destination register: " + name);
}

int parse_src(const std::string& name) {
    if (name.size() == 3 && name.compare(0, 2, "in") == 0 && name[2] >= '0' && name[2] <= '8')
        return name[2] - '0';
    if (name.size() == 2 && name[0] == 'a' && name[1] >= '0' && name[1] <= '7')
        return 9 + name[1] - '0';
    if (name.size() == 2 && name[0] == 'm' && name[1] >= '0' && name[1] <= '7')
        return 17 + name[1] - '0';
    throw std::invalid_argument("bad source register: " + name);
}

}  // namespace

std::string format_policy(const std::vector<Instruction>& program) {
    std::string out;
    for (const Instruction& ins : program) {
        out += opcode_name(ins.op);
        out += ' ';
        out += dst_name(ins.dst);
        out += ' ';
        out += src_name(ins.src1);
        out += ' ';
        out += src_name(ins.src2);
        out += '\n';
    }
    return out;
}

std::vector<Instruction> parse_policy(const std::string& text) {
    std::vector<Instruction> program;
    std::istringstream in(text);
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        std::istringstream fields(line);
        std::string op, dst, src1, src2;
        if (!(fields >> op >> dst >> src1 >> src2))
            throw std::invalid_argument("policy line " + std::to_string(line_no) +
                                        ": expected opcode and three registers");
        std::string extra;
        if (fields >> extra)
            throw std::invalid_argument("policy line " + std::to_string(line_no) + ": trailing input");
        Instruction ins;
        if (op == "add") ins.op = Opcode::Add;
        else if (op == "sub") ins.op = Opcode::Sub;
        else if (op == "mul") ins.op = Opcode::Mul;
        else if (op == "div") ins.op = Opcode::Div;
        else if (op == "copy") ins.op = Opcode::Copy;
        else if (op == "skipgt") ins.op = Opcode::SkipGt;
        else
            throw std::invalid_argument("policy line " + std::to_string(line_no) +
                                        ": unknown opcode " + op);
        ins.dst = parse_dst(dst);
        ins.src1 = parse_src(src1);
        ins.src2 = parse_src(src2);
        program.push_back(ins);
    }
    return program;
}

}  // namespace beltforge
