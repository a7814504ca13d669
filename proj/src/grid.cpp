#include "beltforge/grid.hpp"

#include <algorithm>
#include <charconv>
#include <deque>
#include <sstream>
#include <stdexcept>

namespace beltforge {

namespace {

constexpr Direction kAllDirections[4] = {Direction::North, Direction::East, Direction::South,
                                         Direction::West};

std::string vec_str(Vec2 p) {
    return "(" + std::to_string(p.x) + "," + std::to_string(p.y) + ")";
}

// Outward direction of a border cell: the side through which its port
// entities leave the playfield. Corners resolve north/south first.
Direction border_outward(Vec2 p, int size) {
    if (p.y == 0) return Direction::North;
    if (p.y == size - 1) return Direction::South;
    if (p.x == size - 1) return Direction::East;
    if (p.x == 0) return Direction::West;
    throw std::invalid_argument("port " + vec_str(p) + " is not on the playfield border");
}

}  // namespace

Direction opposite(Direction d) {
    return static_cast<Direction>((static_cast<int>(d) + 2) % 4);
}

char direction_letter(Direction d) {
    switch (d) {
        case Direction::North: return 'N';
        case Direction::East: return 'E';
        case Direction::South: return 'S';
        case Direction::West: return 'W';
    }
    throw std::invalid_argument("bad direction");
}

Direction code_direction(int code) {
    if (is_belt(code)) return static_cast<Direction>(code - 1);
    if (is_underground(code)) return static_cast<Direction>(code - 5);
    throw std::invalid_argument("code " + std::to_string(code) + " has no direction");
}

SolutionMatrix::SolutionMatrix(int size) : size_(size) {
    if (size < 1) throw std::invalid_argument("solution size must be positive");
    cells_.assign(static_cast<std::size_t>(size) * size, kEmpty);
}

int SolutionMatrix::index(Vec2 p) const {
    if (!in_bounds(p)) throw std::out_of_range("cell " + vec_str(p) + " outside playfield");
    return p.y * size_ + p.x;
}

void SolutionMatrix::set(Vec2 p, int code) {
    if (code < kEmpty || code > kMaxCode)
        throw std::invalid_argument("solution code " + std::to_string(code) + " out of range");
    cells_[index(p)] = code;
}

ProblemMatrix::ProblemMatrix(int size, std::vector<Vec2> obstacles, Vec2 insert_at,
                             Vec2 extract_at, Direction insert_outward, Direction extract_outward)
    : size_(size),
      obstacles_(std::move(obstacles)),
      insert_(insert_at),
      extract_(extract_at),
      insert_out_(insert_outward),
      extract_out_(extract_outward) {
    if (size < 2) throw std::invalid_argument("problem size must be at least 2");
    if (!in_bounds(insert_) || !in_bounds(extract_))
        throw std::invalid_argument("ports must lie inside the playfield");
    if (insert_ == extract_) throw std::invalid_argument("ports must be distinct");
    if (in_bounds(step(insert_, insert_out_)))
        throw std::invalid_argument("input port must face outward through the border");
    if (in_bounds(step(extract_, extract_out_)))
        throw std::invalid_argument("output port must face outward through the border");

    std::sort(obstacles_.begin(), obstacles_.end());
    obstacles_.erase(std::unique(obstacles_.begin(), obstacles_.end()), obstacles_.end());
    obstacle_grid_.assign(static_cast<std::size_t>(size) * size, 0);
    for (Vec2 p : obstacles_) {
        if (!in_bounds(p)) throw std::invalid_argument("obstacle " + vec_str(p) + " outside playfield");
        if (p == insert_ || p == extract_)
            throw std::invalid_argument("obstacle " + vec_str(p) + " blocks a port");
        obstacle_grid_[static_cast<std::size_t>(p.y) * size + p.x] = 1;
    }
}

bool ProblemMatrix::has_obstacle(Vec2 p) const {
    if (!in_bounds(p)) return false;
    return obstacle_grid_[static_cast<std::size_t>(p.y) * size_ + p.x] != 0;
}

int ProblemMatrix::full_cell(Vec2 full) const {
    const int f = full_size();
    if (full.x < 0 || full.x >= f || full.y < 0 || full.y >= f)
        throw std::out_of_range("cell " + vec_str(full) + " outside full matrix");
    const Vec2 play{full.x - kWallThickness, full.y - kWallThickness};
    if (in_bounds(play)) return has_obstacle(play) ? kObstacle : kEmpty;

    const Vec2 in_inserter = step({insert_.x + kWallThickness, insert_.y + kWallThickness}, insert_out_);
    const Vec2 in_chest = step(in_inserter, insert_out_);
    const Vec2 out_inserter =
        step({extract_.x + kWallThickness, extract_.y + kWallThickness}, extract_out_);
    const Vec2 out_chest = step(out_inserter, extract_out_);
    if (full == in_inserter) return kInputInserter;
    if (full == in_chest) return kInputChest;
    if (full == out_inserter) return kOutputInserter;
    if (full == out_chest) return kOutputChest;
    return kWall;
}

std::string constraint_name(HardConstraint c) {
    switch (c) {
        case HardConstraint::ObstacleOverlap: return "HC1";
        case HardConstraint::NoPlacement: return "HC2";
    }
    throw std::invalid_argument("bad constraint");
}

FeasibilityReport check_feasible(const ProblemMatrix& problem, const SolutionMatrix& solution) {
    if (problem.size() != solution.size())
        throw std::invalid_argument("solution size " + std::to_string(solution.size()) +
                                    " does not match problem size " + std::to_string(problem.size()));
    FeasibilityReport report;
    bool any_placement = false;
    for (int y = 0; y < problem.size(); ++y) {
        for (int x = 0; x < problem.size(); ++x) {
            const Vec2 p{x, y};
            const int code = solution.at(p);
            if (code > 0) {
                any_placement = true;
                if (problem.has_obstacle(p)) report.offending_positions.push_back(p);
            }
        }
    }
    if (!report.offending_positions.empty()) report.violated.push_back(HardConstraint::ObstacleOverlap);
    if (!any_placement) report.violated.push_back(HardConstraint::NoPlacement);
    report.feasible = report.violated.empty();
    return report;
}

int obstacle_count(int size) {
    return (3 * size * size + 19) / 20;  // ceil(0.15 * size^2)
}

bool ports_connected(const ProblemMatrix& problem) {
    const int n = problem.size();
    std::vector<std::uint8_t> seen(static_cast<std::size_t>(n) * n, 0);
    auto idx = [n](Vec2 p) { return static_cast<std::size_t>(p.y) * n + p.x; };
    std::deque<Vec2> queue;
    queue.push_back(problem.insert_at());
    seen[idx(problem.insert_at())] = 1;
    while (!queue.empty()) {
        const Vec2 p = queue.front();
        queue.pop_front();
        if (p == problem.extract_at()) return true;
        for (Direction d : kAllDirections) {
            // One step of surface travel, or an underground hop skipping up
            // to four blocked cells.
            for (int k = 1; k <= 5; ++k) {
                const Vec2 q{p.x + k * direction_dx(d), p.y + k * direction_dy(d)};
                if (!problem.in_bounds(q)) break;
                if (problem.has_obstacle(q) || seen[idx(q)]) continue;
                seen[idx(q)] = 1;
                queue.push_back(q);
            }
        }
    }
    return false;
}

namespace {

ProblemMatrix build_instance(int size, bool with_obstacles, Vec2 insert_at, Vec2 extract_at,
                             Rng& rng) {
    const Direction in_out = border_outward(insert_at, size);
    const Direction out_out = border_outward(extract_at, size);
    if (!with_obstacles) {
        return ProblemMatrix(size, {}, insert_at, extract_at, in_out, out_out);
    }

    std::vector<Vec2> candidates;
    for (int y = 0; y < size; ++y)
        for (int x = 0; x < size; ++x) {
            const Vec2 p{x, y};
            if (p != insert_at && p != extract_at) candidates.push_back(p);
        }
    const int count = obstacle_count(size);

    for (int attempt = 0; attempt < 1000; ++attempt) {
        std::vector<int> picks = rng.sample_indices(static_cast<int>(candidates.size()), count);
        std::vector<Vec2> obstacles;
        obstacles.reserve(count);
        for (int i : picks) obstacles.push_back(candidates[i]);
        ProblemMatrix instance(size, std::move(obstacles), insert_at, extract_at, in_out, out_out);
        if (ports_connected(instance)) return instance;
    }
    throw std::runtime_error("no connected obstacle layout found in 1000 draws");
}

}  // namespace

ProblemMatrix make_benchmark(int size, bool with_obstacles, std::uint64_t seed) {
    if (size != 3 && size != 6 && size != 12)
        throw std::invalid_argument("benchmark size must be 3, 6 or 12");
    Rng rng(seed);
    return build_instance(size, with_obstacles, {size - 1, 0}, {0, size - 1}, rng);
}

ProblemMatrix gen_problem(int size, bool with_obstacles, Rng& rng) {
    if (size != 3 && size != 6)
        throw std::invalid_argument("generated problem size must be 3 or 6");
    std::vector<Vec2> border;
    for (int y = 0; y < size; ++y)
        for (int x = 0; x < size; ++x)
            if (x == 0 || x == size - 1 || y == 0 || y == size - 1) border.push_back({x, y});

    const int a = static_cast<int>(rng.below(border.size()));
    int b = static_cast<int>(rng.below(border.size() - 1));
    if (b >= a) ++b;
    return build_instance(size, with_obstacles, border[a], border[b], rng);
}

namespace {

std::string render_grid(int rows, int cols, const std::vector<int>& values) {
    std::string out = std::to_string(rows) + " " + std::to_string(cols) + "\n";
    for (int y = 0; y < rows; ++y) {
        for (int x = 0; x < cols; ++x) {
            if (x > 0) out += ' ';
            out += std::to_string(values[static_cast<std::size_t>(y) * cols + x]);
        }
        out += '\n';
    }
    return out;
}

}  // namespace

std::string write_matrix(const ProblemMatrix& problem) {
    const int f = problem.full_size();
    std::vector<int> values(static_cast<std::size_t>(f) * f);
    for (int y = 0; y < f; ++y)
        for (int x = 0; x < f; ++x) values[static_cast<std::size_t>(y) * f + x] = problem.full_cell({x, y});
    return render_grid(f, f, values);
}

std::string write_matrix(const SolutionMatrix& solution) {
    return render_grid(solution.size(), solution.size(), solution.cells());
}

namespace {

int parse_int(std::string_view token, const char* what) {
    int value = 0;
    const char* first = token.data();
    const char* last = token.data() + token.size();
    auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc() || ptr != last)
        throw std::invalid_argument(std::string(what) + ": not an integer: '" + std::string(token) + "'");
    return value;
}

ProblemMatrix problem_from_grid(int rows, int cols, const std::vector<int>& values) {
    if (rows != cols) throw std::invalid_argument("problem matrix must be square");
    const int wall = ProblemMatrix::kWallThickness;
    const int n = rows - 2 * wall;
    if (n < 2) throw std::invalid_argument("problem matrix too small for a walled playfield");
    auto at = [&](Vec2 p) { return values[static_cast<std::size_t>(p.y) * cols + p.x]; };
    auto in_play = [&](Vec2 p) {
        return p.x >= wall && p.x < wall + n && p.y >= wall && p.y < wall + n;
    };

    std::vector<Vec2> obstacles;
    Vec2 in_inserter{-1, -1}, out_inserter{-1, -1};
    Vec2 in_chest{-1, -1}, out_chest{-1, -1};
    for (int y = 0; y < rows; ++y) {
        for (int x = 0; x < cols; ++x) {
            const Vec2 p{x, y};
            const int code = at(p);
            if (in_play(p)) {
                if (code == kObstacle) obstacles.push_back({x - wall, y - wall});
                else if (code != kEmpty)
                    throw std::invalid_argument("playfield cell " + vec_str(p) +
                                                " holds unexpected code " + std::to_string(code));
            } else {
                switch (code) {
                    case kWall: break;
                    case kInputInserter:
                        if (in_inserter.x >= 0) throw std::invalid_argument("duplicate input inserter");
                        in_inserter = p;
                        break;
                    case kInputChest:
                        if (in_chest.x >= 0) throw std::invalid_argument("duplicate input chest");
                        in_chest = p;
                        break;
                    case kOutputInserter:
                        if (out_inserter.x >= 0) throw std::invalid_argument("duplicate output inserter");
                        out_inserter = p;
                        break;
                    case kOutputChest:
                        if (out_chest.x >= 0) throw std::invalid_argument("duplicate output chest");
                        out_chest = p;
                        break;
                    default:
                        throw std::invalid_argument("wall cell " + vec_str(p) + " holds unexpected code " +
                                                    std::to_string(code));
                }
            }
        }
    }
    if (in_inserter.x < 0 || out_inserter.x < 0 || in_chest.x < 0 || out_chest.x < 0)
        throw std::invalid_argument("problem matrix must carry both ports (inserter and chest each)");

    auto resolve_port = [&](Vec2 inserter, Vec2 chest, const char* what) {
        for (Direction d : kAllDirections) {
            const Vec2 neighbor = step(inserter, d);
            if (!in_play(neighbor)) continue;
            // Port cell found; the chest must sit directly behind the inserter.
            if (step(inserter, opposite(d)) != chest)
                throw std::invalid_argument(std::string(what) + " chest is not behind its inserter");
            return std::pair<Vec2, Direction>({neighbor.x - wall, neighbor.y - wall}, opposite(d));
        }
        throw std::invalid_argument(std::string(what) + " inserter is not adjacent to the playfield");
    };

    auto [insert_at, insert_out] = resolve_port(in_inserter, in_chest, "input");
    auto [extract_at, extract_out] = resolve_port(out_inserter, out_chest, "output");
    return ProblemMatrix(n, std::move(obstacles), insert_at, extract_at, insert_out, extract_out);
}

}  // namespace

ParsedMatrix read_matrix(std::string_view text) {
    std::istringstream in{std::string(text)};
    std::string header;
    if (!std::getline(in, header)) throw std::invalid_argument("empty matrix file");
    std::istringstream header_stream(header);
    std::string rows_token, cols_token, extra;
    if (!(header_stream >> rows_token >> cols_token) || (header_stream >> extra))
        throw std::invalid_argument("malformed dimension line: '" + header + "'");
    const int rows = parse_int(rows_token, "rows");
    const int cols = parse_int(cols_token, "cols");
    if (rows < 1 || cols < 1) throw std::invalid_argument("dimensions must be positive");

    std::vector<int> values;
    values.reserve(static_cast<std::size_t>(rows) * cols);
    std::string token;
    bool negative = false;
    while (in >> token) {
        const int code = parse_int(token, "cell");
        if (code < kMinCode || code > kMaxCode)
            throw std::invalid_argument("cell code " + std::to_string(code) + " out of range [" +
                                        std::to_string(kMinCode) + "," + std::to_string(kMaxCode) + "]");
        if (code < 0) negative = true;
        values.push_back(code);
        if (values.size() > static_cast<std::size_t>(rows) * cols)
            throw std::invalid_argument("matrix holds more cells than the dimension line declares");
    }
    if (values.size() != static_cast<std::size_t>(rows) * cols)
        throw std::invalid_argument("matrix holds fewer cells than the dimension line declares");

    if (negative) return problem_from_grid(rows, cols, values);

    if (rows != cols) throw std::invalid_argument("solution matrix must be square");
    SolutionMatrix solution(rows);
    for (int y = 0; y < rows; ++y)
        for (int x = 0; x < cols; ++x) solution.set({x, y}, values[static_cast<std::size_t>(y) * cols + x]);
    return solution;
}

}  // namespace beltforge
