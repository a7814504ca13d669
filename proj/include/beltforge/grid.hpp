#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "beltforge/rng.hpp"

namespace beltforge {

// Playfield coordinates: x is the column, y is the row, y grows downward.
enum class Direction : int { North = 0, East = 1, South = 2, West = 3 };

constexpr int direction_dx(Direction d) {
    switch (d) {
        case Direction::East: return 1;
        case Direction::West: return -1;
        default: return 0;
    }
}

constexpr int direction_dy(Direction d) {
    switch (d) {
        case Direction::North: return -1;
        case Direction::South: return 1;
        default: return 0;
    }
}

Direction opposite(Direction d);
char direction_letter(Direction d);

struct Vec2 {
    int x = 0;
    int y = 0;
    friend bool operator==(const Vec2&, const Vec2&) = default;
    friend bool operator<(const Vec2& a, const Vec2& b) {
        return a.y != b.y ? a.y < b.y : a.x < b.x;  // row-major
    }
};

inline Vec2 step(Vec2 p, Direction d) { return {p.x + direction_dx(d), p.y + direction_dy(d)}; }

// Cell codes. Solutions hold only 0..8; negative codes belong to problems.
inline constexpr int kEmpty = 0;
inline constexpr int kObstacle = -1;
inline constexpr int kWall = -2;
inline constexpr int kInputInserter = -3;
inline constexpr int kInputChest = -4;
inline constexpr int kOutputInserter = -5;
inline constexpr int kOutputChest = -6;
inline constexpr int kMinCode = -6;
inline constexpr int kMaxCode = 8;

inline constexpr bool is_belt(int code) { return code >= 1 && code <= 4; }
inline constexpr bool is_underground(int code) { return code >= 5 && code <= 8; }
inline constexpr bool is_transport(int code) { return code >= 1 && code <= 8; }

inline constexpr int belt_code(Direction d) { return 1 + static_cast<int>(d); }
inline constexpr int underground_code(Direction d) { return 5 + static_cast<int>(d); }

// Facing of a belt or underground code (1..8).
Direction code_direction(int code);

// Square overlay of transport codes placed on the playfield.
class SolutionMatrix {
public:
    explicit SolutionMatrix(int size);

    int size() const { return size_; }
    bool in_bounds(Vec2 p) const { return p.x >= 0 && p.x < size_ && p.y >= 0 && p.y < size_; }
    int at(Vec2 p) const { return cells_[index(p)]; }
    void set(Vec2 p, int code);
    const std::vector<int>& cells() const { return cells_; }
    int index(Vec2 p) const;

    friend bool operator==(const SolutionMatrix&, const SolutionMatrix&) = default;

private:
    int size_;
    std::vector<int> cells_;
};

// Playfield instance: obstacle layout plus the input/output ports. The
// surrounding two-cell wall ring (with inserters and chests) is implied by
// the port positions and their outward directions; it is materialized only
// for file serialization and game commands.
class ProblemMatrix {
public:
    static constexpr int kWallThickness = 2;

    ProblemMatrix(int size, std::vector<Vec2> obstacles, Vec2 insert_at, Vec2 extract_at,
                  Direction insert_outward, Direction extract_outward);

    int size() const { return size_; }
    int full_size() const { return size_ + 2 * kWallThickness; }
    Vec2 insert_at() const { return insert_; }
    Vec2 extract_at() const { return extract_; }
    Direction insert_outward() const { return insert_out_; }
    Direction extract_outward() const { return extract_out_; }
    const std::vector<Vec2>& obstacles() const { return obstacles_; }  // row-major sorted
    bool has_obstacle(Vec2 p) const;
    bool in_bounds(Vec2 p) const { return p.x >= 0 && p.x < size_ && p.y >= 0 && p.y < size_; }

    // Cell code of the full matrix (walls included), full-matrix coordinates.
    int full_cell(Vec2 full) const;

    friend bool operator==(const ProblemMatrix&, const ProblemMatrix&) = default;

private:
    int size_;
    std::vector<Vec2> obstacles_;
    std::vector<std::uint8_t> obstacle_grid_;
    Vec2 insert_;
    Vec2 extract_;
    Direction insert_out_;
    Direction extract_out_;
};

enum class HardConstraint {
    ObstacleOverlap,  // a placement collides with an obstacle cell
    NoPlacement,      // the solution places nothing at all
};

std::string constraint_name(HardConstraint c);

struct FeasibilityReport {
    bool feasible = true;
    std::vector<HardConstraint> violated;
    std::vector<Vec2> offending_positions;  // row-major sorted
};

// Throws std::invalid_argument when the solution size does not match the
// problem size.
FeasibilityReport check_feasible(const ProblemMatrix& problem, const SolutionMatrix& solution);

// Obstacle count used by the seeded generators: ceil(0.15 * size^2).
int obstacle_count(int size);

// Canonical benchmark instance: input port top-right, output port
// bottom-left. With obstacles, layouts are redrawn (up to 1000 times, then
// std::runtime_error) until input and output stay connected. size must be
// 3, 6 or 12.
ProblemMatrix make_benchmark(int size, bool with_obstacles, std::uint64_t seed);

// Random training instance with ports drawn uniformly from distinct border
// cells. size must be 3 or 6.
ProblemMatrix gen_problem(int size, bool with_obstacles, Rng& rng);

// True when every non-obstacle cell reachability from insert to extract
// holds under 4-connectivity plus straight jumps of 2..5 cells.
bool ports_connected(const ProblemMatrix& problem);

// Text format: first line "<rows> <cols>", then one line per row of
// space-separated signed decimal codes, LF endings, no trailing spaces.
std::string write_matrix(const ProblemMatrix& problem);
std::string write_matrix(const SolutionMatrix& solution);

using ParsedMatrix = std::variant<ProblemMatrix, SolutionMatrix>;

// Parses either kind; matrices containing negative codes are problems
// (full form, walls included), all-non-negative square matrices are
// solutions. Throws std::invalid_argument with a diagnostic on malformed
// input or out-of-range codes.
ParsedMatrix read_matrix(std::string_view text);

}  // namespace beltforge
