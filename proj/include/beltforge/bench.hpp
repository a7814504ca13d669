#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "beltforge/backend.hpp"
#include "beltforge/erl.hpp"
#include "beltforge/grid.hpp"
#include "beltforge/psa.hpp"
#include "beltforge/qgp.hpp"
#include "beltforge/rcon.hpp"
#include "beltforge/sim.hpp"

namespace beltforge {

enum class Algorithm { Psa, Qgp, Erl };

std::string algorithm_name(Algorithm a);
Algorithm parse_algorithm(const std::string& name);  // throws std::invalid_argument

enum class BackendKind { Sim, Rcon };

std::string backend_name(BackendKind k);
BackendKind parse_backend(const std::string& name);  // throws std::invalid_argument

struct RconSettings {
    std::string host = "127.0.0.1";
    int port = 27015;
    std::string password;
    double timeout_seconds = 5.0;
};

// Everything one solver run needs. The benchmark problem instance for a
// given (size, obstacles) cell is fixed; seeds vary only the solver.
struct RunConfig {
    Algorithm algorithm = Algorithm::Psa;
    int size = 3;
    bool obstacles = false;
    std::optional<std::string> problem_file;  // overrides size/obstacles for psa and qgp
    std::uint64_t seed = 0;
    int budget = 167;  // iterations or generations
    int replicates = 1;
    BackendKind backend = BackendKind::Sim;
    Weights weights;
    SimConfig sim;
    PsaConfig psa;
    QgpConfig qgp;
    ErlConfig erl;
    RconSettings rcon;
};

struct SuiteConfig {
    RunConfig run;
    int jobs = 1;
    std::string out_dir = "bench_out";
};

// One point of a fitness-over-budget trace. best_fitness never decreases
// within a (algorithm, problem, seed) run; wall_ms is informational and
// excluded from determinism guarantees.
struct TraceRow {
    std::string algorithm;
    std::string problem;
    std::uint64_t seed = 0;
    int iteration = 0;
    double best_fitness = 0.0;
    double wall_ms = 0.0;
};

std::string trace_csv(const std::vector<TraceRow>& rows);

// "3x3", "6x6o", ... for generated instances.
std::string problem_id(int size, bool obstacles);

struct RunOutput {
    std::vector<TraceRow> trace;
    SolutionMatrix best{1};
    double best_fitness = 0.0;
    // Native trace of the solver that ran (exactly one is non-empty).
    std::string solver_trace_csv;
    // Genome or policy listing for qgp/erl, empty for psa.
    std::string artifact_text;
    std::string artifact_name;  // "best_genome.txt" or "best_policy.txt"
};

// Executes one solver run under the given seed. The budget overrides the
// algorithm's own iteration/generation setting. Throws std::invalid_argument
// on contract violations (erl with a problem file or a size outside {3,6}).
RunOutput run_one(const RunConfig& config, std::uint64_t seed, EvalBackend& backend);

// Builds the backend a config asks for.
std::unique_ptr<EvalBackend> make_backend(const RunConfig& config);

struct SuiteCell {
    Algorithm algorithm;
    int size;
    bool obstacles;
};

// The fixed experimental grid: psa and qgp on {3,6,12} x {plain, obstacles},
// erl on 3x3 both ways.
std::vector<SuiteCell> suite_cells();

struct SuiteCellResult {
    std::string algorithm;
    std::string problem;
    bool ok = false;
    std::string error;
    std::vector<TraceRow> rows;   // replicates concatenated
    std::vector<double> finals;   // final best fitness per replicate
};

struct SuiteResult {
    std::vector<SuiteCellResult> cells;
    std::string trace_path;
    std::string curves_path;
    std::string summary_path;
};

// Runs every suite cell (concurrently up to config.jobs), seeds
// base+0..replicates-1 per cell, and writes trace.csv, curves.csv and
// summary.csv into config.out_dir. A failing cell is recorded and skipped;
// the suite always finishes.
SuiteResult run_suite(const SuiteConfig& config);

// Per-iteration arithmetic mean of best fitness across a cell's replicates:
// "algorithm,problem,iteration,mean_best_fitness".
std::string curves_csv(const std::vector<SuiteCellResult>& cells);

// Final-fitness statistics per cell: "algorithm,problem,median,iqr,status".
std::string summary_csv(const std::vector<SuiteCellResult>& cells);

// Linear-interpolation quantile of an unsorted sample; p in [0,1]. Throws
// std::invalid_argument on an empty sample.
double quantile(std::vector<double> values, double p);

struct PlotSeries {
    std::string label;
    std::vector<int> iterations;
    std::vector<double> values;
};

struct PlotData {
    bool log_y = false;
    std::vector<PlotSeries> series;
};

// Groups a trace or curves CSV into per-run series keyed by the identity
// columns. With log_y, points at or below zero are dropped (they have no
// place on a log axis). Throws std::invalid_argument on malformed input.
PlotData plot_from_csv(const std::string& csv_text, bool log_y);

std::string plot_json(const PlotData& data);
std::string plot_svg(const PlotData& data);

// Flat key=value config text with [psa]/[qgp]/[erl]/[sim]/[weights]/[rcon]
// sections and '#' comments. Unknown keys and malformed lines throw
// std::invalid_argument naming the line.
void apply_config_text(const std::string& text, SuiteConfig& config);
void apply_config_file(const std::string& path, SuiteConfig& config);

// Whole-file helpers; writes go through a temp file and rename so readers
// never observe a half-written file.
std::string read_text_file(const std::string& path);
void write_text_atomic(const std::string& path, const std::string& content);

}  // namespace beltforge
