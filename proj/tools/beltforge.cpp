#include <CLI11.hpp>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <string>

#include "beltforge/bench.hpp"

namespace {

using namespace beltforge;

void apply_rcon_env(RconSettings& rcon) {
    if (const char* host = std::getenv("BELTFORGE_RCON_HOST")) rcon.host = host;
    if (const char* port = std::getenv("BELTFORGE_RCON_PORT")) {
        try {
            rcon.port = std::stoi(port);
        } catch (const std::exception&) {
            throw std::invalid_argument("BELTFORGE_RCON_PORT is not an integer");
        }
    }
    if (const char* password = std::getenv("BELTFORGE_RCON_PASSWORD")) rcon.password = password;
}

int cmd_gen(int size, bool obstacles, std::uint64_t seed, const std::string& out_path) {
    const std::string text = write_matrix(make_benchmark(size, obstacles, seed));
    if (out_path.empty()) {
        std::fputs(text.c_str(), stdout);
    } else {
        write_text_atomic(out_path, text);
        std::printf("wrote %s\n", out_path.c_str());
    }
    return 0;
}

int cmd_run(const SuiteConfig& config) {
    const RunConfig& rc = config.run;
    const std::unique_ptr<EvalBackend> backend = make_backend(rc);

    std::vector<TraceRow> rows;
    RunOutput best;
    bool have_best = false;
    for (int r = 0; r < rc.replicates; ++r) {
        const std::uint64_t seed = rc.seed + static_cast<std::uint64_t>(r);
        RunOutput out = run_one(rc, seed, *backend);
        std::printf("seed %llu: best fitness %.10f\n",
                    static_cast<unsigned long long>(seed), out.best_fitness);
        rows.insert(rows.end(), out.trace.begin(), out.trace.end());
        if (!have_best || out.best_fitness > best.best_fitness) {
            best = std::move(out);
            have_best = true;
        }
    }

    const std::filesystem::path dir(config.out_dir);
    std::filesystem::create_directories(dir);
    write_text_atomic((dir / "trace.csv").string(), trace_csv(rows));
    write_text_atomic((dir / "best_solution.txt").string(), write_matrix(best.best));
    const std::string solver_csv = algorithm_name(rc.algorithm) + "_trace.csv";
    write_text_atomic((dir / solver_csv).string(), best.solver_trace_csv);
    if (!best.artifact_text.empty())
        write_text_atomic((dir / best.artifact_name).string(), best.artifact_text);
    std::printf("wrote %s\n", (dir / "trace.csv").string().c_str());
    return 0;
}

int cmd_bench(const SuiteConfig& config) {
    const SuiteResult result = run_suite(config);
    int failed = 0;
    for (const SuiteCellResult& cell : result.cells) {
        if (cell.ok) {
            std::printf("%s %s: ok\n", cell.algorithm.c_str(), cell.problem.c_str());
        } else {
            ++failed;
            std::printf("%s %s: failed (%s)\n", cell.algorithm.c_str(), cell.problem.c_str(),
                        cell.error.c_str());
        }
    }
    std::printf("wrote %s, %s, %s\n", result.trace_path.c_str(), result.curves_path.c_str(),
                result.summary_path.c_str());
    if (failed > 0) std::printf("%d of %zu cells failed\n", failed, result.cells.size());
    return 0;
}

int cmd_plot(const std::string& csv_path, bool log_y, const std::string& out_path,
             const std::string& svg_path) {
    const PlotData data = plot_from_csv(read_text_file(csv_path), log_y);
    const std::string json = plot_json(data);
    if (out_path.empty()) {
        std::fputs(json.c_str(), stdout);
    } else {
        write_text_atomic(out_path, json);
        std::printf("wrote %s\n", out_path.c_str());
    }
    if (!svg_path.empty()) {
        write_text_atomic(svg_path, plot_svg(data));
        std::printf("wrote %s\n", svg_path.c_str());
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Belt layout optimization workbench"};
    app.require_subcommand(1);

    int gen_size = 3;
    bool gen_obstacles = false;
    std::uint64_t gen_seed = 0;
    std::string gen_out;
    CLI::App* gen = app.add_subcommand("gen", "generate a benchmark problem file");
    gen->add_option("size", gen_size, "playfield size (3, 6 or 12)")->required();
    gen->add_flag("--obstacles,!--no-obstacles", gen_obstacles, "scatter obstacles");
    gen->add_option("--seed", gen_seed, "obstacle layout seed");
    gen->add_option("--out", gen_out, "output file (default: stdout)");

    std::string run_algo;
    std::string run_problem;
    std::string run_backend;
    std::string run_config_path;
    SuiteConfig run_config;
    run_config.out_dir = ".";
    CLI::App* run = app.add_subcommand("run", "run one solver and write its traces");
    run->add_option("--algo", run_algo, "solver: psa, qgp or erl")->required();
    run->add_option("--size", run_config.run.size, "playfield size");
    run->add_option("--problem", run_problem, "problem matrix file (psa and qgp)");
    run->add_flag("--obstacles,!--no-obstacles", run_config.run.obstacles, "use obstacles");
    run->add_option("--seed", run_config.run.seed, "base solver seed");
    run->add_option("--budget", run_config.run.budget, "iterations or generations");
    run->add_option("--replicates", run_config.run.replicates, "seeds per configuration");
    run->add_option("--backend", run_backend, "evaluation backend: sim or rcon");
    run->add_option("--config", run_config_path, "config file applied before flags");
    run->add_option("--out", run_config.out_dir, "output directory");

    std::string bench_config_path;
    SuiteConfig bench_config;
    CLI::App* bench = app.add_subcommand("bench", "run the full experimental grid");
    bench->add_option("--config", bench_config_path, "config file applied before flags");
    bench->add_option("--replicates", bench_config.run.replicates, "seeds per cell");
    bench->add_option("--budget", bench_config.run.budget, "iterations or generations per run");
    bench->add_option("--seed", bench_config.run.seed, "base seed");
    bench->add_option("--jobs", bench_config.jobs, "concurrent suite cells");
    bench->add_option("--out", bench_config.out_dir, "output directory");

    std::string plot_in;
    std::string plot_out;
    std::string plot_svg_path;
    bool plot_log_y = false;
    CLI::App* plot = app.add_subcommand("plot", "turn a trace or curves file into plot data");
    plot->add_option("csv", plot_in, "trace.csv or curves.csv")->required();
    plot->add_flag("--log-y", plot_log_y, "log-scale fitness axis");
    plot->add_option("--out", plot_out, "JSON output file (default: stdout)");
    plot->add_option("--svg", plot_svg_path, "also render a vector plot here");

    CLI11_PARSE(app, argc, argv);

    try {
        if (gen->parsed()) return cmd_gen(gen_size, gen_obstacles, gen_seed, gen_out);

        if (run->parsed()) {
            // Precedence: defaults, then config file, then environment, then
            // explicit flags.
            SuiteConfig flags = run_config;
            if (!run_config_path.empty()) {
                SuiteConfig from_file;
                from_file.out_dir = ".";
                apply_config_file(run_config_path, from_file);
                run_config = from_file;
            }
            apply_rcon_env(run_config.run.rcon);
            run_config.run.algorithm = parse_algorithm(run_algo);
            if (run->count("--size")) run_config.run.size = flags.run.size;
            if (run->count("--obstacles") || run->count("--no-obstacles"))
                run_config.run.obstacles = flags.run.obstacles;
            if (run->count("--seed")) run_config.run.seed = flags.run.seed;
            if (run->count("--budget")) run_config.run.budget = flags.run.budget;
            if (run->count("--replicates")) run_config.run.replicates = flags.run.replicates;
            if (run->count("--out")) run_config.out_dir = flags.out_dir;
            if (!run_problem.empty()) run_config.run.problem_file = run_problem;
            if (!run_backend.empty()) run_config.run.backend = parse_backend(run_backend);
            return cmd_run(run_config);
        }

        if (bench->parsed()) {
            SuiteConfig flags = bench_config;
            if (!bench_config_path.empty()) {
                SuiteConfig from_file;
                apply_config_file(bench_config_path, from_file);
                bench_config = from_file;
            }
            apply_rcon_env(bench_config.run.rcon);
            if (bench->count("--replicates")) bench_config.run.replicates = flags.run.replicates;
            if (bench->count("--budget")) bench_config.run.budget = flags.run.budget;
            if (bench->count("--seed")) bench_config.run.seed = flags.run.seed;
            if (bench->count("--jobs")) bench_config.jobs = flags.jobs;
            if (bench->count("--out")) bench_config.out_dir = flags.out_dir;
            return cmd_bench(bench_config);
        }

        return cmd_plot(plot_in, plot_log_y, plot_out, plot_svg_path);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
