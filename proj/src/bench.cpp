#include "beltforge/bench.hpp"

#include <json.hpp>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <thread>
#include <unordered_map>

namespace beltforge {

std::string algorithm_name(Algorithm a) {
    switch (a) {
        case Algorithm::Psa: return "psa";
        case Algorithm::Qgp: return "qgp";
        case Algorithm::Erl: return "erl";
    }
    return "";
}

Algorithm parse_algorithm(const std::string& name) {
    if (name == "psa") return Algorithm::Psa;
    if (name == "qgp") return Algorithm::Qgp;
    if (name == "erl") return Algorithm::Erl;
    throw std::invalid_argument("unknown algorithm: " + name);
}

std::string backend_name(BackendKind k) { return k == BackendKind::Sim ? "sim" : "rcon"; }

BackendKind parse_backend(const std::string& name) {
    if (name == "sim") return BackendKind::Sim;
    if (name == "rcon") return BackendKind::Rcon;
    throw std::invalid_argument("unknown backend: " + name);
}

std::string problem_id(int size, bool obstacles) {
    return std::to_string(size) + "x" + std::to_string(size) + (obstacles ? "o" : "");
}

std::string trace_csv(const std::vector<TraceRow>& rows) {
    std::string out = "algorithm,problem,seed,iteration,best_fitness,wall_ms\n";
    char buf[64];
    for (const TraceRow& row : rows) {
        out += row.algorithm;
        out += ',';
        out += row.problem;
        out += ',';
        out += std::to_string(row.seed);
        out += ',';
        out += std::to_string(row.iteration);
        std::snprintf(buf, sizeof(buf), ",%.10f,%.3f\n", row.best_fitness, row.wall_ms);
        out += buf;
    }
    return out;
}

namespace {

std::string file_stem(const std::string& path) {
    return std::filesystem::path(path).stem().string();
}

ProblemMatrix load_problem(const std::string& path) {
    ParsedMatrix parsed = read_matrix(read_text_file(path));
    if (std::holds_alternative<SolutionMatrix>(parsed))
        throw std::invalid_argument(path + " holds a solution matrix, not a problem");
    return std::get<ProblemMatrix>(std::move(parsed));
}

}  // namespace

RunOutput run_one(const RunConfig& config, std::uint64_t seed, EvalBackend& backend) {
    if (config.budget < 1) throw std::invalid_argument("budget must be at least 1");

    RunOutput out;
    const std::string algo = algorithm_name(config.algorithm);

    if (config.algorithm == Algorithm::Erl) {
        if (config.problem_file)
            throw std::invalid_argument("the policy solver trains on generated problems, "
                                        "not a fixed problem file");
        if (config.size != 3 && config.size != 6)
            throw std::invalid_argument("the policy solver supports sizes 3 and 6 only");

        ErlConfig ec = config.erl;
        ec.generations = config.budget;
        ErlResult result =
            run_erl(config.size, config.obstacles, backend, config.sim, config.weights, ec, seed);

        const std::string pid = problem_id(config.size, config.obstacles);
        double running = 0.0;
        for (const ErlTraceRow& row : result.trace) {
            running = std::max(running, row.best_fitness);
            out.trace.push_back({algo, pid, seed, row.generation, running, row.wall_ms});
        }
        out.best_fitness = running;

        // The champion policy replayed on the canonical benchmark instance
        // gives the representative overlay for this run.
        Policy replay = result.best;
        const ProblemMatrix bench = make_benchmark(config.size, config.obstacles, 0);
        SolutionMatrix final_working(config.size);
        run_episode(replay, bench, backend, config.sim, config.weights, ec.history_cap,
                    &final_working);
        out.best = final_working;

        out.solver_trace_csv = erl_trace_csv(result.trace);
        out.artifact_text = format_policy(result.best.program);
        out.artifact_name = "best_policy.txt";
        return out;
    }

    const ProblemMatrix problem = config.problem_file ? load_problem(*config.problem_file)
                                                      : make_benchmark(config.size,
                                                                       config.obstacles, 0);
    const std::string pid =
        config.problem_file ? file_stem(*config.problem_file)
                            : problem_id(config.size, config.obstacles);

    if (config.algorithm == Algorithm::Psa) {
        PsaConfig pc = config.psa;
        pc.iterations = config.budget;
        PsaResult result = run_psa(problem, backend, config.sim, config.weights, pc, seed);
        for (const PsaTraceRow& row : result.trace)
            out.trace.push_back({algo, pid, seed, row.iteration, row.best_fitness, row.wall_ms});
        out.best = result.best;
        out.best_fitness = result.best_fitness;
        out.solver_trace_csv = psa_trace_csv(result.trace);
        return out;
    }

    QgpConfig qc = config.qgp;
    qc.generations = config.budget;
    QgpResult result = run_qgp(problem, backend, config.sim, config.weights, qc, seed);
    for (const QgpTraceRow& row : result.trace)
        out.trace.push_back({algo, pid, seed, row.generation, row.best_fitness, row.wall_ms});
    out.best = result.best;
    out.best_fitness = result.best_fitness;
    out.solver_trace_csv = qgp_trace_csv(result.trace);
    out.artifact_text = format_genome(result.best_genome);
    out.artifact_name = "best_genome.txt";
    return out;
}

std::unique_ptr<EvalBackend> make_backend(const RunConfig& config) {
    if (config.backend == BackendKind::Sim) return std::make_unique<SimBackend>();
    return std::make_unique<RconBackend>(config.rcon.host, config.rcon.port,
                                         config.rcon.password, config.rcon.timeout_seconds);
}

std::vector<SuiteCell> suite_cells() {
    std::vector<SuiteCell> cells;
    for (Algorithm algo : {Algorithm::Psa, Algorithm::Qgp})
        for (int size : {3, 6, 12})
            for (bool obstacles : {false, true}) cells.push_back({algo, size, obstacles});
    for (bool obstacles : {false, true}) cells.push_back({Algorithm::Erl, 3, obstacles});
    return cells;
}

namespace {

std::string csv_safe(std::string text) {
    for (char& c : text)
        if (c == ',' || c == '\n' || c == '\r') c = ' ';
    return text;
}

}  // namespace

double quantile(std::vector<double> values, double p) {
    if (values.empty()) throw std::invalid_argument("quantile of an empty sample");
    if (p < 0.0 || p > 1.0) throw std::invalid_argument("quantile position outside [0, 1]");
    std::sort(values.begin(), values.end());
    const double pos = p * static_cast<double>(values.size() - 1);
    const auto lo = static_cast<std::size_t>(pos);
    if (lo + 1 >= values.size()) return values.back();
    const double frac = pos - static_cast<double>(lo);
    return values[lo] + frac * (values[lo + 1] - values[lo]);
}

std::string curves_csv(const std::vector<SuiteCellResult>& cells) {
    std::string out = "algorithm,problem,iteration,mean_best_fitness\n";
    char buf[48];
    for (const SuiteCellResult& cell : cells) {
        if (cell.rows.empty()) continue;
        std::vector<int> order;
        std::unordered_map<int, std::pair<double, int>> sums;
        for (const TraceRow& row : cell.rows) {
            auto [it, fresh] = sums.try_emplace(row.iteration, 0.0, 0);
            if (fresh) order.push_back(row.iteration);
            it->second.first += row.best_fitness;
            it->second.second += 1;
        }
        for (int iteration : order) {
            const auto& [sum, count] = sums[iteration];
            out += cell.algorithm;
            out += ',';
            out += cell.problem;
            out += ',';
            out += std::to_string(iteration);
            std::snprintf(buf, sizeof(buf), ",%.10f\n", sum / count);
            out += buf;
        }
    }
    return out;
}

std::string summary_csv(const std::vector<SuiteCellResult>& cells) {
    std::string out = "algorithm,problem,median,iqr,status\n";
    char buf[64];
    for (const SuiteCellResult& cell : cells) {
        out += cell.algorithm;
        out += ',';
        out += cell.problem;
        if (cell.ok && !cell.finals.empty()) {
            const double median = quantile(cell.finals, 0.5);
            const double iqr = quantile(cell.finals, 0.75) - quantile(cell.finals, 0.25);
            std::snprintf(buf, sizeof(buf), ",%.10f,%.10f,ok\n", median, iqr);
            out += buf;
        } else {
            out += ",,,failed: " + csv_safe(cell.error) + "\n";
        }
    }
    return out;
}

SuiteResult run_suite(const SuiteConfig& config) {
    if (config.jobs < 1) throw std::invalid_argument("jobs must be at least 1");
    if (config.run.replicates < 1) throw std::invalid_argument("replicates must be at least 1");

    const std::vector<SuiteCell> cells = suite_cells();
    std::vector<SuiteCellResult> results(cells.size());

    std::atomic<std::size_t> cursor{0};
    const auto worker = [&] {
        for (;;) {
            const std::size_t at = cursor.fetch_add(1);
            if (at >= cells.size()) return;
            const SuiteCell& cell = cells[at];
            SuiteCellResult& result = results[at];
            result.algorithm = algorithm_name(cell.algorithm);
            result.problem = problem_id(cell.size, cell.obstacles);

            RunConfig rc = config.run;
            rc.algorithm = cell.algorithm;
            rc.size = cell.size;
            rc.obstacles = cell.obstacles;
            rc.problem_file.reset();
            try {
                const std::unique_ptr<EvalBackend> backend = make_backend(rc);
                for (int r = 0; r < rc.replicates; ++r) {
                    RunOutput out = run_one(rc, rc.seed + static_cast<std::uint64_t>(r), *backend);
                    result.rows.insert(result.rows.end(), out.trace.begin(), out.trace.end());
                    result.finals.push_back(out.best_fitness);
                }
                result.ok = true;
            } catch (const std::exception& e) {
                result.ok = false;
                result.error = e.what();
                result.rows.clear();
                result.finals.clear();
            }
        }
    };

    std::vector<std::thread> threads;
    const std::size_t count =
        std::min<std::size_t>(static_cast<std::size_t>(config.jobs), cells.size());
    threads.reserve(count);
    for (std::size_t t = 0; t < count; ++t) threads.emplace_back(worker);
    for (std::thread& t : threads) t.join();

    std::filesystem::create_directories(config.out_dir);
    std::vector<TraceRow> all_rows;
    for (const SuiteCellResult& cell : results)
        all_rows.insert(all_rows.end(), cell.rows.begin(), cell.rows.end());

    SuiteResult suite;
    suite.cells = std::move(results);
    suite.trace_path = (std::filesystem::path(config.out_dir) / "trace.csv").string();
    suite.curves_path = (std::filesystem::path(config.out_dir) / "curves.csv").string();
    suite.summary_path = (std::filesystem::path(config.out_dir) / "summary.csv").string();
    write_text_atomic(suite.trace_path, trace_csv(all_rows));
    write_text_atomic(suite.curves_path, curves_csv(suite.cells));
    write_text_atomic(suite.summary_path, summary_csv(suite.cells));
    return suite;
}

namespace {

std::vector<std::string> split_fields(const std::string& line) {
    std::vector<std::string> fields;
    std::string field;
    for (char c : line) {
        if (c == ',') {
            fields.push_back(std::move(field));
            field.clear();
        } else {
            field.push_back(c);
        }
    }
    fields.push_back(std::move(field));
    return fields;
}

}  // namespace

PlotData plot_from_csv(const std::string& csv_text, bool log_y) {
    PlotData data;
    data.log_y = log_y;

    std::vector<std::string> lines;
    std::string line;
    std::istringstream in(csv_text);
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        lines.push_back(line);
    }
    while (!lines.empty() && lines.back().empty()) lines.pop_back();
    if (lines.empty()) return data;

    const std::vector<std::string> header = split_fields(lines[0]);
    std::size_t iteration_col = header.size();
    std::size_t value_col = header.size();
    std::vector<std::size_t> identity_cols;
    for (std::size_t c = 0; c < header.size(); ++c) {
        if (header[c] == "iteration" || header[c] == "generation") iteration_col = c;
        else if (header[c] == "best_fitness" || header[c] == "mean_best_fitness") value_col = c;
        else if (header[c] != "wall_ms") identity_cols.push_back(c);
    }
    if (iteration_col == header.size())
        throw std::invalid_argument("csv has no iteration column");
    if (value_col == header.size())
        throw std::invalid_argument("csv has no fitness column");

    std::unordered_map<std::string, std::size_t> index;
    for (std::size_t ln = 1; ln < lines.size(); ++ln) {
        if (lines[ln].empty()) continue;
        const std::vector<std::string> fields = split_fields(lines[ln]);
        if (fields.size() != header.size())
            throw std::invalid_argument("csv line " + std::to_string(ln + 1) + ": expected " +
                                        std::to_string(header.size()) + " fields, got " +
                                        std::to_string(fields.size()));
        int iteration = 0;
        double value = 0.0;
        try {
            iteration = std::stoi(fields[iteration_col]);
            value = std::stod(fields[value_col]);
        } catch (const std::exception&) {
            throw std::invalid_argument("csv line " + std::to_string(ln + 1) +
                                        ": unparseable number");
        }

        std::string label;
        for (std::size_t c : identity_cols) {
            if (!label.empty()) label += '/';
            label += fields[c];
        }
        if (label.empty()) label = "series";

        auto [it, fresh] = index.try_emplace(label, data.series.size());
        if (fresh) data.series.push_back({label, {}, {}});
        if (log_y && value <= 0.0) continue;  // no place on a log axis
        PlotSeries& series = data.series[it->second];
        series.iterations.push_back(iteration);
        series.values.push_back(value);
    }
    return data;
}

std::string plot_json(const PlotData& data) {
    nlohmann::json j;
    j["log_y"] = data.log_y;
    j["series"] = nlohmann::json::array();
    for (const PlotSeries& s : data.series) {
        nlohmann::json entry;
        entry["label"] = s.label;
        entry["iterations"] = s.iterations;
        entry["values"] = s.values;
        j["series"].push_back(std::move(entry));
    }
    return j.dump(2) + "\n";
}

std::string plot_svg(const PlotData& data) {
    constexpr int kWidth = 720;
    constexpr int kHeight = 440;
    constexpr int kMarginLeft = 70;
    constexpr int kMarginRight = 20;
    constexpr int kMarginTop = 20;
    constexpr int kMarginBottom = 50;
    static const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                                     "#ff7f0e", "#8c564b", "#17becf", "#7f7f7f"};

    std::string svg = "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" +
                      std::to_string(kWidth) + "\" height=\"" + std::to_string(kHeight) + "\">\n";

    int min_x = 0, max_x = 1;
    double min_y = 0.0, max_y = 1.0;
    bool any = false;
    for (const PlotSeries& s : data.series) {
        for (std::size_t k = 0; k < s.iterations.size(); ++k) {
            if (!any) {
                min_x = max_x = s.iterations[k];
                min_y = max_y = s.values[k];
                any = true;
            } else {
                min_x = std::min(min_x, s.iterations[k]);
                max_x = std::max(max_x, s.iterations[k]);
                min_y = std::min(min_y, s.values[k]);
                max_y = std::max(max_y, s.values[k]);
            }
        }
    }
    if (!any) {
        svg += "  <text x=\"360\" y=\"220\" text-anchor=\"middle\" "
               "font-family=\"sans-serif\">no data</text>\n</svg>\n";
        return svg;
    }
    if (!data.log_y && min_y > 0.0) min_y = 0.0;
    if (max_x == min_x) max_x = min_x + 1;
    if (max_y == min_y) max_y = min_y + 1.0;

    const auto x_of = [&](int iteration) {
        const double t = static_cast<double>(iteration - min_x) /
                         static_cast<double>(max_x - min_x);
        return kMarginLeft + t * (kWidth - kMarginLeft - kMarginRight);
    };
    const auto y_of = [&](double value) {
        double t;
        if (data.log_y)
            t = (std::log10(value) - std::log10(min_y)) /
                (std::log10(max_y) - std::log10(min_y));
        else
            t = (value - min_y) / (max_y - min_y);
        return kHeight - kMarginBottom - t * (kHeight - kMarginTop - kMarginBottom);
    };

    char buf[160];
    std::snprintf(buf, sizeof(buf),
                  "  <line x1=\"%d\" y1=\"%d\" x2=\"%d\" y2=\"%d\" stroke=\"#333\"/>\n",
                  kMarginLeft, kHeight - kMarginBottom, kWidth - kMarginRight,
                  kHeight - kMarginBottom);
    svg += buf;
    std::snprintf(buf, sizeof(buf),
                  "  <line x1=\"%d\" y1=\"%d\" x2=\"%d\" y2=\"%d\" stroke=\"#333\"/>\n",
                  kMarginLeft, kMarginTop, kMarginLeft, kHeight - kMarginBottom);
    svg += buf;
    std::snprintf(buf, sizeof(buf),
                  "  <text x=\"%d\" y=\"%d\" font-family=\"sans-serif\" font-size=\"12\">%d</text>\n",
                  kMarginLeft, kHeight - kMarginBottom + 16, min_x);
    svg += buf;
    std::snprintf(buf, sizeof(buf),
                  "  <text x=\"%d\" y=\"%d\" text-anchor=\"end\" font-family=\"sans-serif\" "
                  "font-size=\"12\">%d</text>\n",
                  kWidth - kMarginRight, kHeight - kMarginBottom + 16, max_x);
    svg += buf;
    std::snprintf(buf, sizeof(buf),
                  "  <text x=\"%d\" y=\"%d\" text-anchor=\"end\" font-family=\"sans-serif\" "
                  "font-size=\"12\">%.4g</text>\n",
                  kMarginLeft - 6, kHeight - kMarginBottom, min_y);
    svg += buf;
    std::snprintf(buf, sizeof(buf),
                  "  <text x=\"%d\" y=\"%d\" text-anchor=\"end\" font-family=\"sans-serif\" "
                  "font-size=\"12\">%.4g</text>\n",
                  kMarginLeft - 6, kMarginTop + 10, max_y);
    svg += buf;

    for (std::size_t s = 0; s < data.series.size(); ++s) {
        const PlotSeries& series = data.series[s];
        if (series.iterations.empty()) continue;
        svg += "  <polyline fill=\"none\" stroke=\"";
        svg += kPalette[s % (sizeof(kPalette) / sizeof(kPalette[0]))];
        svg += "\" stroke-width=\"1.5\" points=\"";
        for (std::size_t k = 0; k < series.iterations.size(); ++k) {
            std::snprintf(buf, sizeof(buf), "%.1f,%.1f ", x_of(series.iterations[k]),
                          y_of(series.values[k]));
            svg += buf;
        }
        svg += "\"/>\n";
        std::snprintf(buf, sizeof(buf),
                      "  <text x=\"%d\" y=\"%d\" font-family=\"sans-serif\" font-size=\"12\" "
                      "fill=\"%s\">",
                      kWidth - kMarginRight - 150, kMarginTop + 14 + static_cast<int>(s) * 16,
                      kPalette[s % (sizeof(kPalette) / sizeof(kPalette[0]))]);
        svg += buf;
        svg += series.label;
        svg += "</text>\n";
    }
    svg += "</svg>\n";
    return svg;
}

namespace {

std::string trim(const std::string& text) {
    std::size_t a = 0;
    std::size_t b = text.size();
    while (a < b && (text[a] == ' ' || text[a] == '\t')) ++a;
    while (b > a && (text[b - 1] == ' ' || text[b - 1] == '\t' || text[b - 1] == '\r')) --b;
    return text.substr(a, b - a);
}

[[noreturn]] void config_fail(int line_no, const std::string& what) {
    throw std::invalid_argument("config line " + std::to_string(line_no) + ": " + what);
}

int to_int(const std::string& value, int line_no) {
    try {
        std::size_t used = 0;
        const int parsed = std::stoi(value, &used);
        if (used != value.size()) config_fail(line_no, "not an integer: " + value);
        return parsed;
    } catch (const std::invalid_argument&) {
        config_fail(line_no, "not an integer: " + value);
    } catch (const std::out_of_range&) {
        config_fail(line_no, "integer out of range: " + value);
    }
}

double to_double(const std::string& value, int line_no) {
    try {
        std::size_t used = 0;
        const double parsed = std::stod(value, &used);
        if (used != value.size()) config_fail(line_no, "not a number: " + value);
        return parsed;
    } catch (const std::invalid_argument&) {
        config_fail(line_no, "not a number: " + value);
    } catch (const std::out_of_range&) {
        config_fail(line_no, "number out of range: " + value);
    }
}

std::uint64_t to_u64(const std::string& value, int line_no) {
    try {
        std::size_t used = 0;
        const std::uint64_t parsed = std::stoull(value, &used);
        if (used != value.size()) config_fail(line_no, "not an integer: " + value);
        return parsed;
    } catch (const std::invalid_argument&) {
        config_fail(line_no, "not an integer: " + value);
    } catch (const std::out_of_range&) {
        config_fail(line_no, "integer out of range: " + value);
    }
}

bool to_bool(const std::string& value, int line_no) {
    if (value == "true" || value == "1" || value == "yes" || value == "on") return true;
    if (value == "false" || value == "0" || value == "no" || value == "off") return false;
    config_fail(line_no, "not a boolean: " + value);
}

}  // namespace

void apply_config_text(const std::string& text, SuiteConfig& config) {
    std::istringstream in(text);
    std::string raw;
    std::string section;
    int line_no = 0;
    while (std::getline(in, raw)) {
        ++line_no;
        const std::string line = trim(raw);
        if (line.empty() || line[0] == '#') continue;

        if (line.front() == '[') {
            if (line.back() != ']') config_fail(line_no, "unterminated section header");
            section = line.substr(1, line.size() - 2);
            if (section != "psa" && section != "qgp" && section != "erl" && section != "sim" &&
                section != "weights" && section != "rcon")
                config_fail(line_no, "unknown section [" + section + "]");
            continue;
        }

        const std::size_t eq = line.find('=');
        if (eq == std::string::npos) config_fail(line_no, "expected key=value");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty()) config_fail(line_no, "empty key");

        if (section.empty()) {
            if (key == "algorithm" || key == "algo") {
                try {
                    config.run.algorithm = parse_algorithm(value);
                } catch (const std::invalid_argument& e) {
                    config_fail(line_no, e.what());
                }
            } else if (key == "size") config.run.size = to_int(value, line_no);
            else if (key == "obstacles") config.run.obstacles = to_bool(value, line_no);
            else if (key == "problem") config.run.problem_file = value;
            else if (key == "seed") config.run.seed = to_u64(value, line_no);
            else if (key == "budget") config.run.budget = to_int(value, line_no);
            else if (key == "replicates") config.run.replicates = to_int(value, line_no);
            else if (key == "backend") {
                try {
                    config.run.backend = parse_backend(value);
                } catch (const std::invalid_argument& e) {
                    config_fail(line_no, e.what());
                }
            } else if (key == "jobs") config.jobs = to_int(value, line_no);
            else if (key == "out" || key == "out_dir") config.out_dir = value;
            else config_fail(line_no, "unknown key: " + key);
        } else if (section == "psa") {
            if (key == "initial_temperature") config.run.psa.initial_temperature = to_double(value, line_no);
            else if (key == "final_temperature") config.run.psa.final_temperature = to_double(value, line_no);
            else if (key == "cooling_rate") config.run.psa.cooling_rate = to_double(value, line_no);
            else if (key == "chains") config.run.psa.chains = to_int(value, line_no);
            else if (key == "iterations") config.run.psa.iterations = to_int(value, line_no);
            else config_fail(line_no, "unknown key in [psa]: " + key);
        } else if (section == "qgp") {
            if (key == "population") config.run.qgp.population = to_int(value, line_no);
            else if (key == "generations") config.run.qgp.generations = to_int(value, line_no);
            else if (key == "init_length") config.run.qgp.init_length = to_int(value, line_no);
            else if (key == "max_length") config.run.qgp.max_length = to_int(value, line_no);
            else if (key == "tournament") config.run.qgp.tournament = to_int(value, line_no);
            else if (key == "operator_prob") config.run.qgp.operator_prob = to_double(value, line_no);
            else if (key == "replace_prob") config.run.qgp.replace_prob = to_double(value, line_no);
            else if (key == "insert_prob") config.run.qgp.insert_prob = to_double(value, line_no);
            else if (key == "delete_prob") config.run.qgp.delete_prob = to_double(value, line_no);
            else config_fail(line_no, "unknown key in [qgp]: " + key);
        } else if (section == "erl") {
            if (key == "population") config.run.erl.population = to_int(value, line_no);
            else if (key == "generations") config.run.erl.generations = to_int(value, line_no);
            else if (key == "episodes_per_gen") config.run.erl.episodes_per_gen = to_int(value, line_no);
            else if (key == "history_cap") config.run.erl.history_cap = to_int(value, line_no);
            else if (key == "crossover_prob") config.run.erl.crossover_prob = to_double(value, line_no);
            else if (key == "replace_prob") config.run.erl.replace_prob = to_double(value, line_no);
            else if (key == "insert_prob") config.run.erl.insert_prob = to_double(value, line_no);
            else if (key == "delete_prob") config.run.erl.delete_prob = to_double(value, line_no);
            else if (key == "init_min") config.run.erl.init_min = to_int(value, line_no);
            else if (key == "init_max") config.run.erl.init_max = to_int(value, line_no);
            else config_fail(line_no, "unknown key in [erl]: " + key);
        } else if (section == "sim") {
            if (key == "ticks") config.run.sim.ticks = to_int(value, line_no);
            else if (key == "inserter_period") config.run.sim.inserter_period = to_int(value, line_no);
            else config_fail(line_no, "unknown key in [sim]: " + key);
        } else if (section == "weights") {
            if (key == "output_weight") config.run.weights.output_weight = to_double(value, line_no);
            else if (key == "input_weight") config.run.weights.input_weight = to_double(value, line_no);
            else config_fail(line_no, "unknown key in [weights]: " + key);
        } else {  // rcon
            if (key == "host") config.run.rcon.host = value;
            else if (key == "port") config.run.rcon.port = to_int(value, line_no);
            else if (key == "password") config.run.rcon.password = value;
            else if (key == "timeout_seconds") config.run.rcon.timeout_seconds = to_double(value, line_no);
            else config_fail(line_no, "unknown key in [rcon]: " + key);
        }
    }
}

void apply_config_file(const std::string& path, SuiteConfig& config) {
    apply_config_text(read_text_file(path), config);
}

std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot read " + path);
    std::stringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

void write_text_atomic(const std::string& path, const std::string& content) {
    const std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw std::runtime_error("cannot write " + tmp);
        out << content;
        if (!out) throw std::runtime_error("short write to " + tmp);
    }
    if (std::rename(tmp.c_str(), path.c_str()) != 0)
        throw std::runtime_error("cannot move " + tmp + " into place");
}

}  // namespace beltforge
