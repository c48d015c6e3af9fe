#include "gibbs_tree_cli/commands.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <future>
#include <iomanip>
#include <optional>
#include <ostream>

#include "gibbs_tree/errors.hpp"
#include "gibbs_tree/measure_catalog.hpp"
#include "gibbs_tree/oracle.hpp"
#include "gibbs_tree/root_solver.hpp"
#include "gibbs_tree_cli/sweep.hpp"

namespace gibbs_tree::cli {

namespace {

using nlohmann::json;

// Raised for bad flag combinations detected after CLI11 parsing.
class UsageError : public Error {
public:
    using Error::Error;
};

class IoError : public Error {
public:
    using Error::Error;
};

struct ModelOptions {
    int q = 0;
    int k = 0;
    std::optional<double> theta;
    std::optional<double> coupling;
    std::optional<double> temp;
    std::string set = "im:1";
    std::string out;
    bool json = false;
    int grid = 10'000;
    std::optional<double> tol;
};

void add_model_options(CLI::App& cmd, ModelOptions& o, bool with_theta) {
    cmd.add_option("--q", o.q, "number of spin states")->required();
    cmd.add_option("--k", o.k, "order of the Cayley tree")->required();
    if (with_theta) {
        cmd.add_option("--theta", o.theta, "theta = exp(J / T)");
        cmd.add_option("--coupling", o.coupling, "coupling J (use with --temp)");
        cmd.add_option("--temp", o.temp, "temperature T > 0 (use with --coupling)");
    }
    cmd.add_option("--set", o.set, "im:<m>, imprime:<m> or all")->capture_default_str();
    cmd.add_option("--out", o.out, "write results to PATH (.json for JSON, otherwise CSV)");
    cmd.add_flag("--json", o.json, "machine-readable JSON on stdout");
    cmd.add_option("--grid", o.grid, "scan grid nodes")->capture_default_str();
}

ModelParams resolve_params(const ModelOptions& o) {
    const bool by_coupling = o.coupling.has_value() || o.temp.has_value();
    if (o.theta && by_coupling) throw UsageError("give either --theta or --coupling/--temp, not both");
    if (o.theta) return ModelParams::make(o.q, o.k, *o.theta);
    if (!o.coupling || !o.temp) throw UsageError("--theta or both --coupling and --temp are required");
    if (!(*o.temp > 0.0)) throw HypothesisError("temperature must be positive");
    return ModelParams::from_coupling(o.q, o.k, *o.coupling, 1.0 / *o.temp);
}

std::vector<InvariantSetId> resolve_sets(const std::string& selector, int q) {
    std::vector<InvariantSetId> sets;
    if (selector == "all") {
        for (int m = 1; m <= q - 1; ++m) sets.push_back({SetKind::IM, m});
        for (int m = 1; 2 * m <= q - 1; ++m) sets.push_back({SetKind::IM_PRIME, m});
        return sets;
    }
    try {
        const InvariantSetId id = InvariantSetId::parse(selector);
        id.validate(q);
        sets.push_back(id);
    } catch (const DomainError& e) {
        throw UsageError(std::string("--set: ") + e.what());
    }
    return sets;
}

SolverConfig make_config(const ModelOptions& o) {
    SolverConfig cfg;
    cfg.grid_points = o.grid;
    if (o.tol) cfg.refine_tol = *o.tol;
    try {
        cfg.validate();
    } catch (const DomainError& e) {
        throw UsageError(e.what());
    }
    return cfg;
}

std::ofstream open_output(const std::string& path) {
    std::ofstream f(path);
    if (!f) throw IoError("cannot open '" + path + "' for writing");
    return f;
}

void close_output(std::ofstream& f, const std::string& path) {
    f.close();
    if (!f) throw IoError("failed writing '" + path + "'");
}

bool wants_json_file(const std::string& path) {
    return std::filesystem::path(path).extension() == ".json";
}

json row_json(const SolutionRow& row) {
    json j{{"x", row.x},
           {"y", row.y},
           {"classification", short_name(row.classification)},
           {"residual_full", row.residual_full}};
    j["z"] = row.z ? json(*row.z) : json(nullptr);
    j["t"] = row.t ? json(*row.t) : json(nullptr);
    return j;
}

json records_json(const std::vector<SweepRecord>& records) {
    json arr = json::array();
    for (const auto& rec : records) {
        json rows = json::array();
        for (const auto& r : rec.solutions) rows.push_back(row_json(r));
        arr.push_back({{"theta", rec.theta}, {"set", rec.set.to_string()}, {"count", rec.count()}, {"solutions", rows}});
    }
    return arr;
}

std::optional<double> critical_or_none(const ModelParams& p) {
    try {
        return theta_critical(p.q, p.k);
    } catch (const HypothesisError&) {
        return std::nullopt;
    }
}

void print_table(std::ostream& out, const std::vector<SweepRecord>& records) {
    out << std::left << std::setw(12) << "set" << std::setw(5) << "idx" << std::setw(24) << "x" << std::setw(24)
        << "y" << std::setw(6) << "class" << "residual\n";
    for (const auto& rec : records) {
        for (std::size_t i = 0; i < rec.solutions.size(); ++i) {
            const auto& r = rec.solutions[i];
            out << std::left << std::setw(12) << rec.set.to_string() << std::setw(5) << i << std::setw(24)
                << format_double(r.x) << std::setw(24) << format_double(r.y) << std::setw(6)
                << short_name(r.classification) << std::scientific << std::setprecision(2) << r.residual_full
                << std::defaultfloat << std::setprecision(6) << '\n';
        }
    }
}

int cmd_solve(const ModelOptions& o, std::ostream& out) {
    const ModelParams params = resolve_params(o);
    const auto sets = resolve_sets(o.set, o.q);
    const SolverConfig cfg = make_config(o);
    require_solver_hypothesis(params);

    std::vector<SweepRecord> records;
    for (const auto& set : sets) records.push_back(make_record(params, set, cfg));

    if (!o.out.empty()) {
        std::ofstream f = open_output(o.out);
        if (wants_json_file(o.out)) {
            f << records_json(records).dump(2) << '\n';
        } else {
            write_sweep_csv(f, records);
        }
        close_output(f, o.out);
    }
    const auto cr = critical_or_none(params);
    if (o.json) {
        json j{{"q", params.q}, {"k", params.k}, {"theta", params.theta}, {"sets", records_json(records)}};
        j["theta_critical"] = cr ? json(*cr) : json(nullptr);
        out << j.dump(2) << '\n';
    } else {
        out << "q = " << params.q << ", k = " << params.k << ", theta = " << format_double(params.theta);
        if (cr) out << ", theta_cr = " << format_double(*cr);
        out << '\n';
        print_table(out, records);
    }
    return kExitOk;
}

struct SweepOptions {
    ModelOptions model;
    double theta_min = 0.0;
    double theta_max = 0.0;
    int steps = 0;
    std::string svg;
};

std::vector<double> theta_grid(const SweepOptions& o) {
    if (o.steps < 1) throw UsageError("--steps must be >= 1");
    const bool ok = o.steps == 1 ? (o.theta_min > 0.0 && o.theta_min < 1.0)
                                 : (0.0 < o.theta_min && o.theta_min < o.theta_max && o.theta_max < 1.0);
    if (!ok) throw HypothesisError("sweep needs 0 < theta_min < theta_max < 1");
    std::vector<double> grid(static_cast<std::size_t>(o.steps));
    for (int i = 0; i < o.steps; ++i) {
        grid[static_cast<std::size_t>(i)] =
            o.steps == 1 ? o.theta_min : o.theta_min + (o.theta_max - o.theta_min) * i / (o.steps - 1);
    }
    return grid;
}

int cmd_sweep(const SweepOptions& o, std::ostream& out) {
    const auto sets = resolve_sets(o.model.set, o.model.q);
    const SolverConfig cfg = make_config(o.model);
    const auto grid = theta_grid(o);
    require_solver_hypothesis(ModelParams::make(o.model.q, o.model.k, grid.front()));

    std::vector<std::future<std::vector<SweepRecord>>> jobs;
    jobs.reserve(grid.size());
    for (double theta : grid) {
        jobs.push_back(std::async(std::launch::async, [&, theta] {
            const ModelParams p = ModelParams::make(o.model.q, o.model.k, theta);
            std::vector<SweepRecord> recs;
            for (const auto& set : sets) recs.push_back(make_record(p, set, cfg));
            return recs;
        }));
    }
    std::vector<SweepRecord> records;
    for (auto& job : jobs) {
        auto recs = job.get();
        records.insert(records.end(), recs.begin(), recs.end());
    }

    if (!o.model.out.empty()) {
        std::ofstream f = open_output(o.model.out);
        if (wants_json_file(o.model.out)) {
            f << records_json(records).dump(2) << '\n';
        } else {
            write_sweep_csv(f, records);
        }
        close_output(f, o.model.out);
    }
    if (!o.svg.empty()) {
        std::ofstream f = open_output(o.svg);
        write_bifurcation_svg(f, records,
                              "q = " + std::to_string(o.model.q) + ", k = " + std::to_string(o.model.k));
        close_output(f, o.svg);
    }
    if (o.model.json) {
        out << records_json(records).dump(2) << '\n';
    } else if (o.model.out.empty()) {
        write_sweep_csv(out, records);
    } else {
        out << "theta,set,count\n";
        for (const auto& rec : records) {
            out << format_double(rec.theta) << ',' << rec.set.to_string() << ',' << rec.count() << '\n';
        }
    }
    return kExitOk;
}

int cmd_count(int q, bool as_json, std::ostream& out) {
    const CountReport r = total_lower_bound(q);
    if (as_json) {
        json im = json::array(), prime = json::array();
        for (const auto& [m, c] : r.per_im) im.push_back({{"m", m}, {"count", c}});
        for (const auto& [m, c] : r.per_im_prime) prime.push_back({{"m", m}, {"count", c}});
        out << json{{"q", q}, {"per_im", im}, {"per_im_prime", prime}, {"total_lower_bound", r.total_lower_bound}}
                   .dump(2)
            << '\n';
        return kExitOk;
    }
    out << "q = " << q << '\n' << std::left << std::setw(8) << "set" << std::setw(6) << "m" << "lower_bound\n";
    for (const auto& [m, c] : r.per_im) out << std::setw(8) << "I_m" << std::setw(6) << m << c << '\n';
    for (const auto& [m, c] : r.per_im_prime) out << std::setw(8) << "I'_m" << std::setw(6) << m << c << '\n';
    out << "total " << r.total_lower_bound << '\n';
    return kExitOk;
}

struct VerifyOptions {
    ModelOptions model;
    int depth = 2;
    double tol = 1e-6;
    std::uint64_t seed = 20240611;
};

double enumeration_budget() {
    const char* env = std::getenv(kMaxEnumEnv);
    if (env == nullptr || *env == '\0') return 1e7;
    char* end = nullptr;
    const double v = std::strtod(env, &end);
    if (end == env || *end != '\0' || !(v > 0.0)) {
        throw UsageError(std::string(kMaxEnumEnv) + " must be a positive number");
    }
    return v;
}

int cmd_verify(const VerifyOptions& o, std::ostream& out) {
    const ModelParams params = resolve_params(o.model);
    const auto sets = resolve_sets(o.model.set, o.model.q);
    const SolverConfig cfg = make_config(o.model);
    require_solver_hypothesis(params);
    if (o.depth < 1) throw UsageError("--depth must be >= 1");

    ConsistencyOptions copts;
    copts.seed = o.seed;
    copts.max_enumeration = enumeration_budget();
    const FiniteTree tree = build_tree(params.k, o.depth);
    const double size = enumeration_size(tree, params.q);
    if (size > copts.max_enumeration) {
        throw BudgetError("depth " + std::to_string(o.depth) + " needs " + std::to_string(params.q) + "^" +
                          std::to_string(tree.boundary().size()) + " boundary configurations per sum; budget is " +
                          format_double(copts.max_enumeration) + " (set " + kMaxEnumEnv + " to raise it)");
    }

    bool all_passed = true;
    json results = json::array();
    if (!o.model.json) {
        out << std::left << std::setw(12) << "set" << std::setw(5) << "idx" << std::setw(24) << "x" << std::setw(6)
            << "class" << std::setw(14) << "max_rel_err" << "result\n";
    }
    for (const auto& set : sets) {
        const auto sols = solve_set(params, set, cfg);
        for (std::size_t i = 0; i < sols.size(); ++i) {
            const MeasureDescriptor d = classify(sols[i], params);
            const ConsistencyReport r = check_consistency(tree, params, d.field, o.tol, copts);
            all_passed = all_passed && r.passed;
            if (o.model.json) {
                results.push_back({{"set", set.to_string()},
                                   {"index", i},
                                   {"x", sols[i].x},
                                   {"y", sols[i].y},
                                   {"classification", short_name(d.classification)},
                                   {"max_relative_error", r.max_relative_error},
                                   {"pairs_checked", r.pairs_checked},
                                   {"passed", r.passed}});
            } else {
                char err[32];
                std::snprintf(err, sizeof err, "%.3e", r.max_relative_error);
                out << std::left << std::setw(12) << set.to_string() << std::setw(5) << i << std::setw(24)
                    << format_double(sols[i].x) << std::setw(6) << short_name(d.classification) << std::setw(14)
                    << err << (r.passed ? "PASS" : "FAIL") << '\n';
            }
        }
    }
    if (o.model.json) {
        out << json{{"q", params.q},       {"k", params.k},   {"theta", params.theta}, {"depth", o.depth},
                    {"tolerance", o.tol}, {"results", results}, {"all_passed", all_passed}}
                   .dump(2)
            << '\n';
    }
    return all_passed ? kExitOk : kExitInternal;
}

int cmd_plot(const std::string& csv_path, const std::string& svg_path, bool as_json, std::ostream& out) {
    std::ifstream in(csv_path);
    if (!in) throw IoError("cannot open '" + csv_path + "'");
    std::vector<SweepRecord> records;
    try {
        records = read_sweep_csv(in);
    } catch (const DomainError& e) {
        throw IoError(csv_path + ": " + e.what());
    }
    std::ofstream f = open_output(svg_path);
    write_bifurcation_svg(f, records, std::filesystem::path(csv_path).filename().string());
    close_output(f, svg_path);
    std::size_t points = 0;
    for (const auto& r : records) points += r.count();
    if (as_json) {
        out << json{{"input", csv_path}, {"svg", svg_path}, {"records", records.size()}, {"points", points}}.dump(2)
            << '\n';
    } else {
        out << "wrote " << svg_path << " (" << points << " points from " << records.size() << " records)\n";
    }
    return kExitOk;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Period-two and translation-invariant Gibbs measures of the Potts model on Cayley trees"};
    app.require_subcommand(1);

    ModelOptions solve_opts;
    CLI::App* solve = app.add_subcommand("solve", "solve the reduced systems at one theta");
    add_model_options(*solve, solve_opts, true);
    solve->add_option("--tol", solve_opts.tol, "root refinement tolerance");

    SweepOptions sweep_opts;
    CLI::App* sweep = app.add_subcommand("sweep", "solution branches over a theta grid");
    add_model_options(*sweep, sweep_opts.model, false);
    sweep->add_option("--theta-min", sweep_opts.theta_min)->required();
    sweep->add_option("--theta-max", sweep_opts.theta_max);
    sweep->add_option("--steps", sweep_opts.steps)->required();
    sweep->add_option("--svg", sweep_opts.svg, "write a bifurcation diagram to PATH");
    sweep->add_option("--tol", sweep_opts.model.tol, "root refinement tolerance");

    int count_q = 0;
    bool count_json = false;
    CLI::App* count = app.add_subcommand("count", "lower bounds on the number of period-two measures");
    count->add_option("--q", count_q)->required();
    count->add_flag("--json", count_json);

    VerifyOptions verify_opts;
    CLI::App* verify = app.add_subcommand("verify", "check solutions by exhaustive finite-volume enumeration");
    add_model_options(*verify, verify_opts.model, true);
    verify->add_option("--depth", verify_opts.depth, "tree depth n")->capture_default_str();
    verify->add_option("--tol", verify_opts.tol, "consistency tolerance")->capture_default_str();
    verify->add_option("--seed", verify_opts.seed, "seed for sampled configurations")->capture_default_str();

    std::string plot_in, plot_svg;
    bool plot_json = false;
    CLI::App* plot = app.add_subcommand("plot", "render a sweep CSV as SVG");
    plot->add_option("csv", plot_in, "sweep CSV")->required();
    plot->add_option("--svg,--out", plot_svg, "output SVG path")->required();
    plot->add_flag("--json", plot_json);

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (solve->parsed()) return cmd_solve(solve_opts, out);
        if (sweep->parsed()) return cmd_sweep(sweep_opts, out);
        if (count->parsed()) return cmd_count(count_q, count_json, out);
        if (verify->parsed()) return cmd_verify(verify_opts, out);
        if (plot->parsed()) return cmd_plot(plot_in, plot_svg, plot_json, out);
    } catch (const UsageError& e) {
        err << "usage error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const HypothesisError& e) {
        err << "hypothesis violation: " << e.what() << '\n';
        return kExitHypothesis;
    } catch (const DomainError& e) {
        err << "invalid parameters: " << e.what() << '\n';
        return kExitHypothesis;
    } catch (const BudgetError& e) {
        err << "budget exceeded: " << e.what() << '\n';
        return kExitBudget;
    } catch (const IoError& e) {
        err << "i/o error: " << e.what() << '\n';
        return kExitIo;
    } catch (const std::exception& e) {
        err << "internal error: " << e.what() << '\n';
        return kExitInternal;
    }
    return kExitUsage;
}

}  // namespace gibbs_tree::cli
