#include "takeover/cli.hpp"

#include "takeover/errors.hpp"
#include "takeover/spec_io.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

namespace takeover {

namespace {

namespace fs = std::filesystem;

// TAKEOVER_LOG=info|debug turns on progress notes (stderr); anything else
// keeps the tool quiet.
int log_level() {
    const char* env = std::getenv("TAKEOVER_LOG");
    if (!env) return 0;
    std::string v(env);
    if (v == "debug") return 2;
    if (v == "info") return 1;
    return 0;
}

void log_info(const std::string& msg) {
    if (log_level() >= 1) std::cerr << "[takeover] " << msg << "\n";
}

void log_debug(const std::string& msg) {
    if (log_level() >= 2) std::cerr << "[takeover] " << msg << "\n";
}

void write_file(const fs::path& p, const std::string& content) {
    std::ofstream out(p, std::ios::binary);
    if (!out) throw SpecError(p.string() + ": cannot open for writing");
    out << content;
    out.flush();
    if (!out) throw SpecError(p.string() + ": write failed");
    log_debug("wrote " + p.string() + " (" + std::to_string(content.size()) + " bytes)");
}

int resolve_node_arg(const SpecDocument& doc, const std::string& arg) {
    for (size_t i = 0; i < doc.node_names.size(); ++i)
        if (doc.node_names[i] == arg) return (int)i;
    try {
        size_t used = 0;
        long v = std::stol(arg, &used);
        if (used == arg.size() && v >= 0 && v < (long)doc.node_names.size()) return (int)v;
    } catch (...) {
    }
    throw SpecError("--alpha1: \"" + arg + "\" is neither a node name nor a node index");
}

int nearest_grid_index(const std::vector<double>& grid, double x) {
    int best = 0;
    for (size_t i = 1; i < grid.size(); ++i)
        if (std::abs(grid[i] - x) < std::abs(grid[best] - x)) best = (int)i;
    return best;
}

struct Options {
    std::string spec_path;
    std::string out_dir = ".";
    std::string format = "json";
    bool serial = false;
    long samples = 100000;
    uint64_t seed = 1;
    double x1 = 1.0;
    std::string alpha1;
    double tol = 1e-6;
    std::string example_name;
};

void emit_bundle(const ResultBundle& bundle, const Options& opt) {
    fs::create_directories(opt.out_dir);
    if (opt.format == "json") {
        write_file(fs::path(opt.out_dir) / "result.json", emit_json(bundle));
        std::cout << "wrote " << (fs::path(opt.out_dir) / "result.json").string() << "\n";
        return;
    }
    write_file(fs::path(opt.out_dir) / "values.csv", emit_values_csv(bundle));
    write_file(fs::path(opt.out_dir) / "policy_defender.csv", emit_policy_csv(bundle, Side::defender));
    write_file(fs::path(opt.out_dir) / "policy_adversary.csv", emit_policy_csv(bundle, Side::adversary));
    std::cout << "wrote " << (fs::path(opt.out_dir) / "values.csv").string() << ", "
              << (fs::path(opt.out_dir) / "policy_defender.csv").string() << ", "
              << (fs::path(opt.out_dir) / "policy_adversary.csv").string() << "\n";
}

void print_solve_summary(const SpecDocument& doc, const ResultBundle& bundle) {
    std::cout << "model " << to_string(doc.model) << ", horizon " << doc.horizon << ", "
              << doc.node_names.size() << " nodes\n";
    if (doc.model == ModelKind::general) {
        double lo = bundle.grid.value[0][0][0], hi = lo;
        for (const auto& node : bundle.grid.value[0])
            for (double v : node) {
                lo = std::min(lo, v);
                hi = std::max(hi, v);
            }
        std::cout << "value at k=1 spans [" << lo << ", " << hi << "] over the grid\n";
        return;
    }
    std::cout << "coefficients at k=1:";
    for (size_t v = 0; v < doc.node_names.size(); ++v)
        std::cout << " " << doc.node_names[v] << "=" << bundle.scalar.p[0][v];
    std::cout << "\n";
    if (doc.model == ModelKind::dual_deter) {
        int overridden = 0, ties = 0;
        for (const BranchRecord& r : bundle.branches) {
            if (r.branch == ChainBranch::lp_tie)
                ++ties;
            else if (r.used_lp)
                ++overridden;
        }
        std::cout << "closed-form branches: " << bundle.branches.size() << " solved, " << overridden
                  << " overridden by the LP cross-check, " << ties << " routed to the LP on ties\n";
    }
}

int run_solve(const Options& opt) {
    SpecDocument doc = load_spec_file(opt.spec_path);
    log_info("parsed " + opt.spec_path);
    ResultBundle bundle = solve_document(doc, opt.serial ? RunMode::serial : RunMode::parallel);
    log_info("solved");
    print_solve_summary(doc, bundle);
    emit_bundle(bundle, opt);
    return 0;
}

int run_simulate(const Options& opt) {
    SpecDocument doc = load_spec_file(opt.spec_path);
    ResultBundle bundle = solve_document(doc, opt.serial ? RunMode::serial : RunMode::parallel);
    const RunMode mode = opt.serial ? RunMode::serial : RunMode::parallel;
    const int start = opt.alpha1.empty() ? 0 : resolve_node_arg(doc, opt.alpha1);

    SimulationSummary sim;
    sim.present = true;
    sim.start_node = start;
    sim.samples = opt.samples;
    sim.seed = opt.seed;

    if (doc.model == ModelKind::general) {
        const int xi = nearest_grid_index(doc.grid.grid, opt.x1);
        sim.x1 = doc.grid.grid[xi];  // snapped start state
        sim.estimate = estimate_expected_cost(doc.grid, bundle.form, bundle.grid, xi, start, opt.samples,
                                              opt.seed, mode);
        sim.solver_value = value_at(bundle.grid, 0, start, xi);
    } else {
        const ScalarProblem prob = doc.model == ModelKind::scalar_lq ? lower(doc.scalar) : lower(doc.chain);
        sim.x1 = opt.x1;
        sim.estimate = estimate_expected_cost(prob, bundle.scalar, opt.x1, start, opt.samples, opt.seed, mode);
        sim.solver_value = value_at(bundle.scalar, 0, start, opt.x1);
    }
    bundle.simulation = sim;

    std::cout << "simulated " << sim.samples << " rollouts from " << doc.node_names[start] << " at x1=" << sim.x1
              << ": mean " << sim.estimate.mean << ", std error " << sim.estimate.std_error
              << ", solver value " << sim.solver_value << "\n";
    emit_bundle(bundle, opt);
    return 0;
}

int run_verify(const Options& opt) {
    SpecDocument doc = load_spec_file(opt.spec_path);
    ResultBundle bundle = solve_document(doc, opt.serial ? RunMode::serial : RunMode::parallel);

    SaddleReport report;
    if (doc.model == ModelKind::general) {
        report = saddle_check_all(doc.grid, bundle.form, bundle.grid, opt.tol);
    } else {
        const ScalarProblem prob = doc.model == ModelKind::scalar_lq ? lower(doc.scalar) : lower(doc.chain);
        report = saddle_check_all(prob, bundle.scalar, 1.0, opt.tol);
    }

    std::cout << "best-response gaps: defender " << report.gap_defender << ", adversary "
              << report.gap_adversary << " (tol " << opt.tol << ")\n";

    if (doc.model == ModelKind::dual_deter) {
        int agreed = 0, overridden = 0, ties = 0;
        double worst = 0.0;
        for (const BranchRecord& r : bundle.branches) {
            if (r.branch == ChainBranch::lp_tie) {
                ++ties;
                continue;
            }
            if (r.agreed) {
                ++agreed;
                worst = std::max(worst, std::abs(r.closed_value - r.lp_value));
            } else {
                ++overridden;
            }
        }
        std::cout << "closed form vs LP: " << agreed << " agreed (worst gap " << worst << "), " << overridden
                  << " overridden, " << ties << " ties\n";
    }

    if (!report.ok) {
        std::cout << "verification FAILED\n";
        return 3;
    }
    std::cout << "verification OK\n";
    return 0;
}

int run_example(const Options& opt) {
    const std::string& body = bundled_example_json(opt.example_name);
    fs::create_directories(opt.out_dir);
    std::string file = opt.example_name == "stock-market" ? "stock_market.json" : opt.example_name + ".json";
    write_file(fs::path(opt.out_dir) / file, body);
    std::cout << "wrote " << (fs::path(opt.out_dir) / file).string() << "\n";
    return 0;
}

}  // namespace

int cli_main(int argc, const char* const* argv) {
    CLI::App app{"Finite-horizon zero-sum takeover games on graphs: solve, simulate, verify."};
    app.require_subcommand(1);
    Options opt;

    CLI::App* solve_cmd = app.add_subcommand("solve", "Solve a spec and write the result bundle");
    solve_cmd->add_option("spec", opt.spec_path, "Game spec (JSON)")->required();
    solve_cmd->add_option("--out", opt.out_dir, "Output directory (default .)");
    solve_cmd->add_option("--format", opt.format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
    solve_cmd->add_flag("--serial", opt.serial, "Single-threaded kernels");

    CLI::App* sim_cmd = app.add_subcommand("simulate", "Solve, then Monte-Carlo the solved policies");
    sim_cmd->add_option("spec", opt.spec_path, "Game spec (JSON)")->required();
    sim_cmd->add_option("--samples", opt.samples, "Rollout count")->required();
    sim_cmd->add_option("--seed", opt.seed, "Stream seed (default 1)");
    sim_cmd->add_option("--x1", opt.x1, "Initial continuous state (default 1.0)");
    sim_cmd->add_option("--alpha1", opt.alpha1, "Initial node, name or index (default first node)");
    sim_cmd->add_option("--out", opt.out_dir, "Output directory (default .)");
    sim_cmd->add_option("--format", opt.format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
    sim_cmd->add_flag("--serial", opt.serial, "Single-threaded kernels");

    CLI::App* verify_cmd = app.add_subcommand("verify", "Certify the saddle point and cross-checks");
    verify_cmd->add_option("spec", opt.spec_path, "Game spec (JSON)")->required();
    verify_cmd->add_option("--tol", opt.tol, "Best-response gap tolerance (default 1e-6)");
    verify_cmd->add_flag("--serial", opt.serial, "Single-threaded kernels");

    CLI::App* example_cmd = app.add_subcommand("example", "Write a bundled example spec");
    example_cmd->add_option("name", opt.example_name, "sird or stock-market")
        ->required()
        ->check(CLI::IsMember(bundled_example_names()));
    example_cmd->add_option("--out", opt.out_dir, "Output directory (default .)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? 0 : 1;  // usage problems count as validation failures
    }

    try {
        if (solve_cmd->parsed()) return run_solve(opt);
        if (sim_cmd->parsed()) return run_simulate(opt);
        if (verify_cmd->parsed()) return run_verify(opt);
        if (example_cmd->parsed()) return run_example(opt);
    } catch (const SpecError& e) {
        for (const std::string& issue : e.issues) std::cerr << "spec error: " << issue << "\n";
        return 1;
    } catch (const SolveError& e) {
        std::cerr << "solver error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}

}  // namespace takeover
