#include <CLI11.hpp>
#include <iostream>
#include <optional>
#include <string>

#include "privlp/runconfig.hpp"

namespace {

using privlp::RunArtifacts;
using privlp::RunConfig;

struct CommonFlags {
    std::string config_path;
    std::optional<double> epsilon;
    std::optional<double> alpha;
    std::string solver;
    std::string log_base;
    std::string output;
    bool force_hxy = false;
    int threads = -1;
    std::optional<std::size_t> combination_cap;
    std::optional<int> grid_resolution;
    std::optional<int> refinement_rounds;
};

void attach_common(CLI::App* cmd, CommonFlags& f, bool need_config) {
    auto* opt = cmd->add_option("-c,--config", f.config_path, "JSON run configuration");
    if (need_config) opt->required();
    cmd->add_option("--epsilon", f.epsilon, "leakage budget (overrides config)");
    cmd->add_option("--alpha", f.alpha, "watermark correlation (overrides config)");
    cmd->add_option("--solver", f.solver, "approx|perfect|oracle|invertible|all");
    cmd->add_option("--log-base", f.log_base, "2|e");
    cmd->add_option("-o,--output", f.output, "output path prefix (.json/.csv)");
    cmd->add_flag("--force-hxy", f.force_hxy, "solve even outside H_XY");
    cmd->add_option("--threads", f.threads, "worker threads (default: PRIVLP_THREADS or cores)");
    cmd->add_option("--combination-cap", f.combination_cap, "combination enumeration cap");
    cmd->add_option("--grid-resolution", f.grid_resolution, "oracle grid points per coordinate");
    cmd->add_option("--refinement-rounds", f.refinement_rounds, "oracle refinement rounds");
}

RunConfig build_config(const CommonFlags& f, bool allow_alpha_only) {
    RunConfig cfg;
    if (!f.config_path.empty()) {
        cfg = privlp::load_config_file(f.config_path);
    } else if (allow_alpha_only && f.alpha) {
        nlohmann::json doc;
        doc["alpha"] = *f.alpha;
        cfg = privlp::parse_config(doc);
    } else {
        throw privlp::ConfigError("a --config file (or --alpha for watermark commands) is required");
    }
    if (f.epsilon) {
        cfg.epsilon = *f.epsilon;
        cfg.epsilon_sweep.reset();
    }
    if (f.alpha && cfg.source == privlp::InstanceSource::Watermark) cfg.alpha = *f.alpha;
    if (!f.solver.empty()) cfg.solver = privlp::solver_from_string(f.solver);
    if (!f.log_base.empty())
        cfg.base = f.log_base == "e" ? privlp::LogBase::Natural : privlp::LogBase::Two;
    if (!f.output.empty()) cfg.output = f.output;
    if (f.force_hxy) cfg.force_hxy = true;
    if (f.threads >= 0) cfg.threads = f.threads;
    if (f.combination_cap) cfg.combination_cap = *f.combination_cap;
    if (f.grid_resolution) cfg.oracle_cfg.grid_resolution = *f.grid_resolution;
    if (f.refinement_rounds) cfg.oracle_cfg.refinement_rounds = *f.refinement_rounds;
    return cfg;
}

int emit(const RunConfig& cfg, const RunArtifacts& art) {
    std::cout << art.table;
    privlp::write_artifacts(cfg, art);
    return 0;
}

int classify_error(const std::exception& e) {
    if (dynamic_cast<const privlp::ConfigError*>(&e)) return 2;
    if (dynamic_cast<const privlp::NumericalInconsistency*>(&e) ||
        dynamic_cast<const privlp::LPUnbounded*>(&e) ||
        dynamic_cast<const privlp::LPInfeasible*>(&e) ||
        dynamic_cast<const privlp::IterationLimit*>(&e) ||
        dynamic_cast<const privlp::NoFeasibleCombination*>(&e))
        return 4;
    if (dynamic_cast<const privlp::Error*>(&e)) return 3;
    return 4;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Discrete data-disclosure mechanism design under a per-letter l1 privacy bound"};
    app.require_subcommand(1);

    CommonFlags solve_f, sweep_eps_f, sweep_alpha_f, oracle_f, range_f, validate_f, wm_f;
    auto* solve = app.add_subcommand("solve", "solve one instance at one epsilon");
    attach_common(solve, solve_f, false);
    auto* sweep_eps = app.add_subcommand("sweep-eps", "sweep the leakage budget");
    attach_common(sweep_eps, sweep_eps_f, true);
    auto* sweep_alpha = app.add_subcommand("sweep-alpha", "sweep the watermark correlation");
    attach_common(sweep_alpha, sweep_alpha_f, true);
    auto* oracle = app.add_subcommand("oracle", "exhaustive-search ground truth at one epsilon");
    attach_common(oracle, oracle_f, false);
    auto* range = app.add_subcommand("eps-range", "report omega records and the valid eps range");
    attach_common(range, range_f, false);
    auto* validate = app.add_subcommand("validate", "check the instance and H_XY membership");
    attach_common(validate, validate_f, false);
    auto* wm = app.add_subcommand("watermark", "emit the watermark instance for a given alpha");
    attach_common(wm, wm_f, false);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 2;
    }

    try {
        if (solve->parsed()) {
            RunConfig cfg = build_config(solve_f, true);
            return emit(cfg, privlp::run_solve(cfg));
        }
        if (sweep_eps->parsed()) {
            RunConfig cfg = build_config(sweep_eps_f, false);
            return emit(cfg, privlp::run_sweep_eps(cfg));
        }
        if (sweep_alpha->parsed()) {
            RunConfig cfg = build_config(sweep_alpha_f, false);
            return emit(cfg, privlp::run_sweep_alpha(cfg));
        }
        if (oracle->parsed()) {
            RunConfig cfg = build_config(oracle_f, true);
            cfg.solver = privlp::SolverKind::Oracle;
            return emit(cfg, privlp::run_solve(cfg));
        }
        if (range->parsed()) {
            RunConfig cfg = build_config(range_f, true);
            return emit(cfg, privlp::run_eps_range(cfg));
        }
        if (validate->parsed()) {
            RunConfig cfg = build_config(validate_f, true);
            return emit(cfg, privlp::run_validate(cfg));
        }
        if (wm->parsed()) {
            RunConfig cfg = build_config(wm_f, true);
            return emit(cfg, privlp::run_watermark_emit(cfg));
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return classify_error(e);
    }
    return 2;
}
