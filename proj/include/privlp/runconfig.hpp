#ifndef PRIVLP_RUNCONFIG_HPP
#define PRIVLP_RUNCONFIG_HPP

#include <json.hpp>
#include <optional>
#include <string>

#include "privlp/design.hpp"
#include "privlp/oracle.hpp"
#include "privlp/probkit.hpp"

namespace privlp {

struct SweepSpec {
    double start = 0.0;
    double stop = 0.0;
    int count = 0;
    bool log_scale = false;

    std::vector<double> points() const;
};

enum class SolverKind { Approx, Perfect, Oracle, Invertible, All };
enum class InstanceSource { Inline, Watermark, File };

/// Parsed run description. Exactly one instance source; numbers in the JSON
/// may be decimals or "p/q" rational strings.
struct RunConfig {
    InstanceSource source = InstanceSource::Inline;
    std::optional<Eigen::MatrixXd> p_x_given_y;  // rows = X symbols
    std::optional<Eigen::VectorXd> p_y;
    std::optional<Eigen::VectorXd> x_values;
    std::optional<Eigen::VectorXd> y_values;
    std::optional<double> alpha;
    std::string instance_file;

    std::optional<double> epsilon;
    std::optional<SweepSpec> epsilon_sweep;
    std::optional<SweepSpec> alpha_sweep;

    LogBase base = LogBase::Two;
    SolverKind solver = SolverKind::Approx;
    bool metric_map = true;
    bool metric_mmse = true;
    std::optional<double> eta_sq;

    bool force_hxy = false;
    std::size_t combination_cap = 1'000'000;
    int threads = 0;
    SearchConfig oracle_cfg;

    std::string output;  // path prefix for <output>.json / <output>.csv; empty = stdout only
};

RunConfig parse_config(const nlohmann::json& doc);
RunConfig load_config_file(const std::string& path);
SolverKind solver_from_string(const std::string& name);

/// Builds the instance described by the config; `alpha_override` substitutes
/// the watermark parameter during alpha sweeps.
ProblemInstance instance_from_config(const RunConfig& cfg,
                                     std::optional<double> alpha_override = std::nullopt);

struct RunArtifacts {
    std::string table;           // CSV, fixed header
    nlohmann::ordered_json document;  // full machine-readable results
};

/// Executes the runs a subcommand asks for. Every solver mechanism is
/// re-validated before it is written out.
RunArtifacts run_solve(const RunConfig& cfg);
RunArtifacts run_sweep_eps(const RunConfig& cfg);
RunArtifacts run_sweep_alpha(const RunConfig& cfg);
RunArtifacts run_eps_range(const RunConfig& cfg);
RunArtifacts run_validate(const RunConfig& cfg);
RunArtifacts run_watermark_emit(const RunConfig& cfg);

/// Writes <output>.json and <output>.csv when the config names an output
/// prefix; always returns the CSV text for stdout.
void write_artifacts(const RunConfig& cfg, const RunArtifacts& artifacts);

}  // namespace privlp

#endif  // PRIVLP_RUNCONFIG_HPP
