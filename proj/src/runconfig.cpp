#include "privlp/runconfig.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include "privlp/invsolver.hpp"
#include "privlp/metrics.hpp"
#include "privlp/watermark.hpp"

namespace privlp {

namespace {

using nlohmann::json;
using nlohmann::ordered_json;

double parse_number(const json& v, const std::string& key) {
    if (v.is_number()) return v.get<double>();
    if (v.is_string()) {
        const std::string s = v.get<std::string>();
        try {
            const auto slash = s.find('/');
            if (slash == std::string::npos) return std::stod(s);
            const double num = std::stod(s.substr(0, slash));
            const double den = std::stod(s.substr(slash + 1));
            if (den == 0.0) throw ConfigError(key + ": rational with zero denominator");
            return num / den;
        } catch (const ConfigError&) {
            throw;
        } catch (const std::exception&) {
            throw ConfigError(key + ": cannot parse number '" + s + "'");
        }
    }
    throw ConfigError(key + ": expected a number or a \"p/q\" string");
}

Eigen::VectorXd parse_vector(const json& v, const std::string& key) {
    if (!v.is_array()) throw ConfigError(key + ": expected an array");
    Eigen::VectorXd out(v.size());
    for (std::size_t i = 0; i < v.size(); ++i)
        out(static_cast<Eigen::Index>(i)) = parse_number(v[i], key + "[" + std::to_string(i) + "]");
    return out;
}

Eigen::MatrixXd parse_matrix(const json& v, const std::string& key) {
    if (!v.is_array() || v.empty()) throw ConfigError(key + ": expected an array of rows");
    const std::size_t cols = v[0].is_array() ? v[0].size() : 0;
    if (cols == 0) throw ConfigError(key + ": rows must be non-empty arrays");
    Eigen::MatrixXd out(v.size(), cols);
    for (std::size_t r = 0; r < v.size(); ++r) {
        if (!v[r].is_array() || v[r].size() != cols)
            throw ConfigError(key + ": ragged rows");
        for (std::size_t c = 0; c < cols; ++c)
            out(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) =
                parse_number(v[r][c], key);
    }
    return out;
}

SweepSpec parse_sweep(const json& v, const std::string& key) {
    SweepSpec s;
    if (!v.is_object()) throw ConfigError(key + ": expected an object");
    if (!v.contains("start") || !v.contains("stop") || !v.contains("count"))
        throw ConfigError(key + ": needs start, stop, count");
    s.start = parse_number(v.at("start"), key + ".start");
    s.stop = parse_number(v.at("stop"), key + ".stop");
    s.count = v.at("count").get<int>();
    if (v.contains("scale")) {
        const std::string sc = v.at("scale").get<std::string>();
        if (sc == "log")
            s.log_scale = true;
        else if (sc != "linear")
            throw ConfigError(key + ".scale: expected \"linear\" or \"log\"");
    }
    if (s.count < 1 || s.start < 0.0 || s.stop < s.start)
        throw ConfigError(key + ": bounds must be nonnegative and ordered, count >= 1");
    if (s.log_scale && s.start <= 0.0)
        throw ConfigError(key + ": log scale needs a positive start");
    return s;
}

std::string format6(double v) {
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.6g", v);
    return buf;
}

ordered_json mechanism_json(const Mechanism& m) {
    ordered_json j;
    j["epsilon"] = m.epsilon;
    j["p_u"] = std::vector<double>(m.p_u.vec().data(), m.p_u.vec().data() + m.p_u.size());
    ordered_json posts = ordered_json::array();
    for (const Distribution& d : m.posteriors)
        posts.push_back(std::vector<double>(d.vec().data(), d.vec().data() + d.size()));
    j["posteriors"] = posts;
    ordered_json perts = ordered_json::array();
    for (const Eigen::VectorXd& p : m.perturbations)
        perts.push_back(std::vector<double>(p.data(), p.data() + p.size()));
    j["perturbations"] = perts;
    return j;
}

ordered_json design_json(const DesignResult& r) {
    ordered_json j;
    j["approx_objective"] = r.approx_objective;
    j["approx_utility"] = r.approx_utility;
    j["exact_utility"] = r.exact_utility;
    j["combination"] = [&] {
        ordered_json combos = ordered_json::array();
        for (const auto& om : r.combination) {
            std::vector<int> one_based;
            for (int w : om) one_based.push_back(w + 1);
            combos.push_back(one_based);
        }
        return combos;
    }();
    j["mechanism"] = mechanism_json(r.mechanism);
    j["diagnostics"] = {
        {"eps1", r.diagnostics.eps_range.eps1},
        {"eps2", r.diagnostics.eps_range.eps2},
        {"hxy_member", r.diagnostics.hxy_member},
        {"epsilon_within_range", r.diagnostics.epsilon_within_range},
        {"combinations", r.diagnostics.combinations_tried},
        {"lp_iterations", r.diagnostics.lp_iterations},
        {"total_lp_iterations", r.diagnostics.total_lp_iterations},
    };
    return j;
}

constexpr const char* kTableHeader =
    "epsilon,alpha,approx_utility,exact_utility,perfect_utility,oracle_utility,"
    "map_error,mmse_y_norm,mmse_x_norm,eps1,eps2,hxy_member";

struct PointRow {
    std::optional<double> epsilon, alpha;
    std::optional<double> approx_utility, exact_utility, perfect_utility, oracle_utility;
    std::optional<double> map_err, mmse_y, mmse_x;
    std::optional<double> eps1, eps2;
    std::optional<bool> hxy;

    std::string csv() const {
        auto cell = [](const std::optional<double>& v) { return v ? format6(*v) : std::string(); };
        std::ostringstream os;
        os << cell(epsilon) << ',' << cell(alpha) << ',' << cell(approx_utility) << ','
           << cell(exact_utility) << ',' << cell(perfect_utility) << ',' << cell(oracle_utility)
           << ',' << cell(map_err) << ',' << cell(mmse_y) << ',' << cell(mmse_x) << ','
           << cell(eps1) << ',' << cell(eps2) << ','
           << (hxy ? (*hxy ? "true" : "false") : "");
        return os.str();
    }
};

bool wants(const RunConfig& cfg, SolverKind k) {
    return cfg.solver == k || cfg.solver == SolverKind::All;
}

void validate_for_emission(const Mechanism& m, const ProblemInstance& inst) {
    validate_mechanism(m, inst, 1e-6);
    const PrivacyReport rep = check_privacy(m, inst, m.epsilon);
    if (!rep.pass)
        throw NumericalInconsistency("mechanism violates its own privacy level before emission");
}

// One sweep point: runs the requested solvers + metrics on `inst`.
PointRow evaluate_point(const RunConfig& cfg, const ProblemInstance& inst, double eps,
                        std::optional<double> alpha, ordered_json& node) {
    PointRow row;
    row.epsilon = eps;
    row.alpha = alpha;

    SolveOptions opts;
    opts.force_hxy = cfg.force_hxy;
    opts.combination_cap = cfg.combination_cap;
    opts.threads = cfg.threads;

    const Mechanism* primary = nullptr;
    std::optional<DesignResult> approx, perfect;
    std::optional<OracleResult> oracle_res;
    std::optional<InvertibleSolution> inv;

    if (wants(cfg, SolverKind::Approx)) {
        approx = solve_approx(inst, eps, opts);
        validate_for_emission(approx->mechanism, inst);
        row.approx_utility = approx->approx_utility;
        row.exact_utility = approx->exact_utility;
        row.eps1 = approx->diagnostics.eps_range.eps1;
        row.eps2 = approx->diagnostics.eps_range.eps2;
        row.hxy = approx->diagnostics.hxy_member;
        node["approx"] = design_json(*approx);
        primary = &approx->mechanism;
    }
    if (wants(cfg, SolverKind::Perfect)) {
        perfect = solve_perfect_privacy(inst, opts);
        validate_for_emission(perfect->mechanism, inst);
        row.perfect_utility = perfect->exact_utility;
        node["perfect"] = design_json(*perfect);
        if (!primary) primary = &perfect->mechanism;
        if (!row.hxy) {
            row.eps1 = perfect->diagnostics.eps_range.eps1;
            row.eps2 = perfect->diagnostics.eps_range.eps2;
            row.hxy = perfect->diagnostics.hxy_member;
        }
    }
    if (wants(cfg, SolverKind::Oracle)) {
        SearchConfig scfg = cfg.oracle_cfg;
        scfg.threads = cfg.threads > 0 ? cfg.threads : scfg.threads;
        oracle_res = exact_search(inst, eps, scfg);
        validate_for_emission(oracle_res->mechanism, inst);
        row.oracle_utility = oracle_res->utility;
        node["oracle"] = {
            {"utility", oracle_res->utility},
            {"conditional_entropy", oracle_res->conditional_entropy},
            {"grid_gap_estimate", oracle_res->grid_gap_estimate},
            {"evaluations", oracle_res->evaluations},
            {"mechanism", mechanism_json(oracle_res->mechanism)},
        };
        if (!primary) primary = &oracle_res->mechanism;
    }
    const bool run_invertible =
        cfg.solver == SolverKind::Invertible ||
        (cfg.solver == SolverKind::All && inst.x_dim() == inst.y_dim());
    if (run_invertible) {
        inv = solve_invertible(inst, eps);
        validate_for_emission(inv->mechanism, inst);
        const double to_base = inst.base == LogBase::Two ? 1.0 / std::log(2.0) : 1.0;
        const double exact =
            mutual_information(inv->mechanism.p_u, inv->mechanism.posteriors, inst.p_y, inst.base);
        if (!row.approx_utility) row.approx_utility = inv->approx_utility * to_base;
        if (!row.exact_utility) row.exact_utility = exact;
        node["invertible"] = {
            {"sigma_max", inv->sigma_max},
            {"scale", inv->scale},
            {"approx_utility_nats", inv->approx_utility},
            {"exact_utility", exact},
            {"l_star",
             std::vector<double>(inv->l_star.data(), inv->l_star.data() + inv->l_star.size())},
            {"epsilon_within_validity", inv->epsilon_within_validity},
            {"mechanism", mechanism_json(inv->mechanism)},
        };
        if (!primary) primary = &inv->mechanism;
    }

    if (!row.hxy) {  // fill the range columns even when no design solver ran
        const OmegaEnumeration omegas =
            enumerate_omegas(build_rowspace_basis(inst), inst, cfg.threads);
        const EpsilonRange range = epsilon_range(omegas.records);
        row.eps1 = range.eps1;
        row.eps2 = range.eps2;
        row.hxy = omegas.hxy_member;
    }

    if (primary) {
        ordered_json mj;
        if (cfg.metric_map) {
            row.map_err = map_error(*primary, inst);
            mj["map_error"] = *row.map_err;
        }
        if (cfg.metric_mmse && inst.y_values && inst.x_values) {
            row.mmse_y = mmse_normalized(*primary, inst, Target::Y);
            row.mmse_x = mmse_normalized(*primary, inst, Target::X);
            if (row.map_err && (row.exact_utility || row.perfect_utility)) {
                TradeoffPoint point{eps,
                                    row.exact_utility ? *row.exact_utility : *row.perfect_utility,
                                    *row.map_err, *row.mmse_y, *row.mmse_x};
                point.validate();
            }
            mj["mmse_y_norm"] = *row.mmse_y;
            mj["mmse_x_norm"] = *row.mmse_x;
            if (cfg.eta_sq) {
                // the wESNR comparison uses eps^2 in the erasure bound
                const double e2 = eps * eps;
                if (e2 <= *cfg.eta_sq) {
                    const ErasureBaseline base = erasure_baseline(inst, e2, *cfg.eta_sq);
                    mj["erasure_bound"] = base.bound;
                    mj["erasure_delta"] = base.delta;
                    mj["erasure_mmse_y_norm"] = mmse_normalized(base.mechanism, inst, Target::Y);
                }
            }
        }
        if (!mj.is_null()) node["metrics"] = mj;
    }
    return row;
}

ordered_json instance_json(const ProblemInstance& inst) {
    ordered_json j;
    ordered_json rows = ordered_json::array();
    for (int x = 0; x < inst.x_dim(); ++x) {
        std::vector<double> r(inst.y_dim());
        for (int y = 0; y < inst.y_dim(); ++y) r[y] = inst.leakage.matrix()(x, y);
        rows.push_back(r);
    }
    j["p_x_given_y"] = rows;
    j["p_y"] = std::vector<double>(inst.p_y.vec().data(), inst.p_y.vec().data() + inst.p_y.size());
    j["p_x"] = std::vector<double>(inst.p_x.vec().data(), inst.p_x.vec().data() + inst.p_x.size());
    if (inst.x_values)
        j["x_values"] = std::vector<double>(inst.x_values->data(),
                                            inst.x_values->data() + inst.x_values->size());
    if (inst.y_values)
        j["y_values"] = std::vector<double>(inst.y_values->data(),
                                            inst.y_values->data() + inst.y_values->size());
    j["log_base"] = inst.base == LogBase::Two ? "2" : "e";
    return j;
}

}  // namespace

std::vector<double> SweepSpec::points() const {
    std::vector<double> out;
    if (count == 1) {
        out.push_back(start);
        return out;
    }
    for (int i = 0; i < count; ++i) {
        const double f = static_cast<double>(i) / (count - 1);
        out.push_back(log_scale ? start * std::pow(stop / start, f)
                                : start + (stop - start) * f);
    }
    return out;
}

RunConfig parse_config(const json& doc) {
    if (!doc.is_object()) throw ConfigError("config root must be a JSON object");
    RunConfig cfg;

    const bool has_inline = doc.contains("p_x_given_y") || doc.contains("p_y");
    const bool has_alpha = doc.contains("alpha");
    const bool has_file = doc.contains("instance_file");
    if (has_inline + has_alpha + has_file != 1)
        throw ConfigError("exactly one instance source required: "
                          "p_x_given_y/p_y, alpha, or instance_file");
    if (has_inline) {
        if (!doc.contains("p_x_given_y") || !doc.contains("p_y"))
            throw ConfigError("inline instance needs both p_x_given_y and p_y");
        cfg.source = InstanceSource::Inline;
        cfg.p_x_given_y = parse_matrix(doc.at("p_x_given_y"), "p_x_given_y");
        cfg.p_y = parse_vector(doc.at("p_y"), "p_y");
    } else if (has_alpha) {
        cfg.source = InstanceSource::Watermark;
        cfg.alpha = parse_number(doc.at("alpha"), "alpha");
    } else {
        cfg.source = InstanceSource::File;
        cfg.instance_file = doc.at("instance_file").get<std::string>();
    }

    if (doc.contains("x_values")) cfg.x_values = parse_vector(doc.at("x_values"), "x_values");
    if (doc.contains("y_values")) cfg.y_values = parse_vector(doc.at("y_values"), "y_values");

    if (doc.contains("epsilon") && doc.contains("epsilon_sweep"))
        throw ConfigError("give either epsilon or epsilon_sweep, not both");
    if (doc.contains("epsilon")) {
        cfg.epsilon = parse_number(doc.at("epsilon"), "epsilon");
        if (*cfg.epsilon < 0.0) throw ConfigError("epsilon must be nonnegative");
    }
    if (doc.contains("epsilon_sweep"))
        cfg.epsilon_sweep = parse_sweep(doc.at("epsilon_sweep"), "epsilon_sweep");
    if (doc.contains("alpha_sweep"))
        cfg.alpha_sweep = parse_sweep(doc.at("alpha_sweep"), "alpha_sweep");

    if (doc.contains("log_base")) {
        const std::string b = doc.at("log_base").is_string()
                                  ? doc.at("log_base").get<std::string>()
                                  : std::to_string(doc.at("log_base").get<int>());
        if (b == "2")
            cfg.base = LogBase::Two;
        else if (b == "e")
            cfg.base = LogBase::Natural;
        else
            throw ConfigError("log_base: expected \"2\" or \"e\"");
    } else if (cfg.source == InstanceSource::Watermark) {
        cfg.base = LogBase::Natural;  // the watermark reference numbers are in nats
    }

    if (doc.contains("solver")) cfg.solver = solver_from_string(doc.at("solver").get<std::string>());
    if (doc.contains("metrics")) {
        cfg.metric_map = false;
        cfg.metric_mmse = false;
        for (const auto& m : doc.at("metrics")) {
            const std::string name = m.get<std::string>();
            if (name == "map")
                cfg.metric_map = true;
            else if (name == "mmse")
                cfg.metric_mmse = true;
            else
                throw ConfigError("metrics: unknown metric '" + name + "'");
        }
    }
    if (doc.contains("eta_sq")) cfg.eta_sq = parse_number(doc.at("eta_sq"), "eta_sq");
    if (doc.contains("force_hxy")) cfg.force_hxy = doc.at("force_hxy").get<bool>();
    if (doc.contains("combination_cap"))
        cfg.combination_cap = doc.at("combination_cap").get<std::size_t>();
    if (doc.contains("threads")) cfg.threads = doc.at("threads").get<int>();
    if (doc.contains("oracle")) {
        const json& o = doc.at("oracle");
        if (o.contains("grid_resolution")) cfg.oracle_cfg.grid_resolution = o.at("grid_resolution").get<int>();
        if (o.contains("refinement_rounds"))
            cfg.oracle_cfg.refinement_rounds = o.at("refinement_rounds").get<int>();
        if (o.contains("u_cardinality")) cfg.oracle_cfg.u_cardinality = o.at("u_cardinality").get<int>();
        if (o.contains("evaluation_cap"))
            cfg.oracle_cfg.evaluation_cap = o.at("evaluation_cap").get<std::size_t>();
        if (cfg.oracle_cfg.grid_resolution < 2)
            throw ConfigError("oracle.grid_resolution must be at least 2");
    }
    if (doc.contains("output")) cfg.output = doc.at("output").get<std::string>();
    return cfg;
}

SolverKind solver_from_string(const std::string& name) {
    if (name == "approx") return SolverKind::Approx;
    if (name == "perfect") return SolverKind::Perfect;
    if (name == "oracle") return SolverKind::Oracle;
    if (name == "invertible") return SolverKind::Invertible;
    if (name == "all") return SolverKind::All;
    throw ConfigError("solver: expected approx|perfect|oracle|invertible|all");
}

RunConfig load_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path);
    json doc;
    try {
        in >> doc;
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string("config parse error: ") + e.what());
    }
    return parse_config(doc);
}

ProblemInstance instance_from_config(const RunConfig& cfg, std::optional<double> alpha_override) {
    if (cfg.source == InstanceSource::Watermark) {
        WatermarkParams params{alpha_override.value_or(cfg.alpha.value_or(0.0))};
        return watermark_instance(params, cfg.base).instance;
    }
    Eigen::MatrixXd leak;
    Eigen::VectorXd py;
    std::optional<Eigen::VectorXd> xv = cfg.x_values, yv = cfg.y_values;
    if (cfg.source == InstanceSource::Inline) {
        leak = *cfg.p_x_given_y;
        py = *cfg.p_y;
    } else {
        std::ifstream in(cfg.instance_file);
        if (!in) throw ConfigError("cannot open instance file: " + cfg.instance_file);
        json doc;
        try {
            in >> doc;
        } catch (const json::parse_error& e) {
            throw ConfigError(std::string("instance file parse error: ") + e.what());
        }
        if (!doc.contains("p_x_given_y") || !doc.contains("p_y"))
            throw ConfigError("instance file needs p_x_given_y and p_y");
        leak = parse_matrix(doc.at("p_x_given_y"), "p_x_given_y");
        py = parse_vector(doc.at("p_y"), "p_y");
        if (!xv && doc.contains("x_values")) xv = parse_vector(doc.at("x_values"), "x_values");
        if (!yv && doc.contains("y_values")) yv = parse_vector(doc.at("y_values"), "y_values");
    }
    if (!xv) {
        Eigen::VectorXd v(leak.rows());
        for (int i = 0; i < leak.rows(); ++i) v(i) = i + 1;
        xv = v;
    }
    if (!yv) {
        Eigen::VectorXd v(leak.cols());
        for (int i = 0; i < leak.cols(); ++i) v(i) = i + 1;
        yv = v;
    }
    return ProblemInstance::create(Channel(std::move(leak)), Distribution(std::move(py)), xv, yv,
                                   cfg.base);
}

RunArtifacts run_solve(const RunConfig& cfg) {
    if (!cfg.epsilon) throw ConfigError("solve needs a single epsilon");
    const ProblemInstance inst = instance_from_config(cfg);

    RunArtifacts art;
    art.document["config_kind"] = "solve";
    art.document["instance"] = instance_json(inst);
    ordered_json node;
    const PointRow row = evaluate_point(cfg, inst, *cfg.epsilon, cfg.alpha, node);
    node["epsilon"] = *cfg.epsilon;
    art.document["points"] = ordered_json::array({node});
    art.table = std::string(kTableHeader) + "\n" + row.csv() + "\n";
    return art;
}

RunArtifacts run_sweep_eps(const RunConfig& cfg) {
    if (!cfg.epsilon_sweep) throw ConfigError("sweep-eps needs epsilon_sweep");
    const ProblemInstance inst = instance_from_config(cfg);

    RunArtifacts art;
    art.document["config_kind"] = "sweep-eps";
    art.document["instance"] = instance_json(inst);
    art.document["points"] = ordered_json::array();
    std::ostringstream table;
    table << kTableHeader << "\n";
    for (double eps : cfg.epsilon_sweep->points()) {
        std::cerr << "sweep-eps: epsilon = " << eps << "\n";
        ordered_json node;
        node["epsilon"] = eps;
        const PointRow row = evaluate_point(cfg, inst, eps, cfg.alpha, node);
        art.document["points"].push_back(node);
        table << row.csv() << "\n";
    }
    art.table = table.str();
    return art;
}

RunArtifacts run_sweep_alpha(const RunConfig& cfg) {
    if (cfg.source != InstanceSource::Watermark)
        throw ConfigError("sweep-alpha needs a watermark instance source");
    if (!cfg.alpha_sweep) throw ConfigError("sweep-alpha needs alpha_sweep");
    if (!cfg.epsilon) throw ConfigError("sweep-alpha needs a single epsilon");

    RunArtifacts art;
    art.document["config_kind"] = "sweep-alpha";
    art.document["points"] = ordered_json::array();
    std::ostringstream table;
    table << kTableHeader << "\n";
    for (double alpha : cfg.alpha_sweep->points()) {
        std::cerr << "sweep-alpha: alpha = " << alpha << "\n";
        const ProblemInstance inst = instance_from_config(cfg, alpha);
        ordered_json node;
        node["alpha"] = alpha;
        node["epsilon"] = *cfg.epsilon;
        node["instance"] = instance_json(inst);
        const PointRow row = evaluate_point(cfg, inst, *cfg.epsilon, alpha, node);
        art.document["points"].push_back(node);
        table << row.csv() << "\n";
    }
    art.table = table.str();
    return art;
}

RunArtifacts run_eps_range(const RunConfig& cfg) {
    const ProblemInstance inst = instance_from_config(cfg);
    const RowSpaceBasis basis = build_rowspace_basis(inst);
    const OmegaEnumeration omegas = enumerate_omegas(basis, inst, cfg.threads);

    RunArtifacts art;
    art.document["config_kind"] = "eps-range";
    art.document["instance"] = instance_json(inst);
    ordered_json recs = ordered_json::array();
    std::ostringstream table;
    table << "omega,t,class,sigma_max,radius\n";
    for (const OmegaRecord& r : omegas.records) {
        ordered_json rj;
        std::vector<int> one_based;
        for (int w : r.omega) one_based.push_back(w + 1);
        rj["omega"] = one_based;
        rj["t"] = std::vector<double>(r.t.data(), r.t.data() + r.t.size());
        rj["class"] = r.cls == OmegaClass::FeasiblePositive ? "feasible_positive"
                      : r.cls == OmegaClass::Infeasible     ? "infeasible"
                                                            : "boundary_zero";
        rj["sigma_max"] = r.sigma_max;
        rj["radius"] = r.radius;
        recs.push_back(rj);
        table << "\"";
        for (std::size_t i = 0; i < one_based.size(); ++i)
            table << (i ? " " : "") << one_based[i];
        table << "\",\"";
        for (int i = 0; i < r.t.size(); ++i) table << (i ? " " : "") << format6(r.t(i));
        table << "\"," << rj["class"].get<std::string>() << ',' << format6(r.sigma_max) << ','
              << format6(r.radius) << "\n";
    }
    art.document["records"] = recs;
    for (const auto& [omega, reason] : omegas.skipped) {
        ordered_json sj;
        sj["omega"] = omega;
        sj["reason"] = reason;
        art.document["skipped"].push_back(sj);
    }
    const EpsilonRange range = epsilon_range(omegas.records);
    art.document["eps1"] = range.eps1;
    art.document["eps2"] = range.eps2;
    art.document["hxy_member"] = omegas.hxy_member;
    table << "eps1," << format6(range.eps1) << "\neps2," << format6(range.eps2)
          << "\nhxy_member," << (omegas.hxy_member ? "true" : "false") << "\n";
    art.table = table.str();
    return art;
}

RunArtifacts run_validate(const RunConfig& cfg) {
    const ProblemInstance inst = instance_from_config(cfg);
    const RowSpaceBasis basis = build_rowspace_basis(inst);
    validate_rowspace_basis(basis, inst);
    const OmegaEnumeration omegas = enumerate_omegas(basis, inst, cfg.threads);

    RunArtifacts art;
    art.document["config_kind"] = "validate";
    art.document["instance"] = instance_json(inst);
    art.document["hxy_member"] = omegas.hxy_member;
    art.document["records"] = omegas.records.size();
    art.document["skipped"] = omegas.skipped.size();
    std::ostringstream table;
    table << "check,result\ninstance,ok\nbasis,ok\nhxy_member,"
          << (omegas.hxy_member ? "true" : "false") << "\n";
    art.table = table.str();
    if (!omegas.hxy_member && !cfg.force_hxy)
        throw NotInHxy("instance is outside H_XY; approximate design is not justified");
    return art;
}

RunArtifacts run_watermark_emit(const RunConfig& cfg) {
    if (cfg.source != InstanceSource::Watermark)
        throw ConfigError("watermark emission needs an alpha instance source");
    const WatermarkInstance wm = watermark_instance({cfg.alpha.value_or(0.0)}, cfg.base);

    RunArtifacts art;
    art.document["config_kind"] = "watermark";
    art.document["alpha"] = wm.alpha;
    art.document["reduced_square"] = wm.reduced_square;
    std::vector<int> kept;
    for (int y : wm.kept_y) kept.push_back(y + 1);
    art.document["kept_y"] = kept;
    art.document.update(instance_json(wm.instance));
    art.table = art.document.dump(2) + "\n";
    return art;
}

void write_artifacts(const RunConfig& cfg, const RunArtifacts& artifacts) {
    if (cfg.output.empty()) return;
    std::ofstream csv(cfg.output + ".csv");
    if (!csv) throw Error("cannot write " + cfg.output + ".csv");
    csv << artifacts.table;
    std::ofstream js(cfg.output + ".json");
    if (!js) throw Error("cannot write " + cfg.output + ".json");
    js << artifacts.document.dump(2) << "\n";
}

}  // namespace privlp
