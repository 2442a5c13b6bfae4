#include "privlp/design.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "privlp/parallel.hpp"

namespace privlp {

namespace {

Eigen::MatrixXd k_matrix(const OmegaRecord& rec) {
    const int nx = static_cast<int>(rec.t.size());
    const Eigen::MatrixXd g = rec.h.inverse();
    return g * (Eigen::MatrixXd::Identity(nx, nx) -
                rec.t * Eigen::RowVectorXd::Ones(nx));
}

double multiset_count(int n, int k) {
    double c = 1.0;
    for (int i = 1; i <= k; ++i) c = c * (n + i - 1) / i;
    return c;
}

std::vector<std::vector<int>> enumerate_combinations(int n, int k, bool ordered,
                                                     std::size_t cap) {
    const double count = ordered ? std::pow(static_cast<double>(n), k) : multiset_count(n, k);
    if (count > static_cast<double>(cap)) {
        std::ostringstream os;
        os << (ordered ? "ordered" : "multiset") << " combination count " << count
           << " exceeds the cap " << cap
           << "; raise combination_cap or reduce the instance size";
        throw CombinationCapExceeded(os.str());
    }
    std::vector<std::vector<int>> out;
    out.reserve(static_cast<std::size_t>(count));
    std::vector<int> cur(k, 0);
    while (true) {
        out.push_back(cur);
        int i = k - 1;
        while (i >= 0 && cur[i] == n - 1) --i;
        if (i < 0) break;
        ++cur[i];
        for (int j = i + 1; j < k; ++j) cur[j] = ordered ? 0 : cur[i];
    }
    return out;
}

}  // namespace

EtaLpModel build_eta_lp(const std::vector<const OmegaRecord*>& combination,
                        const ProblemInstance& inst, double eps,
                        const std::vector<const EntropyCoefficients*>& coefs) {
    const int nx = inst.x_dim();
    const int ny = inst.y_dim();
    const int nu = static_cast<int>(combination.size());
    if (nu != ny) throw DimensionMismatch("combination length must equal |Y|");
    if (coefs.size() != combination.size())
        throw DimensionMismatch("coefficient list does not match combination");

    EtaLpModel model;
    model.num_outputs = nu;
    model.x_dim = nx;
    const int nvars = 2 * nu * nx;

    std::vector<Eigen::MatrixXd> ks(nu);
    for (int u = 0; u < nu; ++u) {
        if (combination[u]->cls != OmegaClass::FeasiblePositive)
            throw Error("eta LP requires FeasiblePositive records");
        ks[u] = k_matrix(*combination[u]);
        // 1'K_u = 0 identically (H maps the zero-sum subspace onto itself)
        if (ks[u].colwise().sum().lpNorm<Eigen::Infinity>() > 1e-7)
            throw NumericalInconsistency("1'K_u != 0; record is numerically degenerate");
    }

    LPModel& lp = model.lp;
    lp.c = Eigen::VectorXd::Zero(nvars);
    for (int u = 0; u < nu; ++u) {
        const EntropyCoefficients& cf = *coefs[u];
        const Eigen::RowVectorXd ak = cf.a * ks[u];
        for (int i = 0; i < nx; ++i)
            lp.c(model.eta_index(u, i)) = -(cf.b + ak(i));
    }

    const int n_eq = ny + nx;
    lp.a_eq = Eigen::MatrixXd::Zero(n_eq, nvars);
    lp.b_eq = Eigen::VectorXd::Zero(n_eq);
    for (int u = 0; u < nu; ++u)
        for (int i = 0; i < nx; ++i)
            lp.a_eq(combination[u]->omega[i], model.eta_index(u, i)) += 1.0;
    for (int y = 0; y < ny; ++y) lp.b_eq(y) = inst.p_y(y);
    for (int r = 0; r < nx; ++r)
        for (int u = 0; u < nu; ++u)
            for (int i = 0; i < nx; ++i)
                lp.a_eq(ny + r, model.eta_index(u, i)) += ks[u](r, i);

    const int n_in = nu * (2 * nx + 2);
    lp.a_ineq = Eigen::MatrixXd::Zero(n_in, nvars);
    lp.b_ineq = Eigen::VectorXd::Zero(n_in);
    lp.senses.assign(n_in, RowSense::LessEqual);
    int row = 0;
    for (int u = 0; u < nu; ++u) {
        for (int i = 0; i < nx; ++i)
            lp.a_ineq(row, model.eta_index(u, i)) = 1.0;
        lp.senses[row] = RowSense::GreaterEqual;  // P_u = 1'eta_u >= 0
        ++row;
        for (int i = 0; i < nx; ++i) {
            for (int s : {+1, -1}) {
                for (int jj = 0; jj < nx; ++jj)
                    lp.a_ineq(row, model.eta_index(u, jj)) = s * ks[u](i, jj);
                lp.a_ineq(row, model.aux_index(u, i)) = -1.0;
                ++row;
            }
        }
        for (int i = 0; i < nx; ++i) {
            lp.a_ineq(row, model.aux_index(u, i)) = 1.0;
            lp.a_ineq(row, model.eta_index(u, i)) = -eps;
        }
        ++row;
    }

    lp.lower_bounds.resize(nvars);
    lp.lower_bounds.head(nu * nx).setConstant(-std::numeric_limits<double>::infinity());
    lp.lower_bounds.tail(nu * nx).setZero();

    lp.var_names.resize(nvars);
    for (int u = 0; u < nu; ++u)
        for (int i = 0; i < nx; ++i) {
            lp.var_names[model.eta_index(u, i)] =
                "eta_" + std::to_string(u + 1) + "_" + std::to_string(i + 1);
            lp.var_names[model.aux_index(u, i)] =
                "s_" + std::to_string(u + 1) + "_" + std::to_string(i + 1);
        }
    return model;
}

Mechanism recover_mechanism(const LPSolution& sol, const EtaLpModel& model,
                            const std::vector<const OmegaRecord*>& combination,
                            const ProblemInstance& inst, double eps) {
    if (sol.status != LPStatus::Optimal)
        throw Error("recover_mechanism needs an optimal LP solution");
    const int nx = model.x_dim;
    const int nu = model.num_outputs;

    Mechanism m;
    m.epsilon = eps;
    Eigen::VectorXd pu(nu);
    for (int u = 0; u < nu; ++u) {
        const OmegaRecord& rec = *combination[u];
        Eigen::VectorXd eta(nx);
        for (int i = 0; i < nx; ++i) eta(i) = sol.x(model.eta_index(u, i));
        double mass = eta.sum();
        if (mass < 0.0 && mass > -1e-8) mass = 0.0;  // simplex roundoff on a zero output
        pu(u) = mass;
        Eigen::VectorXd j = Eigen::VectorXd::Zero(nx);
        if (eps > 0.0 && mass > tol::prob) {
            j = rec.h.inverse() * (eta - mass * rec.t) / (eps * mass);
            const double l1 = j.lpNorm<1>();
            if (l1 > 1.0) {
                // dividing by eps * mass amplifies simplex roundoff on
                // low-mass outputs; shave back onto the unit ball as long as
                // the excess is LP residual, not a real violation
                const double residual = (l1 - 1.0) * eps * mass;
                if (residual > 1e-8)
                    throw NumericalInconsistency("recovered perturbation leaves the l1 ball");
                j /= l1;
            }
        }
        m.perturbations.push_back(j);
        m.posteriors.push_back(extreme_point(rec, j, eps));
    }
    m.p_u = Distribution(std::move(pu));

    try {
        validate_mechanism(m, inst, 1e-6);
    } catch (const MechanismInvariantViolation& e) {
        throw NumericalInconsistency(std::string("recovered mechanism invalid: ") + e.what());
    }
    return m;
}

DesignResult solve_approx(const ProblemInstance& inst, double eps, const SolveOptions& opts) {
    if (eps < 0.0) throw Error("epsilon must be nonnegative");
    const RowSpaceBasis basis = build_rowspace_basis(inst);
    const OmegaEnumeration omegas = enumerate_omegas(basis, inst, opts.threads);
    if (!omegas.hxy_member && !opts.force_hxy)
        throw NotInHxy("instance is not in H_XY (a base point has a zero entry); "
                       "pass force_hxy to solve anyway");

    std::vector<const OmegaRecord*> pos;
    for (const OmegaRecord& r : omegas.records)
        if (r.cls == OmegaClass::FeasiblePositive) pos.push_back(&r);
    const EpsilonRange range = epsilon_range(omegas.records);

    std::vector<EntropyCoefficients> coefs(pos.size());
    for (std::size_t i = 0; i < pos.size(); ++i)
        coefs[i] = entropy_coefficients(*pos[i], inst.base);

    const int n = static_cast<int>(pos.size());
    const int k = inst.y_dim();
    const std::vector<std::vector<int>> combos =
        enumerate_combinations(n, k, opts.ordered_combinations, opts.combination_cap);

    std::vector<double> objective(combos.size(), std::numeric_limits<double>::quiet_NaN());
    std::vector<int> iters(combos.size(), 0);
    parallel_for(
        combos.size(),
        [&](std::size_t idx) {
            std::vector<const OmegaRecord*> comb(k);
            std::vector<const EntropyCoefficients*> cf(k);
            for (int u = 0; u < k; ++u) {
                comb[u] = pos[combos[idx][u]];
                cf[u] = &coefs[combos[idx][u]];
            }
            const EtaLpModel model = build_eta_lp(comb, inst, eps, cf);
            const LPSolution sol = solve_lp(model.lp);
            iters[idx] = sol.iterations;
            if (sol.status == LPStatus::Unbounded)
                throw LPUnbounded("eta LP unbounded; the feasible set should be compact");
            if (sol.status == LPStatus::Optimal) objective[idx] = sol.objective;
        },
        opts.threads);

    std::size_t best = combos.size();
    long total_iters = 0;
    for (std::size_t idx = 0; idx < combos.size(); ++idx) {
        total_iters += iters[idx];
        if (std::isnan(objective[idx])) continue;
        if (best == combos.size() || objective[idx] < objective[best] - 1e-12) best = idx;
    }
    if (best == combos.size())
        throw NoFeasibleCombination("no feasible combination; the J=0 decomposition must exist");

    std::vector<const OmegaRecord*> comb(k);
    std::vector<const EntropyCoefficients*> cf(k);
    for (int u = 0; u < k; ++u) {
        comb[u] = pos[combos[best][u]];
        cf[u] = &coefs[combos[best][u]];
    }
    const EtaLpModel model = build_eta_lp(comb, inst, eps, cf);
    const LPSolution sol = solve_lp(model.lp);

    DesignResult res;
    res.mechanism = recover_mechanism(sol, model, comb, inst, eps);
    for (int u = 0; u < k; ++u) res.combination.push_back(comb[u]->omega);
    res.approx_objective = sol.objective;
    res.approx_utility = entropy(inst.p_y, inst.base) - sol.objective;
    res.exact_utility =
        mutual_information(res.mechanism.p_u, res.mechanism.posteriors, inst.p_y, inst.base);
    res.diagnostics.eps_range = range;
    res.diagnostics.hxy_member = omegas.hxy_member;
    res.diagnostics.epsilon_within_range = eps < range.bound();
    res.diagnostics.combinations_tried = combos.size();
    res.diagnostics.lp_iterations = sol.iterations;
    res.diagnostics.total_lp_iterations = total_iters;
    return res;
}

DesignResult solve_perfect_privacy(const ProblemInstance& inst, const SolveOptions& opts) {
    return solve_approx(inst, 0.0, opts);
}

}  // namespace privlp
