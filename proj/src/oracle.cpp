#include "privlp/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <sstream>
#include <vector>

#include "privlp/lp.hpp"
#include "privlp/parallel.hpp"
#include "privlp/rowspace.hpp"

namespace privlp {

namespace {

bool admissible(const Eigen::VectorXd& j, const Eigen::VectorXd& px, PrivacyCriterion crit) {
    if (crit == PrivacyCriterion::L1) return j.lpNorm<1>() <= 1.0 + 1e-12;
    return (j.array().square() / px.array()).sum() <= 1.0 + 1e-12;
}

// Orthogonal-ish directions spanning the zero-sum subspace; step moves in
// refinement follow these.
std::vector<Eigen::VectorXd> zero_sum_directions(int nx) {
    std::vector<Eigen::VectorXd> dirs;
    for (int d = 0; d + 1 < nx; ++d) {
        Eigen::VectorXd v = Eigen::VectorXd::Zero(nx);
        v(d) = -1.0;
        v(d + 1) = 1.0;
        dirs.push_back(v);
    }
    return dirs;
}

// Grid over the admissible slice {1'J = 0, norm constraint}.
std::vector<Eigen::VectorXd> admissible_grid(int nx, const Eigen::VectorXd& px,
                                             PrivacyCriterion crit, int res, double eps) {
    std::vector<Eigen::VectorXd> out;
    if (eps == 0.0 || res < 2) {  // perturbations are invisible at eps = 0
        out.push_back(Eigen::VectorXd::Zero(nx));
        return out;
    }
    if (nx == 2) {
        const double jmax =
            crit == PrivacyCriterion::L1 ? 0.5 : std::sqrt(px(0) * px(1) / (px(0) + px(1)));
        for (int k = 0; k < res; ++k) {
            const double c = -jmax + 2.0 * jmax * k / (res - 1);
            Eigen::VectorXd j(2);
            j << -c, c;
            out.push_back(std::move(j));
        }
        return out;
    }
    // box grid in difference coordinates, filtered by the norm constraint
    const auto dirs = zero_sum_directions(nx);
    const int dims = static_cast<int>(dirs.size());
    std::vector<int> idx(dims, 0);
    while (true) {
        Eigen::VectorXd j = Eigen::VectorXd::Zero(nx);
        for (int d = 0; d < dims; ++d) {
            const double c = -0.5 + 1.0 * idx[d] / (res - 1);
            j += c * dirs[d];
        }
        if (admissible(j, px, crit)) out.push_back(std::move(j));
        int d = dims - 1;
        while (d >= 0 && idx[d] == res - 1) idx[d--] = 0;
        if (d < 0) break;
        ++idx[d];
    }
    return out;
}

struct VertexCand {
    int rec = 0;                // record index
    Eigen::VectorXd j;          // admissible perturbation
    Eigen::VectorXd v;          // full |Y| vertex vector
    double h = 0.0;             // exact entropy of v
    std::uint32_t mask = 0;     // omega support bits
};

double vertex_entropy(const Eigen::VectorXd& v, LogBase base) {
    double h = 0.0;
    for (int i = 0; i < v.size(); ++i)
        if (v(i) > 0.0) h -= v(i) * log_in(v(i), base);
    return h;
}

// min sum w_u h_u  s.t.  sum w_u v_u = p_y, sum w_u j_u = 0, w >= 0.
struct WeightLP {
    const ProblemInstance* inst;
    LPModel model;

    explicit WeightLP(const ProblemInstance& instance, int k) : inst(&instance) {
        const int ny = instance.y_dim();
        const int nx = instance.x_dim();
        model.c = Eigen::VectorXd::Zero(k);
        model.a_eq = Eigen::MatrixXd::Zero(ny + nx, k);
        model.b_eq = Eigen::VectorXd::Zero(ny + nx);
        model.b_eq.head(ny) = instance.p_y.vec();
        model.a_ineq = Eigen::MatrixXd::Zero(0, k);
        model.b_ineq = Eigen::VectorXd::Zero(0);
        model.lower_bounds = Eigen::VectorXd::Zero(k);
    }

    // returns conditional entropy or NaN when infeasible
    double solve(const std::vector<const VertexCand*>& chosen, Eigen::VectorXd* weights) {
        const int ny = inst->y_dim();
        const int k = static_cast<int>(chosen.size());
        for (int u = 0; u < k; ++u) {
            model.c(u) = chosen[u]->h;
            model.a_eq.col(u).head(ny) = chosen[u]->v;
            model.a_eq.col(u).tail(inst->x_dim()) = chosen[u]->j;
        }
        const LPSolution sol = solve_lp(model);
        if (sol.status != LPStatus::Optimal) return std::numeric_limits<double>::quiet_NaN();
        if (weights) *weights = sol.x;
        return sol.objective;
    }
};

struct Incumbent {
    double obj = std::numeric_limits<double>::infinity();
    std::vector<int> cand_idx;  // grid-phase multiset (indices into the pair list)
};

double multiset_count(std::size_t n, int k) {
    double c = 1.0;
    for (int i = 1; i <= k; ++i) c = c * (static_cast<double>(n) + i - 1) / i;
    return c;
}

Mechanism build_mechanism(const std::vector<const OmegaRecord*>& recs,
                          const std::vector<Eigen::VectorXd>& js, const Eigen::VectorXd& weights,
                          const ProblemInstance& inst, double eps) {
    Mechanism m;
    m.epsilon = eps;
    Eigen::VectorXd pu = weights;
    for (int u = 0; u < pu.size(); ++u) pu(u) = std::max(pu(u), 0.0);
    for (std::size_t u = 0; u < recs.size(); ++u) {
        auto v = try_extreme_point(*recs[u], js[u], eps);
        if (!v) throw NumericalInconsistency("oracle incumbent vertex became infeasible");
        m.posteriors.push_back(Distribution(std::move(*v)));
        m.perturbations.push_back(js[u]);
    }
    m.p_u = Distribution(std::move(pu));
    validate_mechanism(m, inst);
    return m;
}

}  // namespace

OracleResult exact_search(const ProblemInstance& inst, double eps, const SearchConfig& cfg) {
    const int ny = inst.y_dim();
    const int nx = inst.x_dim();
    const int k = cfg.u_cardinality > 0 ? cfg.u_cardinality : ny;
    if (ny > 31) throw TooLarge("exact search supports |Y| <= 31");

    const RowSpaceBasis basis = build_rowspace_basis(inst);
    const OmegaEnumeration omegas = enumerate_omegas(basis, inst, cfg.threads);
    const auto grid = admissible_grid(nx, inst.p_x.vec(), cfg.criterion, cfg.grid_resolution, eps);

    // candidate vertices: any record x any grid J that stays nonnegative
    std::vector<VertexCand> cands;
    for (std::size_t r = 0; r < omegas.records.size(); ++r) {
        const OmegaRecord& rec = omegas.records[r];
        std::uint32_t mask = 0;
        for (int w : rec.omega) mask |= 1u << w;
        for (const Eigen::VectorXd& j : grid) {
            auto v = try_extreme_point(rec, j, eps);
            if (!v) continue;
            VertexCand c;
            c.rec = static_cast<int>(r);
            c.j = j;
            c.v = std::move(*v);
            c.h = vertex_entropy(c.v, inst.base);
            c.mask = mask;
            cands.push_back(std::move(c));
        }
    }
    if (cands.empty()) throw NoFeasibleOmega("no feasible vertex at this eps");

    const std::size_t n = cands.size();
    const double total = multiset_count(n, k);
    if (total > static_cast<double>(cfg.evaluation_cap)) {
        std::ostringstream os;
        os << "grid search needs about " << total << " weight LPs, above the cap "
           << cfg.evaluation_cap << "; coarsen the grid or lower u_cardinality";
        throw TooLarge(os.str());
    }

    std::vector<std::uint32_t> suffix_mask(n + 1, 0);
    for (std::size_t i = n; i-- > 0;) suffix_mask[i] = suffix_mask[i + 1] | cands[i].mask;
    const std::uint32_t full = (1u << ny) - 1;

    // grid phase: multisets of size k over the candidates, chunked by the
    // first element so reduction order is deterministic
    std::vector<Incumbent> chunk_best(n);
    std::vector<std::size_t> chunk_evals(n, 0);
    parallel_for(
        n,
        [&](std::size_t first) {
            WeightLP lp(inst, k);
            std::vector<const VertexCand*> chosen(k);
            std::vector<int> idx(k);
            Incumbent& best = chunk_best[first];
            std::size_t& evals = chunk_evals[first];

            auto recurse = [&](auto&& self, int depth, int start, std::uint32_t have) -> void {
                if ((have | suffix_mask[start]) != full) return;  // cannot cover Y anymore
                if (depth == k) {
                    if (have != full) return;
                    for (int d = 0; d < k; ++d) chosen[d] = &cands[idx[d]];
                    ++evals;
                    const double obj = lp.solve(chosen, nullptr);
                    if (!std::isnan(obj) && obj < best.obj - 1e-13) {
                        best.obj = obj;
                        best.cand_idx = idx;
                    }
                    return;
                }
                for (int i = start; i < static_cast<int>(n); ++i) {
                    idx[depth] = i;
                    self(self, depth + 1, i, have | cands[i].mask);
                }
            };
            idx[0] = static_cast<int>(first);
            recurse(recurse, 1, static_cast<int>(first), cands[first].mask);
        },
        cfg.threads);

    Incumbent best;
    std::size_t evaluations = 0;
    for (std::size_t f = 0; f < n; ++f) {
        evaluations += chunk_evals[f];
        if (chunk_best[f].obj < best.obj - 1e-13) best = chunk_best[f];
    }
    if (!std::isfinite(best.obj))
        throw NoFeasibleCombination("no coverable vertex multiset was LP-feasible");

    // refinement: coordinate descent on the J values with shrinking steps
    std::vector<const OmegaRecord*> recs(k);
    std::vector<Eigen::VectorXd> js(k);
    for (int u = 0; u < k; ++u) {
        recs[u] = &omegas.records[cands[best.cand_idx[u]].rec];
        js[u] = cands[best.cand_idx[u]].j;
    }
    WeightLP lp(inst, k);
    auto evaluate = [&](const std::vector<Eigen::VectorXd>& jj, Eigen::VectorXd* w) {
        std::vector<VertexCand> local(k);
        std::vector<const VertexCand*> ptr(k);
        for (int u = 0; u < k; ++u) {
            auto v = try_extreme_point(*recs[u], jj[u], eps);
            if (!v) return std::numeric_limits<double>::quiet_NaN();
            local[u].j = jj[u];
            local[u].v = std::move(*v);
            local[u].h = vertex_entropy(local[u].v, inst.base);
            ptr[u] = &local[u];
        }
        return lp.solve(ptr, w);
    };

    double obj = best.obj;
    Eigen::VectorXd weights;
    evaluate(js, &weights);
    const auto dirs = zero_sum_directions(nx);
    double spacing = cfg.grid_resolution > 1 ? 1.0 / (cfg.grid_resolution - 1) : 0.5;
    double step = spacing;
    double last_round_improvement = 0.0;
    for (int round = 0; round < cfg.refinement_rounds && eps > 0.0; ++round) {
        step *= 0.5;
        const double before = obj;
        bool improved = true;
        int sweeps = 0;
        while (improved && sweeps++ < 50) {
            improved = false;
            for (int u = 0; u < k; ++u) {
                for (const auto& dir : dirs) {
                    for (double sgn : {1.0, -1.0}) {
                        std::vector<Eigen::VectorXd> trial = js;
                        trial[u] = js[u] + sgn * step * dir;
                        if (!admissible(trial[u], inst.p_x.vec(), cfg.criterion)) continue;
                        Eigen::VectorXd w;
                        const double o = evaluate(trial, &w);
                        if (!std::isnan(o) && o < obj - 1e-13) {
                            obj = o;
                            js = std::move(trial);
                            weights = std::move(w);
                            improved = true;
                        }
                    }
                }
            }
        }
        last_round_improvement = before - obj;
    }

    // balance polish: with |X| = 2, the optimum generically has at most one
    // non-vertex J; pin each candidate as the sum_u P_u J_u = 0 balancer
    if (nx == 2 && eps > 0.0) {
        for (int u = 0; u < k; ++u) {
            for (int it = 0; it < 12; ++it) {
                Eigen::VectorXd w;
                if (std::isnan(evaluate(js, &w))) break;
                if (w(u) < 1e-10) break;
                double rest = 0.0;
                for (int v = 0; v < k; ++v)
                    if (v != u) rest += w(v) * js[v](1);
                double target = -rest / w(u);
                const double jmax = cfg.criterion == PrivacyCriterion::L1
                                        ? 0.5
                                        : std::sqrt(inst.p_x(0) * inst.p_x(1) /
                                                    (inst.p_x(0) + inst.p_x(1)));
                target = std::clamp(target, -jmax, jmax);
                if (std::abs(target - js[u](1)) < 1e-14) break;
                std::vector<Eigen::VectorXd> trial = js;
                trial[u](0) = -target;
                trial[u](1) = target;
                Eigen::VectorXd w2;
                const double o = evaluate(trial, &w2);
                if (!std::isnan(o) && o < obj - 1e-14) {
                    obj = o;
                    js = std::move(trial);
                    weights = std::move(w2);
                } else {
                    break;
                }
            }
        }
    }

    // first-order sensitivity of the incumbent to one more halving
    double slope_sum = 0.0;
    if (eps > 0.0) {
        const double probe = step > 0.0 ? step : 1e-4;
        for (int u = 0; u < k; ++u) {
            double worst = 0.0;
            for (const auto& dir : dirs) {
                auto up = try_extreme_point(*recs[u], js[u] + probe * dir, eps);
                auto dn = try_extreme_point(*recs[u], js[u] - probe * dir, eps);
                if (up && dn)
                    worst = std::max(worst, std::abs(vertex_entropy(*up, inst.base) -
                                                     vertex_entropy(*dn, inst.base)) / 2.0);
            }
            slope_sum += (static_cast<int>(weights.size()) == k ? weights(u) : 1.0) * worst;
        }
    }

    OracleResult res;
    res.mechanism = build_mechanism(recs, js, weights, inst, eps);
    res.conditional_entropy = obj;
    res.utility = entropy(inst.p_y, inst.base) - obj;
    res.grid_gap_estimate = last_round_improvement + slope_sum;
    res.evaluations = evaluations;
    return res;
}

OracleResult raw_kernel_search(const ProblemInstance& inst, double eps, const SearchConfig& cfg) {
    const int ny = inst.y_dim();
    const int nu = cfg.u_cardinality > 0 ? cfg.u_cardinality : ny;
    const int g = std::max(1, cfg.grid_resolution - 1);

    // all length-nu compositions of g, as probability columns
    std::vector<Eigen::VectorXd> columns;
    std::vector<int> comp(nu, 0);
    comp[0] = g;
    while (true) {
        Eigen::VectorXd col(nu);
        for (int u = 0; u < nu; ++u) col(u) = static_cast<double>(comp[u]) / g;
        columns.push_back(std::move(col));
        // next composition in colex order
        int i = 0;
        while (i < nu && comp[i] == 0) ++i;
        if (i == nu - 1) break;
        const int val = comp[i];
        comp[i] = 0;
        comp[0] = val - 1;
        ++comp[i + 1];
    }
    const double total = std::pow(static_cast<double>(columns.size()), ny);
    if (total > static_cast<double>(cfg.evaluation_cap)) {
        std::ostringstream os;
        os << "raw kernel grid needs " << total << " evaluations, above the cap "
           << cfg.evaluation_cap;
        throw TooLarge(os.str());
    }

    struct Best {
        double cond = std::numeric_limits<double>::infinity();
        std::vector<int> pick;
    };
    const std::size_t ncols = columns.size();
    std::vector<Best> chunk_best(ncols);

    auto evaluate_kernel = [&](const std::vector<int>& pick, bool* ok) {
        Eigen::VectorXd pu = Eigen::VectorXd::Zero(nu);
        for (int y = 0; y < ny; ++y) pu += columns[pick[y]] * inst.p_y(y);
        double cond = 0.0;
        *ok = true;
        for (int u = 0; u < nu; ++u) {
            if (pu(u) < 1e-14) continue;
            Eigen::VectorXd post(ny);
            for (int y = 0; y < ny; ++y) post(y) = columns[pick[y]](u) * inst.p_y(y) / pu(u);
            Eigen::VectorXd pxu = inst.leakage.matrix() * post;
            if (cfg.criterion == PrivacyCriterion::L1) {
                if ((pxu - inst.p_x.vec()).lpNorm<1>() > eps + tol::nonneg) {
                    *ok = false;
                    return 0.0;
                }
            } else {
                double chi2 = 0.0;
                for (int x = 0; x < inst.x_dim(); ++x) {
                    const double d = pxu(x) - inst.p_x(x);
                    chi2 += d * d / inst.p_x(x);
                }
                if (chi2 > eps * eps + tol::nonneg) {
                    *ok = false;
                    return 0.0;
                }
            }
            double h = 0.0;
            for (int y = 0; y < ny; ++y)
                if (post(y) > 0.0) h -= post(y) * log_in(post(y), inst.base);
            cond += pu(u) * h;
        }
        return cond;
    };

    parallel_for(
        ncols,
        [&](std::size_t first) {
            std::vector<int> pick(ny, 0);
            pick[0] = static_cast<int>(first);
            Best& best = chunk_best[first];
            auto recurse = [&](auto&& self, int y) -> void {
                if (y == ny) {
                    bool ok = false;
                    const double cond = evaluate_kernel(pick, &ok);
                    if (ok && cond < best.cond - 1e-13) {
                        best.cond = cond;
                        best.pick = pick;
                    }
                    return;
                }
                for (int c = 0; c < static_cast<int>(ncols); ++c) {
                    pick[y] = c;
                    self(self, y + 1);
                }
            };
            recurse(recurse, 1);
        },
        cfg.threads);

    Best best;
    for (const Best& b : chunk_best)
        if (b.cond < best.cond - 1e-13) best = b;
    if (!std::isfinite(best.cond))
        throw NoFeasibleCombination("no kernel on the raw grid satisfies the privacy constraint");

    Mechanism m;
    m.epsilon = eps;
    Eigen::VectorXd pu = Eigen::VectorXd::Zero(nu);
    for (int y = 0; y < ny; ++y) pu += columns[best.pick[y]] * inst.p_y(y);
    for (int u = 0; u < nu; ++u) {
        Eigen::VectorXd post(ny);
        if (pu(u) < 1e-14) {
            post = inst.p_y.vec();
        } else {
            for (int y = 0; y < ny; ++y)
                post(y) = columns[best.pick[y]](u) * inst.p_y(y) / pu(u);
        }
        m.posteriors.push_back(Distribution(std::move(post)));
        Eigen::VectorXd pxu = inst.leakage.matrix() * m.posteriors.back().vec();
        m.perturbations.push_back(eps > 0.0 ? Eigen::VectorXd((pxu - inst.p_x.vec()) / eps)
                                            : Eigen::VectorXd::Zero(inst.x_dim()));
    }
    m.p_u = Distribution(std::move(pu));

    OracleResult res;
    res.mechanism = std::move(m);
    res.conditional_entropy = best.cond;
    res.utility = entropy(inst.p_y, inst.base) - best.cond;
    res.evaluations = static_cast<std::size_t>(total);
    return res;
}

SandwichReport sandwich_check(const ProblemInstance& inst, double eps, const SearchConfig& cfg,
                              double tolerance) {
    SandwichReport rep;
    rep.eps = eps;
    rep.eps_prime = eps / std::sqrt(inst.p_x.min_entry());
    rep.tolerance = tolerance;

    SearchConfig chi = cfg;
    chi.criterion = PrivacyCriterion::Chi2;
    SearchConfig l1 = cfg;
    l1.criterion = PrivacyCriterion::L1;

    rep.chi2_at_eps = exact_search(inst, eps, chi).utility;
    rep.l1_at_eps = exact_search(inst, eps, l1).utility;
    rep.chi2_at_eps_prime = exact_search(inst, rep.eps_prime, chi).utility;
    rep.holds = rep.chi2_at_eps <= rep.l1_at_eps + tolerance &&
                rep.l1_at_eps <= rep.chi2_at_eps_prime + tolerance;
    return rep;
}

}  // namespace privlp
