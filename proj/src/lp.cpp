#include "privlp/lp.hpp"

#include <cmath>
#include <iomanip>
#include <limits>
#include <ostream>
#include <sstream>
#include <vector>

namespace privlp {

namespace {

constexpr double kPivotTol = 1e-9;    // smallest acceptable pivot element
constexpr double kCostTol = 1e-9;     // reduced-cost threshold
constexpr double kFeasTol = 1e-8;
constexpr int kStallLimit = 30;       // degenerate pivots before Bland's rule
constexpr int kRefactorEvery = 100;

// min c'z, a z = b, z >= 0 with the caller's variables mapped onto columns
struct StandardForm {
    Eigen::MatrixXd a;
    Eigen::VectorXd b;
    Eigen::VectorXd c;        // phase-2 costs (zero on artificials)
    int ncols = 0;            // structural + slack columns
    int nart = 0;             // artificial columns appended at the end
};

struct Tableau {
    Eigen::MatrixXd t;        // m x (cols + 1); last column is the rhs
    std::vector<int> basis;
};

// rebuilds the tableau from the original data for the current basis;
// returns false when the basis matrix is numerically singular
bool refactor(Tableau& tab, const StandardForm& sf) {
    const int m = static_cast<int>(sf.a.rows());
    const int cols = sf.ncols + sf.nart;
    Eigen::MatrixXd basis_mat(m, m);
    for (int i = 0; i < m; ++i) basis_mat.col(i) = sf.a.col(tab.basis[i]);
    Eigen::FullPivLU<Eigen::MatrixXd> lu(basis_mat);
    if (!lu.isInvertible()) return false;
    tab.t.resize(m, cols + 1);
    tab.t.leftCols(cols) = lu.solve(sf.a);
    tab.t.col(cols) = lu.solve(sf.b);
    return true;
}

enum class StepResult { Optimal, Unbounded, Working };

// one pricing + ratio-test + pivot step; `bland` switches both rules to
// Bland's anti-cycling variant
StepResult step(Tableau& tab, const StandardForm& sf, const Eigen::VectorXd& cost,
                const std::vector<bool>& allowed, bool bland, bool* degenerate) {
    const int m = static_cast<int>(sf.a.rows());
    const int cols = sf.ncols + sf.nart;

    Eigen::VectorXd dual = Eigen::VectorXd::Zero(m);
    for (int i = 0; i < m; ++i) dual(i) = cost(tab.basis[i]);

    int enter = -1;
    double best_cost = -kCostTol;
    for (int j = 0; j < cols; ++j) {
        if (!allowed[j]) continue;
        const double d = cost(j) - dual.dot(tab.t.col(j));
        if (bland) {
            if (d < -kCostTol) {
                enter = j;
                break;
            }
        } else if (d < best_cost - 1e-15) {
            best_cost = d;
            enter = j;
        }
    }
    if (enter < 0) return StepResult::Optimal;

    // ratio test: smallest ratio wins; among near-ties prefer the largest
    // pivot element for stability (smallest basis index under Bland)
    double theta = std::numeric_limits<double>::infinity();
    bool any = false;
    for (int i = 0; i < m; ++i) {
        const double a = tab.t(i, enter);
        if (a <= kPivotTol) continue;
        any = true;
        theta = std::min(theta, tab.t(i, cols) / a);
    }
    if (!any) return StepResult::Unbounded;

    int leave = -1;
    double leave_pivot = 0.0;
    for (int i = 0; i < m; ++i) {
        const double a = tab.t(i, enter);
        if (a <= kPivotTol) continue;
        const double r = tab.t(i, cols) / a;
        if (r > theta + 1e-9) continue;
        if (bland) {
            if (leave < 0 || tab.basis[i] < tab.basis[leave]) leave = i;
        } else if (a > leave_pivot) {  // stability: largest pivot among ties
            leave = i;
            leave_pivot = a;
        }
    }

    if (degenerate) *degenerate = theta < 1e-11;

    // pivot
    const double piv = tab.t(leave, enter);
    tab.t.row(leave) /= piv;
    for (int i = 0; i < m; ++i) {
        if (i == leave) continue;
        const double f = tab.t(i, enter);
        if (f != 0.0) tab.t.row(i) -= f * tab.t.row(leave);
    }
    tab.basis[leave] = enter;
    return StepResult::Working;
}

// runs simplex to optimality for `cost`; refactorizes periodically and once
// more at the end, resuming if the refreshed reduced costs disagree
StepResult run_phase(Tableau& tab, const StandardForm& sf, const Eigen::VectorXd& cost,
                     const std::vector<bool>& allowed, int& iterations, int cap) {
    int stall = 0;
    int restarts = 0;
    while (true) {
        bool degenerate = false;
        const StepResult r = step(tab, sf, cost, allowed, stall >= kStallLimit, &degenerate);
        if (r == StepResult::Working) {
            stall = degenerate ? stall + 1 : 0;
            if (++iterations > cap) throw IterationLimit("simplex exceeded the pivot cap");
            if (iterations % kRefactorEvery == 0 && !refactor(tab, sf))
                throw Error("simplex basis became singular");
            continue;
        }
        if (r == StepResult::Unbounded) return r;
        // confirmed optimal only if it survives a refactorization
        if (!refactor(tab, sf)) throw Error("simplex basis became singular");
        bool ignored = false;
        const StepResult check = step(tab, sf, cost, allowed, stall >= kStallLimit, &ignored);
        if (check == StepResult::Optimal) return StepResult::Optimal;
        if (check == StepResult::Unbounded) return StepResult::Unbounded;
        ++iterations;
        if (++restarts > 50) throw IterationLimit("simplex failed to stabilize");
    }
}

}  // namespace

LPSolution solve_lp(const LPModel& model) {
    const int n = model.num_vars();
    const int m_eq = static_cast<int>(model.a_eq.rows());
    const int m_in = static_cast<int>(model.a_ineq.rows());
    const int m = m_eq + m_in;
    if (model.b_eq.size() != m_eq || model.b_ineq.size() != m_in ||
        static_cast<int>(model.senses.size()) != m_in || model.lower_bounds.size() != n)
        throw Error("malformed LP model");

    // standard-form columns: shifted/split structural variables, then slacks
    std::vector<int> col_of(n, -1);
    std::vector<bool> split(n, false);
    int ncols = 0;
    for (int j = 0; j < n; ++j) {
        col_of[j] = ncols;
        if (std::isinf(model.lower_bounds(j))) {
            split[j] = true;
            ncols += 2;
        } else {
            ncols += 1;
        }
    }
    const int slack0 = ncols;
    ncols += m_in;

    Eigen::MatrixXd a = Eigen::MatrixXd::Zero(m, ncols);
    Eigen::VectorXd b(m);
    auto scatter = [&](int row, const Eigen::RowVectorXd& coeffs, double sign) {
        for (int j = 0; j < n; ++j) {
            const double v = sign * coeffs(j);
            if (v == 0.0) continue;
            a(row, col_of[j]) += v;
            if (split[j]) a(row, col_of[j] + 1) -= v;
        }
    };
    for (int i = 0; i < m_eq; ++i) {
        scatter(i, model.a_eq.row(i), 1.0);
        b(i) = model.b_eq(i);
    }
    for (int i = 0; i < m_in; ++i) {
        const double sign = model.senses[i] == RowSense::LessEqual ? 1.0 : -1.0;
        scatter(m_eq + i, model.a_ineq.row(i), sign);
        b(m_eq + i) = sign * model.b_ineq(i);
        a(m_eq + i, slack0 + i) = 1.0;
    }
    for (int j = 0; j < n; ++j) {  // x = lb + x'
        if (split[j]) continue;
        const double lb = model.lower_bounds(j);
        if (lb == 0.0) continue;
        for (int i = 0; i < m_eq; ++i) b(i) -= model.a_eq(i, j) * lb;
        for (int i = 0; i < m_in; ++i) {
            const double sign = model.senses[i] == RowSense::LessEqual ? 1.0 : -1.0;
            b(m_eq + i) -= sign * model.a_ineq(i, j) * lb;
        }
    }
    // row equilibration, then sign-normalize the rhs
    Eigen::VectorXd row_scale(m);
    for (int i = 0; i < m; ++i) {
        const double mx = a.row(i).cwiseAbs().maxCoeff();
        row_scale(i) = mx > 0.0 ? 1.0 / mx : 1.0;
        a.row(i) *= row_scale(i);
        b(i) *= row_scale(i);
    }
    for (int i = 0; i < m; ++i) {
        if (b(i) < 0.0) {
            a.row(i) *= -1.0;
            b(i) *= -1.0;
        }
    }

    StandardForm sf;
    std::vector<int> art_rows;
    {
        // slacks whose column survived as +e_i start in the basis
        std::vector<int> basis(m, -1);
        for (int i = m_eq; i < m; ++i) {
            const int s = slack0 + (i - m_eq);
            if (a(i, s) > 0.0) basis[i] = s;
        }
        for (int i = 0; i < m; ++i)
            if (basis[i] < 0) art_rows.push_back(i);
        sf.nart = static_cast<int>(art_rows.size());
        sf.ncols = ncols;
        sf.a = Eigen::MatrixXd::Zero(m, ncols + sf.nart);
        sf.a.leftCols(ncols) = a;
        for (int k = 0; k < sf.nart; ++k) {
            sf.a(art_rows[k], ncols + k) = 1.0;
            basis[art_rows[k]] = ncols + k;
        }
        sf.b = b;
        sf.c = Eigen::VectorXd::Zero(ncols + sf.nart);
        for (int j = 0; j < n; ++j) {
            sf.c(col_of[j]) = model.c(j);
            if (split[j]) sf.c(col_of[j] + 1) = -model.c(j);
        }

        Tableau tab;
        tab.basis = basis;
        if (!refactor(tab, sf)) throw Error("initial simplex basis is singular");

        LPSolution sol;
        int iterations = 0;
        const int cap = 20000 + 50 * (m + ncols + sf.nart);
        std::vector<bool> allowed(ncols + sf.nart, true);

        if (sf.nart > 0) {
            Eigen::VectorXd phase1 = Eigen::VectorXd::Zero(ncols + sf.nart);
            phase1.tail(sf.nart).setOnes();
            if (run_phase(tab, sf, phase1, allowed, iterations, cap) == StepResult::Unbounded)
                throw Error("phase-1 LP unbounded (internal error)");
            double art_value = 0.0;
            for (int i = 0; i < m; ++i)
                if (tab.basis[i] >= ncols) art_value += tab.t(i, ncols + sf.nart);
            if (art_value > kFeasTol) {
                sol.status = LPStatus::Infeasible;
                sol.iterations = iterations;
                return sol;
            }
            // drive zero-level artificials out wherever a real column can stand in
            for (int i = 0; i < m; ++i) {
                if (tab.basis[i] < ncols) continue;
                int enter = -1;
                double best = kPivotTol;
                for (int j = 0; j < ncols; ++j) {
                    if (std::abs(tab.t(i, j)) > best) {
                        best = std::abs(tab.t(i, j));
                        enter = j;
                    }
                }
                if (enter < 0) continue;  // redundant row; artificial idles at zero
                const double piv = tab.t(i, enter);
                tab.t.row(i) /= piv;
                for (int k = 0; k < m; ++k) {
                    if (k == i) continue;
                    const double f = tab.t(k, enter);
                    if (f != 0.0) tab.t.row(k) -= f * tab.t.row(i);
                }
                tab.basis[i] = enter;
            }
            for (int k = 0; k < sf.nart; ++k) allowed[ncols + k] = false;
            if (!refactor(tab, sf)) throw Error("simplex basis became singular");
        }

        if (run_phase(tab, sf, sf.c, allowed, iterations, cap) == StepResult::Unbounded) {
            sol.status = LPStatus::Unbounded;
            sol.iterations = iterations;
            return sol;
        }

        // exact basic solution for the final basis, from the original data
        Eigen::MatrixXd basis_mat(m, m);
        for (int i = 0; i < m; ++i) basis_mat.col(i) = sf.a.col(tab.basis[i]);
        const Eigen::VectorXd xb = Eigen::FullPivLU<Eigen::MatrixXd>(basis_mat).solve(sf.b);
        Eigen::VectorXd z = Eigen::VectorXd::Zero(ncols + sf.nart);
        for (int i = 0; i < m; ++i) z(tab.basis[i]) = xb(i);
        if (z.minCoeff() < -1e-7)
            throw NumericalInconsistency("simplex returned an infeasible basis");

        sol.x.resize(n);
        for (int j = 0; j < n; ++j) {
            double v = z(col_of[j]);
            if (split[j])
                v -= z(col_of[j] + 1);
            else
                v += model.lower_bounds(j);
            sol.x(j) = v;
        }
        sol.objective = model.c.dot(sol.x);
        sol.status = LPStatus::Optimal;
        sol.iterations = iterations;
        return sol;
    }
}

void dump_lp(const LPModel& model, std::ostream& os) {
    const int n = model.num_vars();
    auto name = [&](int j) {
        return j < static_cast<int>(model.var_names.size()) && !model.var_names[j].empty()
                   ? model.var_names[j]
                   : "x" + std::to_string(j);
    };
    os << std::setprecision(17);
    os << "minimize";
    for (int j = 0; j < n; ++j) os << " " << model.c(j) << "*" << name(j);
    os << "\n";
    for (int i = 0; i < model.a_eq.rows(); ++i) {
        os << "eq";
        for (int j = 0; j < n; ++j) os << " " << model.a_eq(i, j);
        os << " = " << model.b_eq(i) << "\n";
    }
    for (int i = 0; i < model.a_ineq.rows(); ++i) {
        os << "ineq";
        for (int j = 0; j < n; ++j) os << " " << model.a_ineq(i, j);
        os << (model.senses[i] == RowSense::LessEqual ? " <= " : " >= ") << model.b_ineq(i) << "\n";
    }
    os << "bounds";
    for (int j = 0; j < n; ++j) {
        os << " ";
        if (std::isinf(model.lower_bounds(j)))
            os << "-inf";
        else
            os << model.lower_bounds(j);
    }
    os << "\n";
}

}  // namespace privlp
