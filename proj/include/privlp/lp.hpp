#ifndef PRIVLP_LP_HPP
#define PRIVLP_LP_HPP

#include <Eigen/Dense>
#include <iosfwd>
#include <string>
#include <vector>

#include "privlp/errors.hpp"

namespace privlp {

enum class RowSense { LessEqual, GreaterEqual };

/// Dense LP: minimize c'x subject to a_eq x = b_eq, a_ineq x (<=|>=) b_ineq,
/// x_j >= lower_bounds[j] (use -infinity for free variables).
struct LPModel {
    Eigen::VectorXd c;
    Eigen::MatrixXd a_eq;    // may be 0 x n
    Eigen::VectorXd b_eq;
    Eigen::MatrixXd a_ineq;  // may be 0 x n
    Eigen::VectorXd b_ineq;
    std::vector<RowSense> senses;  // one per a_ineq row
    Eigen::VectorXd lower_bounds;
    std::vector<std::string> var_names;  // optional, for dumps

    int num_vars() const { return static_cast<int>(c.size()); }
};

enum class LPStatus { Optimal, Infeasible, Unbounded };

struct LPSolution {
    LPStatus status = LPStatus::Infeasible;
    Eigen::VectorXd x;
    double objective = 0.0;
    int iterations = 0;
};

/// Two-phase primal simplex on a dense tableau with Bland's rule.
/// Throws IterationLimit if the pivot count exceeds the safety cap
/// (cannot happen under Bland's rule unless the model is malformed).
LPSolution solve_lp(const LPModel& model);

/// Plain-text dump, one row per constraint, 17-digit coefficients, suitable
/// for feeding the model to an external solver for cross-checking.
void dump_lp(const LPModel& model, std::ostream& os);

}  // namespace privlp

#endif  // PRIVLP_LP_HPP
