#ifndef PRIVLP_INVSOLVER_HPP
#define PRIVLP_INVSOLVER_HPP

#include <Eigen/Dense>

#include "privlp/probkit.hpp"

namespace privlp {

/// Closed-form design for a square invertible leakage matrix, via the
/// principal right singular vector of W = diag(1/sqrt(P_Y)) P_{X|Y}^{-1} diag(sqrt(P_X)),
/// with the perturbation renormalized to unit l1 norm.
///
/// approx_utility (and the exact cross-check in tests) is in nats: the
/// quadratic closed form comes from a natural-log Taylor expansion and does
/// not rescale with the instance log base.
struct InvertibleSolution {
    Eigen::MatrixXd w;
    double sigma_max = 0.0;
    Eigen::VectorXd l_star;       // principal right singular vector of w
    double scale = 0.0;           // l1 of diag(sqrt(P_X)) * l_star
    double approx_utility = 0.0;  // 0.5 eps^2 sigma_max^2 / scale^2, nats
    Mechanism mechanism;          // uniform binary U
    bool epsilon_within_validity = true;
};

InvertibleSolution solve_invertible(const ProblemInstance& inst, double eps);

}  // namespace privlp

#endif  // PRIVLP_INVSOLVER_HPP
