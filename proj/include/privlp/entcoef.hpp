#ifndef PRIVLP_ENTCOEF_HPP
#define PRIVLP_ENTCOEF_HPP

#include <Eigen/Dense>

#include "privlp/probkit.hpp"
#include "privlp/rowspace.hpp"

namespace privlp {

/// First-order entropy expansion around a vertex base point:
/// H(vertex(j, eps)) = -(b + eps * a.dot(j)) + o(eps).
struct EntropyCoefficients {
    Eigen::RowVectorXd l;  // log of base-point entries
    double b = 0.0;        // l . t (so -b = H(t))
    Eigen::RowVectorXd a;  // l * H
    LogBase base = LogBase::Two;
};

/// Requires a FeasiblePositive record (all t entries above tol::positive);
/// throws ZeroBasePoint otherwise.
EntropyCoefficients entropy_coefficients(const OmegaRecord& rec, LogBase base);

double approx_entropy(const EntropyCoefficients& coef, const Eigen::VectorXd& j, double eps);

}  // namespace privlp

#endif  // PRIVLP_ENTCOEF_HPP
