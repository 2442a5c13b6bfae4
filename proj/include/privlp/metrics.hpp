#ifndef PRIVLP_METRICS_HPP
#define PRIVLP_METRICS_HPP

#include <Eigen/Dense>

#include "privlp/probkit.hpp"

namespace privlp {

enum class Target { X, Y };

/// One point of a trade-off curve; ranges checked on construction.
struct TradeoffPoint {
    double parameter = 0.0;  // epsilon or alpha
    double utility_mi = 0.0;
    double map_error = 0.0;
    double mmse_y_norm = 0.0;
    double mmse_x_norm = 0.0;

    void validate() const;
};

/// 1 - sum_u P_U(u) max_y P_{Y|U=u}(y): MAP misclassification probability of Y from U.
double map_error(const Mechanism& m, const ProblemInstance& inst);

/// sum_u P_U(u) (E[T^2|U=u] - E[T|U=u]^2) for the numerically labelled
/// target; throws MissingValues when the instance lacks the labels.
double mmse(const Mechanism& m, const ProblemInstance& inst, Target target);

/// mmse divided by the marginal variance of the target.
double mmse_normalized(const Mechanism& m, const ProblemInstance& inst, Target target);

double variance(const Distribution& d, const Eigen::VectorXd& values);

/// Var(X) - eps^2 (x1-x2)^2 / 4 for a zero-mean binary X: no l1-feasible
/// mechanism can estimate X better than this.
double mmse_lower_bound(const Distribution& p_x, const Eigen::VectorXd& x_values, double eps);

struct ErasureBaseline {
    double bound = 0.0;   // (1 - 1/eta_sq) min(eps, eta_sq)
    double delta = 0.0;   // erasure probability
    Mechanism mechanism;  // |U| = |Y| + 1, last symbol is the erasure
};

/// The erasure-channel comparison point. eta_sq is the externally supplied
/// eta_Y^2(X) value; requires 0 < eta_sq <= 1 and eps <= eta_sq.
/// The returned channel is not an l1-design: its Mechanism carries no
/// perturbation vectors.
ErasureBaseline erasure_baseline(const ProblemInstance& inst, double eps, double eta_sq);

/// Squared maximal correlation of (X, Y): second singular value, squared, of
/// diag(1/sqrt(P_X)) P_XY diag(1/sqrt(P_Y)). Offered as one interpretive
/// candidate for eta_sq; the bound's normalization is the caller's business.
double maximal_correlation_sq(const ProblemInstance& inst);

}  // namespace privlp

#endif  // PRIVLP_METRICS_HPP
