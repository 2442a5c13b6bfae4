#ifndef PRIVLP_PROBKIT_HPP
#define PRIVLP_PROBKIT_HPP

#include <Eigen/Dense>
#include <optional>
#include <string>
#include <vector>

#include "privlp/errors.hpp"

namespace privlp {

// Shared numeric tolerances. Probability-level checks use tol_nonneg;
// anything propagated through SVD + LP chains is held to the looser
// consistency tolerance.
namespace tol {
inline constexpr double nonneg = 1e-9;         // entry nonnegativity / unit sums
inline constexpr double consistency = 1e-7;    // marginal / Markov chains
inline constexpr double singular = 1e-10;      // rank decisions
inline constexpr double positive = 1e-9;       // t_Omega sign classification
inline constexpr double pivot = 1e-9;          // simplex pivoting
inline constexpr double prob = 1e-9;           // "this output carries no mass"
}  // namespace tol

enum class LogBase { Two, Natural };

/// log of x in the requested base; callers handle x <= 0 themselves.
double log_in(double x, LogBase base);

/// A probability vector over an index alphabet 0..n-1.
///
/// Entries below -tol::nonneg or a total mass off 1 by more than tol::nonneg
/// are rejected; tiny negative entries are clamped to zero.
class Distribution {
  public:
    Distribution() = default;  // empty placeholder, size 0
    explicit Distribution(Eigen::VectorXd probs);
    Distribution(std::initializer_list<double> probs);

    int size() const { return static_cast<int>(p_.size()); }
    double operator()(int i) const { return p_(i); }
    const Eigen::VectorXd& vec() const { return p_; }

    double min_entry() const { return p_.minCoeff(); }

  private:
    Eigen::VectorXd p_;
};

/// A column-stochastic matrix: column j is a conditional distribution given j.
class Channel {
  public:
    Channel() = default;  // empty placeholder
    explicit Channel(Eigen::MatrixXd matrix);

    int rows() const { return static_cast<int>(m_.rows()); }
    int cols() const { return static_cast<int>(m_.cols()); }
    const Eigen::MatrixXd& matrix() const { return m_; }
    Distribution column(int j) const { return Distribution(Eigen::VectorXd(m_.col(j))); }

  private:
    Eigen::MatrixXd m_;
};

/// The design input: leakage P_{X|Y}, marginal P_Y, and the derived P_X.
///
/// Requires full row rank and strictly positive marginals. x_values/y_values
/// are optional numeric labels used only by the MMSE/MAP metrics.
struct ProblemInstance {
    Channel leakage;     // |X| x |Y|
    Distribution p_y;    // over Y
    Distribution p_x;    // over X, equals leakage * p_y
    std::optional<Eigen::VectorXd> x_values;
    std::optional<Eigen::VectorXd> y_values;
    LogBase base = LogBase::Two;

    int x_dim() const { return leakage.rows(); }
    int y_dim() const { return leakage.cols(); }

    static ProblemInstance create(Channel leakage, Distribution p_y,
                                  std::optional<Eigen::VectorXd> x_values = std::nullopt,
                                  std::optional<Eigen::VectorXd> y_values = std::nullopt,
                                  LogBase base = LogBase::Two);
};

/// A disclosure mechanism: output distribution P_U, per-output posteriors
/// P_{Y|U=u}, and the perturbation vectors J_u with P_{X|U=u} = P_X + eps*J_u.
///
/// `perturbations` may be empty for channels that are not eps-designs
/// (the erasure baseline); validation then covers only the marginal mix.
struct Mechanism {
    Distribution p_u;
    std::vector<Distribution> posteriors;
    std::vector<Eigen::VectorXd> perturbations;
    double epsilon = 0.0;
};

/// Throws MechanismInvariantViolation when any invariant fails at `slack`:
/// marginal mix, P_{X|U=u} = P_X + eps*J_u, sum_u P_u J_u = 0, 1'J_u = 0,
/// and l1(J_u) <= 1.
void validate_mechanism(const Mechanism& m, const ProblemInstance& inst,
                        double slack = tol::consistency);

struct PrivacyReport {
    std::vector<double> deviations;  // l1(P_{X|U=u} - P_X) per u
    double max_deviation = 0.0;
    int worst_u = -1;
    double epsilon = 0.0;
    double chi2_epsilon = 0.0;  // eps / sqrt(min P_X)
    bool pass = false;
};

double entropy(const Distribution& d, LogBase base);

/// H(p_y) - sum_u p_u(u) H(posteriors[u]); checks the marginal mix first.
double mutual_information(const Distribution& p_u, const std::vector<Distribution>& posteriors,
                          const Distribution& p_y, LogBase base);

double l1_distance(const Distribution& p, const Distribution& q);
double chi2_divergence(const Distribution& p, const Distribution& q);
double tv_distance(const Distribution& p, const Distribution& q);

/// Per-output l1 deviations of the induced P_{X|U=u} from P_X, the maximum,
/// and the pass verdict at eps. Always returns a report.
PrivacyReport check_privacy(const Mechanism& m, const ProblemInstance& inst, double eps);

}  // namespace privlp

#endif  // PRIVLP_PROBKIT_HPP
