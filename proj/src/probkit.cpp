#include "privlp/probkit.hpp"

#include <cmath>
#include <sstream>

namespace privlp {

double log_in(double x, LogBase base) {
    return base == LogBase::Two ? std::log2(x) : std::log(x);
}

Distribution::Distribution(Eigen::VectorXd probs) : p_(std::move(probs)) {
    if (p_.size() == 0) throw InvalidDistribution("empty probability vector");
    for (Eigen::Index i = 0; i < p_.size(); ++i) {
        if (!std::isfinite(p_(i)) || p_(i) < -tol::nonneg) {
            std::ostringstream os;
            os << "negative probability " << p_(i) << " at index " << i;
            throw InvalidDistribution(os.str());
        }
        if (p_(i) < 0.0) p_(i) = 0.0;
    }
    const double s = p_.sum();
    if (std::abs(s - 1.0) > 1e-9) {
        std::ostringstream os;
        os << "probabilities sum to " << s << ", expected 1";
        throw InvalidDistribution(os.str());
    }
}

Distribution::Distribution(std::initializer_list<double> probs)
    : Distribution(Eigen::Map<const Eigen::VectorXd>(probs.begin(),
                                                     static_cast<Eigen::Index>(probs.size()))) {}

Channel::Channel(Eigen::MatrixXd matrix) : m_(std::move(matrix)) {
    if (m_.rows() == 0 || m_.cols() == 0) throw InvalidChannel("empty channel matrix");
    for (Eigen::Index j = 0; j < m_.cols(); ++j) {
        double s = 0.0;
        for (Eigen::Index i = 0; i < m_.rows(); ++i) {
            const double v = m_(i, j);
            if (!std::isfinite(v) || v < -tol::nonneg || v > 1.0 + tol::nonneg) {
                std::ostringstream os;
                os << "channel entry (" << i << "," << j << ") = " << v << " outside [0,1]";
                throw InvalidChannel(os.str());
            }
            s += v;
        }
        if (std::abs(s - 1.0) > 1e-9) {
            std::ostringstream os;
            os << "channel column " << j << " sums to " << s;
            throw InvalidChannel(os.str());
        }
    }
}

ProblemInstance ProblemInstance::create(Channel leakage, Distribution p_y,
                                        std::optional<Eigen::VectorXd> x_values,
                                        std::optional<Eigen::VectorXd> y_values,
                                        LogBase base) {
    const int nx = leakage.rows();
    const int ny = leakage.cols();
    if (p_y.size() != ny) throw DimensionMismatch("p_y length does not match leakage columns");
    if (nx > ny) throw InvalidChannel("leakage has more rows than columns; full row rank impossible");
    if (x_values && x_values->size() != nx) throw DimensionMismatch("x_values length != |X|");
    if (y_values && y_values->size() != ny) throw DimensionMismatch("y_values length != |Y|");

    for (int y = 0; y < ny; ++y)
        if (p_y(y) <= 0.0) throw InvalidDistribution("p_y must be strictly positive");

    Eigen::VectorXd px = leakage.matrix() * p_y.vec();
    Distribution p_x{px};
    for (int x = 0; x < nx; ++x)
        if (p_x(x) <= 0.0) throw InvalidDistribution("derived p_x has a zero entry");

    Eigen::JacobiSVD<Eigen::MatrixXd> svd(leakage.matrix());
    if (svd.singularValues()(nx - 1) < tol::singular)
        throw RankDeficient("leakage matrix is not of full row rank");

    return ProblemInstance{std::move(leakage), std::move(p_y), std::move(p_x),
                           std::move(x_values), std::move(y_values), base};
}

double entropy(const Distribution& d, LogBase base) {
    double h = 0.0;
    for (int i = 0; i < d.size(); ++i) {
        const double p = d(i);
        if (p > 0.0) h -= p * log_in(p, base);
    }
    return h;
}

double mutual_information(const Distribution& p_u, const std::vector<Distribution>& posteriors,
                          const Distribution& p_y, LogBase base) {
    if (static_cast<int>(posteriors.size()) != p_u.size())
        throw DimensionMismatch("posterior count does not match |U|");
    Eigen::VectorXd mix = Eigen::VectorXd::Zero(p_y.size());
    for (int u = 0; u < p_u.size(); ++u) {
        if (posteriors[u].size() != p_y.size())
            throw DimensionMismatch("posterior alphabet does not match |Y|");
        mix += p_u(u) * posteriors[u].vec();
    }
    if ((mix - p_y.vec()).lpNorm<Eigen::Infinity>() > tol::consistency)
        throw MarginalMismatch("sum_u P_U(u) P_{Y|U=u} does not reproduce P_Y");

    double cond = 0.0;
    for (int u = 0; u < p_u.size(); ++u) cond += p_u(u) * entropy(posteriors[u], base);
    return entropy(p_y, base) - cond;
}

double l1_distance(const Distribution& p, const Distribution& q) {
    if (p.size() != q.size()) throw DimensionMismatch("l1_distance alphabet mismatch");
    return (p.vec() - q.vec()).lpNorm<1>();
}

double chi2_divergence(const Distribution& p, const Distribution& q) {
    if (p.size() != q.size()) throw DimensionMismatch("chi2_divergence alphabet mismatch");
    double s = 0.0;
    for (int i = 0; i < p.size(); ++i) {
        if (q(i) <= 0.0) throw ZeroReference("chi2 reference has a zero entry");
        const double d = p(i) - q(i);
        s += d * d / q(i);
    }
    return s;
}

double tv_distance(const Distribution& p, const Distribution& q) {
    return 0.5 * l1_distance(p, q);
}

void validate_mechanism(const Mechanism& m, const ProblemInstance& inst, double slack) {
    const int nu = m.p_u.size();
    if (static_cast<int>(m.posteriors.size()) != nu)
        throw MechanismInvariantViolation("posterior count != |U|");
    if (nu > inst.y_dim())
        throw MechanismInvariantViolation("|U| exceeds |Y|");

    Eigen::VectorXd mix = Eigen::VectorXd::Zero(inst.y_dim());
    for (int u = 0; u < nu; ++u) {
        if (m.posteriors[u].size() != inst.y_dim())
            throw MechanismInvariantViolation("posterior alphabet != |Y|");
        mix += m.p_u(u) * m.posteriors[u].vec();
    }
    if ((mix - inst.p_y.vec()).lpNorm<Eigen::Infinity>() > slack)
        throw MechanismInvariantViolation("mechanism does not reproduce P_Y");

    if (m.perturbations.empty()) return;

    if (static_cast<int>(m.perturbations.size()) != nu)
        throw MechanismInvariantViolation("perturbation count != |U|");
    Eigen::VectorXd mixed_j = Eigen::VectorXd::Zero(inst.x_dim());
    for (int u = 0; u < nu; ++u) {
        const Eigen::VectorXd& j = m.perturbations[u];
        if (j.size() != inst.x_dim())
            throw MechanismInvariantViolation("perturbation dimension != |X|");
        if (std::abs(j.sum()) > tol::nonneg)
            throw MechanismInvariantViolation("1'J_u != 0");
        if (j.lpNorm<1>() > 1.0 + tol::nonneg)
            throw MechanismInvariantViolation("l1(J_u) > 1");
        Eigen::VectorXd pxu = inst.leakage.matrix() * m.posteriors[u].vec();
        Eigen::VectorXd expect = inst.p_x.vec() + m.epsilon * j;
        if ((pxu - expect).lpNorm<Eigen::Infinity>() > slack)
            throw MechanismInvariantViolation("P_{X|U=u} != P_X + eps*J_u");
        mixed_j += m.p_u(u) * j;
    }
    if (mixed_j.lpNorm<Eigen::Infinity>() > slack)
        throw MechanismInvariantViolation("sum_u P_U(u) J_u != 0");
}

PrivacyReport check_privacy(const Mechanism& m, const ProblemInstance& inst, double eps) {
    PrivacyReport rep;
    rep.epsilon = eps;
    rep.chi2_epsilon = eps / std::sqrt(inst.p_x.min_entry());
    rep.deviations.resize(m.posteriors.size());
    for (size_t u = 0; u < m.posteriors.size(); ++u) {
        Eigen::VectorXd pxu = inst.leakage.matrix() * m.posteriors[u].vec();
        const double dev = (pxu - inst.p_x.vec()).lpNorm<1>();
        rep.deviations[u] = dev;
        if (dev > rep.max_deviation) {
            rep.max_deviation = dev;
            rep.worst_u = static_cast<int>(u);
        }
    }
    rep.pass = rep.max_deviation <= eps + tol::nonneg;
    return rep;
}

}  // namespace privlp
