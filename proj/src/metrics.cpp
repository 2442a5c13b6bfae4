#include "privlp/metrics.hpp"

#include <cmath>
#include <sstream>

namespace privlp {

void TradeoffPoint::validate() const {
    auto in = [](double v, double lo, double hi) { return v >= lo && v <= hi; };
    if (!in(map_error, 0.0, 1.0) || !in(mmse_y_norm, 0.0, 1.0 + 1e-9) ||
        !in(mmse_x_norm, 0.0, 1.0 + 1e-9) || utility_mi < -1e-9) {
        std::ostringstream os;
        os << "trade-off point out of range: mi=" << utility_mi << " map=" << map_error
           << " mmse_y=" << mmse_y_norm << " mmse_x=" << mmse_x_norm;
        throw Error(os.str());
    }
}

double map_error(const Mechanism& m, const ProblemInstance& inst) {
    (void)inst;
    double correct = 0.0;
    for (int u = 0; u < m.p_u.size(); ++u)
        correct += m.p_u(u) * m.posteriors[u].vec().maxCoeff();
    return 1.0 - correct;
}

namespace {

const Eigen::VectorXd& target_values(const ProblemInstance& inst, Target target) {
    const auto& vals = target == Target::X ? inst.x_values : inst.y_values;
    if (!vals)
        throw MissingValues(std::string("numeric labels for ") +
                            (target == Target::X ? "X" : "Y") + " are not set");
    return *vals;
}

}  // namespace

double mmse(const Mechanism& m, const ProblemInstance& inst, Target target) {
    const Eigen::VectorXd& vals = target_values(inst, target);
    double s = 0.0;
    for (int u = 0; u < m.p_u.size(); ++u) {
        Eigen::VectorXd cond = target == Target::Y
                                   ? m.posteriors[u].vec()
                                   : Eigen::VectorXd(inst.leakage.matrix() * m.posteriors[u].vec());
        const double e1 = cond.dot(vals);
        const double e2 = cond.dot(vals.cwiseProduct(vals));
        s += m.p_u(u) * (e2 - e1 * e1);
    }
    return s;
}

double variance(const Distribution& d, const Eigen::VectorXd& values) {
    if (values.size() != d.size()) throw DimensionMismatch("label count != alphabet size");
    const double e1 = d.vec().dot(values);
    const double e2 = d.vec().dot(values.cwiseProduct(values));
    return e2 - e1 * e1;
}

double mmse_normalized(const Mechanism& m, const ProblemInstance& inst, Target target) {
    const Eigen::VectorXd& vals = target_values(inst, target);
    const double var =
        target == Target::Y ? variance(inst.p_y, vals) : variance(inst.p_x, vals);
    return mmse(m, inst, target) / var;
}

double mmse_lower_bound(const Distribution& p_x, const Eigen::VectorXd& x_values, double eps) {
    if (p_x.size() != 2 || x_values.size() != 2)
        throw NotBinary("the MMSE lower bound needs a binary X");
    const double mean = p_x.vec().dot(x_values);
    if (std::abs(mean) > tol::nonneg) throw NotZeroMean("X labels must have zero mean");
    const double d = x_values(0) - x_values(1);
    return variance(p_x, x_values) - 0.25 * eps * eps * d * d;
}

ErasureBaseline erasure_baseline(const ProblemInstance& inst, double eps, double eta_sq) {
    if (!(eta_sq > 0.0 && eta_sq <= 1.0))
        throw InvalidEta("eta_sq must lie in (0, 1]");
    if (eps > eta_sq)
        throw InvalidEta("eps must not exceed eta_sq (delta would leave [0, 1])");

    ErasureBaseline out;
    out.delta = 1.0 - eps / eta_sq;
    out.bound = (1.0 - 1.0 / eta_sq) * std::min(eps, eta_sq);

    const int ny = inst.y_dim();
    Eigen::VectorXd pu(ny + 1);
    Mechanism m;
    m.epsilon = eps;
    for (int y = 0; y < ny; ++y) {
        pu(y) = (1.0 - out.delta) * inst.p_y(y);
        Eigen::VectorXd point = Eigen::VectorXd::Zero(ny);
        point(y) = 1.0;
        m.posteriors.push_back(Distribution(std::move(point)));
    }
    pu(ny) = out.delta;
    m.posteriors.push_back(inst.p_y);
    m.p_u = Distribution(std::move(pu));
    out.mechanism = std::move(m);
    return out;
}

double maximal_correlation_sq(const ProblemInstance& inst) {
    const Eigen::MatrixXd joint =
        inst.leakage.matrix() * inst.p_y.vec().asDiagonal();  // P_XY
    const Eigen::MatrixXd q = inst.p_x.vec().cwiseSqrt().cwiseInverse().asDiagonal() * joint *
                              Eigen::MatrixXd(inst.p_y.vec().cwiseSqrt().cwiseInverse().asDiagonal());
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(q);
    if (svd.singularValues().size() < 2) return 0.0;
    const double s2 = svd.singularValues()(1);
    return s2 * s2;
}

}  // namespace privlp
