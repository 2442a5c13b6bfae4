#include "privlp/invsolver.hpp"

#include <cmath>

namespace privlp {

InvertibleSolution solve_invertible(const ProblemInstance& inst, double eps) {
    const int n = inst.x_dim();
    if (n != inst.y_dim()) throw NotSquare("invertible-case solver needs |X| = |Y|");
    Eigen::JacobiSVD<Eigen::MatrixXd> leak_svd(inst.leakage.matrix());
    if (leak_svd.singularValues()(n - 1) < tol::singular)
        throw Singular("leakage matrix is numerically singular");

    const Eigen::VectorXd sqrt_px = inst.p_x.vec().cwiseSqrt();
    const Eigen::VectorXd sqrt_py = inst.p_y.vec().cwiseSqrt();
    const Eigen::MatrixXd leak_inv = inst.leakage.matrix().inverse();

    InvertibleSolution sol;
    sol.w = sqrt_py.cwiseInverse().asDiagonal() * leak_inv * Eigen::MatrixXd(sqrt_px.asDiagonal());

    Eigen::JacobiSVD<Eigen::MatrixXd> svd(sol.w, Eigen::ComputeFullV);
    sol.sigma_max = svd.singularValues()(0);
    sol.l_star = svd.matrixV().col(0);
    for (int i = 0; i < n; ++i) {
        if (std::abs(sol.l_star(i)) > 1e-12) {
            if (sol.l_star(i) < 0.0) sol.l_star = -sol.l_star;
            break;
        }
    }

    // imported property of W: smallest singular value 1, vector sqrt(P_X)
    const double sigma_min = svd.singularValues()(n - 1);
    Eigen::VectorXd vmin = svd.matrixV().col(n - 1);
    if (vmin.dot(sqrt_px) < 0.0) vmin = -vmin;
    if (std::abs(sigma_min - 1.0) > 1e-8 || (vmin - sqrt_px).lpNorm<Eigen::Infinity>() > 1e-8)
        throw NumericalInconsistency("W lost its unit singular pair at sqrt(P_X)");
    if (std::abs(sol.l_star.dot(sqrt_px)) > 1e-8)
        throw NumericalInconsistency("principal singular vector not orthogonal to sqrt(P_X)");

    const Eigen::VectorXd scaled = sqrt_px.asDiagonal() * sol.l_star;
    sol.scale = scaled.lpNorm<1>();
    sol.approx_utility = 0.5 * eps * eps * sol.sigma_max * sol.sigma_max / (sol.scale * sol.scale);

    const Eigen::VectorXd j = scaled / sol.scale;
    const Eigen::VectorXd shift = leak_inv * j;
    // the expansion needs |eps shift(y)| << p_y(y); flag once the ratio
    // passes 1/2, well before the posteriors leave the simplex
    for (int y = 0; y < n; ++y)
        if (std::abs(eps * shift(y)) > 0.5 * inst.p_y(y)) sol.epsilon_within_validity = false;

    Mechanism m;
    m.epsilon = eps;
    m.p_u = Distribution(Eigen::VectorXd::Constant(2, 0.5));
    m.posteriors.push_back(Distribution(Eigen::VectorXd(inst.p_y.vec() + eps * shift)));
    m.posteriors.push_back(Distribution(Eigen::VectorXd(inst.p_y.vec() - eps * shift)));
    m.perturbations.push_back(j);
    m.perturbations.push_back(-j);
    validate_mechanism(m, inst);
    sol.mechanism = std::move(m);
    return sol;
}

}  // namespace privlp
