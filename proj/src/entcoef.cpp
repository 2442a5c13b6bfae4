#include "privlp/entcoef.hpp"

#include <sstream>

namespace privlp {

EntropyCoefficients entropy_coefficients(const OmegaRecord& rec, LogBase base) {
    const int nx = static_cast<int>(rec.t.size());
    EntropyCoefficients coef;
    coef.base = base;
    coef.l.resize(nx);
    for (int i = 0; i < nx; ++i) {
        if (rec.t(i) <= tol::positive) {
            std::ostringstream os;
            os << "base point entry " << rec.t(i) << " at position " << i
               << " is not strictly positive";
            throw ZeroBasePoint(os.str());
        }
        coef.l(i) = log_in(rec.t(i), base);
    }
    coef.b = coef.l * rec.t;
    coef.a = coef.l * rec.h;
    return coef;
}

double approx_entropy(const EntropyCoefficients& coef, const Eigen::VectorXd& j, double eps) {
    return -(coef.b + eps * (coef.a * j)(0));
}

}  // namespace privlp
