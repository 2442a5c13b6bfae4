#include "privlp/rowspace.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <mutex>
#include <sstream>

#include "privlp/parallel.hpp"

namespace privlp {

namespace {

std::string omega_str(const std::vector<int>& omega) {
    std::ostringstream os;
    os << "{";
    for (size_t i = 0; i < omega.size(); ++i) os << (i ? "," : "") << omega[i] + 1;
    os << "}";
    return os.str();
}

// Greedy max-volume column selection (modified Gram-Schmidt with pivoting).
std::vector<int> pivot_columns(const Eigen::MatrixXd& a, int count) {
    const int ny = static_cast<int>(a.cols());
    Eigen::MatrixXd work = a;
    std::vector<int> head;
    std::vector<bool> used(ny, false);
    for (int k = 0; k < count; ++k) {
        int best = -1;
        double best_norm = 0.0;
        for (int j = 0; j < ny; ++j) {
            if (used[j]) continue;
            const double n = work.col(j).norm();
            if (n > best_norm) {
                best_norm = n;
                best = j;
            }
        }
        if (best < 0 || best_norm < tol::singular)
            throw HeadSingular("no column subset yields an invertible leakage head");
        used[best] = true;
        head.push_back(best);
        const Eigen::VectorXd q = work.col(best) / best_norm;
        for (int j = 0; j < ny; ++j)
            if (!used[j]) work.col(j) -= q * q.dot(work.col(j));
    }
    return head;
}

Eigen::MatrixXd checked_inverse(const Eigen::MatrixXd& a, const char* what) {
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(a);
    if (svd.singularValues()(a.rows() - 1) < tol::singular)
        throw HeadSingular(std::string(what) + " is numerically singular");
    return a.inverse();
}

}  // namespace

RowSpaceBasis build_rowspace_basis(const ProblemInstance& inst) {
    const int nx = inst.x_dim();
    const int ny = inst.y_dim();
    const Eigen::MatrixXd& p = inst.leakage.matrix();

    Eigen::JacobiSVD<Eigen::MatrixXd> svd(p, Eigen::ComputeFullV);
    if (svd.singularValues()(nx - 1) < tol::singular)
        throw RankDeficient("leakage matrix rank below |X|");

    RowSpaceBasis basis;
    basis.m = svd.matrixV().leftCols(nx).transpose();

    std::vector<int> head = pivot_columns(p, nx);
    basis.column_perm = head;
    for (int j = 0; j < ny; ++j)
        if (std::find(head.begin(), head.end(), j) == head.end())
            basis.column_perm.push_back(j);

    Eigen::MatrixXd p_head(nx, nx), m_head(nx, nx);
    for (int k = 0; k < nx; ++k) {
        p_head.col(k) = p.col(head[k]);
        m_head.col(k) = basis.m.col(head[k]);
    }
    basis.head_inverse = checked_inverse(p_head, "P_{X|Y1}");
    basis.m_head = m_head;
    basis.m_head_inverse = checked_inverse(m_head, "M(1:|X|)");
    return basis;
}

void validate_rowspace_basis(const RowSpaceBasis& basis, const ProblemInstance& inst) {
    const int nx = inst.x_dim();
    Eigen::MatrixXd gram = basis.m * basis.m.transpose();
    if ((gram - Eigen::MatrixXd::Identity(nx, nx)).lpNorm<Eigen::Infinity>() > 1e-9)
        throw NumericalInconsistency("row-space basis rows are not orthonormal");
    // row space containment: P (I - M'M) = 0 forces rowspace(P) in rowspace(M)
    Eigen::MatrixXd resid = inst.leakage.matrix() -
                            inst.leakage.matrix() * basis.m.transpose() * basis.m;
    if (resid.lpNorm<Eigen::Infinity>() > 1e-8)
        throw NumericalInconsistency("basis does not span the leakage row space");
}

OmegaEnumeration enumerate_omegas(const RowSpaceBasis& basis, const ProblemInstance& inst,
                                  int threads) {
    const int nx = inst.x_dim();
    const int ny = inst.y_dim();

    std::vector<std::vector<int>> subsets;
    std::vector<int> cur(nx);
    // lexicographic k-subsets of 0..ny-1
    for (int i = 0; i < nx; ++i) cur[i] = i;
    while (true) {
        subsets.push_back(cur);
        int i = nx - 1;
        while (i >= 0 && cur[i] == ny - nx + i) --i;
        if (i < 0) break;
        ++cur[i];
        for (int k = i + 1; k < nx; ++k) cur[k] = cur[k - 1] + 1;
    }

    const Eigen::VectorXd mpy = basis.m * inst.p_y.vec();
    const Eigen::MatrixXd hcore = basis.m_head * basis.head_inverse;

    std::vector<std::optional<OmegaRecord>> slots(subsets.size());
    std::vector<std::optional<std::string>> skip_reason(subsets.size());

    auto work = [&](std::size_t s) {
        const std::vector<int>& omega = subsets[s];
        Eigen::MatrixXd mo(nx, nx);
        for (int k = 0; k < nx; ++k) mo.col(k) = basis.m.col(omega[k]);
        Eigen::JacobiSVD<Eigen::MatrixXd> svd(mo);
        if (svd.singularValues()(nx - 1) < tol::singular) {
            skip_reason[s] = "singular M_Omega (min singular value below 1e-10)";
            return;
        }
        OmegaRecord rec;
        rec.omega = omega;
        rec.y_size = ny;
        rec.m_omega_inverse = mo.inverse();
        rec.t = rec.m_omega_inverse * mpy;
        rec.h = rec.m_omega_inverse * hcore;
        const double tmin = rec.t.minCoeff();
        rec.cls = tmin > tol::positive    ? OmegaClass::FeasiblePositive
                  : tmin < -tol::positive ? OmegaClass::Infeasible
                                          : OmegaClass::BoundaryZero;
        Eigen::JacobiSVD<Eigen::MatrixXd> hsvd(rec.h);
        rec.sigma_max = hsvd.singularValues()(0);
        rec.radius = rec.h.cwiseAbs().colwise().sum().maxCoeff();
        slots[s] = std::move(rec);
    };

    if (subsets.size() >= 64)
        parallel_for(subsets.size(), work, threads);
    else
        for (std::size_t s = 0; s < subsets.size(); ++s) work(s);

    OmegaEnumeration out;
    out.hxy_member = true;
    for (std::size_t s = 0; s < subsets.size(); ++s) {
        if (skip_reason[s]) {
            out.skipped.emplace_back(subsets[s], *skip_reason[s]);
            continue;
        }
        if (slots[s]->cls == OmegaClass::BoundaryZero) out.hxy_member = false;
        out.records.push_back(std::move(*slots[s]));
    }
    return out;
}

Distribution extreme_point(const OmegaRecord& rec, const Eigen::VectorXd& j, double eps) {
    const int nx = static_cast<int>(rec.t.size());
    if (rec.cls != OmegaClass::FeasiblePositive)
        throw Error("extreme_point requires a FeasiblePositive record, got " + omega_str(rec.omega));
    if (j.size() != nx) throw DimensionMismatch("perturbation dimension != |X|");
    if (std::abs(j.sum()) > tol::nonneg) throw Error("perturbation does not sum to zero");
    if (j.lpNorm<1>() > 1.0 + tol::nonneg) throw Error("perturbation l1 norm exceeds 1");

    Eigen::VectorXd vals = rec.t + eps * (rec.h * j);
    for (int i = 0; i < nx; ++i) {
        if (vals(i) < -tol::nonneg) {
            std::ostringstream os;
            os << "extreme point of Omega " << omega_str(rec.omega) << " has negative entry "
               << vals(i) << " at position " << rec.omega[i] + 1 << " (eps too large)";
            throw NegativeEntry(os.str());
        }
        if (vals(i) < 0.0) vals(i) = 0.0;
    }
    Eigen::VectorXd full = Eigen::VectorXd::Zero(rec.y_size);
    for (int i = 0; i < nx; ++i) full(rec.omega[i]) = vals(i);
    return Distribution(std::move(full));
}

std::optional<Eigen::VectorXd> try_extreme_point(const OmegaRecord& rec,
                                                 const Eigen::VectorXd& j, double eps) {
    Eigen::VectorXd vals = rec.t + eps * (rec.h * j);
    if (vals.minCoeff() < -1e-12) return std::nullopt;
    Eigen::VectorXd full = Eigen::VectorXd::Zero(rec.y_size);
    for (int i = 0; i < vals.size(); ++i) full(rec.omega[i]) = std::max(vals(i), 0.0);
    return full;
}

EpsilonRange epsilon_range(const std::vector<OmegaRecord>& records) {
    double min_pos_t = std::numeric_limits<double>::infinity();
    double max_sigma_pos = 0.0;
    double min_neg_mag = std::numeric_limits<double>::infinity();
    double max_sigma_neg = 0.0;
    bool any_pos = false, any_neg = false;
    for (const OmegaRecord& rec : records) {
        if (rec.cls == OmegaClass::FeasiblePositive) {
            any_pos = true;
            min_pos_t = std::min(min_pos_t, rec.t.minCoeff());
            max_sigma_pos = std::max(max_sigma_pos, rec.sigma_max);
        } else if (rec.cls == OmegaClass::Infeasible) {
            any_neg = true;
            double most_negative = 0.0;
            for (int i = 0; i < rec.t.size(); ++i)
                if (rec.t(i) < 0.0) most_negative = std::max(most_negative, -rec.t(i));
            min_neg_mag = std::min(min_neg_mag, most_negative);
            max_sigma_neg = std::max(max_sigma_neg, rec.sigma_max);
        }
    }
    if (!any_pos) throw NoFeasibleOmega("no FeasiblePositive Omega record");
    EpsilonRange r;
    r.eps1 = any_neg ? min_neg_mag / max_sigma_neg : std::numeric_limits<double>::infinity();
    r.eps2 = min_pos_t / max_sigma_pos;
    return r;
}

double perturbation_radius(const OmegaRecord& rec) {
    return rec.h.cwiseAbs().colwise().sum().maxCoeff();
}

}  // namespace privlp
