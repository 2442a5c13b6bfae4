#ifndef PRIVLP_ROWSPACE_HPP
#define PRIVLP_ROWSPACE_HPP

#include <Eigen/Dense>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "privlp/probkit.hpp"

namespace privlp {

/// Orthonormal basis M of the row space of the leakage matrix, together with
/// the column selection that makes the leading leakage block invertible.
///
/// Null(M) = Null(P_{X|Y}), so the polytopes below can be written through M
/// alone. Any row-equivalent M yields identical downstream quantities
/// (M_Omega^{-1} M is invariant); build_rowspace_basis returns the SVD one.
struct RowSpaceBasis {
    Eigen::MatrixXd m;               // |X| x |Y|
    std::vector<int> column_perm;    // permutation of 0..|Y|-1; first |X| = head
    Eigen::MatrixXd head_inverse;    // inverse of P_{X|Y1} (leakage head columns)
    Eigen::MatrixXd m_head;          // M columns at the head positions
    Eigen::MatrixXd m_head_inverse;
};

RowSpaceBasis build_rowspace_basis(const ProblemInstance& inst);

/// Checks the basis invariants (orthonormal rows, head conditioning);
/// throws on violation. Split out so tests can build ad-hoc bases.
void validate_rowspace_basis(const RowSpaceBasis& basis, const ProblemInstance& inst);

enum class OmegaClass { FeasiblePositive, Infeasible, BoundaryZero };

/// One candidate vertex family: the index set Omega, its base point
/// t = M_Omega^{-1} M P_Y, and the perturbation map H = M_Omega^{-1} M(1:|X|) P_{X|Y1}^{-1}.
struct OmegaRecord {
    std::vector<int> omega;          // sorted, size |X|, indices into Y
    int y_size = 0;                  // |Y| of the instance the record came from
    Eigen::MatrixXd m_omega_inverse;
    Eigen::VectorXd t;
    Eigen::MatrixXd h;
    OmegaClass cls = OmegaClass::BoundaryZero;
    double sigma_max = 0.0;          // largest singular value of h
    double radius = 0.0;             // max column abs-sum of h
};

struct OmegaEnumeration {
    std::vector<OmegaRecord> records;             // lexicographic in omega
    bool hxy_member = false;                      // no BoundaryZero record
    std::vector<std::pair<std::vector<int>, std::string>> skipped;  // singular M_Omega
};

/// Enumerates every size-|X| subset of Y with invertible M_Omega.
OmegaEnumeration enumerate_omegas(const RowSpaceBasis& basis, const ProblemInstance& inst,
                                  int threads = 0);

/// The vertex t(i) + eps*(H j)(i) placed at omega_i, zeros elsewhere.
/// Requires a FeasiblePositive record and an admissible j (1'j = 0, l1 <= 1);
/// throws NegativeEntry when eps pushes an entry negative.
Distribution extreme_point(const OmegaRecord& rec, const Eigen::VectorXd& j, double eps);

/// Same construction without the class/admissibility gate; returns nullopt
/// when the candidate has a negative entry. Used by the search oracle, which
/// screens all records at any eps.
std::optional<Eigen::VectorXd> try_extreme_point(const OmegaRecord& rec,
                                                 const Eigen::VectorXd& j, double eps);

struct EpsilonRange {
    double eps1 = 0.0;  // +inf when no Infeasible record exists
    double eps2 = 0.0;

    double bound() const { return eps1 < eps2 ? eps1 : eps2; }
};

/// Leakage bounds: below min(eps1, eps2) the first-order approximation
/// is valid and infeasible vertices stay infeasible.
EpsilonRange epsilon_range(const std::vector<OmegaRecord>& records);

/// r = max_i 1'|a_i| over columns a_i of H; l1(H j) <= r for all admissible j.
double perturbation_radius(const OmegaRecord& rec);

}  // namespace privlp

#endif  // PRIVLP_ROWSPACE_HPP
