#ifndef PRIVLP_DESIGN_HPP
#define PRIVLP_DESIGN_HPP

#include <cstddef>
#include <vector>

#include "privlp/entcoef.hpp"
#include "privlp/lp.hpp"
#include "privlp/probkit.hpp"
#include "privlp/rowspace.hpp"

namespace privlp {

/// The eta-variable linear program for one choice of vertex family per
/// output: eta_u = P_u t_u + eps H_u (P_u J_u), plus |X| absolute-value
/// auxiliaries per output for the l1 row.
struct EtaLpModel {
    LPModel lp;
    int num_outputs = 0;
    int x_dim = 0;

    int eta_index(int u, int i) const { return u * x_dim + i; }
    int aux_index(int u, int i) const { return num_outputs * x_dim + u * x_dim + i; }
};

/// Builds the LP for `combination` (one FeasiblePositive record per output,
/// length |Y|). `coefs` must align with `combination`.
EtaLpModel build_eta_lp(const std::vector<const OmegaRecord*>& combination,
                        const ProblemInstance& inst, double eps,
                        const std::vector<const EntropyCoefficients*>& coefs);

/// Maps an optimal eta solution back to (P_U, J_u, posteriors). Outputs with
/// 1'eta_u below tol::prob carry no mass and get J_u = 0; eps = 0 forces
/// J_u = 0 everywhere. Throws NumericalInconsistency when the recovered
/// mechanism fails its invariants at 1e-6.
Mechanism recover_mechanism(const LPSolution& sol, const EtaLpModel& model,
                            const std::vector<const OmegaRecord*>& combination,
                            const ProblemInstance& inst, double eps);

struct DesignDiagnostics {
    EpsilonRange eps_range;
    bool hxy_member = false;
    bool epsilon_within_range = false;
    std::size_t combinations_tried = 0;
    int lp_iterations = 0;       // winning LP
    long total_lp_iterations = 0;
};

struct DesignResult {
    Mechanism mechanism;
    std::vector<std::vector<int>> combination;  // omega per output
    double approx_objective = 0.0;              // approximated min H(Y|U)
    double approx_utility = 0.0;                // H(Y) - approx_objective
    double exact_utility = 0.0;                 // mutual information of the mechanism
    DesignDiagnostics diagnostics;
};

struct SolveOptions {
    bool force_hxy = false;
    std::size_t combination_cap = 1'000'000;
    bool ordered_combinations = false;  // full tuple enumeration, for paranoia runs
    int threads = 0;
};

/// Enumerates vertex-family combinations (multisets of size |Y| over the
/// FeasiblePositive records), solves the eta LP for each, and returns the
/// minimum-cost design. Ties go to the lexicographically smallest combination.
DesignResult solve_approx(const ProblemInstance& inst, double eps, const SolveOptions& opts = {});

/// The eps = 0 design (information through the null space only).
DesignResult solve_perfect_privacy(const ProblemInstance& inst, const SolveOptions& opts = {});

}  // namespace privlp

#endif  // PRIVLP_DESIGN_HPP
