#ifndef PRIVLP_ORACLE_HPP
#define PRIVLP_ORACLE_HPP

#include <cstddef>

#include "privlp/probkit.hpp"

namespace privlp {

enum class PrivacyCriterion { L1, Chi2 };

struct SearchConfig {
    int grid_resolution = 21;   // points per perturbation coordinate
    int refinement_rounds = 3;  // step-halving coordinate-descent rounds
    int u_cardinality = 0;      // 0 -> |Y|
    std::size_t evaluation_cap = 20'000'000;
    PrivacyCriterion criterion = PrivacyCriterion::L1;
    int threads = 0;
};

struct OracleResult {
    Mechanism mechanism;
    double utility = 0.0;              // H(Y) - best conditional entropy found
    double conditional_entropy = 0.0;
    double grid_gap_estimate = 0.0;    // heuristic bound on what a finer grid could add
    std::size_t evaluations = 0;       // weight LPs solved in the grid phase
};

/// Exhaustive lower-bound search through the vertex parameterization:
/// multisets of (Omega record, gridded admissible J) pairs, exact-entropy
/// weight LP per multiset, then coordinate refinement of the incumbent's J
/// values with shrinking steps. Every candidate is a feasible mechanism, so
/// the result certifies a lower bound on the true optimum.
OracleResult exact_search(const ProblemInstance& inst, double eps, const SearchConfig& cfg = {});

/// Reduction-free fallback: a coarse grid directly over column-stochastic
/// kernels P_{U|Y}, privacy-checked per output. Independent of the polytope
/// machinery; only practical for tiny alphabets.
OracleResult raw_kernel_search(const ProblemInstance& inst, double eps,
                               const SearchConfig& cfg = {});

struct SandwichReport {
    double chi2_at_eps = 0.0;        // g_eps
    double l1_at_eps = 0.0;          // f_eps
    double chi2_at_eps_prime = 0.0;  // g_{eps'}
    double eps = 0.0;
    double eps_prime = 0.0;
    double tolerance = 0.0;
    bool holds = false;
};

/// Runs the oracle under chi^2 at eps, l1 at eps, and chi^2 at
/// eps' = eps / sqrt(min P_X); checks g_eps <= f_eps <= g_{eps'} within the
/// combined grid tolerance.
SandwichReport sandwich_check(const ProblemInstance& inst, double eps,
                              const SearchConfig& cfg = {}, double tolerance = 5e-3);

}  // namespace privlp

#endif  // PRIVLP_ORACLE_HPP
