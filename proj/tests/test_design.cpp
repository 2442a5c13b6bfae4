#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "privlp/design.hpp"
#include "privlp/watermark.hpp"
#include "test_support.hpp"

using namespace privlp;
using namespace privlp::testing;

namespace {

const OmegaRecord* record_for(const OmegaEnumeration& e, std::vector<int> omega) {
    for (const OmegaRecord& r : e.records)
        if (r.omega == omega) return &r;
    return nullptr;
}

struct GoldenSetup {
    ProblemInstance inst;
    OmegaEnumeration omegas;
    std::vector<const OmegaRecord*> combination;
    std::vector<EntropyCoefficients> coef_storage;
    std::vector<const EntropyCoefficients*> coefs;
};

// the combination the source material spells out: base points
// [0.675,0.325], [0.1875,0.8125], [0.1563,0.8437], [0.625,0.375]
GoldenSetup golden_setup() {
    GoldenSetup g{example2_instance(), {}, {}, {}, {}};
    g.omegas = enumerate_omegas(build_rowspace_basis(g.inst), g.inst);
    for (auto omega : {std::vector<int>{0, 1}, {0, 2}, {1, 3}, {2, 3}})
        g.combination.push_back(record_for(g.omegas, omega));
    for (const OmegaRecord* rec : g.combination)
        g.coef_storage.push_back(entropy_coefficients(*rec, g.inst.base));
    for (const auto& c : g.coef_storage) g.coefs.push_back(&c);
    return g;
}

std::vector<double> sorted_desc(const Distribution& d) {
    std::vector<double> v(d.vec().data(), d.vec().data() + d.size());
    std::sort(v.rbegin(), v.rend());
    return v;
}

}  // namespace

TEST_SUITE("design") {

TEST_CASE("eta LP objective matches the printed coefficients") {
    GoldenSetup g = golden_setup();
    const EtaLpModel model = build_eta_lp(g.combination, g.inst, 0.01, g.coefs);
    const std::vector<double> expected{0.567,  1.6215, 2.415,  0.2995,
                                       2.6776, 0.2452, 0.6779, 1.4155};
    for (int u = 0; u < 4; ++u)
        for (int i = 0; i < 2; ++i)
            CHECK(model.lp.c(model.eta_index(u, i)) ==
                  doctest::Approx(expected[2 * u + i]).epsilon(2e-3));
    // auxiliaries carry no cost
    for (int u = 0; u < 4; ++u)
        for (int i = 0; i < 2; ++i) CHECK(model.lp.c(model.aux_index(u, i)) == 0.0);
}

TEST_CASE("eta LP marginal rows follow the omega mapping") {
    GoldenSetup g = golden_setup();
    const EtaLpModel model = build_eta_lp(g.combination, g.inst, 0.01, g.coefs);
    const Eigen::MatrixXd& a = model.lp.a_eq;
    // y1 = eta_1^1 + eta_2^1, y2 = eta_1^2 + eta_3^1,
    // y3 = eta_2^2 + eta_4^1, y4 = eta_3^2 + eta_4^2
    const std::vector<std::vector<int>> mapping{
        {model.eta_index(0, 0), model.eta_index(1, 0)},
        {model.eta_index(0, 1), model.eta_index(2, 0)},
        {model.eta_index(1, 1), model.eta_index(3, 0)},
        {model.eta_index(2, 1), model.eta_index(3, 1)},
    };
    const std::vector<double> rhs{0.5, 0.25, 0.125, 0.125};
    for (int y = 0; y < 4; ++y) {
        CHECK(model.lp.b_eq(y) == doctest::Approx(rhs[y]));
        for (int v = 0; v < model.lp.num_vars(); ++v) {
            const bool in_row = std::find(mapping[y].begin(), mapping[y].end(), v) !=
                                mapping[y].end();
            CHECK(a(y, v) == doctest::Approx(in_row ? 1.0 : 0.0));
        }
    }
}

TEST_CASE("golden combination solves to the printed cost and mechanism") {
    GoldenSetup g = golden_setup();
    const double eps = 0.01;
    const EtaLpModel model = build_eta_lp(g.combination, g.inst, eps, g.coefs);
    const LPSolution sol = solve_lp(model.lp);
    REQUIRE(sol.status == LPStatus::Optimal);
    CHECK(sol.objective == doctest::Approx(0.8239701380238844).epsilon(1e-8));

    const Mechanism m = recover_mechanism(sol, model, g.combination, g.inst, eps);
    CHECK(m.p_u(0) == doctest::Approx(0.7048).epsilon(2e-3));
    CHECK(m.p_u(1) == doctest::Approx(0.1492).epsilon(2e-3));
    CHECK(m.p_u(2) == doctest::Approx(0.146).epsilon(2e-3));
    CHECK(m.p_u(3) == doctest::Approx(0.0).epsilon(1e-9));
    CHECK(m.perturbations[0](0) == doctest::Approx(-0.0023).epsilon(5e-2));
    CHECK(m.perturbations[0](1) == doctest::Approx(0.0023).epsilon(5e-2));
    CHECK(m.perturbations[1](0) == doctest::Approx(0.5).epsilon(1e-3));
    CHECK(m.perturbations[1](1) == doctest::Approx(-0.5).epsilon(1e-3));
    CHECK(m.perturbations[2](0) == doctest::Approx(-0.5).epsilon(1e-3));
    CHECK(m.perturbations[2](1) == doctest::Approx(0.5).epsilon(1e-3));
    CHECK(m.perturbations[3].lpNorm<1>() == doctest::Approx(0.0).epsilon(1e-9));
}

TEST_CASE("eta transformation inverts per output") {
    GoldenSetup g = golden_setup();
    auto rng = make_rng(51);
    std::uniform_real_distribution<double> mass(0.05, 1.0);
    const double eps = 0.01;
    for (const OmegaRecord* rec : g.combination) {
        const Eigen::MatrixXd ginv = rec->h.inverse();
        for (int trial = 0; trial < 200; ++trial) {
            const double pu = mass(rng);
            const Eigen::VectorXd j = random_admissible_j(rng, 2);
            const Eigen::VectorXd eta = pu * rec->t + eps * (rec->h * (pu * j));
            CHECK(eta.sum() == doctest::Approx(pu).epsilon(1e-10));
            const Eigen::VectorXd back = ginv * (eta - eta.sum() * rec->t) / (eps * eta.sum());
            CHECK((back - j).lpNorm<Eigen::Infinity>() < 1e-8);
        }
    }
}

TEST_CASE("solver reproduces the published four-symbol run") {
    const ProblemInstance inst = example2_instance();
    const DesignResult res = solve_approx(inst, 0.01);
    CHECK(res.approx_objective == doctest::Approx(0.8239701380238844).epsilon(1e-8));
    CHECK(res.approx_utility == doctest::Approx(0.9260298619761156).epsilon(1e-8));
    CHECK(res.exact_utility == doctest::Approx(0.9266).epsilon(1e-3));
    CHECK(res.exact_utility >= res.approx_utility - 1e-6);

    const std::vector<double> pu = sorted_desc(res.mechanism.p_u);
    CHECK(pu[0] == doctest::Approx(0.7048).epsilon(2e-3));
    CHECK(pu[1] == doctest::Approx(0.1493).epsilon(2e-3));
    CHECK(pu[2] == doctest::Approx(0.1460).epsilon(2e-3));
    CHECK(pu[3] == doctest::Approx(0.0).epsilon(1e-9));

    CHECK(res.diagnostics.hxy_member);
    CHECK(res.diagnostics.epsilon_within_range);
    CHECK(res.diagnostics.eps_range.eps1 == doctest::Approx(0.0119683).epsilon(1e-5));
    CHECK(res.diagnostics.eps_range.eps2 == doctest::Approx(0.0155467).epsilon(1e-5));
    CHECK(res.diagnostics.combinations_tried == 35);  // C(4+4-1, 4)

    validate_mechanism(res.mechanism, inst);
    CHECK(check_privacy(res.mechanism, inst, 0.01).pass);
}

TEST_CASE("perfect privacy value and zero perturbations") {
    const ProblemInstance inst = example2_instance();
    const DesignResult res = solve_perfect_privacy(inst);
    // frozen from two independent optimizations of the vertex-decomposition LP
    CHECK(res.exact_utility == doctest::Approx(0.9152579568703372).epsilon(1e-7));
    CHECK(res.approx_utility == doctest::Approx(res.exact_utility).epsilon(1e-10));
    for (const Eigen::VectorXd& j : res.mechanism.perturbations)
        CHECK(j.lpNorm<1>() == doctest::Approx(0.0));
}

TEST_CASE("monotone against the perfect-privacy baseline and continuous at 0") {
    const ProblemInstance inst = example2_instance();
    const double perfect = solve_perfect_privacy(inst).exact_utility;
    double prev_gap = std::numeric_limits<double>::infinity();
    for (double eps : {1e-2, 1e-3, 1e-4}) {
        const DesignResult res = solve_approx(inst, eps);
        CHECK(res.exact_utility >= perfect - 1e-9);
        const double gap = std::abs(res.approx_utility - perfect);
        CHECK(gap <= prev_gap + 1e-12);
        prev_gap = gap;
    }
    CHECK(prev_gap < 5e-3);  // eps = 1e-4 sits next to the perfect-privacy program
}

TEST_CASE("ordered enumeration finds the same optimum") {
    const ProblemInstance inst = example2_instance();
    SolveOptions ordered;
    ordered.ordered_combinations = true;
    const DesignResult a = solve_approx(inst, 0.01);
    const DesignResult b = solve_approx(inst, 0.01, ordered);
    CHECK(b.diagnostics.combinations_tried == 256);  // 4^4
    CHECK(a.approx_objective == doctest::Approx(b.approx_objective).epsilon(1e-12));
}

TEST_CASE("watermark golden runs in nats") {
    const WatermarkInstance wm = watermark_instance({0.0});
    SUBCASE("eps = 0.0562") {
        const DesignResult res = solve_approx(wm.instance, 0.0562);
        CHECK(res.approx_objective == doctest::Approx(0.5426723531568884).epsilon(1e-7));
        CHECK(res.approx_utility == doctest::Approx(0.7101089732637538).epsilon(1e-7));
        const std::vector<double> pu = sorted_desc(res.mechanism.p_u);
        CHECK(pu[0] == doctest::Approx(0.486).epsilon(2e-3));
        CHECK(pu[1] == doctest::Approx(0.4758).epsilon(2e-3));
        CHECK(pu[2] == doctest::Approx(0.0382).epsilon(2e-2));
        CHECK(pu[3] == doctest::Approx(0.0).epsilon(1e-9));
    }
    SUBCASE("perfect privacy") {
        const DesignResult res = solve_perfect_privacy(wm.instance);
        CHECK(res.exact_utility == doctest::Approx(0.6413297394954955).epsilon(1e-7));
    }
}

TEST_CASE("square invertible leakage reveals nothing at eps = 0") {
    const WatermarkInstance wm = watermark_instance({1.0});
    REQUIRE(wm.reduced_square);
    const DesignResult res = solve_perfect_privacy(wm.instance);
    CHECK(res.exact_utility == doctest::Approx(0.0).epsilon(1e-9));
}

TEST_CASE("solver outputs always validate") {
    auto rng = make_rng(52);
    for (int trial = 0; trial < 8; ++trial) {
        const ProblemInstance inst = random_instance(rng, 2, 4);
        const OmegaEnumeration e = enumerate_omegas(build_rowspace_basis(inst), inst);
        if (!e.hxy_member) continue;
        const EpsilonRange range = epsilon_range(e.records);
        const double eps = 0.5 * range.bound();
        const DesignResult res = solve_approx(inst, eps);
        validate_mechanism(res.mechanism, inst);
        CHECK(check_privacy(res.mechanism, inst, eps).pass);
        CHECK(res.exact_utility >= -1e-10);
    }
}

TEST_CASE("three private symbols go through the same pipeline") {
    auto rng = make_rng(53);
    for (int trial = 0; trial < 3; ++trial) {
        const ProblemInstance inst = random_instance(rng, 3, 5);
        const OmegaEnumeration e = enumerate_omegas(build_rowspace_basis(inst), inst);
        if (!e.hxy_member) continue;
        const double eps = 0.3 * epsilon_range(e.records).bound();
        const DesignResult res = solve_approx(inst, eps);
        validate_mechanism(res.mechanism, inst);
        CHECK(check_privacy(res.mechanism, inst, eps).pass);
        CHECK(res.exact_utility >= solve_perfect_privacy(inst).exact_utility - 1e-9);
    }
}

TEST_CASE("H_XY gate and degenerate forcing") {
    const ProblemInstance inst = example1_second_instance();
    CHECK_THROWS_AS(solve_approx(inst, 1e-3), NotInHxy);
    // forcing leaves a single feasible record that cannot cover Y
    SolveOptions force;
    force.force_hxy = true;
    CHECK_THROWS_AS(solve_approx(inst, 1e-3, force), NoFeasibleCombination);
}

TEST_CASE("combination cap") {
    SolveOptions opts;
    opts.combination_cap = 2;
    CHECK_THROWS_AS(solve_approx(example2_instance(), 0.01, opts), CombinationCapExceeded);
}

TEST_CASE("out-of-range eps only warns through diagnostics") {
    const ProblemInstance inst = example2_instance();
    const DesignResult res = solve_approx(inst, 0.014);  // above eps1, below eps2
    CHECK(!res.diagnostics.epsilon_within_range);
    validate_mechanism(res.mechanism, inst);
}

}  // TEST_SUITE
