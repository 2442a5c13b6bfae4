#include <doctest.h>

#include <cmath>

#include "privlp/probkit.hpp"
#include "test_support.hpp"

using namespace privlp;
using namespace privlp::testing;

TEST_SUITE("probkit") {

TEST_CASE("entropy reference values") {
    CHECK(entropy(Distribution({0.5, 0.25, 0.125, 0.125}), LogBase::Two) == doctest::Approx(1.75));
    CHECK(entropy(Distribution({1.0, 0.0, 0.0}), LogBase::Two) == doctest::Approx(0.0));
    CHECK(entropy(Distribution({1.0, 0.0, 0.0}), LogBase::Natural) == doctest::Approx(0.0));

    // direct summation oracle for the watermark marginal, in nats
    const Distribution wm({0.356666666666667, 0.393333333333333, 0.11, 0.14});
    double direct = 0.0;
    for (int i = 0; i < wm.size(); ++i) direct -= wm(i) * std::log(wm(i));
    CHECK(direct == doctest::Approx(1.2528).epsilon(1e-3));
    CHECK(entropy(wm, LogBase::Natural) == doctest::Approx(direct).epsilon(1e-12));
}

TEST_CASE("entropy is maximal at the uniform distribution") {
    auto rng = make_rng(11);
    for (int trial = 0; trial < 1000; ++trial) {
        const int n = 2 + static_cast<int>(rng() % 6);
        const Distribution d{random_distribution(rng, n)};
        const Distribution uniform{Eigen::VectorXd::Constant(n, 1.0 / n)};
        CHECK(entropy(d, LogBase::Two) <= entropy(uniform, LogBase::Two) + 1e-12);
    }
}

TEST_CASE("mutual information endpoints") {
    const Distribution py({0.5, 0.25, 0.125, 0.125});
    const Distribution pu({0.3, 0.7});
    SUBCASE("independence gives zero") {
        CHECK(mutual_information(pu, {py, py}, py, LogBase::Two) == doctest::Approx(0.0));
    }
    SUBCASE("identity copy gives H(Y)") {
        std::vector<Distribution> points;
        for (int y = 0; y < 4; ++y) {
            Eigen::VectorXd v = Eigen::VectorXd::Zero(4);
            v(y) = 1.0;
            points.emplace_back(v);
        }
        CHECK(mutual_information(py, points, py, LogBase::Two) == doctest::Approx(1.75));
    }
    SUBCASE("marginal mismatch is rejected") {
        const Distribution other({0.25, 0.25, 0.25, 0.25});
        CHECK_THROWS_AS(mutual_information(pu, {other, other}, py, LogBase::Two),
                        MarginalMismatch);
    }
}

TEST_CASE("mutual information bounds on random mechanisms") {
    auto rng = make_rng(12);
    for (int trial = 0; trial < 1000; ++trial) {
        const int ny = 3 + static_cast<int>(rng() % 3);
        const int nu = 2 + static_cast<int>(rng() % (ny - 1));
        const Distribution pu{random_distribution(rng, nu, 0.01)};
        std::vector<Distribution> posts;
        Eigen::VectorXd mix = Eigen::VectorXd::Zero(ny);
        for (int u = 0; u < nu; ++u) {
            posts.emplace_back(random_distribution(rng, ny));
            mix += pu(u) * posts.back().vec();
        }
        const Distribution py{mix};
        const double mi = mutual_information(pu, posts, py, LogBase::Two);
        CHECK(mi >= -1e-10);
        CHECK(mi <= entropy(pu, LogBase::Two) + 1e-9);
        CHECK(mi <= entropy(py, LogBase::Two) + 1e-9);
    }
}

TEST_CASE("distances") {
    const Distribution p({0.6, 0.4});
    const Distribution q({0.4, 0.6});
    CHECK(l1_distance(p, p) == doctest::Approx(0.0));
    CHECK(chi2_divergence(p, p) == doctest::Approx(0.0));
    CHECK(tv_distance(p, p) == doctest::Approx(0.0));
    CHECK(l1_distance(p, q) == doctest::Approx(0.4));
    CHECK(tv_distance(p, q) == doctest::Approx(0.2));
    CHECK_THROWS_AS(l1_distance(p, Distribution({1.0, 0.0, 0.0})), DimensionMismatch);
    CHECK_THROWS_AS(chi2_divergence(p, Distribution({1.0, 0.0})), ZeroReference);
}

TEST_CASE("l1 / chi2 sandwich inequalities") {
    auto rng = make_rng(13);
    for (int trial = 0; trial < 10000; ++trial) {
        const int n = 2 + static_cast<int>(rng() % 5);
        const Distribution p{random_distribution(rng, n)};
        const Distribution q{random_distribution(rng, n, 0.02)};
        const double l1 = l1_distance(p, q);
        const double chi2 = chi2_divergence(p, q);
        // l1 <= eps implies chi2 <= eps^2 / min(q)
        CHECK(chi2 <= l1 * l1 / q.min_entry() + 1e-12);
        // chi2 <= eps^2 implies l1 <= eps, via chi2 >= 4 TV^2
        CHECK(chi2 >= 4.0 * tv_distance(p, q) * tv_distance(p, q) - 1e-12);
        CHECK(l1 <= std::sqrt(chi2) + 1e-12);
    }
}

TEST_CASE("distribution and channel validation") {
    CHECK_THROWS_AS(Distribution({0.5, 0.4}), InvalidDistribution);
    CHECK_THROWS_AS(Distribution({1.2, -0.2}), InvalidDistribution);
    CHECK_NOTHROW(Distribution({1.0 + 5e-10, -5e-10}));
    Eigen::MatrixXd bad(2, 2);
    bad << 0.5, 0.9, 0.4, 0.1;  // first column sums to 0.9
    CHECK_THROWS_AS(Channel{bad}, InvalidChannel);
}

TEST_CASE("instance validation") {
    Eigen::MatrixXd rank1(2, 3);
    rank1 << 0.5, 0.5, 0.5, 0.5, 0.5, 0.5;
    CHECK_THROWS_AS(
        ProblemInstance::create(Channel(rank1), Distribution({0.5, 0.25, 0.25})),
        RankDeficient);
    Eigen::MatrixXd ok(2, 3);
    ok << 0.3, 0.8, 0.5, 0.7, 0.2, 0.5;
    CHECK_THROWS_AS(ProblemInstance::create(Channel(ok), Distribution({0.5, 0.5, 0.0})),
                    InvalidDistribution);
    const ProblemInstance inst = example2_instance();
    CHECK(inst.p_x(0) == doctest::Approx(0.4625));
    CHECK(inst.p_x(1) == doctest::Approx(0.5375));
}

TEST_CASE("check_privacy") {
    const ProblemInstance inst = example2_instance();
    SUBCASE("zero perturbations pass any eps") {
        Mechanism m;
        m.epsilon = 0.0;
        m.p_u = Distribution({0.5, 0.5});
        m.posteriors = {inst.p_y, inst.p_y};
        m.perturbations = {Eigen::VectorXd::Zero(2), Eigen::VectorXd::Zero(2)};
        const PrivacyReport rep = check_privacy(m, inst, 0.0);
        CHECK(rep.max_deviation == doctest::Approx(0.0));
        CHECK(rep.pass);
    }
    SUBCASE("deviation of 2 eps fails and is attributed") {
        const double eps = 0.01;
        Eigen::VectorXd j(2);
        j << -0.5, 0.5;
        // embed through the leading invertible block of the leakage matrix
        Eigen::MatrixXd head = inst.leakage.matrix().leftCols(2);
        Eigen::VectorXd q = Eigen::VectorXd::Zero(4);
        q.head(2) = head.inverse() * j;
        Mechanism m;
        m.epsilon = 2.0 * eps;
        m.p_u = Distribution({0.5, 0.5});
        m.posteriors = {Distribution(Eigen::VectorXd(inst.p_y.vec() + 2.0 * eps * q)),
                        Distribution(Eigen::VectorXd(inst.p_y.vec() - 2.0 * eps * q))};
        m.perturbations = {j, -j};
        const PrivacyReport rep = check_privacy(m, inst, eps);
        CHECK(!rep.pass);
        CHECK(rep.max_deviation == doctest::Approx(2.0 * eps));
        CHECK(rep.worst_u >= 0);
        CHECK(rep.chi2_epsilon == doctest::Approx(eps / std::sqrt(inst.p_x.min_entry())));
        // the same mechanism passes at its design leakage
        CHECK(check_privacy(m, inst, 2.0 * eps).pass);
        validate_mechanism(m, inst);
    }
}

TEST_CASE("mechanism invariants catch tampering") {
    const ProblemInstance inst = example2_instance();
    Mechanism m;
    m.epsilon = 0.0;
    m.p_u = Distribution({1.0});
    m.posteriors = {inst.p_y};
    m.perturbations = {Eigen::VectorXd::Zero(2)};
    CHECK_NOTHROW(validate_mechanism(m, inst));

    Mechanism bad = m;
    bad.perturbations[0] = Eigen::VectorXd::Constant(2, 0.6);  // breaks 1'J = 0
    CHECK_THROWS_AS(validate_mechanism(bad, inst), MechanismInvariantViolation);

    Mechanism bad2 = m;
    bad2.p_u = Distribution({0.5, 0.5});
    bad2.posteriors = {inst.p_y, Distribution({0.25, 0.25, 0.25, 0.25})};
    bad2.perturbations.clear();
    CHECK_THROWS_AS(validate_mechanism(bad2, inst), MechanismInvariantViolation);
}

}  // TEST_SUITE
