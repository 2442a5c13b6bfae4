#include <doctest.h>

#include <cmath>

#include "privlp/watermark.hpp"
#include "test_support.hpp"

using namespace privlp;

TEST_SUITE("watermark") {

TEST_CASE("base instance at alpha = 0") {
    const WatermarkInstance wm = watermark_instance({0.0});
    REQUIRE(!wm.reduced_square);
    REQUIRE(wm.kept_y == std::vector<int>({0, 1, 2, 3}));
    const ProblemInstance& inst = wm.instance;

    CHECK(inst.p_y(0) == doctest::Approx(107.0 / 300.0).epsilon(1e-12));
    CHECK(inst.p_y(1) == doctest::Approx(59.0 / 150.0).epsilon(1e-12));
    CHECK(inst.p_y(2) == doctest::Approx(0.11).epsilon(1e-12));
    CHECK(inst.p_y(3) == doctest::Approx(0.14).epsilon(1e-12));

    const std::vector<double> printed_py{0.3567, 0.3933, 0.11, 0.14};
    const std::vector<double> printed_row1{0.4766, 0.7119, 0.2727, 0.8571};
    for (int y = 0; y < 4; ++y) {
        CHECK(inst.p_y(y) == doctest::Approx(printed_py[y]).epsilon(2e-4));
        CHECK(inst.leakage.matrix()(0, y) == doctest::Approx(printed_row1[y]).epsilon(2e-4));
        CHECK(inst.leakage.matrix()(1, y) ==
              doctest::Approx(1.0 - printed_row1[y]).epsilon(2e-4));
    }
    CHECK(inst.base == LogBase::Natural);
    REQUIRE(inst.x_values);
    REQUIRE(inst.y_values);
    CHECK((*inst.x_values)(1) == doctest::Approx(2.0));
    CHECK((*inst.y_values)(3) == doctest::Approx(4.0));
}

TEST_CASE("alpha = 1 collapses to the invertible two-symbol case") {
    const WatermarkInstance wm = watermark_instance({1.0});
    REQUIRE(wm.reduced_square);
    REQUIRE(wm.kept_y == std::vector<int>({0, 1}));
    const ProblemInstance& inst = wm.instance;
    CHECK(inst.p_y(0) == doctest::Approx(7.0 / 15.0).epsilon(1e-12));
    CHECK(inst.p_y(1) == doctest::Approx(8.0 / 15.0).epsilon(1e-12));
    CHECK(inst.leakage.matrix()(0, 0) == doctest::Approx(3.0 / 7.0).epsilon(1e-12));
    CHECK(inst.leakage.matrix()(0, 1) == doctest::Approx(3.0 / 4.0).epsilon(1e-12));
    CHECK(inst.leakage.matrix()(1, 0) == doctest::Approx(4.0 / 7.0).epsilon(1e-12));
    CHECK(inst.leakage.matrix()(1, 1) == doctest::Approx(1.0 / 4.0).epsilon(1e-12));
    CHECK((*inst.y_values)(0) == doctest::Approx(1.0));
    CHECK((*inst.y_values)(1) == doctest::Approx(2.0));
}

TEST_CASE("family is stochastic and matches the closed forms on a grid") {
    for (int k = 0; k <= 20; ++k) {
        const double a = k / 20.0;
        const WatermarkInstance wm = watermark_instance({a});
        const ProblemInstance& inst = wm.instance;  // ctor validates stochasticity
        CHECK(inst.p_y.vec().sum() == doctest::Approx(1.0).epsilon(1e-12));
        if (a < 1.0) {
            CHECK(inst.p_y(0) == doctest::Approx(11 * a / 100 + 107.0 / 300).epsilon(1e-12));
            CHECK(inst.p_y(1) == doctest::Approx(7 * a / 50 + 59.0 / 150).epsilon(1e-12));
            CHECK(inst.leakage.matrix()(0, 0) ==
                  doctest::Approx((9 * a + 51) / (33 * a + 107)).epsilon(1e-12));
            CHECK(inst.leakage.matrix()(0, 1) ==
                  doctest::Approx((18 * a + 42) / (21 * a + 59)).epsilon(1e-12));
        }
        // denominators stay safely positive on [0, 1]
        CHECK(33 * a + 107 > 0.0);
        CHECK(21 * a + 59 > 0.0);
    }
}

TEST_CASE("alpha bounds") {
    CHECK_THROWS_AS(watermark_instance({-0.1}), Error);
    CHECK_THROWS_AS(watermark_instance({1.1}), Error);
}

}  // TEST_SUITE
