#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

#include "opuczeros/weights.hpp"

using namespace opuczeros;
using Catch::Matchers::WithinAbs;

namespace {
constexpr double kPi = std::numbers::pi;
}

TEST_CASE("weight evaluation", "[weights]") {
    SECTION("uniform is identically one") {
        const auto spec = WeightSpec::uniform();
        CHECK(evaluate_weight(spec, 1.3) == 1.0);
        CHECK(evaluate_weight(spec, -25.0) == 1.0);
    }

    SECTION("bernstein-szego endpoints") {
        const auto spec = WeightSpec::bernstein_szego(0.5);
        CHECK_THAT(evaluate_weight(spec, 0.0), WithinAbs(3.0, 1e-15));
        CHECK_THAT(evaluate_weight(spec, kPi), WithinAbs(1.0 / 3.0, 1e-15));
    }

    SECTION("all families are even in theta") {
        const std::vector<WeightSpec> specs = {
            WeightSpec::uniform(),
            WeightSpec::bernstein_szego(-0.4),
            WeightSpec::trig_poly({2.0, 1.0, 0.5}),
            WeightSpec::table(kTwoPi / 8, {1.0, 2.0, 3.0, 4.0, 5.0, 4.5, 2.5, 1.5}),
        };
        for (const auto& spec : specs) {
            for (double theta : {0.1, 0.9, 2.0, 3.1, 5.5}) {
                CHECK_THAT(evaluate_weight(spec, -theta),
                           WithinAbs(evaluate_weight(spec, theta), 1e-14));
            }
        }
    }

    SECTION("periodicity mod 2*pi") {
        const auto spec = WeightSpec::table(kTwoPi / 4, {1.0, 2.0, 3.0, 2.0});
        for (double theta : {0.3, 1.7, 4.0}) {
            CHECK_THAT(evaluate_weight(spec, theta + kTwoPi),
                       WithinAbs(evaluate_weight(spec, theta), 1e-13));
            CHECK_THAT(evaluate_weight(spec, theta - 3 * kTwoPi),
                       WithinAbs(evaluate_weight(spec, theta), 1e-13));
        }
    }

    SECTION("trig weight negative beyond tolerance is rejected") {
        const auto spec = WeightSpec::trig_poly({1.0, 2.0});  // 1 + 2 cos dips to -1
        CHECK_THROWS_AS(evaluate_weight(spec, kPi), InvalidWeightError);
    }

    SECTION("trig weight with a tangential zero clamps rounding debris") {
        const auto spec = WeightSpec::trig_poly({2.0, 2.0});  // 2 + 2 cos, zero at pi
        CHECK(evaluate_weight(spec, kPi) >= 0.0);
        CHECK_THAT(evaluate_weight(spec, kPi), WithinAbs(0.0, 1e-12));
    }

    SECTION("family parameter validation") {
        CHECK_THROWS_AS(WeightSpec::bernstein_szego(1.0), InvalidWeightError);
        CHECK_THROWS_AS(WeightSpec::bernstein_szego(-1.2), InvalidWeightError);
        CHECK_THROWS_AS(WeightSpec::table(0.1, {1.0, 2.0}), InvalidWeightError);
        CHECK_THROWS_AS(WeightSpec::table(kTwoPi / 4, {0.0, 0.0, 0.0, 0.0}), InvalidWeightError);
        CHECK_THROWS_AS(WeightSpec::table(kTwoPi / 4, {1.0, -1.0, 1.0, 1.0}), InvalidWeightError);
    }
}

TEST_CASE("moment computation", "[weights]") {
    SECTION("uniform moments are a delta sequence") {
        const auto m = compute_moments(WeightSpec::uniform(), 4);
        REQUIRE(m.max_index() == 4);
        CHECK_THAT(m.c[0], WithinAbs(1.0, 1e-14));
        for (int k = 1; k <= 4; ++k) CHECK_THAT(m.c[k], WithinAbs(0.0, 1e-14));
    }

    SECTION("bernstein-szego moments are geometric") {
        const auto m = compute_moments(WeightSpec::bernstein_szego(0.5), 3);
        CHECK_THAT(m.c[0], WithinAbs(1.0, 1e-13));
        CHECK_THAT(m.c[1], WithinAbs(0.5, 1e-13));
        CHECK_THAT(m.c[2], WithinAbs(0.25, 1e-13));
        CHECK_THAT(m.c[3], WithinAbs(0.125, 1e-13));
    }

    SECTION("trig polynomial moments come out as half the cosine coefficients") {
        const auto m = compute_moments(WeightSpec::trig_poly({2.0, 1.0, 0.25}), 5);
        CHECK_THAT(m.c[0], WithinAbs(2.0, 1e-13));
        CHECK_THAT(m.c[1], WithinAbs(0.5, 1e-13));
        CHECK_THAT(m.c[2], WithinAbs(0.125, 1e-13));
        CHECK_THAT(m.c[3], WithinAbs(0.0, 1e-13));
        CHECK_THAT(m.c[5], WithinAbs(0.0, 1e-13));
    }

    SECTION("doubling residuals collapse fast for smooth weights") {
        // Spectral accuracy: each doubling must gain at least a factor of ten
        // until the rounding floor.
        for (const auto& spec :
             {WeightSpec::uniform(), WeightSpec::bernstein_szego(0.5)}) {
            const auto m = compute_moments(spec, 8, 1e-13);
            REQUIRE(!m.residual_history.empty());
            for (std::size_t i = 1; i < m.residual_history.size(); ++i) {
                const bool floored = m.residual_history[i] <= 1e-13;
                CHECK((floored || m.residual_history[i] <= m.residual_history[i - 1] / 10.0));
            }
        }
    }

    SECTION("rough table weight cannot reach an extreme tolerance") {
        const auto spec = WeightSpec::table(
            kTwoPi / 8, {1.0, 3.0, 0.5, 2.0, 4.0, 2.0, 0.5, 3.0});
        try {
            compute_moments(spec, 2, 1e-16);
            FAIL("expected QuadratureFailure");
        } catch (const QuadratureFailure& e) {
            CHECK(e.residual() > 0.0);
            CHECK(e.residual() < 1e-3);
        }
    }

    SECTION("moderate tolerance works for table weights") {
        const auto spec = WeightSpec::table(
            kTwoPi / 8, {1.0, 3.0, 0.5, 2.0, 4.0, 2.0, 0.5, 3.0});
        const auto m = compute_moments(spec, 2, 1e-6);
        CHECK(m.tolerance < 1e-6);
        CHECK(m.c[0] > 0.0);
    }

    SECTION("argument validation") {
        CHECK_THROWS_AS(compute_moments(WeightSpec::uniform(), -1), std::invalid_argument);
        CHECK_THROWS_AS(compute_moments(WeightSpec::uniform(), 2, 0.0), std::invalid_argument);
    }
}

TEST_CASE("geometric mean", "[weights]") {
    SECTION("uniform") {
        CHECK_THAT(geometric_mean(WeightSpec::uniform()), WithinAbs(1.0, 1e-13));
    }

    SECTION("bernstein-szego gives 1 - a^2") {
        CHECK_THAT(geometric_mean(WeightSpec::bernstein_szego(0.5)), WithinAbs(0.75, 1e-11));
        CHECK_THAT(geometric_mean(WeightSpec::bernstein_szego(-0.3)), WithinAbs(0.91, 1e-11));
    }

    SECTION("trig weight with a circle zero still has a finite mean") {
        // 2 + 2 cos(theta) = |1 + e^{i theta}|^2 has geometric mean exactly 1;
        // the endpoint log singularity slows the quadrature to O(1/M), so the
        // cap is reached and the last estimate is accepted.
        const double g = geometric_mean(WeightSpec::trig_poly({2.0, 2.0}));
        CHECK_THAT(g, WithinAbs(1.0, 1e-4));
    }

    SECTION("table weight with a flat zero violates the szego class") {
        const auto spec = WeightSpec::table(kTwoPi / 8,
                                            {1.0, 1.0, 0.0, 0.0, 0.0, 0.0, 1.0, 1.0});
        CHECK_THROWS_AS(geometric_mean(spec), SzegoClassViolation);
    }
}

TEST_CASE("szego function", "[weights]") {
    const auto bs = WeightSpec::bernstein_szego(0.5);

    SECTION("uniform weight has D identically one") {
        for (const std::complex<double> xi : {std::complex<double>(0.0, 0.0),
                                              std::complex<double>(0.3, -0.4),
                                              std::complex<double>(-0.9, 0.0)}) {
            const auto d = szego_function(WeightSpec::uniform(), xi);
            CHECK_THAT(std::abs(d - 1.0), WithinAbs(0.0, 1e-12));
        }
    }

    SECTION("bernstein-szego closed form") {
        CHECK_THAT(std::abs(szego_function(bs, {0.0, 0.0}) - 0.8660254037844386),
                   WithinAbs(0.0, 1e-12));
        CHECK_THAT(std::abs(szego_function(bs, {0.5, 0.0}) - 1.1547005383792515),
                   WithinAbs(0.0, 1e-12));
        const std::complex<double> xi{0.2, 0.6};
        const auto expected = std::sqrt(0.75) / (1.0 - 0.5 * xi);
        CHECK_THAT(std::abs(szego_function(bs, xi) - expected), WithinAbs(0.0, 1e-12));
    }

    SECTION("D(0)^2 equals the geometric mean") {
        for (const auto& spec : {WeightSpec::uniform(), bs,
                                 WeightSpec::trig_poly({2.0, 1.0})}) {
            const auto d0 = szego_function(spec, {0.0, 0.0});
            CHECK_THAT(d0.real() * d0.real(), WithinAbs(geometric_mean(spec), 1e-9));
            CHECK_THAT(d0.imag(), WithinAbs(0.0, 1e-12));
        }
    }

    SECTION("boundary modulus recovers the weight near the circle") {
        // |D(0.99 e^{i theta})|^2 should sit within 2% of W(theta).
        for (double theta : {0.0, kPi / 2, kPi}) {
            const auto d = szego_function(bs, std::polar(0.99, theta), 1e-13);
            const double w = evaluate_weight(bs, theta);
            CHECK(std::abs(std::norm(d) - w) <= 0.02 * w);
        }
    }

    SECTION("radius restriction") {
        CHECK_THROWS_AS(szego_function(bs, {0.9999999, 0.0}), DomainError);
        CHECK_THROWS_AS(szego_function(bs, {1.5, 0.0}), DomainError);
    }
}
