#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

#include "opuczeros/intensity.hpp"
#include "opuczeros/rng.hpp"
#include "opuczeros/weights.hpp"
#include "oracles.hpp"

using namespace opuczeros;
using Catch::Matchers::WithinAbs;

namespace {

constexpr double kPi = std::numbers::pi;

std::complex<double> sample_point(std::uint64_t seed, int i) {
    const double u = rng::uniform_halfopen(rng::stream_word(seed, 0, 2 * i));
    const double t = kTwoPi * rng::uniform_halfopen(rng::stream_word(seed, 0, 2 * i + 1));
    const double r = (i % 2 == 0) ? 0.05 + 0.9 * u : 1.05 + 3.95 * u;
    return std::polar(r, t);
}

}  // namespace

TEST_CASE("intensity anchor values", "[intensity]") {
    const auto basis = build_basis(compute_moments(WeightSpec::uniform(), 6), 6);

    SECTION("n=0 is exactly zero") {
        CHECK(intensity_general(basis, 0, {0.3, 0.2}) == 0.0);
        CHECK(intensity_general(basis, 0, std::polar(1.0, 0.4)) == 0.0);
        CHECK_THAT(intensity_cd(basis, 0, {0.5, 0.0}), WithinAbs(0.0, 1e-12));
    }

    SECTION("uniform n=1 at the origin and z=0.5") {
        CHECK_THAT(intensity_general(basis, 1, {0.0, 0.0}), WithinAbs(1.0 / kPi, 1e-12));
        CHECK_THAT(intensity_general(basis, 1, {0.5, 0.0}), WithinAbs(0.64 / kPi, 1e-12));
        CHECK_THAT(intensity_cd(basis, 1, {0.5, 0.0}), WithinAbs(0.64 / kPi, 1e-12));
    }

    SECTION("limit intensity") {
        CHECK_THAT(limit_intensity({0.0, 0.0}), WithinAbs(1.0 / kPi, 1e-15));
        CHECK_THAT(limit_intensity({2.0, 0.0}), WithinAbs(1.0 / (9.0 * kPi), 1e-15));
        CHECK_THROWS_AS(limit_intensity(std::polar(1.0, 0.3)), DomainError);
        CHECK_THROWS_AS(limit_intensity({1.0 + 1e-10, 0.0}), DomainError);
    }
}

TEST_CASE("intensity routes agree", "[intensity]") {
    const auto uniform = build_basis(compute_moments(WeightSpec::uniform(), 21), 21);
    const auto bs = build_basis(compute_moments(WeightSpec::bernstein_szego(0.5), 21), 21);

    SECTION("general equals cd at random points") {
        for (const auto* basis : {&uniform, &bs}) {
            for (int i = 0; i < 60; ++i) {
                const auto z = sample_point(201, i);
                for (int n : {1, 5, 20}) {
                    const double a = intensity_general(*basis, n, z);
                    const double b = intensity_cd(*basis, n, z);
                    CHECK(std::abs(a - b) <= 1e-9 * std::max(1.0, a));
                }
            }
        }
    }

    SECTION("general matches the hand-derived uniform kernel sums") {
        for (int i = 0; i < 30; ++i) {
            const auto z = sample_point(202, i);
            for (int n : {1, 3, 7}) {
                const double expected = oracles::uniform_intensity(n, z);
                CHECK(std::abs(intensity_general(uniform, n, z) - expected) <=
                      1e-11 * std::max(1.0, expected));
            }
        }
    }

    SECTION("cd refuses the band, general does not") {
        const auto z = std::polar(1.0 + 1e-9, 0.3);
        CHECK_THROWS_AS(intensity_cd(uniform, 3, z), NearCircleError);
        CHECK_NOTHROW(intensity_general(uniform, 3, z));
    }
}

TEST_CASE("intensity properties", "[intensity]") {
    const auto basis = build_basis(compute_moments(WeightSpec::bernstein_szego(0.5), 12), 12);
    const auto uniform = build_basis(compute_moments(WeightSpec::uniform(), 12), 12);

    SECTION("never exceeds the limit off the circle") {
        for (int i = 0; i < 40; ++i) {
            const auto z = sample_point(203, i);
            for (int n : {1, 4, 9}) {
                CHECK(intensity_cd(basis, n, z) <= limit_intensity(z) * (1.0 + 1e-12));
            }
        }
    }

    SECTION("rotational symmetry for the uniform weight") {
        const double reference = intensity_general(uniform, 5, std::polar(0.7, 0.0));
        for (int k = 1; k < 16; ++k) {
            const auto z = std::polar(0.7, kTwoPi * k / 16.0);
            CHECK(std::abs(intensity_general(uniform, 5, z) - reference) <= 1e-10 * reference);
        }
    }

    SECTION("conjugation symmetry") {
        for (int i = 0; i < 20; ++i) {
            const auto z = sample_point(204, i);
            const double a = intensity_general(basis, 6, z);
            const double b = intensity_general(basis, 6, std::conj(z));
            CHECK(std::abs(a - b) <= 1e-10 * std::max(1.0, a));
        }
    }

    SECTION("general stays continuous across the circle") {
        // The direct route has no band; values just inside, on, and just
        // outside the circle must line up.
        const double inside = intensity_general(uniform, 5, {1.0 - 1e-4, 0.0});
        const double on = intensity_general(uniform, 5, {1.0, 0.0});
        const double outside = intensity_general(uniform, 5, {1.0 + 1e-4, 0.0});
        CHECK(std::abs(inside - on) <= 2e-3);
        CHECK(std::abs(outside - on) <= 2e-3);
    }
}

TEST_CASE("intensity grid", "[intensity]") {
    const auto basis = build_basis(compute_moments(WeightSpec::uniform(), 4), 4);

    SECTION("3x3 grid centered at the origin") {
        const auto grid = intensity_grid(basis, 1, -0.5, 0.5, 3, -0.5, 0.5, 3,
                                         IntensityMethod::Auto);
        REQUIRE(grid.values.size() == 9);
        for (double v : grid.values) CHECK(std::isfinite(v));
        CHECK_THAT(grid.values[4], WithinAbs(1.0 / kPi, 1e-12));
        for (auto m : grid.masked) CHECK(m == 0);
    }

    SECTION("n=0 grid is zero everywhere") {
        const auto grid = intensity_grid(basis, 0, -0.5, 0.5, 5, -0.5, 0.5, 5,
                                         IntensityMethod::General);
        for (double v : grid.values) CHECK(v == 0.0);
    }

    SECTION("cd method propagates the band refusal") {
        // x = 1.0, y = 0 lands exactly on the circle.
        CHECK_THROWS_AS(intensity_grid(basis, 1, 0.5, 1.5, 3, 0.0, 0.0, 1,
                                       IntensityMethod::ChristoffelDarboux),
                        NearCircleError);
    }

    SECTION("auto method masks and fills the same nodes") {
        const auto grid = intensity_grid(basis, 1, 0.5, 1.5, 3, 0.0, 0.0, 1,
                                         IntensityMethod::Auto);
        CHECK(grid.masked[0] == 0);
        CHECK(grid.masked[1] == 1);  // the on-circle node
        CHECK(grid.masked[2] == 0);
        for (double v : grid.values) CHECK(std::isfinite(v));
    }

    SECTION("wide band masks a ring") {
        const auto grid = intensity_grid(basis, 2, 0.8, 1.2, 21, -0.1, 0.1, 11,
                                         IntensityMethod::Auto, 0.05);
        int masked = 0;
        for (auto m : grid.masked) masked += m;
        CHECK(masked > 0);
        CHECK(masked < static_cast<int>(grid.masked.size()));
    }

    SECTION("mirror symmetry in y for even weights") {
        const auto bs = build_basis(compute_moments(WeightSpec::bernstein_szego(0.5), 4), 4);
        const auto grid = intensity_grid(bs, 3, -0.8, 0.8, 9, -0.8, 0.8, 9,
                                         IntensityMethod::Auto);
        for (int iy = 0; iy < 9; ++iy) {
            for (int ix = 0; ix < 9; ++ix) {
                const double a = grid.values[iy * 9 + ix];
                const double b = grid.values[(8 - iy) * 9 + ix];
                CHECK(std::abs(a - b) <= 1e-9 * std::max(1.0, a));
            }
        }
    }

    SECTION("refilling is deterministic") {
        const auto a = intensity_grid(basis, 2, -1.5, 1.5, 11, -1.5, 1.5, 11,
                                      IntensityMethod::Auto);
        const auto b = intensity_grid(basis, 2, -1.5, 1.5, 11, -1.5, 1.5, 11,
                                      IntensityMethod::Auto);
        CHECK(a.values == b.values);
        CHECK(a.masked == b.masked);
    }
}

TEST_CASE("convergence profile", "[intensity]") {
    SECTION("uniform deviations match the closed form and decrease") {
        const auto basis = build_basis(compute_moments(WeightSpec::uniform(), 12), 12);
        const std::complex<double> z{0.5, 0.0};
        const auto profile = convergence_profile(basis, z, {1, 5, 10});
        REQUIRE(profile.size() == 3);
        CHECK_THAT(profile[0].relative_deviation,
                   WithinAbs(oracles::uniform_relative_deviation(1, 0.5), 1e-10));
        CHECK_THAT(profile[1].relative_deviation,
                   WithinAbs(oracles::uniform_relative_deviation(5, 0.5), 1e-10));
        CHECK_THAT(profile[2].relative_deviation,
                   WithinAbs(oracles::uniform_relative_deviation(10, 0.5), 1e-10));
        CHECK(profile[0].relative_deviation < 1.0);
        CHECK(profile[1].relative_deviation < profile[0].relative_deviation);
        CHECK(profile[2].relative_deviation < profile[1].relative_deviation);
    }

    SECTION("large-n deviation is small inside and outside") {
        const auto basis = build_basis(compute_moments(WeightSpec::bernstein_szego(0.5), 41), 41);
        for (const std::complex<double> z :
             {std::complex<double>(0.5, 0.3), std::complex<double>(2.0, 0.0),
              std::complex<double>(-1.4, 0.6)}) {
            const auto profile = convergence_profile(basis, z, {10, 40});
            CHECK(profile[1].relative_deviation < 1e-2);
            CHECK(profile[1].relative_deviation <= profile[0].relative_deviation);
        }
    }
}
