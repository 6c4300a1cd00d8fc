#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

#include "opuczeros/errors.hpp"
#include "opuczeros/kernels.hpp"
#include "opuczeros/opuc.hpp"

namespace opuczeros {

/// Negative intensities within this of zero are rounding debris and clamp to 0.
inline constexpr double kIntensityClampTolerance = 1e-12;

enum class IntensityMethod { General, ChristoffelDarboux, Auto };

namespace detail {

inline double finalize_intensity(double h) {
    if (h < 0) {
        if (h < -kIntensityClampTolerance) {
            throw InternalConsistencyError("intensity negative beyond clamp tolerance: " +
                                           std::to_string(h));
        }
        return 0.0;
    }
    return h;
}

}  // namespace detail

/// Expected density of zeros per unit area at z for the random span of
/// phi_0..phi_n with iid standard complex Gaussian coefficients:
///   h_n = (k11 k - |k01|^2) / (pi k^2)
/// computed from the direct kernel sums, hence valid at every z. n = 0 gives
/// exactly zero (a single Gaussian multiple of a constant never vanishes).
inline double intensity_general(const OpucBasis& basis, int n, std::complex<double> z) {
    const KernelTriple t = kernel_direct(basis, n, z);
    if (!(t.k > 0)) {
        throw DegeneratePointError("kernel vanished at the evaluation point");
    }
    const double h = (t.k11 * t.k - std::norm(t.k01)) / (std::numbers::pi * t.k * t.k);
    return detail::finalize_intensity(h);
}

/// Same quantity through the Christoffel-Darboux closed form. With
/// s = 1 - |z|^2, g = |phi^*|^2 - |phi|^2 and w = phi^* phi' - phi^*' phi
/// (all at degree n+1):
///   h_n = (1 - s^2 |w|^2 / g^2) / (pi s^2)
/// Only meaningful off the circle; refuses the near-circle band. The negative
/// clamp acts on the dimensionless bracket 1 - q, since dividing by pi s^2
/// amplifies its rounding noise wherever h_n is far below the limit.
inline double intensity_cd(const OpucBasis& basis, int n, std::complex<double> z,
                           double band = kNearCircleBand) {
    if (n < 0 || n + 1 > basis.N) throw std::out_of_range("intensity_cd: needs 0 <= n <= N-1");
    const double s = 1.0 - std::norm(z);
    if (std::abs(s) < band) {
        throw NearCircleError("intensity_cd: |z| inside the exclusion band; use intensity_general");
    }
    const PointEval e = eval_all(basis, n + 1, z);
    const double gap = std::norm(e.phistar) - std::norm(e.phi);
    if (gap == 0) {
        throw DegeneratePointError("kernel vanished at the evaluation point");
    }
    const std::complex<double> w = e.phistar * e.dphi - e.dphistar * e.phi;
    const double q = s * s * std::norm(w) / (gap * gap);
    if (q > 1.0) {
        if (q - 1.0 > kIntensityClampTolerance) {
            throw InternalConsistencyError("intensity bracket negative beyond clamp tolerance: " +
                                           std::to_string(1.0 - q));
        }
        return 0.0;
    }
    return (1.0 - q) / (std::numbers::pi * s * s);
}

/// Weight-independent limit of h_n as n grows, 1 / (pi (1 - |z|^2)^2).
/// Undefined on the circle; refuses points with ||z| - 1| < 1e-9.
inline double limit_intensity(std::complex<double> z) {
    if (std::abs(std::abs(z) - 1.0) < 1e-9) {
        throw DomainError("limit_intensity undefined within 1e-9 of the unit circle");
    }
    const double s = 1.0 - std::norm(z);
    return 1.0 / (std::numbers::pi * s * s);
}

/// Auto routing: closed form away from the circle, direct sums inside the band.
inline double intensity_auto(const OpucBasis& basis, int n, std::complex<double> z,
                             double band = kNearCircleBand) {
    if (std::abs(1.0 - std::norm(z)) < band) return intensity_general(basis, n, z);
    return intensity_cd(basis, n, z, band);
}

/// Rectangular evaluation grid, row-major with x fastest. masked flags nodes
/// inside the near-circle band regardless of method.
struct IntensityGrid {
    double x_min = 0.0, x_max = 0.0;
    double y_min = 0.0, y_max = 0.0;
    int nx = 0, ny = 0;
    std::vector<double> values;
    std::vector<std::uint8_t> masked;
    int n = 0;
    IntensityMethod method = IntensityMethod::Auto;
    double band = kNearCircleBand;

    double x(int ix) const {
        return nx > 1 ? x_min + ix * (x_max - x_min) / (nx - 1) : x_min;
    }
    double y(int iy) const {
        return ny > 1 ? y_min + iy * (y_max - y_min) / (ny - 1) : y_min;
    }
};

/// Fills the grid node by node. Method General works everywhere; method
/// ChristoffelDarboux propagates NearCircleError from any node inside the band;
/// Auto switches to the direct sums there and masks the node.
inline IntensityGrid intensity_grid(const OpucBasis& basis, int n, double x_min, double x_max,
                                    int nx, double y_min, double y_max, int ny,
                                    IntensityMethod method, double band = kNearCircleBand) {
    if (nx < 1 || ny < 1) throw std::invalid_argument("intensity_grid: need nx, ny >= 1");
    if (!(x_min <= x_max) || !(y_min <= y_max)) {
        throw std::invalid_argument("intensity_grid: inverted axis range");
    }
    IntensityGrid grid;
    grid.x_min = x_min;
    grid.x_max = x_max;
    grid.y_min = y_min;
    grid.y_max = y_max;
    grid.nx = nx;
    grid.ny = ny;
    grid.n = n;
    grid.method = method;
    grid.band = band;
    grid.values.resize(static_cast<std::size_t>(nx) * ny);
    grid.masked.resize(static_cast<std::size_t>(nx) * ny);
    for (int iy = 0; iy < ny; ++iy) {
        for (int ix = 0; ix < nx; ++ix) {
            const std::complex<double> z{grid.x(ix), grid.y(iy)};
            const bool in_band = std::abs(1.0 - std::norm(z)) < band;
            double h = 0.0;
            switch (method) {
                case IntensityMethod::General:
                    h = intensity_general(basis, n, z);
                    break;
                case IntensityMethod::ChristoffelDarboux:
                    h = intensity_cd(basis, n, z, band);
                    break;
                case IntensityMethod::Auto:
                    h = intensity_auto(basis, n, z, band);
                    break;
            }
            const std::size_t idx = static_cast<std::size_t>(iy) * nx + ix;
            grid.values[idx] = h;
            grid.masked[idx] = in_band ? 1 : 0;
        }
    }
    return grid;
}

/// One row of a convergence table: h_n at a fixed z against the limit.
struct ConvergencePoint {
    int n = 0;
    double h = 0.0;
    double relative_deviation = 0.0;
};

/// |h_n(z) - limit| / limit over n_list, closed-form evaluation throughout.
inline std::vector<ConvergencePoint> convergence_profile(const OpucBasis& basis,
                                                         std::complex<double> z,
                                                         const std::vector<int>& n_list,
                                                         double band = kNearCircleBand) {
    const double limit = limit_intensity(z);
    std::vector<ConvergencePoint> out;
    out.reserve(n_list.size());
    for (int n : n_list) {
        ConvergencePoint p;
        p.n = n;
        p.h = intensity_cd(basis, n, z, band);
        p.relative_deviation = std::abs(p.h - limit) / limit;
        out.push_back(p);
    }
    return out;
}

}  // namespace opuczeros
