#pragma once

#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>

#include "opuczeros/detail/kahan.hpp"
#include "opuczeros/errors.hpp"
#include "opuczeros/intensity.hpp"

namespace opuczeros {

enum class RegionKind { Disk, Annulus, Rectangle, AnnularSector };

/// Planar region with positive measure. contains() tests the open interior,
/// so boundary points never count.
class JordanRegion {
public:
    static JordanRegion disk(std::complex<double> center, double radius) {
        if (!(radius > 0)) throw std::invalid_argument("disk: radius must be positive");
        JordanRegion r(RegionKind::Disk);
        r.center_ = center;
        r.r_outer_ = radius;
        return r;
    }

    static JordanRegion annulus(std::complex<double> center, double r_inner, double r_outer) {
        if (!(r_inner >= 0) || !(r_outer > r_inner)) {
            throw std::invalid_argument("annulus: need 0 <= r_inner < r_outer");
        }
        JordanRegion r(RegionKind::Annulus);
        r.center_ = center;
        r.r_inner_ = r_inner;
        r.r_outer_ = r_outer;
        return r;
    }

    static JordanRegion rectangle(double x_min, double x_max, double y_min, double y_max) {
        if (!(x_min < x_max) || !(y_min < y_max)) {
            throw std::invalid_argument("rectangle: empty axis range");
        }
        JordanRegion r(RegionKind::Rectangle);
        r.x_min_ = x_min;
        r.x_max_ = x_max;
        r.y_min_ = y_min;
        r.y_max_ = y_max;
        return r;
    }

    static JordanRegion annular_sector(std::complex<double> center, double r_inner, double r_outer,
                                       double theta_min, double theta_max) {
        if (!(r_inner >= 0) || !(r_outer > r_inner)) {
            throw std::invalid_argument("annular_sector: need 0 <= r_inner < r_outer");
        }
        const double span = theta_max - theta_min;
        if (!(span > 0) || !(span <= kTwoPi)) {
            throw std::invalid_argument("annular_sector: angular span must lie in (0, 2*pi]");
        }
        JordanRegion r(RegionKind::AnnularSector);
        r.center_ = center;
        r.r_inner_ = r_inner;
        r.r_outer_ = r_outer;
        r.theta_min_ = theta_min;
        r.theta_max_ = theta_max;
        return r;
    }

    RegionKind kind() const noexcept { return kind_; }
    std::complex<double> center() const noexcept { return center_; }
    double radius() const noexcept { return r_outer_; }
    double r_inner() const noexcept { return r_inner_; }
    double r_outer() const noexcept { return r_outer_; }
    double x_min() const noexcept { return x_min_; }
    double x_max() const noexcept { return x_max_; }
    double y_min() const noexcept { return y_min_; }
    double y_max() const noexcept { return y_max_; }
    double theta_min() const noexcept { return theta_min_; }
    double theta_max() const noexcept { return theta_max_; }

    bool contains(std::complex<double> z) const {
        switch (kind_) {
            case RegionKind::Disk:
                return std::abs(z - center_) < r_outer_;
            case RegionKind::Annulus: {
                const double r = std::abs(z - center_);
                return r > r_inner_ && r < r_outer_;
            }
            case RegionKind::Rectangle:
                return z.real() > x_min_ && z.real() < x_max_ && z.imag() > y_min_ &&
                       z.imag() < y_max_;
            case RegionKind::AnnularSector: {
                const double r = std::abs(z - center_);
                if (!(r > r_inner_ && r < r_outer_)) return false;
                // Angle test modulo 2*pi against the half-open span.
                double d = std::fmod(std::arg(z - center_) - theta_min_, kTwoPi);
                if (d < 0) d += kTwoPi;
                return d > 0 && d < theta_max_ - theta_min_;
            }
        }
        return false;
    }

private:
    explicit JordanRegion(RegionKind kind) : kind_(kind) {}

    RegionKind kind_;
    std::complex<double> center_{0.0, 0.0};
    double r_inner_ = 0.0;
    double r_outer_ = 0.0;
    double x_min_ = 0.0, x_max_ = 0.0, y_min_ = 0.0, y_max_ = 0.0;
    double theta_min_ = 0.0, theta_max_ = 0.0;
};

inline bool contains(const JordanRegion& region, std::complex<double> z) {
    return region.contains(z);
}

/// Quadrature value of \int_region h_n dA plus the diagnostics of the doubling.
struct ExpectedZeroCount {
    double value = 0.0;
    double residual = 0.0;  // |last - previous| of the doubling
    int resolution = 0;     // cells per axis of the accepted pass
};

namespace detail {

/// Composite midpoint pass with cells x cells over the region in its natural
/// coordinates: polar about the center for circular kinds, cartesian otherwise.
/// The midpoint offsets keep nodes off |z| = 1, and intensity_auto covers the
/// stray node that still lands inside the band.
inline double midpoint_pass(const OpucBasis& basis, int n, const JordanRegion& region, int cells,
                            double band) {
    KahanSum sum;
    if (region.kind() == RegionKind::Rectangle) {
        const double dx = (region.x_max() - region.x_min()) / cells;
        const double dy = (region.y_max() - region.y_min()) / cells;
        for (int iy = 0; iy < cells; ++iy) {
            const double y = region.y_min() + (iy + 0.5) * dy;
            for (int ix = 0; ix < cells; ++ix) {
                const double x = region.x_min() + (ix + 0.5) * dx;
                sum.add(intensity_auto(basis, n, {x, y}, band));
            }
        }
        return sum.value() * dx * dy;
    }
    const double r0 = region.kind() == RegionKind::Disk ? 0.0 : region.r_inner();
    const double r1 = region.r_outer();
    const double t0 = region.kind() == RegionKind::AnnularSector ? region.theta_min() : 0.0;
    const double t1 = region.kind() == RegionKind::AnnularSector ? region.theta_max() : kTwoPi;
    const double dr = (r1 - r0) / cells;
    const double dt = (t1 - t0) / cells;
    const std::complex<double> c = region.center();
    for (int ir = 0; ir < cells; ++ir) {
        const double r = r0 + (ir + 0.5) * dr;
        for (int it = 0; it < cells; ++it) {
            const double t = t0 + (it + 0.5) * dt;
            sum.add(r * intensity_auto(basis, n, c + std::polar(r, t), band));
        }
    }
    return sum.value() * dr * dt;
}

}  // namespace detail

/// Expected number of zeros in the region for degree n: integrates the intensity
/// with the composite midpoint rule, doubling the per-axis resolution until two
/// successive estimates agree to tol (absolute) or the cap is hit.
inline ExpectedZeroCount integrate_intensity(const OpucBasis& basis, int n,
                                             const JordanRegion& region, int resolution = 16,
                                             double tol = 1e-3, int resolution_cap = 2048,
                                             double band = kNearCircleBand) {
    if (resolution < 16) throw std::invalid_argument("integrate_intensity: resolution >= 16");
    if (resolution_cap < resolution) {
        throw std::invalid_argument("integrate_intensity: cap below starting resolution");
    }
    if (!(tol > 0)) throw std::invalid_argument("integrate_intensity: tol must be positive");
    if (n == 0) {
        // A single Gaussian multiple of phi_0 never vanishes; the integral is
        // identically zero and summing rounding noise would only blur that.
        return ExpectedZeroCount{0.0, 0.0, resolution};
    }

    double prev = std::numeric_limits<double>::quiet_NaN();
    double last = std::numeric_limits<double>::quiet_NaN();
    for (int cells = resolution; cells <= resolution_cap; cells *= 2) {
        const double estimate = detail::midpoint_pass(basis, n, region, cells, band);
        if (!std::isnan(last)) {
            const double residual = std::abs(estimate - last);
            if (residual < tol) {
                return ExpectedZeroCount{estimate, residual, cells};
            }
        }
        prev = last;
        last = estimate;
    }
    throw IntegrationFailure("region quadrature did not converge before the cell cap; last "
                             "estimates " +
                                 std::to_string(prev) + " and " + std::to_string(last),
                             prev, last);
}

}  // namespace opuczeros
