#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <limits>
#include <numbers>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "opuczeros/detail/kahan.hpp"
#include "opuczeros/errors.hpp"

namespace opuczeros {

inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

/// Values in [-kNegativeWeightTolerance, 0) clamp to zero; anything below is an error.
inline constexpr double kNegativeWeightTolerance = 1e-12;

/// Weight values below this are treated as zero for log-integral purposes.
inline constexpr double kTinyWeight = 1e-300;

/// Node cap for every doubling quadrature in this header.
inline constexpr int kMaxQuadratureNodes = 1 << 20;

enum class WeightFamily { Uniform, BernsteinSzego, TrigPoly, Table };

/// Even nonnegative 2*pi-periodic weight function on the circle, normalized so
/// that the uniform family integrates to 2*pi.
///
/// Families:
///  - Uniform:        W = 1
///  - BernsteinSzego: W(theta) = (1 - a^2) / |1 - a e^{i theta}|^2, real |a| < 1
///  - TrigPoly:       W(theta) = t_0 + sum_k t_k cos(k theta)
///  - Table:          piecewise-linear interpolation of samples on a uniform
///                    theta grid starting at 0; samples are symmetrized so the
///                    evenness W(-theta) = W(theta) holds exactly.
class WeightSpec {
public:
    static WeightSpec uniform() { return WeightSpec(WeightFamily::Uniform); }

    static WeightSpec bernstein_szego(double a) {
        if (!(std::abs(a) < 1.0)) {
            throw InvalidWeightError("bernstein_szego requires |a| < 1");
        }
        WeightSpec spec(WeightFamily::BernsteinSzego);
        spec.a_ = a;
        return spec;
    }

    static WeightSpec trig_poly(std::vector<double> cosine_coefficients) {
        if (cosine_coefficients.empty()) {
            throw InvalidWeightError("trig_poly requires at least the constant coefficient");
        }
        for (double t : cosine_coefficients) {
            if (!std::isfinite(t)) throw InvalidWeightError("trig_poly coefficient not finite");
        }
        WeightSpec spec(WeightFamily::TrigPoly);
        spec.trig_ = std::move(cosine_coefficients);
        return spec;
    }

    static WeightSpec table(double theta_step, std::vector<double> values) {
        const std::size_t m = values.size();
        if (m < 2) throw InvalidWeightError("table requires at least two samples");
        if (!(theta_step > 0) || !std::isfinite(theta_step)) {
            throw InvalidWeightError("table step must be positive");
        }
        if (std::abs(theta_step * static_cast<double>(m) - kTwoPi) > 1e-9 * kTwoPi) {
            throw InvalidWeightError("table samples must tile one full period");
        }
        // Raw samples are validated before symmetrization; averaging with the
        // mirror must never launder a genuinely negative input into a weight.
        for (double v : values) {
            if (!std::isfinite(v)) throw InvalidWeightError("table sample not finite");
            if (v < -kNegativeWeightTolerance) {
                throw InvalidWeightError("table sample negative beyond tolerance");
            }
        }
        WeightSpec spec(WeightFamily::Table);
        spec.step_ = theta_step;
        spec.table_.resize(m);
        double peak = 0.0;
        for (std::size_t i = 0; i < m; ++i) {
            const double v = 0.5 * (values[i] + values[(m - i) % m]);  // enforce evenness exactly
            spec.table_[i] = std::max(v, 0.0);
            peak = std::max(peak, spec.table_[i]);
        }
        if (!(peak > 0)) throw InvalidWeightError("table weight has zero total mass");
        return spec;
    }

    WeightFamily family() const noexcept { return family_; }
    double bernstein_parameter() const noexcept { return a_; }
    const std::vector<double>& trig_coefficients() const noexcept { return trig_; }
    double table_step() const noexcept { return step_; }
    const std::vector<double>& table_values() const noexcept { return table_; }

    std::string name() const {
        switch (family_) {
            case WeightFamily::Uniform: return "uniform";
            case WeightFamily::BernsteinSzego: {
                std::ostringstream os;
                os << "bernstein_szego(a=" << a_ << ")";
                return os.str();
            }
            case WeightFamily::TrigPoly: return "trig_poly";
            case WeightFamily::Table: return "table";
        }
        return "unknown";
    }

private:
    explicit WeightSpec(WeightFamily family) : family_(family) {}

    WeightFamily family_;
    double a_ = 0.0;
    std::vector<double> trig_;
    double step_ = 0.0;
    std::vector<double> table_;
};

/// W(theta). Reduces theta mod 2*pi; clamps rounding-level negatives to zero.
inline double evaluate_weight(const WeightSpec& spec, double theta) {
    if (!std::isfinite(theta)) throw std::invalid_argument("evaluate_weight: theta must be finite");
    double w = 0.0;
    switch (spec.family()) {
        case WeightFamily::Uniform:
            return 1.0;
        case WeightFamily::BernsteinSzego: {
            const double a = spec.bernstein_parameter();
            return (1.0 - a * a) / (1.0 - 2.0 * a * std::cos(theta) + a * a);
        }
        case WeightFamily::TrigPoly: {
            const auto& t = spec.trig_coefficients();
            w = t[0];
            for (std::size_t k = 1; k < t.size(); ++k) {
                w += t[k] * std::cos(static_cast<double>(k) * theta);
            }
            break;
        }
        case WeightFamily::Table: {
            const auto& v = spec.table_values();
            const std::size_t m = v.size();
            double t = std::fmod(theta, kTwoPi);
            if (t < 0) t += kTwoPi;
            const double pos = t / spec.table_step();
            std::size_t i0 = static_cast<std::size_t>(pos);
            if (i0 >= m) i0 = m - 1;  // guards t == 2*pi after rounding
            const double frac = pos - static_cast<double>(i0);
            const double lo = v[i0];
            const double hi = v[(i0 + 1) % m];
            w = lo + frac * (hi - lo);
            break;
        }
    }
    if (w < -kNegativeWeightTolerance) {
        throw InvalidWeightError("weight negative beyond tolerance at theta=" + std::to_string(theta));
    }
    return w < 0 ? 0.0 : w;
}

/// Trigonometric moments c_k = (1/2pi) \int W(theta) e^{-ik theta} dtheta for
/// k = 0..max_index, together with the quadrature diagnostics that produced them.
struct MomentSequence {
    std::vector<double> c;
    int nodes = 0;                        // node count of the accepted pass
    double tolerance = 0.0;               // residual between the last two passes
    std::vector<double> residual_history; // one entry per doubling

    int max_index() const noexcept { return static_cast<int>(c.size()) - 1; }
};

namespace detail {

inline int next_power_of_two(int n) {
    int p = 1;
    while (p < n) p *= 2;
    return p;
}

/// One pass of the periodic composite rule with M nodes. offset shifts every
/// node by that fraction of a grid step (used to dodge isolated zeros of log W).
inline std::vector<std::complex<double>> trig_moment_pass(const WeightSpec& spec, int max_index,
                                                          int nodes, double offset) {
    std::vector<KahanSum> re(static_cast<std::size_t>(max_index) + 1);
    std::vector<KahanSum> im(static_cast<std::size_t>(max_index) + 1);
    const double h = kTwoPi / nodes;
    for (int m = 0; m < nodes; ++m) {
        const double theta = -std::numbers::pi + (m + offset) * h;
        const double w = evaluate_weight(spec, theta);
        std::complex<double> p{1.0, 0.0};
        const std::complex<double> base = std::polar(1.0, -theta);
        for (int k = 0; k <= max_index; ++k) {
            if (k % 32 == 0) p = std::polar(1.0, -static_cast<double>(k) * theta);
            re[static_cast<std::size_t>(k)].add(w * p.real());
            im[static_cast<std::size_t>(k)].add(w * p.imag());
            p *= base;
        }
    }
    std::vector<std::complex<double>> out(static_cast<std::size_t>(max_index) + 1);
    for (int k = 0; k <= max_index; ++k) {
        out[static_cast<std::size_t>(k)] =
            std::complex<double>(re[static_cast<std::size_t>(k)].value(),
                                 im[static_cast<std::size_t>(k)].value()) /
            static_cast<double>(nodes);
    }
    return out;
}

}  // namespace detail

/// Computes c_0..c_max_index by node-doubling periodic quadrature. Starts at
/// max(64, 8*(max_index+1)) nodes and doubles until successive passes agree to
/// tol in the max norm.
///
/// Throws QuadratureFailure when the node cap is reached first, InvalidWeightError
/// when the total mass c_0 is not positive, and InternalConsistencyError when an
/// imaginary residue survives the evenness of W.
inline MomentSequence compute_moments(const WeightSpec& spec, int max_index, double tol = 1e-12) {
    if (max_index < 0) throw std::invalid_argument("compute_moments: max_index must be >= 0");
    if (!(tol > 0)) throw std::invalid_argument("compute_moments: tol must be positive");

    const int start = detail::next_power_of_two(std::max(64, 8 * (max_index + 1)));
    MomentSequence out;
    std::vector<std::complex<double>> prev;
    std::vector<std::complex<double>> cur;
    double residual = std::numeric_limits<double>::infinity();
    bool converged = false;
    for (int nodes = start; nodes <= kMaxQuadratureNodes; nodes *= 2) {
        cur = detail::trig_moment_pass(spec, max_index, nodes, 0.0);
        if (!prev.empty()) {
            residual = 0.0;
            for (std::size_t k = 0; k < cur.size(); ++k) {
                residual = std::max(residual, std::abs(cur[k] - prev[k]));
            }
            out.residual_history.push_back(residual);
            if (residual < tol) {
                out.nodes = nodes;
                out.tolerance = residual;
                converged = true;
                break;
            }
        }
        prev = cur;
    }
    if (!converged) {
        throw QuadratureFailure("moment quadrature did not reach tolerance before the node cap",
                                residual);
    }

    const double c0 = cur[0].real();
    if (!(c0 > 0)) throw InvalidWeightError("weight has nonpositive total mass");
    out.c.resize(cur.size());
    for (std::size_t k = 0; k < cur.size(); ++k) {
        if (std::abs(cur[k].imag()) > 1e-12 * c0) {
            throw InternalConsistencyError("moment imaginary residue exceeds evenness tolerance");
        }
        out.c[k] = cur[k].real();
    }
    return out;
}

namespace detail {

inline double log_quadrature_offset(const WeightSpec& spec) {
    // Half-step shift keeps nodes off isolated zeros of parametric trig weights.
    return spec.family() == WeightFamily::TrigPoly ? 0.5 : 0.0;
}

inline double checked_log_weight(const WeightSpec& spec, double theta) {
    const double w = evaluate_weight(spec, theta);
    if (w < kTinyWeight) {
        throw SzegoClassViolation("weight not positive at quadrature node theta=" +
                                  std::to_string(theta));
    }
    return std::log(w);
}

}  // namespace detail

/// Geometric mean exp((1/2pi) \int log W). Same doubling scheme as the moments;
/// if the cap is reached the last estimate is returned, since a log-endpoint
/// singularity converges too slowly for the doubling test yet the mean exists.
inline double geometric_mean(const WeightSpec& spec, double tol = 1e-11) {
    if (!(tol > 0)) throw std::invalid_argument("geometric_mean: tol must be positive");
    const double offset = detail::log_quadrature_offset(spec);
    double prev = std::numeric_limits<double>::quiet_NaN();
    for (int nodes = 64; nodes <= kMaxQuadratureNodes; nodes *= 2) {
        detail::KahanSum sum;
        const double h = kTwoPi / nodes;
        for (int m = 0; m < nodes; ++m) {
            const double theta = -std::numbers::pi + (m + offset) * h;
            sum.add(detail::checked_log_weight(spec, theta));
        }
        const double avg = sum.value() / nodes;
        if (!std::isnan(prev) && std::abs(avg - prev) < tol) return std::exp(avg);
        prev = avg;
    }
    return std::exp(prev);
}

/// Szego function D(xi) = exp( (1/4pi) \int log W(t) * (e^{it} + xi)/(e^{it} - xi) dt ),
/// the analytic outer function with |D|^2 = W on the circle and D(0) > 0.
/// Restricted to |xi| <= 1 - 1e-6 so the Cauchy kernel stays resolvable.
inline std::complex<double> szego_function(const WeightSpec& spec, std::complex<double> xi,
                                           double tol = 1e-12) {
    if (!(tol > 0)) throw std::invalid_argument("szego_function: tol must be positive");
    if (!(std::abs(xi) <= 1.0 - 1e-6)) {
        throw DomainError("szego_function requires |xi| <= 1 - 1e-6");
    }
    const double offset = detail::log_quadrature_offset(spec);
    std::complex<double> prev{std::numeric_limits<double>::quiet_NaN(), 0.0};
    for (int nodes = 64; nodes <= kMaxQuadratureNodes; nodes *= 2) {
        detail::KahanComplexSum sum;
        const double h = kTwoPi / nodes;
        for (int m = 0; m < nodes; ++m) {
            const double theta = -std::numbers::pi + (m + offset) * h;
            const double lw = detail::checked_log_weight(spec, theta);
            const std::complex<double> e = std::polar(1.0, -theta);  // e^{-it}
            sum.add(lw * (1.0 + xi * e) / (1.0 - xi * e));
        }
        const std::complex<double> avg = sum.value() / static_cast<double>(nodes);
        if (!std::isnan(prev.real()) && std::abs(avg - prev) < tol) {
            return std::exp(0.5 * avg);
        }
        prev = avg;
    }
    return std::exp(0.5 * prev);
}

}  // namespace opuczeros
