#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

#include "opuczeros/errors.hpp"
#include "opuczeros/weights.hpp"

namespace opuczeros {

/// Orthonormal polynomial basis phi_0..phi_N for a moment sequence, stored as
/// real lower-triangular monomial coefficients. Row j has length j+1 and its
/// leading entry equals kappa_j > 0.
///
/// Conventions, fixed once for the whole library:
///  - monic recurrence  Phi_{j+1}(z) = z Phi_j(z) - alpha_j Phi_j^*(z)
///  - Verblunsky coefficient  alpha_j = -Phi_{j+1}(0), real with |alpha_j| < 1
///  - normalization  phi_j = Phi_j / ||Phi_j||, positive leading coefficient
struct OpucBasis {
    int N = 0;
    std::vector<std::vector<double>> coeffs;
    std::vector<double> kappa;
    std::vector<double> alpha;
    MomentSequence moments;  // source data; empty after a JSON import
};

/// Values of phi_j, phi_j^* and their derivatives at one point.
struct PointEval {
    std::complex<double> phi;
    std::complex<double> dphi;
    std::complex<double> phistar;
    std::complex<double> dphistar;
    int degree = 0;
    std::complex<double> point;
};

/// Runs the Levinson recursion on c_0..c_N and normalizes the monic rows.
///
/// The prediction-error variance E_j = ||Phi_j||^2 must stay positive; the step
/// where it fails (Toeplitz matrix not positive definite, typically |alpha| >= 1)
/// raises MomentDegeneracyError naming that step.
inline OpucBasis build_basis(const MomentSequence& moments, int degree) {
    if (degree < 0) throw std::invalid_argument("build_basis: degree must be >= 0");
    if (moments.max_index() < degree) {
        throw std::invalid_argument("build_basis: moments must cover indices 0..degree");
    }
    const auto& c = moments.c;
    if (!(c[0] > 0) || !std::isfinite(c[0])) {
        throw MomentDegeneracyError(0, "moment matrix not positive definite at step 0: c_0 <= 0");
    }

    OpucBasis basis;
    basis.N = degree;
    basis.moments = moments;

    std::vector<std::vector<double>> monic(static_cast<std::size_t>(degree) + 1);
    std::vector<double> variance(static_cast<std::size_t>(degree) + 1);
    monic[0] = {1.0};
    variance[0] = c[0];

    for (int j = 0; j < degree; ++j) {
        const auto& row = monic[static_cast<std::size_t>(j)];
        double s = 0.0;
        for (int i = 0; i <= j; ++i) {
            s += row[static_cast<std::size_t>(i)] * c[static_cast<std::size_t>(i) + 1];
        }
        const double a = s / variance[static_cast<std::size_t>(j)];
        const double next_variance = variance[static_cast<std::size_t>(j)] * (1.0 - a * a);
        if (!(next_variance > 0) || !std::isfinite(next_variance)) {
            throw MomentDegeneracyError(
                j, "moment matrix not positive definite at step " + std::to_string(j));
        }
        std::vector<double> next(static_cast<std::size_t>(j) + 2);
        for (int i = 0; i <= j + 1; ++i) {
            const double shifted = (i > 0) ? row[static_cast<std::size_t>(i) - 1] : 0.0;
            const double reversed = (j - i >= 0) ? row[static_cast<std::size_t>(j - i)] : 0.0;
            next[static_cast<std::size_t>(i)] = shifted - a * reversed;
        }
        monic[static_cast<std::size_t>(j) + 1] = std::move(next);
        variance[static_cast<std::size_t>(j) + 1] = next_variance;
        basis.alpha.push_back(a);
    }

    basis.coeffs.resize(static_cast<std::size_t>(degree) + 1);
    basis.kappa.resize(static_cast<std::size_t>(degree) + 1);
    for (int j = 0; j <= degree; ++j) {
        const double k = 1.0 / std::sqrt(variance[static_cast<std::size_t>(j)]);
        basis.kappa[static_cast<std::size_t>(j)] = k;
        auto& row = monic[static_cast<std::size_t>(j)];
        for (double& v : row) v *= k;
        basis.coeffs[static_cast<std::size_t>(j)] = std::move(row);
    }
    return basis;
}

namespace detail {

/// Horner evaluation of a real-coefficient row and its derivative.
inline void horner_pair(const std::vector<double>& row, std::complex<double> z,
                        std::complex<double>& value, std::complex<double>& derivative) {
    const int d = static_cast<int>(row.size()) - 1;
    std::complex<double> p = row[static_cast<std::size_t>(d)];
    std::complex<double> dp = 0.0;
    for (int i = d - 1; i >= 0; --i) {
        dp = dp * z + p;
        p = p * z + row[static_cast<std::size_t>(i)];
    }
    value = p;
    derivative = dp;
}

/// Same for the reversed row, i.e. phi^*(z) = z^d phi(1/conj(z)) conjugated,
/// which for real coefficients is the row read back to front.
inline void horner_pair_reversed(const std::vector<double>& row, std::complex<double> z,
                                 std::complex<double>& value, std::complex<double>& derivative) {
    const int d = static_cast<int>(row.size()) - 1;
    std::complex<double> p = row[0];
    std::complex<double> dp = 0.0;
    for (int i = d - 1; i >= 0; --i) {
        dp = dp * z + p;
        p = p * z + row[static_cast<std::size_t>(d - i)];
    }
    value = p;
    derivative = dp;
}

}  // namespace detail

/// phi_degree, phi_degree^* and derivatives at z, via Horner on the stored rows.
inline PointEval eval_all(const OpucBasis& basis, int degree, std::complex<double> z) {
    if (degree < 0 || degree > basis.N) {
        throw std::out_of_range("eval_all: degree outside 0..N");
    }
    const auto& row = basis.coeffs[static_cast<std::size_t>(degree)];
    PointEval out;
    out.degree = degree;
    out.point = z;
    detail::horner_pair(row, z, out.phi, out.dphi);
    detail::horner_pair_reversed(row, z, out.phistar, out.dphistar);
    return out;
}

/// Verblunsky coefficients alpha_0..alpha_{N-1} recovered by the recursion.
inline const std::vector<double>& verblunsky(const OpucBasis& basis) noexcept {
    return basis.alpha;
}

}  // namespace opuczeros
