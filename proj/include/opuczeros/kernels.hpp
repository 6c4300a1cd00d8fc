#pragma once

#include <cmath>
#include <complex>
#include <stdexcept>

#include "opuczeros/detail/kahan.hpp"
#include "opuczeros/errors.hpp"
#include "opuczeros/opuc.hpp"

namespace opuczeros {

/// Closed forms cancel catastrophically when |1 - |z|^2| falls below this band.
inline constexpr double kNearCircleBand = 1e-6;

enum class KernelMethod { Direct, ChristoffelDarboux };

/// Diagonal reproducing-kernel data of span{phi_0..phi_n} at z:
///   k   = sum |phi_j|^2          k01 = sum phi_j conj(phi_j')
///   k11 = sum |phi_j'|^2
struct KernelTriple {
    double k = 0.0;
    std::complex<double> k01;
    double k11 = 0.0;
    int n = 0;
    std::complex<double> z;
    KernelMethod method = KernelMethod::Direct;
};

/// Direct compensated summation over degrees 0..n. Valid at every z, including
/// on the unit circle.
inline KernelTriple kernel_direct(const OpucBasis& basis, int n, std::complex<double> z) {
    if (n < 0 || n > basis.N) throw std::out_of_range("kernel_direct: n outside 0..N");
    detail::KahanSum k;
    detail::KahanSum k11;
    detail::KahanComplexSum k01;
    for (int j = 0; j <= n; ++j) {
        std::complex<double> phi, dphi;
        detail::horner_pair(basis.coeffs[static_cast<std::size_t>(j)], z, phi, dphi);
        k.add(std::norm(phi));
        k11.add(std::norm(dphi));
        k01.add(phi * std::conj(dphi));
    }
    KernelTriple out;
    out.k = k.value();
    out.k01 = k01.value();
    out.k11 = k11.value();
    out.n = n;
    out.z = z;
    out.method = KernelMethod::Direct;
    return out;
}

/// Christoffel-Darboux closed forms; O(n) evaluation replaced by the single
/// degree n+1 pair, so the basis must extend one degree past n. With
/// s = 1 - |z|^2:
///   k   = (|phi^*|^2 - |phi|^2) / s
///   k01 = (conj(phi^*') phi^* - conj(phi') phi) / s + z k / s
///   k11 = (|phi^*'|^2 - |phi'|^2) / s + (2 Re(conj(z) k01) + k) / s
/// where phi = phi_{n+1}. Refuses points inside the near-circle band.
inline KernelTriple kernel_cd(const OpucBasis& basis, int n, std::complex<double> z,
                              double band = kNearCircleBand) {
    if (n < 0 || n + 1 > basis.N) throw std::out_of_range("kernel_cd: needs 0 <= n <= N-1");
    const double s = 1.0 - std::norm(z);
    if (std::abs(s) < band) {
        throw NearCircleError("kernel_cd: |z| inside the exclusion band; use kernel_direct");
    }
    const PointEval e = eval_all(basis, n + 1, z);
    KernelTriple out;
    out.k = (std::norm(e.phistar) - std::norm(e.phi)) / s;
    out.k01 = (std::conj(e.dphistar) * e.phistar - std::conj(e.dphi) * e.phi) / s + z * out.k / s;
    out.k11 = (std::norm(e.dphistar) - std::norm(e.dphi)) / s +
              (2.0 * std::real(std::conj(z) * out.k01) + out.k) / s;
    out.n = n;
    out.z = z;
    out.method = KernelMethod::ChristoffelDarboux;
    return out;
}

}  // namespace opuczeros
