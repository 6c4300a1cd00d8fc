#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "opuczeros/errors.hpp"
#include "opuczeros/opuc.hpp"
#include "opuczeros/regions.hpp"
#include "opuczeros/rng.hpp"

namespace opuczeros {

/// One draw of iid standard complex Gaussian coefficients eta_0..eta_n,
/// Re and Im each N(0,1). Fully determined by (seed, trial, n).
struct CoefficientSample {
    std::vector<std::complex<double>> eta;
    std::uint64_t seed = 0;
    std::uint64_t trial = 0;
};

inline CoefficientSample sample_coefficients(std::uint64_t seed, std::uint64_t trial, int n) {
    if (n < 0) throw std::invalid_argument("sample_coefficients: n must be >= 0");
    CoefficientSample sample;
    sample.seed = seed;
    sample.trial = trial;
    sample.eta.resize(static_cast<std::size_t>(n) + 1);
    for (int j = 0; j <= n; ++j) {
        const std::uint64_t w1 = rng::stream_word(seed, trial, 2 * static_cast<std::uint64_t>(j));
        const std::uint64_t w2 =
            rng::stream_word(seed, trial, 2 * static_cast<std::uint64_t>(j) + 1);
        const auto [a, b] = rng::standard_normal_pair(w1, w2);
        sample.eta[static_cast<std::size_t>(j)] = {a, b};
    }
    return sample;
}

/// Monomial coefficients of P(z) = sum_j eta_j phi_j(z), ascending powers,
/// length n+1. The basis rows are lower triangular so this is a weighted
/// column sum.
inline std::vector<std::complex<double>> to_monomial(const OpucBasis& basis,
                                                     const CoefficientSample& sample) {
    const int n = static_cast<int>(sample.eta.size()) - 1;
    if (n < 0) throw std::invalid_argument("to_monomial: empty coefficient sample");
    if (n > basis.N) throw std::out_of_range("to_monomial: sample degree exceeds basis degree");
    std::vector<std::complex<double>> out(static_cast<std::size_t>(n) + 1, 0.0);
    for (int j = 0; j <= n; ++j) {
        const auto& row = basis.coeffs[static_cast<std::size_t>(j)];
        const std::complex<double> eta = sample.eta[static_cast<std::size_t>(j)];
        for (int i = 0; i <= j; ++i) {
            out[static_cast<std::size_t>(i)] += eta * row[static_cast<std::size_t>(i)];
        }
    }
    return out;
}

namespace detail {

inline void complex_horner_pair(const std::vector<std::complex<double>>& c,
                                std::complex<double> z, std::complex<double>& value,
                                std::complex<double>& derivative) {
    const int d = static_cast<int>(c.size()) - 1;
    std::complex<double> p = c[static_cast<std::size_t>(d)];
    std::complex<double> dp = 0.0;
    for (int i = d - 1; i >= 0; --i) {
        dp = dp * z + p;
        p = p * z + c[static_cast<std::size_t>(i)];
    }
    value = p;
    derivative = dp;
}

/// Coefficient-magnitude scale of p at |z| = r, sum_j |c_j| r^j. Any root
/// with |p(root)| well below eps times this is backward stable.
inline double residual_scale(const std::vector<std::complex<double>>& c, double r) {
    double scale = 0.0;
    double power = 1.0;
    for (const auto& cj : c) {
        scale += std::abs(cj) * power;
        power *= r;
    }
    return scale;
}

}  // namespace detail

/// All roots of p(z) = sum c_j z^j (ascending coefficients).
///
/// The working degree d is the highest index with |c_d| > 1e-14 * max|c_j|;
/// exact zero trailing coefficients peel off as exact roots at the origin.
/// The rest is solved by the Aberth-Ehrlich simultaneous iteration (initial
/// guesses on a root-bound circle, Gauss-Seidel sweeps), then polished with
/// two Newton steps per root. Every returned root must satisfy
/// |p(root)| <= 1e-8 * sum_j |c_j| |root|^j or RootFindingFailure is raised;
/// the same error reports an iteration-cap overrun.
inline std::vector<std::complex<double>> find_roots(
    const std::vector<std::complex<double>>& coefficients, int max_iterations = 500) {
    constexpr double kDegreeThreshold = 1e-14;
    constexpr double kBackwardTolerance = 1e-8;
    constexpr double kStepTolerance = 1e-13;

    double peak = 0.0;
    for (const auto& c : coefficients) peak = std::max(peak, std::abs(c));
    if (!(peak > 0)) throw DegeneratePolynomialError("all polynomial coefficients are zero");

    int d = static_cast<int>(coefficients.size()) - 1;
    while (d > 0 && std::abs(coefficients[static_cast<std::size_t>(d)]) <= kDegreeThreshold * peak) {
        --d;
    }
    std::vector<std::complex<double>> p(coefficients.begin(), coefficients.begin() + d + 1);

    // Exact zero constant terms give exact roots at the origin.
    int trailing = 0;
    while (trailing < d && p[static_cast<std::size_t>(trailing)] == 0.0) ++trailing;
    std::vector<std::complex<double>> roots(static_cast<std::size_t>(trailing), 0.0);
    std::vector<std::complex<double>> q(p.begin() + trailing, p.end());
    const int m = static_cast<int>(q.size()) - 1;

    if (m >= 1) {
        if (m == 1) {
            roots.push_back(-q[0] / q[1]);
        } else {
            // Initial guesses on the circle of the coefficient root bound, with an
            // angular offset so no guess starts on a symmetry axis.
            double bound = 0.0;
            for (int j = 0; j < m; ++j) {
                const double a = std::abs(q[static_cast<std::size_t>(j)]);
                if (a > 0) {
                    bound = std::max(
                        bound, std::pow(a / std::abs(q[static_cast<std::size_t>(m)]),
                                        1.0 / static_cast<double>(m - j)));
                }
            }
            bound = std::max(bound, 1e-8);
            std::vector<std::complex<double>> zs(static_cast<std::size_t>(m));
            for (int k = 0; k < m; ++k) {
                zs[static_cast<std::size_t>(k)] =
                    std::polar(bound, kTwoPi * k / static_cast<double>(m) + 0.376);
            }

            bool converged = false;
            for (int iter = 0; iter < max_iterations && !converged; ++iter) {
                double worst_step = 0.0;
                for (int k = 0; k < m; ++k) {
                    std::complex<double>& zk = zs[static_cast<std::size_t>(k)];
                    std::complex<double> pv, dv;
                    detail::complex_horner_pair(q, zk, pv, dv);
                    if (pv == 0.0) continue;
                    if (dv == 0.0) {
                        zk += std::complex<double>(bound * 1e-6, bound * 1e-6);
                        worst_step = 1.0;
                        continue;
                    }
                    const std::complex<double> newton = pv / dv;
                    std::complex<double> repulsion = 0.0;
                    for (int j = 0; j < m; ++j) {
                        if (j == k) continue;
                        const std::complex<double> diff = zk - zs[static_cast<std::size_t>(j)];
                        if (diff == 0.0) {
                            // Collided guesses: nudge apart deterministically.
                            zs[static_cast<std::size_t>(j)] += bound * 1e-9 * (j + 1.0);
                            continue;
                        }
                        repulsion += 1.0 / diff;
                    }
                    const std::complex<double> denom = 1.0 - newton * repulsion;
                    const std::complex<double> step = (denom == 0.0) ? newton : newton / denom;
                    zk -= step;
                    worst_step = std::max(worst_step, std::abs(step) / (1.0 + std::abs(zk)));
                }
                converged = worst_step <= kStepTolerance;
            }
            if (!converged) {
                double worst = 0.0;
                for (const auto& r : zs) {
                    std::complex<double> pv, dv;
                    detail::complex_horner_pair(q, r, pv, dv);
                    const double scale = detail::residual_scale(q, std::abs(r));
                    worst = std::max(worst, scale > 0 ? std::abs(pv) / scale : std::abs(pv));
                }
                throw RootFindingFailure("simultaneous iteration hit the sweep cap", worst);
            }
            roots.insert(roots.end(), zs.begin(), zs.end());
        }

        // Two Newton polishing passes against the deflated polynomial.
        for (int pass = 0; pass < 2; ++pass) {
            for (std::size_t k = roots.size() - static_cast<std::size_t>(m); k < roots.size();
                 ++k) {
                std::complex<double> pv, dv;
                detail::complex_horner_pair(q, roots[k], pv, dv);
                if (dv != 0.0) roots[k] -= pv / dv;
            }
        }
    }

    // Backward-error certificate on the degree-d polynomial.
    double worst = 0.0;
    for (const auto& r : roots) {
        std::complex<double> pv, dv;
        detail::complex_horner_pair(p, r, pv, dv);
        const double scale = detail::residual_scale(p, std::abs(r));
        const double rel = scale > 0 ? std::abs(pv) / scale : std::abs(pv);
        worst = std::max(worst, rel);
    }
    if (worst > kBackwardTolerance) {
        throw RootFindingFailure("root residual exceeds the backward-error tolerance", worst);
    }
    return roots;
}

/// Summary of a Monte Carlo run: zero counts inside the region per trial.
struct MonteCarloReport {
    int n = 0;
    int trials = 0;
    std::uint64_t seed = 0;
    JordanRegion region = JordanRegion::disk({0.0, 0.0}, 1.0);
    std::vector<int> counts;
    double mean = 0.0;
    double standard_error = 0.0;
    int degree_reduction_events = 0;
    std::optional<double> quadrature_reference;
    std::optional<double> z_score;
};

/// Runs `trials` independent draws of degree-n random combinations, counts the
/// roots falling strictly inside the region, and summarizes. A trial whose
/// sampled leading coefficient is negligible loses roots; such degree
/// reductions are counted, not hidden. Root-finding failures propagate with
/// the trial index attached.
inline MonteCarloReport monte_carlo_expected_zeros(
    const OpucBasis& basis, int n, const JordanRegion& region, int trials, std::uint64_t seed,
    std::optional<double> quadrature_reference = std::nullopt) {
    if (n < 1) throw std::invalid_argument("monte_carlo_expected_zeros: n must be >= 1");
    if (n > basis.N) throw std::out_of_range("monte_carlo_expected_zeros: n exceeds basis degree");
    if (trials < 100) throw std::invalid_argument("monte_carlo_expected_zeros: trials >= 100");

    MonteCarloReport report;
    report.n = n;
    report.trials = trials;
    report.seed = seed;
    report.region = region;
    report.counts.reserve(static_cast<std::size_t>(trials));

    for (int t = 0; t < trials; ++t) {
        const CoefficientSample sample = sample_coefficients(seed, static_cast<std::uint64_t>(t), n);
        const auto monomial = to_monomial(basis, sample);
        std::vector<std::complex<double>> roots;
        try {
            roots = find_roots(monomial);
        } catch (const RootFindingFailure& e) {
            throw RootFindingFailure("trial " + std::to_string(t) + ": " + e.what(),
                                     e.worst_residual());
        }
        if (static_cast<int>(roots.size()) < n) ++report.degree_reduction_events;
        int count = 0;
        for (const auto& r : roots) {
            if (region.contains(r)) ++count;
        }
        report.counts.push_back(count);
    }

    detail::KahanSum sum;
    for (int c : report.counts) sum.add(static_cast<double>(c));
    report.mean = sum.value() / trials;
    detail::KahanSum sq;
    for (int c : report.counts) {
        const double d = static_cast<double>(c) - report.mean;
        sq.add(d * d);
    }
    report.standard_error = std::sqrt(sq.value() / (static_cast<double>(trials) - 1.0)) /
                            std::sqrt(static_cast<double>(trials));
    report.quadrature_reference = quadrature_reference;
    if (quadrature_reference) {
        const double gap = std::abs(report.mean - *quadrature_reference);
        if (report.standard_error > 0) {
            report.z_score = gap / report.standard_error;
        } else {
            report.z_score = gap == 0 ? 0.0 : std::numeric_limits<double>::infinity();
        }
    }
    return report;
}

}  // namespace opuczeros
