#pragma once

#include <complex>

namespace opuczeros::detail {

/// Kahan compensated accumulator; keeps long sums accurate to O(eps)
/// independent of term count.
class KahanSum {
public:
    void add(double x) noexcept {
        const double y = x - compensation_;
        const double t = sum_ + y;
        compensation_ = (t - sum_) - y;
        sum_ = t;
    }
    double value() const noexcept { return sum_; }

private:
    double sum_ = 0.0;
    double compensation_ = 0.0;
};

/// Componentwise compensated accumulator for complex terms.
class KahanComplexSum {
public:
    void add(std::complex<double> x) noexcept {
        real_.add(x.real());
        imag_.add(x.imag());
    }
    std::complex<double> value() const noexcept { return {real_.value(), imag_.value()}; }

private:
    KahanSum real_;
    KahanSum imag_;
};

}  // namespace opuczeros::detail
