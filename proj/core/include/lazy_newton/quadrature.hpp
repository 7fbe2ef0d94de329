#pragma once

#include <cmath>
#include <cstddef>
#include <vector>

namespace lazy_newton::quadrature {

struct Rule {
    std::vector<double> nodes;  // on [-1, 1], ascending
    std::vector<double> weights;
};

/// n-point Gauss–Legendre rule on [-1, 1] (Newton iteration on P_n).
Rule gauss_legendre(int order);

/// Neumaier-compensated running sum.
class CompensatedSum {
  public:
    void add(double v) noexcept {
        const double t = sum_ + v;
        if (std::abs(sum_) >= std::abs(v)) {
            carry_ += (sum_ - t) + v;
        } else {
            carry_ += (v - t) + sum_;
        }
        sum_ = t;
    }
    double value() const noexcept { return sum_ + carry_; }

  private:
    double sum_ = 0.0;
    double carry_ = 0.0;
};

namespace detail {

template <class F, class T, class Err>
T simpson_refine(const F& f, double a, double b, const T& fa, const T& fm, const T& fb, const T& whole,
                 double tol, int depth, const Err& error_of, std::size_t& evaluations) {
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m);
    const double rm = 0.5 * (m + b);
    const T flm = f(lm);
    const T frm = f(rm);
    evaluations += 2;
    const double h = b - a;
    const T left = (h / 12.0) * (fa + 4.0 * flm + fm);
    const T right = (h / 12.0) * (fm + 4.0 * frm + fb);
    const T both = left + right;
    const T diff = both - whole;
    if (depth <= 0 || error_of(diff) <= 15.0 * tol) {
        return both + diff * (1.0 / 15.0);
    }
    return simpson_refine(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1, error_of, evaluations) +
           simpson_refine(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1, error_of, evaluations);
}

}  // namespace detail

/// Adaptive Simpson on [a, b] with Richardson correction.
///
/// `error_of` maps a difference of two estimates to a scalar error; the
/// recursion stops once that error falls below 15·tol on every panel (the
/// panel tolerance halves at each bisection) or max_depth is reached.
template <class F, class Err>
auto adaptive_simpson(const F& f, double a, double b, double tol, const Err& error_of, std::size_t& evaluations,
                      int max_depth = 48) {
    const auto fa = f(a);
    const auto fm = f(0.5 * (a + b));
    const auto fb = f(b);
    evaluations += 3;
    const auto whole = ((b - a) / 6.0) * (fa + 4.0 * fm + fb);
    return detail::simpson_refine(f, a, b, fa, fm, fb, whole, tol, max_depth, error_of, evaluations);
}

}  // namespace lazy_newton::quadrature
