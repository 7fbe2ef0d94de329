#include "lazy_newton/quadrature.hpp"

#include <cmath>
#include <numbers>
#include <utility>

#include "lazy_newton/errors.hpp"

namespace lazy_newton::quadrature {

Rule gauss_legendre(int order) {
    if (order < 2) {
        throw PreconditionError("gauss_legendre: order must be >= 2");
    }
    const auto n = static_cast<std::size_t>(order);
    Rule rule;
    rule.nodes.resize(n);
    rule.weights.resize(n);
    // Newton iteration in long double, rounded once at the end.
    using real = long double;
    const auto legendre = [n](real x) {
        real p0 = 1.0L;
        real p1 = x;
        for (std::size_t k = 2; k <= n; ++k) {
            const real p2 = ((2.0L * k - 1.0L) * x * p1 - (k - 1.0L) * p0) / static_cast<real>(k);
            p0 = p1;
            p1 = p2;
        }
        const real dp = static_cast<real>(n) * (x * p1 - p0) / (x * x - 1.0L);
        return std::pair{p1, dp};
    };
    for (std::size_t i = 0; i < (n + 1) / 2; ++i) {
        real x = std::cos(std::numbers::pi_v<real> * (static_cast<real>(i) + 0.75L) / (static_cast<real>(n) + 0.5L));
        for (int iter = 0; iter < 100; ++iter) {
            const auto [p, dp] = legendre(x);
            const real dx = p / dp;
            x -= dx;
            if (std::abs(dx) < 1e-19L) {
                break;
            }
        }
        const real dp = legendre(x).second;
        const auto w = static_cast<double>(2.0L / ((1.0L - x * x) * dp * dp));
        rule.nodes[i] = static_cast<double>(-x);
        rule.nodes[n - 1 - i] = static_cast<double>(x);
        rule.weights[i] = w;
        rule.weights[n - 1 - i] = w;
    }
    if (n % 2 == 1) {
        rule.nodes[n / 2] = 0.0;
    }
    return rule;
}

}  // namespace lazy_newton::quadrature
