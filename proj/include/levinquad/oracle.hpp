#pragma once

// Reference integrator: adaptive 30-point Gauss-Legendre with the same
// whole-vs-halves acceptance as the Levin driver. Independent of the Levin
// numerics; only the worklist is shared.

#include <complex>
#include <cstddef>
#include <functional>
#include <vector>

#include "levinquad/adaptive.hpp"

namespace levinquad {

struct GaussRule {
    std::size_t n = 0;
    std::vector<double> nodes;    // ascending, in (-1, 1)
    std::vector<double> weights;  // positive, sum to 2
};

/// n-point Gauss-Legendre rule by Newton iteration on P_n. Requires 1 <= n <= 200.
[[nodiscard]] GaussRule gauss_rule(std::size_t n);

/// Cached rule; safe under concurrent first use.
[[nodiscard]] const GaussRule& cached_gauss_rule(std::size_t n);

struct OracleConfig {
    double tol = 1e-15;
    std::size_t points = 30;
    std::size_t max_intervals = std::size_t{1} << 22;
    double min_width_factor = 16.0 * std::numeric_limits<double>::epsilon();
};

using ComplexFunction = std::function<std::complex<double>(double)>;

/// Adaptive Gauss-Legendre quadrature of fn over [a, b].
[[nodiscard]] QuadResult adaptive_gauss(const ComplexFunction& fn, double a, double b,
                                        const OracleConfig& config = {});

/// The full integrand f(x) K(g(x)) as a plain function, for the oracle.
[[nodiscard]] ComplexFunction oscillatory_integrand(const Integrand& integrand);

}  // namespace levinquad
