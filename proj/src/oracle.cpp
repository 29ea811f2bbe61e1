#include "levinquad/oracle.hpp"

#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>
#include <stdexcept>
#include <utility>

namespace levinquad {

namespace {

// P_n(z) and P_n'(z) by the three-term recurrence.
std::pair<double, double> legendre_with_derivative(std::size_t n, double z) {
    double p0 = 1.0;
    double p1 = z;
    for (std::size_t l = 2; l <= n; ++l) {
        const double dl = static_cast<double>(l);
        const double p2 = ((2.0 * dl - 1.0) * z * p1 - (dl - 1.0) * p0) / dl;
        p0 = p1;
        p1 = p2;
    }
    if (n == 1) return {z, 1.0};
    return {p1, static_cast<double>(n) * (z * p1 - p0) / (z * z - 1.0)};
}

}  // namespace

GaussRule gauss_rule(std::size_t n) {
    if (n < 1 || n > 200) throw std::invalid_argument("gauss_rule: n must be in [1, 200]");
    GaussRule rule{n, std::vector<double>(n), std::vector<double>(n)};
    const double dn = static_cast<double>(n);

    for (std::size_t i = 0; i < (n + 1) / 2; ++i) {
        // Largest roots first, from the usual cosine initial guess.
        double z = std::cos(std::numbers::pi * (static_cast<double>(i) + 0.75) / (dn + 0.5));
        if (n % 2 == 1 && i == n / 2) z = 0.0;
        bool converged = false;
        for (int iter = 0; iter < 100 && !converged; ++iter) {
            const auto [p, dp] = legendre_with_derivative(n, z);
            const double step = p / dp;
            z -= step;
            converged = std::abs(step) <= 1e-15;
        }
        if (!converged) throw std::runtime_error("gauss_rule: Newton iteration did not converge");
        const double dp = legendre_with_derivative(n, z).second;
        const double w = 2.0 / ((1.0 - z * z) * dp * dp);
        rule.nodes[n - 1 - i] = z;
        rule.nodes[i] = -z;
        rule.weights[n - 1 - i] = w;
        rule.weights[i] = w;
    }
    if (n % 2 == 1) rule.nodes[n / 2] = 0.0;
    return rule;
}

const GaussRule& cached_gauss_rule(std::size_t n) {
    static std::mutex mutex;
    static std::map<std::size_t, std::unique_ptr<const GaussRule>> cache;
    std::lock_guard lock(mutex);
    auto it = cache.find(n);
    if (it == cache.end()) it = cache.emplace(n, std::make_unique<const GaussRule>(gauss_rule(n))).first;
    return *it->second;
}

QuadResult adaptive_gauss(const ComplexFunction& fn, double a, double b, const OracleConfig& config) {
    if (!(config.tol > 0.0)) throw std::invalid_argument("adaptive_gauss: tol must be positive");
    if (!std::isfinite(a) || !std::isfinite(b) || !(a < b))
        throw std::invalid_argument("adaptive_gauss: requires finite a < b");

    const GaussRule& rule = cached_gauss_rule(config.points);
    const BisectionLimits limits{config.tol, config.max_intervals, config.min_width_factor, false};
    return bisect_adaptively(a, b, limits, [&](double a0, double b0) {
        const double half = 0.5 * (b0 - a0);
        const double center = 0.5 * (a0 + b0);
        std::complex<double> sum = 0.0;
        for (std::size_t i = 0; i < rule.n; ++i) sum += rule.weights[i] * fn(center + half * rule.nodes[i]);
        const std::complex<double> value = half * sum;
        const bool ok = std::isfinite(value.real()) && std::isfinite(value.imag());
        return PanelEstimate{value, ok, rule.n};
    });
}

ComplexFunction oscillatory_integrand(const Integrand& integrand) {
    return [integrand](double x) -> std::complex<double> {
        const std::complex<double> f = integrand.f(x);
        const double g = integrand.g(x);
        switch (integrand.kernel) {
            case Kernel::exp: return f * std::polar(1.0, g);
            case Kernel::cos: return f * std::cos(g);
            case Kernel::sin: return f * std::sin(g);
        }
        return f * std::polar(1.0, g);
    };
}

}  // namespace levinquad
