#include "levinquad/levin.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

namespace levinquad {

std::string_view to_string(Kernel kernel) noexcept {
    switch (kernel) {
        case Kernel::exp: return "exp";
        case Kernel::cos: return "cos";
        case Kernel::sin: return "sin";
    }
    return "exp";
}

Kernel parse_kernel(std::string_view name) {
    if (name == "exp") return Kernel::exp;
    if (name == "cos") return Kernel::cos;
    if (name == "sin") return Kernel::sin;
    throw std::invalid_argument("unknown kernel '" + std::string(name) + "' (expected exp, cos or sin)");
}

std::string_view to_string(Solver solver) noexcept { return solver == Solver::qr ? "qr" : "svd"; }

Solver parse_solver(std::string_view name) {
    if (name == "qr") return Solver::qr;
    if (name == "svd") return Solver::svd;
    throw std::invalid_argument("unknown solver '" + std::string(name) + "' (expected qr or svd)");
}

std::complex<double> exp_value(const PanelEndpoints& ends) {
    const std::complex<double> i(0.0, 1.0);
    return ends.p_b * std::exp(i * ends.g_b) - ends.p_a * std::exp(i * ends.g_a);
}

std::complex<double> weighted_value(const PanelEndpoints& plus, const PanelEndpoints* minus, Kernel kernel) {
    const std::complex<double> e_plus = exp_value(plus);
    if (kernel == Kernel::exp) return e_plus;
    if (minus == nullptr) return kernel == Kernel::cos ? e_plus.real() : e_plus.imag();
    const std::complex<double> e_minus = exp_value(*minus);
    if (kernel == Kernel::cos) return 0.5 * (e_plus + e_minus);
    return (e_plus - e_minus) / std::complex<double>(0.0, 2.0);
}

namespace {

bool finite(std::complex<double> z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); }

struct Samples {
    std::vector<std::complex<double>> f;
    std::vector<double> g;
    std::size_t fevals = 0;
    bool ok = true;
};

Samples sample(const Integrand& integrand, double a0, double b0, const ChebGrid& grid,
               const PanelOptions& options) {
    Samples s;
    s.f.resize(grid.k);
    s.g.resize(grid.k);
    for (std::size_t j = 0; j < grid.k; ++j) {
        const double x = mapped_node(grid, j, a0, b0);
        s.f[j] = integrand.f(x);
        s.g[j] = integrand.g(x);
        ++s.fevals;
        if (finite(s.f[j]) && std::isfinite(s.g[j])) continue;

        const bool endpoint = (j == 0 || j + 1 == grid.k);
        if (!endpoint || !options.nudge_endpoints) {
            s.ok = false;
            return s;
        }
        const double delta = options.nudge_fraction * (b0 - a0);
        const double moved = j == 0 ? a0 + delta : b0 - delta;
        s.f[j] = integrand.f(moved);
        s.g[j] = integrand.g(moved);
        ++s.fevals;
        if (!finite(s.f[j]) || !std::isfinite(s.g[j])) {
            s.ok = false;
            return s;
        }
    }
    return s;
}

struct Solved {
    PanelEndpoints ends;
    std::size_t rank = 0;
    double norm_a = 0.0;
};

// Solves (D + i sign diag(g')) p = f and returns p at the panel ends.
Solved solve_levin(const RealMatrix& diff, std::span<const double> dg, std::span<const double> g,
                   std::span<const std::complex<double>> f, double sign, const PanelOptions& options) {
    const std::size_t k = f.size();
    ComplexMatrix a(k, k);
    for (std::size_t i = 0; i < k; ++i) {
        for (std::size_t j = 0; j < k; ++j) a(i, j) = diff(i, j);
        a(i, i) += std::complex<double>(0.0, sign * dg[i]);
    }

    Solved out;
    LinearSolve solution;
    if (options.solver == Solver::svd) {
        const SvdFactors factors = svd(a);
        out.norm_a = factors.sigma.front();
        // sigma_1 = 0 only for A = 0; then nothing is retained.
        const double threshold = out.norm_a > 0.0 ? options.truncation * out.norm_a
                                                  : std::numeric_limits<double>::min();
        solution = tsvd_solve(factors, f, threshold);
    } else {
        out.norm_a = op_norm_estimate(a);
        solution = qr_solve_pivoted_relative(a, f, options.truncation);
    }
    out.rank = solution.report.rank_used;
    out.ends = PanelEndpoints{solution.x.front(), solution.x.back(), sign * g.front(), sign * g.back()};
    return out;
}

}  // namespace

LevinLocalResult levin_panel(const Integrand& integrand, double a0, double b0, const ChebGrid& grid,
                             const PanelOptions& options) {
    if (!std::isfinite(a0) || !std::isfinite(b0) || !(a0 < b0))
        throw std::invalid_argument("levin_panel: requires finite a0 < b0");

    LevinLocalResult result;
    Samples s = sample(integrand, a0, b0, grid, options);
    result.fevals = s.fevals;
    if (!s.ok) {
        result.status = PanelStatus::nonfinite_sample;
        result.value = std::complex<double>(std::nan(""), std::nan(""));
        return result;
    }

    // Scaled differentiation: d/dx = (2 / (b0 - a0)) d/dt.
    const double scale = 2.0 / (b0 - a0);
    RealMatrix diff(grid.k, grid.k);
    for (std::size_t i = 0; i < grid.k; ++i)
        for (std::size_t j = 0; j < grid.k; ++j) diff(i, j) = grid.diff(i, j) * scale;
    const std::vector<double> dg = diff.apply(std::span<const double>(s.g));

    bool real_f = true;
    for (const auto& z : s.f) real_f = real_f && z.imag() == 0.0;
    const bool need_conjugate = integrand.kernel != Kernel::exp && !real_f;

    try {
        const Solved plus = solve_levin(diff, dg, s.g, s.f, 1.0, options);
        result.endpoints = plus.ends;
        result.rank_used = plus.rank;
        result.norm_a = plus.norm_a;
        if (need_conjugate) {
            const Solved minus = solve_levin(diff, dg, s.g, s.f, -1.0, options);
            result.conjugate_endpoints = minus.ends;
            result.value = weighted_value(plus.ends, &*result.conjugate_endpoints, integrand.kernel);
        } else {
            result.value = weighted_value(plus.ends, nullptr, integrand.kernel);
        }
    } catch (const LinalgError&) {
        result.status = PanelStatus::solver_failure;
        result.value = std::complex<double>(std::nan(""), std::nan(""));
        return result;
    }
    if (!finite(result.value)) result.status = PanelStatus::solver_failure;
    return result;
}

}  // namespace levinquad
