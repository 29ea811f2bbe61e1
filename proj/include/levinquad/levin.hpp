#pragma once

// Single-panel Levin estimate: collocate p' + i g' p = f at the mapped
// extremal nodes, solve with a truncated factorization, and difference the
// antiderivative p exp(i g) across the panel.

#include <complex>
#include <cstddef>
#include <optional>

#include "levinquad/chebyshev.hpp"
#include "levinquad/integrand.hpp"
#include "levinquad/linalg.hpp"

namespace levinquad {

enum class Solver { qr, svd };

[[nodiscard]] std::string_view to_string(Solver solver) noexcept;
[[nodiscard]] Solver parse_solver(std::string_view name);

struct PanelOptions {
    Solver solver = Solver::qr;
    /// Directions are dropped below truncation * ||A|| (sigma_1 for the SVD,
    /// |r_11| for pivoted QR).
    double truncation = kMachineEps;
    /// Re-sample a non-finite endpoint value at a point moved inward by
    /// nudge_fraction * (b0 - a0).
    bool nudge_endpoints = true;
    double nudge_fraction = 0x1p-46;
};

enum class PanelStatus { ok, nonfinite_sample, solver_failure };

/// p and g at both ends of a panel; enough to form the exp-kernel estimate.
struct PanelEndpoints {
    std::complex<double> p_a;
    std::complex<double> p_b;
    double g_a = 0.0;
    double g_b = 0.0;
};

struct LevinLocalResult {
    std::complex<double> value;
    PanelStatus status = PanelStatus::ok;
    std::size_t rank_used = 0;
    PanelEndpoints endpoints;
    /// Endpoints of the conjugate-phase solve, present only when it was needed.
    std::optional<PanelEndpoints> conjugate_endpoints;
    double norm_a = 0.0;
    std::size_t fevals = 0;

    [[nodiscard]] bool ok() const noexcept { return status == PanelStatus::ok; }
};

/// p(b0) e^{i g(b0)} - p(a0) e^{i g(a0)}.
[[nodiscard]] std::complex<double> exp_value(const PanelEndpoints& ends);

/// Assembles the kernel-specific panel value. With real f a single exp-kernel
/// solve suffices (cos -> Re, sin -> Im); otherwise the solve for -g must be
/// supplied and the value is (E(g) +- E(-g)) / (2 or 2i).
[[nodiscard]] std::complex<double> weighted_value(const PanelEndpoints& plus,
                                                  const PanelEndpoints* minus, Kernel kernel);

/// Estimate of the integral of f K(g) over [a0, b0] from one k-point solve.
/// Throws std::invalid_argument for a0 >= b0 or non-finite endpoints.
[[nodiscard]] LevinLocalResult levin_panel(const Integrand& integrand, double a0, double b0,
                                           const ChebGrid& grid, const PanelOptions& options = {});

}  // namespace levinquad
