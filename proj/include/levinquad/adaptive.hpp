#pragma once

// Adaptive bisection driver. An interval is accepted when its one-panel
// estimate agrees with the sum of its two half-panel estimates to within an
// absolute tolerance; otherwise both halves go back on the worklist.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <limits>
#include <string_view>
#include <utility>
#include <vector>

#include "levinquad/integrand.hpp"
#include "levinquad/levin.hpp"

namespace levinquad {

// Ordered by severity.
enum class QuadStatus { converged, width_floor, budget_exhausted, panel_failure };

[[nodiscard]] std::string_view to_string(QuadStatus status) noexcept;

struct Interval {
    double a = 0.0;
    double b = 0.0;
};

struct QuadResult {
    std::complex<double> value;
    /// Subintervals in the final adaptive subdivision.
    std::size_t intervals_used = 0;
    /// Intervals removed from the worklist (each costs three panels).
    std::size_t intervals_popped = 0;
    std::size_t fevals = 0;
    QuadStatus status = QuadStatus::converged;
    /// Accepted subdivision, filled only when requested.
    std::vector<Interval> subdivision;

    [[nodiscard]] bool converged() const noexcept { return status == QuadStatus::converged; }
};

/// Safety rails shared by every driver built on bisect_adaptively().
struct BisectionLimits {
    double eps = 1e-12;
    std::size_t max_intervals = std::size_t{1} << 20;
    double min_width_factor = 16.0 * std::numeric_limits<double>::epsilon();
    bool record_subdivision = false;
};

struct AdaptiveConfig {
    double eps = 1e-12;
    std::size_t k = 12;
    Solver solver = Solver::qr;
    std::size_t max_intervals = std::size_t{1} << 20;
    double min_width_factor = 16.0 * std::numeric_limits<double>::epsilon();
    double truncation = kMachineEps;
    bool nudge_endpoints = true;
    bool record_subdivision = false;

    /// Throws std::invalid_argument when eps <= 0, k < 4 or max_intervals == 0.
    void validate() const;
    [[nodiscard]] PanelOptions panel_options() const;
    [[nodiscard]] BisectionLimits limits() const;
};

enum class PairDecision { accept, split };

/// accept iff |val0 - (valL + valR)| < eps (strict).
[[nodiscard]] PairDecision accepted_pair_update(std::complex<double> val0, std::complex<double> val_left,
                                                std::complex<double> val_right, double eps) noexcept;

/// One panel estimate as seen by the worklist.
struct PanelEstimate {
    std::complex<double> value;
    bool ok = true;
    std::size_t fevals = 0;
};

/// Depth-first worklist over [a, b]. panel(a0, b0) -> PanelEstimate. On
/// acceptance the unsplit estimate is accumulated. Intervals narrower than
/// min_width_factor * max(|a0|, |b0|, 1) are accepted as they stand and mark
/// the result width_floor; a failed panel there aborts with panel_failure.
template <class PanelFn>
[[nodiscard]] QuadResult bisect_adaptively(double a, double b, const BisectionLimits& limits, PanelFn&& panel) {
    QuadResult result;
    result.value = 0.0;
    std::vector<Interval> stack{{a, b}};
    bool floor_hit = false;

    while (!stack.empty()) {
        if (result.intervals_popped == limits.max_intervals) {
            result.status = QuadStatus::budget_exhausted;
            return result;
        }
        const Interval iv = stack.back();
        stack.pop_back();
        ++result.intervals_popped;

        const double mid = 0.5 * (iv.a + iv.b);
        const PanelEstimate whole = panel(iv.a, iv.b);
        result.fevals += whole.fevals;
        const double floor = limits.min_width_factor * std::max({std::abs(iv.a), std::abs(iv.b), 1.0});
        const bool splittable = (iv.b - iv.a) >= floor && iv.a < mid && mid < iv.b;

        PanelEstimate left{{}, false, 0};
        PanelEstimate right{{}, false, 0};
        if (splittable) {
            left = panel(iv.a, mid);
            right = panel(mid, iv.b);
            result.fevals += left.fevals + right.fevals;
        }

        if (splittable && whole.ok && left.ok && right.ok &&
            accepted_pair_update(whole.value, left.value, right.value, limits.eps) == PairDecision::accept) {
            result.value += whole.value;
            ++result.intervals_used;
            if (limits.record_subdivision) result.subdivision.push_back(iv);
            continue;
        }
        if (!splittable) {
            if (!whole.ok) {
                result.status = QuadStatus::panel_failure;
                result.value = {std::nan(""), std::nan("")};
                return result;
            }
            floor_hit = true;
            result.value += whole.value;
            ++result.intervals_used;
            if (limits.record_subdivision) result.subdivision.push_back(iv);
            continue;
        }
        // Right half first so the left half is processed next.
        stack.push_back({mid, iv.b});
        stack.push_back({iv.a, mid});
    }
    result.status = floor_hit ? QuadStatus::width_floor : QuadStatus::converged;
    return result;
}

/// Adaptive Levin quadrature of f K(g) over [a, b].
[[nodiscard]] QuadResult adaptive_integrate(const Integrand& integrand, double a, double b,
                                            const AdaptiveConfig& config = {});

}  // namespace levinquad
