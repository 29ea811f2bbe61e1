#include "levinquad/adaptive.hpp"

#include <stdexcept>

namespace levinquad {

std::string_view to_string(QuadStatus status) noexcept {
    switch (status) {
        case QuadStatus::converged: return "converged";
        case QuadStatus::budget_exhausted: return "budget_exhausted";
        case QuadStatus::width_floor: return "width_floor";
        case QuadStatus::panel_failure: return "panel_failure";
    }
    return "panel_failure";
}

void AdaptiveConfig::validate() const {
    if (!(eps > 0.0)) throw std::invalid_argument("eps must be positive");
    if (k < 4) throw std::invalid_argument("k must be at least 4");
    if (max_intervals == 0) throw std::invalid_argument("max_intervals must be at least 1");
    if (!(truncation > 0.0)) throw std::invalid_argument("truncation must be positive");
    if (!(min_width_factor >= 0.0)) throw std::invalid_argument("min_width_factor must be non-negative");
}

PanelOptions AdaptiveConfig::panel_options() const {
    PanelOptions options;
    options.solver = solver;
    options.truncation = truncation;
    options.nudge_endpoints = nudge_endpoints;
    return options;
}

BisectionLimits AdaptiveConfig::limits() const {
    return BisectionLimits{eps, max_intervals, min_width_factor, record_subdivision};
}

PairDecision accepted_pair_update(std::complex<double> val0, std::complex<double> val_left,
                                  std::complex<double> val_right, double eps) noexcept {
    return std::abs(val0 - (val_left + val_right)) < eps ? PairDecision::accept : PairDecision::split;
}

QuadResult adaptive_integrate(const Integrand& integrand, double a, double b, const AdaptiveConfig& config) {
    config.validate();
    if (!std::isfinite(a) || !std::isfinite(b) || !(a < b))
        throw std::invalid_argument("adaptive_integrate: requires finite a < b");

    const ChebGrid& grid = cheb_grid(config.k);
    const PanelOptions options = config.panel_options();
    return bisect_adaptively(a, b, config.limits(), [&](double a0, double b0) {
        const LevinLocalResult local = levin_panel(integrand, a0, b0, grid, options);
        return PanelEstimate{local.value, local.ok(), local.fevals};
    });
}

}  // namespace levinquad
