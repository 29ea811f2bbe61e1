#pragma once

// Catalog of benchmark oscillatory integrals with known behavior:
//
//   I1(l)       = int_{-1}^{1} cos(l atan x) / (1 + x^2) dx           = (2/l) sin(pi l / 4)
//   I2(l)       = int_0^inf exp(i l x^2) / sqrt(x) dx                = e^{i pi/8} 2 Gamma(5/4) / l^{1/4}
//   I3(l)       = int_0^1 exp(i l / sqrt(x)) / x dx                  = 2 Gamma(0, -i l)
//   I4(l)       = int_0^10 exp(i l e^x) e^x dx                       = (i/l)(e^{i l} - e^{i e^10 l})
//   I5(l)       = int_0^1 exp(i l x^2) e^{-x} x dx
//   I6(l)       = int_{-1}^1 exp(i l x^2) (1 + x^2) dx
//   I7(l)       = int_{-4}^4 exp(i l x^2) dx
//   I8(l)       = int_{-1}^1 exp(i l x^4) / (0.01 + x^4) dx
//   I9(l, m)    = int_{-1}^1 exp(i l x^m) cos(x) / (1 + x^2) dx
//   I21(k,m,a)  = 1/(4 pi^2) int_{-pi}^{pi} exp(-i k s) cos(m t) / s dt,  s = sqrt(1 - a cos t)
//   I22(l, m)   = int_{-1}^1 exp(i l cos^2(pi m x / 2)) / (1 + x^2) dx
//
// I2 and I3 are rewritten on finite intervals:
//   I2: x = t^2 gives 2 int_0^inf exp(i l t^4) dt, truncated at T = (1e12 / l)^{1/3}.
//       The dropped tail of the original integral beyond R = T^2 is bounded by
//       1 / (l R^{3/2}) (integrate by parts once), i.e. by 1e-12.
//   I3: u = 1/sqrt(x) gives 2 int_1^inf exp(i l u) / u du, whose tail beyond
//       U = 4e12 / l is bounded by 2 * 2 / (l U) = 1e-12. A further u = e^s
//       gives 2 int_0^{log U} exp(i l e^s) ds with a constant amplitude; on
//       [1, U] directly, 2/u spans too many decades for one panel and the
//       halves test can accept a wrong coarse panel.

#include <complex>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "levinquad/adaptive.hpp"
#include "levinquad/expr.hpp"
#include "levinquad/oracle.hpp"
#include "levinquad/integrand.hpp"

namespace levinquad {

/// One f K(g) term of a catalog integral, with its multiplier.
struct ReferenceTerm {
    std::string f_expr;
    std::string g_expr;
    Kernel kernel = Kernel::exp;
    std::complex<double> weight = 1.0;
};

struct NamedIntegral {
    std::string id;
    std::vector<std::string> params;
    std::vector<ReferenceTerm> terms;
    std::string note;
    bool has_closed_form = false;
};

/// Concrete instance: terms compiled with bound parameters and a finite domain.
struct ReferenceProblem {
    std::string id;
    ParamMap params;
    double a = 0.0;
    double b = 0.0;
    std::vector<ReferenceTerm> terms;
    std::vector<Integrand> integrands;  // one per term
};

/// Ids in catalog order.
[[nodiscard]] const std::vector<NamedIntegral>& reference_catalog();

/// Throws std::invalid_argument for an unknown id.
[[nodiscard]] const NamedIntegral& named_integral(std::string_view id);

/// Binds params (every name in NamedIntegral::params is required) and builds
/// the integrands and the finite domain. Throws std::invalid_argument.
[[nodiscard]] ReferenceProblem integrand_for(std::string_view id, const ParamMap& params);

/// Closed forms for I1, I2 and I4. Throws std::invalid_argument otherwise.
[[nodiscard]] std::complex<double> closed_form_value(std::string_view id, const ParamMap& params);

/// Adaptive Levin on every term, weighted and summed. Counters add up and
/// the status is the worst over the terms.
[[nodiscard]] QuadResult integrate_problem(const ReferenceProblem& problem, const AdaptiveConfig& config);

/// Same with the Gauss-Legendre oracle.
[[nodiscard]] QuadResult oracle_problem(const ReferenceProblem& problem, const OracleConfig& config);

/// Gamma(5/4).
inline constexpr double kGammaFiveQuarters = 0.90640247705547707798;

/// Integrand built from two real expressions (imaginary part optional).
[[nodiscard]] Integrand make_integrand(const Expr& f_real, const Expr* f_imag, const Expr& g,
                                       Kernel kernel, const ParamMap& params);

}  // namespace levinquad
