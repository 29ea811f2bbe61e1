#include "levinquad/reference.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <tuple>

namespace levinquad {

namespace {

std::vector<NamedIntegral> build_catalog() {
    const std::complex<double> modal_weight = 1.0 / (8.0 * std::numbers::pi * std::numbers::pi);
    return {
        {"I1", {"lambda"}, {{"1/(1+x^2)", "lambda*atan(x)", Kernel::cos, 1.0}}, "", true},
        {"I2",
         {"lambda"},
         {{"2", "lambda*x^4", Kernel::exp, 1.0}},
         "substituted x = t^2; truncated at t = (1e12/lambda)^(1/3)",
         true},
        {"I3",
         {"lambda"},
         {{"2", "lambda*exp(x)", Kernel::exp, 1.0}},
         "substituted x = exp(-2s); truncated at s = log(4e12/lambda)",
         false},
        {"I4", {"lambda"}, {{"exp(x)", "lambda*exp(x)", Kernel::exp, 1.0}}, "", true},
        {"I5", {"lambda"}, {{"exp(-x)*x", "lambda*x^2", Kernel::exp, 1.0}}, "", false},
        {"I6", {"lambda"}, {{"1+x^2", "lambda*x^2", Kernel::exp, 1.0}}, "", false},
        {"I7", {"lambda"}, {{"1", "lambda*x^2", Kernel::exp, 1.0}}, "", false},
        {"I8", {"lambda"}, {{"1/(0.01+x^4)", "lambda*x^4", Kernel::exp, 1.0}}, "", false},
        {"I9", {"lambda", "m"}, {{"cos(x)/(1+x^2)", "lambda*x^m", Kernel::exp, 1.0}}, "", false},
        {"I21",
         {"kappa", "m", "alpha"},
         {{"1/sqrt(1-alpha*cos(x))", "m*x-kappa*sqrt(1-alpha*cos(x))", Kernel::exp, modal_weight},
          {"1/sqrt(1-alpha*cos(x))", "(-m)*x-kappa*sqrt(1-alpha*cos(x))", Kernel::exp, modal_weight}},
         "cos(m x) split into exp(+-i m x); weight 1/(8 pi^2) per term",
         false},
        {"I22", {"lambda", "m"}, {{"1/(1+x^2)", "lambda*cos(pi/2*m*x)^2", Kernel::exp, 1.0}}, "", false},
    };
}

double require(const ParamMap& params, const std::string& id, const std::string& name) {
    auto it = params.find(name);
    if (it == params.end()) throw std::invalid_argument(id + ": missing parameter '" + name + "'");
    if (!std::isfinite(it->second)) throw std::invalid_argument(id + ": parameter '" + name + "' is not finite");
    return it->second;
}

std::pair<double, double> domain_for(const std::string& id, const ParamMap& params) {
    if (id == "I1" || id == "I6" || id == "I8" || id == "I9" || id == "I22") return {-1.0, 1.0};
    if (id == "I5") return {0.0, 1.0};
    if (id == "I7") return {-4.0, 4.0};
    if (id == "I4") return {0.0, 10.0};
    if (id == "I21") return {-std::numbers::pi, std::numbers::pi};
    const double lambda = require(params, id, "lambda");
    if (!(lambda > 0.0)) throw std::invalid_argument(id + ": lambda must be positive");
    if (id == "I2") return {0.0, std::cbrt(1e12 / lambda)};
    if (id == "I3") return {0.0, std::log(std::max(4e12 / lambda, 2.0))};
    throw std::invalid_argument("unknown integral '" + id + "'");
}

}  // namespace

const std::vector<NamedIntegral>& reference_catalog() {
    static const std::vector<NamedIntegral> catalog = build_catalog();
    return catalog;
}

const NamedIntegral& named_integral(std::string_view id) {
    for (const auto& entry : reference_catalog())
        if (entry.id == id) return entry;
    throw std::invalid_argument("unknown integral '" + std::string(id) + "'");
}

Integrand make_integrand(const Expr& f_real, const Expr* f_imag, const Expr& g, Kernel kernel,
                         const ParamMap& params) {
    Integrand integrand;
    integrand.kernel = kernel;
    CompiledExpr fr(f_real, params);
    if (f_imag != nullptr) {
        CompiledExpr fi(*f_imag, params);
        integrand.f = [fr, fi](double x) { return std::complex<double>(fr(x), fi(x)); };
    } else {
        integrand.f = [fr](double x) { return std::complex<double>(fr(x), 0.0); };
    }
    integrand.g = CompiledExpr(g, params);
    return integrand;
}

ReferenceProblem integrand_for(std::string_view id, const ParamMap& params) {
    const NamedIntegral& entry = named_integral(id);
    ReferenceProblem problem;
    problem.id = entry.id;
    for (const auto& name : entry.params) problem.params[name] = require(params, entry.id, name);
    std::tie(problem.a, problem.b) = domain_for(entry.id, problem.params);
    problem.terms = entry.terms;
    for (const auto& term : entry.terms) {
        const Expr f = Expr::parse(term.f_expr, entry.params);
        const Expr g = Expr::parse(term.g_expr, entry.params);
        problem.integrands.push_back(make_integrand(f, nullptr, g, term.kernel, problem.params));
    }
    return problem;
}

std::complex<double> closed_form_value(std::string_view id, const ParamMap& params) {
    const std::string name(id);
    const std::complex<double> i(0.0, 1.0);
    if (name == "I1") {
        const double lambda = require(params, name, "lambda");
        return 2.0 / lambda * std::sin(std::numbers::pi * lambda / 4.0);
    }
    if (name == "I2") {
        const double lambda = require(params, name, "lambda");
        return std::polar(1.0, std::numbers::pi / 8.0) * (2.0 * kGammaFiveQuarters / std::pow(lambda, 0.25));
    }
    if (name == "I4") {
        const double lambda = require(params, name, "lambda");
        // Same floating-point phase as the integrand expression lambda*exp(x) at x = 10.
        return i / lambda * (std::polar(1.0, lambda) - std::polar(1.0, lambda * std::exp(10.0)));
    }
    throw std::invalid_argument("no closed form for '" + name + "'");
}

QuadResult integrate_problem(const ReferenceProblem& problem, const AdaptiveConfig& config) {
    QuadResult total;
    total.value = 0.0;
    for (std::size_t t = 0; t < problem.integrands.size(); ++t) {
        const QuadResult part = adaptive_integrate(problem.integrands[t], problem.a, problem.b, config);
        total.value += problem.terms[t].weight * part.value;
        total.intervals_used += part.intervals_used;
        total.intervals_popped += part.intervals_popped;
        total.fevals += part.fevals;
        total.status = std::max(total.status, part.status);
        total.subdivision.insert(total.subdivision.end(), part.subdivision.begin(), part.subdivision.end());
    }
    return total;
}

QuadResult oracle_problem(const ReferenceProblem& problem, const OracleConfig& config) {
    QuadResult total;
    total.value = 0.0;
    for (std::size_t t = 0; t < problem.integrands.size(); ++t) {
        const QuadResult part =
            adaptive_gauss(oscillatory_integrand(problem.integrands[t]), problem.a, problem.b, config);
        total.value += problem.terms[t].weight * part.value;
        total.intervals_used += part.intervals_used;
        total.intervals_popped += part.intervals_popped;
        total.fevals += part.fevals;
        total.status = std::max(total.status, part.status);
    }
    return total;
}

}  // namespace levinquad
