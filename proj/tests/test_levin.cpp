#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <limits>

#include "levinquad/levin.hpp"
#include "levinquad/oracle.hpp"

using namespace levinquad;
using cd = std::complex<double>;

namespace {

Integrand make(std::function<cd(double)> f, std::function<double(double)> g, Kernel kernel = Kernel::exp) {
    return Integrand{std::move(f), std::move(g), kernel};
}

PanelOptions with_solver(Solver s) {
    PanelOptions o;
    o.solver = s;
    return o;
}

cd oracle(const Integrand& in, double a, double b) { return adaptive_gauss(oscillatory_integrand(in), a, b).value; }

}  // namespace

TEST_CASE("kernel and solver names") {
    CHECK(parse_kernel("exp") == Kernel::exp);
    CHECK(parse_kernel("cos") == Kernel::cos);
    CHECK(parse_kernel("sin") == Kernel::sin);
    CHECK(to_string(Kernel::sin) == "sin");
    CHECK_THROWS_AS((void)parse_kernel("tan"), std::invalid_argument);
    CHECK(parse_solver("svd") == Solver::svd);
    CHECK(to_string(Solver::qr) == "qr");
    CHECK_THROWS_AS((void)parse_solver("lu"), std::invalid_argument);
}

TEST_CASE("f = 1, g = 0 on [-1, 1] gives 2 through the singular system") {
    for (Solver s : {Solver::qr, Solver::svd}) {
        const auto r = levin_panel(make([](double) { return cd(1.0); }, [](double) { return 0.0; }), -1.0, 1.0,
                                   cheb_grid(12), with_solver(s));
        CHECK(r.ok());
        CHECK(std::abs(r.value - 2.0) <= 1e-12);
        CHECK(r.rank_used == 11);
    }
}

TEST_CASE("f = 1, g = 100 x gives 2 sin(100)/100") {
    const cd expected = 2.0 * std::sin(100.0) / 100.0;
    for (Solver s : {Solver::qr, Solver::svd}) {
        const auto r = levin_panel(make([](double) { return cd(1.0); }, [](double x) { return 100.0 * x; }), -1.0,
                                   1.0, cheb_grid(12), with_solver(s));
        CHECK(std::abs(r.value - expected) <= 1e-12);
    }
}

TEST_CASE("cos(x)/(1+x^2) exp(1000 i x^2) on [0.5, 0.6] matches the oracle") {
    const Integrand in = make([](double x) { return cd(std::cos(x) / (1.0 + x * x)); },
                              [](double x) { return 1e3 * x * x; });
    const cd ref = oracle(in, 0.5, 0.6);
    for (Solver s : {Solver::qr, Solver::svd})
        CHECK(std::abs(levin_panel(in, 0.5, 0.6, cheb_grid(12), with_solver(s)).value - ref) <= 1e-12);
}

TEST_CASE("weighted_value with real f") {
    const PanelEndpoints ends{cd(0.3, -0.2), cd(1.1, 0.4), 0.7, -1.3};
    const cd e = exp_value(ends);
    CHECK(e == ends.p_b * std::polar(1.0, ends.g_b) - ends.p_a * std::polar(1.0, ends.g_a));
    CHECK(weighted_value(ends, nullptr, Kernel::exp) == e);
    CHECK(weighted_value(ends, nullptr, Kernel::cos) == cd(e.real()));
    CHECK(weighted_value(ends, nullptr, Kernel::sin) == cd(e.imag()));
}

TEST_CASE("weighted_value with a conjugate solve") {
    const PanelEndpoints plus{cd(0.3, -0.2), cd(1.1, 0.4), 0.7, -1.3};
    const PanelEndpoints minus{cd(-0.5, 0.1), cd(0.2, 0.9), -0.7, 1.3};
    const cd ep = exp_value(plus);
    const cd em = exp_value(minus);
    CHECK(std::abs(weighted_value(plus, &minus, Kernel::cos) - 0.5 * (ep + em)) <= 1e-16);
    CHECK(std::abs(weighted_value(plus, &minus, Kernel::sin) - (ep - em) / cd(0.0, 2.0)) <= 1e-16);
}

TEST_CASE("cos and sin kernels with f = 1, g = 50 x") {
    auto run = [](Kernel k) {
        return levin_panel(make([](double) { return cd(1.0); }, [](double x) { return 50.0 * x; }, k), -1.0, 1.0,
                           cheb_grid(12));
    };
    const auto c = run(Kernel::cos);
    CHECK(std::abs(c.value - 2.0 * std::sin(50.0) / 50.0) <= 1e-12);
    CHECK(!c.conjugate_endpoints.has_value());
    CHECK(std::abs(run(Kernel::sin).value) <= 1e-12);
}

TEST_CASE("complex f with cos and sin kernels uses the conjugate solve") {
    // f = e^{ix}, cos(20x): integral over [0, 1] of e^{ix} cos(20x).
    auto f = [](double x) { return std::polar(1.0, x); };
    auto g = [](double x) { return 20.0 * x; };
    for (Kernel k : {Kernel::cos, Kernel::sin}) {
        const Integrand in = make(f, g, k);
        const auto r = levin_panel(in, 0.0, 1.0, cheb_grid(16));
        CHECK(r.conjugate_endpoints.has_value());
        CHECK(std::abs(r.value - oracle(in, 0.0, 1.0)) <= 1e-12);
    }
}

TEST_CASE("conjugation symmetry") {
    for (double lambda : {1e-6, 0.7, 30.0, 5e3}) {
        auto f = [](double x) { return cd(std::exp(x), std::sin(3.0 * x)); };
        auto g = [lambda](double x) { return lambda * std::cosh(x); };
        for (Solver s : {Solver::qr, Solver::svd}) {
            const auto p = levin_panel(make(f, g), -0.2, 1.3, cheb_grid(12), with_solver(s));
            const auto m = levin_panel(make([f](double x) { return std::conj(f(x)); }, [g](double x) { return -g(x); }),
                                       -0.2, 1.3, cheb_grid(12), with_solver(s));
            CHECK(std::abs(m.value - std::conj(p.value)) <= 1e-13);
        }
    }
}

TEST_CASE("affine invariance") {
    for (double lambda : {0.1, 10.0, 400.0}) {
        const double a0 = -2.5;
        const double b0 = -1.75;
        auto f = [](double x) { return cd(1.0 / (2.0 + x * x)); };
        auto g = [lambda](double x) { return lambda * x * (1.0 + 0.1 * x); };
        const auto direct = levin_panel(make(f, g), a0, b0, cheb_grid(12));
        const auto pulled = levin_panel(make([=](double t) { return f(a0 + t * (b0 - a0)) * (b0 - a0); },
                                             [=](double t) { return g(a0 + t * (b0 - a0)); }),
                                        0.0, 1.0, cheb_grid(12));
        CHECK(std::abs(direct.value - pulled.value) <= 1e-12 * std::abs(direct.value));
    }
}

TEST_CASE("zero forcing") {
    for (Solver s : {Solver::qr, Solver::svd})
        for (Kernel k : {Kernel::exp, Kernel::cos, Kernel::sin}) {
            const auto r = levin_panel(make([](double) { return cd(0.0); }, [](double x) { return 7.0 * x * x; }, k),
                                       0.0, 3.0, cheb_grid(12), with_solver(s));
            CHECK(r.value == cd(0.0));
        }
}

TEST_CASE("low frequency: no breakdown as lambda -> 0") {
    for (double lambda : {1e-8, 1e-4, 1e-2}) {
        const Integrand in = make([](double x) { return cd(1.0 + x * x); }, [lambda](double x) { return lambda * x * x; });
        const cd ref = oracle(in, -1.0, 1.0);
        for (Solver s : {Solver::qr, Solver::svd})
            CHECK(std::abs(levin_panel(in, -1.0, 1.0, cheb_grid(12), with_solver(s)).value - ref) <= 1e-10);
    }
    // At lambda = 1 twelve points cannot resolve the integrand to 1e-10; sixteen can.
    const Integrand in = make([](double x) { return cd(1.0 + x * x); }, [](double x) { return x * x; });
    CHECK(std::abs(levin_panel(in, -1.0, 1.0, cheb_grid(16)).value - oracle(in, -1.0, 1.0)) <= 1e-10);
}

TEST_CASE("stationary point inside a small panel") {
    for (double lambda : {1.0, 1e3, 1e8}) {
        const double d = std::sqrt(0.1 / lambda);
        const Integrand in = make([](double x) { return cd(1.0 + x); }, [lambda](double x) { return lambda * x * x; });
        CHECK(std::abs(levin_panel(in, -d, d, cheb_grid(12)).value - oracle(in, -d, d)) <= 1e-10);
    }
}

TEST_CASE("endpoint nudge") {
    // f = 1/sqrt(x) is infinite at 0; the nudged sample keeps the panel finite.
    const Integrand in = make([](double x) { return cd(1.0 / std::sqrt(x)); }, [](double x) { return x; });
    const auto nudged = levin_panel(in, 0.0, 1.0, cheb_grid(12));
    CHECK(nudged.ok());
    CHECK(std::isfinite(nudged.value.real()));

    PanelOptions off;
    off.nudge_endpoints = false;
    const auto raw = levin_panel(in, 0.0, 1.0, cheb_grid(12), off);
    CHECK(raw.status == PanelStatus::nonfinite_sample);
    CHECK(!raw.ok());

    // Interior non-finite values are never nudged.
    const Integrand hole = make([](double x) { return cd(1.0 / (x - 0.5)); }, [](double x) { return x; });
    CHECK(levin_panel(hole, 0.0, 1.0, cheb_grid(3)).status == PanelStatus::nonfinite_sample);
}

TEST_CASE("fevals and bad intervals") {
    const Integrand in = make([](double) { return cd(1.0); }, [](double x) { return x; });
    CHECK(levin_panel(in, 0.0, 1.0, cheb_grid(12)).fevals == 12);
    CHECK_THROWS_AS((void)levin_panel(in, 1.0, 1.0, cheb_grid(12)), std::invalid_argument);
    CHECK_THROWS_AS((void)levin_panel(in, 0.0, std::numeric_limits<double>::infinity(), cheb_grid(12)),
                    std::invalid_argument);
}
