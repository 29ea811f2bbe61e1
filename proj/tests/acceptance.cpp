// Acceptance suite: one PASS/FAIL line per criterion, exit status 0 iff all pass.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "levinquad/cli.hpp"
#include "levinquad/oracle.hpp"
#include "levinquad/reference.hpp"
#include "levinquad/selftest.hpp"

using namespace levinquad;
using cd = std::complex<double>;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
    return std::chrono::duration<double>(Clock::now() - start).count();
}

struct Outcome {
    bool passed;
    std::string detail;
};

int failures = 0;

void report(const char* id, const char* title, const std::function<Outcome()>& body) {
    Outcome o{false, ""};
    const auto start = Clock::now();
    try {
        o = body();
    } catch (const std::exception& e) {
        o = {false, std::string("exception: ") + e.what()};
    }
    if (!o.passed) ++failures;
    std::printf("[%s] %-3s %s: %s (%.2f s)\n", o.passed ? "PASS" : "FAIL", id, title, o.detail.c_str(),
                seconds_since(start));
    std::fflush(stdout);
}

std::string fmt(const char* format, double a) {
    char buf[128];
    std::snprintf(buf, sizeof buf, format, a);
    return buf;
}

AdaptiveConfig with_eps(double eps) {
    AdaptiveConfig c;
    c.eps = eps;
    return c;
}

cd levin(const char* id, const ParamMap& p, const AdaptiveConfig& c = {}) {
    const QuadResult r = integrate_problem(integrand_for(id, p), c);
    if (!r.converged()) throw std::runtime_error(std::string(id) + " did not converge: " + std::string(to_string(r.status)));
    return r.value;
}

cd oracle(const char* id, const ParamMap& p, double tol = 1e-15) {
    OracleConfig c;
    c.tol = tol;
    const QuadResult r = oracle_problem(integrand_for(id, p), c);
    if (!r.converged()) throw std::runtime_error(std::string(id) + " oracle did not converge");
    return r.value;
}

std::size_t intervals(const char* id, const ParamMap& p, double eps) {
    const QuadResult r = integrate_problem(integrand_for(id, p), with_eps(eps));
    if (!r.converged()) throw std::runtime_error(std::string(id) + " did not converge");
    return r.intervals_used;
}

std::string cli(const std::vector<std::string>& args, int& code) {
    std::ostringstream out;
    std::ostringstream err;
    code = run_cli(args, out, err);
    return out.str();
}

}  // namespace

int main() {
    report("1", "I1 and I4 vs closed form, 200 log-spaced lambda in [1e1, 1e7]", [] {
        double worst = 0.0;
        double slowest = 0.0;
        const auto start = Clock::now();
        for (const char* id : {"I1", "I4"})
            for (int i = 0; i < 200; ++i) {
                const ParamMap p{{"lambda", std::pow(10.0, 1.0 + 6.0 * i / 199.0)}};
                const auto t0 = Clock::now();
                const cd v = levin(id, p);
                slowest = std::max(slowest, seconds_since(t0));
                worst = std::max(worst, std::abs(v - closed_form_value(id, p)));
            }
        const double total = seconds_since(start);
        return Outcome{worst <= 1e-10 && slowest <= 0.05 && total <= 30.0,
                       "max error " + fmt("%.2e", worst) + " (tol 1e-10), slowest " + fmt("%.1f ms", 1e3 * slowest) +
                           " (<= 50 ms)"};
    });

    report("2", "I5-I8 vs adaptive Gauss, 20 seeded lambda per decade 1e0..1e4", [] {
        double worst = 0.0;
        double min_ratio_high = INFINITY;
        for (const char* id : {"I5", "I6", "I7", "I8"}) {
            int code = 0;
            const std::string csv = cli({"compare", "--paper-integral", id, "--ranges", "1e0:1e1,1e1:1e2,1e2:1e3,1e3:1e4",
                                         "--samples", "20", "--oracle-tol", "1e-15", "--max-oracle-lambda", "1e4",
                                         "--seed", "1"},
                                        code);
            if (code != 0) return Outcome{false, std::string(id) + ": compare exited " + std::to_string(code)};
            std::istringstream in(csv);
            std::string line;
            std::getline(in, line);
            while (std::getline(in, line)) {
                std::vector<std::string> f;
                std::stringstream ss(line);
                std::string piece;
                while (std::getline(ss, piece, ',')) f.push_back(piece);
                worst = std::max(worst, std::stod(f[7]));
                if (std::stod(f[0]) >= 1e3) min_ratio_high = std::min(min_ratio_high, std::stod(f[6]));
            }
        }
        return Outcome{worst <= 5e-11 && min_ratio_high > 1.0,
                       "max difference " + fmt("%.2e", worst) + " (tol 5e-11), min gauss/levin time ratio for lambda >= 1e3 " +
                           fmt("%.2f", min_ratio_high) + " (> 1)"};
    });

    report("3", "I6 low frequency, lambda in {1e-8, 1e-4, 1e-2, 1}", [] {
        double worst = 0.0;
        for (double lambda : {1e-8, 1e-4, 1e-2, 1.0}) {
            const ParamMap p{{"lambda", lambda}};
            worst = std::max(worst, std::abs(levin("I6", p) - oracle("I6", p)));
        }
        return Outcome{worst <= 1e-11, "max difference " + fmt("%.2e", worst) + " (tol 1e-11)"};
    });

    report("4a", "I9 m = 2..9 vs oracle at lambda in {1e2, 1e3, 1e4}", [] {
        double worst = 0.0;
        for (int m = 2; m <= 9; ++m)
            for (double lambda : {1e2, 1e3, 1e4}) {
                const ParamMap p{{"lambda", lambda}, {"m", static_cast<double>(m)}};
                worst = std::max(worst, std::abs(levin("I9", p) - oracle("I9", p)));
            }
        return Outcome{worst <= 1e-10, "max difference " + fmt("%.2e", worst) + " (tol 1e-10)"};
    });

    report("4b", "I9 m = 2, eps 1e-7: intervals(1e6) / intervals(1e2)", [] {
        const std::size_t lo = intervals("I9", {{"lambda", 1e2}, {"m", 2.0}}, 1e-7);
        const std::size_t hi = intervals("I9", {{"lambda", 1e6}, {"m", 2.0}}, 1e-7);
        const double ratio = static_cast<double>(hi) / static_cast<double>(lo);
        return Outcome{ratio <= 4.0,
                       std::to_string(hi) + " / " + std::to_string(lo) + " = " + fmt("%.2f", ratio) + " (<= 4)"};
    });

    report("4c", "I9 m = 2..9, eps 1e-12: interval count spread over lambda in [1e2, 1e6]", [] {
        double worst = 0.0;
        int worst_m = 0;
        for (int m = 2; m <= 9; ++m) {
            std::size_t lo = SIZE_MAX;
            std::size_t hi = 0;
            for (int i = 0; i <= 16; ++i) {
                const std::size_t n =
                    intervals("I9", {{"lambda", std::pow(10.0, 2.0 + 0.25 * i)}, {"m", static_cast<double>(m)}}, 1e-12);
                lo = std::min(lo, n);
                hi = std::max(hi, n);
            }
            const double spread = static_cast<double>(hi) / static_cast<double>(lo);
            if (spread > worst) {
                worst = spread;
                worst_m = m;
            }
        }
        return Outcome{worst <= 2.0, "max/min ratio " + fmt("%.2f", worst) + " at m = " + std::to_string(worst_m) + " (<= 2)"};
    });

    report("5", "I22 m = 20: lambda = 1e7 speed and stability, lambda = 1e3 vs oracle", [] {
        const ParamMap big{{"lambda", 1e7}, {"m", 20.0}};
        const auto t0 = Clock::now();
        const cd v12 = levin("I22", big);
        const double elapsed = seconds_since(t0);
        const cd v9 = levin("I22", big, with_eps(1e-9));
        const double stability = std::abs(v12 - v9);
        const ParamMap small{{"lambda", 1e3}, {"m", 20.0}};
        const double diff = std::abs(levin("I22", small) - oracle("I22", small));
        return Outcome{elapsed <= 0.5 && stability <= 1e-8 && diff <= 1e-10,
                       "time " + fmt("%.1f ms", 1e3 * elapsed) + " (<= 500 ms), |eps 1e-12 - eps 1e-9| " +
                           fmt("%.2e", stability) + " (<= 1e-8), oracle difference " + fmt("%.2e", diff) +
                           " (<= 1e-10)"};
    });

    report("6", "I21 alpha = 0.5, (kappa, m) in {1e2, 1e3}^2, eps = eps0 sqrt(kappa)", [] {
        double worst = 0.0;
        for (double kappa : {1e2, 1e3})
            for (double m : {1e2, 1e3}) {
                const ParamMap p{{"kappa", kappa}, {"m", m}, {"alpha", 0.5}};
                const cd v = levin("I21", p, with_eps(kMachineEps * std::sqrt(kappa)));
                worst = std::max(worst, std::abs(v - oracle("I21", p)));
            }
        return Outcome{worst <= 1e-9, "max difference " + fmt("%.2e", worst) + " (tol 1e-9)"};
    });

    report("7", "property suites (selftest)", [] {
        const auto start = Clock::now();
        const auto results = run_selftest();
        const double elapsed = seconds_since(start);
        std::size_t passed = 0;
        std::string failed;
        for (const auto& r : results) {
            if (r.passed) ++passed;
            else failed += " [" + r.module + ": " + r.name + "]";
        }
        return Outcome{passed == results.size() && elapsed < 10.0,
                       std::to_string(passed) + "/" + std::to_string(results.size()) + " checks in " +
                           fmt("%.2f s", elapsed) + " (< 10 s)" + failed};
    });

    report("8", "seeded sweeps are byte-identical", [] {
        const std::vector<std::string> args{"sweep", "--paper-integral", "I9", "--grid-param", "m=2,3", "--decades",
                                            "2:5", "--count", "20", "--random", "--seed", "42", "--no-timing"};
        int c1 = 0;
        int c2 = 0;
        const std::string a = cli(args, c1);
        const std::string b = cli(args, c2);
        return Outcome{c1 == 0 && c2 == 0 && a == b && !a.empty(),
                       std::to_string(a.size()) + " bytes, " + (a == b ? "identical" : "different")};
    });

    std::printf("%s: %d failing criteria\n", failures == 0 ? "ACCEPTED" : "REJECTED", failures);
    return failures == 0 ? 0 : 1;
}
