#include "levinquad/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <optional>
#include <random>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "levinquad/adaptive.hpp"
#include "levinquad/expr.hpp"
#include "levinquad/oracle.hpp"
#include "levinquad/reference.hpp"
#include "levinquad/selftest.hpp"

namespace levinquad {

namespace {

using cd = std::complex<double>;

/// Bad flags or input; maps to exit code 2.
struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::string num(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string json_num(double v) { return std::isfinite(v) ? num(v) : "null"; }

std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
    std::string quoted = "\"";
    for (char c : s) {
        if (c == '"') quoted += '"';
        quoted += c;
    }
    return quoted + '"';
}

double parse_real(const std::string& text, const std::string& what) {
    const char* begin = text.c_str();
    char* end = nullptr;
    const double v = std::strtod(begin, &end);
    if (text.empty() || end != begin + text.size() || !std::isfinite(v))
        throw UsageError(what + ": '" + text + "' is not a finite number");
    return v;
}

std::pair<std::string, std::string> split_once(const std::string& text, char sep, const std::string& what) {
    const auto pos = text.find(sep);
    if (pos == std::string::npos || pos == 0 || pos + 1 == text.size())
        throw UsageError(what + ": expected A" + sep + "B, got '" + text + "'");
    return {text.substr(0, pos), text.substr(pos + 1)};
}

ParamMap parse_params(const std::vector<std::string>& items) {
    ParamMap params;
    for (const auto& item : items) {
        auto [name, value] = split_once(item, '=', "--param");
        params[name] = parse_real(value, "--param " + name);
    }
    return params;
}

struct GridParam {
    std::string name;
    std::vector<double> values;
};

std::vector<GridParam> parse_grid(const std::vector<std::string>& items) {
    std::vector<GridParam> grid;
    for (const auto& item : items) {
        auto [name, list] = split_once(item, '=', "--grid-param");
        GridParam g{name, {}};
        std::stringstream ss(list);
        std::string piece;
        while (std::getline(ss, piece, ',')) g.values.push_back(parse_real(piece, "--grid-param " + name));
        if (g.values.empty()) throw UsageError("--grid-param " + name + ": no values");
        grid.push_back(std::move(g));
    }
    return grid;
}

/// Uniform double in [0, 1) from the top 53 bits, identical on every platform.
double unit_uniform(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1p-53; }

double median(std::vector<double> v) {
    std::sort(v.begin(), v.end());
    const std::size_t n = v.size();
    return n % 2 == 1 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

struct Timed {
    QuadResult result;
    double seconds = 0.0;
};

/// Runs fn repeats times; keeps the first result and the median wall time.
template <class Fn>
Timed timed(Fn&& fn, int repeats) {
    Timed t;
    std::vector<double> times;
    for (int r = 0; r < repeats; ++r) {
        const auto start = std::chrono::steady_clock::now();
        QuadResult res = fn();
        times.push_back(std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count());
        if (r == 0) t.result = std::move(res);
    }
    t.seconds = median(std::move(times));
    return t;
}

/// Options shared by the catalog-driven commands.
struct SolveFlags {
    double eps = 1e-12;
    std::size_t k = 12;
    std::string solver = "qr";
    std::string eps_scale = "none";
    std::size_t max_intervals = std::size_t{1} << 20;
    bool no_nudge = false;
    int repeats = 1;

    void add_to(CLI::App& cmd) {
        cmd.add_option("--eps", eps, "Absolute tolerance")->capture_default_str();
        cmd.add_option("--k", k, "Chebyshev points per panel")->capture_default_str();
        cmd.add_option("--solver", solver, "Collocation solver")
            ->check(CLI::IsMember({"qr", "svd"}))
            ->capture_default_str();
        cmd.add_option("--eps-scale", eps_scale, "none, or sqrt-kappa: eps = machine epsilon * sqrt(kappa)")
            ->check(CLI::IsMember({"none", "sqrt-kappa"}))
            ->capture_default_str();
        cmd.add_option("--max-intervals", max_intervals, "Worklist budget")->capture_default_str();
        cmd.add_flag("--no-nudge", no_nudge, "Do not move non-finite endpoint samples inward");
        cmd.add_option("--repeats", repeats, "Timing repeats (median reported)")
            ->check(CLI::PositiveNumber)
            ->capture_default_str();
    }

    /// Tolerance scale for the given parameters: 1, or sqrt(kappa) / eps.
    [[nodiscard]] double tolerance_for(const ParamMap& params, double base) const {
        if (eps_scale == "none") return base;
        const auto it = params.find("kappa");
        if (it == params.end()) throw UsageError("--eps-scale sqrt-kappa needs a parameter named kappa");
        if (!(it->second > 0.0)) throw UsageError("--eps-scale sqrt-kappa needs kappa > 0");
        return kMachineEps * std::sqrt(it->second);
    }

    [[nodiscard]] AdaptiveConfig config(const ParamMap& params) const {
        AdaptiveConfig c;
        c.eps = tolerance_for(params, eps);
        c.k = k;
        c.solver = parse_solver(solver);
        c.max_intervals = max_intervals;
        c.nudge_endpoints = !no_nudge;
        c.validate();
        return c;
    }
};

ReferenceProblem catalog_problem(const std::string& id, const ParamMap& params) {
    try {
        return integrand_for(id, params);
    } catch (const std::invalid_argument& e) {
        throw UsageError(e.what());
    }
}

/// Parallel map over row indices; results land in row order.
template <class Row, class Fn>
std::vector<Row> run_rows(std::size_t count, unsigned threads, Fn&& fn) {
    std::vector<Row> rows(count);
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i = next++; i < count; i = next++) rows[i] = fn(i);
    };
    threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(std::max<std::size_t>(count, 1))));
    if (threads == 1) {
        worker();
        return rows;
    }
    std::vector<std::jthread> pool;
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
    pool.clear();
    return rows;
}

class Output {
public:
    Output(const std::string& path, std::ostream& out) : out_(&out) {
        if (path != "-") {
            file_.open(path, std::ios::binary);
            if (!file_) throw UsageError("cannot open '" + path + "' for writing");
            out_ = &file_;
        }
    }
    std::ostream& stream() { return *out_; }

private:
    std::ofstream file_;
    std::ostream* out_;
};

// ---------------------------------------------------------------- integrate

struct IntegrateFlags {
    std::optional<std::string> f, f_imag, g;
    std::optional<double> a, b;
    std::string kernel = "exp";
    std::string paper;
    std::vector<std::string> params;
    SolveFlags solve;
};

int cmd_integrate(const IntegrateFlags& flags, std::ostream& out) {
    const ParamMap params = parse_params(flags.params);
    const bool custom = flags.f || flags.f_imag || flags.g || flags.a || flags.b;
    ReferenceProblem problem;

    if (!flags.paper.empty()) {
        if (custom) throw UsageError("--paper-integral cannot be combined with --f, --f-imag, --g, --a or --b");
        problem = catalog_problem(flags.paper, params);
    } else {
        if (!flags.f || !flags.g || !flags.a || !flags.b)
            throw UsageError("integrate needs --f, --g, --a and --b (or --paper-integral)");
        if (!(*flags.a < *flags.b)) throw UsageError("--a must be less than --b");
        const Expr f = Expr::parse(*flags.f);
        const Expr g = Expr::parse(*flags.g);
        std::optional<Expr> fi;
        if (flags.f_imag) fi = Expr::parse(*flags.f_imag);
        const Kernel kernel = parse_kernel(flags.kernel);
        problem.params = params;
        problem.a = *flags.a;
        problem.b = *flags.b;
        problem.terms = {ReferenceTerm{*flags.f, *flags.g, kernel, 1.0}};
        problem.integrands = {make_integrand(f, fi ? &*fi : nullptr, g, kernel, params)};
    }

    const AdaptiveConfig config = flags.solve.config(problem.params);
    const Timed t = timed([&] { return integrate_problem(problem, config); }, flags.solve.repeats);
    out << "{\"value_re\": " << json_num(t.result.value.real()) << ", \"value_im\": " << json_num(t.result.value.imag())
        << ", \"intervals\": " << t.result.intervals_used << ", \"fevals\": " << t.result.fevals << ", \"status\": \""
        << to_string(t.result.status) << "\", \"seconds\": " << json_num(t.seconds) << "}\n";
    return t.result.converged() ? 0 : 1;
}

// ---------------------------------------------------------------- sweep

struct SweepFlags {
    std::string paper;
    std::string sweep = "lambda";
    std::string decades = "1:7";
    std::size_t count = 200;
    std::vector<std::string> grid;
    std::vector<std::string> params;
    std::string out = "-";
    bool random = false;
    std::uint64_t seed = 1;
    unsigned threads = 1;
    bool no_timing = false;
    SolveFlags solve;
};

struct RowResult {
    QuadResult result;
    double seconds = 0.0;
    std::string error;
};

RowResult guarded_row(const std::function<Timed()>& fn) {
    RowResult row;
    try {
        Timed t = fn();
        row.result = std::move(t.result);
        row.seconds = t.seconds;
    } catch (const std::exception& e) {
        row.error = e.what();
    }
    return row;
}

int cmd_sweep(const SweepFlags& flags, std::ostream& out) {
    const ParamMap base = parse_params(flags.params);
    const std::vector<GridParam> grid = parse_grid(flags.grid);
    const auto [lo_text, hi_text] = split_once(flags.decades, ':', "--decades");
    const double lo = parse_real(lo_text, "--decades");
    const double hi = parse_real(hi_text, "--decades");
    if (!(lo < hi) || flags.count < 1) throw UsageError("empty sweep range");

    std::vector<double> exponents(flags.count);
    std::mt19937_64 rng(flags.seed);
    for (std::size_t i = 0; i < flags.count; ++i) {
        const double t = flags.random ? unit_uniform(rng)
                                      : (flags.count == 1 ? 0.0 : static_cast<double>(i) / static_cast<double>(flags.count - 1));
        exponents[i] = lo + (hi - lo) * t;
    }

    // Rows: every grid combination (first grid flag varies slowest), then the sweep values.
    std::vector<ParamMap> row_params;
    std::vector<std::size_t> index(grid.size(), 0);
    for (;;) {
        for (double x : exponents) {
            ParamMap p = base;
            for (std::size_t j = 0; j < grid.size(); ++j) p[grid[j].name] = grid[j].values[index[j]];
            p[flags.sweep] = std::pow(10.0, x);
            row_params.push_back(std::move(p));
        }
        std::size_t j = grid.size();
        while (j > 0 && ++index[j - 1] == grid[j - 1].values.size()) index[--j] = 0;
        if (j == 0) break;
    }

    const NamedIntegral& entry = [&]() -> const NamedIntegral& {
        try {
            return named_integral(flags.paper);
        } catch (const std::invalid_argument& e) {
            throw UsageError(e.what());
        }
    }();
    // Fail fast on flag problems before any row runs.
    std::vector<ReferenceProblem> problems;
    std::vector<AdaptiveConfig> configs;
    for (const auto& p : row_params) {
        problems.push_back(catalog_problem(entry.id, p));
        configs.push_back(flags.solve.config(problems.back().params));
    }

    const auto rows = run_rows<RowResult>(problems.size(), flags.threads, [&](std::size_t i) {
        return guarded_row([&] { return timed([&] { return integrate_problem(problems[i], configs[i]); }, flags.solve.repeats); });
    });

    Output sink(flags.out, out);
    std::ostream& os = sink.stream();
    os << csv_field(flags.sweep);
    for (const auto& g : grid) os << ',' << csv_field(g.name);
    os << ",value_re,value_im,abs_error,intervals,fevals,status,seconds\r\n";
    bool all_converged = true;
    for (std::size_t i = 0; i < rows.size(); ++i) {
        const ParamMap& p = row_params[i];
        const RowResult& r = rows[i];
        os << num(p.at(flags.sweep));
        for (const auto& g : grid) os << ',' << num(p.at(g.name));
        if (!r.error.empty()) {
            all_converged = false;
            os << ",,,,,," << csv_field("error: " + r.error) << ",\r\n";
            continue;
        }
        std::string abs_error;
        if (entry.has_closed_form) abs_error = num(std::abs(r.result.value - closed_form_value(entry.id, problems[i].params)));
        all_converged = all_converged && r.result.converged();
        os << ',' << num(r.result.value.real()) << ',' << num(r.result.value.imag()) << ',' << abs_error << ','
           << r.result.intervals_used << ',' << r.result.fevals << ',' << to_string(r.result.status) << ','
           << (flags.no_timing ? std::string() : num(r.seconds)) << "\r\n";
    }
    os.flush();
    return all_converged ? 0 : 1;
}

// ---------------------------------------------------------------- compare

struct CompareFlags {
    std::string paper;
    std::string sweep = "lambda";
    std::string ranges;
    std::size_t samples = 200;
    double oracle_tol = 1e-15;
    double max_oracle_lambda = 1e4;
    std::vector<std::string> params;
    std::uint64_t seed = 1;
    std::string out = "-";
    unsigned threads = 1;
    bool no_timing = false;
    SolveFlags solve;
};

struct CompareRow {
    RowResult levin;
    std::optional<RowResult> gauss;
};

int cmd_compare(const CompareFlags& flags, std::ostream& out) {
    const ParamMap base = parse_params(flags.params);
    const NamedIntegral& entry = [&]() -> const NamedIntegral& {
        try {
            return named_integral(flags.paper);
        } catch (const std::invalid_argument& e) {
            throw UsageError(e.what());
        }
    }();
    if (flags.samples < 1) throw UsageError("--samples must be at least 1");
    if (!(flags.oracle_tol > 0.0)) throw UsageError("--oracle-tol must be positive");

    std::vector<std::pair<double, double>> ranges;
    std::stringstream ss(flags.ranges);
    std::string piece;
    while (std::getline(ss, piece, ',')) {
        const auto [lo_text, hi_text] = split_once(piece, ':', "--ranges");
        const double lo = parse_real(lo_text, "--ranges");
        const double hi = parse_real(hi_text, "--ranges");
        if (!(lo > 0.0 && lo < hi)) throw UsageError("--ranges: need 0 < lo < hi, got '" + piece + "'");
        ranges.emplace_back(lo, hi);
    }
    if (ranges.empty()) throw UsageError("--ranges is empty");

    // Log-uniform samples, drawn range by range from one seeded stream.
    std::mt19937_64 rng(flags.seed);
    std::vector<ReferenceProblem> problems;
    std::vector<AdaptiveConfig> configs;
    std::vector<bool> with_oracle;
    for (const auto& [lo, hi] : ranges)
        for (std::size_t s = 0; s < flags.samples; ++s) {
            const double value = std::pow(10.0, std::log10(lo) + (std::log10(hi) - std::log10(lo)) * unit_uniform(rng));
            ParamMap p = base;
            p[flags.sweep] = value;
            problems.push_back(catalog_problem(entry.id, p));
            configs.push_back(flags.solve.config(problems.back().params));
            with_oracle.push_back(value <= flags.max_oracle_lambda);
        }

    const auto rows = run_rows<CompareRow>(problems.size(), flags.threads, [&](std::size_t i) {
        CompareRow row;
        row.levin = guarded_row(
            [&] { return timed([&] { return integrate_problem(problems[i], configs[i]); }, flags.solve.repeats); });
        if (with_oracle[i]) {
            OracleConfig oc;
            oc.tol = flags.solve.tolerance_for(problems[i].params, flags.oracle_tol);
            row.gauss = guarded_row([&] { return timed([&] { return oracle_problem(problems[i], oc); }, flags.solve.repeats); });
        }
        return row;
    });

    Output sink(flags.out, out);
    std::ostream& os = sink.stream();
    os << "range_lo,range_hi,samples,oracle_samples,avg_time_levin,avg_time_gauss,ratio,max_abs_difference\r\n";
    bool ok = true;
    for (std::size_t r = 0; r < ranges.size(); ++r) {
        double levin_time = 0.0;
        double levin_time_oracle = 0.0;
        double gauss_time = 0.0;
        double max_diff = 0.0;
        std::size_t oracle_samples = 0;
        for (std::size_t s = 0; s < flags.samples; ++s) {
            const CompareRow& row = rows[r * flags.samples + s];
            ok = ok && row.levin.error.empty() && row.levin.result.converged();
            levin_time += row.levin.seconds;
            if (!row.gauss) continue;
            ok = ok && row.gauss->error.empty() && row.gauss->result.converged();
            ++oracle_samples;
            levin_time_oracle += row.levin.seconds;
            gauss_time += row.gauss->seconds;
            max_diff = std::max(max_diff, std::abs(row.levin.result.value - row.gauss->result.value));
        }
        const double n = static_cast<double>(flags.samples);
        const double m = static_cast<double>(oracle_samples);
        os << num(ranges[r].first) << ',' << num(ranges[r].second) << ',' << flags.samples << ',' << oracle_samples << ',';
        if (flags.no_timing) {
            os << ",,,";
        } else {
            os << num(levin_time / n) << ',' << (oracle_samples ? num(gauss_time / m) : "") << ','
               << (oracle_samples && levin_time_oracle > 0.0 ? num(gauss_time / levin_time_oracle) : "") << ',';
        }
        os << (oracle_samples ? num(max_diff) : "") << "\r\n";
    }
    os.flush();
    return ok ? 0 : 1;
}

// ---------------------------------------------------------------- selftest

int cmd_selftest(const std::string& filter, const std::string& fault, std::ostream& out) {
    SelftestOptions options;
    options.filter = filter;
    if (fault == "diff-matrix") options.fault = InjectedFault::diff_matrix;
    else if (!fault.empty()) throw UsageError("unknown fault '" + fault + "'");
    std::vector<CheckResult> results;
    try {
        results = run_selftest(options);
    } catch (const std::invalid_argument& e) {
        throw UsageError(e.what());
    }
    std::size_t passed = 0;
    for (const auto& r : results) {
        passed += r.passed ? 1 : 0;
        out << (r.passed ? "PASS " : "FAIL ") << r.module << ": " << r.name;
        if (!r.detail.empty()) out << " [" << r.detail << "]";
        out << '\n';
    }
    out << passed << "/" << results.size() << " checks passed\n";
    return passed == results.size() ? 0 : 1;
}

constexpr const char* kExpressionHelp = R"help(Expressions:
  Numbers, the variable x, constants pi and e, and any other identifier as a
  parameter bound with --param name=value. Operators + - * / ^ with the usual
  precedence; ^ is right-associative and unary minus binds tighter than ^, so
  write -(x^2) for the negated square. Functions:
    sin cos tan atan exp log sqrt abs tanh cosh sinh sech erf
    atan2(y, x) pow(x, y) min(a, b) max(a, b)
  Example: --f "1/(1+x^2)" --g "lambda*atan(x)" --kernel cos --param lambda=100)help";

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Adaptive Levin quadrature for oscillatory integrals", "levinq"};
    app.require_subcommand(1);

    IntegrateFlags integrate;
    auto* c_int = app.add_subcommand("integrate", "Evaluate one integral and print JSON");
    c_int->add_option("--f", integrate.f, "Amplitude f(x) (real part)");
    c_int->add_option("--f-imag", integrate.f_imag, "Imaginary part of f(x)");
    c_int->add_option("--g", integrate.g, "Phase g(x)");
    c_int->add_option("--a", integrate.a, "Lower limit");
    c_int->add_option("--b", integrate.b, "Upper limit");
    c_int->add_option("--kernel", integrate.kernel, "exp, cos or sin")
        ->check(CLI::IsMember({"exp", "cos", "sin"}))
        ->capture_default_str();
    c_int->add_option("--paper-integral", integrate.paper, "Catalog integral id (I1..I9, I21, I22)");
    c_int->add_option("--param", integrate.params, "name=value (repeatable)");
    integrate.solve.add_to(*c_int);
    c_int->footer(kExpressionHelp);

    SweepFlags sweep;
    auto* c_sweep = app.add_subcommand("sweep", "Sweep one parameter over decades and write CSV");
    c_sweep->add_option("--paper-integral", sweep.paper, "Catalog integral id")->required();
    c_sweep->add_option("--sweep", sweep.sweep, "Swept parameter")->capture_default_str();
    c_sweep->add_option("--decades", sweep.decades, "lo:hi exponents of 10")->capture_default_str();
    c_sweep->add_option("--count", sweep.count, "Samples per grid point")->capture_default_str();
    c_sweep->add_option("--grid-param", sweep.grid, "name=v1,v2,... (repeatable, cartesian product)");
    c_sweep->add_option("--param", sweep.params, "name=value (repeatable)");
    c_sweep->add_option("--out", sweep.out, "Output path, - for stdout")->capture_default_str();
    c_sweep->add_flag("--random", sweep.random, "Log-uniform random samples instead of an even grid");
    c_sweep->add_option("--seed", sweep.seed, "RNG seed for --random")->capture_default_str();
    c_sweep->add_option("--threads", sweep.threads, "Worker threads")->check(CLI::PositiveNumber)->capture_default_str();
    c_sweep->add_flag("--no-timing", sweep.no_timing, "Leave the seconds column empty");
    sweep.solve.add_to(*c_sweep);

    CompareFlags compare;
    auto* c_cmp = app.add_subcommand("compare", "Compare with adaptive Gauss-Legendre per range and write CSV");
    c_cmp->add_option("--paper-integral", compare.paper, "Catalog integral id")->required();
    c_cmp->add_option("--sweep", compare.sweep, "Sampled parameter")->capture_default_str();
    c_cmp->add_option("--ranges", compare.ranges, "lo:hi,lo:hi,...")->required();
    c_cmp->add_option("--samples", compare.samples, "Samples per range")->capture_default_str();
    c_cmp->add_option("--oracle-tol", compare.oracle_tol, "Gauss-Legendre tolerance")->capture_default_str();
    c_cmp->add_option("--max-oracle-lambda", compare.max_oracle_lambda, "Skip the oracle above this value")
        ->capture_default_str();
    c_cmp->add_option("--param", compare.params, "name=value (repeatable)");
    c_cmp->add_option("--seed", compare.seed, "RNG seed")->capture_default_str();
    c_cmp->add_option("--out", compare.out, "Output path, - for stdout")->capture_default_str();
    c_cmp->add_option("--threads", compare.threads, "Worker threads")->check(CLI::PositiveNumber)->capture_default_str();
    c_cmp->add_flag("--no-timing", compare.no_timing, "Leave the timing columns empty");
    compare.solve.add_to(*c_cmp);

    std::string filter;
    std::string fault;
    auto* c_self = app.add_subcommand("selftest", "Run the invariant checks");
    c_self->add_option("--filter", filter, "Only this module")->check(CLI::IsMember(selftest_modules()));
    c_self->add_option("--inject-fault", fault)->group("");

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? 0 : 2;
    }

    try {
        if (c_int->parsed()) return cmd_integrate(integrate, out);
        if (c_sweep->parsed()) return cmd_sweep(sweep, out);
        if (c_cmp->parsed()) return cmd_compare(compare, out);
        return cmd_selftest(filter, fault, out);
    } catch (const UsageError& e) {
        err << "error: " << e.what() << '\n';
        return 2;
    } catch (const ParseError& e) {
        err << "error: expression: " << e.what() << '\n';
        return 2;
    } catch (const std::invalid_argument& e) {
        err << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return 1;
    }
}

}  // namespace levinquad
