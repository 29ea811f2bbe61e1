#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>
#include <thread>

#include "levinquad/chebyshev.hpp"
#include "levinquad/selftest.hpp"

using namespace levinquad;

namespace {

double max_abs_diff(const std::vector<double>& a, const std::vector<double>& b) {
    double worst = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) worst = std::max(worst, std::abs(a[i] - b[i]));
    return worst;
}

std::vector<double> samples(const std::vector<double>& x, double (*fn)(double)) {
    std::vector<double> out;
    for (double v : x) out.push_back(fn(v));
    return out;
}

}  // namespace

TEST_CASE("cheb_nodes small orders") {
    CHECK(cheb_nodes(2) == std::vector<double>{-1.0, 1.0});
    const auto n3 = cheb_nodes(3);
    CHECK(n3[0] == -1.0);
    CHECK(n3[1] == 0.0);
    CHECK(n3[2] == 1.0);
    const auto n5 = cheb_nodes(5);
    CHECK(n5[1] == doctest::Approx(-1.0 / std::sqrt(2.0)).epsilon(1e-15));
    CHECK(n5[2] == 0.0);
    CHECK(n5[3] == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-15));
}

TEST_CASE("cheb_nodes match the cosine formula and are antisymmetric") {
    for (std::size_t k = 2; k <= 40; ++k) {
        const auto x = cheb_nodes(k);
        REQUIRE(x.size() == k);
        CHECK(x.front() == -1.0);
        CHECK(x.back() == 1.0);
        for (std::size_t j = 0; j < k; ++j) {
            const double expected = std::cos(std::numbers::pi * static_cast<double>(k - 1 - j) / static_cast<double>(k - 1));
            CHECK(std::abs(x[j] - expected) <= 5e-16);
            CHECK(x[j] == -x[k - 1 - j]);
            if (j > 0) CHECK(x[j] > x[j - 1]);
        }
    }
}

TEST_CASE("cheb_nodes and diff_matrix reject k < 2") {
    CHECK_THROWS_AS((void)cheb_nodes(1), std::invalid_argument);
    CHECK_THROWS_AS((void)cheb_nodes(0), std::invalid_argument);
    CHECK_THROWS_AS((void)diff_matrix(1), std::invalid_argument);
}

TEST_CASE("diff_matrix k = 2 differentiates x") {
    const RealMatrix d = diff_matrix(2);
    const std::vector<double> x{-1.0, 1.0};
    const auto dx = d.apply(std::span<const double>(x));
    CHECK(dx[0] == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(dx[1] == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("diff_matrix annihilates constants") {
    for (std::size_t k = 2; k <= 24; ++k) {
        const std::vector<double> ones(k, 1.0);
        for (double v : diff_matrix(k).apply(std::span<const double>(ones))) CHECK(std::abs(v) <= 1e-13);
    }
}

TEST_CASE("diff_matrix k = 12 on x^2 gives 2x") {
    const ChebGrid& g = cheb_grid(12);
    const auto sq = samples(g.nodes, [](double x) { return x * x; });
    const auto twice = samples(g.nodes, [](double x) { return 2.0 * x; });
    CHECK(max_abs_diff(g.diff.apply(std::span<const double>(sq)), twice) <= 1e-12);
}

TEST_CASE("diff_matrix exact on monomials of degree < k") {
    for (std::size_t k : {3u, 6u, 12u, 16u, 20u}) {
        const ChebGrid g = make_cheb_grid(k);
        for (std::size_t m = 1; m < k; ++m) {
            std::vector<double> v(k);
            std::vector<double> dv(k);
            for (std::size_t j = 0; j < k; ++j) {
                v[j] = std::pow(g.nodes[j], static_cast<double>(m));
                dv[j] = static_cast<double>(m) * std::pow(g.nodes[j], static_cast<double>(m - 1));
            }
            CHECK(max_abs_diff(g.diff.apply(std::span<const double>(v)), dv) <= 1e-11 * static_cast<double>(m));
        }
    }
}

TEST_CASE("diff_matrix 2-norm grows like k^2 and matches the pinned value") {
    const double n12 = diff_matrix(12).spectral_norm();
    CHECK(n12 >= 50.0);
    CHECK(n12 <= 500.0);
    CHECK(n12 == doctest::Approx(kDiffMatrix12Norm).epsilon(1e-10));
    CHECK(diff_matrix(24).spectral_norm() > 3.0 * n12);
}

TEST_CASE("cheb_coeffs of T0 and T2") {
    for (std::size_t k : {4u, 7u, 12u}) {
        const auto x = cheb_nodes(k);
        const std::vector<double> one(k, 1.0);
        const auto a = cheb_coeffs(std::span<const double>(one));
        CHECK(a[0] == doctest::Approx(1.0).epsilon(1e-15));
        for (std::size_t n = 1; n < k; ++n) CHECK(std::abs(a[n]) <= 1e-15);

        const auto t2 = samples(x, [](double v) { return 2.0 * v * v - 1.0; });
        const auto b = cheb_coeffs(std::span<const double>(t2));
        for (std::size_t n = 0; n < k; ++n) CHECK(std::abs(b[n] - (n == 2 ? 1.0 : 0.0)) <= 1e-14);
    }
}

TEST_CASE("cheb_coeffs aliasing") {
    const std::size_t k = 12;
    const auto x = cheb_nodes(k);
    for (std::size_t n = 0; n < k; ++n) {
        std::vector<double> v(k);
        const double degree = static_cast<double>(n + 2 * (k - 1));
        for (std::size_t j = 0; j < k; ++j) v[j] = std::cos(degree * std::acos(x[j]));
        const auto a = cheb_coeffs(std::span<const double>(v));
        CHECK(a[n] == doctest::Approx(1.0).epsilon(1e-13));
    }
}

TEST_CASE("cheb_eval of T1 and T2") {
    const std::vector<double> t1{0.0, 1.0, 0.0, 0.0};
    const std::vector<double> t2{0.0, 0.0, 1.0, 0.0};
    CHECK(cheb_eval(std::span<const double>(t1), 0.3) == doctest::Approx(0.3).epsilon(1e-15));
    CHECK(cheb_eval(std::span<const double>(t2), 0.5) == doctest::Approx(-0.5).epsilon(1e-15));
}

TEST_CASE("cheb_eval reproduces samples at the nodes") {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (std::size_t k : {2u, 5u, 12u, 17u}) {
        const auto x = cheb_nodes(k);
        std::vector<std::complex<double>> v(k);
        for (auto& s : v) s = {u(rng), u(rng)};
        const auto a = cheb_coeffs(std::span<const std::complex<double>>(v));
        for (std::size_t j = 0; j < k; ++j)
            CHECK(std::abs(cheb_eval(std::span<const std::complex<double>>(a), x[j]) - v[j]) <= 1e-13 * std::abs(v[j]) + 1e-15);
    }
}

TEST_CASE("map_to_interval") {
    const ChebGrid& g = cheb_grid(12);

    SUBCASE("[-1, 1] is the identity") {
        const MappedGrid m = map_to_interval(g, -1.0, 1.0);
        for (std::size_t j = 0; j < 12; ++j) CHECK(std::abs(m.nodes[j] - g.nodes[j]) <= 2.3e-16);
        for (std::size_t i = 0; i < 12; ++i)
            for (std::size_t j = 0; j < 12; ++j) CHECK(m.diff(i, j) == g.diff(i, j));
    }
    SUBCASE("[0, 2] with k = 2") {
        const MappedGrid m = map_to_interval(cheb_grid(2), 0.0, 2.0);
        CHECK(m.nodes == std::vector<double>{0.0, 2.0});
        for (std::size_t i = 0; i < 2; ++i)
            for (std::size_t j = 0; j < 2; ++j) CHECK(m.diff(i, j) == cheb_grid(2).diff(i, j));
    }
    SUBCASE("[0, 1] scales by 2 and differentiates x^2") {
        const MappedGrid m = map_to_interval(g, 0.0, 1.0);
        CHECK(m.nodes.front() == 0.0);
        CHECK(m.nodes.back() == 1.0);
        CHECK(m.diff(3, 5) == doctest::Approx(2.0 * g.diff(3, 5)));
        const auto sq = samples(m.nodes, [](double x) { return x * x; });
        const auto twice = samples(m.nodes, [](double x) { return 2.0 * x; });
        CHECK(max_abs_diff(m.diff.apply(std::span<const double>(sq)), twice) <= 1e-12);
    }
    SUBCASE("endpoints are exact on awkward intervals") {
        const MappedGrid m = map_to_interval(g, 0.1, 0.7);
        CHECK(m.nodes.front() == 0.1);
        CHECK(m.nodes.back() == 0.7);
        CHECK(mapped_node(g, 0, 0.1, 0.7) == 0.1);
        CHECK(mapped_node(g, 11, 0.1, 0.7) == 0.7);
    }
    SUBCASE("bad endpoints") {
        CHECK_THROWS_AS((void)map_to_interval(g, 1.0, 1.0), std::invalid_argument);
        CHECK_THROWS_AS((void)map_to_interval(g, 2.0, 1.0), std::invalid_argument);
        CHECK_THROWS_AS((void)map_to_interval(g, 0.0, INFINITY), std::invalid_argument);
        CHECK_THROWS_AS((void)map_to_interval(g, NAN, 1.0), std::invalid_argument);
    }
}

TEST_CASE("cheb_grid cache is shared and thread safe") {
    std::vector<const ChebGrid*> seen(8, nullptr);
    {
        std::vector<std::jthread> pool;
        for (std::size_t t = 0; t < seen.size(); ++t) pool.emplace_back([&seen, t] { seen[t] = &cheb_grid(29); });
    }
    for (const auto* p : seen) CHECK(p == seen[0]);
    CHECK(seen[0]->k == 29);
}
