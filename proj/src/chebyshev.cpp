#include "levinquad/chebyshev.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>

namespace levinquad {

std::vector<double> RealMatrix::apply(std::span<const double> x) const {
    std::vector<double> y(rows_, 0.0);
    for (std::size_t i = 0; i < rows_; ++i) {
        double s = 0.0;
        for (std::size_t j = 0; j < cols_; ++j) s += (*this)(i, j) * x[j];
        y[i] = s;
    }
    return y;
}

std::vector<std::complex<double>> RealMatrix::apply(std::span<const std::complex<double>> x) const {
    std::vector<std::complex<double>> y(rows_);
    for (std::size_t i = 0; i < rows_; ++i) {
        std::complex<double> s = 0.0;
        for (std::size_t j = 0; j < cols_; ++j) s += (*this)(i, j) * x[j];
        y[i] = s;
    }
    return y;
}

double RealMatrix::spectral_norm() const {
    if (rows_ == 0 || cols_ == 0) return 0.0;
    std::vector<double> v(cols_, 1.0);
    // Deterministic, non-symmetric start so odd/even modes are both present.
    for (std::size_t j = 0; j < cols_; ++j) v[j] += 0.1 * static_cast<double>(j);
    double lambda = 0.0;
    for (int iter = 0; iter < 500; ++iter) {
        double nv = 0.0;
        for (double t : v) nv += t * t;
        nv = std::sqrt(nv);
        if (nv == 0.0) return 0.0;
        for (double& t : v) t /= nv;
        auto w = apply(std::span<const double>(v));
        std::vector<double> z(cols_, 0.0);
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t j = 0; j < cols_; ++j) z[j] += (*this)(i, j) * w[i];
        double next = 0.0;
        for (std::size_t j = 0; j < cols_; ++j) next += z[j] * v[j];
        v = std::move(z);
        if (std::abs(next - lambda) <= 1e-15 * next) {
            lambda = next;
            break;
        }
        lambda = next;
    }
    return std::sqrt(lambda);
}

std::vector<double> cheb_nodes(std::size_t k) {
    if (k < 2) throw std::invalid_argument("cheb_nodes: k must be at least 2");
    const double n = static_cast<double>(k - 1);
    std::vector<double> nodes(k);
    // sin form of cos(pi (k-1-j)/(k-1)): odd in the index offset, so the grid
    // is exactly antisymmetric and the middle node is exactly zero.
    for (std::size_t j = 0; j < k; ++j) {
        const double offset = 2.0 * static_cast<double>(j) - n;
        nodes[j] = std::sin(std::numbers::pi * offset / (2.0 * n));
    }
    nodes.front() = -1.0;
    nodes.back() = 1.0;
    return nodes;
}

RealMatrix diff_matrix(std::size_t k) {
    if (k < 2) throw std::invalid_argument("diff_matrix: k must be at least 2");
    const double n = static_cast<double>(k - 1);
    const double pi = std::numbers::pi;
    auto weight = [k](std::size_t i) { return (i == 0 || i + 1 == k) ? 2.0 : 1.0; };

    RealMatrix d(k, k);
    for (std::size_t i = 0; i < k; ++i) {
        std::vector<double> offdiag;
        offdiag.reserve(k - 1);
        for (std::size_t j = 0; j < k; ++j) {
            if (i == j) continue;
            // x_i - x_j with x_l = cos(theta_l), theta_l = pi (k-1-l)/(k-1).
            const double sum_angle = pi * (2.0 * n - static_cast<double>(i + j)) / (2.0 * n);
            const double diff_angle =
                pi * (static_cast<double>(j) - static_cast<double>(i)) / (2.0 * n);
            const double dx = -2.0 * std::sin(sum_angle) * std::sin(diff_angle);
            const double sign = ((i + j) % 2 == 0) ? 1.0 : -1.0;
            d(i, j) = weight(i) / weight(j) * sign / dx;
            offdiag.push_back(d(i, j));
        }
        // Negative-sum diagonal; smallest magnitudes first.
        std::sort(offdiag.begin(), offdiag.end(),
                  [](double p, double q) { return std::abs(p) < std::abs(q); });
        double s = 0.0;
        for (double v : offdiag) s += v;
        d(i, i) = -s;
    }
    return d;
}

ChebGrid make_cheb_grid(std::size_t k) {
    return ChebGrid{k, cheb_nodes(k), diff_matrix(k)};
}

const ChebGrid& cheb_grid(std::size_t k) {
    static std::mutex mutex;
    static std::map<std::size_t, std::unique_ptr<const ChebGrid>> cache;
    std::lock_guard lock(mutex);
    auto it = cache.find(k);
    if (it == cache.end()) {
        it = cache.emplace(k, std::make_unique<const ChebGrid>(make_cheb_grid(k))).first;
    }
    return *it->second;
}

MappedGrid map_to_interval(const ChebGrid& grid, double a, double b) {
    if (!std::isfinite(a) || !std::isfinite(b))
        throw std::invalid_argument("map_to_interval: endpoints must be finite");
    if (!(a < b)) throw std::invalid_argument("map_to_interval: requires a < b");

    MappedGrid out;
    out.nodes.resize(grid.k);
    for (std::size_t j = 0; j < grid.k; ++j) out.nodes[j] = mapped_node(grid, j, a, b);
    const double scale = 2.0 / (b - a);
    out.diff = RealMatrix(grid.k, grid.k);
    for (std::size_t i = 0; i < grid.k; ++i)
        for (std::size_t j = 0; j < grid.k; ++j) out.diff(i, j) = grid.diff(i, j) * scale;
    return out;
}

template <class T>
std::vector<T> cheb_coeffs(std::span<const T> values) {
    const std::size_t k = values.size();
    if (k < 2) throw std::invalid_argument("cheb_coeffs: need at least 2 samples");
    const std::size_t period = 2 * (k - 1);
    const double pi = std::numbers::pi;

    std::vector<T> coeffs(k, T{});
    for (std::size_t n = 0; n < k; ++n) {
        T s{};
        for (std::size_t j = 0; j < k; ++j) {
            // T_n(x_j) = cos(n theta_j), theta_j = pi (k-1-j)/(k-1); reduce n (k-1-j)
            // modulo the period before taking the cosine.
            const std::size_t m = (n * (k - 1 - j)) % period;
            const double tn = std::cos(pi * static_cast<double>(m) / static_cast<double>(k - 1));
            const double half = (j == 0 || j + 1 == k) ? 0.5 : 1.0;
            s += half * tn * values[j];
        }
        const double scale = (n == 0 || n + 1 == k) ? 1.0 : 2.0;
        coeffs[n] = s * (scale / static_cast<double>(k - 1));
    }
    return coeffs;
}

template <class T>
T cheb_eval(std::span<const T> coeffs, double x) {
    T b1{};
    T b2{};
    for (std::size_t n = coeffs.size(); n-- > 1;) {
        T b0 = coeffs[n] + 2.0 * x * b1 - b2;
        b2 = b1;
        b1 = b0;
    }
    if (coeffs.empty()) return T{};
    return coeffs[0] + x * b1 - b2;
}

template std::vector<double> cheb_coeffs<double>(std::span<const double>);
template std::vector<std::complex<double>> cheb_coeffs<std::complex<double>>(
    std::span<const std::complex<double>>);
template double cheb_eval<double>(std::span<const double>, double);
template std::complex<double> cheb_eval<std::complex<double>>(
    std::span<const std::complex<double>>, double);

}  // namespace levinquad
