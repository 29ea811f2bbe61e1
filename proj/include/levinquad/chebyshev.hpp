#pragma once

// Chebyshev extremal (Lobatto) grids, interpolation coefficients and
// spectral differentiation on [-1, 1] and its affine images.

#include <complex>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <vector>

namespace levinquad {

/// Dense row-major real matrix. Only what the collocation code needs.
class RealMatrix {
public:
    RealMatrix() = default;
    RealMatrix(std::size_t rows, std::size_t cols, double fill = 0.0)
        : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

    [[nodiscard]] std::size_t rows() const noexcept { return rows_; }
    [[nodiscard]] std::size_t cols() const noexcept { return cols_; }

    double& operator()(std::size_t i, std::size_t j) noexcept { return data_[i * cols_ + j]; }
    double operator()(std::size_t i, std::size_t j) const noexcept { return data_[i * cols_ + j]; }

    [[nodiscard]] std::span<const double> row(std::size_t i) const noexcept {
        return {data_.data() + i * cols_, cols_};
    }

    /// y = M x
    [[nodiscard]] std::vector<double> apply(std::span<const double> x) const;
    [[nodiscard]] std::vector<std::complex<double>> apply(std::span<const std::complex<double>> x) const;

    /// Largest singular value, by power iteration on M^T M.
    [[nodiscard]] double spectral_norm() const;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<double> data_;
};

/// Precomputed k-point extremal grid on [-1, 1] with its differentiation matrix.
///
/// nodes are ascending with nodes.front() == -1 and nodes.back() == 1 exactly;
/// diff maps samples of a degree < k polynomial at the nodes to samples of
/// its derivative.
struct ChebGrid {
    std::size_t k = 0;
    std::vector<double> nodes;
    RealMatrix diff;
};

/// Grid nodes and differentiation matrix pulled back to [a, b].
struct MappedGrid {
    std::vector<double> nodes;
    RealMatrix diff;
};

/// cos(pi (k - j) / (k - 1)), j = 1..k, ascending. Throws for k < 2.
[[nodiscard]] std::vector<double> cheb_nodes(std::size_t k);

/// k x k spectral differentiation matrix at cheb_nodes(k). Throws for k < 2.
[[nodiscard]] RealMatrix diff_matrix(std::size_t k);

/// Builds a fresh grid. Prefer cheb_grid() which caches.
[[nodiscard]] ChebGrid make_cheb_grid(std::size_t k);

/// Shared, lazily built grid for order k. Safe under concurrent first use.
[[nodiscard]] const ChebGrid& cheb_grid(std::size_t k);

/// Affine pullback of the grid to [a, b]. The first and last mapped nodes
/// equal a and b exactly. Throws std::invalid_argument unless a < b, both finite.
[[nodiscard]] MappedGrid map_to_interval(const ChebGrid& grid, double a, double b);

/// Mapped node j of grid on [a, b], with the endpoints snapped to a and b.
[[nodiscard]] inline double mapped_node(const ChebGrid& grid, std::size_t j, double a, double b) {
    if (j == 0) return a;
    if (j + 1 == grid.k) return b;
    return a + (grid.nodes[j] + 1.0) * (0.5 * (b - a));
}

/// Coefficients a_0..a_{k-1} of the degree < k interpolant through samples at
/// the ascending extremal nodes, using the half-weighted endpoint sum.
template <class T>
[[nodiscard]] std::vector<T> cheb_coeffs(std::span<const T> values);

/// Sum a_n T_n(x) by Clenshaw recurrence.
template <class T>
[[nodiscard]] T cheb_eval(std::span<const T> coeffs, double x);

extern template std::vector<double> cheb_coeffs<double>(std::span<const double>);
extern template std::vector<std::complex<double>> cheb_coeffs<std::complex<double>>(
    std::span<const std::complex<double>>);
extern template double cheb_eval<double>(std::span<const double>, double);
extern template std::complex<double> cheb_eval<std::complex<double>>(
    std::span<const std::complex<double>>, double);

}  // namespace levinquad
