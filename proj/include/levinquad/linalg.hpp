#pragma once

// Small dense complex linear algebra for the k x k collocation systems:
// one-sided Jacobi SVD, truncated-SVD solves and a column-pivoted QR solve.

#include <complex>
#include <cstddef>
#include <limits>
#include <span>
#include <stdexcept>
#include <vector>

namespace levinquad {

using cdouble = std::complex<double>;

/// Machine zero for IEEE double.
inline constexpr double kMachineEps = std::numeric_limits<double>::epsilon();

class ComplexMatrix {
public:
    ComplexMatrix() = default;
    ComplexMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {}

    [[nodiscard]] static ComplexMatrix identity(std::size_t n);

    [[nodiscard]] std::size_t rows() const noexcept { return rows_; }
    [[nodiscard]] std::size_t cols() const noexcept { return cols_; }

    cdouble& operator()(std::size_t i, std::size_t j) noexcept { return data_[i * cols_ + j]; }
    const cdouble& operator()(std::size_t i, std::size_t j) const noexcept { return data_[i * cols_ + j]; }

    [[nodiscard]] std::vector<cdouble> apply(std::span<const cdouble> x) const;
    [[nodiscard]] ComplexMatrix adjoint() const;
    [[nodiscard]] double frobenius_norm() const;

    friend ComplexMatrix operator*(const ComplexMatrix& lhs, const ComplexMatrix& rhs);
    friend ComplexMatrix operator-(const ComplexMatrix& lhs, const ComplexMatrix& rhs);

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<cdouble> data_;
};

/// Thrown when an iterative factorization fails to converge.
class LinalgError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A = U diag(sigma) V^*, sigma descending.
struct SvdFactors {
    ComplexMatrix u;
    std::vector<double> sigma;
    ComplexMatrix v;
};

/// rank_used directions were retained; the others fell below threshold.
struct TsvdSolveReport {
    std::size_t rank_used = 0;
    double threshold = 0.0;
    double solution_norm = 0.0;
};

struct LinearSolve {
    std::vector<cdouble> x;
    TsvdSolveReport report;
};

/// One-sided Jacobi SVD of a square matrix (at most 30 sweeps; throws LinalgError).
[[nodiscard]] SvdFactors svd(const ComplexMatrix& a);

/// x = sum over sigma_i >= threshold of (u_i^* y / sigma_i) v_i. Returns
/// x = 0 with rank_used = 0 if no singular value reaches threshold.
[[nodiscard]] LinearSolve tsvd_solve(const SvdFactors& factors, std::span<const cdouble> y, double threshold);
[[nodiscard]] LinearSolve tsvd_solve(const ComplexMatrix& a, std::span<const cdouble> y, double threshold);

/// Householder QR with column pivoting. Columns with |r_jj| >= threshold are
/// retained and the minimum-norm solution on that subspace is returned
/// (complete orthogonal decomposition of the retained rows).
[[nodiscard]] LinearSolve qr_solve_pivoted(const ComplexMatrix& a, std::span<const cdouble> y, double threshold);

/// As qr_solve_pivoted with threshold = relative * |r_11|.
[[nodiscard]] LinearSolve qr_solve_pivoted_relative(const ComplexMatrix& a, std::span<const cdouble> y,
                                                    double relative);

/// Cheap upper bound for ||A||_2: the Frobenius norm, within sqrt(k) of sigma_1.
[[nodiscard]] double op_norm_estimate(const ComplexMatrix& a);

[[nodiscard]] double norm2(std::span<const cdouble> x);

}  // namespace levinquad
