#include "levinquad/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace levinquad {

ComplexMatrix ComplexMatrix::identity(std::size_t n) {
    ComplexMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
}

std::vector<cdouble> ComplexMatrix::apply(std::span<const cdouble> x) const {
    std::vector<cdouble> y(rows_);
    for (std::size_t i = 0; i < rows_; ++i) {
        cdouble s = 0.0;
        for (std::size_t j = 0; j < cols_; ++j) s += (*this)(i, j) * x[j];
        y[i] = s;
    }
    return y;
}

ComplexMatrix ComplexMatrix::adjoint() const {
    ComplexMatrix t(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t j = 0; j < cols_; ++j) t(j, i) = std::conj((*this)(i, j));
    return t;
}

double ComplexMatrix::frobenius_norm() const {
    double s = 0.0;
    for (const auto& z : data_) s += std::norm(z);
    return std::sqrt(s);
}

ComplexMatrix operator*(const ComplexMatrix& lhs, const ComplexMatrix& rhs) {
    if (lhs.cols_ != rhs.rows_) throw std::invalid_argument("matrix product: shape mismatch");
    ComplexMatrix out(lhs.rows_, rhs.cols_);
    for (std::size_t i = 0; i < lhs.rows_; ++i)
        for (std::size_t l = 0; l < lhs.cols_; ++l) {
            const cdouble a = lhs(i, l);
            for (std::size_t j = 0; j < rhs.cols_; ++j) out(i, j) += a * rhs(l, j);
        }
    return out;
}

ComplexMatrix operator-(const ComplexMatrix& lhs, const ComplexMatrix& rhs) {
    if (lhs.rows_ != rhs.rows_ || lhs.cols_ != rhs.cols_)
        throw std::invalid_argument("matrix difference: shape mismatch");
    ComplexMatrix out(lhs.rows_, lhs.cols_);
    for (std::size_t i = 0; i < lhs.data_.size(); ++i) out.data_[i] = lhs.data_[i] - rhs.data_[i];
    return out;
}

double norm2(std::span<const cdouble> x) {
    double s = 0.0;
    for (const auto& z : x) s += std::norm(z);
    return std::sqrt(s);
}

double op_norm_estimate(const ComplexMatrix& a) { return a.frobenius_norm(); }

namespace {

void require_square(const ComplexMatrix& a, std::span<const cdouble> y) {
    if (a.rows() != a.cols()) throw std::invalid_argument("expected a square matrix");
    if (y.size() != a.rows()) throw std::invalid_argument("right-hand side has wrong length");
}

// Extends columns of u whose singular value is zero to an orthonormal basis.
void complete_basis(ComplexMatrix& u, const std::vector<bool>& valid) {
    const std::size_t n = u.rows();
    std::size_t trial = 0;
    for (std::size_t j = 0; j < n; ++j) {
        if (valid[j]) continue;
        for (; trial < n; ++trial) {
            std::vector<cdouble> w(n, 0.0);
            w[trial] = 1.0;
            // Two passes of Gram-Schmidt against every basis column already fixed.
            for (int pass = 0; pass < 2; ++pass)
                for (std::size_t c = 0; c < n; ++c) {
                    if (c == j || (!valid[c] && c > j)) continue;
                    cdouble dot = 0.0;
                    for (std::size_t i = 0; i < n; ++i) dot += std::conj(u(i, c)) * w[i];
                    for (std::size_t i = 0; i < n; ++i) w[i] -= dot * u(i, c);
                }
            const double nw = norm2(w);
            if (nw > 0.5) {
                for (std::size_t i = 0; i < n; ++i) u(i, j) = w[i] / nw;
                ++trial;
                break;
            }
        }
    }
}

}  // namespace

SvdFactors svd(const ComplexMatrix& a) {
    if (a.rows() != a.cols()) throw std::invalid_argument("svd: expected a square matrix");
    const std::size_t n = a.rows();
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            if (!std::isfinite(a(i, j).real()) || !std::isfinite(a(i, j).imag()))
                throw LinalgError("svd: non-finite matrix entry");

    ComplexMatrix w = a;
    ComplexMatrix v = ComplexMatrix::identity(n);
    constexpr int kMaxSweeps = 30;

    bool converged = false;
    for (int sweep = 0; sweep < kMaxSweeps && !converged; ++sweep) {
        converged = true;
        for (std::size_t p = 0; p + 1 < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                double alpha = 0.0;
                double beta = 0.0;
                cdouble gamma = 0.0;
                for (std::size_t i = 0; i < n; ++i) {
                    alpha += std::norm(w(i, p));
                    beta += std::norm(w(i, q));
                    gamma += std::conj(w(i, p)) * w(i, q);
                }
                const double g = std::abs(gamma);
                if (g == 0.0 || g <= kMachineEps * std::sqrt(alpha) * std::sqrt(beta)) continue;
                converged = false;

                const cdouble phase = gamma / g;  // e^{i phi}
                const double zeta = (beta - alpha) / (2.0 * g);
                const double t = (zeta >= 0.0 ? 1.0 : -1.0) / (std::abs(zeta) + std::hypot(1.0, zeta));
                const double c = 1.0 / std::hypot(1.0, t);
                const double s = c * t;
                const cdouble rot = std::conj(phase);  // e^{-i phi}

                for (std::size_t i = 0; i < n; ++i) {
                    const cdouble wp = w(i, p);
                    const cdouble wq = rot * w(i, q);
                    w(i, p) = c * wp - s * wq;
                    w(i, q) = s * wp + c * wq;
                    const cdouble vp = v(i, p);
                    const cdouble vq = rot * v(i, q);
                    v(i, p) = c * vp - s * vq;
                    v(i, q) = s * vp + c * vq;
                }
            }
        }
    }
    if (!converged) throw LinalgError("svd: Jacobi sweeps did not converge");

    std::vector<double> sigma(n);
    for (std::size_t j = 0; j < n; ++j) {
        double s = 0.0;
        for (std::size_t i = 0; i < n; ++i) s += std::norm(w(i, j));
        sigma[j] = std::sqrt(s);
    }

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t l, std::size_t r) { return sigma[l] > sigma[r]; });

    SvdFactors out{ComplexMatrix(n, n), std::vector<double>(n), ComplexMatrix(n, n)};
    std::vector<bool> valid(n, true);
    for (std::size_t j = 0; j < n; ++j) {
        const std::size_t src = order[j];
        out.sigma[j] = sigma[src];
        for (std::size_t i = 0; i < n; ++i) out.v(i, j) = v(i, src);
        if (sigma[src] > 0.0) {
            for (std::size_t i = 0; i < n; ++i) out.u(i, j) = w(i, src) / sigma[src];
        } else {
            valid[j] = false;
        }
    }
    if (std::find(valid.begin(), valid.end(), false) != valid.end()) complete_basis(out.u, valid);
    return out;
}

LinearSolve tsvd_solve(const SvdFactors& factors, std::span<const cdouble> y, double threshold) {
    if (!(threshold > 0.0)) throw std::invalid_argument("tsvd_solve: threshold must be positive");
    const std::size_t n = factors.sigma.size();
    if (y.size() != n) throw std::invalid_argument("tsvd_solve: right-hand side has wrong length");

    LinearSolve out{std::vector<cdouble>(n, 0.0), TsvdSolveReport{0, threshold, 0.0}};
    std::size_t rank = 0;
    while (rank < n && factors.sigma[rank] >= threshold) ++rank;
    for (std::size_t l = 0; l < rank; ++l) {
        cdouble coef = 0.0;
        for (std::size_t i = 0; i < n; ++i) coef += std::conj(factors.u(i, l)) * y[i];
        coef /= factors.sigma[l];
        for (std::size_t i = 0; i < n; ++i) out.x[i] += coef * factors.v(i, l);
    }
    out.report.rank_used = rank;
    out.report.solution_norm = norm2(out.x);
    return out;
}

LinearSolve tsvd_solve(const ComplexMatrix& a, std::span<const cdouble> y, double threshold) {
    require_square(a, y);
    return tsvd_solve(svd(a), y, threshold);
}

namespace {

struct Householder {
    std::vector<cdouble> v;  // reflector I - tau v v^*, v[0] = 1
    cdouble tau = 0.0;
};

// Reflector H with H x = beta e_1, |beta| = ||x||. Returns beta.
cdouble make_householder(std::span<const cdouble> x, Householder& h) {
    const std::size_t m = x.size();
    h.v.assign(m, 0.0);
    const double xnorm = norm2(x);
    if (xnorm == 0.0) {
        h.tau = 0.0;
        h.v[0] = 1.0;
        return 0.0;
    }
    const double a0 = std::abs(x[0]);
    const cdouble phase = a0 == 0.0 ? cdouble(1.0) : x[0] / a0;
    const cdouble beta = -phase * xnorm;
    const cdouble v0 = x[0] - beta;
    h.v[0] = 1.0;
    for (std::size_t i = 1; i < m; ++i) h.v[i] = x[i] / v0;
    // tau = (beta - x0)/beta keeps H unitary with v[0] = 1.
    h.tau = (beta - x[0]) / beta;
    return beta;
}

// Applies H^* = I - conj(tau) v v^* to the given column slice.
void apply_householder_adjoint(const Householder& h, std::span<cdouble> col) {
    cdouble dot = 0.0;
    for (std::size_t i = 0; i < col.size(); ++i) dot += std::conj(h.v[i]) * col[i];
    const cdouble scale = std::conj(h.tau) * dot;
    for (std::size_t i = 0; i < col.size(); ++i) col[i] -= scale * h.v[i];
}

template <class ThresholdFn>
LinearSolve qr_solve_impl(const ComplexMatrix& a, std::span<const cdouble> y, ThresholdFn&& threshold_of) {
    require_square(a, y);
    const std::size_t n = a.rows();
    for (std::size_t i = 0; i < n; ++i) {
        if (!std::isfinite(y[i].real()) || !std::isfinite(y[i].imag()))
            throw LinalgError("qr_solve_pivoted: non-finite right-hand side");
        for (std::size_t j = 0; j < n; ++j)
            if (!std::isfinite(a(i, j).real()) || !std::isfinite(a(i, j).imag()))
                throw LinalgError("qr_solve_pivoted: non-finite matrix entry");
    }

    // Column-major working copy so Householder updates touch contiguous memory.
    std::vector<std::vector<cdouble>> cols(n, std::vector<cdouble>(n));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) cols[j][i] = a(i, j);
    std::vector<cdouble> rhs(y.begin(), y.end());
    std::vector<std::size_t> perm(n);
    std::iota(perm.begin(), perm.end(), std::size_t{0});

    Householder h;
    std::vector<cdouble> diag(n, 0.0);
    for (std::size_t j = 0; j < n; ++j) {
        std::size_t best = j;
        double best_norm = -1.0;
        for (std::size_t c = j; c < n; ++c) {
            double s = 0.0;
            for (std::size_t i = j; i < n; ++i) s += std::norm(cols[c][i]);
            if (s > best_norm) {
                best_norm = s;
                best = c;
            }
        }
        std::swap(cols[j], cols[best]);
        std::swap(perm[j], perm[best]);

        const std::span<const cdouble> x(cols[j].data() + j, n - j);
        const cdouble beta = make_householder(x, h);
        cols[j][j] = beta;
        for (std::size_t i = j + 1; i < n; ++i) cols[j][i] = 0.0;
        diag[j] = beta;
        for (std::size_t c = j + 1; c < n; ++c)
            apply_householder_adjoint(h, std::span<cdouble>(cols[c].data() + j, n - j));
        apply_householder_adjoint(h, std::span<cdouble>(rhs.data() + j, n - j));
    }

    const double threshold = threshold_of(std::abs(diag[0]));
    LinearSolve out{std::vector<cdouble>(n, 0.0), TsvdSolveReport{0, threshold, 0.0}};
    std::size_t rank = 0;
    while (rank < n && std::abs(diag[rank]) >= threshold) ++rank;
    out.report.rank_used = rank;
    if (rank == 0) return out;

    std::vector<cdouble> z(n, 0.0);
    if (rank == n) {
        for (std::size_t i = n; i-- > 0;) {
            cdouble s = rhs[i];
            for (std::size_t c = i + 1; c < n; ++c) s -= cols[c][i] * z[c];
            z[i] = s / cols[i][i];
        }
    } else {
        // Retained rows R1 = [R11 R12] (rank x n). Factor R1^* = Z [T; 0] with
        // Householder reflectors so that R1 = [T^* 0] Z^*; the minimum-norm
        // solution of R1 z = c is z = Z [T^{-*} c; 0].
        std::vector<std::vector<cdouble>> rt(rank, std::vector<cdouble>(n));  // columns of R1^*
        for (std::size_t r = 0; r < rank; ++r)
            for (std::size_t c = 0; c < n; ++c) rt[r][c] = std::conj(cols[c][r]);
        std::vector<Householder> reflectors(rank);
        for (std::size_t r = 0; r < rank; ++r) {
            const std::span<const cdouble> x(rt[r].data() + r, n - r);
            const cdouble beta = make_householder(x, reflectors[r]);
            rt[r][r] = beta;
            for (std::size_t i = r + 1; i < n; ++i) rt[r][i] = 0.0;
            for (std::size_t c = r + 1; c < rank; ++c)
                apply_householder_adjoint(reflectors[r], std::span<cdouble>(rt[c].data() + r, n - r));
        }
        // T^* w = c, T^* lower triangular with entries conj(T(c, r)) = conj(rt[r][c]).
        std::vector<cdouble> w(n, 0.0);
        for (std::size_t r = 0; r < rank; ++r) {
            cdouble s = rhs[r];
            for (std::size_t c = 0; c < r; ++c) s -= std::conj(rt[r][c]) * w[c];
            w[r] = s / std::conj(rt[r][r]);
        }
        // z = Z w = H_0 H_1 ... H_{rank-1} w.
        z = w;
        for (std::size_t r = rank; r-- > 0;) {
            const Householder& hr = reflectors[r];
            std::span<cdouble> tail(z.data() + r, n - r);
            cdouble dot = 0.0;
            for (std::size_t i = 0; i < tail.size(); ++i) dot += std::conj(hr.v[i]) * tail[i];
            const cdouble scale = hr.tau * dot;
            for (std::size_t i = 0; i < tail.size(); ++i) tail[i] -= scale * hr.v[i];
        }
    }
    for (std::size_t j = 0; j < n; ++j) out.x[perm[j]] = z[j];
    out.report.solution_norm = norm2(out.x);
    return out;
}

}  // namespace

LinearSolve qr_solve_pivoted(const ComplexMatrix& a, std::span<const cdouble> y, double threshold) {
    if (!(threshold > 0.0)) throw std::invalid_argument("qr_solve_pivoted: threshold must be positive");
    return qr_solve_impl(a, y, [threshold](double) { return threshold; });
}

LinearSolve qr_solve_pivoted_relative(const ComplexMatrix& a, std::span<const cdouble> y, double relative) {
    if (!(relative > 0.0)) throw std::invalid_argument("qr_solve_pivoted: threshold must be positive");
    return qr_solve_impl(a, y, [relative](double r11) {
        // A zero matrix has r11 = 0; any positive threshold then truncates everything.
        return r11 > 0.0 ? relative * r11 : std::numeric_limits<double>::min();
    });
}

}  // namespace levinquad
