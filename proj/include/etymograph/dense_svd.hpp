#ifndef ETYMOGRAPH_DENSE_SVD_HPP
#define ETYMOGRAPH_DENSE_SVD_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numeric>
#include <stdexcept>
#include <vector>

#include "etymograph/sparse.hpp"

namespace etymograph {

// Full SVD of a small matrix: A = U diag(sigma) Vt with r = min(m, n).
// Row-major storage; u is m x r, vt is r x n.
struct FullSvd {
    std::size_t m = 0;
    std::size_t n = 0;
    std::size_t r = 0;
    std::vector<double> u;
    std::vector<double> sigma;
    std::vector<double> vt;
};

namespace detail {

// One-sided Jacobi on column-major B (rows x cols, rows >= cols assumed
// worthwhile but not required): orthogonalizes the columns of B while
// accumulating the rotations in V. On exit B = U * diag(sigma) column-wise.
inline void one_sided_jacobi(std::vector<double>& b, std::vector<double>& v,
                             std::size_t rows, std::size_t cols) {
    // v starts as cols x cols identity, column-major.
    v.assign(cols * cols, 0.0);
    for (std::size_t j = 0; j < cols; ++j) v[j * cols + j] = 1.0;

    const double tol = 1e-15;
    const int max_sweeps = 100;
    for (int sweep = 0; sweep < max_sweeps; ++sweep) {
        bool rotated = false;
        for (std::size_t p = 0; p + 1 < cols; ++p) {
            for (std::size_t q = p + 1; q < cols; ++q) {
                double* bp = &b[p * rows];
                double* bq = &b[q * rows];
                double alpha = 0.0, beta = 0.0, gamma = 0.0;
                for (std::size_t i = 0; i < rows; ++i) {
                    alpha += bp[i] * bp[i];
                    beta += bq[i] * bq[i];
                    gamma += bp[i] * bq[i];
                }
                if (std::abs(gamma) <= tol * std::sqrt(alpha * beta)) continue;
                rotated = true;
                const double zeta = (beta - alpha) / (2.0 * gamma);
                const double t = (zeta >= 0.0 ? 1.0 : -1.0) /
                                 (std::abs(zeta) + std::sqrt(1.0 + zeta * zeta));
                const double c = 1.0 / std::sqrt(1.0 + t * t);
                const double s = c * t;
                for (std::size_t i = 0; i < rows; ++i) {
                    const double bpi = bp[i];
                    bp[i] = c * bpi - s * bq[i];
                    bq[i] = s * bpi + c * bq[i];
                }
                double* vp = &v[p * cols];
                double* vq = &v[q * cols];
                for (std::size_t i = 0; i < cols; ++i) {
                    const double vpi = vp[i];
                    vp[i] = c * vpi - s * vq[i];
                    vq[i] = s * vpi + c * vq[i];
                }
            }
        }
        if (!rotated) return;
    }
    throw std::runtime_error("one-sided Jacobi failed to converge");
}

}  // namespace detail

// Direct dense SVD, used as an independent test oracle for the randomized
// factorization. Kept free of the randomized path's dense kernels. Guarded
// to small instances.
inline FullSvd dense_svd_oracle(const SparseMatrix& a) {
    if (a.n_rows() * a.n_cols() > 1000000)
        throw std::invalid_argument("dense_svd_oracle: matrix exceeds 10^6 entries");
    const bool transposed = a.n_rows() < a.n_cols();
    const std::size_t rows = transposed ? a.n_cols() : a.n_rows();
    const std::size_t cols = transposed ? a.n_rows() : a.n_cols();

    // Densify into column-major B (= A or A^T so that rows >= cols).
    std::vector<double> b(rows * cols, 0.0);
    auto offsets = a.row_offsets();
    auto col_idx = a.col_indices();
    auto vals = a.values();
    for (std::size_t i = 0; i < a.n_rows(); ++i)
        for (std::size_t p = offsets[i]; p < offsets[i + 1]; ++p) {
            const std::size_t j = col_idx[p];
            if (transposed)
                b[i * rows + j] = vals[p];  // B(j, i) = A(i, j)
            else
                b[j * rows + i] = vals[p];
        }

    std::vector<double> v;
    detail::one_sided_jacobi(b, v, rows, cols);

    // Column norms of the rotated B are the singular values.
    std::vector<double> sigma(cols, 0.0);
    for (std::size_t j = 0; j < cols; ++j) {
        double s = 0.0;
        for (std::size_t i = 0; i < rows; ++i) s += b[j * rows + i] * b[j * rows + i];
        sigma[j] = std::sqrt(s);
    }
    std::vector<std::size_t> order(cols);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t x, std::size_t y) { return sigma[x] > sigma[y]; });

    FullSvd out;
    out.m = a.n_rows();
    out.n = a.n_cols();
    out.r = cols;
    out.sigma.resize(cols);
    out.u.assign(out.m * out.r, 0.0);
    out.vt.assign(out.r * out.n, 0.0);
    for (std::size_t k = 0; k < cols; ++k) {
        const std::size_t j = order[k];
        out.sigma[k] = sigma[j];
        // Left vectors of B are normalized columns; right vectors come from V.
        std::vector<double> left(rows, 0.0), right(cols, 0.0);
        if (sigma[j] > 0.0)
            for (std::size_t i = 0; i < rows; ++i) left[i] = b[j * rows + i] / sigma[j];
        for (std::size_t i = 0; i < cols; ++i) right[i] = v[j * cols + i];

        // Map back: if transposed, B = A^T so A's left vectors are B's right.
        const std::vector<double>& u_col = transposed ? right : left;
        const std::vector<double>& v_col = transposed ? left : right;

        // Sign convention: largest-|.| entry of the left vector non-negative.
        double pivot = 0.0;
        for (double x : u_col)
            if (std::abs(x) > std::abs(pivot)) pivot = x;
        const double flip = pivot < 0.0 ? -1.0 : 1.0;
        for (std::size_t i = 0; i < out.m; ++i) out.u[i * out.r + k] = flip * u_col[i];
        for (std::size_t i = 0; i < out.n; ++i) out.vt[k * out.n + i] = flip * v_col[i];
    }
    return out;
}

}  // namespace etymograph

#endif
