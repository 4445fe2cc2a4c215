#ifndef ETYMOGRAPH_SVD_HPP
#define ETYMOGRAPH_SVD_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <iostream>
#include <stdexcept>
#include <thread>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/SVD>

#include "etymograph/rng.hpp"
#include "etymograph/sparse.hpp"

namespace etymograph {

// Rank-k truncated factorization A ~ U * diag(sigma) * Vt.
struct SvdResult {
    Eigen::MatrixXd u;      // n_rows x k, orthonormal columns
    Eigen::VectorXd sigma;  // non-increasing, >= 0
    Eigen::MatrixXd vt;     // k x n_cols, orthonormal rows
    std::size_t k = 0;
    std::uint64_t seed = 0;
    unsigned oversampling = 0;  // after any clamping
    unsigned power_iterations = 0;
};

namespace detail {

using RowMajorXd =
    Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

// Y = A * X, dense X with multiple columns. The dense operands are staged in
// row-major buffers so the inner axpy runs over contiguous memory; threading
// partitions column blocks, which keeps the parallel path deterministic.
inline Eigen::MatrixXd sparse_times_dense(const SparseMatrix& a,
                                          const Eigen::MatrixXd& x,
                                          unsigned threads) {
    if (static_cast<std::size_t>(x.rows()) != a.n_cols())
        throw std::invalid_argument("sparse_times_dense: dimension mismatch");
    RowMajorXd xr = x;
    RowMajorXd y =
        RowMajorXd::Zero(static_cast<Eigen::Index>(a.n_rows()), x.cols());
    auto offsets = a.row_offsets();
    auto cols = a.col_indices();
    auto vals = a.values();
    auto block = [&](Eigen::Index c0, Eigen::Index c1) {
        for (std::size_t i = 0; i < a.n_rows(); ++i) {
            auto yi = y.block(static_cast<Eigen::Index>(i), c0, 1, c1 - c0);
            for (std::size_t p = offsets[i]; p < offsets[i + 1]; ++p)
                yi += vals[p] *
                      xr.block(static_cast<Eigen::Index>(cols[p]), c0, 1, c1 - c0);
        }
    };
    unsigned t = threads == 0 ? std::thread::hardware_concurrency() : threads;
    if (t <= 1 || x.cols() < 2) {
        block(0, x.cols());
    } else {
        t = std::min<unsigned>(t, static_cast<unsigned>(x.cols()));
        std::vector<std::thread> pool;
        const Eigen::Index chunk = (x.cols() + t - 1) / t;
        for (unsigned w = 0; w < t; ++w) {
            const Eigen::Index c0 = w * chunk;
            const Eigen::Index c1 = std::min<Eigen::Index>(x.cols(), c0 + chunk);
            if (c0 < c1) pool.emplace_back(block, c0, c1);
        }
        for (auto& th : pool) th.join();
    }
    return y;
}

// Y = A^T * X. Same layout and column-block partitioning; each block scatters
// into its own columns only, so no cross-thread accumulation occurs.
inline Eigen::MatrixXd sparse_t_times_dense(const SparseMatrix& a,
                                            const Eigen::MatrixXd& x,
                                            unsigned threads) {
    if (static_cast<std::size_t>(x.rows()) != a.n_rows())
        throw std::invalid_argument("sparse_t_times_dense: dimension mismatch");
    RowMajorXd xr = x;
    RowMajorXd y =
        RowMajorXd::Zero(static_cast<Eigen::Index>(a.n_cols()), x.cols());
    auto offsets = a.row_offsets();
    auto cols = a.col_indices();
    auto vals = a.values();
    auto block = [&](Eigen::Index c0, Eigen::Index c1) {
        for (std::size_t i = 0; i < a.n_rows(); ++i) {
            auto xi = xr.block(static_cast<Eigen::Index>(i), c0, 1, c1 - c0);
            for (std::size_t p = offsets[i]; p < offsets[i + 1]; ++p)
                y.block(static_cast<Eigen::Index>(cols[p]), c0, 1, c1 - c0) +=
                    vals[p] * xi;
        }
    };
    unsigned t = threads == 0 ? std::thread::hardware_concurrency() : threads;
    if (t <= 1 || x.cols() < 2) {
        block(0, x.cols());
    } else {
        t = std::min<unsigned>(t, static_cast<unsigned>(x.cols()));
        std::vector<std::thread> pool;
        const Eigen::Index chunk = (x.cols() + t - 1) / t;
        for (unsigned w = 0; w < t; ++w) {
            const Eigen::Index c0 = w * chunk;
            const Eigen::Index c1 = std::min<Eigen::Index>(x.cols(), c0 + chunk);
            if (c0 < c1) pool.emplace_back(block, c0, c1);
        }
        for (auto& th : pool) th.join();
    }
    return y;
}

struct ThinQr {
    Eigen::MatrixXd q;
    Eigen::MatrixXd r;
};

inline ThinQr householder_thin_qr(const Eigen::MatrixXd& y) {
    Eigen::HouseholderQR<Eigen::MatrixXd> qr(y);
    ThinQr out;
    out.q = qr.householderQ() * Eigen::MatrixXd::Identity(y.rows(), y.cols());
    out.r = qr.matrixQR()
                .topRows(y.cols())
                .template triangularView<Eigen::Upper>();
    return out;
}

// CholeskyQR2 for tall-skinny panels: two Gram/Cholesky passes give
// orthonormality at working precision and run at GEMM speed, which dominates
// the factorization cost on large graphs. Falls back to Householder when the
// panel is rank-deficient.
inline ThinQr thin_qr(const Eigen::MatrixXd& y) {
    const Eigen::Index rows = y.rows(), cols = y.cols();
    if (rows < 4 * cols || rows < 2048) return householder_thin_qr(y);

    auto chol_pass = [](const Eigen::MatrixXd& x, Eigen::MatrixXd& q_out,
                        Eigen::MatrixXd& r_out) {
        Eigen::MatrixXd gram = x.transpose() * x;
        Eigen::LLT<Eigen::MatrixXd> llt(gram);
        if (llt.info() != Eigen::Success) return false;
        Eigen::MatrixXd l = llt.matrixL();
        const double dmax = l.diagonal().maxCoeff();
        if (l.diagonal().minCoeff() <= 1e-12 * dmax) return false;
        q_out = l.template triangularView<Eigen::Lower>()
                    .transpose()
                    .template solve<Eigen::OnTheRight>(x);
        r_out = l.transpose();
        return true;
    };
    Eigen::MatrixXd q1, r1, q2, r2;
    if (!chol_pass(y, q1, r1) || !chol_pass(q1, q2, r2))
        return householder_thin_qr(y);
    return {std::move(q2), r2 * r1};
}

inline Eigen::MatrixXd thin_q(const Eigen::MatrixXd& y) { return thin_qr(y).q; }

inline void apply_sign_convention(Eigen::MatrixXd& u, Eigen::MatrixXd& vt) {
    for (Eigen::Index j = 0; j < u.cols(); ++j) {
        Eigen::Index pivot = 0;
        u.col(j).cwiseAbs().maxCoeff(&pivot);
        if (u(pivot, j) < 0.0) {
            u.col(j) = -u.col(j);
            vt.row(j) = -vt.row(j);
        }
    }
}

}  // namespace detail

// Randomized subspace iteration: Gaussian range finder on A, a few passes of
// A A^T for spectral sharpening, then a dense SVD of the projected matrix.
// Deterministic for fixed (A, k, seed, oversampling, power_iterations) with
// threads == 1; with more threads, results match up to FP reassociation in
// the dense kernels.
inline SvdResult truncated_svd(const SparseMatrix& a, std::size_t k,
                               std::uint64_t seed, unsigned oversampling = 10,
                               unsigned power_iterations = 4,
                               unsigned threads = 1) {
    const std::size_t min_dim = std::min(a.n_rows(), a.n_cols());
    if (k < 1 || k > min_dim)
        throw std::invalid_argument("truncated_svd: k=" + std::to_string(k) +
                                    " out of range [1, " + std::to_string(min_dim) +
                                    "]");
    if (a.nnz() < 1) throw std::invalid_argument("truncated_svd: matrix has no nonzeros");
    if (k + oversampling > min_dim) {
        oversampling = static_cast<unsigned>(min_dim - k);
        std::cerr << "truncated_svd: clamped oversampling to " << oversampling
                  << " (k + oversampling exceeded min dimension)\n";
    }
    const Eigen::Index l = static_cast<Eigen::Index>(k + oversampling);
    const Eigen::Index m = static_cast<Eigen::Index>(a.n_rows());
    const Eigen::Index n = static_cast<Eigen::Index>(a.n_cols());

    // Gaussian test matrix, filled column-by-column regardless of threading.
    SplitMix64 rng(seed);
    Eigen::MatrixXd omega(n, l);
    for (Eigen::Index j = 0; j < l; ++j)
        for (Eigen::Index i = 0; i < n; ++i) omega(i, j) = rng.next_gaussian();

    Eigen::MatrixXd q = detail::thin_q(detail::sparse_times_dense(a, omega, threads));
    for (unsigned it = 0; it < power_iterations; ++it) {
        Eigen::MatrixXd z =
            detail::thin_q(detail::sparse_t_times_dense(a, q, threads));
        q = detail::thin_q(detail::sparse_times_dense(a, z, threads));
    }

    // Project: B = Q^T A through its transpose A^T Q = Q2 R2, so the dense
    // SVD runs on the small l x l factor R2^T only.
    Eigen::MatrixXd bt = detail::sparse_t_times_dense(a, q, threads);
    detail::ThinQr qr2 = detail::thin_qr(bt);
    Eigen::MatrixXd small = qr2.r.transpose();  // B = small * Q2^T
    Eigen::BDCSVD<Eigen::MatrixXd> svd(small, Eigen::ComputeThinU | Eigen::ComputeThinV);

    SvdResult result;
    result.k = k;
    result.seed = seed;
    result.oversampling = oversampling;
    result.power_iterations = power_iterations;
    const Eigen::Index kk = static_cast<Eigen::Index>(k);
    result.u = q * svd.matrixU().leftCols(kk);
    result.sigma = svd.singularValues().head(kk);
    result.vt = (qr2.q * svd.matrixV().leftCols(kk)).transpose();
    detail::apply_sign_convention(result.u, result.vt);
    return result;
}

// || A - U diag(sigma) Vt ||_F without forming the dense difference: the
// Frobenius inner products stream over A's nonzeros and over k x k Gramians.
inline double reconstruction_error(const SparseMatrix& a, const SvdResult& r) {
    if (static_cast<std::size_t>(r.u.rows()) != a.n_rows() ||
        static_cast<std::size_t>(r.vt.cols()) != a.n_cols())
        throw std::invalid_argument("reconstruction_error: dimension mismatch");

    const double a_sq = a.frobenius_norm_sq();

    // <A, L> over A's nonzeros only, L = U diag(sigma) Vt.
    double cross = 0.0;
    auto offsets = a.row_offsets();
    auto cols = a.col_indices();
    auto vals = a.values();
    for (std::size_t i = 0; i < a.n_rows(); ++i)
        for (std::size_t p = offsets[i]; p < offsets[i + 1]; ++p) {
            const double lij =
                r.u.row(static_cast<Eigen::Index>(i))
                    .dot(r.sigma.cwiseProduct(
                        r.vt.col(static_cast<Eigen::Index>(cols[p]))));
            cross += vals[p] * lij;
        }

    // ||L||_F^2 = tr((S U^T U S)(Vt Vt^T)), exact even if U/Vt drift from
    // orthonormality.
    Eigen::MatrixXd gu = r.sigma.asDiagonal() * (r.u.transpose() * r.u) *
                         r.sigma.asDiagonal();
    Eigen::MatrixXd gv = r.vt * r.vt.transpose();
    const double l_sq = (gu.array() * gv.transpose().array()).sum();

    return std::sqrt(std::max(0.0, a_sq - 2.0 * cross + l_sq));
}

}  // namespace etymograph

#endif
