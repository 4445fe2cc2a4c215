#ifndef ETYMOGRAPH_SPARSE_HPP
#define ETYMOGRAPH_SPARSE_HPP

#include <algorithm>
#include <cstddef>
#include <cstdio>
#include <istream>
#include <ostream>
#include <span>
#include <sstream>
#include <stdexcept>
#include <string>
#include <thread>
#include <tuple>
#include <vector>

namespace etymograph {

// Compressed sparse row matrix, 64-bit values. Immutable after construction
// and safe for concurrent reads.
class SparseMatrix {
public:
    SparseMatrix(std::size_t n_rows, std::size_t n_cols,
                 std::vector<std::size_t> row_offsets,
                 std::vector<std::size_t> col_indices,
                 std::vector<double> values)
        : n_rows_(n_rows),
          n_cols_(n_cols),
          row_offsets_(std::move(row_offsets)),
          col_indices_(std::move(col_indices)),
          values_(std::move(values)) {
        validate();
    }

    // Builds from (row, col, value) triplets; duplicates are an error.
    static SparseMatrix from_triplets(
        std::size_t n_rows, std::size_t n_cols,
        std::vector<std::tuple<std::size_t, std::size_t, double>> triplets) {
        std::sort(triplets.begin(), triplets.end(),
                  [](const auto& a, const auto& b) {
                      return std::tie(std::get<0>(a), std::get<1>(a)) <
                             std::tie(std::get<0>(b), std::get<1>(b));
                  });
        std::vector<std::size_t> offsets(n_rows + 1, 0);
        std::vector<std::size_t> cols;
        std::vector<double> vals;
        cols.reserve(triplets.size());
        vals.reserve(triplets.size());
        for (std::size_t t = 0; t < triplets.size(); ++t) {
            auto [r, c, v] = triplets[t];
            if (r >= n_rows || c >= n_cols)
                throw std::invalid_argument("triplet index out of range");
            if (t > 0 && r == std::get<0>(triplets[t - 1]) &&
                c == std::get<1>(triplets[t - 1]))
                throw std::invalid_argument("duplicate triplet at (" +
                                            std::to_string(r) + "," +
                                            std::to_string(c) + ")");
            ++offsets[r + 1];
            cols.push_back(c);
            vals.push_back(v);
        }
        for (std::size_t r = 0; r < n_rows; ++r) offsets[r + 1] += offsets[r];
        return SparseMatrix(n_rows, n_cols, std::move(offsets), std::move(cols),
                            std::move(vals));
    }

    std::size_t n_rows() const { return n_rows_; }
    std::size_t n_cols() const { return n_cols_; }
    std::size_t nnz() const { return values_.size(); }
    std::span<const std::size_t> row_offsets() const { return row_offsets_; }
    std::span<const std::size_t> col_indices() const { return col_indices_; }
    std::span<const double> values() const { return values_; }

    // y = A x. Rows are independent, so the parallel path is deterministic.
    std::vector<double> spmv(std::span<const double> x, unsigned threads = 1) const {
        if (x.size() != n_cols_)
            throw std::invalid_argument("spmv: vector length " +
                                        std::to_string(x.size()) +
                                        " != n_cols " + std::to_string(n_cols_));
        std::vector<double> y(n_rows_, 0.0);
        auto rows = [&](std::size_t lo, std::size_t hi) {
            for (std::size_t i = lo; i < hi; ++i) {
                double acc = 0.0;
                for (std::size_t p = row_offsets_[i]; p < row_offsets_[i + 1]; ++p)
                    acc += values_[p] * x[col_indices_[p]];
                y[i] = acc;
            }
        };
        run_partitioned(n_rows_, threads, rows);
        return y;
    }

    // y = A^T x. Parallel path uses per-thread accumulators merged in thread
    // order; sequential (threads == 1) accumulates in row order.
    std::vector<double> spmv_t(std::span<const double> x, unsigned threads = 1) const {
        if (x.size() != n_rows_)
            throw std::invalid_argument("spmv_t: vector length " +
                                        std::to_string(x.size()) +
                                        " != n_rows " + std::to_string(n_rows_));
        unsigned t = effective_threads(n_rows_, threads);
        if (t <= 1) {
            std::vector<double> y(n_cols_, 0.0);
            for (std::size_t i = 0; i < n_rows_; ++i)
                for (std::size_t p = row_offsets_[i]; p < row_offsets_[i + 1]; ++p)
                    y[col_indices_[p]] += values_[p] * x[i];
            return y;
        }
        std::vector<std::vector<double>> partial(t, std::vector<double>(n_cols_, 0.0));
        std::vector<std::thread> pool;
        const std::size_t chunk = (n_rows_ + t - 1) / t;
        for (unsigned w = 0; w < t; ++w) {
            pool.emplace_back([&, w] {
                const std::size_t lo = w * chunk;
                const std::size_t hi = std::min(n_rows_, lo + chunk);
                auto& y = partial[w];
                for (std::size_t i = lo; i < hi; ++i)
                    for (std::size_t p = row_offsets_[i]; p < row_offsets_[i + 1]; ++p)
                        y[col_indices_[p]] += values_[p] * x[i];
            });
        }
        for (auto& th : pool) th.join();
        std::vector<double> y(n_cols_, 0.0);
        for (unsigned w = 0; w < t; ++w)
            for (std::size_t j = 0; j < n_cols_; ++j) y[j] += partial[w][j];
        return y;
    }

    double frobenius_norm_sq() const {
        double s = 0.0;
        for (double v : values_) s += v * v;
        return s;
    }

    // Matrix Market coordinate format, 1-indexed, for debugging interop.
    void write_matrix_market(std::ostream& out) const {
        out << "%%MatrixMarket matrix coordinate real general\n";
        out << n_rows_ << ' ' << n_cols_ << ' ' << nnz() << '\n';
        char buf[64];
        for (std::size_t i = 0; i < n_rows_; ++i)
            for (std::size_t p = row_offsets_[i]; p < row_offsets_[i + 1]; ++p) {
                std::snprintf(buf, sizeof(buf), "%zu %zu %.17g\n", i + 1,
                              col_indices_[p] + 1, values_[p]);
                out << buf;
            }
    }

    static SparseMatrix read_matrix_market(std::istream& in) {
        std::string line;
        do {
            if (!std::getline(in, line))
                throw std::runtime_error("matrix market: missing size line");
        } while (!line.empty() && line[0] == '%');
        std::istringstream header(line);
        std::size_t rows, cols, entries;
        if (!(header >> rows >> cols >> entries))
            throw std::runtime_error("matrix market: bad size line");
        std::vector<std::tuple<std::size_t, std::size_t, double>> triplets;
        triplets.reserve(entries);
        for (std::size_t e = 0; e < entries; ++e) {
            std::size_t r, c;
            double v;
            if (!(in >> r >> c >> v))
                throw std::runtime_error("matrix market: truncated entry list");
            if (r < 1 || c < 1)
                throw std::runtime_error("matrix market: indices are 1-based");
            triplets.emplace_back(r - 1, c - 1, v);
        }
        return from_triplets(rows, cols, std::move(triplets));
    }

private:
    void validate() const {
        if (row_offsets_.size() != n_rows_ + 1)
            throw std::invalid_argument("row_offsets length must be n_rows+1");
        if (row_offsets_.front() != 0)
            throw std::invalid_argument("row_offsets[0] must be 0");
        if (row_offsets_.back() != values_.size() ||
            col_indices_.size() != values_.size())
            throw std::invalid_argument("nnz mismatch between arrays");
        for (std::size_t i = 0; i < n_rows_; ++i) {
            if (row_offsets_[i] > row_offsets_[i + 1])
                throw std::invalid_argument("row_offsets must be non-decreasing");
            for (std::size_t p = row_offsets_[i]; p < row_offsets_[i + 1]; ++p) {
                if (col_indices_[p] >= n_cols_)
                    throw std::invalid_argument("column index out of range");
                if (p > row_offsets_[i] && col_indices_[p] <= col_indices_[p - 1])
                    throw std::invalid_argument(
                        "column indices must be strictly increasing within a row");
            }
        }
    }

    static unsigned effective_threads(std::size_t work, unsigned requested) {
        unsigned t = requested == 0 ? std::thread::hardware_concurrency() : requested;
        if (t == 0) t = 1;
        return static_cast<unsigned>(
            std::min<std::size_t>(t, std::max<std::size_t>(1, work)));
    }

    template <class Fn>
    static void run_partitioned(std::size_t work, unsigned threads, Fn fn) {
        unsigned t = effective_threads(work, threads);
        if (t <= 1) {
            fn(0, work);
            return;
        }
        std::vector<std::thread> pool;
        const std::size_t chunk = (work + t - 1) / t;
        for (unsigned w = 0; w < t; ++w) {
            const std::size_t lo = w * chunk;
            const std::size_t hi = std::min(work, lo + chunk);
            if (lo < hi) pool.emplace_back(fn, lo, hi);
        }
        for (auto& th : pool) th.join();
    }

    std::size_t n_rows_;
    std::size_t n_cols_;
    std::vector<std::size_t> row_offsets_;
    std::vector<std::size_t> col_indices_;
    std::vector<double> values_;
};

}  // namespace etymograph

#endif
