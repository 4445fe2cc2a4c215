// Test-only oracles and generators, kept independent of the library's
// implementation paths: brute-force recounts, dense fills, dense matvec.
#ifndef ETYMOGRAPH_TESTS_ORACLES_HPP
#define ETYMOGRAPH_TESTS_ORACLES_HPP

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <map>
#include <random>
#include <set>
#include <string>
#include <tuple>
#include <unordered_map>
#include <utility>
#include <vector>

#include "etymograph/lexicon.hpp"
#include "etymograph/sparse.hpp"

namespace testsupport {

// Edge/node recount straight off the entry list, no graph involved.
struct Recount {
    std::size_t word_count = 0;
    std::size_t root_count = 0;
    std::size_t edge_count = 0;
    std::size_t max_word_degree = 0;
    std::size_t max_root_degree = 0;
};

inline Recount recount(const std::vector<etymograph::LexiconEntry>& entries) {
    std::set<std::string> words, roots;
    std::set<std::pair<std::string, std::string>> edges;
    std::map<std::string, std::set<std::string>> word_roots, root_words;
    for (const auto& e : entries) {
        words.insert(e.word);
        for (const auto& r : e.roots) {
            roots.insert(r);
            edges.insert({r, e.word});
            word_roots[e.word].insert(r);
            root_words[r].insert(e.word);
        }
    }
    Recount c;
    c.word_count = words.size();
    c.root_count = roots.size();
    c.edge_count = edges.size();
    for (const auto& [w, rs] : word_roots)
        c.max_word_degree = std::max(c.max_word_degree, rs.size());
    for (const auto& [r, ws] : root_words)
        c.max_root_degree = std::max(c.max_root_degree, ws.size());
    return c;
}

// Dense 0/1 fill straight off the entry list, addressed by externally
// supplied index maps; row-major #roots x #words.
inline std::vector<double> dense_fill(
    const std::vector<etymograph::LexiconEntry>& entries,
    const std::unordered_map<std::string, std::size_t>& root_index,
    const std::unordered_map<std::string, std::size_t>& word_index) {
    std::vector<double> dense(root_index.size() * word_index.size(), 0.0);
    for (const auto& e : entries) {
        const std::size_t j = word_index.at(e.word);
        for (const auto& r : e.roots)
            dense[root_index.at(r) * word_index.size() + j] = 1.0;
    }
    return dense;
}

inline std::vector<double> to_dense(const etymograph::SparseMatrix& a) {
    std::vector<double> dense(a.n_rows() * a.n_cols(), 0.0);
    auto offsets = a.row_offsets();
    for (std::size_t i = 0; i < a.n_rows(); ++i)
        for (std::size_t p = offsets[i]; p < offsets[i + 1]; ++p)
            dense[i * a.n_cols() + a.col_indices()[p]] = a.values()[p];
    return dense;
}

inline std::vector<double> dense_matvec(const std::vector<double>& dense,
                                        std::size_t rows, std::size_t cols,
                                        const std::vector<double>& x,
                                        bool transpose = false) {
    std::vector<double> y(transpose ? cols : rows, 0.0);
    for (std::size_t i = 0; i < rows; ++i)
        for (std::size_t j = 0; j < cols; ++j) {
            if (transpose)
                y[j] += dense[i * cols + j] * x[i];
            else
                y[i] += dense[i * cols + j] * x[j];
        }
    return y;
}

inline etymograph::SparseMatrix random_sparse(std::size_t rows, std::size_t cols,
                                              double density, std::uint64_t seed,
                                              double value_span = 1.0) {
    std::mt19937_64 gen(seed);
    std::uniform_real_distribution<double> coin(0.0, 1.0);
    std::uniform_real_distribution<double> val(-value_span, value_span);
    std::vector<std::tuple<std::size_t, std::size_t, double>> triplets;
    for (std::size_t i = 0; i < rows; ++i)
        for (std::size_t j = 0; j < cols; ++j)
            if (coin(gen) < density) triplets.emplace_back(i, j, val(gen));
    if (triplets.empty()) triplets.emplace_back(0, 0, val(gen));
    return etymograph::SparseMatrix::from_triplets(rows, cols, std::move(triplets));
}

// Synthetic lexicon: `n_words` words drawing 1..max_roots roots from a pool
// of `n_roots`.
inline std::vector<etymograph::LexiconEntry> random_lexicon(std::size_t n_words,
                                                            std::size_t n_roots,
                                                            std::size_t max_roots,
                                                            std::uint64_t seed) {
    std::mt19937_64 gen(seed);
    std::uniform_int_distribution<std::size_t> count(1, max_roots);
    std::uniform_int_distribution<std::size_t> pick(0, n_roots - 1);
    std::vector<etymograph::LexiconEntry> entries;
    for (std::size_t w = 0; w < n_words; ++w) {
        etymograph::LexiconEntry e;
        e.word = "w" + std::to_string(w);
        const std::size_t n = count(gen);
        for (std::size_t t = 0; t < n; ++t)
            e.roots.push_back("r" + std::to_string(pick(gen)));
        entries.push_back(std::move(e));
    }
    return entries;
}

}  // namespace testsupport

#endif
