#ifndef ETYMOGRAPH_GRAPH_HPP
#define ETYMOGRAPH_GRAPH_HPP

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include "etymograph/lexicon.hpp"
#include "etymograph/sparse.hpp"

namespace etymograph {

// Bipartite graph of word nodes and root nodes with unweighted (root, word)
// edges. Node order is first-appearance order, which makes the biadjacency
// matrix deterministic. Immutable once built.
class EtymologicalGraph {
public:
    std::size_t word_count() const { return words_.size(); }
    std::size_t root_count() const { return roots_.size(); }
    std::size_t edge_count() const { return edge_count_; }
    bool empty() const { return words_.empty(); }

    const std::vector<std::string>& words() const { return words_; }
    const std::vector<std::string>& roots() const { return roots_; }

    // Root indices adjacent to word j, in first-seen order, deduplicated.
    const std::vector<std::size_t>& word_roots(std::size_t j) const {
        return word_adjacency_[j];
    }

    std::size_t word_degree(std::size_t j) const { return word_adjacency_[j].size(); }
    std::size_t root_degree(std::size_t i) const { return root_degrees_[i]; }

    const std::unordered_map<std::string, std::size_t>& word_index() const {
        return word_index_;
    }
    const std::unordered_map<std::string, std::size_t>& root_index() const {
        return root_index_;
    }

    // FNV-1a over node names and adjacency, recorded in embedding provenance.
    std::uint64_t content_hash() const {
        std::uint64_t h = 0xcbf29ce484222325ULL;
        auto mix_byte = [&](unsigned char b) {
            h ^= b;
            h *= 0x100000001b3ULL;
        };
        auto mix_str = [&](const std::string& s) {
            for (char c : s) mix_byte(static_cast<unsigned char>(c));
            mix_byte(0xff);
        };
        for (const auto& w : words_) mix_str(w);
        for (const auto& r : roots_) mix_str(r);
        for (const auto& adj : word_adjacency_)
            for (std::size_t i : adj)
                for (int s = 0; s < 8; ++s)
                    mix_byte(static_cast<unsigned char>(i >> (8 * s)));
        return h;
    }

    friend EtymologicalGraph build_graph(const std::vector<LexiconEntry>&);

private:
    std::vector<std::string> words_;
    std::vector<std::string> roots_;
    std::vector<std::vector<std::size_t>> word_adjacency_;
    std::vector<std::size_t> root_degrees_;
    std::unordered_map<std::string, std::size_t> word_index_;
    std::unordered_map<std::string, std::size_t> root_index_;
    std::size_t edge_count_ = 0;
};

// Builds the graph by iterating entries in order and roots within each entry
// in order, adding nodes on first appearance. Repeated roots within one word
// collapse to a single edge; the biadjacency matrix is binary.
inline EtymologicalGraph build_graph(const std::vector<LexiconEntry>& entries) {
    EtymologicalGraph g;
    for (const auto& entry : entries) {
        if (entry.word.empty()) throw std::invalid_argument("entry with empty word");
        if (entry.roots.empty())
            throw std::invalid_argument("entry '" + entry.word +
                                        "' has no roots (word node would be isolated)");
        auto [wit, inserted] = g.word_index_.emplace(entry.word, g.words_.size());
        if (inserted) {
            g.words_.push_back(entry.word);
            g.word_adjacency_.emplace_back();
        }
        auto& adj = g.word_adjacency_[wit->second];
        for (const auto& root : entry.roots) {
            if (root.empty())
                throw std::invalid_argument("entry '" + entry.word + "' has an empty root");
            auto [rit, root_new] = g.root_index_.emplace(root, g.roots_.size());
            if (root_new) {
                g.roots_.push_back(root);
                g.root_degrees_.push_back(0);
            }
            const std::size_t ri = rit->second;
            if (std::find(adj.begin(), adj.end(), ri) == adj.end()) {
                adj.push_back(ri);
                ++g.root_degrees_[ri];
                ++g.edge_count_;
            }
        }
    }
    return g;
}

struct GraphStats {
    std::size_t word_count = 0;
    std::size_t root_count = 0;
    std::size_t edge_count = 0;
    // Word root-degree (number of distinct roots) -> number of such words.
    std::map<std::size_t, std::size_t> word_length_histogram;
    double mean_word_degree = 0.0;
    std::size_t max_word_degree = 0;
    double mean_root_degree = 0.0;
    std::size_t max_root_degree = 0;
};

inline GraphStats graph_stats(const EtymologicalGraph& g) {
    GraphStats s;
    s.word_count = g.word_count();
    s.root_count = g.root_count();
    s.edge_count = g.edge_count();
    for (std::size_t j = 0; j < g.word_count(); ++j) {
        const std::size_t d = g.word_degree(j);
        ++s.word_length_histogram[d];
        s.max_word_degree = std::max(s.max_word_degree, d);
    }
    for (std::size_t i = 0; i < g.root_count(); ++i)
        s.max_root_degree = std::max(s.max_root_degree, g.root_degree(i));
    if (s.word_count > 0)
        s.mean_word_degree = static_cast<double>(s.edge_count) / s.word_count;
    if (s.root_count > 0)
        s.mean_root_degree = static_cast<double>(s.edge_count) / s.root_count;
    return s;
}

struct Biadjacency {
    SparseMatrix matrix;  // root_count x word_count, binary
    std::unordered_map<std::string, std::size_t> root_index;  // root -> row
    std::unordered_map<std::string, std::size_t> word_index;  // word -> column
};

// Biadjacency matrix A: rows index roots, columns index words, A(i,j) = 1 iff
// edge (root i, word j) exists. Row/column order is the graph's node order.
inline Biadjacency biadjacency(const EtymologicalGraph& g) {
    if (g.empty()) throw std::invalid_argument("empty graph");
    const std::size_t n_rows = g.root_count();
    std::vector<std::size_t> offsets(n_rows + 1, 0);
    for (std::size_t i = 0; i < n_rows; ++i)
        offsets[i + 1] = offsets[i] + g.root_degree(i);
    std::vector<std::size_t> cursor(offsets.begin(), offsets.end() - 1);
    std::vector<std::size_t> cols(g.edge_count());
    // Column pass in word order leaves each row's columns strictly increasing.
    for (std::size_t j = 0; j < g.word_count(); ++j)
        for (std::size_t ri : g.word_roots(j)) cols[cursor[ri]++] = j;
    std::vector<double> vals(g.edge_count(), 1.0);
    return Biadjacency{
        SparseMatrix(n_rows, g.word_count(), std::move(offsets), std::move(cols),
                     std::move(vals)),
        g.root_index(), g.word_index()};
}

}  // namespace etymograph

#endif
