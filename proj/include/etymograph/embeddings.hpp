#ifndef ETYMOGRAPH_EMBEDDINGS_HPP
#define ETYMOGRAPH_EMBEDDINGS_HPP

#include <cmath>
#include <cstddef>
#include <cstdio>
#include <istream>
#include <map>
#include <ostream>
#include <span>
#include <sstream>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include "etymograph/svd.hpp"

namespace etymograph {

enum class SimilarityMode { dot, cosine };

inline const char* to_string(SimilarityMode m) {
    return m == SimilarityMode::dot ? "dot" : "cosine";
}

inline SimilarityMode similarity_mode_from_string(const std::string& s) {
    if (s == "dot") return SimilarityMode::dot;
    if (s == "cosine") return SimilarityMode::cosine;
    throw std::invalid_argument("unknown similarity mode '" + s + "'");
}

struct SimilarityScore {
    double value = 0.0;
    SimilarityMode mode = SimilarityMode::dot;
};

// Word -> k-dimensional vector, vocabulary in a fixed order. Immutable after
// derivation; similarity queries are safe from any number of threads.
class EmbeddingSet {
public:
    EmbeddingSet(std::size_t dimension, std::vector<std::string> vocabulary,
                 std::vector<double> data,
                 std::map<std::string, std::string> provenance = {})
        : k_(dimension),
          vocab_(std::move(vocabulary)),
          data_(std::move(data)),
          provenance_(std::move(provenance)) {
        if (data_.size() != vocab_.size() * k_)
            throw std::invalid_argument("embedding data size does not match vocab x k");
        for (std::size_t i = 0; i < vocab_.size(); ++i)
            if (!index_.emplace(vocab_[i], i).second)
                throw std::invalid_argument("duplicate word '" + vocab_[i] +
                                            "' in vocabulary");
    }

    std::size_t dimension() const { return k_; }
    std::size_t size() const { return vocab_.size(); }
    const std::vector<std::string>& vocabulary() const { return vocab_; }
    const std::map<std::string, std::string>& provenance() const { return provenance_; }

    bool contains(const std::string& word) const { return index_.count(word) > 0; }

    std::span<const double> vector(const std::string& word) const {
        auto it = index_.find(word);
        if (it == index_.end())
            throw std::out_of_range("word '" + word + "' not in vocabulary");
        return {data_.data() + it->second * k_, k_};
    }

    std::span<const double> vector_at(std::size_t i) const {
        return {data_.data() + i * k_, k_};
    }

private:
    std::size_t k_;
    std::vector<std::string> vocab_;
    std::vector<double> data_;
    std::unordered_map<std::string, std::size_t> index_;
    std::map<std::string, std::string> provenance_;
};

namespace detail {

inline std::vector<std::string> ordered_names(
    const std::unordered_map<std::string, std::size_t>& index) {
    std::vector<std::string> names(index.size());
    for (const auto& [name, i] : index) {
        if (i >= names.size()) throw std::invalid_argument("index map is not dense");
        names[i] = name;
    }
    return names;
}

}  // namespace detail

// Word embeddings are the columns of Vt, unscaled. sigma_alpha applies an
// experimental Sigma^alpha weighting; the default 0 leaves Vt untouched.
inline EmbeddingSet derive_embeddings(
    const SvdResult& r, const std::unordered_map<std::string, std::size_t>& word_index,
    double sigma_alpha = 0.0, std::map<std::string, std::string> provenance = {}) {
    if (static_cast<std::size_t>(r.vt.cols()) != word_index.size())
        throw std::invalid_argument("derive_embeddings: vt has " +
                                    std::to_string(r.vt.cols()) + " columns but " +
                                    std::to_string(word_index.size()) +
                                    " words are indexed");
    std::vector<std::string> vocab = detail::ordered_names(word_index);
    const std::size_t k = r.k;
    std::vector<double> data(vocab.size() * k);
    for (std::size_t j = 0; j < vocab.size(); ++j)
        for (std::size_t t = 0; t < k; ++t) {
            double scale = sigma_alpha == 0.0
                               ? 1.0
                               : std::pow(r.sigma(static_cast<Eigen::Index>(t)),
                                          sigma_alpha);
            data[j * k + t] = scale * r.vt(static_cast<Eigen::Index>(t),
                                           static_cast<Eigen::Index>(j));
        }
    provenance.emplace("k", std::to_string(k));
    provenance.emplace("seed", std::to_string(r.seed));
    return EmbeddingSet(k, std::move(vocab), std::move(data), std::move(provenance));
}

// Root embeddings: rows of U, same contract keyed by root_index.
inline EmbeddingSet derive_root_embeddings(
    const SvdResult& r, const std::unordered_map<std::string, std::size_t>& root_index,
    std::map<std::string, std::string> provenance = {}) {
    if (static_cast<std::size_t>(r.u.rows()) != root_index.size())
        throw std::invalid_argument("derive_root_embeddings: u has " +
                                    std::to_string(r.u.rows()) + " rows but " +
                                    std::to_string(root_index.size()) +
                                    " roots are indexed");
    std::vector<std::string> vocab = detail::ordered_names(root_index);
    const std::size_t k = r.k;
    std::vector<double> data(vocab.size() * k);
    for (std::size_t i = 0; i < vocab.size(); ++i)
        for (std::size_t t = 0; t < k; ++t)
            data[i * k + t] = r.u(static_cast<Eigen::Index>(i),
                                  static_cast<Eigen::Index>(t));
    provenance.emplace("k", std::to_string(k));
    provenance.emplace("seed", std::to_string(r.seed));
    return EmbeddingSet(k, std::move(vocab), std::move(data), std::move(provenance));
}

inline double dot(std::span<const double> a, std::span<const double> b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

inline SimilarityScore similarity(const EmbeddingSet& e, const std::string& w1,
                                  const std::string& w2, SimilarityMode mode) {
    auto v1 = e.vector(w1);
    auto v2 = e.vector(w2);
    double value = dot(v1, v2);
    if (mode == SimilarityMode::cosine) {
        const double n1 = std::sqrt(dot(v1, v1));
        const double n2 = std::sqrt(dot(v2, v2));
        if (n1 == 0.0 || n2 == 0.0)
            throw std::domain_error("cosine similarity undefined for zero-norm vector ('" +
                                    (n1 == 0.0 ? w1 : w2) + "')");
        value /= n1 * n2;
    }
    return {value, mode};
}

// word2vec text format: header `<vocab_size> <dimension>`, then one word and
// its components per line. 17 significant digits keeps the round trip within
// 1e-9 per component.
inline void export_embeddings(const EmbeddingSet& e, std::ostream& out) {
    out << e.size() << ' ' << e.dimension() << '\n';
    char buf[40];
    for (std::size_t i = 0; i < e.size(); ++i) {
        out << e.vocabulary()[i];
        for (double v : e.vector_at(i)) {
            std::snprintf(buf, sizeof(buf), " %.17g", v);
            out << buf;
        }
        out << '\n';
    }
}

inline EmbeddingSet import_embeddings(std::istream& in) {
    std::string line;
    if (!std::getline(in, line))
        throw std::runtime_error("embeddings line 1: missing header");
    std::istringstream header(line);
    std::size_t count = 0, k = 0;
    if (!(header >> count >> k) || k == 0)
        throw std::runtime_error("embeddings line 1: bad header (expected '<vocab> <dim>')");

    std::vector<std::string> vocab;
    std::vector<double> data;
    vocab.reserve(count);
    data.reserve(count * k);
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        std::istringstream row(line);
        std::string word;
        row >> word;
        std::size_t got = 0;
        double v;
        while (row >> v) {
            data.push_back(v);
            ++got;
        }
        if (got != k)
            throw std::runtime_error("embeddings line " + std::to_string(line_no) +
                                     ": expected " + std::to_string(k) +
                                     " components, got " + std::to_string(got));
        vocab.push_back(std::move(word));
    }
    if (vocab.size() != count)
        throw std::runtime_error("embeddings: header declared " + std::to_string(count) +
                                 " words, file has " + std::to_string(vocab.size()));
    return EmbeddingSet(k, std::move(vocab), std::move(data));  // ctor rejects dups
}

// Flat key=value sidecar for run provenance.
inline void write_metadata(const std::map<std::string, std::string>& meta,
                           std::ostream& out) {
    for (const auto& [key, value] : meta) out << key << '=' << value << '\n';
}

inline std::map<std::string, std::string> read_metadata(std::istream& in) {
    std::map<std::string, std::string> meta;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        auto eq = line.find('=');
        if (eq == std::string::npos)
            throw std::runtime_error("metadata: line without '=': " + line);
        meta[line.substr(0, eq)] = line.substr(eq + 1);
    }
    return meta;
}

}  // namespace etymograph

#endif
