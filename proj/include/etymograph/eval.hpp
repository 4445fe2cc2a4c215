#ifndef ETYMOGRAPH_EVAL_HPP
#define ETYMOGRAPH_EVAL_HPP

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <istream>
#include <ostream>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <utility>
#include <vector>

#include "etymograph/embeddings.hpp"
#include "etymograph/graph.hpp"
#include "etymograph/rng.hpp"
#include "etymograph/svd.hpp"

namespace etymograph {

using WordPair = std::pair<std::string, std::string>;

// Ground-truth synonym pairs after vocabulary filtering. Pairs are unordered
// and deduplicated; self-pairs are dropped.
struct SynonymPairs {
    std::vector<WordPair> pairs;
    std::string source_label;
    std::size_t dropped_oov = 0;       // a word was out of vocabulary
    std::size_t self_pairs_removed = 0;
    std::size_t duplicates_removed = 0;
};

namespace detail {

inline WordPair normalized(const std::string& a, const std::string& b) {
    return a <= b ? WordPair{a, b} : WordPair{b, a};
}

struct PairHash {
    std::size_t operator()(const WordPair& p) const {
        std::uint64_t h = 0xcbf29ce484222325ULL;
        for (char c : p.first) h = (h ^ static_cast<unsigned char>(c)) * 0x100000001b3ULL;
        h = (h ^ 0xffU) * 0x100000001b3ULL;
        for (char c : p.second) h = (h ^ static_cast<unsigned char>(c)) * 0x100000001b3ULL;
        return static_cast<std::size_t>(h);
    }
};

}  // namespace detail

// One pair per line, `word1<TAB>word2`. Pairs with an out-of-vocabulary word
// are counted and dropped, not errors; crawled synonym lists routinely cover
// more words than a lexicon does.
template <class ContainsFn>
SynonymPairs load_synonym_pairs(std::istream& in, ContainsFn in_vocabulary,
                                std::string source_label = {}) {
    SynonymPairs result;
    result.source_label = std::move(source_label);
    std::unordered_set<WordPair, detail::PairHash> seen;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line[0] == '#') continue;
        auto tab = line.find('\t');
        if (tab == std::string::npos || tab == 0 || tab + 1 == line.size())
            throw std::runtime_error("synonym line " + std::to_string(line_no) +
                                     ": expected 'word1<TAB>word2'");
        std::string w1 = line.substr(0, tab);
        std::string w2 = line.substr(tab + 1);
        if (w1 == w2) {
            ++result.self_pairs_removed;
            continue;
        }
        if (!in_vocabulary(w1) || !in_vocabulary(w2)) {
            ++result.dropped_oov;
            continue;
        }
        WordPair p = detail::normalized(w1, w2);
        if (!seen.insert(p).second) {
            ++result.duplicates_removed;
            continue;
        }
        result.pairs.push_back(std::move(p));
    }
    return result;
}

inline SynonymPairs load_synonym_pairs(std::istream& in, const EmbeddingSet& e,
                                       std::string source_label = {}) {
    return load_synonym_pairs(
        in, [&](const std::string& w) { return e.contains(w); },
        std::move(source_label));
}

// Uniform sample (with replacement) of unordered distinct-word pairs,
// excluding ground-truth synonyms so the null distribution is exact.
inline std::vector<WordPair> sample_random_pairs(
    const std::vector<std::string>& vocabulary, std::size_t n, std::uint64_t seed,
    const SynonymPairs& exclusions = {}) {
    if (vocabulary.size() < 2)
        throw std::invalid_argument("sample_random_pairs: vocabulary smaller than 2");
    if (n < 1) throw std::invalid_argument("sample_random_pairs: n must be >= 1");
    std::unordered_set<WordPair, detail::PairHash> excluded;
    for (const auto& p : exclusions.pairs)
        excluded.insert(detail::normalized(p.first, p.second));

    std::vector<WordPair> pairs;
    pairs.reserve(n);
    SplitMix64 rng(seed);
    const std::uint64_t v = vocabulary.size();
    while (pairs.size() < n) {
        const std::uint64_t i = rng.next_below(v);
        const std::uint64_t j = rng.next_below(v);
        if (i == j) continue;
        WordPair p = detail::normalized(vocabulary[i], vocabulary[j]);
        if (excluded.count(p)) continue;
        pairs.push_back(std::move(p));
    }
    return pairs;
}

// Empirical sample distribution. Histogram range is symmetric about zero,
// which mirrors how the similarity histograms are read.
class Distribution {
public:
    explicit Distribution(std::vector<double> values, std::size_t bins = 100)
        : values_(std::move(values)) {
        if (values_.empty()) throw std::invalid_argument("empty sample");
        if (bins < 1) throw std::invalid_argument("histogram needs at least one bin");
        sorted_ = values_;
        std::sort(sorted_.begin(), sorted_.end());
        min_ = sorted_.front();
        max_ = sorted_.back();
        double sum = 0.0;
        for (double v : values_) sum += v;
        mean_ = sum / static_cast<double>(values_.size());
        double ss = 0.0;
        for (double v : values_) ss += (v - mean_) * (v - mean_);
        stddev_ = std::sqrt(ss / static_cast<double>(values_.size()));

        double radius = std::max(std::abs(min_), std::abs(max_));
        if (radius == 0.0) radius = 1.0;
        bin_edges_.resize(bins + 1);
        for (std::size_t b = 0; b <= bins; ++b)
            bin_edges_[b] = -radius + 2.0 * radius * static_cast<double>(b) /
                                          static_cast<double>(bins);
        bin_counts_.assign(bins, 0);
        for (double v : values_) {
            auto b = static_cast<std::size_t>((v + radius) / (2.0 * radius) *
                                              static_cast<double>(bins));
            if (b >= bins) b = bins - 1;  // top edge inclusive
            ++bin_counts_[b];
        }
    }

    const std::vector<double>& values() const { return values_; }
    std::size_t size() const { return values_.size(); }
    double mean() const { return mean_; }
    double stddev() const { return stddev_; }
    double min() const { return min_; }
    double max() const { return max_; }
    const std::vector<double>& bin_edges() const { return bin_edges_; }
    const std::vector<std::size_t>& bin_counts() const { return bin_counts_; }

    // Empirical quantile with linear interpolation; quantile(0) = min and
    // quantile(1) = max.
    double quantile(double p) const {
        if (p < 0.0 || p > 1.0) throw std::invalid_argument("quantile: p outside [0,1]");
        return interpolate(sorted_, p);
    }

    // Same interpolation rule over |value|; this is the detection threshold
    // construction.
    double abs_quantile(double p) const {
        if (p < 0.0 || p > 1.0) throw std::invalid_argument("quantile: p outside [0,1]");
        std::vector<double> a(values_.size());
        for (std::size_t i = 0; i < values_.size(); ++i) a[i] = std::abs(values_[i]);
        std::sort(a.begin(), a.end());
        return interpolate(a, p);
    }

    void write_csv(std::ostream& out) const {
        out << "bin_lo,bin_hi,count\n";
        char buf[96];
        for (std::size_t b = 0; b < bin_counts_.size(); ++b) {
            std::snprintf(buf, sizeof(buf), "%.17g,%.17g,%zu\n", bin_edges_[b],
                          bin_edges_[b + 1], bin_counts_[b]);
            out << buf;
        }
    }

private:
    static double interpolate(const std::vector<double>& sorted, double p) {
        const double idx = p * static_cast<double>(sorted.size() - 1);
        const auto lo = static_cast<std::size_t>(idx);
        if (lo + 1 >= sorted.size()) return sorted.back();
        const double frac = idx - static_cast<double>(lo);
        return sorted[lo] + frac * (sorted[lo + 1] - sorted[lo]);
    }

    std::vector<double> values_;
    std::vector<double> sorted_;
    double mean_, stddev_, min_, max_;
    std::vector<double> bin_edges_;
    std::vector<std::size_t> bin_counts_;
};

inline Distribution similarity_distribution(const EmbeddingSet& e,
                                            const std::vector<WordPair>& pairs,
                                            SimilarityMode mode,
                                            std::size_t bins = 100) {
    if (pairs.empty()) throw std::invalid_argument("empty sample");
    std::vector<double> values;
    values.reserve(pairs.size());
    for (const auto& [w1, w2] : pairs)
        values.push_back(similarity(e, w1, w2, mode).value);
    return Distribution(std::move(values), bins);
}

// Threshold such that `coverage` of random pairs fall at or below it in
// absolute value. Detection everywhere downstream is |sim| > threshold:
// synonym products sit far from zero on either side.
inline double detection_threshold(const Distribution& random_dist,
                                  double coverage = 0.99) {
    if (coverage <= 0.0 || coverage >= 1.0)
        throw std::invalid_argument("detection_threshold: coverage outside (0,1)");
    if (random_dist.size() < 100)
        throw std::invalid_argument("detection_threshold: sample too small (need >= 100)");
    return random_dist.abs_quantile(coverage);
}

struct DistributionSummary {
    std::size_t sample_size = 0;
    double mean = 0.0;
    double stddev = 0.0;
    double min = 0.0;
    double max = 0.0;
};

inline DistributionSummary summarize(const Distribution& d) {
    return {d.size(), d.mean(), d.stddev(), d.min(), d.max()};
}

struct EvalReport {
    SimilarityMode mode = SimilarityMode::dot;
    std::size_t k = 0;
    double coverage = 0.99;
    DistributionSummary random_summary;
    DistributionSummary synonym_summary;
    double threshold_99 = 0.0;          // |sim| coverage-quantile of random pairs
    double synonym_separation_99 = 0.0; // synonyms with |sim| > threshold_99
    double random_outside_99 = 0.0;     // ~ 1 - coverage by construction
    double sigma_threshold = 0.0;       // std of the random distribution
    double synonym_separation_sigma = 0.0;
    double random_outside_sigma = 0.0;
    std::size_t synonyms_used = 0;
    std::size_t n_random = 0;
};

namespace detail {

inline double fraction_outside(const Distribution& d, double threshold) {
    std::size_t count = 0;
    for (double v : d.values())
        if (std::abs(v) > threshold) ++count;
    return static_cast<double>(count) / static_cast<double>(d.size());
}

}  // namespace detail

struct EvalResult {
    EvalReport report;
    Distribution random_dist;
    Distribution synonym_dist;
};

inline EvalResult evaluate(const EmbeddingSet& e, const SynonymPairs& synonyms,
                           std::size_t n_random, std::uint64_t seed,
                           SimilarityMode mode, double coverage = 0.99,
                           std::size_t bins = 100) {
    if (synonyms.pairs.empty())
        throw std::invalid_argument("evaluate: no synonym pairs after filtering");
    auto random_pairs =
        sample_random_pairs(e.vocabulary(), n_random, seed, synonyms);
    Distribution random_dist = similarity_distribution(e, random_pairs, mode, bins);
    Distribution synonym_dist = similarity_distribution(e, synonyms.pairs, mode, bins);

    EvalReport rep;
    rep.mode = mode;
    rep.k = e.dimension();
    rep.coverage = coverage;
    rep.random_summary = summarize(random_dist);
    rep.synonym_summary = summarize(synonym_dist);
    rep.threshold_99 = detection_threshold(random_dist, coverage);
    rep.synonym_separation_99 = detail::fraction_outside(synonym_dist, rep.threshold_99);
    rep.random_outside_99 = detail::fraction_outside(random_dist, rep.threshold_99);
    rep.sigma_threshold = random_dist.stddev();
    rep.synonym_separation_sigma =
        detail::fraction_outside(synonym_dist, rep.sigma_threshold);
    rep.random_outside_sigma =
        detail::fraction_outside(random_dist, rep.sigma_threshold);
    rep.synonyms_used = synonyms.pairs.size();
    rep.n_random = n_random;
    return {std::move(rep), std::move(random_dist), std::move(synonym_dist)};
}

struct EvalConfig {
    std::uint64_t seed = 42;
    SimilarityMode mode = SimilarityMode::dot;
    double coverage = 0.99;
    std::size_t n_random = 100000;
    unsigned oversampling = 10;
    unsigned power_iterations = 4;
    unsigned threads = 1;
    std::size_t bins = 100;
};

struct SweepRow {
    std::size_t k = 0;
    double svd_seconds = 0.0;
    EvalReport report;
};

// One row per dimension: fresh factorization at the same seed, then the full
// evaluation. Synonym pairs are filtered against the graph vocabulary once by
// the caller.
inline std::vector<SweepRow> dimension_sweep(const EtymologicalGraph& graph,
                                             const std::vector<std::size_t>& dims,
                                             const SynonymPairs& synonyms,
                                             const EvalConfig& cfg) {
    if (dims.empty()) throw std::invalid_argument("dimension_sweep: no dimensions");
    auto bi = biadjacency(graph);
    std::vector<SweepRow> rows;
    for (std::size_t k : dims) {
        const auto t0 = std::chrono::steady_clock::now();
        SvdResult r = truncated_svd(bi.matrix, k, cfg.seed, cfg.oversampling,
                                    cfg.power_iterations, cfg.threads);
        const auto t1 = std::chrono::steady_clock::now();
        EmbeddingSet e = derive_embeddings(r, bi.word_index);
        EvalResult res = evaluate(e, synonyms, cfg.n_random,
                                  derive_seed(cfg.seed, "eval.random_pairs"),
                                  cfg.mode, cfg.coverage, cfg.bins);
        rows.push_back({k, std::chrono::duration<double>(t1 - t0).count(),
                        std::move(res.report)});
    }
    return rows;
}

struct BenchRow {
    std::size_t k = 0;
    double seconds = 0.0;
    double reconstruction_error = 0.0;
};

// One timed factorization per dimension, after a single untimed warm-up at
// the first dimension.
inline std::vector<BenchRow> benchmark_factorization(
    const SparseMatrix& a, const std::vector<std::size_t>& dims, std::uint64_t seed,
    unsigned oversampling = 10, unsigned power_iterations = 4, unsigned threads = 1) {
    if (dims.empty()) throw std::invalid_argument("benchmark_factorization: no dimensions");
    (void)truncated_svd(a, dims.front(), seed, oversampling, power_iterations, threads);
    std::vector<BenchRow> rows;
    for (std::size_t k : dims) {
        const auto t0 = std::chrono::steady_clock::now();
        SvdResult r = truncated_svd(a, k, seed, oversampling, power_iterations, threads);
        const auto t1 = std::chrono::steady_clock::now();
        rows.push_back({k, std::chrono::duration<double>(t1 - t0).count(),
                        reconstruction_error(a, r)});
    }
    return rows;
}

}  // namespace etymograph

#endif
