// Acceptance suite: one pass/fail line per criterion, nonzero exit on any
// failure. Criteria that need external datasets are reported as SKIP unless
// the corresponding environment variables point at the files.

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "etymograph/dense_svd.hpp"
#include "etymograph/embeddings.hpp"
#include "etymograph/eval.hpp"
#include "etymograph/graph.hpp"
#include "etymograph/lexicon.hpp"
#include "etymograph/svd.hpp"
#include "support/oracles.hpp"
#include "support/synthetic.hpp"

using namespace etymograph;
namespace fs = std::filesystem;

namespace {

int g_failures = 0;

struct Check {
    bool ok = true;
    std::string detail;

    void require(bool cond, const std::string& msg) {
        if (!cond && ok) {
            ok = false;
            detail = msg;
        }
    }
};

void criterion(const std::string& name, const std::function<void(Check&)>& body) {
    Check c;
    try {
        body(c);
    } catch (const std::exception& e) {
        c.ok = false;
        c.detail = std::string("exception: ") + e.what();
    }
    if (c.ok) {
        std::cout << "PASS  " << name << '\n';
    } else {
        std::cout << "FAIL  " << name << "  (" << c.detail << ")\n";
        ++g_failures;
    }
    std::cout.flush();
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
        .count();
}

std::string fmt(double v) {
    std::ostringstream ss;
    ss << v;
    return ss.str();
}

void write_lexicon(const std::vector<LexiconEntry>& entries, const fs::path& path) {
    std::ofstream out(path);
    for (const auto& e : entries) {
        out << e.word << '\t';
        for (std::size_t i = 0; i < e.roots.size(); ++i)
            out << (i ? " " : "") << e.roots[i];
        out << '\n';
    }
}

void write_pairs(const SynonymPairs& syn, const fs::path& path) {
    std::ofstream out(path);
    for (const auto& [a, b] : syn.pairs) out << a << '\t' << b << '\n';
}

std::string slurp(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void svd_oracle_equivalence(Check& c) {
    const auto t0 = std::chrono::steady_clock::now();
    for (std::uint64_t trial = 0; trial < 20 && c.ok; ++trial) {
        auto a = testsupport::random_sparse(50, 80, 0.1, 1000 + trial);
        auto oracle = dense_svd_oracle(a);
        auto r = truncated_svd(a, 10, 7000 + trial, 30, 20);
        for (std::size_t t = 0; t < 10; ++t) {
            const double rel =
                std::abs(r.sigma(static_cast<Eigen::Index>(t)) - oracle.sigma[t]) /
                oracle.sigma[t];
            c.require(rel <= 1e-6, "trial " + std::to_string(trial) + " sigma[" +
                                       std::to_string(t) + "] rel err " + fmt(rel));
        }
        double tail = 0.0;
        for (std::size_t t = 10; t < oracle.sigma.size(); ++t)
            tail += oracle.sigma[t] * oracle.sigma[t];
        const double optimal = std::sqrt(tail);
        const double err = reconstruction_error(a, r);
        c.require(err <= optimal + 1e-6, "trial " + std::to_string(trial) +
                                             " reconstruction " + fmt(err) +
                                             " vs optimal " + fmt(optimal));
    }
    const double elapsed = seconds_since(t0);
    c.require(elapsed < 10.0, "runtime " + fmt(elapsed) + "s exceeds 10s");
}

void eckart_young_monotonicity(Check& c) {
    const auto t0 = std::chrono::steady_clock::now();
    auto a = testsupport::random_sparse(200, 500, 0.05, 77);
    double prev = std::numeric_limits<double>::infinity();
    for (std::size_t k : {5, 10, 20, 40}) {
        auto r = truncated_svd(a, k, 5, 20, 8);
        const double err = reconstruction_error(a, r);
        c.require(err <= prev + 1e-9,
                  "error increased at k=" + std::to_string(k) + ": " + fmt(err) +
                      " > " + fmt(prev));
        prev = err;
    }
    // Exact rank: k = min dimension reconstructs the matrix entrywise.
    auto full = truncated_svd(a, 200, 5, 20, 8);
    Eigen::MatrixXd low = full.u * full.sigma.asDiagonal() * full.vt;
    auto dense = testsupport::to_dense(a);
    double max_abs = 0.0;
    for (std::size_t i = 0; i < 200; ++i)
        for (std::size_t j = 0; j < 500; ++j)
            max_abs = std::max(max_abs,
                               std::abs(low(static_cast<Eigen::Index>(i),
                                            static_cast<Eigen::Index>(j)) -
                                        dense[i * 500 + j]));
    c.require(max_abs <= 1e-8, "exact-rank max abs deviation " + fmt(max_abs));
    const double elapsed = seconds_since(t0);
    c.require(elapsed < 10.0, "runtime " + fmt(elapsed) + "s exceeds 10s");
}

void graph_matrix_correctness(Check& c) {
    const auto t0 = std::chrono::steady_clock::now();
    auto entries = testsupport::random_lexicon(1000, 300, 4, 2024);
    auto g = build_graph(entries);
    auto bi = biadjacency(g);
    auto expected = testsupport::dense_fill(entries, bi.root_index, bi.word_index);
    c.require(testsupport::to_dense(bi.matrix) == expected,
              "biadjacency differs from dense brute-force fill");
    auto s = graph_stats(g);
    auto oracle = testsupport::recount(entries);
    c.require(s.word_count == oracle.word_count, "word count mismatch");
    c.require(s.root_count == oracle.root_count, "root count mismatch");
    c.require(s.edge_count == oracle.edge_count, "edge count mismatch");
    c.require(s.max_word_degree == oracle.max_word_degree, "word degree mismatch");
    c.require(s.max_root_degree == oracle.max_root_degree, "root degree mismatch");
    const double elapsed = seconds_since(t0);
    c.require(elapsed < 5.0, "runtime " + fmt(elapsed) + "s exceeds 5s");
}

void synthetic_separation(Check& c) {
    const auto t0 = std::chrono::steady_clock::now();
    // 800 synonym pairs (1600 words) + 400 background words over 200 roots.
    auto corpus = testsupport::synonym_corpus(800, 400, 200, 99);
    auto bi = biadjacency(build_graph(corpus.entries));
    auto r = truncated_svd(bi.matrix, 64, 3);
    auto e = derive_embeddings(r, bi.word_index);
    auto res = evaluate(e, corpus.synonyms, 100000, 4, SimilarityMode::dot);
    c.require(res.report.synonym_separation_99 >= 0.9,
              "synonym_separation_99 = " + fmt(res.report.synonym_separation_99));
    c.require(res.report.random_outside_99 >= 0.005 &&
                  res.report.random_outside_99 <= 0.015,
              "random_outside_99 = " + fmt(res.report.random_outside_99));
    const double elapsed = seconds_since(t0);
    c.require(elapsed < 60.0, "runtime " + fmt(elapsed) + "s exceeds 60s");
}

void null_calibration(Check& c) {
    const auto t0 = std::chrono::steady_clock::now();
    auto corpus = testsupport::synonym_corpus(800, 400, 200, 99);
    auto bi = biadjacency(build_graph(corpus.entries));
    auto r = truncated_svd(bi.matrix, 64, 3);
    auto e = derive_embeddings(r, bi.word_index);
    SynonymPairs null_syn;
    null_syn.pairs = sample_random_pairs(e.vocabulary(), 20000, 555);
    auto res = evaluate(e, null_syn, 100000, 4, SimilarityMode::dot);
    const double se = std::sqrt(0.01 * 0.99 / 20000.0);
    c.require(std::abs(res.report.synonym_separation_99 - 0.01) <= 3.0 * se,
              "null separation " + fmt(res.report.synonym_separation_99) +
                  " outside 0.01 +- " + fmt(3.0 * se));
    const double elapsed = seconds_since(t0);
    c.require(elapsed < 30.0, "runtime " + fmt(elapsed) + "s exceeds 30s");
}

void cli_determinism(Check& c) {
    const fs::path dir = fs::temp_directory_path() / "etymograph_acceptance";
    fs::create_directories(dir);
    auto corpus = testsupport::synonym_corpus(150, 200, 60, 8);
    write_lexicon(corpus.entries, dir / "lexicon.tsv");
    write_pairs(corpus.synonyms, dir / "synonyms.tsv");

    const std::string cli = ETYMOGRAPH_CLI_PATH;
    auto run = [&](const std::string& args) {
        const std::string cmd = cli + " " + args + " > /dev/null 2>&1";
        return std::system(cmd.c_str());
    };
    const std::string embed_args = "embed --lexicon " + (dir / "lexicon.tsv").string() +
                                   " --k 16 --seed 42 --threads 1 --out ";
    c.require(run(embed_args + (dir / "e1.txt").string()) == 0, "embed run 1 failed");
    c.require(run(embed_args + (dir / "e2.txt").string()) == 0, "embed run 2 failed");
    c.require(slurp(dir / "e1.txt") == slurp(dir / "e2.txt"),
              "embedding files differ between identical runs");
    c.require(!slurp(dir / "e1.txt").empty(), "embedding file is empty");

    const std::string eval_args =
        "eval --embeddings " + (dir / "e1.txt").string() + " --synonyms " +
        (dir / "synonyms.tsv").string() +
        " --seed 42 --threads 1 --n-random 20000 --out ";
    c.require(run(eval_args + (dir / "r1.json").string()) == 0, "eval run 1 failed");
    c.require(run(eval_args + (dir / "r2.json").string()) == 0, "eval run 2 failed");
    c.require(slurp(dir / "r1.json") == slurp(dir / "r2.json"),
              "eval reports differ between identical runs");
    c.require(!slurp(dir / "r1.json").empty(), "eval report is empty");
}

void performance_envelope(Check& c) {
    // ~350k nonzeros on a 10,000 x 120,000 matrix: three roots per word with
    // occasional collisions.
    const std::size_t rows = 10000, cols = 120000;
    SplitMix64 rng(31337);
    std::vector<std::pair<std::size_t, std::size_t>> coords;
    coords.reserve(3 * cols);
    for (std::size_t j = 0; j < cols; ++j)
        for (int t = 0; t < 3; ++t) coords.emplace_back(rng.next_below(rows), j);
    std::sort(coords.begin(), coords.end());
    coords.erase(std::unique(coords.begin(), coords.end()), coords.end());
    std::vector<std::tuple<std::size_t, std::size_t, double>> triplets;
    triplets.reserve(coords.size());
    for (auto [i, j] : coords) triplets.emplace_back(i, j, 1.0);
    auto a = SparseMatrix::from_triplets(rows, cols, std::move(triplets));

    const auto t0 = std::chrono::steady_clock::now();
    auto r = truncated_svd(a, 300, 11);
    const double elapsed = seconds_since(t0);
    c.require(r.sigma.size() == 300, "unexpected result size");
    c.require(r.sigma(0) >= r.sigma(299), "singular values not sorted");
    c.require(elapsed < 120.0, "runtime " + fmt(elapsed) + "s exceeds 120s");
    std::cout << "      (k=300 on " << rows << "x" << cols << ", nnz=" << a.nnz()
              << ": " << fmt(elapsed) << "s)\n";
}

void full_scale_optional(Check& c) {
    const char* lexicon = std::getenv("ETYMOGRAPH_KO_LEXICON");
    const char* synonyms = std::getenv("ETYMOGRAPH_KO_SYNONYMS");
    if (!lexicon || !synonyms) {
        std::cout << "SKIP  criterion 8: full-scale datasets (set "
                     "ETYMOGRAPH_KO_LEXICON / ETYMOGRAPH_KO_SYNONYMS)\n";
        return;
    }
    std::ifstream lex_in(lexicon);
    auto parsed = parse_lexicon(lex_in);
    auto bi = biadjacency(build_graph(parsed.entries));
    auto r = truncated_svd(bi.matrix, 2000, 1);
    auto e = derive_embeddings(r, bi.word_index);
    std::ifstream syn_in(synonyms);
    auto syn = load_synonym_pairs(syn_in, e);
    auto res = evaluate(e, syn, 100000, 2, SimilarityMode::dot);
    c.require(res.report.synonym_separation_99 >= 0.60,
              "separation " + fmt(res.report.synonym_separation_99));
}

}  // namespace

int main() {
    criterion("criterion 1: truncated SVD matches the dense oracle",
              svd_oracle_equivalence);
    criterion("criterion 2: Eckart-Young monotonicity and exact-rank recovery",
              eckart_young_monotonicity);
    criterion("criterion 3: graph statistics and biadjacency vs brute force",
              graph_matrix_correctness);
    criterion("criterion 4: synthetic synonym separation at k=64",
              synthetic_separation);
    criterion("criterion 5: null calibration of the detection threshold",
              null_calibration);
    criterion("criterion 6: byte-identical CLI reruns with threads=1",
              cli_determinism);
    criterion("criterion 7: k=300 factorization performance envelope",
              performance_envelope);
    criterion("criterion 8 (optional): full-scale datasets", full_scale_optional);
    if (g_failures > 0) {
        std::cout << g_failures << " criterion(s) failed\n";
        return 1;
    }
    std::cout << "all criteria passed\n";
    return 0;
}
