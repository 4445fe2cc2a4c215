#ifndef ETYMOGRAPH_REPORT_IO_HPP
#define ETYMOGRAPH_REPORT_IO_HPP

#include <cstdio>
#include <ostream>
#include <string>
#include <vector>

#include <json.hpp>

#include "etymograph/eval.hpp"
#include "etymograph/graph.hpp"

namespace etymograph {

inline nlohmann::json to_json(const GraphStats& s) {
    nlohmann::json hist = nlohmann::json::object();
    for (const auto& [degree, count] : s.word_length_histogram)
        hist[std::to_string(degree)] = count;
    return {
        {"word_count", s.word_count},
        {"root_count", s.root_count},
        {"edge_count", s.edge_count},
        {"word_length_histogram", hist},
        {"mean_word_degree", s.mean_word_degree},
        {"max_word_degree", s.max_word_degree},
        {"mean_root_degree", s.mean_root_degree},
        {"max_root_degree", s.max_root_degree},
    };
}

inline nlohmann::json to_json(const DistributionSummary& s) {
    return {
        {"sample_size", s.sample_size}, {"mean", s.mean}, {"stddev", s.stddev},
        {"min", s.min},                 {"max", s.max},
    };
}

inline nlohmann::json to_json(const EvalReport& r) {
    return {
        {"mode", to_string(r.mode)},
        {"k", r.k},
        {"coverage", r.coverage},
        {"random", to_json(r.random_summary)},
        {"synonyms", to_json(r.synonym_summary)},
        {"threshold_99", r.threshold_99},
        {"synonym_separation_99", r.synonym_separation_99},
        {"random_outside_99", r.random_outside_99},
        {"sigma_threshold", r.sigma_threshold},
        {"synonym_separation_sigma", r.synonym_separation_sigma},
        {"random_outside_sigma", r.random_outside_sigma},
        {"synonyms_used", r.synonyms_used},
        {"n_random", r.n_random},
    };
}

inline void write_sweep_csv(const std::vector<SweepRow>& rows, std::ostream& out) {
    out << "k,svd_seconds,threshold_99,synonym_separation_99,random_outside_99,"
           "sigma_threshold,synonym_separation_sigma,random_outside_sigma\n";
    char buf[256];
    for (const auto& r : rows) {
        std::snprintf(buf, sizeof(buf), "%zu,%.6f,%.9g,%.9g,%.9g,%.9g,%.9g,%.9g\n",
                      r.k, r.svd_seconds, r.report.threshold_99,
                      r.report.synonym_separation_99, r.report.random_outside_99,
                      r.report.sigma_threshold, r.report.synonym_separation_sigma,
                      r.report.random_outside_sigma);
        out << buf;
    }
}

inline void write_bench_csv(const std::vector<BenchRow>& rows, std::ostream& out) {
    out << "k,seconds,reconstruction_error\n";
    char buf[128];
    for (const auto& r : rows) {
        std::snprintf(buf, sizeof(buf), "%zu,%.6f,%.9g\n", r.k, r.seconds,
                      r.reconstruction_error);
        out << buf;
    }
}

}  // namespace etymograph

#endif
