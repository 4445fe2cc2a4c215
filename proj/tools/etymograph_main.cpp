// Command-line front end: stats, embed, eval, sweep, bench.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "etymograph/embeddings.hpp"
#include "etymograph/eval.hpp"
#include "etymograph/graph.hpp"
#include "etymograph/lexicon.hpp"
#include "etymograph/report_io.hpp"
#include "etymograph/rng.hpp"
#include "etymograph/svd.hpp"

namespace {

using namespace etymograph;

// Input/usage problems exit 2, unexpected internal failures exit 1.
struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct RunConfig {
    std::string lexicon;
    std::string synonyms;
    std::string embeddings;
    std::string out;
    std::string dims = "2000";
    std::size_t k = 2000;
    std::uint64_t seed = 42;
    std::string mode = "dot";
    double coverage = 0.99;
    std::size_t n_random = 100000;
    unsigned oversampling = 10;
    unsigned power_iters = 4;
    unsigned threads = 1;  // 0 = auto; 1 = bit-reproducible
    double sigma_weight = 0.0;
    std::string dump_matrix;
};

std::ifstream open_input(const std::string& path, const char* what) {
    std::ifstream in(path);
    if (!in) throw UsageError(std::string(what) + " file not found: " + path);
    return in;
}

std::ofstream open_output(const std::string& path) {
    std::ofstream out(path);
    if (!out) throw UsageError("cannot write output file: " + path);
    return out;
}

std::vector<std::size_t> parse_dims(const std::string& spec) {
    std::vector<std::size_t> dims;
    std::istringstream ss(spec);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        try {
            dims.push_back(std::stoul(tok));
        } catch (const std::exception&) {
            throw UsageError("bad dimension list: '" + spec + "'");
        }
    }
    if (dims.empty()) throw UsageError("empty dimension list");
    return dims;
}

// Shared flags on a subcommand. Config-file values fill in only where the
// flag was not given: flags > config file > defaults.
struct SubcommandOptions {
    CLI::App* cmd;
    std::map<std::string, CLI::Option*> by_key;

    void add(const std::string& key, CLI::Option* opt) { by_key[key] = opt; }
};

SubcommandOptions add_common_options(CLI::App* cmd, RunConfig& cfg) {
    SubcommandOptions o{cmd, {}};
    o.add("seed", cmd->add_option("--seed", cfg.seed, "Run seed; all randomness derives from it"));
    o.add("mode", cmd->add_option("--mode", cfg.mode, "Similarity mode")
                      ->check(CLI::IsMember({"dot", "cosine"})));
    o.add("coverage", cmd->add_option("--coverage", cfg.coverage,
                                      "Random-pair coverage for the threshold"));
    o.add("n_random", cmd->add_option("--n-random", cfg.n_random,
                                      "Number of random pairs to sample"));
    o.add("oversampling", cmd->add_option("--oversampling", cfg.oversampling,
                                          "Extra subspace dimensions for the factorization"));
    o.add("power_iters", cmd->add_option("--power-iters", cfg.power_iters,
                                         "Power iterations for the factorization"));
    o.add("threads", cmd->add_option("--threads", cfg.threads,
                                     "Worker threads (0 = auto, 1 = bit-reproducible)"));
    return o;
}

void apply_config_file(const std::string& path, RunConfig& cfg,
                       const SubcommandOptions& opts) {
    std::ifstream in(path);
    if (!in) throw UsageError("config file not found: " + path);
    std::map<std::string, std::string> kv;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        auto eq = line.find('=');
        if (eq == std::string::npos)
            throw UsageError("config file " + path + ": line without '=': " + line);
        kv[line.substr(0, eq)] = line.substr(eq + 1);
    }
    auto flag_given = [&](const std::string& key) {
        auto it = opts.by_key.find(key);
        return it != opts.by_key.end() && it->second != nullptr &&
               it->second->count() > 0;
    };
    auto take = [&](const std::string& key, auto& field) {
        auto it = kv.find(key);
        if (it == kv.end() || flag_given(key)) return;
        std::istringstream ss(it->second);
        if (!(ss >> field)) throw UsageError("config file: bad value for " + key);
    };
    take("seed", cfg.seed);
    take("mode", cfg.mode);
    take("coverage", cfg.coverage);
    take("n_random", cfg.n_random);
    take("oversampling", cfg.oversampling);
    take("power_iters", cfg.power_iters);
    take("threads", cfg.threads);
    take("k", cfg.k);
    take("dims", cfg.dims);
    take("lexicon", cfg.lexicon);
    take("synonyms", cfg.synonyms);
    take("embeddings", cfg.embeddings);
    take("out", cfg.out);
}

nlohmann::json config_echo(const RunConfig& cfg, std::initializer_list<const char*> keys) {
    nlohmann::json j = nlohmann::json::object();
    for (const char* key : keys) {
        std::string k = key;
        if (k == "seed") j[k] = cfg.seed;
        else if (k == "mode") j[k] = cfg.mode;
        else if (k == "coverage") j[k] = cfg.coverage;
        else if (k == "n_random") j[k] = cfg.n_random;
        else if (k == "oversampling") j[k] = cfg.oversampling;
        else if (k == "power_iters") j[k] = cfg.power_iters;
        else if (k == "threads") j[k] = cfg.threads;
        else if (k == "k") j[k] = cfg.k;
        else if (k == "lexicon") j[k] = cfg.lexicon;
        else if (k == "synonyms") j[k] = cfg.synonyms;
        else if (k == "embeddings") j[k] = cfg.embeddings;
    }
    return j;
}

EtymologicalGraph load_graph(const RunConfig& cfg, std::size_t* merged = nullptr) {
    auto in = open_input(cfg.lexicon, "lexicon");
    ParseResult parsed = parse_lexicon(in);
    if (merged) *merged = parsed.merged_lines;
    return build_graph(parsed.entries);
}

int cmd_stats(const RunConfig& cfg) {
    std::size_t merged = 0;
    EtymologicalGraph g = load_graph(cfg, &merged);
    GraphStats s = graph_stats(g);
    nlohmann::json j = to_json(s);
    j["merged_lexicon_lines"] = merged;
    j["config"] = config_echo(cfg, {"lexicon"});
    if (!cfg.dump_matrix.empty()) {
        auto bi = biadjacency(g);
        auto out = open_output(cfg.dump_matrix);
        bi.matrix.write_matrix_market(out);
    }
    if (cfg.out.empty()) {
        std::cout << j.dump(2) << '\n';
    } else {
        open_output(cfg.out) << j.dump(2) << '\n';
    }
    return 0;
}

int cmd_embed(const RunConfig& cfg) {
    EtymologicalGraph g = load_graph(cfg);
    auto bi = biadjacency(g);
    SvdResult r;
    try {
        r = truncated_svd(bi.matrix, cfg.k, cfg.seed, cfg.oversampling,
                          cfg.power_iters, cfg.threads);
    } catch (const std::invalid_argument& e) {
        throw UsageError(std::string("factorization: ") + e.what());
    }
    std::map<std::string, std::string> meta = {
        {"graph_hash", std::to_string(g.content_hash())},
        {"k", std::to_string(cfg.k)},
        {"seed", std::to_string(cfg.seed)},
        {"mode", cfg.mode},
        {"oversampling", std::to_string(r.oversampling)},
        {"power_iters", std::to_string(cfg.power_iters)},
        {"threads", std::to_string(cfg.threads)},
        {"lexicon", cfg.lexicon},
    };
    EmbeddingSet e = derive_embeddings(r, bi.word_index, cfg.sigma_weight, meta);
    if (cfg.out.empty()) throw UsageError("embed requires --out");
    {
        auto out = open_output(cfg.out);
        export_embeddings(e, out);
    }
    {
        auto meta_out = open_output(cfg.out + ".meta");
        write_metadata(e.provenance(), meta_out);
    }
    return 0;
}

int cmd_eval(const RunConfig& cfg) {
    auto emb_in = open_input(cfg.embeddings, "embeddings");
    EmbeddingSet e = import_embeddings(emb_in);
    auto syn_in = open_input(cfg.synonyms, "synonyms");
    SynonymPairs syn = load_synonym_pairs(syn_in, e, cfg.synonyms);
    std::optional<EvalResult> res;
    try {
        res = evaluate(e, syn, cfg.n_random, derive_seed(cfg.seed, "eval.random_pairs"),
                       similarity_mode_from_string(cfg.mode), cfg.coverage);
    } catch (const std::invalid_argument& ex) {
        throw UsageError(std::string("eval: ") + ex.what());
    }
    nlohmann::json j = to_json(res->report);
    j["synonyms_dropped_oov"] = syn.dropped_oov;
    j["synonyms_self_removed"] = syn.self_pairs_removed;
    j["synonyms_duplicates_removed"] = syn.duplicates_removed;
    j["config"] = config_echo(cfg, {"embeddings", "synonyms", "seed", "mode",
                                    "coverage", "n_random", "threads"});
    if (cfg.out.empty()) {
        std::cout << j.dump(2) << '\n';
    } else {
        open_output(cfg.out) << j.dump(2) << '\n';
        auto rnd = open_output(cfg.out + ".random.csv");
        res->random_dist.write_csv(rnd);
        auto snd = open_output(cfg.out + ".synonyms.csv");
        res->synonym_dist.write_csv(snd);
    }
    return 0;
}

EvalConfig eval_config(const RunConfig& cfg) {
    EvalConfig ec;
    ec.seed = cfg.seed;
    ec.mode = similarity_mode_from_string(cfg.mode);
    ec.coverage = cfg.coverage;
    ec.n_random = cfg.n_random;
    ec.oversampling = cfg.oversampling;
    ec.power_iterations = cfg.power_iters;
    ec.threads = cfg.threads;
    return ec;
}

void echo_csv_config(std::ostream& out, const RunConfig& cfg) {
    out << "# seed=" << cfg.seed << " mode=" << cfg.mode
        << " coverage=" << cfg.coverage << " n_random=" << cfg.n_random
        << " oversampling=" << cfg.oversampling
        << " power_iters=" << cfg.power_iters << " threads=" << cfg.threads << '\n';
}

int cmd_sweep(const RunConfig& cfg) {
    EtymologicalGraph g = load_graph(cfg);
    auto syn_in = open_input(cfg.synonyms, "synonyms");
    SynonymPairs syn = load_synonym_pairs(
        syn_in, [&](const std::string& w) { return g.word_index().count(w) > 0; },
        cfg.synonyms);
    std::vector<SweepRow> rows;
    try {
        rows = dimension_sweep(g, parse_dims(cfg.dims), syn, eval_config(cfg));
    } catch (const std::invalid_argument& ex) {
        throw UsageError(std::string("sweep: ") + ex.what());
    }
    if (cfg.out.empty()) {
        echo_csv_config(std::cout, cfg);
        write_sweep_csv(rows, std::cout);
    } else {
        auto out = open_output(cfg.out);
        echo_csv_config(out, cfg);
        write_sweep_csv(rows, out);
    }
    return 0;
}

int cmd_bench(const RunConfig& cfg) {
    std::vector<BenchRow> rows;
    try {
        if (!cfg.lexicon.empty()) {
            EtymologicalGraph g = load_graph(cfg);
            auto bi = biadjacency(g);
            rows = benchmark_factorization(bi.matrix, parse_dims(cfg.dims), cfg.seed,
                                           cfg.oversampling, cfg.power_iters,
                                           cfg.threads);
        } else if (!cfg.dump_matrix.empty()) {
            auto in = open_input(cfg.dump_matrix, "matrix");
            SparseMatrix a = SparseMatrix::read_matrix_market(in);
            rows = benchmark_factorization(a, parse_dims(cfg.dims), cfg.seed,
                                           cfg.oversampling, cfg.power_iters,
                                           cfg.threads);
        } else {
            throw UsageError("bench requires --lexicon or --matrix");
        }
    } catch (const std::invalid_argument& ex) {
        throw UsageError(std::string("bench: ") + ex.what());
    }
    if (cfg.out.empty()) {
        echo_csv_config(std::cout, cfg);
        write_bench_csv(rows, std::cout);
    } else {
        auto out = open_output(cfg.out);
        echo_csv_config(out, cfg);
        write_bench_csv(rows, out);
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Etymology-based word embeddings: build, factorize, evaluate"};
    app.require_subcommand(1);

    RunConfig cfg;
    std::string config_path;
    if (const char* env = std::getenv("ETYMOGRAPH_CONFIG")) config_path = env;

    auto* stats = app.add_subcommand("stats", "Graph statistics for a lexicon");
    auto* embed = app.add_subcommand("embed", "Build graph, factorize, export embeddings");
    auto* eval = app.add_subcommand("eval", "Evaluate embeddings on synonym discovery");
    auto* sweep = app.add_subcommand("sweep", "Evaluate across several dimensions");
    auto* bench = app.add_subcommand("bench", "Time the factorization per dimension");

    std::map<CLI::App*, SubcommandOptions> opts;
    for (CLI::App* cmd : {stats, embed, eval, sweep, bench}) {
        SubcommandOptions o = add_common_options(cmd, cfg);
        o.add("out", cmd->add_option("--out", cfg.out, "Output path"));
        cmd->add_option("--config", config_path,
                        "Flat key=value config file (flags take precedence; "
                        "ETYMOGRAPH_CONFIG is the fallback)");
        opts.emplace(cmd, std::move(o));
    }
    for (CLI::App* cmd : {stats, embed, sweep, bench})
        opts.at(cmd).add("lexicon",
                         cmd->add_option("--lexicon", cfg.lexicon, "Lexicon file"));
    for (CLI::App* cmd : {eval, sweep})
        opts.at(cmd).add("synonyms",
                         cmd->add_option("--synonyms", cfg.synonyms, "Synonym pair file"));
    opts.at(eval).add("embeddings", eval->add_option("--embeddings", cfg.embeddings,
                                                     "Embedding file to evaluate"));
    opts.at(embed).add("k", embed->add_option("--k", cfg.k, "Embedding dimension"));
    embed->add_option("--sigma-weight", cfg.sigma_weight,
                      "Experimental Sigma^alpha scaling of the vectors (default 0)");
    for (CLI::App* cmd : {sweep, bench})
        opts.at(cmd).add("dims", cmd->add_option("--dims", cfg.dims,
                                                 "Comma-separated dimension list"));
    stats->add_option("--dump-matrix", cfg.dump_matrix,
                      "Also write the biadjacency matrix (Matrix Market)");
    bench->add_option("--matrix", cfg.dump_matrix,
                      "Benchmark a Matrix Market file instead of a lexicon");

    try {
        app.parse(argc, argv);
        CLI::App* active = app.get_subcommands().front();
        if (!config_path.empty()) apply_config_file(config_path, cfg, opts.at(active));

        if (active == stats) {
            if (cfg.lexicon.empty()) throw UsageError("stats requires --lexicon");
            return cmd_stats(cfg);
        }
        if (active == embed) {
            if (cfg.lexicon.empty()) throw UsageError("embed requires --lexicon");
            return cmd_embed(cfg);
        }
        if (active == eval) {
            if (cfg.embeddings.empty() || cfg.synonyms.empty())
                throw UsageError("eval requires --embeddings and --synonyms");
            return cmd_eval(cfg);
        }
        if (active == sweep) {
            if (cfg.lexicon.empty() || cfg.synonyms.empty())
                throw UsageError("sweep requires --lexicon and --synonyms");
            return cmd_sweep(cfg);
        }
        if (cfg.lexicon.empty() && cfg.dump_matrix.empty())
            throw UsageError("bench requires --lexicon or --matrix");
        return cmd_bench(cfg);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    } catch (const UsageError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::runtime_error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << '\n';
        return 1;
    }
}
