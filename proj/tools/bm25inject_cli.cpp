// Command-line front end: index, retrieve, rerank, fuse, sweep, eval.
//
// Exit codes: 0 success, 1 usage error, 2 data error, 3 scorer transport error.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "bm25inject/bm25inject.hpp"

namespace {

using namespace bm25inject;

constexpr int exit_ok = 0;
constexpr int exit_usage = 1;
constexpr int exit_data = 2;
constexpr int exit_transport = 3;

void print_warning(std::string_view msg)
{
    std::cerr << "warning: " << msg << '\n';
}

/// Writes to the named file, or stdout for "-".
class output_target {
  public:
    explicit output_target(const std::string& path)
    {
        if (path != "-") {
            m_file.open(path, std::ios::binary | std::ios::trunc);
            if (!m_file) {
                throw data_error("cannot open '" + path + "' for writing");
            }
        }
        m_path = path;
    }

    auto stream() -> std::ostream& { return m_path == "-" ? std::cout : m_file; }

    void close()
    {
        stream().flush();
        if (!stream()) {
            throw data_error("failed writing '" + m_path + "'");
        }
    }

  private:
    std::string m_path;
    std::ofstream m_file;
};

auto load_index(const std::string& path) -> InvertedIndex
{
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw data_error("cannot open index '" + path + "'");
    }
    return InvertedIndex::load(in);
}

auto format_value(double v) -> std::string
{
    return io::format_score(v);
}

// Options shared by rerank (and by fuse for the BM25 side).
struct NormFlags {
    std::optional<std::string> method;
    std::optional<std::string> scope;
    std::optional<std::string> repr;
    std::optional<std::string> global_stats;

    void add_to(CLI::App& cmd)
    {
        cmd.add_option("--norm", method, "BM25 normalization: minmax|standard|sum|original");
        cmd.add_option("--scope", scope, "normalization scope: local|global");
        cmd.add_option("--repr", repr, "token representation: float|int");
        cmd.add_option("--global-stats", global_stats, "global min,max,mean,std (default 0,50,42,6)");
    }

    void apply(NormalizationConfig& cfg) const
    {
        if (method) {
            cfg.method = parse_norm_method(*method);
            if (cfg.method == NormMethod::sum && !scope) {
                cfg.scope = NormScope::local;
            }
        }
        if (scope) {
            cfg.scope = parse_norm_scope(*scope);
        }
        if (repr) {
            cfg.representation = parse_representation(*repr);
        }
        if (global_stats) {
            cfg.global = parse_global_stats(*global_stats);
        }
    }
};

struct Options {
    std::string config_path;
    ToolkitConfig cfg;

    // index
    std::string collection;
    std::string index_path;
    std::optional<std::string> stemming;
    bool no_lowercase = false;
    std::optional<std::string> stopwords;

    // retrieve / rerank
    std::string queries;
    std::optional<std::size_t> k;
    std::optional<double> k1;
    std::optional<double> b;
    std::string output = "-";
    std::optional<std::string> tag;

    std::string run_in;
    std::optional<std::string> scorer_spec;
    bool inject = false;
    bool no_inject = false;
    NormFlags norm;
    std::optional<std::size_t> depth;
    std::optional<std::size_t> query_cap;
    std::optional<std::size_t> passage_cap;
    bool mask_exact_match = false;
    std::optional<std::string> mask_literal;
    std::optional<std::size_t> batch_size;
    std::optional<std::size_t> in_flight;
    std::optional<std::size_t> timeout_ms;

    // fuse / sweep
    std::string run_a;
    std::string run_b;
    std::optional<std::string> method;
    std::optional<double> alpha;
    std::string qrels;
    NormFlags bm25_norm;
    std::optional<std::string> grid;
    std::size_t steps = 10;
    std::string metrics = "mrr@10,ndcg@10,map@1000";

    // eval
    std::string run;
    bool per_query = false;
    bool table = false;
    std::optional<std::string> compare;
    std::size_t num_comparisons = 1;
    bool by_type = false;
    std::optional<std::string> overlap;
    std::size_t overlap_k = 10;
    int rel_threshold = 1;
};

void load_config_if_any(Options& o)
{
    if (!o.config_path.empty()) {
        load_config(o.config_path, o.cfg);
    }
}

auto parse_metrics(const std::string& list) -> std::vector<MetricId>
{
    std::vector<MetricId> out;
    for (auto const& m : split_commas(list)) {
        out.push_back(MetricId::parse(m));
    }
    return out;
}

auto cmd_index(Options& o) -> int
{
    load_config_if_any(o);
    auto tok = o.cfg.tokenizer;
    if (o.stemming) {
        tok.stemming = parse_stemming(*o.stemming);
    }
    if (o.no_lowercase) {
        tok.lowercase = false;
    }
    if (o.stopwords) {
        tok.stopwords.clear();
        for (auto& w : split_commas(*o.stopwords)) {
            if (!w.empty()) {
                tok.stopwords.insert(tok.lowercase ? ascii_lower(w) : w);
            }
        }
    }
    auto index = io::index_collection_tsv(o.collection, tok);
    std::ofstream out(o.index_path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw data_error("cannot open '" + o.index_path + "' for writing");
    }
    index.save(out);
    out.close();
    if (!out) {
        throw data_error("failed writing '" + o.index_path + "'");
    }
    std::cout << "N=" << index.doc_count() << "\tavg_doc_length=" << format_value(index.avg_doc_length())
              << "\tvocabulary=" << index.vocabulary_size() << '\n';
    return exit_ok;
}

auto cmd_retrieve(Options& o) -> int
{
    load_config_if_any(o);
    auto params = o.cfg.bm25;
    if (o.k1) params.k1 = *o.k1;
    if (o.b) params.b = *o.b;
    params.validate();
    auto k = o.k.value_or(o.cfg.retrieve_k);
    if (k == 0) {
        throw usage_error("--k must be positive");
    }
    auto index = load_index(o.index_path);
    auto queries = io::read_queries_tsv(o.queries);
    RunSet runs;
    for (auto const& [qid, text] : queries) {
        auto list = retrieve_topk(index, text, k, params, qid);
        if (list.empty()) {
            print_warning("query " + qid + " matched no document; omitted from the run");
            continue;
        }
        runs.emplace(qid, std::move(list));
    }
    output_target out(o.output);
    io::write_trec_run(out.stream(), runs, o.tag.value_or("bm25"));
    out.close();
    return exit_ok;
}

auto cmd_rerank(Options& o) -> int
{
    load_config_if_any(o);
    auto rcfg = o.cfg.rerank;
    if (o.inject && o.no_inject) {
        throw usage_error("--inject and --no-inject are mutually exclusive");
    }
    if (o.inject) rcfg.injection = true;
    if (o.no_inject) rcfg.injection = false;
    o.norm.apply(rcfg.normalization);
    if (o.depth) rcfg.depth = *o.depth;
    if (o.query_cap) rcfg.query_token_cap = *o.query_cap;
    if (o.passage_cap) rcfg.passage_token_cap = *o.passage_cap;
    if (o.mask_exact_match) rcfg.mask_exact_match = true;
    if (o.mask_literal) rcfg.mask_literal = *o.mask_literal;
    rcfg.validate();

    auto handle = o.cfg.scorer;
    if (o.scorer_spec) {
        auto parsed = parse_scorer_spec(*o.scorer_spec);
        handle.kind = parsed.kind;
        handle.endpoint = parsed.endpoint;
    }
    if (o.batch_size) handle.batch_size = *o.batch_size;
    if (o.in_flight) handle.max_in_flight = *o.in_flight;
    if (o.timeout_ms) handle.timeout = std::chrono::milliseconds(*o.timeout_ms);
    if (handle.batch_size == 0) {
        throw usage_error("--batch-size must be positive");
    }

    auto index = load_index(o.index_path);
    auto candidates = io::read_trec_run(o.run_in, print_warning);
    auto queries = io::read_queries_tsv(o.queries);
    auto s = make_scorer(handle);
    auto passages = index_passages(index);

    RunSet out_runs;
    for (auto const& [qid, list] : candidates) {
        auto text = queries.find(qid);
        if (text == queries.end()) {
            throw data_error("query '" + qid + "' of the run has no text in '" + o.queries + "'");
        }
        out_runs.emplace(qid, rerank(text->second, list, passages, *s, handle, rcfg, print_warning));
    }
    output_target out(o.output);
    io::write_trec_run(out.stream(), out_runs, o.tag.value_or(rcfg.injection ? "ce_bm25cat" : "ce_cat"));
    out.close();
    return exit_ok;
}

auto cmd_fuse(Options& o) -> int
{
    load_config_if_any(o);
    auto fcfg = o.cfg.fusion;
    if (o.method) fcfg.method = parse_fusion_method(*o.method);
    if (o.alpha) fcfg.alpha = *o.alpha;
    o.bm25_norm.apply(fcfg.bm25_normalization);
    fcfg.validate();

    auto bm25 = io::read_trec_run(o.run_a, print_warning);
    auto ce = io::read_trec_run(o.run_b, print_warning);
    std::optional<NBModel> model;
    if (fcfg.method == FusionMethod::naive_bayes) {
        if (o.qrels.empty()) {
            throw usage_error("naive bayes fusion needs --qrels for training labels");
        }
        auto qrels = io::read_qrels(o.qrels);
        EvalOptions eo{o.rel_threshold};
        auto samples = nb_training_samples(bm25, ce, qrels, fcfg, eo);
        model = nb_fit(samples);
    }
    auto fused = fuse_runs(bm25, ce, fcfg, model ? &*model : nullptr, print_warning);
    output_target out(o.output);
    io::write_trec_run(out.stream(), fused, o.tag.value_or("fused"));
    out.close();
    return exit_ok;
}

auto cmd_sweep(Options& o) -> int
{
    auto bm25 = io::read_trec_run(o.run_a, print_warning);
    auto ce = io::read_trec_run(o.run_b, print_warning);
    auto qrels = io::read_qrels(o.qrels);
    auto grid = o.grid ? parse_alpha_grid(*o.grid) : alpha_grid(o.steps);
    auto rows = sweep_alpha(bm25, ce, qrels, grid, parse_metrics(o.metrics), EvalOptions{o.rel_threshold});
    output_target out(o.output);
    out.stream() << "alpha\tmetric\tvalue\n";
    for (auto const& r : rows) {
        char alpha[32];
        std::snprintf(alpha, sizeof alpha, "%.4g", r.alpha);
        out.stream() << alpha << '\t' << r.metric.name() << '\t' << format_value(r.value) << '\n';
    }
    out.close();
    return exit_ok;
}

auto cmd_eval(Options& o) -> int
{
    auto runs = io::read_trec_run(o.run, print_warning);
    auto qrels = io::read_qrels(o.qrels);
    auto metrics = parse_metrics(o.metrics);
    EvalOptions eo{o.rel_threshold};
    auto report = evaluate(runs, qrels, metrics, eo);

    std::optional<EvalReport> other;
    if (o.compare) {
        auto runs_b = io::read_trec_run(*o.compare, print_warning);
        other = evaluate(runs_b, qrels, metrics, eo);
    }
    std::vector<std::pair<MetricId, std::vector<TypeRow>>> by_type;
    if (o.by_type) {
        if (o.queries.empty()) {
            throw usage_error("--by-type needs --queries");
        }
        auto texts = io::read_queries_tsv(o.queries);
        for (auto const& m : metrics) {
            by_type.emplace_back(m, per_type_report(runs, qrels, texts, m, eo));
        }
    }
    std::optional<OverlapResult> overlap;
    if (o.overlap) {
        auto runs_b = io::read_trec_run(*o.overlap, print_warning);
        overlap = overlap_at_k(runs, runs_b, qrels, o.overlap_k, eo);
    }

    output_target out(o.output);
    auto& os = out.stream();
    if (o.table) {
        os << "metric      queries  value\n";
        for (auto const& r : report.results) {
            char line[128];
            std::snprintf(line, sizeof line, "%-11s %7zu  %.4f\n", r.metric.name().c_str(), r.per_query.size(),
                          r.mean);
            os << line;
        }
        for (auto const& [m, rows] : by_type) {
            os << "\nper type (" << m.name() << ")\ntype     queries  value\n";
            for (auto const& row : rows) {
                char line[128];
                std::snprintf(line, sizeof line, "%-8s %7zu  %.4f\n", std::string(to_string(row.type)).c_str(),
                              row.query_count, row.mean);
                os << line;
            }
        }
        if (overlap) {
            char line[160];
            std::snprintf(line, sizeof line, "\noverlap of relevant top-%zu: micro %.2f%%  macro %.2f%%\n",
                          o.overlap_k, overlap->micro_percent, overlap->macro_percent);
            os << line;
        }
    } else {
        for (auto const& r : report.results) {
            if (o.per_query) {
                for (auto const& [qid, v] : r.per_query) {
                    os << r.metric.name() << '\t' << qid << '\t' << format_value(v) << '\n';
                }
            }
            os << r.metric.name() << "\tALL\t" << format_value(r.mean) << '\n';
        }
        for (auto const& [m, rows] : by_type) {
            for (auto const& row : rows) {
                os << "type\t" << m.name() << '\t' << to_string(row.type) << '\t' << row.query_count << '\t'
                   << format_value(row.mean) << '\n';
            }
        }
        if (overlap) {
            os << "overlap@" << o.overlap_k << "\tmicro\t" << format_value(overlap->micro_percent) << '\n';
            os << "overlap@" << o.overlap_k << "\tmacro\t" << format_value(overlap->macro_percent) << '\n';
        }
    }

    if (other) {
        for (auto const& a : report.results) {
            auto const* b = other->find(a.metric);
            std::vector<double> va;
            std::vector<double> vb;
            for (auto const& [qid, v] : a.per_query) {
                auto it = b->per_query.find(qid);
                if (it != b->per_query.end()) {
                    va.push_back(v);
                    vb.push_back(it->second);
                }
            }
            os << "# significance " << a.metric.name() << ": " << o.run << " vs " << *o.compare << ": ";
            if (va.size() < 2) {
                os << "not enough paired queries\n";
                continue;
            }
            auto sig = paired_ttest_bonferroni(va, vb, o.num_comparisons);
            char line[256];
            if (sig.p_undefined) {
                std::snprintf(line, sizeof line, "n=%zu t=undefined p=undefined (zero variance) threshold=%.6g not significant\n",
                              sig.n, sig.corrected_threshold);
            } else {
                std::snprintf(line, sizeof line, "n=%zu t=%.6g p=%.6g threshold=%.6g %s\n", sig.n, sig.t,
                              sig.p_value, sig.corrected_threshold,
                              sig.significant ? "significant" : "not significant");
            }
            os << line;
        }
    }
    out.close();
    return exit_ok;
}

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"BM25 retrieval, score-injection re-ranking, fusion and evaluation"};
    app.require_subcommand(1);
    Options o;

    auto* index = app.add_subcommand("index", "build an inverted index from collection.tsv");
    index->add_option("--collection", o.collection, "collection.tsv (doc_id TAB text)")->required();
    index->add_option("--index", o.index_path, "output index file")->required();
    index->add_option("--stem", o.stemming, "none|porter");
    index->add_flag("--no-lowercase", o.no_lowercase, "keep case");
    index->add_option("--stopwords", o.stopwords, "comma-separated stopword list");
    index->add_option("--config", o.config_path, "key = value config file");

    auto* retrieve = app.add_subcommand("retrieve", "BM25 top-k retrieval to a TREC run");
    retrieve->add_option("--index", o.index_path)->required();
    retrieve->add_option("--queries", o.queries, "queries.tsv (qid TAB text)")->required();
    retrieve->add_option("--k", o.k, "depth (default 1000)");
    retrieve->add_option("--k1", o.k1);
    retrieve->add_option("--b", o.b);
    retrieve->add_option("--output,-o", o.output);
    retrieve->add_option("--tag", o.tag);
    retrieve->add_option("--config", o.config_path);

    auto* rerank_cmd = app.add_subcommand("rerank", "re-rank a run with a cross-encoder scorer");
    rerank_cmd->add_option("--index", o.index_path)->required();
    rerank_cmd->add_option("--run", o.run_in, "first-stage TREC run")->required();
    rerank_cmd->add_option("--queries", o.queries)->required();
    rerank_cmd->add_option("--scorer", o.scorer_spec, "synthetic | http:<url> | stdio:<cmd>");
    rerank_cmd->add_flag("--inject", o.inject, "inject the BM25 score token (default)");
    rerank_cmd->add_flag("--no-inject", o.no_inject, "plain query/passage input");
    o.norm.add_to(*rerank_cmd);
    rerank_cmd->add_option("--depth", o.depth);
    rerank_cmd->add_option("--query-cap", o.query_cap);
    rerank_cmd->add_option("--passage-cap", o.passage_cap);
    rerank_cmd->add_flag("--mask-exact-match", o.mask_exact_match, "mask passage words absent from the query");
    rerank_cmd->add_option("--mask-literal", o.mask_literal);
    rerank_cmd->add_option("--batch-size", o.batch_size);
    rerank_cmd->add_option("--in-flight", o.in_flight);
    rerank_cmd->add_option("--timeout-ms", o.timeout_ms);
    rerank_cmd->add_option("--output,-o", o.output);
    rerank_cmd->add_option("--tag", o.tag);
    rerank_cmd->add_option("--config", o.config_path);

    auto* fuse_cmd = app.add_subcommand("fuse", "fuse a BM25 run (a) with a cross-encoder run (b)");
    fuse_cmd->add_option("--run-a", o.run_a, "BM25 run")->required();
    fuse_cmd->add_option("--run-b", o.run_b, "cross-encoder run")->required();
    fuse_cmd->add_option("--method", o.method, "sum|max|weighted|nb");
    fuse_cmd->add_option("--alpha", o.alpha, "BM25 weight for weighted fusion");
    fuse_cmd->add_option("--qrels", o.qrels, "training labels for nb");
    fuse_cmd->add_option("--bm25-norm", o.bm25_norm.method, "BM25 normalization for sum|max|nb");
    fuse_cmd->add_option("--bm25-scope", o.bm25_norm.scope);
    fuse_cmd->add_option("--rel-threshold", o.rel_threshold);
    fuse_cmd->add_option("--output,-o", o.output);
    fuse_cmd->add_option("--tag", o.tag);
    fuse_cmd->add_option("--config", o.config_path);

    auto* sweep_cmd = app.add_subcommand("sweep", "evaluate weighted fusion over a grid of alpha values");
    sweep_cmd->add_option("--run-a", o.run_a, "BM25 run")->required();
    sweep_cmd->add_option("--run-b", o.run_b, "cross-encoder run")->required();
    sweep_cmd->add_option("--qrels", o.qrels)->required();
    sweep_cmd->add_option("--grid", o.grid, "comma-separated alpha values");
    sweep_cmd->add_option("--steps", o.steps, "uniform grid 0..1 with this many steps (default 10)");
    sweep_cmd->add_option("--metrics", o.metrics);
    sweep_cmd->add_option("--rel-threshold", o.rel_threshold);
    sweep_cmd->add_option("--output,-o", o.output);

    auto* eval_cmd = app.add_subcommand("eval", "evaluate a run against qrels");
    eval_cmd->add_option("--run", o.run)->required();
    eval_cmd->add_option("--qrels", o.qrels)->required();
    eval_cmd->add_option("--metrics", o.metrics, "comma list, default mrr@10,ndcg@10,map@1000");
    eval_cmd->add_flag("--per-query", o.per_query);
    eval_cmd->add_flag("--table", o.table, "human-readable table instead of TSV");
    eval_cmd->add_option("--compare", o.compare, "second run for a paired t-test");
    eval_cmd->add_option("--num-comparisons", o.num_comparisons, "Bonferroni factor");
    eval_cmd->add_flag("--by-type", o.by_type, "break down by query answer type");
    eval_cmd->add_option("--queries", o.queries, "queries.tsv, needed by --by-type");
    eval_cmd->add_option("--overlap", o.overlap, "second run for relevant top-k overlap");
    eval_cmd->add_option("--overlap-k", o.overlap_k);
    eval_cmd->add_option("--rel-threshold", o.rel_threshold);
    eval_cmd->add_option("--output,-o", o.output);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return exit_usage;
    }

    try {
        if (index->parsed()) return cmd_index(o);
        if (retrieve->parsed()) return cmd_retrieve(o);
        if (rerank_cmd->parsed()) return cmd_rerank(o);
        if (fuse_cmd->parsed()) return cmd_fuse(o);
        if (sweep_cmd->parsed()) return cmd_sweep(o);
        if (eval_cmd->parsed()) return cmd_eval(o);
    } catch (const transport_error& e) {
        std::cerr << "error: " << e.what();
        if (!e.pair_ids().empty()) {
            std::cerr << " (batch of " << e.pair_ids().size() << " pairs, first " << e.pair_ids().front() << ")";
        }
        std::cerr << '\n';
        return exit_transport;
    } catch (const usage_error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return exit_usage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return exit_data;
    }
    return exit_usage;
}
