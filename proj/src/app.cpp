#include "trumor/app.hpp"

#include <chrono>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>

#include "CLI11.hpp"
#include "trumor/bench.hpp"
#include "trumor/embed.hpp"
#include "trumor/errors.hpp"
#include "trumor/extract.hpp"
#include "trumor/text.hpp"

namespace trumor::app {

namespace {

std::unique_ptr<embed::EmbeddingProvider> make_provider(const Config& cfg) {
    if (cfg.embed_provider == "remote") {
        embed::RemoteConfig rc;
        rc.url = cfg.embed_url;
        rc.timeout = std::chrono::milliseconds(static_cast<long>(cfg.embed_timeout * 1000.0));
        rc.max_in_flight = cfg.embed_max_in_flight;
        return std::make_unique<embed::RemoteEmbeddingProvider>(embed::remote_config_from_env(rc));
    }
    return std::make_unique<embed::HashEmbeddingProvider>(cfg.embed_dim);
}

graphrag::ContradictionRules make_rules(const Config& cfg) {
    if (cfg.antonyms.empty()) {
        auto rules = graphrag::default_contradiction_rules();
        return graphrag::ContradictionRules(
            std::vector<std::pair<std::string, std::string>>(rules.antonym_pairs().begin(), rules.antonym_pairs().end()),
            cfg.negation_markers);
    }
    return graphrag::ContradictionRules(cfg.antonyms, cfg.negation_markers);
}

topics::TopicModel train_on_article(const std::string& text, const Config& cfg) {
    std::vector<topics::Sentence> corpus;
    for (const auto& s : text::split_sentences(text)) {
        auto toks = text::tokenize(s);
        if (!toks.empty()) corpus.push_back(std::move(toks));
    }
    topics::LdaParams params;
    params.num_topics = cfg.k;
    params.iterations = cfg.lda_iterations;
    params.seed = cfg.seed;
    return topics::train_lda(corpus, params);
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InputError("cannot read " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::string utc_now() {
    const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

}  // namespace

int exit_code(graphrag::Label label) {
    switch (label) {
        case graphrag::Label::True: return kTrue;
        case graphrag::Label::False: return kFalse;
        case graphrag::Label::Undetermined: return kUndetermined;
    }
    return kError;
}

CheckResult check(const CheckRequest& req, const kg::KnowledgeBase& kb, const Config& cfg) {
    cfg.validate();
    extract::QueryGraph q;
    if (cfg.extractor == "llm") {
        if (!req.llm) throw InputError("extractor = llm requires an LLM client");
        const auto tmpl = req.prompt ? *req.prompt : llm::default_extraction_template();
        q = extract::extract_llm(*req.llm, req.text, tmpl, llm::default_fewshot_examples(), cfg.llm_fallback);
    } else if (req.article) {
        const auto model = req.model ? *req.model : train_on_article(req.text, cfg);
        const auto provider = make_provider(cfg);
        extract::ArticleConfig ac;
        ac.eta = cfg.eta;
        ac.alpha = cfg.alpha;
        ac.d = cfg.d;
        ac.tol = cfg.tol;
        ac.max_iter = cfg.max_iter;
        ac.summary_size = cfg.summary_size;
        ac.min_edge_weight = cfg.min_edge_weight;
        ac.health_keywords = cfg.health_keywords;
        q = extract::extract_article(req.text, model, *provider, ac);
    } else {
        q = extract::extract_rules(req.text);
    }

    const auto f = q.triple_weights.empty() ? graphrag::TripleWeightFn::constant_one()
                                            : graphrag::TripleWeightFn::tst_weighted(q.triple_weights);
    const auto graphs = kb.snapshot();
    CheckResult r;
    r.ranked = graphrag::retrieve(graphs, q.graph, f, cfg.top_n);
    const auto contradictions = graphrag::find_contradictions(graphs, q.graph, make_rules(cfg));
    r.verdict = graphrag::verdict(r.ranked, contradictions, cfg.theta_true, graphs);
    r.query = std::move(q.graph);
    return r;
}

namespace {


void apply_overrides(Config& cfg, const std::vector<std::string>& sets) {
    for (const auto& kv : sets) {
        const auto eq = kv.find('=');
        if (eq == std::string::npos) throw InputError("--set expects key=value, got '" + kv + "'");
        cfg.set(kv.substr(0, eq), kv.substr(eq + 1));
    }
    cfg.validate();
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Graph-based fact checking over health knowledge graphs", "trumor"};
    app.require_subcommand(1);
    std::string config_path;
    std::vector<std::string> sets;
    app.add_option("--config", config_path, "flat key = value config file");
    app.add_option("--set", sets, "override a config key (key=value), repeatable");

    // ingest
    auto* ingest = app.add_subcommand("ingest", "filter and load line-oriented triples into a KB snapshot");
    std::string ingest_in, ingest_out = "kb.json";
    bool ingest_merge = false;
    ingest->add_option("input,--input", ingest_in, "triples file")->required();
    ingest->add_option("--out", ingest_out, "KB snapshot path");
    ingest->add_flag("--merge", ingest_merge, "merge into an existing snapshot at --out");

    // train-topics
    auto* train = app.add_subcommand("train-topics", "train a sentence-level LDA model");
    std::string corpus_path, model_out = "topics.json";
    std::optional<int> train_k, train_iters;
    std::optional<std::uint64_t> train_seed;
    train->add_option("--corpus", corpus_path, "one sentence per line")->required();
    train->add_option("--k", train_k, "number of topics");
    train->add_option("--iters", train_iters, "Gibbs sweeps");
    train->add_option("--seed", train_seed, "RNG seed");
    train->add_option("--out", model_out, "model JSON path");

    // check
    auto* chk = app.add_subcommand("check", "fact-check a claim or article against a KB snapshot");
    std::string kb_path, claim, article_path, model_path, mock_path, prompt_path, extractor;
    std::optional<double> theta;
    std::optional<std::uint64_t> check_seed;
    chk->add_option("--kb", kb_path, "KB snapshot")->required();
    auto* claim_opt = chk->add_option("--claim", claim, "claim text");
    auto* article_opt = chk->add_option("--article", article_path, "article file");
    claim_opt->excludes(article_opt);
    chk->add_option("--model", model_path, "topic model JSON (article mode)");
    chk->add_option("--mock-llm", mock_path, "canned LLM responses separated by '---' lines");
    chk->add_option("--prompt", prompt_path, "few-shot prompt template file");
    chk->add_option("--extractor", extractor, "rules or llm");
    chk->add_option("--theta", theta, "similarity threshold for True");
    chk->add_option("--seed", check_seed, "RNG seed");

    // bench-convergence
    auto* bench_cmd = app.add_subcommand("bench-convergence", "TST convergence sweep on a Watts-Strogatz graph");
    bench::WSConfig ws;
    std::vector<double> ds = {0.6, 0.7, 0.8, 0.85, 0.9, 0.95};
    std::string bench_out = "bench_out";
    std::optional<double> bench_tol;
    std::optional<int> bench_max_iter;
    std::optional<std::uint64_t> bench_seed;
    bench_cmd->add_option("--n", ws.n, "vertices");
    bench_cmd->add_option("--k", ws.k, "even ring degree");
    bench_cmd->add_option("--p", ws.p_rewire, "rewiring probability");
    bench_cmd->add_option("--seed", bench_seed, "RNG seed");
    bench_cmd->add_option("--ds", ds, "damping factors")->delimiter(',');
    bench_cmd->add_option("--out", bench_out, "output directory");
    bench_cmd->add_option("--tol", bench_tol, "l1 stopping tolerance");
    bench_cmd->add_option("--max-iter", bench_max_iter, "iteration cap");

    // export-graph
    auto* exp = app.add_subcommand("export-graph", "export KB graphs as JSON or DOT");
    std::string exp_kb, exp_graph, exp_format = "json", exp_out;
    exp->add_option("--kb", exp_kb, "KB snapshot")->required();
    exp->add_option("--graph", exp_graph, "graph id (default: all)");
    exp->add_option("--format", exp_format, "json or dot")->check(CLI::IsMember({"json", "dot"}));
    exp->add_option("--out", exp_out, "output file (default: stdout)");

    std::vector<std::string> rev(args.rbegin(), args.rend());
    try {
        app.parse(rev);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return 0;
    } catch (const CLI::ParseError& e) {
        err << e.what() << '\n';
        return kError;
    }

    try {
        Config cfg = config_path.empty() ? Config{} : Config::load(config_path);
        apply_overrides(cfg, sets);

        if (ingest->parsed()) {
            std::ifstream in(ingest_in);
            if (!in) {
                err << "cannot open " << ingest_in << '\n';
                return kError;
            }
            const auto res = kg::ingest_triples(in, cfg.health_keywords, {ingest_in, utc_now()});
            kg::KnowledgeBase kb;
            if (ingest_merge && std::filesystem::exists(ingest_out)) kb = kg::KnowledgeBase::load(ingest_out);
            kb.merge(res.graphs);
            kb.save(ingest_out);
            out << "total=" << res.report.total << " kept=" << res.report.kept << " dropped=" << res.report.dropped
                << " malformed=" << res.report.malformed << " graphs=" << res.graphs.size() << '\n';
            return 0;
        }

        if (train->parsed()) {
            if (train_k) cfg.k = *train_k;
            if (train_iters) cfg.lda_iterations = *train_iters;
            if (train_seed) cfg.seed = *train_seed;
            cfg.validate();
            std::ifstream in(corpus_path);
            if (!in) {
                err << "cannot open " << corpus_path << '\n';
                return kError;
            }
            std::vector<topics::Sentence> corpus;
            std::string line;
            while (std::getline(in, line)) {
                auto toks = text::tokenize(line);
                if (!toks.empty()) corpus.push_back(std::move(toks));
            }
            topics::LdaParams params;
            params.num_topics = cfg.k;
            params.iterations = cfg.lda_iterations;
            params.seed = cfg.seed;
            const auto model = topics::train_lda(corpus, params);
            model.save(model_out);
            const auto health = topics::health_topics(model, cfg.health_keywords, cfg.alpha);
            for (int k = 0; k < model.num_topics(); ++k) {
                const bool h = std::find(health.topic_ids.begin(), health.topic_ids.end(), k) != health.topic_ids.end();
                out << "topic " << k << (h ? " [health]" : "") << ':';
                for (const auto& w : model.top_words(k, 10)) out << ' ' << w;
                out << '\n';
            }
            return 0;
        }

        if (chk->parsed()) {
            if (theta) cfg.theta_true = *theta;
            if (check_seed) cfg.seed = *check_seed;
            if (!extractor.empty()) cfg.extractor = extractor;
            if (!mock_path.empty()) cfg.extractor = "llm";
            cfg.validate();
            if (claim.empty() && article_path.empty()) {
                err << "check: one of --claim or --article is required\n";
                return kError;
            }
            const auto kb = kg::KnowledgeBase::load(kb_path);
            CheckRequest req;
            req.article = !article_path.empty();
            req.text = req.article ? read_file(article_path) : claim;
            if (!model_path.empty()) req.model = topics::TopicModel::load(model_path);
            if (!prompt_path.empty()) req.prompt = llm::load_template(prompt_path);
            if (cfg.extractor == "llm") {
                if (!mock_path.empty()) {
                    req.llm = llm::LLMClient::mock(llm::load_transcript(mock_path));
                } else {
                    llm::ClientConfig cc;
                    cc.endpoint = cfg.llm_endpoint;
                    cc.model = cfg.llm_model;
                    cc.timeout = std::chrono::milliseconds(static_cast<long>(cfg.llm_timeout * 1000.0));
                    cc.max_in_flight = cfg.llm_max_in_flight;
                    req.llm = llm::LLMClient::http(llm::client_config_from_env(cc));
                }
            }
            const auto res = check(req, kb, cfg);
            out << graphrag::to_json(res.verdict, req.text, cfg.hash()).dump(2) << '\n';
            return exit_code(res.verdict.label);
        }

        if (bench_cmd->parsed()) {
            if (bench_seed) ws.seed = *bench_seed; else ws.seed = cfg.seed;
            const double tol = bench_tol.value_or(cfg.tol);
            const int max_iter = bench_max_iter.value_or(cfg.max_iter);
            const auto g = bench::watts_strogatz(ws);
            const auto result = bench::run_sweep(g, bench::uniform_relevance(ws.n), ds, tol, max_iter, cfg.dense_eigen_bound);
            const auto files = bench::emit_csv(result, bench_out);
            out << bench::format_sweep_csv(result);
            out << "wrote " << files.size() << " files to " << bench_out << '\n';
            return 0;
        }

        if (exp->parsed()) {
            const auto kb = kg::KnowledgeBase::load(exp_kb);
            std::vector<kg::KnowledgeGraph> graphs;
            if (exp_graph.empty()) {
                graphs = kb.snapshot();
            } else {
                auto g = kb.find(kg::EntityId(exp_graph).label());
                if (!g) g = kb.find(exp_graph);
                if (!g) {
                    err << "no graph with id '" << exp_graph << "'\n";
                    return kError;
                }
                graphs.push_back(std::move(*g));
            }
            std::ostringstream body;
            if (exp_format == "dot") {
                for (const auto& g : graphs) body << kg::export_dot(g);
            } else {
                nlohmann::json j = nlohmann::json::array();
                for (const auto& g : graphs) j.push_back(kg::export_json(g));
                body << (graphs.size() == 1 && !exp_graph.empty() ? j[0] : j).dump(2) << '\n';
            }
            if (exp_out.empty()) {
                out << body.str();
            } else {
                std::ofstream f(exp_out);
                if (!f) throw InputError("cannot write " + exp_out);
                f << body.str();
            }
            return 0;
        }
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kError;
    }
    return kError;
}

}  // namespace trumor::app
