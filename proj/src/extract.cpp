#include "trumor/extract.hpp"

#include <algorithm>
#include <cctype>
#include <numeric>
#include <sstream>

#include "trumor/centrality.hpp"
#include "trumor/errors.hpp"
#include "trumor/text.hpp"
#include "trumor/tst.hpp"

namespace trumor::extract {

std::string to_string(Method m) { return m == Method::Llm ? "llm" : "rules"; }

LlmParseError::LlmParseError(std::vector<std::string> offending)
    : std::runtime_error([&] {
          std::string msg = "unparseable LLM triple lines:";
          for (const auto& l : offending) msg += "\n  " + l;
          return msg;
      }()),
      offending_(std::move(offending)) {}

namespace {

struct Word {
    std::string surface;
    std::string lower;
    bool boundary_after = false;  // comma, semicolon or colon follows
};

constexpr std::string_view kDoModals[] = {
    "do", "does", "did", "can", "could", "will", "would", "may", "might", "should", "must", "shall"};
constexpr std::string_view kBeHave[] = {"is", "are", "was", "were", "be", "been",
                                                     "has", "have", "had"};
constexpr std::string_view kVerbLemmas[] = {
    "cause",    "prevent",  "treat",     "cure",     "reduce",   "increase", "decrease", "spread",
    "contain",  "mandate",  "block",     "ban",      "kill",     "protect",  "transmit", "infect",
    "affect",   "require",  "approve",   "reject",   "recommend", "lead",    "help",     "produce",
    "develop",  "worsen",   "improve",   "trigger",  "boost",    "weaken",   "lower",    "raise",
    "support",  "oppose",   "link",      "combat",   "fight",    "stop",     "slow",     "sign",
    "report",   "show",     "confirm",   "deny",     "heal",     "harm",     "damage",   "alter",
    "change",   "contaminate", "carry",  "detect",   "vaccinate", "administer", "release", "distribute",
    "fund",     "restrict", "allow",     "enable",   "remove",   "eliminate", "eradicate",
    "shorten",  "extend",   "inhibit",   "suppress", "target",   "mimic",    "impair",   "destroy",
    "repair"};
constexpr std::string_view kDeterminers[] = {"the", "a", "an", "this", "that", "these"};

template <std::size_t N>
bool in(const std::string_view (&set)[N], std::string_view w) {
    return std::find(std::begin(set), std::end(set), w) != std::end(set);
}

bool ends_with(std::string_view w, std::string_view suf) {
    return w.size() >= suf.size() && w.substr(w.size() - suf.size()) == suf;
}

bool is_lexicon_verb(std::string_view w) {
    if (in(kVerbLemmas, w)) return true;
    auto strip = [&](std::string_view suf, std::string_view add) {
        if (!ends_with(w, suf) || w.size() <= suf.size() + 1) return false;
        std::string base(w.substr(0, w.size() - suf.size()));
        base += add;
        return in(kVerbLemmas, base);
    };
    return strip("s", "") || strip("es", "") || strip("ed", "") || strip("d", "") || strip("ing", "") ||
           strip("ing", "e") || strip("ies", "y") || strip("ied", "y");
}

bool looks_like_verb(std::string_view w) {
    if (w.size() <= 3 || !std::all_of(w.begin(), w.end(), [](unsigned char c) { return std::isalpha(c); }))
        return false;
    if (ends_with(w, "ed")) return true;
    return ends_with(w, "s") && !ends_with(w, "ss") && !ends_with(w, "us") && !ends_with(w, "is");
}

bool is_content(const Word& w) {
    return !w.lower.empty() && !text::is_stopword(w.lower) && !in(kDeterminers, w.lower) &&
           w.lower != "never";
}

std::vector<Word> words_of(const std::string& sentence) {
    std::vector<Word> out;
    std::istringstream in(sentence);
    std::string raw;
    while (in >> raw) {
        Word w;
        while (!raw.empty() && std::string_view("\"'()[]").find(raw.front()) != std::string_view::npos)
            raw.erase(raw.begin());
        while (!raw.empty() && std::string_view(",;:\"'()[]!?").find(raw.back()) != std::string_view::npos) {
            if (std::string_view(",;:").find(raw.back()) != std::string_view::npos) w.boundary_after = true;
            raw.pop_back();
        }
        // a final period belongs to the word only for dotted abbreviations ("A.Z.")
        if (!raw.empty() && raw.back() == '.') {
            const auto inner = raw.substr(0, raw.size() - 1);
            if (inner.find('.') == std::string::npos) raw.pop_back();
        }
        if (raw.empty()) {
            if (w.boundary_after && !out.empty()) out.back().boundary_after = true;
            continue;
        }
        w.surface = raw;
        w.lower = text::to_lower(raw);
        out.push_back(std::move(w));
    }
    return out;
}

struct VerbMatch {
    std::size_t index = 0;       // word holding the relation
    std::size_t object_from = 0;  // first word after the verb group
    std::string relation;
    bool negated = false;
};

bool split_contraction(const std::string& lower, std::string& aux) {
    if (lower == "can't" || lower == "cannot") {
        aux = "can";
        return true;
    }
    if (lower == "won't") {
        aux = "will";
        return true;
    }
    if (ends_with(lower, "n't")) {
        aux = lower.substr(0, lower.size() - 3);
        return true;
    }
    return false;
}

bool find_verb(const std::vector<Word>& ws, VerbMatch& m) {
    // auxiliaries and lexicon verbs first, then morphology
    for (std::size_t i = 1; i < ws.size(); ++i) {
        std::string aux = ws[i].lower;
        bool neg = split_contraction(ws[i].lower, aux);
        if (in(kDoModals, aux) || in(kBeHave, aux)) {
            std::size_t j = i + 1;
            if (j < ws.size() && (ws[j].lower == "not" || ws[j].lower == "never")) {
                neg = true;
                ++j;
            }
            if (j < ws.size() && (in(kDoModals, aux) || is_lexicon_verb(ws[j].lower) || ends_with(ws[j].lower, "ed") ||
                                  ends_with(ws[j].lower, "en"))) {
                m = {j, j + 1, ws[j].lower, neg};
            } else {
                m = {i, j, aux, neg};
            }
            return true;
        }
        if (ws[i].lower == "never" && i + 1 < ws.size()) {
            m = {i + 1, i + 2, ws[i + 1].lower, true};
            return true;
        }
        if (is_lexicon_verb(ws[i].lower)) {
            m = {i, i + 1, ws[i].lower, false};
            return true;
        }
    }
    for (std::size_t i = 1; i < ws.size(); ++i) {
        if (is_content(ws[i]) && looks_like_verb(ws[i].lower) && !ws[i - 1].boundary_after &&
            !in(kDeterminers, ws[i - 1].lower)) {
            m = {i, i + 1, ws[i].lower, false};
            return true;
        }
    }
    return false;
}

std::string join(const std::vector<Word>& ws, std::size_t b, std::size_t e) {
    std::string out;
    for (std::size_t i = b; i < e; ++i) {
        if (!out.empty()) out.push_back(' ');
        out += ws[i].surface;
    }
    return out;
}

}  // namespace

bool extract_sentence(const std::string& sentence, kg::Triple& out) {
    const auto ws = words_of(sentence);
    if (ws.size() < 3) return false;
    VerbMatch vm;
    if (!find_verb(ws, vm)) return false;
    const std::size_t verb_start = std::min(vm.index, vm.object_from);

    // leftmost noun chunk before the verb group
    std::size_t sb = 0;
    while (sb < verb_start && !is_content(ws[sb])) ++sb;
    if (sb >= verb_start) return false;
    std::size_t se = sb + 1;
    while (se < verb_start && is_content(ws[se]) && !ws[se - 1].boundary_after) ++se;
    // stop before the verb group (auxiliaries are not content words)
    std::size_t first_verb_word = vm.index;
    for (std::size_t i = sb; i < vm.index; ++i) {
        std::string aux = ws[i].lower;
        split_contraction(ws[i].lower, aux);
        if (in(kDoModals, aux) || in(kBeHave, aux) || ws[i].lower == "never") {
            first_verb_word = i;
            break;
        }
    }
    se = std::min(se, first_verb_word);
    if (se <= sb) return false;

    // rightmost noun chunk after the verb
    std::size_t oe = ws.size();
    while (oe > vm.object_from && !is_content(ws[oe - 1])) --oe;
    if (oe <= vm.object_from) return false;
    std::size_t ob = oe - 1;
    while (ob > vm.object_from && is_content(ws[ob - 1]) && !ws[ob - 1].boundary_after) --ob;

    const std::string relation = (vm.negated ? "not_" : "") + vm.relation;
    try {
        out = kg::Triple(join(ws, sb, se), relation, join(ws, ob, oe));
    } catch (const InputError&) {
        return false;
    }
    return true;
}

QueryGraph extract_rules(const std::string& text) {
    if (text::trim(text).empty()) throw InputError("extract_rules: empty text");
    QueryGraph q;
    q.graph = kg::KnowledgeGraph("query");
    q.source_claim = text;
    q.method = Method::Rules;
    for (const auto& s : text::split_sentences(text)) {
        kg::Triple t;
        if (extract_sentence(s, t)) q.graph.add(t);
    }
    if (q.graph.facts().empty()) throw ExtractionEmpty();
    return q;
}

QueryGraph extract_article(const std::string& text, const topics::TopicModel& model,
                           const embed::EmbeddingProvider& provider, const ArticleConfig& cfg) {
    const auto sentences = text::split_sentences(text);
    if (sentences.size() < 2) throw InputError("extract_article: article needs at least 2 sentences");

    std::vector<topics::TopicDistribution> dists;
    dists.reserve(sentences.size());
    for (const auto& s : sentences) dists.push_back(topics::infer_topics(model, text::tokenize(s)));
    const auto embeddings = provider.embed_batch(sentences);
    std::vector<embed::CombinedVector> vectors;
    for (std::size_t i = 0; i < sentences.size(); ++i)
        vectors.push_back(embed::combine(embeddings[i], dists[i], cfg.eta));

    const auto graph = centrality::build_sentence_graph(vectors, cfg.min_edge_weight);
    const auto central = centrality::rank_sentences(graph, cfg.d, cfg.tol, cfg.max_iter);
    const std::size_t m =
        cfg.summary_size > 0 ? std::min(cfg.summary_size, sentences.size()) : centrality::default_summary_size(sentences.size());
    auto selected = centrality::top_sentences(central, m);
    std::sort(selected.begin(), selected.end());

    const auto ns = static_cast<Eigen::Index>(selected.size());
    Eigen::MatrixXd sub(ns, ns);
    std::vector<topics::TopicDistribution> sub_dists;
    for (Eigen::Index a = 0; a < ns; ++a) {
        sub_dists.push_back(dists[selected[a]]);
        for (Eigen::Index b = 0; b < ns; ++b)
            sub(a, b) = graph.weights(static_cast<Eigen::Index>(selected[a]), static_cast<Eigen::Index>(selected[b]));
    }
    const auto health = topics::health_topics(model, cfg.health_keywords, cfg.alpha);
    const auto u = topics::topic_relevance(sub_dists, health);
    tst::PowerOptions opts;
    opts.d = cfg.d;
    opts.tol = cfg.tol;
    opts.max_iter = cfg.max_iter;
    const auto [scores, report] = tst::topic_specific_textrank(sub, u, opts);

    QueryGraph q;
    q.graph = kg::KnowledgeGraph("query");
    q.source_claim = text;
    q.method = Method::Rules;
    q.selected_sentences = selected;
    for (std::size_t a = 0; a < selected.size(); ++a) {
        kg::Triple t;
        if (!extract_sentence(sentences[selected[a]], t)) continue;
        q.graph.add(t);
        auto [it, inserted] = q.triple_weights.emplace(t, scores.scores[a]);
        if (!inserted) it->second = std::max(it->second, scores.scores[a]);
    }
    if (q.graph.facts().empty()) throw ExtractionEmpty();
    return q;
}

std::vector<kg::Triple> parse_triple_lines(const std::string& response, std::vector<std::string>& offending) {
    std::vector<kg::Triple> out;
    std::istringstream in(response);
    std::string line;
    while (std::getline(in, line)) {
        const std::string t = text::trim(line);
        if (t.empty()) continue;
        std::vector<std::string> parts;
        std::size_t start = 0;
        while (true) {
            const auto bar = t.find('|', start);
            parts.push_back(text::trim(t.substr(start, bar == std::string::npos ? std::string::npos : bar - start)));
            if (bar == std::string::npos) break;
            start = bar + 1;
        }
        if (parts.size() != 3 || std::any_of(parts.begin(), parts.end(), [](const auto& p) { return p.empty(); })) {
            offending.push_back(t);
            continue;
        }
        try {
            out.emplace_back(parts[0], parts[1], parts[2]);
        } catch (const InputError&) {
            offending.push_back(t);
        }
    }
    return out;
}

QueryGraph extract_llm(const llm::LLMClient& client, const std::string& text, const llm::PromptTemplate& fewshot,
                       const std::string& examples, bool fallback) {
    if (text::trim(text).empty()) throw InputError("extract_llm: empty text");
    const std::string prompt = llm::render(fewshot, {{"examples", examples}, {"input", text}});
    const std::string response = client.complete(prompt);
    std::vector<std::string> offending;
    auto triples = parse_triple_lines(response, offending);
    if (!offending.empty() || triples.empty()) {
        if (fallback) return extract_rules(text);
        if (offending.empty()) offending.push_back(text::trim(response));
        throw LlmParseError(std::move(offending));
    }
    QueryGraph q;
    q.graph = kg::KnowledgeGraph("query");
    q.source_claim = text;
    q.method = Method::Llm;
    for (const auto& t : triples) q.graph.add(t);
    return q;
}

}  // namespace trumor::extract
