#pragma once

#include <cstddef>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "trumor/embed.hpp"
#include "trumor/kgstore.hpp"
#include "trumor/llm.hpp"
#include "trumor/topics.hpp"

namespace trumor::extract {

enum class Method { Rules, Llm };
std::string to_string(Method m);

/// Query graph G_x built from a claim or article.
struct QueryGraph {
    kg::KnowledgeGraph graph;
    std::string source_claim;
    Method method = Method::Rules;
    /// TST score of the sentence each triple came from (article mode only).
    std::map<kg::Triple, double> triple_weights;
    /// Sentence indices kept by centrality selection (article mode only).
    std::vector<std::size_t> selected_sentences;
};

class ExtractionEmpty : public std::runtime_error {
public:
    ExtractionEmpty() : std::runtime_error("no triple could be extracted from the input") {}
};

class LlmParseError : public std::runtime_error {
public:
    explicit LlmParseError(std::vector<std::string> offending);
    const std::vector<std::string>& offending_lines() const noexcept { return offending_; }

private:
    std::vector<std::string> offending_;
};

/// Shallow subject / verb / object extraction for a single sentence.
/// Returns false when no verb or no noun chunk on either side is found.
bool extract_sentence(const std::string& sentence, kg::Triple& out);

/// One triple per sentence that matches the pattern grammar; throws
/// ExtractionEmpty when nothing matches and InputError on empty text.
QueryGraph extract_rules(const std::string& text);

struct ArticleConfig {
    double eta = 0.7;
    double alpha = 1.5;
    double d = 0.85;
    double tol = 1e-6;
    int max_iter = 500;
    std::size_t summary_size = 0;  // 0 selects max(3, ceil(0.2 n))
    double min_edge_weight = 0.0;
    std::vector<std::string> health_keywords = kg::default_health_keywords();
};

/// Summarize-then-extract: centrality picks the key sentences, TST over
/// the selected subgraph weights their triples.
QueryGraph extract_article(const std::string& text, const topics::TopicModel& model,
                           const embed::EmbeddingProvider& provider, const ArticleConfig& cfg = {});

/// Parses "head | relation | tail" lines. Blank lines are ignored; any other
/// line that does not split into three non-empty fields is offending.
std::vector<kg::Triple> parse_triple_lines(const std::string& response, std::vector<std::string>& offending);

/// Few-shot LLM extraction. On a parse failure falls back to
/// extract_rules() when `fallback` is set, otherwise throws LlmParseError.
QueryGraph extract_llm(const llm::LLMClient& client, const std::string& text,
                       const llm::PromptTemplate& fewshot = llm::default_extraction_template(),
                       const std::string& examples = llm::default_fewshot_examples(), bool fallback = true);

}  // namespace trumor::extract
