#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "trumor/config.hpp"
#include "trumor/graphrag.hpp"
#include "trumor/kgstore.hpp"
#include "trumor/llm.hpp"
#include "trumor/topics.hpp"

namespace trumor::app {

/// Process exit codes. Stable contract.
enum ExitCode : int { kTrue = 0, kFalse = 1, kError = 2, kUndetermined = 3 };

struct CheckRequest {
    std::string text;
    bool article = false;
    std::optional<topics::TopicModel> model;  // article mode; trained on the article when absent
    std::optional<llm::LLMClient> llm;        // required when extractor = llm
    std::optional<llm::PromptTemplate> prompt;
};

struct CheckResult {
    graphrag::Verdict verdict;
    std::vector<graphrag::SimilarityScore> ranked;
    kg::KnowledgeGraph query;
};

/// extract -> retrieve -> contradiction scan -> verdict.
CheckResult check(const CheckRequest& req, const kg::KnowledgeBase& kb, const Config& cfg);

int exit_code(graphrag::Label label);

/// Entry point behind the `trumor` binary. `args` excludes argv[0].
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace trumor::app
