#pragma once

#include <chrono>
#include <cstddef>
#include <deque>
#include <map>
#include <memory>
#include <mutex>
#include <semaphore>
#include <stdexcept>
#include <string>
#include <vector>

namespace trumor::llm {

struct PromptTemplate {
    std::string name;
    std::string body;  // "{name}" placeholders; "{{" and "}}" are literal braces
    int version = 1;
};

/// Parses a template file: optional leading "@name X" / "@version N" lines,
/// then the body.
PromptTemplate parse_template(const std::string& text);
PromptTemplate load_template(const std::string& path);

/// Built-in triple-extraction template and its few-shot examples.
PromptTemplate default_extraction_template();
const std::string& default_fewshot_examples();

class MissingPlaceholder : public std::invalid_argument {
public:
    explicit MissingPlaceholder(const std::string& name)
        : std::invalid_argument(name), name_(name) {}
    const std::string& name() const noexcept { return name_; }

private:
    std::string name_;
};

/// Throws MissingPlaceholder naming the first unbound placeholder.
std::string render(const PromptTemplate& tmpl, const std::map<std::string, std::string>& bindings);

class MockExhausted : public std::logic_error {
public:
    MockExhausted() : std::logic_error("mock LLM transcript exhausted") {}
};

struct ClientConfig {
    std::string endpoint;  // http://host:port/v1/chat/completions
    std::string model = "gpt-4";
    std::string api_key;
    std::chrono::milliseconds timeout{30000};
    std::size_t max_in_flight = 4;
};

/// Reads TRUMOR_LLM_ENDPOINT, TRUMOR_LLM_MODEL, TRUMOR_LLM_API_KEY and
/// TRUMOR_LLM_TIMEOUT (seconds) over `base`.
ClientConfig client_config_from_env(ClientConfig base = {});

/// Chat-completion client. Copies share state (mock queue, in-flight limit).
/// In mock mode no network call is ever made.
class LLMClient {
public:
    static LLMClient mock(std::vector<std::string> transcript);
    static LLMClient http(ClientConfig cfg);

    bool is_mock() const noexcept;
    const ClientConfig& config() const noexcept;

    /// Request body: {"model", "messages":[{"role":"user","content"}], "temperature":0}.
    /// Reads choices[0].message.content from the response.
    std::string complete(const std::string& prompt) const;

    /// Prompts sent so far (both modes).
    std::vector<std::string> sent_prompts() const;

private:
    struct State;
    explicit LLMClient(std::shared_ptr<State> s) : state_(std::move(s)) {}
    std::shared_ptr<State> state_;
};

/// Loads a mock transcript: responses separated by lines consisting of "---".
std::vector<std::string> load_transcript(const std::string& path);

}  // namespace trumor::llm
