#include "trumor/llm.hpp"

#include <algorithm>
#include <cctype>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "prompt_assets.hpp"
#include "trumor/errors.hpp"
#include "trumor/http.hpp"
#include "trumor/text.hpp"

namespace trumor::llm {

using nlohmann::json;

PromptTemplate parse_template(const std::string& text) {
    PromptTemplate t;
    t.name = "unnamed";
    std::istringstream in(text);
    std::string line, body;
    bool header = true;
    while (std::getline(in, line)) {
        if (header && line.rfind("@name ", 0) == 0) {
            t.name = text::trim(line.substr(6));
            continue;
        }
        if (header && line.rfind("@version ", 0) == 0) {
            t.version = std::stoi(line.substr(9));
            continue;
        }
        header = false;
        body += line;
        body += '\n';
    }
    t.body = std::move(body);
    return t;
}

PromptTemplate load_template(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot read prompt template: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_template(ss.str());
}

PromptTemplate default_extraction_template() { return parse_template(assets::kExtractTemplate); }

const std::string& default_fewshot_examples() {
    static const std::string examples = text::trim(assets::kFewshotExamples);
    return examples;
}

std::string render(const PromptTemplate& tmpl, const std::map<std::string, std::string>& bindings) {
    const std::string& b = tmpl.body;
    std::string out;
    out.reserve(b.size());
    for (std::size_t i = 0; i < b.size(); ++i) {
        const char c = b[i];
        if (c == '{' && i + 1 < b.size() && b[i + 1] == '{') {
            out.push_back('{');
            ++i;
        } else if (c == '}' && i + 1 < b.size() && b[i + 1] == '}') {
            out.push_back('}');
            ++i;
        } else if (c == '{') {
            const auto close = b.find('}', i + 1);
            if (close == std::string::npos) throw InputError("render: unterminated placeholder in " + tmpl.name);
            const std::string name = b.substr(i + 1, close - i - 1);
            auto it = bindings.find(name);
            if (it == bindings.end()) throw MissingPlaceholder(name);
            out += it->second;
            i = close;
        } else {
            out.push_back(c);
        }
    }
    return out;
}

struct LLMClient::State {
    bool mock = false;
    ClientConfig cfg;
    std::deque<std::string> transcript;
    std::vector<std::string> sent;
    mutable std::mutex mu;
    std::unique_ptr<std::counting_semaphore<64>> in_flight;
};

ClientConfig client_config_from_env(ClientConfig base) {
    if (const char* v = std::getenv("TRUMOR_LLM_ENDPOINT"); v && *v) base.endpoint = v;
    if (const char* v = std::getenv("TRUMOR_LLM_MODEL"); v && *v) base.model = v;
    if (const char* v = std::getenv("TRUMOR_LLM_API_KEY"); v && *v) base.api_key = v;
    if (const char* v = std::getenv("TRUMOR_LLM_TIMEOUT"); v && *v)
        base.timeout = std::chrono::milliseconds(static_cast<long>(std::atof(v) * 1000.0));
    return base;
}

LLMClient LLMClient::mock(std::vector<std::string> transcript) {
    auto s = std::make_shared<State>();
    s->mock = true;
    s->transcript.assign(transcript.begin(), transcript.end());
    return LLMClient(std::move(s));
}

LLMClient LLMClient::http(ClientConfig cfg) {
    http::parse_url(cfg.endpoint);
    if (cfg.timeout.count() <= 0) throw InputError("LLM timeout must be positive");
    auto s = std::make_shared<State>();
    s->in_flight = std::make_unique<std::counting_semaphore<64>>(
        static_cast<std::ptrdiff_t>(std::clamp<std::size_t>(cfg.max_in_flight, 1, 64)));
    s->cfg = std::move(cfg);
    return LLMClient(std::move(s));
}

bool LLMClient::is_mock() const noexcept { return state_->mock; }
const ClientConfig& LLMClient::config() const noexcept { return state_->cfg; }

std::vector<std::string> LLMClient::sent_prompts() const {
    std::lock_guard lock(state_->mu);
    return state_->sent;
}

std::string LLMClient::complete(const std::string& prompt) const {
    if (text::trim(prompt).empty()) throw InputError("complete: empty prompt");
    if (state_->mock) {
        std::lock_guard lock(state_->mu);
        state_->sent.push_back(prompt);
        if (state_->transcript.empty()) throw MockExhausted();
        std::string r = std::move(state_->transcript.front());
        state_->transcript.pop_front();
        return r;
    }
    {
        std::lock_guard lock(state_->mu);
        state_->sent.push_back(prompt);
    }
    const auto& cfg = state_->cfg;
    const json body = {{"model", cfg.model},
                       {"messages", json::array({{{"role", "user"}, {"content", prompt}}})},
                       {"temperature", 0}};
    std::map<std::string, std::string> headers;
    if (!cfg.api_key.empty()) headers["Authorization"] = "Bearer " + cfg.api_key;

    state_->in_flight->acquire();
    http::Response res;
    try {
        res = http::post_json(http::parse_url(cfg.endpoint), body.dump(), cfg.timeout, headers);
    } catch (...) {
        state_->in_flight->release();
        throw;
    }
    state_->in_flight->release();

    if (res.status < 200 || res.status >= 300)
        throw TransportError("LLM endpoint returned HTTP " + std::to_string(res.status) + ": " + res.body,
                             /*retriable=*/false, res.status, res.body);
    try {
        const json j = json::parse(res.body);
        return j.at("choices").at(0).at("message").at("content").get<std::string>();
    } catch (const json::exception& e) {
        throw TransportError(std::string("malformed LLM response: ") + e.what(), false, res.status, res.body);
    }
}

std::vector<std::string> load_transcript(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot read mock transcript: " + path);
    std::vector<std::string> out;
    std::string line, cur;
    bool any = false;
    while (std::getline(in, line)) {
        if (text::trim(line) == "---") {
            out.push_back(cur);
            cur.clear();
            any = false;
            continue;
        }
        if (any) cur += '\n';
        cur += line;
        any = true;
    }
    if (any) out.push_back(cur);
    return out;
}

}  // namespace trumor::llm
