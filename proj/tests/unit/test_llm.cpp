#include <fstream>

#include "doctest.h"
#include "json.hpp"
#include "support/local_server.hpp"
#include "trumor/errors.hpp"
#include "trumor/llm.hpp"

using namespace trumor::llm;

TEST_CASE("render substitutes placeholders") {
    CHECK(render({"t", "check: {input}"}, {{"input", "x"}}) == "check: x");
    CHECK(render({"t", "{a}{b}{a}"}, {{"a", "1"}, {"b", "2"}}) == "121");
    // bound values are not re-scanned
    CHECK(render({"t", "{input}"}, {{"input", "{other}"}}) == "{other}");
}

TEST_CASE("render reports the missing placeholder by name") {
    try {
        render({"t", "check: {input}"}, {});
        FAIL("expected MissingPlaceholder");
    } catch (const MissingPlaceholder& e) {
        CHECK(std::string(e.what()) == "input");
        CHECK(e.name() == "input");
    }
    CHECK_THROWS_AS(render({"t", "open {input"}, {{"input", "x"}}), trumor::InputError);
}

TEST_CASE("doubled braces are literal") {
    CHECK(render({"t", "{{"}, {}) == "{");
    CHECK(render({"t", "json: {{\"claim\": \"{input}\"}}"}, {{"input", "x"}}) == "json: {\"claim\": \"x\"}");
}

TEST_CASE("template files carry name and version") {
    const auto t = parse_template("@name demo\n@version 3\nHello {input}\n");
    CHECK(t.name == "demo");
    CHECK(t.version == 3);
    CHECK(t.body == "Hello {input}\n");
    const auto d = default_extraction_template();
    CHECK(d.name == "extract_triples");
    CHECK(d.version == 1);
    CHECK(d.body.find("{input}") != std::string::npos);
    CHECK(d.body.find("{examples}") != std::string::npos);
    CHECK_FALSE(default_fewshot_examples().empty());
    CHECK_NOTHROW(render(d, {{"input", "x"}, {"examples", default_fewshot_examples()}}));
}

TEST_CASE("mock client replays its transcript") {
    const auto c = LLMClient::mock({"first", "second"});
    CHECK(c.is_mock());
    CHECK(c.complete("p1") == "first");
    const auto copy = c;  // copies share the queue
    CHECK(copy.complete("p2") == "second");
    CHECK_THROWS_AS(c.complete("p3"), MockExhausted);
    CHECK(c.sent_prompts() == std::vector<std::string>{"p1", "p2", "p3"});
    CHECK_THROWS_AS(LLMClient::mock({"x"}).complete("  "), trumor::InputError);
}

TEST_CASE("rendered prompt reaches the client") {
    const auto c = LLMClient::mock({"ok"});
    const std::string claim = "Moderna prevents COVID.";
    c.complete(render(default_extraction_template(), {{"input", claim}, {"examples", default_fewshot_examples()}}));
    REQUIRE(c.sent_prompts().size() == 1);
    CHECK(c.sent_prompts()[0].find(claim) != std::string::npos);
}

TEST_CASE("mock runs are reproducible") {
    auto run = [] {
        const auto c = LLMClient::mock({"a", "b", "c"});
        return c.complete("x") + c.complete("y") + c.complete("z");
    };
    CHECK(run() == run());
}

TEST_CASE("transcript files split on separator lines") {
    const auto t = load_transcript(std::string(TRUMOR_FIXTURE_DIR) + "/transcript.txt");
    REQUIRE(t.size() == 2);
    CHECK(t[0] == "Moderna | prevents | COVID\nPfizer | treats | cancer");
    CHECK(t[1] == "garbage without separators");
    CHECK_THROWS_AS(load_transcript("/nonexistent/transcript.txt"), trumor::InputError);
}

TEST_CASE("http client wire format") {
    LocalServer srv;
    nlohmann::json seen;
    std::string auth;
    srv.server.Post("/v1/chat/completions", [&](const httplib::Request& req, httplib::Response& res) {
        seen = nlohmann::json::parse(req.body);
        auth = req.get_header_value("Authorization");
        res.set_content(R"({"choices":[{"message":{"role":"assistant","content":"a | b | c"}}]})", "application/json");
    });
    srv.server.Post("/error", [](const httplib::Request&, httplib::Response& res) {
        res.status = 500;
        res.set_content("upstream exploded", "text/plain");
    });
    srv.server.Post("/bad", [](const httplib::Request&, httplib::Response& res) {
        res.set_content(R"({"choices":[]})", "application/json");
    });
    srv.start();

    ClientConfig cfg;
    cfg.endpoint = srv.url("/v1/chat/completions");
    cfg.model = "test-model";
    cfg.api_key = "k123";
    const auto c = LLMClient::http(cfg);
    CHECK_FALSE(c.is_mock());
    CHECK(c.complete("hello") == "a | b | c");
    CHECK(seen["model"] == "test-model");
    CHECK(seen["temperature"] == 0);
    CHECK(seen["messages"][0]["role"] == "user");
    CHECK(seen["messages"][0]["content"] == "hello");
    CHECK(auth == "Bearer k123");

    cfg.endpoint = srv.url("/error");
    try {
        LLMClient::http(cfg).complete("x");
        FAIL("expected TransportError");
    } catch (const trumor::TransportError& e) {
        CHECK_FALSE(e.retriable());
        CHECK(e.status() == 500);
        CHECK(e.body() == "upstream exploded");
    }
    cfg.endpoint = srv.url("/bad");
    CHECK_THROWS_AS(LLMClient::http(cfg).complete("x"), trumor::TransportError);

    cfg.endpoint = "http://127.0.0.1:1/v1";
    cfg.timeout = std::chrono::milliseconds(500);
    try {
        LLMClient::http(cfg).complete("x");
        FAIL("expected TransportError");
    } catch (const trumor::TransportError& e) {
        CHECK(e.retriable());
    }
}

TEST_CASE("client config from the environment") {
    setenv("TRUMOR_LLM_ENDPOINT", "http://localhost:8000/v1/chat/completions", 1);
    setenv("TRUMOR_LLM_MODEL", "m", 1);
    setenv("TRUMOR_LLM_TIMEOUT", "7", 1);
    const auto cfg = client_config_from_env();
    CHECK(cfg.endpoint == "http://localhost:8000/v1/chat/completions");
    CHECK(cfg.model == "m");
    CHECK(cfg.timeout == std::chrono::milliseconds(7000));
    unsetenv("TRUMOR_LLM_ENDPOINT");
    unsetenv("TRUMOR_LLM_MODEL");
    unsetenv("TRUMOR_LLM_TIMEOUT");
}
