#include "doctest.h"
#include "trumor/config.hpp"
#include "trumor/errors.hpp"

using trumor::Config;

TEST_CASE("defaults") {
    const Config c;
    CHECK(c.eta == 0.7);
    CHECK(c.alpha == 1.5);
    CHECK(c.d == 0.85);
    CHECK(c.tol == 1e-6);
    CHECK(c.max_iter == 500);
    CHECK(c.k == 20);
    CHECK(c.theta_true == 0.6);
    CHECK(c.dense_eigen_bound == 2000);
    CHECK_NOTHROW(c.validate());
}

TEST_CASE("parse reads flat key = value lines") {
    const auto c = Config::parse("# comment\n[section headers are ignored]\n eta = 0.5\nd=0.9\n"
                                 "health_keywords = flu, virus\nantonyms = heals:harms, up:down\nllm_model = \"m-1\"\n");
    CHECK(c.eta == 0.5);
    CHECK(c.d == 0.9);
    CHECK(c.health_keywords == std::vector<std::string>{"flu", "virus"});
    REQUIRE(c.antonyms.size() == 2);
    CHECK(c.antonyms[0] == std::pair<std::string, std::string>{"heals", "harms"});
    CHECK(c.llm_model == "m-1");
}

TEST_CASE("unknown keys and bad values are rejected") {
    CHECK_THROWS_AS(Config::parse("colour = blue\n"), trumor::InputError);
    CHECK_THROWS_AS(Config::parse("eta = lots\n"), trumor::InputError);
    CHECK_THROWS_AS(Config::parse("max_iter = 1.5\n"), trumor::InputError);
    CHECK_THROWS_AS(Config::parse("antonyms = a-b\n"), trumor::InputError);
    CHECK_THROWS_AS(Config::parse("just words\n"), trumor::InputError);
    CHECK_THROWS_AS(Config::parse("eta = 1.5\n").validate(), trumor::InputError);
    CHECK_THROWS_AS(Config::parse("d = 1\n").validate(), trumor::InputError);
    CHECK_THROWS_AS(Config::parse("alpha = 0.5\n").validate(), trumor::InputError);
    CHECK_THROWS_AS(Config::parse("embed_provider = remote\n").validate(), trumor::InputError);
    CHECK_THROWS_AS(Config::load("/nonexistent/trumor.cfg"), std::exception);
}

TEST_CASE("later settings override earlier ones") {
    Config c = Config::parse("theta_true = 0.2\n");
    c.set("theta_true", "0.9");
    CHECK(c.theta_true == 0.9);
}

TEST_CASE("hash tracks the canonical form") {
    Config a, b;
    CHECK(a.hash() == b.hash());
    CHECK(a.hash().size() == 16);
    b.set("eta", "0.71");
    CHECK(a.hash() != b.hash());
    b.set("eta", "0.7");
    CHECK(a.canonical() == b.canonical());
    CHECK(a.canonical().find("eta=0.69999999999999996\n") != std::string::npos);
}
