#include <random>

#include "doctest.h"
#include "support/oracles.hpp"
#include "trumor/errors.hpp"
#include "trumor/graphrag.hpp"

using namespace trumor::graphrag;

namespace {

TripleSet to_set(const std::vector<oracle::RawTriple>& raw) {
    TripleSet s;
    for (const auto& t : raw) s.insert(Triple(t[0], t[1], t[2]));
    return s;
}

KnowledgeGraph graph(const std::string& id, std::initializer_list<Triple> ts) {
    KnowledgeGraph g(id);
    for (const auto& t : ts) g.add(t);
    return g;
}

const Triple kModerna("Moderna", "prevents", "COVID");
const Triple kPfizer("Pfizer", "treats", "cancer");
const Triple kAZ("A.Z.", "prevents", "flu");

}  // namespace

TEST_CASE("worked example scores one third") {
    const auto s = score({kModerna, kPfizer}, {kModerna, kAZ}, TripleWeightFn::constant_one());
    CHECK(s.value == 1.0 / 3.0);
    CHECK(s.shared == TripleSet{kModerna});
}

TEST_CASE("score boundaries") {
    const auto f = TripleWeightFn::constant_one();
    CHECK(score({kModerna, kPfizer}, {kPfizer, kModerna}, f).value == 1.0);
    CHECK(score({kModerna}, {kAZ}, f).value == 0.0);
    CHECK(score({kModerna}, {}, f).value == 0.0);
    CHECK_THROWS_AS(score({}, {kModerna}, f), trumor::InputError);
}

TEST_CASE("constant weights reduce to plain Jaccard") {
    std::mt19937_64 rng(2024);
    const auto f = TripleWeightFn::constant_one();
    for (int trial = 0; trial < 1000; ++trial) {
        const auto [a, b] = oracle::random_triple_sets(rng);
        const auto [inter, uni] = oracle::jaccard_counts(a, b);
        CHECK(score(to_set(a), to_set(b), f).value == static_cast<double>(inter) / static_cast<double>(uni));
    }
}

TEST_CASE("weighted score matches an enumerated oracle") {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> U(0.01, 3.0);
    for (int trial = 0; trial < 300; ++trial) {
        const auto [a, b] = oracle::random_triple_sets(rng);
        std::map<Triple, double> w;
        for (const auto& t : a) w[Triple(t[0], t[1], t[2])] = U(rng);
        for (const auto& t : b) w[Triple(t[0], t[1], t[2])] = U(rng);
        const auto f = TripleWeightFn::tst_weighted(w);
        const auto sa = to_set(a), sb = to_set(b);
        double num = 0, den = 0;
        for (const auto& [t, x] : w) {
            const bool in_a = sa.contains(t), in_b = sb.contains(t);
            if (in_a && in_b) num += x;
            if (in_a || in_b) den += x;
        }
        CHECK(score(sa, sb, f).value == doctest::Approx(num / den).epsilon(1e-12));
        if (!sb.empty()) CHECK(score(sa, sb, f).value == doctest::Approx(score(sb, sa, f).value).epsilon(1e-12));
        CHECK(score(sa, sa, f).value == doctest::Approx(1.0));
    }
}

TEST_CASE("adding a shared triple never lowers the score") {
    std::mt19937_64 rng(6);
    const auto f = TripleWeightFn::constant_one();
    for (int trial = 0; trial < 300; ++trial) {
        const auto [a, b] = oracle::random_triple_sets(rng);
        auto sa = to_set(a), sb = to_set(b);
        const double before = score(sa, sb, f).value;
        const Triple extra("e" + std::to_string(rng() % 6), "r9", "e1");
        sa.insert(extra);
        sb.insert(extra);
        CHECK(score(sa, sb, f).value >= before);
    }
}

TEST_CASE("tst-weighted weights are floored and defaulted") {
    const auto f = TripleWeightFn::tst_weighted({{kModerna, 0.0}, {kPfizer, 0.5}});
    CHECK(f(kModerna) == TripleWeightFn::kFloor);
    CHECK(f(kPfizer) == 0.5);
    CHECK(f(kAZ) == doctest::Approx(0.25));
    CHECK(TripleWeightFn::tst_weighted({{kPfizer, 0.5}}, 2.0)(kAZ) == 2.0);
}

TEST_CASE("retrieve ranks by score and filters by shared entities") {
    const std::vector<KnowledgeGraph> kb = {
        graph("b_partial", {kModerna, Triple("Moderna", "based_in", "Cambridge")}),
        graph("a_exact", {kModerna, kPfizer}),
        graph("c_weak", {Triple("Pfizer", "makes", "pills"), Triple("x", "y", "z"), Triple("u", "v", "w")}),
        graph("d_unrelated", {Triple("Paris", "capital_of", "France")}),
    };
    const auto gx = graph("query", {kModerna, kPfizer});
    const auto ranked = retrieve(kb, gx, TripleWeightFn::constant_one());
    REQUIRE(ranked.size() == 3);
    CHECK(ranked[0].graph_id == "a_exact");
    CHECK(ranked[0].value == 1.0);
    CHECK(ranked[1].graph_id == "b_partial");
    CHECK(ranked[1].value == 1.0 / 3.0);
    CHECK(ranked[2].graph_id == "c_weak");
    CHECK(ranked[2].value == 0.0);
    CHECK(retrieve(kb, gx, TripleWeightFn::constant_one(), 1).size() == 1);
    CHECK(retrieve(kb, graph("q", {Triple("mars", "has", "moons")}), TripleWeightFn::constant_one()).empty());
}

TEST_CASE("retrieve breaks ties by graph id") {
    const std::vector<KnowledgeGraph> kb = {graph("zeta", {kModerna}), graph("alpha", {kModerna}), graph("mid", {kModerna})};
    const auto ranked = retrieve(kb, graph("q", {kModerna}), TripleWeightFn::constant_one());
    CHECK(ranked[0].graph_id == "alpha");
    CHECK(ranked[1].graph_id == "mid");
    CHECK(ranked[2].graph_id == "zeta");
}

TEST_CASE("contradiction detection") {
    const auto rules = default_contradiction_rules();
    const Triple q("Florida", "mandated", "vaccine");
    const Triple k("Florida", "blocked_mandate_of", "vaccine");
    const auto c = contradicts({q}, {k}, rules);
    REQUIRE(c.size() == 1);
    CHECK(c[0].first == q);
    CHECK(c[0].second == k);
    CHECK(contradicts({q}, {q}, rules).empty());
    CHECK(contradicts({q}, {Triple("Texas", "blocked_mandate_of", "masks")}, rules).empty());

    // negation marker, with a light stem so "prevent" and "prevents" match
    CHECK(contradicts({Triple("garlic", "not_prevent", "covid")}, {Triple("garlic", "prevents", "covid")}, rules).size() == 1);
    CHECK(contradicts({Triple("garlic", "prevents", "covid")}, {Triple("garlic", "no_prevents", "covid")}, rules).size() == 1);
    CHECK(rules.antonyms("causes", "prevents"));
    CHECK(rules.antonyms("prevents", "causes"));
    CHECK_FALSE(rules.antonyms("prevents", "treats"));

    ContradictionRules custom({{"heals", "harms"}}, {"never_"});
    CHECK(contradicts({Triple("a", "heals", "b")}, {Triple("a", "harms", "b")}, custom).size() == 1);
    CHECK(contradicts({Triple("a", "never_heals", "b")}, {Triple("a", "heals", "b")}, custom).size() == 1);
    CHECK(contradicts({Triple("a", "not_heals", "b")}, {Triple("a", "heals", "b")}, custom).empty());
}

TEST_CASE("find_contradictions names the graph") {
    const std::vector<KnowledgeGraph> kb = {graph("florida", {Triple("Florida", "blocked_mandate_of", "vaccine")}),
                                            graph("other", {kModerna})};
    const auto c = find_contradictions(kb, graph("q", {Triple("Florida", "mandated", "vaccine")}), default_contradiction_rules());
    REQUIRE(c.size() == 1);
    CHECK(c[0].graph_id == "florida");
}

TEST_CASE("verdict rules") {
    SimilarityScore full{1.0, "a", {kModerna}};
    SimilarityScore partial{1.0 / 3.0, "b", {kModerna}};

    const auto t = verdict({full}, {}, 0.5);
    CHECK(t.label == Label::True);
    CHECK(t.best_score == 1.0);
    REQUIRE(t.evidence.size() == 1);
    CHECK(t.evidence[0].role == EvidenceRole::Supporting);

    CHECK(verdict({}, {}, 0.6).label == Label::Undetermined);

    const auto u = verdict({partial}, {}, 0.6);
    CHECK(u.label == Label::Undetermined);
    CHECK_FALSE(u.evidence.empty());

    const Contradiction c{Triple("Florida", "mandated", "vaccine"), Triple("Florida", "blocked_mandate_of", "vaccine"), "fl"};
    const auto f = verdict({full}, {c}, 0.5);
    CHECK(f.label == Label::False);
    REQUIRE_FALSE(f.evidence.empty());
    CHECK(f.evidence[0].role == EvidenceRole::Contradicting);
    CHECK(f.evidence[0].graph_id == "fl");

    // threshold is inclusive
    CHECK(verdict({{0.6, "x", {kModerna}}}, {}, 0.6).label == Label::True);
}

TEST_CASE("undetermined verdicts carry related evidence from the top graph") {
    const std::vector<KnowledgeGraph> kb = {graph("b", {kModerna, kAZ, Triple("Moderna", "based_in", "Cambridge")})};
    const auto gx = graph("q", {kModerna, kPfizer});
    const auto v = verdict(retrieve(kb, gx, TripleWeightFn::constant_one()), {}, 0.6, kb);
    CHECK(v.label == Label::Undetermined);
    int related = 0, supporting = 0;
    for (const auto& e : v.evidence) (e.role == EvidenceRole::Related ? related : supporting) += 1;
    CHECK(supporting == 1);
    CHECK(related == 2);
}

TEST_CASE("verdict JSON is deterministic") {
    const std::vector<KnowledgeGraph> kb = {graph("a", {kModerna, kPfizer}), graph("b", {kModerna})};
    const auto gx = graph("q", {kModerna, kPfizer});
    auto run = [&] {
        const auto v = verdict(retrieve(kb, gx, TripleWeightFn::constant_one()), {}, 0.6, kb);
        return to_json(v, "claim", "abc").dump();
    };
    CHECK(run() == run());
    const auto j = nlohmann::json::parse(run());
    CHECK(j["label"] == "True");
    CHECK(j["schema_version"] == 1);
    CHECK(j["config_hash"] == "abc");
    CHECK(j["evidence"][0]["head"] == "moderna");
}
