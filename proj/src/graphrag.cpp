#include "trumor/graphrag.hpp"

#include <algorithm>
#include <cstdio>
#include <numeric>
#include <sstream>

#include "trumor/errors.hpp"

namespace trumor::graphrag {

using nlohmann::json;

TripleWeightFn TripleWeightFn::tst_weighted(std::map<Triple, double> weights, double default_weight) {
    TripleWeightFn f;
    f.kind_ = Kind::TstWeighted;
    for (auto& [t, w] : weights) w = std::max(w, kFloor);
    if (default_weight <= 0.0) {
        default_weight = 1.0;
        if (!weights.empty()) {
            double s = 0.0;
            for (const auto& [t, w] : weights) s += w;
            default_weight = s / static_cast<double>(weights.size());
        }
    }
    f.weights_ = std::move(weights);
    f.default_weight_ = std::max(default_weight, kFloor);
    return f;
}

double TripleWeightFn::operator()(const Triple& t) const {
    if (kind_ == Kind::ConstantOne) return 1.0;
    auto it = weights_.find(t);
    return it == weights_.end() ? default_weight_ : it->second;
}

std::string to_string(Label l) {
    switch (l) {
        case Label::True: return "True";
        case Label::False: return "False";
        case Label::Undetermined: return "Undetermined";
    }
    return "Undetermined";
}

std::string to_string(EvidenceRole r) {
    switch (r) {
        case EvidenceRole::Supporting: return "supporting";
        case EvidenceRole::Contradicting: return "contradicting";
        case EvidenceRole::Related: return "related";
    }
    return "related";
}

namespace {

std::string stem(const std::string& rel) {
    if (rel.size() > 3 && rel.back() == 's' && rel[rel.size() - 2] != 's') return rel.substr(0, rel.size() - 1);
    return rel;
}

}  // namespace

ContradictionRules::ContradictionRules() : markers_{"not_", "no_"} {}

ContradictionRules::ContradictionRules(const std::vector<std::pair<std::string, std::string>>& antonyms,
                                       std::vector<std::string> negation_markers)
    : markers_(std::move(negation_markers)) {
    for (const auto& [a, b] : antonyms) add_antonym(a, b);
}

void ContradictionRules::add_antonym(const std::string& a, const std::string& b) {
    const std::string na = kg::RelationId(a).label(), nb = kg::RelationId(b).label();
    antonyms_.emplace(na, nb);
    antonyms_.emplace(nb, na);
    stemmed_.emplace(stem(na), stem(nb));
    stemmed_.emplace(stem(nb), stem(na));
}

bool ContradictionRules::antonyms(const std::string& a, const std::string& b) const {
    return antonyms_.contains({a, b}) || stemmed_.contains({stem(a), stem(b)});
}

bool ContradictionRules::negated(const std::string& a, const std::string& b) const {
    for (const auto& m : markers_) {
        if (m.empty()) continue;
        if (a.rfind(m, 0) == 0 && stem(a.substr(m.size())) == stem(b)) return true;
        if (b.rfind(m, 0) == 0 && stem(b.substr(m.size())) == stem(a)) return true;
    }
    return false;
}

ContradictionRules default_contradiction_rules() {
    return ContradictionRules({{"prevents", "causes"},
                               {"cures", "causes"},
                               {"increases", "decreases"},
                               {"raises", "lowers"},
                               {"approved", "rejected"},
                               {"supports", "opposes"},
                               {"mandated", "blocked_mandate_of"},
                               {"is_safe_for", "is_unsafe_for"},
                               {"protects_against", "causes"}},
                              {"not_", "no_"});
}

SimilarityScore score(const TripleSet& tx, const TripleSet& ti, const TripleWeightFn& f) {
    if (tx.empty()) throw InputError("score: query triple set is empty");
    SimilarityScore s;
    double inter = 0.0, uni = 0.0;
    for (const auto& t : tx) {
        const double w = f(t);
        uni += w;
        if (ti.contains(t)) {
            inter += w;
            s.shared.insert(t);
        }
    }
    for (const auto& t : ti)
        if (!tx.contains(t)) uni += f(t);
    s.value = inter / uni;
    return s;
}

namespace {

bool shares_entity(const KnowledgeGraph& a, const KnowledgeGraph& b) {
    const auto& small = a.entities().size() <= b.entities().size() ? a : b;
    const auto& large = &small == &a ? b : a;
    return std::any_of(small.entities().begin(), small.entities().end(),
                       [&](const auto& kv) { return large.has_entity(kv.first); });
}

}  // namespace

std::vector<SimilarityScore> retrieve(const std::vector<KnowledgeGraph>& kb, const KnowledgeGraph& gx,
                                      const TripleWeightFn& f, std::size_t top_n) {
    const TripleSet tx = kg::triple_set(gx);
    std::vector<SimilarityScore> out;
    if (tx.empty()) return out;
    for (const auto& g : kb) {
        if (!shares_entity(gx, g)) continue;
        SimilarityScore s = score(tx, kg::triple_set(g), f);
        s.graph_id = g.id();
        out.push_back(std::move(s));
    }
    std::sort(out.begin(), out.end(), [](const SimilarityScore& a, const SimilarityScore& b) {
        return a.value != b.value ? a.value > b.value : a.graph_id < b.graph_id;
    });
    if (top_n > 0 && out.size() > top_n) out.resize(top_n);
    return out;
}

std::vector<std::pair<Triple, Triple>> contradicts(const TripleSet& tx, const TripleSet& ti,
                                                   const ContradictionRules& rules) {
    std::vector<std::pair<Triple, Triple>> out;
    for (const auto& q : tx) {
        for (const auto& k : ti) {
            if (q.head != k.head || q.tail != k.tail) continue;
            const auto& rq = q.relation.label();
            const auto& rk = k.relation.label();
            if (rq == rk) continue;
            if (rules.antonyms(rq, rk) || rules.negated(rq, rk)) out.emplace_back(q, k);
        }
    }
    return out;
}

std::vector<Contradiction> find_contradictions(const std::vector<KnowledgeGraph>& kb, const KnowledgeGraph& gx,
                                               const ContradictionRules& rules) {
    const TripleSet tx = kg::triple_set(gx);
    std::vector<Contradiction> out;
    for (const auto& g : kb) {
        if (!shares_entity(gx, g)) continue;
        for (auto& [q, k] : contradicts(tx, kg::triple_set(g), rules)) out.push_back({q, k, g.id()});
    }
    std::sort(out.begin(), out.end(), [](const Contradiction& a, const Contradiction& b) {
        return std::tie(a.graph_id, a.query, a.kb) < std::tie(b.graph_id, b.query, b.kb);
    });
    return out;
}

namespace {

constexpr std::size_t kRelatedLimit = 5;

std::string fmt_score(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.4f", v);
    return buf;
}

}  // namespace

Verdict verdict(const std::vector<SimilarityScore>& scores, const std::vector<Contradiction>& contradictions,
                double theta_true, const std::vector<KnowledgeGraph>& kb) {
    if (!(theta_true > 0.0 && theta_true <= 1.0)) throw InputError("verdict: theta_true must lie in (0, 1]");
    Verdict v;
    v.best_score = scores.empty() ? 0.0 : scores.front().value;
    std::ostringstream why;

    if (!contradictions.empty()) {
        v.label = Label::False;
        for (const auto& c : contradictions) v.evidence.push_back({c.kb, c.graph_id, EvidenceRole::Contradicting});
        why << "The claim is contradicted by the knowledge base:";
        for (const auto& c : contradictions)
            why << " claim states " << kg::to_string(c.query) << " but graph '" << c.graph_id << "' records "
                << kg::to_string(c.kb) << ".";
        v.reasoning_text = why.str();
        return v;
    }

    if (!scores.empty() && scores.front().value >= theta_true) {
        v.label = Label::True;
        const auto& best = scores.front();
        for (const auto& t : best.shared) v.evidence.push_back({t, best.graph_id, EvidenceRole::Supporting});
        why << "The claim matches graph '" << best.graph_id << "' with similarity " << fmt_score(best.value)
            << " (threshold " << fmt_score(theta_true) << "); shared facts:";
        for (const auto& t : best.shared) why << ' ' << kg::to_string(t);
        why << '.';
        v.reasoning_text = why.str();
        return v;
    }

    v.label = Label::Undetermined;
    if (scores.empty()) {
        v.reasoning_text = "No graph in the knowledge base mentions the entities of the claim.";
        return v;
    }
    const auto& best = scores.front();
    for (const auto& t : best.shared) v.evidence.push_back({t, best.graph_id, EvidenceRole::Supporting});
    auto g = std::find_if(kb.begin(), kb.end(), [&](const KnowledgeGraph& x) { return x.id() == best.graph_id; });
    if (g != kb.end()) {
        std::size_t added = 0;
        for (const auto& t : g->facts()) {
            if (best.shared.contains(t)) continue;
            if (added++ == kRelatedLimit) break;
            v.evidence.push_back({t, best.graph_id, EvidenceRole::Related});
        }
    }
    why << "Not enough evidence: the closest graph '" << best.graph_id << "' has similarity "
        << fmt_score(best.value) << ", below the threshold " << fmt_score(theta_true)
        << ". Related facts from the knowledge base are attached.";
    v.reasoning_text = why.str();
    return v;
}

json to_json(const Verdict& v, const std::string& claim, const std::string& config_hash) {
    json evidence = json::array();
    for (const auto& e : v.evidence)
        evidence.push_back({{"head", e.triple.head.label()},
                            {"relation", e.triple.relation.label()},
                            {"tail", e.triple.tail.label()},
                            {"graph_id", e.graph_id},
                            {"role", to_string(e.role)}});
    return {{"schema_version", 1},
            {"claim", claim},
            {"label", to_string(v.label)},
            {"best_score", v.best_score},
            {"evidence", evidence},
            {"reasoning_text", v.reasoning_text},
            {"config_hash", config_hash}};
}

}  // namespace trumor::graphrag
