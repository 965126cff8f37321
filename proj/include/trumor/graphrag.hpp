#pragma once

#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"
#include "trumor/kgstore.hpp"

namespace trumor::graphrag {

using kg::KnowledgeGraph;
using kg::Triple;
using kg::TripleSet;

/// f(t) in the weighted Jaccard score. Constant one, or a lookup of
/// per-triple weights (TST score of the source sentence) floored at 1e-6.
/// Triples absent from the lookup get `default_weight`.
class TripleWeightFn {
public:
    enum class Kind { ConstantOne, TstWeighted };

    TripleWeightFn() = default;
    static TripleWeightFn constant_one() { return {}; }
    /// default_weight <= 0 selects the mean of the supplied weights.
    static TripleWeightFn tst_weighted(std::map<Triple, double> weights, double default_weight = 0.0);

    Kind kind() const noexcept { return kind_; }
    double operator()(const Triple& t) const;

    static constexpr double kFloor = 1e-6;

private:
    Kind kind_ = Kind::ConstantOne;
    std::map<Triple, double> weights_;
    double default_weight_ = 1.0;
};

struct SimilarityScore {
    double value = 0.0;
    std::string graph_id;
    TripleSet shared;
};

enum class Label { True, False, Undetermined };
std::string to_string(Label l);

enum class EvidenceRole { Supporting, Contradicting, Related };
std::string to_string(EvidenceRole r);

struct EvidenceItem {
    Triple triple;
    std::string graph_id;
    EvidenceRole role = EvidenceRole::Supporting;
};

struct Verdict {
    Label label = Label::Undetermined;
    double best_score = 0.0;
    std::vector<EvidenceItem> evidence;
    std::string reasoning_text;
};

/// Antonymous relation pairs (stored symmetrically) and negation prefixes.
class ContradictionRules {
public:
    ContradictionRules();  // default negation markers {"not_", "no_"}
    ContradictionRules(const std::vector<std::pair<std::string, std::string>>& antonyms,
                       std::vector<std::string> negation_markers);

    void add_antonym(const std::string& a, const std::string& b);
    bool antonyms(const std::string& a, const std::string& b) const;
    /// True if one relation is the other with a negation marker prefixed,
    /// comparing on a light stem (trailing "s" removed).
    bool negated(const std::string& a, const std::string& b) const;

    const std::set<std::pair<std::string, std::string>>& antonym_pairs() const noexcept { return antonyms_; }
    const std::vector<std::string>& negation_markers() const noexcept { return markers_; }

private:
    std::set<std::pair<std::string, std::string>> antonyms_;
    std::set<std::pair<std::string, std::string>> stemmed_;
    std::vector<std::string> markers_;
};

/// Built-in antonym list used when no config overrides it.
ContradictionRules default_contradiction_rules();

/// Weighted Jaccard over exact triple equality. Throws InputError when tx is empty.
SimilarityScore score(const TripleSet& tx, const TripleSet& ti, const TripleWeightFn& f);

/// Candidates share at least one entity with the query; ranked by score
/// descending, ties by graph id; truncated to top_n (0 keeps all).
std::vector<SimilarityScore> retrieve(const std::vector<KnowledgeGraph>& kb, const KnowledgeGraph& gx,
                                      const TripleWeightFn& f, std::size_t top_n = 0);

/// (query triple, kb triple) pairs with matching head and tail whose
/// relations are antonyms or negations of each other.
std::vector<std::pair<Triple, Triple>> contradicts(const TripleSet& tx, const TripleSet& ti,
                                                   const ContradictionRules& rules);

struct Contradiction {
    Triple query;
    Triple kb;
    std::string graph_id;
};

/// contradicts() against every graph that shares an entity with the query.
std::vector<Contradiction> find_contradictions(const std::vector<KnowledgeGraph>& kb, const KnowledgeGraph& gx,
                                               const ContradictionRules& rules);

/// False when any contradiction exists; True when the best score reaches
/// theta_true; Undetermined otherwise, with the top candidates' shared and
/// related triples attached as evidence.
Verdict verdict(const std::vector<SimilarityScore>& scores, const std::vector<Contradiction>& contradictions,
                double theta_true, const std::vector<KnowledgeGraph>& kb = {});

nlohmann::json to_json(const Verdict& v, const std::string& claim, const std::string& config_hash);

}  // namespace trumor::graphrag
