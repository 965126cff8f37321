#pragma once

#include <compare>
#include <cstddef>
#include <istream>
#include <map>
#include <mutex>
#include <optional>
#include <set>
#include <shared_mutex>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

namespace trumor::kg {

/// Entity vertex. Identity is the canonical label only; surface forms are
/// kept for display and merged when the same entity is seen again.
class EntityId {
public:
    EntityId() = default;
    explicit EntityId(std::string_view surface);

    const std::string& label() const noexcept { return label_; }
    const std::set<std::string>& surface_forms() const noexcept { return surface_forms_; }
    void merge_surface_forms(const EntityId& other);

    friend bool operator==(const EntityId& a, const EntityId& b) { return a.label_ == b.label_; }
    friend std::strong_ordering operator<=>(const EntityId& a, const EntityId& b) {
        return a.label_ <=> b.label_;
    }

private:
    std::string label_;
    std::set<std::string> surface_forms_;
};

class RelationId {
public:
    RelationId() = default;
    explicit RelationId(std::string_view surface);

    const std::string& label() const noexcept { return label_; }

    friend bool operator==(const RelationId&, const RelationId&) = default;
    friend std::strong_ordering operator<=>(const RelationId&, const RelationId&) = default;

private:
    std::string label_;
};

struct Triple {
    EntityId head;
    RelationId relation;
    EntityId tail;

    Triple() = default;
    Triple(EntityId h, RelationId r, EntityId t);
    /// Builds from surface strings; each component is normalized.
    Triple(std::string_view h, std::string_view r, std::string_view t);

    friend bool operator==(const Triple&, const Triple&) = default;
    friend std::strong_ordering operator<=>(const Triple&, const Triple&) = default;
};

std::string to_string(const Triple& t);

/// Duplicate-free set of triples (T_i).
class TripleSet {
public:
    TripleSet() = default;
    TripleSet(std::initializer_list<Triple> ts) : triples_(ts) {}
    explicit TripleSet(std::set<Triple> ts) : triples_(std::move(ts)) {}

    bool insert(const Triple& t) { return triples_.insert(t).second; }
    bool contains(const Triple& t) const { return triples_.contains(t); }
    std::size_t size() const noexcept { return triples_.size(); }
    bool empty() const noexcept { return triples_.empty(); }
    auto begin() const { return triples_.begin(); }
    auto end() const { return triples_.end(); }
    const std::set<Triple>& items() const noexcept { return triples_; }

    friend bool operator==(const TripleSet&, const TripleSet&) = default;

private:
    std::set<Triple> triples_;
};

struct SourceMeta {
    std::string origin;
    std::string timestamp;
};

/// G = {E, R, F}. Every component referenced by a fact is present in the
/// entity and relation tables.
class KnowledgeGraph {
public:
    KnowledgeGraph() = default;
    explicit KnowledgeGraph(std::string id, SourceMeta meta = {})
        : id_(std::move(id)), meta_(std::move(meta)) {}

    /// Idempotent on duplicates. Returns true if the fact was new.
    bool add(const Triple& t);

    const std::string& id() const noexcept { return id_; }
    const SourceMeta& source_meta() const noexcept { return meta_; }
    const std::map<std::string, EntityId>& entities() const noexcept { return entities_; }
    const std::set<RelationId>& relations() const noexcept { return relations_; }
    const std::set<Triple>& facts() const noexcept { return facts_; }

    bool has_entity(const std::string& canonical) const { return entities_.contains(canonical); }

private:
    std::string id_;
    SourceMeta meta_;
    std::map<std::string, EntityId> entities_;
    std::set<RelationId> relations_;
    std::set<Triple> facts_;
};

KnowledgeGraph add_triple(KnowledgeGraph graph, const Triple& triple);

TripleSet triple_set(const KnowledgeGraph& graph);

const std::vector<std::string>& default_health_keywords();

/// True iff any keyword is a case-insensitive substring of `label`.
/// Throws InputError on an empty keyword list.
bool health_filter(std::string_view label, const std::vector<std::string>& keywords);

struct IngestReport {
    std::size_t total = 0;  // non-blank, non-comment lines
    std::size_t kept = 0;
    std::size_t dropped = 0;
    std::size_t malformed = 0;
};

struct IngestResult {
    std::vector<KnowledgeGraph> graphs;  // one per subject, sorted by id
    IngestReport report;
};

class IngestError : public std::runtime_error {
public:
    IngestError(const std::string& what, std::size_t line)
        : std::runtime_error(what + " (line " + std::to_string(line) + ")"), line_(line) {}
    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

/// Parses one `<s> <p> <o> .` record. IRIs reduce to their last path
/// segment, quoted literals to their body. Returns false if malformed.
bool parse_triple_line(std::string_view line, std::string& subject, std::string& predicate,
                       std::string& object);

IngestResult ingest_triples(std::istream& in, const std::vector<std::string>& keywords,
                            const SourceMeta& meta = {"stream", ""});

// Serialization
nlohmann::json to_json(const KnowledgeGraph& g);
KnowledgeGraph graph_from_json(const nlohmann::json& j);
/// Node/edge export: {"id", "nodes":[{id,label}], "edges":[{source,target,label}]}.
nlohmann::json export_json(const KnowledgeGraph& g);
std::string export_dot(const KnowledgeGraph& g);

/// Collection of graphs. Reads take a shared lock; mutation takes an
/// exclusive one.
class KnowledgeBase {
public:
    KnowledgeBase() = default;
    explicit KnowledgeBase(std::vector<KnowledgeGraph> graphs) : graphs_(std::move(graphs)) {}
    KnowledgeBase(const KnowledgeBase& o);
    KnowledgeBase& operator=(const KnowledgeBase& o);

    void add_graph(KnowledgeGraph g);
    /// Merges facts into an existing graph with the same id, or appends.
    void merge(const std::vector<KnowledgeGraph>& gs);
    std::vector<KnowledgeGraph> snapshot() const;
    std::size_t size() const;
    std::optional<KnowledgeGraph> find(const std::string& id) const;

    nlohmann::json to_json() const;
    static KnowledgeBase from_json(const nlohmann::json& j);
    void save(const std::string& path) const;
    static KnowledgeBase load(const std::string& path);

private:
    mutable std::shared_mutex mu_;
    std::vector<KnowledgeGraph> graphs_;
};

}  // namespace trumor::kg
