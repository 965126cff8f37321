#include "trumor/kgstore.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "trumor/errors.hpp"
#include "trumor/text.hpp"

namespace trumor::kg {

using nlohmann::json;

EntityId::EntityId(std::string_view surface) : label_(text::normalize_label(surface)) {
    if (label_.empty()) throw InputError("entity label is empty");
    surface_forms_.insert(text::trim(surface));
}

void EntityId::merge_surface_forms(const EntityId& other) {
    surface_forms_.insert(other.surface_forms_.begin(), other.surface_forms_.end());
}

RelationId::RelationId(std::string_view surface) : label_(text::normalize_label(surface)) {
    if (label_.empty()) throw InputError("relation label is empty");
}

Triple::Triple(EntityId h, RelationId r, EntityId t)
    : head(std::move(h)), relation(std::move(r)), tail(std::move(t)) {}

Triple::Triple(std::string_view h, std::string_view r, std::string_view t)
    : head(h), relation(r), tail(t) {}

std::string to_string(const Triple& t) {
    return "(" + t.head.label() + ", " + t.relation.label() + ", " + t.tail.label() + ")";
}

bool KnowledgeGraph::add(const Triple& t) {
    for (const EntityId* e : {&t.head, &t.tail}) {
        auto [it, inserted] = entities_.try_emplace(e->label(), *e);
        if (!inserted) it->second.merge_surface_forms(*e);
    }
    relations_.insert(t.relation);
    return facts_.insert(t).second;
}

KnowledgeGraph add_triple(KnowledgeGraph graph, const Triple& triple) {
    graph.add(triple);
    return graph;
}

TripleSet triple_set(const KnowledgeGraph& graph) { return TripleSet(graph.facts()); }

const std::vector<std::string>& default_health_keywords() {
    static const std::vector<std::string> kw = {"health",  "medical",  "medicine",
                                                "disease", "pandemic", "epidemic"};
    return kw;
}

bool health_filter(std::string_view label, const std::vector<std::string>& keywords) {
    if (keywords.empty()) throw InputError("health_filter: keyword list is empty");
    const std::string lowered = text::to_lower(label);
    return std::any_of(keywords.begin(), keywords.end(), [&](const std::string& k) {
        return lowered.find(text::to_lower(k)) != std::string::npos;
    });
}

namespace {

// Reads one term starting at `pos`; advances `pos` past it.
bool read_term(std::string_view line, std::size_t& pos, std::string& out) {
    while (pos < line.size() && std::isspace(static_cast<unsigned char>(line[pos]))) ++pos;
    if (pos >= line.size()) return false;
    const char c = line[pos];
    if (c == '<') {
        const auto close = line.find('>', pos + 1);
        if (close == std::string_view::npos) return false;
        std::string_view iri = line.substr(pos + 1, close - pos - 1);
        pos = close + 1;
        while (!iri.empty() && (iri.back() == '/' || iri.back() == '#')) iri.remove_suffix(1);
        const auto cut = iri.find_last_of("/#");
        out = std::string(cut == std::string_view::npos ? iri : iri.substr(cut + 1));
        return !out.empty();
    }
    if (c == '"') {
        std::size_t i = pos + 1;
        std::string body;
        for (; i < line.size() && line[i] != '"'; ++i) {
            if (line[i] == '\\' && i + 1 < line.size()) ++i;
            body.push_back(line[i]);
        }
        if (i >= line.size()) return false;
        pos = i + 1;
        // language tag or datatype suffix is discarded
        while (pos < line.size() && !std::isspace(static_cast<unsigned char>(line[pos]))) {
            if (line[pos] == '.' && pos + 1 == line.size()) break;
            ++pos;
        }
        out = std::move(body);
        return !text::trim(out).empty();
    }
    std::size_t e = pos;
    while (e < line.size() && !std::isspace(static_cast<unsigned char>(line[e]))) ++e;
    out = std::string(line.substr(pos, e - pos));
    pos = e;
    return out != ".";
}

}  // namespace

bool parse_triple_line(std::string_view line, std::string& subject, std::string& predicate,
                       std::string& object) {
    std::string_view body = line;
    while (!body.empty() && std::isspace(static_cast<unsigned char>(body.back()))) body.remove_suffix(1);
    if (body.size() < 2 || body.back() != '.') return false;
    body.remove_suffix(1);
    std::size_t pos = 0;
    if (!read_term(body, pos, subject) || !read_term(body, pos, predicate) ||
        !read_term(body, pos, object))
        return false;
    while (pos < body.size() && std::isspace(static_cast<unsigned char>(body[pos]))) ++pos;
    return pos == body.size();
}

IngestResult ingest_triples(std::istream& in, const std::vector<std::string>& keywords,
                            const SourceMeta& meta) {
    IngestResult result;
    std::map<std::string, KnowledgeGraph> by_subject;
    std::string line;
    std::size_t lineno = 0;
    while (true) {
        if (!std::getline(in, line)) {
            if (in.bad()) throw IngestError("unreadable triple stream", lineno + 1);
            break;
        }
        ++lineno;
        const std::string t = text::trim(line);
        if (t.empty() || t.front() == '#') continue;
        ++result.report.total;
        std::string s, p, o;
        if (!parse_triple_line(t, s, p, o)) {
            ++result.report.malformed;
            continue;
        }
        Triple triple;
        try {
            triple = Triple(s, p, o);
        } catch (const InputError&) {
            ++result.report.malformed;
            continue;
        }
        if (!health_filter(s, keywords) && !health_filter(p, keywords) &&
            !health_filter(o, keywords)) {
            ++result.report.dropped;
            continue;
        }
        ++result.report.kept;
        const std::string& id = triple.head.label();
        auto it = by_subject.find(id);
        if (it == by_subject.end())
            it = by_subject.emplace(id, KnowledgeGraph(id, meta)).first;
        it->second.add(triple);
    }
    for (auto& [id, g] : by_subject) result.graphs.push_back(std::move(g));
    return result;
}

json to_json(const KnowledgeGraph& g) {
    json facts = json::array();
    for (const auto& t : g.facts())
        facts.push_back({t.head.label(), t.relation.label(), t.tail.label()});
    json surfaces = json::object();
    for (const auto& [label, e] : g.entities()) surfaces[label] = e.surface_forms();
    return {{"id", g.id()},
            {"source", {{"origin", g.source_meta().origin}, {"timestamp", g.source_meta().timestamp}}},
            {"facts", facts},
            {"surface_forms", surfaces}};
}

KnowledgeGraph graph_from_json(const json& j) {
    SourceMeta meta;
    if (j.contains("source")) {
        meta.origin = j["source"].value("origin", "");
        meta.timestamp = j["source"].value("timestamp", "");
    }
    KnowledgeGraph g(j.at("id").get<std::string>(), meta);
    const json* surfaces = j.contains("surface_forms") ? &j["surface_forms"] : nullptr;
    auto entity = [&](const std::string& label) {
        EntityId e(label);
        if (surfaces && surfaces->contains(label)) {
            for (const auto& s : (*surfaces)[label]) {
                if (!text::trim(s.get<std::string>()).empty()) e.merge_surface_forms(EntityId(s.get<std::string>()));
            }
        }
        return e;
    };
    for (const auto& f : j.at("facts")) {
        if (!f.is_array() || f.size() != 3) throw InputError("fact must be a [head, relation, tail] array");
        g.add(Triple(entity(f[0].get<std::string>()), RelationId(f[1].get<std::string>()),
                     entity(f[2].get<std::string>())));
    }
    return g;
}

json export_json(const KnowledgeGraph& g) {
    json nodes = json::array();
    for (const auto& [label, e] : g.entities()) {
        const std::string display = e.surface_forms().empty() ? label : *e.surface_forms().begin();
        nodes.push_back({{"id", label}, {"label", display}});
    }
    json edges = json::array();
    for (const auto& t : g.facts())
        edges.push_back({{"source", t.head.label()}, {"target", t.tail.label()}, {"label", t.relation.label()}});
    return {{"id", g.id()}, {"nodes", nodes}, {"edges", edges}};
}

namespace {
std::string dot_quote(const std::string& s) {
    std::string out = "\"";
    for (char c : s) {
        if (c == '"' || c == '\\') out.push_back('\\');
        out.push_back(c);
    }
    return out + "\"";
}
}  // namespace

std::string export_dot(const KnowledgeGraph& g) {
    std::ostringstream os;
    os << "digraph " << dot_quote(g.id()) << " {\n";
    for (const auto& [label, e] : g.entities()) os << "  " << dot_quote(label) << ";\n";
    for (const auto& t : g.facts())
        os << "  " << dot_quote(t.head.label()) << " -> " << dot_quote(t.tail.label())
           << " [label=" << dot_quote(t.relation.label()) << "];\n";
    os << "}\n";
    return os.str();
}

KnowledgeBase::KnowledgeBase(const KnowledgeBase& o) : graphs_(o.snapshot()) {}

KnowledgeBase& KnowledgeBase::operator=(const KnowledgeBase& o) {
    if (this != &o) {
        auto copy = o.snapshot();
        std::unique_lock lock(mu_);
        graphs_ = std::move(copy);
    }
    return *this;
}

void KnowledgeBase::add_graph(KnowledgeGraph g) {
    std::unique_lock lock(mu_);
    graphs_.push_back(std::move(g));
}

void KnowledgeBase::merge(const std::vector<KnowledgeGraph>& gs) {
    std::unique_lock lock(mu_);
    for (const auto& g : gs) {
        auto it = std::find_if(graphs_.begin(), graphs_.end(),
                               [&](const KnowledgeGraph& x) { return x.id() == g.id(); });
        if (it == graphs_.end()) {
            graphs_.push_back(g);
        } else {
            for (const auto& f : g.facts()) it->add(f);
        }
    }
}

std::vector<KnowledgeGraph> KnowledgeBase::snapshot() const {
    std::shared_lock lock(mu_);
    return graphs_;
}

std::size_t KnowledgeBase::size() const {
    std::shared_lock lock(mu_);
    return graphs_.size();
}

std::optional<KnowledgeGraph> KnowledgeBase::find(const std::string& id) const {
    std::shared_lock lock(mu_);
    for (const auto& g : graphs_)
        if (g.id() == id) return g;
    return std::nullopt;
}

json KnowledgeBase::to_json() const {
    std::shared_lock lock(mu_);
    json graphs = json::array();
    for (const auto& g : graphs_) graphs.push_back(kg::to_json(g));
    return {{"schema_version", 1}, {"graphs", graphs}};
}

KnowledgeBase KnowledgeBase::from_json(const json& j) {
    if (j.value("schema_version", 0) != 1) throw InputError("unsupported knowledge base schema_version");
    std::vector<KnowledgeGraph> graphs;
    for (const auto& g : j.at("graphs")) graphs.push_back(graph_from_json(g));
    return KnowledgeBase(std::move(graphs));
}

void KnowledgeBase::save(const std::string& path) const {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write knowledge base: " + path);
    out << to_json().dump(2) << '\n';
    if (!out) throw std::runtime_error("failed writing knowledge base: " + path);
}

KnowledgeBase KnowledgeBase::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot read knowledge base: " + path);
    return from_json(json::parse(in));
}

}  // namespace trumor::kg
