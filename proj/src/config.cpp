#include "trumor/config.hpp"

#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

#include "trumor/errors.hpp"
#include "trumor/text.hpp"

namespace trumor {

namespace {

std::string unquote(const std::string& v) {
    std::string t = text::trim(v);
    if (t.size() >= 2 && ((t.front() == '"' && t.back() == '"') || (t.front() == '\'' && t.back() == '\'')))
        return t.substr(1, t.size() - 2);
    return t;
}

std::vector<std::string> split_list(const std::string& v) {
    std::vector<std::string> out;
    std::string cell;
    std::stringstream ss(unquote(v));
    while (std::getline(ss, cell, ',')) {
        cell = unquote(cell);
        if (!cell.empty()) out.push_back(cell);
    }
    return out;
}

double to_double(const std::string& key, const std::string& v) {
    try {
        std::size_t used = 0;
        const std::string t = unquote(v);
        const double x = std::stod(t, &used);
        if (used != t.size()) throw std::invalid_argument(t);
        return x;
    } catch (const std::exception&) {
        throw InputError("config: '" + key + "' expects a number, got '" + v + "'");
    }
}

long long to_int(const std::string& key, const std::string& v) {
    try {
        std::size_t used = 0;
        const std::string t = unquote(v);
        const long long x = std::stoll(t, &used);
        if (used != t.size()) throw std::invalid_argument(t);
        return x;
    } catch (const std::exception&) {
        throw InputError("config: '" + key + "' expects an integer, got '" + v + "'");
    }
}

std::size_t to_size(const std::string& key, const std::string& v) {
    const auto x = to_int(key, v);
    if (x < 0) throw InputError("config: '" + key + "' must be non-negative");
    return static_cast<std::size_t>(x);
}

bool to_bool(const std::string& key, const std::string& v) {
    const std::string t = text::to_lower(unquote(v));
    if (t == "true" || t == "1" || t == "yes") return true;
    if (t == "false" || t == "0" || t == "no") return false;
    throw InputError("config: '" + key + "' expects true/false, got '" + v + "'");
}

std::string num(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

std::string join(const std::vector<std::string>& xs) {
    std::string out;
    for (const auto& x : xs) out += (out.empty() ? "" : ",") + x;
    return out;
}

}  // namespace

void Config::set(const std::string& raw_key, const std::string& value) {
    const std::string key = text::trim(raw_key);
    if (key == "eta") eta = to_double(key, value);
    else if (key == "alpha") alpha = to_double(key, value);
    else if (key == "d") d = to_double(key, value);
    else if (key == "tol") tol = to_double(key, value);
    else if (key == "max_iter") max_iter = static_cast<int>(to_int(key, value));
    else if (key == "k") k = static_cast<int>(to_int(key, value));
    else if (key == "lda_iterations") lda_iterations = static_cast<int>(to_int(key, value));
    else if (key == "seed") seed = static_cast<std::uint64_t>(to_size(key, value));
    else if (key == "theta_true") theta_true = to_double(key, value);
    else if (key == "top_n") top_n = to_size(key, value);
    else if (key == "summary_size") summary_size = to_size(key, value);
    else if (key == "min_edge_weight") min_edge_weight = to_double(key, value);
    else if (key == "health_keywords") health_keywords = split_list(value);
    else if (key == "antonyms") {
        antonyms.clear();
        for (const auto& pair : split_list(value)) {
            const auto colon = pair.find(':');
            if (colon == std::string::npos || colon == 0 || colon + 1 == pair.size())
                throw InputError("config: antonym entries must look like a:b, got '" + pair + "'");
            antonyms.emplace_back(text::trim(pair.substr(0, colon)), text::trim(pair.substr(colon + 1)));
        }
    } else if (key == "negation_markers") negation_markers = split_list(value);
    else if (key == "embed_provider") embed_provider = unquote(value);
    else if (key == "embed_dim") embed_dim = to_size(key, value);
    else if (key == "embed_url") embed_url = unquote(value);
    else if (key == "embed_timeout") embed_timeout = to_double(key, value);
    else if (key == "embed_max_in_flight") embed_max_in_flight = to_size(key, value);
    else if (key == "extractor") extractor = unquote(value);
    else if (key == "llm_fallback") llm_fallback = to_bool(key, value);
    else if (key == "llm_endpoint") llm_endpoint = unquote(value);
    else if (key == "llm_model") llm_model = unquote(value);
    else if (key == "llm_timeout") llm_timeout = to_double(key, value);
    else if (key == "llm_max_in_flight") llm_max_in_flight = to_size(key, value);
    else if (key == "dense_eigen_bound") dense_eigen_bound = to_size(key, value);
    else throw InputError("config: unknown key '" + key + "'");
}

void Config::validate() const {
    auto require = [](bool ok, const char* what) {
        if (!ok) throw InputError(std::string("config: ") + what);
    };
    require(eta >= 0.0 && eta <= 1.0, "eta must lie in [0, 1]");
    require(alpha >= 1.0, "alpha must be >= 1");
    require(d > 0.0 && d < 1.0, "d must lie in (0, 1)");
    require(tol > 0.0, "tol must be positive");
    require(max_iter >= 1, "max_iter must be >= 1");
    require(k >= 2, "k must be >= 2");
    require(lda_iterations >= 1, "lda_iterations must be >= 1");
    require(theta_true > 0.0 && theta_true <= 1.0, "theta_true must lie in (0, 1]");
    require(min_edge_weight >= 0.0, "min_edge_weight must be non-negative");
    require(!health_keywords.empty(), "health_keywords must not be empty");
    require(embed_provider == "hash" || embed_provider == "remote", "embed_provider must be hash or remote");
    require(embed_dim >= 1, "embed_dim must be positive");
    require(embed_provider != "remote" || !embed_url.empty(), "embed_url is required for the remote provider");
    require(embed_timeout > 0.0, "embed_timeout must be positive");
    require(extractor == "rules" || extractor == "llm", "extractor must be rules or llm");
    require(llm_timeout > 0.0, "llm_timeout must be positive");
    require(embed_max_in_flight >= 1 && llm_max_in_flight >= 1, "in-flight limits must be >= 1");
}

std::string Config::canonical() const {
    std::map<std::string, std::string> kv;
    kv["eta"] = num(eta);
    kv["alpha"] = num(alpha);
    kv["d"] = num(d);
    kv["tol"] = num(tol);
    kv["max_iter"] = std::to_string(max_iter);
    kv["k"] = std::to_string(k);
    kv["lda_iterations"] = std::to_string(lda_iterations);
    kv["seed"] = std::to_string(seed);
    kv["theta_true"] = num(theta_true);
    kv["top_n"] = std::to_string(top_n);
    kv["summary_size"] = std::to_string(summary_size);
    kv["min_edge_weight"] = num(min_edge_weight);
    kv["health_keywords"] = join(health_keywords);
    std::vector<std::string> ants;
    for (const auto& [a, b] : antonyms) ants.push_back(a + ":" + b);
    kv["antonyms"] = join(ants);
    kv["negation_markers"] = join(negation_markers);
    kv["embed_provider"] = embed_provider;
    kv["embed_dim"] = std::to_string(embed_dim);
    kv["embed_url"] = embed_url;
    kv["embed_timeout"] = num(embed_timeout);
    kv["embed_max_in_flight"] = std::to_string(embed_max_in_flight);
    kv["extractor"] = extractor;
    kv["llm_fallback"] = llm_fallback ? "true" : "false";
    kv["llm_endpoint"] = llm_endpoint;
    kv["llm_model"] = llm_model;
    kv["llm_timeout"] = num(llm_timeout);
    kv["llm_max_in_flight"] = std::to_string(llm_max_in_flight);
    kv["dense_eigen_bound"] = std::to_string(dense_eigen_bound);
    std::string out;
    for (const auto& [k_, v] : kv) out += k_ + "=" + v + "\n";
    return out;
}

std::string Config::hash() const {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(text::fnv1a(canonical())));
    return buf;
}

Config Config::parse(const std::string& body) {
    Config c;
    std::istringstream in(body);
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const std::string t = text::trim(line);
        if (t.empty() || t.front() == '#' || t.front() == '[') continue;
        const auto eq = t.find('=');
        if (eq == std::string::npos)
            throw InputError("config line " + std::to_string(lineno) + ": expected key = value");
        c.set(t.substr(0, eq), t.substr(eq + 1));
    }
    c.validate();
    return c;
}

Config Config::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot read config file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse(ss.str());
}

}  // namespace trumor
