#pragma once

#include <cstdint>
#include <cstddef>
#include <string>
#include <utility>
#include <vector>

namespace trumor {

/// Flat run configuration. Loaded from a `key = value` file; every key
/// may also be overridden from the command line.
struct Config {
    double eta = 0.7;
    double alpha = 1.5;
    double d = 0.85;
    double tol = 1e-6;
    int max_iter = 500;
    int k = 20;
    int lda_iterations = 1000;
    std::uint64_t seed = 42;
    double theta_true = 0.6;
    std::size_t top_n = 5;
    std::size_t summary_size = 0;
    double min_edge_weight = 0.0;
    std::vector<std::string> health_keywords = {"health", "medical", "medicine", "disease", "pandemic", "epidemic"};
    std::vector<std::pair<std::string, std::string>> antonyms;  // empty: built-in list
    std::vector<std::string> negation_markers = {"not_", "no_"};
    std::string embed_provider = "hash";
    std::size_t embed_dim = 256;
    std::string embed_url;
    double embed_timeout = 10.0;
    std::size_t embed_max_in_flight = 4;
    std::string extractor = "rules";
    bool llm_fallback = true;
    std::string llm_endpoint;
    std::string llm_model = "gpt-4";
    double llm_timeout = 30.0;
    std::size_t llm_max_in_flight = 4;
    std::size_t dense_eigen_bound = 2000;

    /// Sets one key from its textual value. Throws InputError on an unknown
    /// key or an out-of-range value.
    void set(const std::string& key, const std::string& value);
    void validate() const;

    /// Canonical `key=value` lines, sorted by key.
    std::string canonical() const;
    /// FNV-1a of canonical(), 16 hex digits.
    std::string hash() const;

    static Config parse(const std::string& text);
    static Config load(const std::string& path);
};

}  // namespace trumor
