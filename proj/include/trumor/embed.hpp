#pragma once

#include <chrono>
#include <cstddef>
#include <memory>
#include <mutex>
#include <semaphore>
#include <string>
#include <unordered_map>
#include <vector>

#include "trumor/topics.hpp"

namespace trumor::embed {

struct EmbeddingVector {
    std::vector<double> values;
};

/// [eta * e/|e| ; (1 - eta) * t/|t|]
struct CombinedVector {
    std::vector<double> values;
    std::size_t embedding_dim = 0;
};

/// Sentence encoder. Implementations are immutable after construction
/// (apart from internal memoization) and deterministic per configuration.
class EmbeddingProvider {
public:
    virtual ~EmbeddingProvider() = default;
    virtual std::size_t dimension() const = 0;
    virtual EmbeddingVector embed(const std::string& text) const = 0;
    virtual std::vector<EmbeddingVector> embed_batch(const std::vector<std::string>& texts) const;
    virtual std::string kind() const = 0;
};

/// Signed feature hashing of lowercase alphanumeric tokens into D buckets,
/// L2-normalized.
class HashEmbeddingProvider final : public EmbeddingProvider {
public:
    explicit HashEmbeddingProvider(std::size_t dimension = 256);
    std::size_t dimension() const override { return dim_; }
    EmbeddingVector embed(const std::string& text) const override;
    std::string kind() const override { return "hash"; }

private:
    std::size_t dim_;
};

struct RemoteConfig {
    std::string url;  // http://host:port/path
    std::chrono::milliseconds timeout{10000};
    std::size_t max_in_flight = 4;
    std::size_t batch_size = 64;
};

/// Reads TRUMOR_EMBED_URL and TRUMOR_EMBED_TIMEOUT (seconds) over `base`.
RemoteConfig remote_config_from_env(RemoteConfig base = {});

/// HTTP encoder: POST {"texts":[...]} -> {"vectors":[[...], ...]}.
/// Results are memoized for the lifetime of the provider.
class RemoteEmbeddingProvider final : public EmbeddingProvider {
public:
    explicit RemoteEmbeddingProvider(RemoteConfig cfg);
    std::size_t dimension() const override;
    EmbeddingVector embed(const std::string& text) const override;
    std::vector<EmbeddingVector> embed_batch(const std::vector<std::string>& texts) const override;
    std::string kind() const override { return "remote"; }

private:
    std::vector<EmbeddingVector> request(const std::vector<std::string>& texts) const;

    RemoteConfig cfg_;
    mutable std::counting_semaphore<64> in_flight_;
    mutable std::mutex memo_mu_;
    mutable std::unordered_map<std::string, EmbeddingVector> memo_;
    mutable std::size_t dim_ = 0;
};

EmbeddingVector embed_sentence(const EmbeddingProvider& provider, const std::string& text);

double l2_norm(const std::vector<double>& v);

/// Either block may be zero (contributes a zero block) but not both.
CombinedVector combine(const EmbeddingVector& e, const topics::TopicDistribution& t, double eta);

double cosine(const std::vector<double>& a, const std::vector<double>& b);
inline double cosine(const CombinedVector& a, const CombinedVector& b) {
    return cosine(a.values, b.values);
}

}  // namespace trumor::embed
