#pragma once

#include <cstdint>
#include <string>
#include <unordered_map>
#include <vector>

#include "json.hpp"

/// \brief Sentence-level LDA and the topic relevance vector used for
/// topic-aware teleportation.
namespace trumor::topics {

using Sentence = std::vector<std::string>;

struct LdaParams {
    int num_topics = 20;
    double alpha = -1.0;  // <= 0 means 50/K
    double beta = 0.01;
    int iterations = 1000;
    std::uint64_t seed = 1;
};

/// Count tables of a trained collapsed-Gibbs LDA model. Immutable after
/// training; safe for concurrent inference.
class TopicModel {
public:
    TopicModel() = default;

    int num_topics() const noexcept { return num_topics_; }
    std::size_t vocab_size() const noexcept { return vocab_.size(); }
    double alpha() const noexcept { return alpha_; }
    double beta() const noexcept { return beta_; }
    std::uint64_t seed() const noexcept { return seed_; }
    const std::vector<std::string>& vocab() const noexcept { return vocab_; }
    /// Row-major K x V.
    const std::vector<std::int64_t>& word_topic_counts() const noexcept { return word_topic_; }
    const std::vector<std::int64_t>& topic_totals() const noexcept { return topic_totals_; }

    std::int64_t count(int topic, std::size_t word) const {
        return word_topic_[static_cast<std::size_t>(topic) * vocab_.size() + word];
    }
    /// Smoothed p(word | topic).
    double phi(int topic, std::size_t word) const;
    /// -1 if unknown.
    long word_index(const std::string& w) const;

    /// Highest-probability words of a topic, ties broken alphabetically.
    std::vector<std::string> top_words(int topic, std::size_t n) const;

    nlohmann::json to_json() const;
    static TopicModel from_json(const nlohmann::json& j);
    void save(const std::string& path) const;
    static TopicModel load(const std::string& path);

    friend TopicModel train_lda(const std::vector<Sentence>&, const LdaParams&);

private:
    void rebuild_index();

    int num_topics_ = 0;
    double alpha_ = 0.0;
    double beta_ = 0.0;
    std::uint64_t seed_ = 0;
    int iterations_ = 0;
    std::vector<std::string> vocab_;
    std::unordered_map<std::string, std::size_t> index_;
    std::vector<std::int64_t> word_topic_;
    std::vector<std::int64_t> topic_totals_;
};

/// Probability vector over K topics.
struct TopicDistribution {
    std::vector<double> probs;
};

struct HealthTopicSet {
    std::vector<int> topic_ids;  // 0-based
    double alpha_boost = 1.5;
};

/// Per-sentence relevance scores u; positive and summing to 1.
struct RelevanceVector {
    std::vector<double> scores;
};

/// Collapsed Gibbs sampling. Deterministic for a given seed.
TopicModel train_lda(const std::vector<Sentence>& corpus, const LdaParams& params);

/// Fold-in inference with the topic-word table held fixed. Sentences with
/// no in-vocabulary token get the uniform distribution.
TopicDistribution infer_topics(const TopicModel& model, const Sentence& sentence);

/// Topics whose top `top_n` words contain a health keyword.
HealthTopicSet health_topics(const TopicModel& model, const std::vector<std::string>& keywords,
                             double alpha_boost = 1.5, std::size_t top_n = 20);

RelevanceVector topic_relevance(const std::vector<TopicDistribution>& distributions,
                                const HealthTopicSet& health);

}  // namespace trumor::topics
