#include "trumor/topics.hpp"

#include <algorithm>
#include <fstream>
#include <numeric>
#include <random>

#include "trumor/errors.hpp"
#include "trumor/kgstore.hpp"

namespace trumor::topics {

using nlohmann::json;

namespace {

constexpr int kFoldInSweeps = 50;

double unit_draw(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

}  // namespace

double TopicModel::phi(int topic, std::size_t word) const {
    const double v = static_cast<double>(vocab_.size());
    return (static_cast<double>(count(topic, word)) + beta_) /
           (static_cast<double>(topic_totals_[topic]) + v * beta_);
}

long TopicModel::word_index(const std::string& w) const {
    auto it = index_.find(w);
    return it == index_.end() ? -1 : static_cast<long>(it->second);
}

void TopicModel::rebuild_index() {
    index_.clear();
    for (std::size_t i = 0; i < vocab_.size(); ++i) index_.emplace(vocab_[i], i);
}

std::vector<std::string> TopicModel::top_words(int topic, std::size_t n) const {
    std::vector<std::size_t> idx(vocab_.size());
    std::iota(idx.begin(), idx.end(), 0);
    std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
        const auto ca = count(topic, a), cb = count(topic, b);
        return ca != cb ? ca > cb : vocab_[a] < vocab_[b];
    });
    std::vector<std::string> out;
    for (std::size_t i = 0; i < std::min(n, idx.size()); ++i) out.push_back(vocab_[idx[i]]);
    return out;
}

TopicModel train_lda(const std::vector<Sentence>& corpus, const LdaParams& params) {
    if (corpus.empty()) throw InputError("train_lda: corpus is empty");
    if (params.num_topics < 2) throw InputError("train_lda: need at least 2 topics");
    if (params.iterations < 1) throw InputError("train_lda: iterations must be >= 1");
    if (params.beta <= 0.0) throw InputError("train_lda: beta must be positive");

    TopicModel m;
    m.num_topics_ = params.num_topics;
    m.alpha_ = params.alpha > 0.0 ? params.alpha : 50.0 / params.num_topics;
    m.beta_ = params.beta;
    m.seed_ = params.seed;
    m.iterations_ = params.iterations;

    // vocabulary in first-seen order
    std::vector<std::vector<std::size_t>> docs;
    docs.reserve(corpus.size());
    for (const auto& s : corpus) {
        std::vector<std::size_t> d;
        for (const auto& w : s) {
            auto [it, inserted] = m.index_.try_emplace(w, m.vocab_.size());
            if (inserted) m.vocab_.push_back(w);
            d.push_back(it->second);
        }
        docs.push_back(std::move(d));
    }
    if (m.vocab_.empty()) throw InputError("train_lda: empty vocabulary");

    const std::size_t K = static_cast<std::size_t>(m.num_topics_);
    const std::size_t V = m.vocab_.size();
    m.word_topic_.assign(K * V, 0);
    m.topic_totals_.assign(K, 0);
    std::vector<std::vector<std::int64_t>> doc_topic(docs.size(), std::vector<std::int64_t>(K, 0));
    std::vector<std::vector<std::size_t>> z(docs.size());

    std::mt19937_64 rng(params.seed);
    for (std::size_t d = 0; d < docs.size(); ++d) {
        z[d].resize(docs[d].size());
        for (std::size_t i = 0; i < docs[d].size(); ++i) {
            const std::size_t k = rng() % K;
            z[d][i] = k;
            ++doc_topic[d][k];
            ++m.word_topic_[k * V + docs[d][i]];
            ++m.topic_totals_[k];
        }
    }

    const double vbeta = static_cast<double>(V) * m.beta_;
    std::vector<double> cdf(K);
    for (int it = 0; it < params.iterations; ++it) {
        for (std::size_t d = 0; d < docs.size(); ++d) {
            for (std::size_t i = 0; i < docs[d].size(); ++i) {
                const std::size_t w = docs[d][i];
                std::size_t k = z[d][i];
                --doc_topic[d][k];
                --m.word_topic_[k * V + w];
                --m.topic_totals_[k];

                double acc = 0.0;
                for (std::size_t t = 0; t < K; ++t) {
                    acc += (static_cast<double>(doc_topic[d][t]) + m.alpha_) *
                           (static_cast<double>(m.word_topic_[t * V + w]) + m.beta_) /
                           (static_cast<double>(m.topic_totals_[t]) + vbeta);
                    cdf[t] = acc;
                }
                const double r = unit_draw(rng) * acc;
                k = static_cast<std::size_t>(std::upper_bound(cdf.begin(), cdf.end(), r) - cdf.begin());
                if (k >= K) k = K - 1;

                z[d][i] = k;
                ++doc_topic[d][k];
                ++m.word_topic_[k * V + w];
                ++m.topic_totals_[k];
            }
        }
    }
    return m;
}

TopicDistribution infer_topics(const TopicModel& model, const Sentence& sentence) {
    const std::size_t K = static_cast<std::size_t>(model.num_topics());
    if (K == 0) throw InputError("infer_topics: model is not trained");
    std::vector<std::size_t> words;
    for (const auto& w : sentence) {
        const long i = model.word_index(w);
        if (i >= 0) words.push_back(static_cast<std::size_t>(i));
    }
    TopicDistribution out{std::vector<double>(K, 1.0 / static_cast<double>(K))};
    if (words.empty()) return out;

    // Mean-field fold-in: responsibilities under fixed phi, theta updated
    // with the Dirichlet prior. Deterministic, strictly positive.
    std::vector<std::vector<double>> phi(words.size(), std::vector<double>(K));
    for (std::size_t l = 0; l < words.size(); ++l)
        for (std::size_t k = 0; k < K; ++k) phi[l][k] = model.phi(static_cast<int>(k), words[l]);

    const double alpha = model.alpha();
    const double denom = static_cast<double>(K) * alpha + static_cast<double>(words.size());
    std::vector<double> theta = out.probs;
    std::vector<double> acc(K);
    for (int sweep = 0; sweep < kFoldInSweeps; ++sweep) {
        std::fill(acc.begin(), acc.end(), 0.0);
        for (std::size_t l = 0; l < words.size(); ++l) {
            double z = 0.0;
            for (std::size_t k = 0; k < K; ++k) z += theta[k] * phi[l][k];
            for (std::size_t k = 0; k < K; ++k) acc[k] += theta[k] * phi[l][k] / z;
        }
        for (std::size_t k = 0; k < K; ++k) theta[k] = (alpha + acc[k]) / denom;
    }
    const double total = std::accumulate(theta.begin(), theta.end(), 0.0);
    for (auto& t : theta) t /= total;
    out.probs = std::move(theta);
    return out;
}

HealthTopicSet health_topics(const TopicModel& model, const std::vector<std::string>& keywords,
                             double alpha_boost, std::size_t top_n) {
    if (alpha_boost < 1.0) throw InputError("health_topics: alpha boost must be >= 1");
    HealthTopicSet set;
    set.alpha_boost = alpha_boost;
    for (int k = 0; k < model.num_topics(); ++k) {
        const auto words = model.top_words(k, top_n);
        if (std::any_of(words.begin(), words.end(),
                        [&](const std::string& w) { return kg::health_filter(w, keywords); }))
            set.topic_ids.push_back(k);
    }
    return set;
}

RelevanceVector topic_relevance(const std::vector<TopicDistribution>& distributions,
                                const HealthTopicSet& health) {
    if (distributions.empty()) throw InputError("topic_relevance: no distributions");
    if (health.alpha_boost < 1.0) throw InputError("topic_relevance: alpha boost must be >= 1");
    const std::size_t K = distributions.front().probs.size();
    std::vector<double> beta(K, 1.0);
    for (int k : health.topic_ids) {
        if (k < 0 || static_cast<std::size_t>(k) >= K)
            throw InputError("topic_relevance: health topic id out of range");
        beta[static_cast<std::size_t>(k)] = health.alpha_boost;
    }
    RelevanceVector u;
    u.scores.reserve(distributions.size());
    double total = 0.0;
    for (const auto& t : distributions) {
        if (t.probs.size() != K) throw InputError("topic_relevance: inconsistent topic counts");
        double s = 0.0;
        for (std::size_t k = 0; k < K; ++k) s += beta[k] * t.probs[k];
        u.scores.push_back(s);
        total += s;
    }
    if (!(total > 0.0)) throw InputError("topic_relevance: zero total topic mass");
    for (auto& s : u.scores) s /= total;
    return u;
}

json TopicModel::to_json() const {
    return {{"num_topics", num_topics_}, {"alpha", alpha_},   {"beta", beta_},
            {"seed", seed_},             {"iterations", iterations_},
            {"vocab", vocab_},           {"word_topic_counts", word_topic_},
            {"topic_totals", topic_totals_}};
}

TopicModel TopicModel::from_json(const json& j) {
    TopicModel m;
    m.num_topics_ = j.at("num_topics").get<int>();
    m.alpha_ = j.at("alpha").get<double>();
    m.beta_ = j.at("beta").get<double>();
    m.seed_ = j.at("seed").get<std::uint64_t>();
    m.iterations_ = j.value("iterations", 0);
    m.vocab_ = j.at("vocab").get<std::vector<std::string>>();
    m.word_topic_ = j.at("word_topic_counts").get<std::vector<std::int64_t>>();
    m.topic_totals_ = j.at("topic_totals").get<std::vector<std::int64_t>>();
    const auto K = static_cast<std::size_t>(m.num_topics_);
    if (m.num_topics_ < 2 || m.word_topic_.size() != K * m.vocab_.size() || m.topic_totals_.size() != K)
        throw InputError("topic model: inconsistent table dimensions");
    for (std::size_t k = 0; k < K; ++k) {
        std::int64_t s = 0;
        for (std::size_t w = 0; w < m.vocab_.size(); ++w) {
            const auto c = m.word_topic_[k * m.vocab_.size() + w];
            if (c < 0) throw InputError("topic model: negative count");
            s += c;
        }
        if (s != m.topic_totals_[k]) throw InputError("topic model: topic totals do not match counts");
    }
    m.rebuild_index();
    return m;
}

void TopicModel::save(const std::string& path) const {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write topic model: " + path);
    out << to_json().dump() << '\n';
}

TopicModel TopicModel::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot read topic model: " + path);
    return from_json(json::parse(in));
}

}  // namespace trumor::topics
