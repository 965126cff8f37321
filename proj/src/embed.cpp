#include "trumor/embed.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>

#include "json.hpp"
#include "trumor/errors.hpp"
#include "trumor/http.hpp"
#include "trumor/text.hpp"

namespace trumor::embed {

using nlohmann::json;

std::vector<EmbeddingVector> EmbeddingProvider::embed_batch(const std::vector<std::string>& texts) const {
    std::vector<EmbeddingVector> out;
    out.reserve(texts.size());
    for (const auto& t : texts) out.push_back(embed(t));
    return out;
}

HashEmbeddingProvider::HashEmbeddingProvider(std::size_t dimension) : dim_(dimension) {
    if (dim_ == 0) throw InputError("embedding dimension must be positive");
}

EmbeddingVector HashEmbeddingProvider::embed(const std::string& text) const {
    const auto toks = text::raw_tokens(text);
    if (toks.empty()) throw InputError("embed_sentence: text has no tokens");
    EmbeddingVector v{std::vector<double>(dim_, 0.0)};
    for (const auto& t : toks) {
        const std::uint64_t h = text::fnv1a(t);
        const double sign = (h >> 63) ? -1.0 : 1.0;
        v.values[h % dim_] += sign;
    }
    const double n = l2_norm(v.values);
    // all buckets can cancel out for adversarial inputs
    if (n > 0.0)
        for (auto& x : v.values) x /= n;
    return v;
}

RemoteConfig remote_config_from_env(RemoteConfig base) {
    if (const char* url = std::getenv("TRUMOR_EMBED_URL"); url && *url) base.url = url;
    if (const char* t = std::getenv("TRUMOR_EMBED_TIMEOUT"); t && *t)
        base.timeout = std::chrono::milliseconds(static_cast<long>(std::atof(t) * 1000.0));
    return base;
}

RemoteEmbeddingProvider::RemoteEmbeddingProvider(RemoteConfig cfg)
    : cfg_(std::move(cfg)), in_flight_(static_cast<std::ptrdiff_t>(std::clamp<std::size_t>(cfg_.max_in_flight, 1, 64))) {
    http::parse_url(cfg_.url);
    if (cfg_.timeout.count() <= 0) throw InputError("embedding timeout must be positive");
    if (cfg_.batch_size == 0 || cfg_.batch_size > 64) cfg_.batch_size = 64;
}

std::size_t RemoteEmbeddingProvider::dimension() const {
    std::lock_guard lock(memo_mu_);
    return dim_;
}

std::vector<EmbeddingVector> RemoteEmbeddingProvider::request(const std::vector<std::string>& texts) const {
    const json body = {{"texts", texts}};
    in_flight_.acquire();
    http::Response res;
    try {
        res = http::post_json(http::parse_url(cfg_.url), body.dump(), cfg_.timeout);
    } catch (...) {
        in_flight_.release();
        throw;
    }
    in_flight_.release();
    if (res.status < 200 || res.status >= 300)
        throw TransportError("embedding service returned HTTP " + std::to_string(res.status),
                             /*retriable=*/false, res.status, res.body);
    json j;
    try {
        j = json::parse(res.body);
    } catch (const json::exception& e) {
        throw TransportError(std::string("embedding response is not JSON: ") + e.what(), false, res.status,
                             res.body);
    }
    if (!j.contains("vectors") || !j["vectors"].is_array() || j["vectors"].size() != texts.size())
        throw TransportError("embedding response has wrong shape", false, res.status, res.body);
    std::vector<EmbeddingVector> out;
    for (const auto& v : j["vectors"]) {
        EmbeddingVector e{v.get<std::vector<double>>()};
        if (e.values.empty() || !std::all_of(e.values.begin(), e.values.end(), [](double x) { return std::isfinite(x); }))
            throw TransportError("embedding response contains an empty or non-finite vector", false);
        out.push_back(std::move(e));
    }
    return out;
}

std::vector<EmbeddingVector> RemoteEmbeddingProvider::embed_batch(const std::vector<std::string>& texts) const {
    std::vector<std::string> missing;
    {
        std::lock_guard lock(memo_mu_);
        for (const auto& t : texts) {
            if (text::trim(t).empty()) throw InputError("embed_sentence: empty text");
            if (!memo_.contains(t) && std::find(missing.begin(), missing.end(), t) == missing.end())
                missing.push_back(t);
        }
    }
    for (std::size_t i = 0; i < missing.size(); i += cfg_.batch_size) {
        std::vector<std::string> chunk(missing.begin() + static_cast<std::ptrdiff_t>(i),
                                       missing.begin() + static_cast<std::ptrdiff_t>(std::min(missing.size(), i + cfg_.batch_size)));
        auto vecs = request(chunk);
        std::lock_guard lock(memo_mu_);
        for (std::size_t k = 0; k < chunk.size(); ++k) {
            if (dim_ == 0) dim_ = vecs[k].values.size();
            if (vecs[k].values.size() != dim_)
                throw TransportError("embedding service changed dimension", false);
            memo_.emplace(chunk[k], std::move(vecs[k]));
        }
    }
    std::vector<EmbeddingVector> out;
    std::lock_guard lock(memo_mu_);
    for (const auto& t : texts) out.push_back(memo_.at(t));
    return out;
}

EmbeddingVector RemoteEmbeddingProvider::embed(const std::string& text) const {
    return embed_batch({text}).front();
}

EmbeddingVector embed_sentence(const EmbeddingProvider& provider, const std::string& text) {
    if (text::trim(text).empty()) throw InputError("embed_sentence: empty text");
    return provider.embed(text);
}

double l2_norm(const std::vector<double>& v) {
    double s = 0.0;
    for (double x : v) s += x * x;
    return std::sqrt(s);
}

CombinedVector combine(const EmbeddingVector& e, const topics::TopicDistribution& t, double eta) {
    if (!(eta >= 0.0 && eta <= 1.0)) throw InputError("combine: eta must lie in [0, 1]");
    const double ne = l2_norm(e.values);
    const double nt = l2_norm(t.probs);
    if (ne == 0.0 && nt == 0.0) throw InputError("combine: both inputs are zero vectors");
    CombinedVector out;
    out.embedding_dim = e.values.size();
    out.values.reserve(e.values.size() + t.probs.size());
    for (double x : e.values) out.values.push_back(ne > 0.0 ? eta * x / ne : 0.0);
    for (double x : t.probs) out.values.push_back(nt > 0.0 ? (1.0 - eta) * x / nt : 0.0);
    return out;
}

double cosine(const std::vector<double>& a, const std::vector<double>& b) {
    if (a.size() != b.size()) throw InputError("cosine: dimension mismatch");
    const double na = l2_norm(a), nb = l2_norm(b);
    if (na == 0.0 || nb == 0.0) throw InputError("cosine: zero vector");
    double dot = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) dot += a[i] * b[i];
    return std::clamp(dot / (na * nb), -1.0, 1.0);
}

}  // namespace trumor::embed
