#include "trumor/centrality.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "trumor/errors.hpp"

namespace trumor::centrality {

SentenceGraph build_sentence_graph(const std::vector<embed::CombinedVector>& vectors, double min_weight) {
    if (vectors.empty()) throw InputError("build_sentence_graph: no vectors");
    const auto n = static_cast<Eigen::Index>(vectors.size());
    for (const auto& v : vectors)
        if (embed::l2_norm(v.values) == 0.0) throw InputError("build_sentence_graph: zero vector");
    SentenceGraph g;
    g.weights = Eigen::MatrixXd::Zero(n, n);
    g.sentence_refs.resize(vectors.size());
    std::iota(g.sentence_refs.begin(), g.sentence_refs.end(), std::size_t{0});
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = i + 1; j < n; ++j) {
            double w = std::max(0.0, embed::cosine(vectors[i], vectors[j]));
            if (w < min_weight) w = 0.0;
            g.weights(i, j) = w;
            g.weights(j, i) = w;
        }
    }
    return g;
}

CentralityScores rank_sentences(const SentenceGraph& graph, double d, double tol, int max_iter) {
    const Eigen::Index n = graph.weights.rows();
    if (n == 0) throw InputError("rank_sentences: empty graph");
    if (!(d > 0.0 && d < 1.0)) throw InputError("rank_sentences: d must lie in (0, 1)");
    if (n == 1) return {{1.0}};
    if ((graph.weights.array() < 0.0).any()) throw InputError("rank_sentences: negative weight");

    // column j = out-distribution of vertex j
    Eigen::MatrixXd m = graph.weights.transpose();
    const double uniform = 1.0 / static_cast<double>(n);
    for (Eigen::Index j = 0; j < n; ++j) {
        const double s = m.col(j).sum();
        if (s > 0.0)
            m.col(j) /= s;
        else
            m.col(j).setConstant(uniform);
    }
    Eigen::VectorXd x = Eigen::VectorXd::Constant(n, uniform);
    double residual = 0.0;
    for (int it = 0; it < max_iter; ++it) {
        Eigen::VectorXd next = d * (m * x);
        next.array() += (1.0 - d) * uniform * x.sum();
        residual = (next - x).lpNorm<1>();
        x = std::move(next);
        if (residual < tol) {
            x /= x.sum();
            return {std::vector<double>(x.data(), x.data() + n)};
        }
    }
    throw NonConvergence("rank_sentences: no convergence within " + std::to_string(max_iter) +
                             " iterations",
                         residual);
}

std::vector<std::size_t> top_sentences(const CentralityScores& scores, std::size_t m) {
    const std::size_t n = scores.scores.size();
    if (m < 1 || m > n) throw InputError("top_sentences: m out of range");
    std::vector<std::size_t> idx(n);
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    std::stable_sort(idx.begin(), idx.end(),
                     [&](std::size_t a, std::size_t b) { return scores.scores[a] > scores.scores[b]; });
    idx.resize(m);
    return idx;
}

std::size_t default_summary_size(std::size_t n) {
    const auto frac = static_cast<std::size_t>(std::ceil(0.2 * static_cast<double>(n)));
    return std::min(n, std::max<std::size_t>(3, frac));
}

}  // namespace trumor::centrality
