#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "trumor/embed.hpp"

namespace trumor::centrality {

/// Weighted sentence graph G_s: symmetric, zero diagonal, non-negative.
struct SentenceGraph {
    Eigen::MatrixXd weights;
    std::vector<std::size_t> sentence_refs;  // vertex -> source sentence index

    std::size_t size() const noexcept { return static_cast<std::size_t>(weights.rows()); }
};

struct CentralityScores {
    std::vector<double> scores;
};

class NonConvergence : public std::runtime_error {
public:
    NonConvergence(const std::string& what, double last_residual)
        : std::runtime_error(what), last_residual_(last_residual) {}
    double last_residual() const noexcept { return last_residual_; }

private:
    double last_residual_;
};

/// weights(i,j) = max(0, cosine(v_i, v_j)) for i != j. Weights below
/// `min_weight` are dropped (0 keeps the complete graph).
SentenceGraph build_sentence_graph(const std::vector<embed::CombinedVector>& vectors,
                                   double min_weight = 0.0);

/// PageRank over the column-normalized weights with uniform teleportation.
/// Dangling vertices link uniformly. Starts from 1/n, stops on an l1 step
/// change below `tol`.
CentralityScores rank_sentences(const SentenceGraph& graph, double d = 0.85, double tol = 1e-6,
                                int max_iter = 500);

/// Indices of the m largest scores; ties go to the lower index.
std::vector<std::size_t> top_sentences(const CentralityScores& scores, std::size_t m);

/// max(3, ceil(0.2 n)), capped at n.
std::size_t default_summary_size(std::size_t n);

}  // namespace trumor::centrality
