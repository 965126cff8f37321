#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "trumor/centrality.hpp"
#include "trumor/topics.hpp"
#include "trumor/tst.hpp"

/// \brief Convergence experiment for TST on Watts-Strogatz graphs.
namespace trumor::bench {

struct WSConfig {
    std::size_t n = 500;
    std::size_t k = 4;  // even ring degree
    double p_rewire = 0.1;
    std::uint64_t seed = 42;
};

/// Ring lattice of degree k with each edge rewired with probability
/// p_rewire (no self-loops, no duplicate edges). Retries with seed+1 up to
/// 10 times until the graph is connected. Unit weights.
centrality::SentenceGraph watts_strogatz(const WSConfig& cfg);

std::size_t edge_count(const centrality::SentenceGraph& g);
bool is_connected(const centrality::SentenceGraph& g);

struct SweepRow {
    double d = 0.0;
    int iterations = 0;
    bool converged = false;
    std::optional<double> lambda2;
    std::optional<double> factor;
    tst::ConvergenceReport report;
};

struct SweepResult {
    std::vector<SweepRow> rows;
};

topics::RelevanceVector uniform_relevance(std::size_t n);

/// One power iteration per damping factor; non-convergence is recorded in
/// the row rather than thrown. lambda2 is reported when n <= dense_bound.
SweepResult run_sweep(const centrality::SentenceGraph& graph, const topics::RelevanceVector& u,
                      const std::vector<double>& ds, double tol = 1e-6, int max_iter = 500,
                      std::size_t dense_bound = 2000);

/// Header `d,iterations,converged,lambda2,factor`, reals with 6 decimals,
/// empty iterations for non-converged rows.
std::string format_sweep_csv(const SweepResult& result);
SweepResult parse_sweep_csv(const std::string& csv);

/// Writes sweep.csv plus residuals_d<d>.csv per row into `dir`; returns the
/// paths written.
std::vector<std::string> emit_csv(const SweepResult& result, const std::string& dir);

}  // namespace trumor::bench
