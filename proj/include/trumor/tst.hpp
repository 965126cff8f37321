#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include "json.hpp"
#include "trumor/topics.hpp"

/// \brief Topic-specific TextRank.
///
/// Edge weights are rescaled by the mean topic relevance of their endpoints,
/// normalized into a column-stochastic matrix P, and the chain
/// P' = d P + (1 - d) u e^T is power-iterated without ever forming P'.
/// The convergence report carries the quantities needed to check the
/// geometric rate d |lambda_2(P)| against observed residuals.
namespace trumor::tst {

/// w_prime(j, i) is the weight of edge j -> i.
struct AdjustedWeights {
    Eigen::MatrixXd w_prime;
    std::size_t size() const noexcept { return static_cast<std::size_t>(w_prime.rows()); }
};

/// Column-stochastic: p(i, j) is the probability of stepping j -> i.
struct TransitionMatrix {
    Eigen::SparseMatrix<double> p;
    std::size_t size() const noexcept { return static_cast<std::size_t>(p.rows()); }
    Eigen::MatrixXd dense() const { return Eigen::MatrixXd(p); }
};

struct TSTVector {
    std::vector<double> scores;
};

struct ConvergenceReport {
    int iterations = 0;
    bool converged = false;
    /// l1 step change |x_{t+1} - x_t| for t = 0 .. iterations-1.
    std::vector<double> residuals;
    /// |x_t - x_final| for t = 0 .. iterations, when tracked.
    std::vector<double> stationary_residuals;
    std::optional<double> lambda2;
    std::optional<double> theoretical_factor;  // d * lambda2
    std::optional<double> fitted_c;
};

class NonConvergence : public std::runtime_error {
public:
    NonConvergence(const std::string& what, ConvergenceReport report, TSTVector last)
        : std::runtime_error(what), report_(std::move(report)), last_(std::move(last)) {}
    const ConvergenceReport& report() const noexcept { return report_; }
    const TSTVector& last_iterate() const noexcept { return last_; }

private:
    ConvergenceReport report_;
    TSTVector last_;
};

struct PowerOptions {
    double d = 0.85;
    double tol = 1e-6;
    int max_iter = 500;
    /// Initial probability vector; uniform 1/n when absent.
    std::optional<std::vector<double>> start;
    /// Keep iterates to fill ConvergenceReport::stationary_residuals.
    bool track_stationary = false;
};

AdjustedWeights adjust_weights(const Eigen::MatrixXd& w, const topics::RelevanceVector& u);

/// Columns with zero out-mass are replaced by u.
TransitionMatrix build_transition(const AdjustedWeights& w, const topics::RelevanceVector& u);

/// Returns the first iterate whose l1 step change is below tol. Throws
/// NonConvergence (carrying the report) once max_iter steps are exhausted.
std::pair<TSTVector, ConvergenceReport> power_iterate(const TransitionMatrix& p,
                                                      const topics::RelevanceVector& u,
                                                      const PowerOptions& opts);

std::pair<TSTVector, ConvergenceReport> power_iterate(const TransitionMatrix& p,
                                                      const topics::RelevanceVector& u, double d = 0.85,
                                                      double tol = 1e-6, int max_iter = 500);

/// |second-largest-modulus eigenvalue| of P from a dense eigendecomposition.
/// Throws InputError when n exceeds `dense_bound`.
double lambda2(const TransitionMatrix& p, std::size_t dense_bound = 2000);

/// C = max_{t <= 3} r_t / (d lambda2)^t over the stationary residual series.
double fit_envelope_constant(const ConvergenceReport& report, double d);

/// True iff r_t <= C (d lambda2)^t (1 + 1e-6) for every recorded t.
/// Throws InputError when lambda2 or the stationary residual series is missing.
bool verify_envelope(const ConvergenceReport& report, double d);

/// Fills lambda2, theoretical_factor and fitted_c.
void annotate_spectrum(ConvergenceReport& report, const TransitionMatrix& p, double d,
                       std::size_t dense_bound = 2000);

nlohmann::json to_json(const ConvergenceReport& report);
/// Columns: t,residual,envelope_bound. Uses the stationary residuals when
/// present, step changes otherwise; envelope_bound is empty without a fit.
std::string to_csv(const ConvergenceReport& report);

/// Full pipeline on a raw weight matrix: adjust, normalize, iterate.
std::pair<TSTVector, ConvergenceReport> topic_specific_textrank(const Eigen::MatrixXd& w,
                                                                const topics::RelevanceVector& u,
                                                                const PowerOptions& opts);

}  // namespace trumor::tst
