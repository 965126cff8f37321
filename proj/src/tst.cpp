#include "trumor/tst.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>

#include <Eigen/Eigenvalues>

#include "trumor/errors.hpp"

namespace trumor::tst {

namespace {

Eigen::VectorXd as_vector(const topics::RelevanceVector& u) {
    return Eigen::Map<const Eigen::VectorXd>(u.scores.data(), static_cast<Eigen::Index>(u.scores.size()));
}

void check_relevance(const topics::RelevanceVector& u, Eigen::Index n) {
    if (static_cast<Eigen::Index>(u.scores.size()) != n) throw InputError("relevance vector dimension mismatch");
    for (double x : u.scores)
        if (!(x > 0.0)) throw InputError("relevance scores must be strictly positive");
}

}  // namespace

AdjustedWeights adjust_weights(const Eigen::MatrixXd& w, const topics::RelevanceVector& u) {
    if (w.rows() != w.cols()) throw InputError("adjust_weights: weight matrix is not square");
    check_relevance(u, w.rows());
    const Eigen::Index n = w.rows();
    AdjustedWeights out{Eigen::MatrixXd::Zero(n, n)};
    for (Eigen::Index j = 0; j < n; ++j)
        for (Eigen::Index i = 0; i < n; ++i)
            if (w(j, i) != 0.0) out.w_prime(j, i) = 0.5 * (u.scores[i] + u.scores[j]) * w(j, i);
    return out;
}

TransitionMatrix build_transition(const AdjustedWeights& w, const topics::RelevanceVector& u) {
    const Eigen::Index n = w.w_prime.rows();
    if (w.w_prime.cols() != n) throw InputError("build_transition: weight matrix is not square");
    check_relevance(u, n);
    if ((w.w_prime.array() < 0.0).any()) throw InputError("build_transition: negative weight");

    std::vector<Eigen::Triplet<double>> entries;
    for (Eigen::Index j = 0; j < n; ++j) {
        const double out_mass = w.w_prime.row(j).sum();
        if (out_mass > 0.0) {
            for (Eigen::Index i = 0; i < n; ++i)
                if (w.w_prime(j, i) > 0.0) entries.emplace_back(i, j, w.w_prime(j, i) / out_mass);
        } else {
            for (Eigen::Index i = 0; i < n; ++i) entries.emplace_back(i, j, u.scores[i]);
        }
    }
    TransitionMatrix t;
    t.p.resize(n, n);
    t.p.setFromTriplets(entries.begin(), entries.end());
    t.p.makeCompressed();
    return t;
}

std::pair<TSTVector, ConvergenceReport> power_iterate(const TransitionMatrix& p,
                                                      const topics::RelevanceVector& u,
                                                      const PowerOptions& opts) {
    const Eigen::Index n = p.p.rows();
    if (n == 0) throw InputError("power_iterate: empty matrix");
    check_relevance(u, n);
    if (!(opts.d > 0.0 && opts.d < 1.0)) throw InputError("power_iterate: d must lie in (0, 1)");
    if (!(opts.tol > 0.0)) throw InputError("power_iterate: tol must be positive");
    if (opts.max_iter < 1) throw InputError("power_iterate: max_iter must be >= 1");

    const Eigen::VectorXd teleport = as_vector(u);
    Eigen::VectorXd x;
    if (opts.start) {
        if (static_cast<Eigen::Index>(opts.start->size()) != n)
            throw InputError("power_iterate: start vector dimension mismatch");
        x = Eigen::Map<const Eigen::VectorXd>(opts.start->data(), n);
    } else {
        x = Eigen::VectorXd::Constant(n, 1.0 / static_cast<double>(n));
    }

    ConvergenceReport report;
    std::vector<Eigen::VectorXd> iterates;
    if (opts.track_stationary) iterates.push_back(x);

    Eigen::VectorXd next(n);
    for (int it = 1; it <= opts.max_iter; ++it) {
        next.noalias() = opts.d * (p.p * x);
        next += ((1.0 - opts.d) * x.sum()) * teleport;
        const double residual = (next - x).lpNorm<1>();
        x.swap(next);
        report.residuals.push_back(residual);
        report.iterations = it;
        if (opts.track_stationary) iterates.push_back(x);
        if (residual < opts.tol) {
            report.converged = true;
            break;
        }
    }
    if (opts.track_stationary)
        for (const auto& xt : iterates) report.stationary_residuals.push_back((xt - x).lpNorm<1>());

    TSTVector result{std::vector<double>(x.data(), x.data() + n)};
    if (!report.converged) {
        const std::string msg = "power_iterate: no convergence within " + std::to_string(opts.max_iter) +
                                " iterations (last residual " + std::to_string(report.residuals.back()) + ")";
        throw NonConvergence(msg, std::move(report), std::move(result));
    }
    return {std::move(result), std::move(report)};
}

std::pair<TSTVector, ConvergenceReport> power_iterate(const TransitionMatrix& p,
                                                      const topics::RelevanceVector& u, double d,
                                                      double tol, int max_iter) {
    PowerOptions opts;
    opts.d = d;
    opts.tol = tol;
    opts.max_iter = max_iter;
    return power_iterate(p, u, opts);
}

double lambda2(const TransitionMatrix& p, std::size_t dense_bound) {
    const std::size_t n = p.size();
    if (n > dense_bound)
        throw InputError("lambda2: n = " + std::to_string(n) + " exceeds the dense eigensolver bound of " +
                         std::to_string(dense_bound) + "; skip spectral reporting");
    if (n < 2) return 0.0;
    Eigen::EigenSolver<Eigen::MatrixXd> es(p.dense(), /*computeEigenvectors=*/false);
    if (es.info() != Eigen::Success) throw std::runtime_error("lambda2: eigensolver failed");
    std::vector<double> moduli;
    moduli.reserve(n);
    for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) moduli.push_back(std::abs(es.eigenvalues()[i]));
    std::sort(moduli.begin(), moduli.end(), std::greater<>());
    return std::min(1.0, moduli[1]);
}

double fit_envelope_constant(const ConvergenceReport& report, double d) {
    if (!report.lambda2) throw InputError("envelope: lambda2 missing from report");
    if (report.stationary_residuals.empty()) throw InputError("envelope: no stationary residual series");
    const double rho = d * *report.lambda2;
    double c = 0.0;
    for (std::size_t t = 0; t < std::min<std::size_t>(4, report.stationary_residuals.size()); ++t) {
        const double bound = std::pow(rho, static_cast<double>(t));
        const double r = report.stationary_residuals[t];
        if (bound > 0.0)
            c = std::max(c, r / bound);
        else if (r > 0.0)
            return std::numeric_limits<double>::infinity();
    }
    return c;
}

bool verify_envelope(const ConvergenceReport& report, double d) {
    const double c = fit_envelope_constant(report, d);
    if (!std::isfinite(c)) return false;
    const double rho = d * *report.lambda2;
    for (std::size_t t = 0; t < report.stationary_residuals.size(); ++t) {
        const double bound = c * std::pow(rho, static_cast<double>(t)) * (1.0 + 1e-6);
        if (report.stationary_residuals[t] > bound) return false;
    }
    return true;
}

void annotate_spectrum(ConvergenceReport& report, const TransitionMatrix& p, double d, std::size_t dense_bound) {
    report.lambda2 = lambda2(p, dense_bound);
    report.theoretical_factor = d * *report.lambda2;
    if (!report.stationary_residuals.empty()) report.fitted_c = fit_envelope_constant(report, d);
}

nlohmann::json to_json(const ConvergenceReport& r) {
    nlohmann::json j = {{"iterations", r.iterations},
                        {"converged", r.converged},
                        {"residuals", r.residuals},
                        {"stationary_residuals", r.stationary_residuals}};
    j["lambda2"] = r.lambda2 ? nlohmann::json(*r.lambda2) : nlohmann::json(nullptr);
    j["theoretical_factor"] = r.theoretical_factor ? nlohmann::json(*r.theoretical_factor) : nlohmann::json(nullptr);
    j["fitted_c"] = r.fitted_c && std::isfinite(*r.fitted_c) ? nlohmann::json(*r.fitted_c) : nlohmann::json(nullptr);
    return j;
}

std::string to_csv(const ConvergenceReport& r) {
    const bool stationary = !r.stationary_residuals.empty();
    const auto& series = stationary ? r.stationary_residuals : r.residuals;
    const bool envelope = stationary && r.fitted_c && r.theoretical_factor && std::isfinite(*r.fitted_c);
    std::ostringstream os;
    os << "t,residual,envelope_bound\n";
    char buf[64];
    for (std::size_t i = 0; i < series.size(); ++i) {
        // step changes are indexed from t = 1
        const std::size_t t = stationary ? i : i + 1;
        std::snprintf(buf, sizeof buf, "%zu,%.12e,", t, series[i]);
        os << buf;
        if (envelope) {
            std::snprintf(buf, sizeof buf, "%.12e",
                          *r.fitted_c * std::pow(*r.theoretical_factor, static_cast<double>(t)));
            os << buf;
        }
        os << '\n';
    }
    return os.str();
}

std::pair<TSTVector, ConvergenceReport> topic_specific_textrank(const Eigen::MatrixXd& w,
                                                                const topics::RelevanceVector& u,
                                                                const PowerOptions& opts) {
    return power_iterate(build_transition(adjust_weights(w, u), u), u, opts);
}

}  // namespace trumor::tst
