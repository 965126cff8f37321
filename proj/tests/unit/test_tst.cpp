#include <cmath>
#include <numeric>
#include <random>

#include "doctest.h"
#include "support/oracles.hpp"
#include "trumor/bench.hpp"
#include "trumor/errors.hpp"
#include "trumor/tst.hpp"

using namespace trumor::tst;
using trumor::topics::RelevanceVector;

namespace {

RelevanceVector uniform(std::size_t n) { return {std::vector<double>(n, 1.0 / static_cast<double>(n))}; }

Eigen::VectorXd as_eigen(const std::vector<double>& v) {
    return Eigen::Map<const Eigen::VectorXd>(v.data(), static_cast<Eigen::Index>(v.size()));
}

double l1(const Eigen::VectorXd& a, const Eigen::VectorXd& b) { return (a - b).cwiseAbs().sum(); }

TransitionMatrix random_transition(std::size_t n, std::uint64_t seed, const RelevanceVector& u, bool dangling = false) {
    return build_transition(adjust_weights(oracle::random_digraph(n, seed, 0.3, dangling), u), u);
}

}  // namespace

TEST_CASE("adjust_weights examples") {
    Eigen::MatrixXd w = Eigen::MatrixXd::Zero(2, 2);
    w(0, 1) = 1.0;
    CHECK(adjust_weights(w, {{0.5, 0.5}}).w_prime(0, 1) == doctest::Approx(0.5));
    CHECK(adjust_weights(Eigen::MatrixXd::Zero(3, 3), uniform(3)).w_prime.isZero());

    const auto rw = oracle::random_digraph(6, 2);
    CHECK(adjust_weights(rw, uniform(6)).w_prime.isApprox(rw / 6.0, 1e-15));

    const std::vector<double> u = {0.1, 0.2, 0.3, 0.4};
    const auto w4 = oracle::random_digraph(4, 9);
    const auto a = adjust_weights(w4, {u});
    for (int j = 0; j < 4; ++j)
        for (int i = 0; i < 4; ++i) CHECK(a.w_prime(j, i) == doctest::Approx((u[i] + u[j]) / 2 * w4(j, i)));

    CHECK_THROWS_AS(adjust_weights(w4, uniform(3)), trumor::InputError);
    CHECK_THROWS_AS(adjust_weights(w4, {{0.5, 0.5, 0.0, 0.0}}), trumor::InputError);
}

TEST_CASE("build_transition examples") {
    Eigen::MatrixXd w = Eigen::MatrixXd::Zero(2, 2);
    w(0, 1) = w(1, 0) = 2.0;
    const auto p = build_transition(adjust_weights(w, uniform(2)), uniform(2)).dense();
    CHECK(p(0, 0) == 0.0);
    CHECK(p(1, 0) == 1.0);
    CHECK(p(0, 1) == 1.0);

    // vertex 1 has no out-edges
    Eigen::MatrixXd wd = Eigen::MatrixXd::Zero(2, 2);
    wd(0, 1) = 1.0;
    const RelevanceVector u{{0.6, 0.4}};
    const auto pd = build_transition(adjust_weights(wd, u), u).dense();
    CHECK(pd(0, 1) == doctest::Approx(0.6));
    CHECK(pd(1, 1) == doctest::Approx(0.4));
    CHECK(pd(1, 0) == doctest::Approx(1.0));
}

TEST_CASE("build_transition is column stochastic") {
    for (std::uint64_t seed = 1; seed <= 120; ++seed) {
        const std::size_t n = 5 + seed % 46;
        const RelevanceVector u{oracle::random_probability(n, seed + 1000)};
        const auto p = random_transition(n, seed, u, seed % 3 == 0).dense();
        CHECK((p.array() >= 0.0).all());
        for (Eigen::Index j = 0; j < p.cols(); ++j) CHECK(std::abs(p.col(j).sum() - 1.0) <= 1e-9);
    }
}

TEST_CASE("power_iterate trivial cases") {
    const auto one = power_iterate(build_transition({Eigen::MatrixXd::Zero(1, 1)}, uniform(1)), uniform(1));
    CHECK(one.first.scores == std::vector<double>{1.0});
    CHECK(one.second.iterations == 1);

    Eigen::MatrixXd w = Eigen::MatrixXd::Zero(2, 2);
    w(0, 1) = w(1, 0) = 1.0;
    for (double d : {0.1, 0.5, 0.85, 0.99}) {
        const auto r = topic_specific_textrank(w, uniform(2), {d});
        CHECK(r.first.scores[0] == doctest::Approx(0.5));
        CHECK(r.first.scores[1] == doctest::Approx(0.5));
    }
}

TEST_CASE("power_iterate matches the dense eigensolve") {
    // 4-node instance with one dangling vertex
    Eigen::MatrixXd w(4, 4);
    w << 0, 1, 0.5, 0,  //
        0.2, 0, 1, 0,   //
        1, 0.3, 0, 0.4, //
        0, 0, 0, 0;
    const RelevanceVector u{{0.4, 0.3, 0.2, 0.1}};
    const auto p = build_transition(adjust_weights(w, u), u);
    const auto [x, rep] = power_iterate(p, u, 0.85, 1e-10, 500);
    CHECK(rep.converged);
    CHECK(l1(as_eigen(x.scores), oracle::stationary_dense(p.dense(), as_eigen(u.scores), 0.85)) < 1e-6);

    for (std::uint64_t seed = 1; seed <= 15; ++seed) {
        const std::size_t n = 5 + seed * 6;
        const RelevanceVector ur{oracle::random_probability(n, seed + 77)};
        const auto pr = random_transition(n, seed, ur, seed % 2 == 0);
        const auto got = power_iterate(pr, ur).first;
        CHECK(l1(as_eigen(got.scores), oracle::stationary_dense(pr.dense(), as_eigen(ur.scores), 0.85)) < 1e-6);
    }
}

TEST_CASE("stationary properties on random instances") {
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
        const std::size_t n = 10 + seed * 9;
        const RelevanceVector u{oracle::random_probability(n, seed + 500)};
        const auto p = random_transition(n, seed, u, seed % 4 == 0);
        const double d = 0.85;

        PowerOptions o;
        o.start = oracle::random_probability(n, seed + 1, 0.01);
        const auto a = power_iterate(p, u, o).first;
        o.start = oracle::random_probability(n, seed + 2, 0.01);
        const auto b = power_iterate(p, u, o).first;
        const auto xa = as_eigen(a.scores), xb = as_eigen(b.scores);
        CHECK(l1(xa, xb) < 1e-6);
        CHECK(std::abs(xa.sum() - 1.0) < 1e-9);
        CHECK((xa.array() > 0.0).all());
        const Eigen::VectorXd fixed = d * (p.p * xa) + (1 - d) * as_eigen(u.scores);
        CHECK(l1(fixed, xa) < 10 * 1e-6);
    }
}

TEST_CASE("iterates preserve total probability") {
    const RelevanceVector u{oracle::random_probability(30, 4)};
    const auto p = random_transition(30, 4, u, true);
    for (int steps = 1; steps <= 20; ++steps) {
        try {
            const auto r = power_iterate(p, u, 0.85, 1e-300, steps);
            CHECK(std::abs(std::accumulate(r.first.scores.begin(), r.first.scores.end(), 0.0) - 1.0) < 1e-9);
        } catch (const NonConvergence& e) {
            const auto& s = e.last_iterate().scores;
            CHECK(std::abs(std::accumulate(s.begin(), s.end(), 0.0) - 1.0) < 1e-9);
            CHECK(e.report().iterations == steps);
            CHECK_FALSE(e.report().converged);
        }
    }
}

TEST_CASE("scaling raw weights leaves the ranking unchanged") {
    const auto w = oracle::random_digraph(25, 13);
    const RelevanceVector u{oracle::random_probability(25, 14)};
    const auto a = topic_specific_textrank(w, u, {}).first;
    const auto b = topic_specific_textrank(w * 37.5, u, {}).first;
    for (std::size_t i = 0; i < a.scores.size(); ++i) CHECK(b.scores[i] == doctest::Approx(a.scores[i]).epsilon(1e-12));
}

TEST_CASE("iterations are non-decreasing in d") {
    const auto g = trumor::bench::watts_strogatz({200, 4, 0.1, 3});
    const auto u = uniform(200);
    int prev = 0;
    for (double d : {0.6, 0.7, 0.8, 0.85, 0.9, 0.95}) {
        PowerOptions o;
        o.d = d;
        const auto it = topic_specific_textrank(g.weights, u, o).second.iterations;
        CHECK(it >= prev);
        prev = it;
    }
}

TEST_CASE("lambda2 examples") {
    Eigen::MatrixXd w = Eigen::MatrixXd::Zero(2, 2);
    w(0, 1) = w(1, 0) = 1.0;
    CHECK(lambda2(build_transition({w}, uniform(2))) == doctest::Approx(1.0).epsilon(1e-12));

    Eigen::MatrixXd ones = Eigen::MatrixXd::Ones(5, 5);
    CHECK(lambda2(build_transition({ones}, uniform(5))) < 1e-12);

    const auto g = trumor::bench::watts_strogatz({300, 4, 0.1, 42});
    const auto p = build_transition(adjust_weights(g.weights, uniform(300)), uniform(300));
    CHECK(std::abs(lambda2(p) - oracle::lambda2_symmetric(g.weights)) < 1e-6);

    CHECK_THROWS_AS(lambda2(p, 100), trumor::InputError);
    CHECK(lambda2(build_transition({Eigen::MatrixXd::Zero(1, 1)}, uniform(1))) == 0.0);
}

TEST_CASE("envelope on a constructed geometric series") {
    ConvergenceReport r;
    const double d = 0.8;
    r.lambda2 = 0.5 / d;
    for (int t = 0; t < 30; ++t) r.stationary_residuals.push_back(std::pow(0.5, t));
    CHECK(fit_envelope_constant(r, d) == doctest::Approx(1.0));
    CHECK(verify_envelope(r, d));
    r.stationary_residuals[20] *= 2;  // slower than the rate allows
    CHECK_FALSE(verify_envelope(r, d));

    ConvergenceReport missing;
    missing.stationary_residuals = {1.0};
    CHECK_THROWS_AS(verify_envelope(missing, d), trumor::InputError);
}

TEST_CASE("envelope holds on fixtures") {
    // rank-one P converges in one step
    Eigen::MatrixXd ones = Eigen::MatrixXd::Ones(4, 4);
    const RelevanceVector u4{{0.4, 0.3, 0.2, 0.1}};
    const auto p1 = build_transition({ones}, u4);
    PowerOptions o;
    o.track_stationary = true;
    auto [x1, r1] = power_iterate(p1, u4, o);
    annotate_spectrum(r1, p1, o.d);
    CHECK(*r1.lambda2 < 1e-12);
    CHECK(verify_envelope(r1, o.d));

    // 4-node fixture
    Eigen::MatrixXd w(4, 4);
    w << 0, 1, 0.5, 0,  //
        0.2, 0, 1, 0,   //
        1, 0.3, 0, 0.4, //
        0, 0, 0, 0;
    const auto p4 = build_transition(adjust_weights(w, u4), u4);
    auto [x4, r4] = power_iterate(p4, u4, o);
    annotate_spectrum(r4, p4, o.d);
    CHECK(r4.stationary_residuals.size() == static_cast<std::size_t>(r4.iterations) + 1);
    CHECK(r4.stationary_residuals.back() == 0.0);
    CHECK(verify_envelope(r4, o.d));

    // undirected small-world graph
    const auto g = trumor::bench::watts_strogatz({150, 4, 0.1, 8});
    const auto pw = build_transition(adjust_weights(g.weights, uniform(150)), uniform(150));
    auto [xw, rw] = power_iterate(pw, uniform(150), o);
    annotate_spectrum(rw, pw, o.d);
    CHECK(verify_envelope(rw, o.d));
}

TEST_CASE("report serialization") {
    ConvergenceReport r;
    r.iterations = 2;
    r.converged = true;
    r.residuals = {0.5, 0.25};
    CHECK(to_csv(r) == "t,residual,envelope_bound\n1,5.000000000000e-01,\n2,2.500000000000e-01,\n");
    r.stationary_residuals = {1.0, 0.5, 0.0};
    r.lambda2 = 0.5;
    r.theoretical_factor = 0.5;
    r.fitted_c = 1.0;
    const auto csv = to_csv(r);
    CHECK(csv.find("1,5.000000000000e-01,5.000000000000e-01\n") != std::string::npos);
    const auto j = to_json(r);
    CHECK(j["iterations"] == 2);
    CHECK(j["lambda2"] == 0.5);
}
