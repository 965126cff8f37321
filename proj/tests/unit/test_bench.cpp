#include <cmath>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include "doctest.h"
#include "support/oracles.hpp"
#include "trumor/bench.hpp"

using namespace trumor::bench;

namespace {

std::set<std::pair<int, int>> edges(const trumor::centrality::SentenceGraph& g) {
    std::set<std::pair<int, int>> out;
    for (Eigen::Index i = 0; i < g.weights.rows(); ++i)
        for (Eigen::Index j = i + 1; j < g.weights.cols(); ++j)
            if (g.weights(i, j) != 0.0) out.emplace(static_cast<int>(i), static_cast<int>(j));
    return out;
}

const SweepResult& ws_sweep() {
    static const SweepResult r = [] {
        const auto g = watts_strogatz({});
        return run_sweep(g, uniform_relevance(g.size()), {0.6, 0.7, 0.8, 0.85, 0.9, 0.95});
    }();
    return r;
}

}  // namespace

TEST_CASE("p = 0 gives the exact ring lattice") {
    const auto g = watts_strogatz({20, 4, 0.0, 1});
    for (Eigen::Index i = 0; i < 20; ++i) {
        CHECK(g.weights.row(i).sum() == 4.0);
        CHECK(g.weights(i, (i + 1) % 20) == 1.0);
        CHECK(g.weights(i, (i + 2) % 20) == 1.0);
        CHECK(g.weights(i, i) == 0.0);
    }
}

TEST_CASE("rewiring preserves the edge count and symmetry") {
    for (std::uint64_t seed : {1, 2, 3, 42}) {
        const auto g = watts_strogatz({500, 4, 0.1, seed});
        CHECK(edge_count(g) == 1000);
        CHECK(g.weights.isApprox(g.weights.transpose()));
        CHECK(g.weights.diagonal().isZero());
        CHECK(is_connected(g));
        CHECK(((g.weights.array() == 0.0) || (g.weights.array() == 1.0)).all());
    }
    CHECK(edge_count(watts_strogatz({100, 6, 0.5, 7})) == 300);
}

TEST_CASE("generation is deterministic per seed") {
    CHECK(edges(watts_strogatz({200, 4, 0.2, 9})) == edges(watts_strogatz({200, 4, 0.2, 9})));
    CHECK(edges(watts_strogatz({200, 4, 0.2, 9})) != edges(watts_strogatz({200, 4, 0.2, 10})));
}

TEST_CASE("invalid generator settings") {
    CHECK_THROWS(watts_strogatz({10, 3, 0.1, 1}));
    CHECK_THROWS(watts_strogatz({4, 4, 0.1, 1}));
    CHECK_THROWS(watts_strogatz({10, 4, 1.5, 1}));
}

TEST_CASE("sweep reports lambda2 against an independent eigensolve") {
    const auto& r = ws_sweep();
    REQUIRE(r.rows.size() == 6);
    const double ref = oracle::lambda2_symmetric(watts_strogatz({}).weights);
    for (const auto& row : r.rows) {
        REQUIRE(row.lambda2.has_value());
        CHECK(std::abs(*row.lambda2 - ref) < 1e-6);
        CHECK(*row.factor == doctest::Approx(row.d * ref));
    }
}

TEST_CASE("residuals decay no slower than the spectral rate") {
    for (const auto& row : ws_sweep().rows) {
        REQUIRE(row.converged);
        const auto& res = row.report.residuals;
        // eventually monotone after an early transient
        for (std::size_t t = 4; t < res.size(); ++t) CHECK(res[t] <= res[t - 1] * (1 + 1e-12));
        // least-squares slope of log residuals over the second half
        const std::size_t from = res.size() / 2;
        double sx = 0, sy = 0, sxx = 0, sxy = 0;
        const double m = static_cast<double>(res.size() - from);
        for (std::size_t t = from; t < res.size(); ++t) {
            const double x = static_cast<double>(t), y = std::log(res[t]);
            sx += x, sy += y, sxx += x * x, sxy += x * y;
        }
        const double slope = (m * sxy - sx * sy) / (m * sxx - sx * sx);
        CHECK(slope <= std::log(*row.factor) + 0.05);
    }
}

TEST_CASE("non-convergence is recorded, not thrown") {
    const auto g = watts_strogatz({100, 4, 0.1, 1});
    const auto r = run_sweep(g, uniform_relevance(100), {0.6, 0.95}, 1e-6, 20);
    CHECK(r.rows[0].converged);
    CHECK_FALSE(r.rows[1].converged);
    CHECK(r.rows[1].report.residuals.size() == 20);
    const auto csv = format_sweep_csv(r);
    CHECK(csv.find("\n0.950000,,false,") != std::string::npos);
}

TEST_CASE("sweep CSV format and round trip") {
    SweepResult r;
    r.rows.push_back({0.6, 14, true, 0.986254, 0.5917524, {}});
    r.rows.push_back({0.85, 32, true, 0.986254, 0.8383159, {}});
    r.rows.push_back({0.95, 0, false, std::nullopt, std::nullopt, {}});
    const auto csv = format_sweep_csv(r);
    CHECK(csv ==
          "d,iterations,converged,lambda2,factor\n"
          "0.600000,14,true,0.986254,0.591752\n"
          "0.850000,32,true,0.986254,0.838316\n"
          "0.950000,,false,,\n");
    const auto back = parse_sweep_csv(csv);
    REQUIRE(back.rows.size() == 3);
    CHECK(format_sweep_csv(back) == csv);
    CHECK(back.rows[0].iterations == 14);
    CHECK_FALSE(back.rows[2].converged);
    CHECK_FALSE(back.rows[2].lambda2.has_value());
}

TEST_CASE("emit_csv writes the sweep and residual files") {
    const auto dir = std::filesystem::temp_directory_path() / "trumor_bench_test";
    std::filesystem::remove_all(dir);
    const auto g = watts_strogatz({60, 4, 0.1, 3});
    const auto r = run_sweep(g, uniform_relevance(60), {0.6, 0.85, 0.95});
    const auto paths = emit_csv(r, dir.string());
    CHECK(paths.size() == 4);
    std::ifstream in(dir / "sweep.csv");
    std::stringstream ss;
    ss << in.rdbuf();
    const std::string text = ss.str();
    CHECK(std::count(text.begin(), text.end(), '\n') == 4);
    CHECK(std::filesystem::exists(dir / "residuals_d0.85.csv"));
    std::filesystem::remove_all(dir);
}
