#include "trumor/bench.hpp"

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <future>
#include <queue>
#include <random>
#include <set>
#include <sstream>

#include "trumor/errors.hpp"

namespace trumor::bench {

namespace {

double unit_draw(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

std::vector<std::set<std::size_t>> generate(const WSConfig& cfg, std::uint64_t seed) {
    const std::size_t n = cfg.n, half = cfg.k / 2;
    std::vector<std::set<std::size_t>> adj(n);
    for (std::size_t u = 0; u < n; ++u)
        for (std::size_t j = 1; j <= half; ++j) {
            const std::size_t v = (u + j) % n;
            adj[u].insert(v);
            adj[v].insert(u);
        }
    std::mt19937_64 rng(seed);
    for (std::size_t j = 1; j <= half; ++j) {
        for (std::size_t u = 0; u < n; ++u) {
            if (unit_draw(rng) >= cfg.p_rewire) continue;
            const std::size_t v = (u + j) % n;
            if (!adj[u].contains(v)) continue;  // already rewired away
            if (adj[u].size() >= n - 1) continue;
            std::size_t w;
            do {
                w = static_cast<std::size_t>(rng() % n);
            } while (w == u || adj[u].contains(w));
            adj[u].erase(v);
            adj[v].erase(u);
            adj[u].insert(w);
            adj[w].insert(u);
        }
    }
    return adj;
}

}  // namespace

centrality::SentenceGraph watts_strogatz(const WSConfig& cfg) {
    if (cfg.k % 2 != 0 || cfg.k == 0) throw InputError("watts_strogatz: k must be even and positive");
    if (cfg.k >= cfg.n) throw InputError("watts_strogatz: k must be smaller than n");
    if (!(cfg.p_rewire >= 0.0 && cfg.p_rewire <= 1.0)) throw InputError("watts_strogatz: p_rewire must lie in [0, 1]");

    for (std::uint64_t attempt = 0; attempt < 10; ++attempt) {
        const auto adj = generate(cfg, cfg.seed + attempt);
        centrality::SentenceGraph g;
        const auto n = static_cast<Eigen::Index>(cfg.n);
        g.weights = Eigen::MatrixXd::Zero(n, n);
        g.sentence_refs.resize(cfg.n);
        for (std::size_t u = 0; u < cfg.n; ++u) {
            g.sentence_refs[u] = u;
            for (std::size_t v : adj[u]) g.weights(static_cast<Eigen::Index>(u), static_cast<Eigen::Index>(v)) = 1.0;
        }
        if (is_connected(g)) return g;
    }
    throw std::runtime_error("watts_strogatz: no connected graph after 10 attempts");
}

std::size_t edge_count(const centrality::SentenceGraph& g) {
    std::size_t c = 0;
    for (Eigen::Index i = 0; i < g.weights.rows(); ++i)
        for (Eigen::Index j = i + 1; j < g.weights.cols(); ++j)
            if (g.weights(i, j) != 0.0) ++c;
    return c;
}

bool is_connected(const centrality::SentenceGraph& g) {
    const Eigen::Index n = g.weights.rows();
    if (n == 0) return true;
    std::vector<bool> seen(static_cast<std::size_t>(n), false);
    std::queue<Eigen::Index> q;
    q.push(0);
    seen[0] = true;
    Eigen::Index reached = 1;
    while (!q.empty()) {
        const auto u = q.front();
        q.pop();
        for (Eigen::Index v = 0; v < n; ++v) {
            if (!seen[static_cast<std::size_t>(v)] && (g.weights(u, v) != 0.0 || g.weights(v, u) != 0.0)) {
                seen[static_cast<std::size_t>(v)] = true;
                ++reached;
                q.push(v);
            }
        }
    }
    return reached == n;
}

topics::RelevanceVector uniform_relevance(std::size_t n) {
    return {std::vector<double>(n, 1.0 / static_cast<double>(n))};
}

SweepResult run_sweep(const centrality::SentenceGraph& graph, const topics::RelevanceVector& u,
                      const std::vector<double>& ds, double tol, int max_iter, std::size_t dense_bound) {
    for (double d : ds)
        if (!(d > 0.0 && d < 1.0)) throw InputError("run_sweep: damping factors must lie in (0, 1)");
    const auto p = tst::build_transition(tst::adjust_weights(graph.weights, u), u);
    std::optional<double> l2;
    if (graph.size() <= dense_bound) l2 = tst::lambda2(p, dense_bound);

    auto run_one = [&](double d) {
        SweepRow row;
        row.d = d;
        tst::PowerOptions opts;
        opts.d = d;
        opts.tol = tol;
        opts.max_iter = max_iter;
        opts.track_stationary = true;
        try {
            row.report = tst::power_iterate(p, u, opts).second;
        } catch (const tst::NonConvergence& e) {
            row.report = e.report();
        }
        row.converged = row.report.converged;
        row.iterations = row.report.iterations;
        if (l2) {
            row.lambda2 = l2;
            row.factor = d * *l2;
            row.report.lambda2 = l2;
            row.report.theoretical_factor = row.factor;
            row.report.fitted_c = tst::fit_envelope_constant(row.report, d);
        }
        return row;
    };

    std::vector<std::future<SweepRow>> jobs;
    for (double d : ds) jobs.push_back(std::async(std::launch::async, run_one, d));
    SweepResult result;
    for (auto& j : jobs) result.rows.push_back(j.get());
    return result;
}

std::string format_sweep_csv(const SweepResult& result) {
    std::ostringstream os;
    os << "d,iterations,converged,lambda2,factor\n";
    char buf[64];
    for (const auto& r : result.rows) {
        std::snprintf(buf, sizeof buf, "%.6f", r.d);
        os << buf << ',';
        if (r.converged) os << r.iterations;
        os << ',' << (r.converged ? "true" : "false") << ',';
        if (r.lambda2) {
            std::snprintf(buf, sizeof buf, "%.6f", *r.lambda2);
            os << buf;
        }
        os << ',';
        if (r.factor) {
            std::snprintf(buf, sizeof buf, "%.6f", *r.factor);
            os << buf;
        }
        os << '\n';
    }
    return os.str();
}

SweepResult parse_sweep_csv(const std::string& csv) {
    std::istringstream in(csv);
    std::string line;
    if (!std::getline(in, line) || line != "d,iterations,converged,lambda2,factor")
        throw InputError("sweep csv: unexpected header");
    SweepResult result;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::vector<std::string> f;
        std::stringstream ls(line);
        std::string cell;
        while (std::getline(ls, cell, ',')) f.push_back(cell);
        if (!line.empty() && line.back() == ',') f.emplace_back();
        if (f.size() != 5) throw InputError("sweep csv: expected 5 fields in '" + line + "'");
        SweepRow r;
        r.d = std::stod(f[0]);
        r.converged = f[2] == "true";
        r.iterations = f[1].empty() ? 0 : std::stoi(f[1]);
        if (!f[3].empty()) r.lambda2 = std::stod(f[3]);
        if (!f[4].empty()) r.factor = std::stod(f[4]);
        result.rows.push_back(std::move(r));
    }
    return result;
}

std::vector<std::string> emit_csv(const SweepResult& result, const std::string& dir) {
    if (result.rows.empty()) throw InputError("emit_csv: empty sweep result");
    namespace fs = std::filesystem;
    std::error_code ec;
    fs::create_directories(dir, ec);
    std::vector<std::string> written;
    auto write = [&](const fs::path& path, const std::string& body) {
        std::ofstream out(path, std::ios::binary);
        if (!out) throw std::runtime_error("cannot write " + path.string());
        out << body;
        if (!out) throw std::runtime_error("failed writing " + path.string());
        written.push_back(path.string());
    };
    write(fs::path(dir) / "sweep.csv", format_sweep_csv(result));
    char name[64];
    for (const auto& r : result.rows) {
        std::snprintf(name, sizeof name, "residuals_d%.2f.csv", r.d);
        write(fs::path(dir) / name, tst::to_csv(r.report));
    }
    return written;
}

}  // namespace trumor::bench
