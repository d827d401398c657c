#pragma once

#include <cassert>
#include <cmath>
#include <cstddef>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include <netspread/graph.hpp>

namespace netspread {

struct RankConfig {
    double damping = 0.85;
    double tolerance = 1e-12;  ///< L1 change per sweep below which iteration stops
    std::size_t max_iterations = 10000;
};

/// Per-node importance scores; non-negative, summing to 1.
struct RankVector {
    std::vector<double> scores;
    double damping = 0.85;
    std::optional<std::vector<double>> personalization;  ///< normalized, or nullopt for uniform
    std::size_t iterations_used = 0;
    double residual = 0.0;
};

class NoConvergenceError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

namespace detail {

inline void check_rank_config(const RankConfig& cfg) {
    if (!(cfg.damping > 0.0 && cfg.damping < 1.0))
        throw std::invalid_argument("rank: damping must lie in (0, 1)");
    if (!(cfg.tolerance > 0.0))
        throw std::invalid_argument("rank: tolerance must be positive");
}

inline std::vector<double> normalized_preference(std::size_t n, std::span<const double> weights) {
    if (weights.size() != n)
        throw std::invalid_argument("rank: preference vector must have one weight per node");
    double sum = 0.0;
    for (double w : weights) {
        if (w < 0.0) throw std::invalid_argument("rank: negative preference weight");
        sum += w;
    }
    if (sum <= 0.0) throw std::invalid_argument("rank: preference weights sum to zero");
    std::vector<double> r(weights.begin(), weights.end());
    for (double& w : r) w /= sum;
    return r;
}

/// Power iteration for the damped fixed point
///   score(u) = (1 - d) * r(u) + d * sum_{v adjacent u} score(v) / deg(v),
/// with the mass of degree-0 nodes redistributed uniformly each sweep.
inline RankVector power_iterate(const Graph& g, std::vector<double> preference,
                                const RankConfig& cfg, bool personalized) {
    const std::size_t n = g.node_count();
    RankVector out;
    out.damping = cfg.damping;
    if (personalized) out.personalization = preference;

    std::vector<double> pr(n, 1.0 / double(n));
    std::vector<double> next(n, 0.0);
    std::vector<double> contrib(n, 0.0);
    const double d = cfg.damping;

    for (std::size_t it = 1; it <= cfg.max_iterations; ++it) {
        double dangling = 0.0;
        for (NodeId v = 0; v < n; ++v) {
            const auto deg = g.degree(v);
            if (deg == 0)
                dangling += pr[v];
            else
                contrib[v] = pr[v] / double(deg);
        }
        const double spill = d * dangling / double(n);
        double residual = 0.0;
        for (NodeId u = 0; u < n; ++u) {
            double acc = 0.0;
            for (NodeId v : g.neighbors(u)) acc += contrib[v];
            next[u] = (1.0 - d) * preference[u] + d * acc + spill;
            residual += std::abs(next[u] - pr[u]);
        }
        pr.swap(next);
        out.iterations_used = it;
        out.residual = residual;
        if (residual < cfg.tolerance) {
            out.scores = std::move(pr);
            return out;
        }
    }
    throw NoConvergenceError("rank: no convergence after " + std::to_string(cfg.max_iterations) +
                             " iterations (residual " + std::to_string(out.residual) + ")");
}

}  // namespace detail

inline RankVector pagerank(const Graph& g, const RankConfig& cfg = {}) {
    if (g.node_count() == 0) throw std::invalid_argument("pagerank: empty graph");
    detail::check_rank_config(cfg);
    std::vector<double> uniform(g.node_count(), 1.0 / double(g.node_count()));
    return detail::power_iterate(g, std::move(uniform), cfg, /*personalized=*/false);
}

inline RankVector personalized_pagerank(const Graph& g, std::span<const double> preference,
                                        const RankConfig& cfg = {}) {
    if (g.node_count() == 0) throw std::invalid_argument("pagerank: empty graph");
    detail::check_rank_config(cfg);
    auto r = detail::normalized_preference(g.node_count(), preference);
    return detail::power_iterate(g, std::move(r), cfg, /*personalized=*/true);
}

/// Dense direct solve of (I - d M) x = (1 - d) r, where M is the
/// column-stochastic transition matrix (degree-0 columns spread uniformly).
/// Validation oracle for the iterative solvers; O(n^3), so capped at n = 2000.
inline RankVector solve_rank_direct(const Graph& g,
                                    std::optional<std::span<const double>> preference,
                                    double damping = 0.85) {
    const std::size_t n = g.node_count();
    if (n == 0) throw std::invalid_argument("solve_rank_direct: empty graph");
    if (n > 2000) throw std::invalid_argument("solve_rank_direct: graph too large for dense solve");
    if (!(damping > 0.0 && damping < 1.0))
        throw std::invalid_argument("rank: damping must lie in (0, 1)");

    std::vector<double> r;
    if (preference)
        r = detail::normalized_preference(n, *preference);
    else
        r.assign(n, 1.0 / double(n));

    // A = I - d M, column-major assembly into a row-major dense matrix.
    std::vector<double> a(n * n, 0.0);
    for (std::size_t i = 0; i < n; ++i) a[i * n + i] = 1.0;
    for (NodeId v = 0; v < n; ++v) {
        const auto deg = g.degree(v);
        if (deg == 0) {
            for (std::size_t u = 0; u < n; ++u) a[u * n + v] -= damping / double(n);
        } else {
            for (NodeId u : g.neighbors(v)) a[u * n + v] -= damping / double(deg);
        }
    }
    std::vector<double> x(n);
    for (std::size_t i = 0; i < n; ++i) x[i] = (1.0 - damping) * r[i];

    // Gaussian elimination with partial pivoting.
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t pivot = col;
        for (std::size_t row = col + 1; row < n; ++row)
            if (std::abs(a[row * n + col]) > std::abs(a[pivot * n + col])) pivot = row;
        if (std::abs(a[pivot * n + col]) < 1e-300)
            throw std::runtime_error("solve_rank_direct: singular system");
        if (pivot != col) {
            for (std::size_t c = col; c < n; ++c) std::swap(a[pivot * n + c], a[col * n + c]);
            std::swap(x[pivot], x[col]);
        }
        const double inv = 1.0 / a[col * n + col];
        for (std::size_t row = col + 1; row < n; ++row) {
            const double f = a[row * n + col] * inv;
            if (f == 0.0) continue;
            for (std::size_t c = col; c < n; ++c) a[row * n + c] -= f * a[col * n + c];
            x[row] -= f * x[col];
        }
    }
    for (std::size_t row = n; row-- > 0;) {
        double acc = x[row];
        for (std::size_t c = row + 1; c < n; ++c) acc -= a[row * n + c] * x[c];
        x[row] = acc / a[row * n + row];
    }

    RankVector out;
    out.damping = damping;
    if (preference) out.personalization = r;
    // Residual of the fixed-point equation, as a self-check.
    double dangling = 0.0;
    for (NodeId v = 0; v < n; ++v)
        if (g.degree(v) == 0) dangling += x[v];
    double residual = 0.0;
    for (NodeId u = 0; u < n; ++u) {
        double acc = 0.0;
        for (NodeId v : g.neighbors(u))
            acc += x[v] / double(g.degree(v));
        residual += std::abs((1.0 - damping) * r[u] + damping * (acc + dangling / double(n)) - x[u]);
    }
    out.residual = residual;
    out.scores = std::move(x);
    return out;
}

}  // namespace netspread
