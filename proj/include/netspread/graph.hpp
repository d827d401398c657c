#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <istream>
#include <limits>
#include <map>
#include <optional>
#include <ostream>
#include <random>
#include <span>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace netspread {

using NodeId = std::uint32_t;
using Edge = std::pair<NodeId, NodeId>;

/// Undirected simple graph on nodes 0..n-1.
///
/// Neighbor lists are kept sorted ascending and deduplicated; self-loops are
/// rejected. Instances are cheap value types and, once built, safe to share
/// across threads read-only.
class Graph {
public:
    Graph() = default;
    explicit Graph(std::size_t node_count) : adj_(node_count) {}

    std::size_t node_count() const noexcept { return adj_.size(); }
    std::size_t edge_count() const noexcept { return edges_; }

    std::size_t degree(NodeId i) const { return neighbors(i).size(); }

    /// Neighbors of i, sorted ascending.
    const std::vector<NodeId>& neighbors(NodeId i) const {
        check_node(i);
        return adj_[i];
    }

    bool has_edge(NodeId i, NodeId j) const {
        check_node(i);
        check_node(j);
        return std::binary_search(adj_[i].begin(), adj_[i].end(), j);
    }

    /// Inserts the undirected edge {i, j}. Duplicates collapse silently.
    void add_edge(NodeId i, NodeId j) {
        check_node(i);
        check_node(j);
        if (i == j)
            throw std::invalid_argument("Graph: self-loop at node " + std::to_string(i));
        if (has_edge(i, j)) return;
        insert_sorted(adj_[i], j);
        insert_sorted(adj_[j], i);
        ++edges_;
    }

    /// All edges as (i, j) with i < j, lexicographically ordered.
    std::vector<Edge> edges() const {
        std::vector<Edge> out;
        out.reserve(edges_);
        for (NodeId i = 0; i < adj_.size(); ++i)
            for (NodeId j : adj_[i])
                if (i < j) out.emplace_back(i, j);
        return out;
    }

    bool operator==(const Graph& other) const = default;

private:
    void check_node(NodeId i) const {
        if (i >= adj_.size())
            throw std::out_of_range("Graph: node label " + std::to_string(i) +
                                    " out of range [0, " + std::to_string(adj_.size()) + ")");
    }

    static void insert_sorted(std::vector<NodeId>& v, NodeId x) {
        v.insert(std::lower_bound(v.begin(), v.end(), x), x);
    }

    std::vector<std::vector<NodeId>> adj_;
    std::size_t edges_ = 0;
};

inline Graph from_edge_list(std::span<const Edge> edges, std::size_t node_count) {
    Graph g(node_count);
    for (const auto& [i, j] : edges) g.add_edge(i, j);
    return g;
}

inline Graph from_edge_list(std::initializer_list<Edge> edges, std::size_t node_count) {
    return from_edge_list(std::span<const Edge>(edges.begin(), edges.size()), node_count);
}

/// Degree -> node count, with an optional power-law exponent estimate
/// (least-squares slope of log(count) against log(degree), negated).
struct DegreeHistogram {
    std::map<std::size_t, std::size_t> counts;
    std::optional<double> exponent;
};

inline DegreeHistogram degree_histogram(const Graph& g) {
    DegreeHistogram h;
    for (NodeId i = 0; i < g.node_count(); ++i) ++h.counts[g.degree(i)];

    // Fit only over positive degrees; a slope needs at least three points.
    std::vector<std::pair<double, double>> pts;
    for (const auto& [k, c] : h.counts)
        if (k >= 1) pts.emplace_back(std::log(double(k)), std::log(double(c)));
    if (pts.size() >= 3) {
        double sx = 0, sy = 0, sxx = 0, sxy = 0;
        for (const auto& [x, y] : pts) {
            sx += x;
            sy += y;
            sxx += x * x;
            sxy += x * y;
        }
        const double n = double(pts.size());
        const double denom = n * sxx - sx * sx;
        if (denom > 0) h.exponent = -(n * sxy - sx * sy) / denom;
    }
    return h;
}

/// Preferential-attachment generator parameters.
struct BaParams {
    std::size_t n = 0;       ///< final node count
    std::size_t m = 1;       ///< edges attached per new node
    std::size_t m0 = 1;      ///< initial node count, m0 >= m (m0 == m keeps the result connected)
    std::uint64_t seed = 0;  ///< mt19937_64 seed
};

namespace detail {

/// Unbiased uniform draw from [0, bound) via rejection sampling, so that a
/// seed produces the same graph on every platform (std distributions are
/// implementation-defined; raw mt19937_64 output is not).
inline std::uint64_t uniform_index(std::mt19937_64& rng, std::uint64_t bound) {
    const std::uint64_t rem =
        (std::numeric_limits<std::uint64_t>::max() % bound + 1) % bound;  // 2^64 mod bound
    std::uint64_t x = rng();
    while (rem != 0 && x >= std::uint64_t(0) - rem) x = rng();
    return x % bound;
}

}  // namespace detail

/// Grows a graph by preferential attachment: m0 initial isolated nodes, then
/// each new node attaches to m distinct existing nodes chosen with
/// probability proportional to current degree (uniformly while all degrees
/// are still zero), resampling duplicate picks. Deterministic per seed.
/// Produces exactly m * (n - m0) edges.
inline Graph generate_ba(const BaParams& p) {
    if (p.m < 1 || p.m > p.m0 || p.m0 >= p.n)
        throw std::invalid_argument("generate_ba: require 1 <= m <= m0 < n");

    Graph g(p.n);
    std::mt19937_64 rng(p.seed);
    // One pool entry per edge endpoint, so a uniform pick is degree-weighted.
    std::vector<NodeId> pool;
    pool.reserve(2 * p.m * (p.n - p.m0));
    std::vector<NodeId> targets;
    targets.reserve(p.m);

    for (NodeId v = NodeId(p.m0); v < p.n; ++v) {
        targets.clear();
        while (targets.size() < p.m) {
            const NodeId t = pool.empty()
                                 ? NodeId(detail::uniform_index(rng, v))
                                 : pool[detail::uniform_index(rng, pool.size())];
            if (std::find(targets.begin(), targets.end(), t) == targets.end())
                targets.push_back(t);
        }
        for (NodeId t : targets) {
            g.add_edge(v, t);
            pool.push_back(v);
            pool.push_back(t);
        }
    }
    return g;
}

// --- edge-list text format: one "i j" per line, '#' starts a comment ---

inline Graph read_edge_list(std::istream& in, std::optional<std::size_t> node_count = {}) {
    std::vector<Edge> edges;
    std::size_t max_label = 0;
    bool any = false;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        std::istringstream ls(line);
        long long a = 0, b = 0;
        if (!(ls >> a)) continue;  // blank or comment-only line
        std::string trailing;
        if (!(ls >> b) || (ls >> trailing))
            throw std::invalid_argument("edge list: malformed line " + std::to_string(lineno));
        if (a < 0 || b < 0)
            throw std::invalid_argument("edge list: negative label on line " + std::to_string(lineno));
        edges.emplace_back(NodeId(a), NodeId(b));
        max_label = std::max(max_label, std::size_t(std::max(a, b)));
        any = true;
    }
    const std::size_t n = node_count.value_or(any ? max_label + 1 : 0);
    return from_edge_list(edges, n);
}

inline void write_edge_list(std::ostream& out, const Graph& g) {
    out << "# " << g.node_count() << " nodes, " << g.edge_count() << " edges\n";
    for (const auto& [i, j] : g.edges()) out << i << ' ' << j << '\n';
}

inline Graph load_edge_list(const std::string& path, std::optional<std::size_t> node_count = {}) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    return read_edge_list(in, node_count);
}

inline void save_edge_list(const std::string& path, const Graph& g) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open " + path + " for writing");
    write_edge_list(out, g);
    if (!out.flush()) throw std::runtime_error("write failed: " + path);
}

}  // namespace netspread
