#pragma once

#include <algorithm>
#include <bit>
#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include <netspread/graph.hpp>
#include <netspread/rank.hpp>

namespace netspread {

/// Hard cap on per-node state-label width: 2^30 states is already ~8 GB of
/// table, anything beyond is a caller bug.
inline constexpr std::size_t kMaxStateBits = 30;

/// Fixed-width binary word, stored most-significant digit first so that
/// bits == {1,0,1} reads as "101".
struct BinaryVector {
    std::vector<std::uint8_t> bits;

    std::size_t size() const noexcept { return bits.size(); }

    std::uint64_t value() const noexcept {
        std::uint64_t v = 0;
        for (std::uint8_t b : bits) v = (v << 1) | b;
        return v;
    }

    std::string to_string() const {
        std::string s;
        s.reserve(bits.size());
        for (std::uint8_t b : bits) s.push_back(b ? '1' : '0');
        return s;
    }

    bool operator==(const BinaryVector&) const = default;
};

/// All 2^m binary vectors of width m, generated by repeated binary addition
/// starting from the zero vector and stopping once every digit is 1.
inline std::vector<BinaryVector> bat_enumerate(std::size_t m) {
    if (m > kMaxStateBits)
        throw std::invalid_argument("bat_enumerate: width " + std::to_string(m) + " exceeds " +
                                    std::to_string(kMaxStateBits));
    std::vector<BinaryVector> out;
    out.reserve(std::size_t(1) << m);
    BinaryVector x{std::vector<std::uint8_t>(m, 0)};
    out.push_back(x);
    std::size_t ones = 0;
    while (ones != m) {
        // Add 1: scan from the last digit, clearing 1s until a 0 flips.
        std::size_t i = m;
        while (x.bits[i - 1] == 1) {
            x.bits[i - 1] = 0;
            --ones;
            --i;
        }
        x.bits[i - 1] = 1;
        ++ones;
        out.push_back(x);
    }
    return out;
}

/// Neighbors of i sorted by descending label, the order state digits refer to.
inline std::vector<NodeId> neighbors_desc(const Graph& g, NodeId i) {
    const auto& asc = g.neighbors(i);
    return std::vector<NodeId>(asc.rbegin(), asc.rend());
}

/// The subset of i's neighbors selected by state k: digit positions are
/// matched against the descending neighbor list, most significant digit to
/// largest label. Returned largest label first.
inline std::vector<NodeId> state_members(NodeId i, std::uint64_t k, const Graph& g) {
    const std::size_t deg = g.degree(i);
    if (deg > kMaxStateBits)
        throw std::invalid_argument("state_members: node degree exceeds state cap");
    if (k >= (std::uint64_t(1) << deg))
        throw std::out_of_range("state_members: state index " + std::to_string(k) +
                                " out of range for degree " + std::to_string(deg));
    const auto nd = neighbors_desc(g, i);
    std::vector<NodeId> members;
    for (std::size_t b = deg; b-- > 0;)
        if ((k >> b) & 1u) members.push_back(nd[deg - 1 - b]);
    return members;
}

/// Per-node enumeration of propagation states with their score mass and
/// normalized probability.
///
/// state_pr[k] is the summed rank score of the neighbors selected by state k;
/// state 0 (propagate to nobody) carries half the smallest neighbor score.
/// state_prob is state_pr normalized to sum 1. max_state_pr is the mass of
/// the all-neighbors state, state_pr[2^deg - 1].
struct NodeStateTable {
    NodeId node = 0;
    std::vector<NodeId> neighbors_desc;
    std::vector<double> state_pr;
    std::vector<double> state_prob;
    double max_state_pr = 0.0;

    std::size_t state_count() const noexcept { return state_pr.size(); }
};

inline double max_state_pagerank(NodeId i, const Graph& g, const RankVector& ranks) {
    if (ranks.scores.size() != g.node_count())
        throw std::invalid_argument("states: rank vector does not cover the graph");
    if (g.degree(i) == 0)
        throw std::invalid_argument("states: node " + std::to_string(i) + " is isolated");
    double sum = 0.0;
    for (NodeId j : neighbors_desc(g, i)) sum += ranks.scores[j];
    return sum;
}

inline NodeStateTable build_state_table(NodeId i, const Graph& g, const RankVector& ranks) {
    if (ranks.scores.size() != g.node_count())
        throw std::invalid_argument("states: rank vector does not cover the graph");
    const std::size_t deg = g.degree(i);
    if (deg == 0)
        throw std::invalid_argument("states: node " + std::to_string(i) + " is isolated");
    if (deg > kMaxStateBits)
        throw std::invalid_argument("states: node " + std::to_string(i) + " has degree " +
                                    std::to_string(deg) + ", beyond the 2^" +
                                    std::to_string(kMaxStateBits) + " state cap");

    NodeStateTable t;
    t.node = i;
    t.neighbors_desc = neighbors_desc(g, i);

    // bit b of a state index selects neighbors_desc[deg - 1 - b]
    std::vector<double> bit_score(deg);
    double min_score = ranks.scores[t.neighbors_desc.front()];
    for (std::size_t b = 0; b < deg; ++b) {
        bit_score[b] = ranks.scores[t.neighbors_desc[deg - 1 - b]];
        min_score = std::min(min_score, bit_score[b]);
    }

    const std::size_t count = std::size_t(1) << deg;
    t.state_pr.resize(count);
    t.state_pr[0] = 0.5 * min_score;
    for (std::size_t k = 1; k < count; ++k) {
        const std::size_t low = k & (~k + 1);
        const double s = bit_score[std::size_t(std::countr_zero(std::uint64_t(k)))];
        t.state_pr[k] = (k == low) ? s : t.state_pr[k ^ low] + s;
    }
    t.max_state_pr = t.state_pr[count - 1];

    double total = 0.0;
    for (double v : t.state_pr) total += v;
    t.state_prob.resize(count);
    for (std::size_t k = 0; k < count; ++k) t.state_prob[k] = t.state_pr[k] / total;
    return t;
}

/// Tables for every node of the graph, indexed by node label.
inline std::vector<NodeStateTable> build_state_tables(const Graph& g, const RankVector& ranks) {
    std::vector<NodeStateTable> tables;
    tables.reserve(g.node_count());
    for (NodeId i = 0; i < g.node_count(); ++i) tables.push_back(build_state_table(i, g, ranks));
    return tables;
}

/// One step of a recorded cascade: node `node` occurred in state `state_index`.
struct TraceStep {
    std::uint64_t state_index = 0;
    NodeId node = 0;

    bool operator==(const TraceStep&) const = default;
};

/// Per-node state choices of one cascade configuration, in propagation order;
/// the first step's node is the source.
using StateVectorTrace = std::vector<TraceStep>;

/// Renders a trace as "(k/i, k/i, ...)".
inline std::string format_trace(const StateVectorTrace& t) {
    if (t.empty()) throw std::invalid_argument("format_trace: empty trace");
    std::string out = "(";
    for (std::size_t p = 0; p < t.size(); ++p) {
        if (p) out += ", ";
        out += std::to_string(t[p].state_index);
        out += '/';
        out += std::to_string(t[p].node);
    }
    out += ')';
    return out;
}

}  // namespace netspread
