#pragma once

#include <atomic>
#include <chrono>
#include <cstddef>
#include <cstdint>
#include <mutex>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include <netspread/graph.hpp>
#include <netspread/states.hpp>

namespace netspread {

/// Ask for the probability that a cascade starting at `source` reaches at
/// least `n_page` nodes, the source included.
struct SpreadQuery {
    NodeId source = 0;
    std::size_t n_page = 1;
};

struct SpreadOptions {
    /// Record the state choices of every contributing configuration. The
    /// trace count grows exponentially, so this is limited to small graphs.
    bool record_traces = false;
    /// Skip subtrees that provably cannot reach the threshold any more. Off
    /// only for testing; the skipped subtrees contribute exactly nothing, so
    /// the result is identical either way.
    bool prune_unreachable = true;
};

inline constexpr std::size_t kMaxTraceNodes = 12;
inline constexpr std::size_t kMaxOracleNodes = 12;

struct SpreadResult {
    SpreadQuery query;
    double probability = 0.0;
    double elapsed_s = 0.0;
    std::uint64_t expansions = 0;  ///< state evaluations performed by the search
    std::optional<std::vector<StateVectorTrace>> traces;
};

/// Mutable bookkeeping of one backtracking search. `propagated` is the
/// insertion-ordered set of reached nodes; `stage` indexes the node whose
/// state is currently being tried; `state_index[i]` is node i's current state
/// counter, with 2^deg(i) acting as the exhausted sentinel; `path_prob[q]` is
/// the product of the state probabilities chosen at positions before q.
struct CascadeFrontier {
    std::vector<NodeId> propagated;
    std::vector<std::uint8_t> reached;
    std::vector<std::uint64_t> state_index;
    std::vector<double> path_prob;
    std::vector<std::size_t> appended;  ///< nodes added by each position's current state
    std::vector<NodeId> pending;        ///< scratch: newly reached nodes of the current state
    std::vector<std::uint32_t> bfs_mark;  ///< scratch for the reachability prune
    std::vector<NodeId> bfs_queue;
    std::size_t stage = 0;
    double accumulated = 0.0;
    double last_delta = 0.0;
};

namespace detail {

inline void check_tables(const Graph& g, std::span<const NodeStateTable> tables) {
    if (tables.size() != g.node_count())
        throw std::invalid_argument("spread: state tables do not cover all nodes");
    for (NodeId i = 0; i < g.node_count(); ++i) {
        if (tables[i].node != i)
            throw std::invalid_argument("spread: state table " + std::to_string(i) +
                                        " is for node " + std::to_string(tables[i].node));
        if (tables[i].state_count() != (std::size_t(1) << g.degree(i)))
            throw std::invalid_argument("spread: state table of node " + std::to_string(i) +
                                        " does not match its degree");
    }
}

inline void check_query(const Graph& g, const SpreadQuery& q) {
    if (q.source >= g.node_count())
        throw std::invalid_argument("spread: unknown source node " + std::to_string(q.source));
    if (q.n_page < 1 || q.n_page > g.node_count())
        throw std::invalid_argument("spread: n_page must lie in [1, node_count]");
}

}  // namespace detail

/// Probability that a cascade from q.source reaches at least q.n_page nodes.
///
/// Exhaustive depth-first search over per-node propagation states: the source
/// tries every state from 1 (it always propagates something), every node it
/// reaches tries every state from 0 (it may stop the cascade), and each
/// state's newly reached nodes join the frontier in descending label order.
/// A branch's probability is the product of the chosen states' probabilities;
/// as soon as the reached count meets the threshold the branch's running
/// product joins the total and the branch is not expanded further (the states
/// of untried nodes sum to 1, so deeper expansion would add nothing).
inline SpreadResult spread_probability(const Graph& g, std::span<const NodeStateTable> tables,
                                       const SpreadQuery& q, const SpreadOptions& opt = {}) {
    const auto t0 = std::chrono::steady_clock::now();
    detail::check_query(g, q);
    detail::check_tables(g, tables);
    if (opt.record_traces && g.node_count() > kMaxTraceNodes)
        throw std::invalid_argument("spread: trace recording limited to graphs of at most " +
                                    std::to_string(kMaxTraceNodes) + " nodes");

    SpreadResult res;
    res.query = q;
    if (opt.record_traces) res.traces.emplace();

    const std::size_t n = g.node_count();
    if (q.n_page <= 1) {
        // The source itself already satisfies the threshold.
        res.probability = 1.0;
        res.elapsed_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        return res;
    }

    CascadeFrontier f;
    f.reached.assign(n, 0);
    f.state_index.assign(n, 0);
    f.path_prob.assign(n + 1, 0.0);
    f.appended.assign(n, 0);
    f.propagated.reserve(n);
    f.pending.reserve(n);
    f.bfs_mark.assign(n, 0);
    f.bfs_queue.reserve(n);
    std::uint32_t bfs_generation = 0;

    f.propagated.push_back(q.source);
    f.reached[q.source] = 1;
    f.state_index[q.source] = 1;  // the source never sits on state 0
    f.path_prob[0] = 1.0;

    // True while the nodes reached so far plus everything still reachable
    // from the not-yet-processed frontier can meet the threshold. Nodes whose
    // state is already fixed cannot reach out again, so they block traversal;
    // anything that could still join lies behind propagated[pos..].
    auto can_still_reach = [&](std::size_t pos) -> bool {
        std::size_t have = f.propagated.size();
        if (have >= q.n_page) return true;
        ++bfs_generation;
        f.bfs_queue.assign(f.propagated.begin() + std::ptrdiff_t(pos), f.propagated.end());
        for (std::size_t head = 0; head < f.bfs_queue.size(); ++head) {
            for (NodeId j : g.neighbors(f.bfs_queue[head])) {
                if (f.reached[j] || f.bfs_mark[j] == bfs_generation) continue;
                f.bfs_mark[j] = bfs_generation;
                if (++have >= q.n_page) return true;
                f.bfs_queue.push_back(j);
            }
        }
        return false;
    };

    if (opt.prune_unreachable && !can_still_reach(0)) {
        res.probability = 0.0;
        res.elapsed_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        return res;
    }

    while (true) {
        const NodeId i = f.propagated[f.stage];
        const NodeStateTable& ti = tables[i];

        if (f.state_index[i] == ti.state_count()) {
            // Node exhausted: step back to the previous node, undo the nodes
            // its current state reached, and advance its state.
            if (f.stage == 0) break;
            --f.stage;
            for (std::size_t c = f.appended[f.stage]; c-- > 0;) {
                f.reached[f.propagated.back()] = 0;
                f.propagated.pop_back();
            }
            f.appended[f.stage] = 0;
            ++f.state_index[f.propagated[f.stage]];
            continue;
        }

        const std::uint64_t k = f.state_index[i];
        ++res.expansions;

        // Newly reached nodes: members of state k minus the propagated set,
        // in descending label order like the state digits.
        f.pending.clear();
        const std::size_t deg = ti.neighbors_desc.size();
        for (std::size_t b = deg; b-- > 0;) {
            if (!((k >> b) & 1u)) continue;
            const NodeId j = ti.neighbors_desc[deg - 1 - b];
            if (!f.reached[j]) f.pending.push_back(j);
        }

        if (f.propagated.size() + f.pending.size() >= q.n_page) {
            f.last_delta = f.path_prob[f.stage] * ti.state_prob[k];
            f.accumulated += f.last_delta;
            if (res.traces) {
                StateVectorTrace tr;
                tr.reserve(f.stage + 1);
                for (std::size_t p = 0; p <= f.stage; ++p)
                    tr.push_back({f.state_index[f.propagated[p]], f.propagated[p]});
                res.traces->push_back(std::move(tr));
            }
            ++f.state_index[i];
            continue;
        }

        // Below threshold: absorb this state's probability and move on.
        for (NodeId j : f.pending) {
            f.reached[j] = 1;
            f.propagated.push_back(j);
        }
        f.appended[f.stage] = f.pending.size();
        f.path_prob[f.stage + 1] = f.path_prob[f.stage] * ti.state_prob[k];
        if (f.stage + 1 < f.propagated.size()) {
            // Each forward move starts that node's iteration afresh at state 0
            // (it may have been exhausted under an earlier sibling branch).
            ++f.stage;
            const NodeId entered = f.propagated[f.stage];
            f.state_index[entered] = 0;
            // A subtree that can no longer reach the threshold contributes
            // nothing; mark the node exhausted so the walk backs out of it.
            if (opt.prune_unreachable && !can_still_reach(f.stage))
                f.state_index[entered] = tables[entered].state_count();
        } else {
            // Cascade complete without reaching the threshold; try the next state.
            ++f.state_index[i];
        }
    }

    res.probability = f.accumulated;
    res.elapsed_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return res;
}

namespace detail {

/// Plain recursive enumeration used as the oracle: no shared mutable state,
/// fresh containers at every level, membership by linear scan.
inline double oracle_sum(const Graph& g, std::span<const NodeStateTable> tables,
                         const std::vector<NodeId>& order, std::size_t pos, double prob,
                         std::size_t n_page) {
    if (pos == order.size()) return 0.0;  // cascade stopped short of the threshold
    const NodeId i = order[pos];
    const std::uint64_t count = tables[i].state_count();
    double total = 0.0;
    for (std::uint64_t k = (pos == 0 ? 1 : 0); k < count; ++k) {
        const double pk = prob * tables[i].state_prob[k];
        std::vector<NodeId> fresh;
        for (NodeId j : state_members(i, k, g))
            if (std::find(order.begin(), order.end(), j) == order.end()) fresh.push_back(j);
        if (order.size() + fresh.size() >= n_page) {
            total += pk;
        } else {
            std::vector<NodeId> next = order;
            next.insert(next.end(), fresh.begin(), fresh.end());
            total += oracle_sum(g, tables, next, pos + 1, pk, n_page);
        }
    }
    return total;
}

}  // namespace detail

/// Independent re-computation of spread_probability by direct recursion,
/// for cross-checking the search bookkeeping. Exponential; small graphs only.
inline double oracle_spread(const Graph& g, std::span<const NodeStateTable> tables,
                            const SpreadQuery& q) {
    if (g.node_count() > kMaxOracleNodes)
        throw std::invalid_argument("oracle_spread: limited to graphs of at most " +
                                    std::to_string(kMaxOracleNodes) + " nodes");
    detail::check_query(g, q);
    detail::check_tables(g, tables);
    if (q.n_page <= 1) return 1.0;
    return detail::oracle_sum(g, tables, {q.source}, 0, 1.0, q.n_page);
}

/// All-sources, all-thresholds probability matrix.
struct SpreadMatrix {
    std::size_t node_count = 0;
    std::vector<double> probability;  ///< [source * n + (n_page - 1)]
    std::vector<double> elapsed_s;

    double at(NodeId source, std::size_t n_page) const {
        return probability[source * node_count + (n_page - 1)];
    }
    double elapsed(NodeId source, std::size_t n_page) const {
        return elapsed_s[source * node_count + (n_page - 1)];
    }
};

/// Computes the given (source, n_page) cells. Cells are independent;
/// `jobs` > 1 spreads them over that many threads. The result does not
/// depend on the job count.
inline SpreadMatrix spread_cells(const Graph& g, std::span<const NodeStateTable> tables,
                                 std::span<const SpreadQuery> queries, std::size_t jobs = 1) {
    detail::check_tables(g, tables);
    for (const SpreadQuery& q : queries) detail::check_query(g, q);
    const std::size_t n = g.node_count();
    SpreadMatrix m;
    m.node_count = n;
    m.probability.assign(n * n, 0.0);
    m.elapsed_s.assign(n * n, 0.0);

    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;

    auto worker = [&] {
        try {
            for (std::size_t w = next.fetch_add(1); w < queries.size(); w = next.fetch_add(1)) {
                const SpreadQuery& q = queries[w];
                const SpreadResult r = spread_probability(g, tables, q);
                const std::size_t cell = q.source * n + (q.n_page - 1);
                m.probability[cell] = r.probability;
                m.elapsed_s[cell] = r.elapsed_s;
            }
        } catch (...) {
            const std::lock_guard<std::mutex> lock(failure_mutex);
            if (!failure) failure = std::current_exception();
        }
    };

    if (jobs <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(jobs);
        for (std::size_t t = 0; t < jobs; ++t) pool.emplace_back(worker);
        for (auto& th : pool) th.join();
    }
    if (failure) std::rethrow_exception(failure);
    return m;
}

/// Full matrix: Pr(source, n_page) for every source and every n_page in 1..n.
inline SpreadMatrix spread_table(const Graph& g, std::span<const NodeStateTable> tables,
                                 std::size_t jobs = 1) {
    const std::size_t n = g.node_count();
    std::vector<SpreadQuery> queries;
    queries.reserve(n * n);
    for (NodeId s = 0; s < n; ++s)
        for (std::size_t p = 1; p <= n; ++p) queries.push_back({s, p});
    return spread_cells(g, tables, queries, jobs);
}

}  // namespace netspread
