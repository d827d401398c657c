#pragma once

#include <cstdio>
#include <cstdlib>
#include <string>

#include <json.hpp>

#include <netspread/graph.hpp>
#include <netspread/rank.hpp>
#include <netspread/spread.hpp>
#include <netspread/states.hpp>

namespace netspread {

namespace detail {

/// Rounds to the given number of significant digits so serialized values have
/// a pinned textual width.
inline double round_sig(double x, int digits) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.*g", digits, x);
    return std::strtod(buf, nullptr);
}

inline double round_places(double x, int places) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.*f", places, x);
    return std::strtod(buf, nullptr);
}

}  // namespace detail

inline nlohmann::json graph_to_json(const Graph& g) {
    nlohmann::json edges = nlohmann::json::array();
    for (const auto& [i, j] : g.edges()) edges.push_back({i, j});
    return {{"n", g.node_count()}, {"edges", std::move(edges)}};
}

inline Graph graph_from_json(const nlohmann::json& j) {
    Graph g(j.at("n").get<std::size_t>());
    for (const auto& e : j.at("edges"))
        g.add_edge(e.at(0).get<NodeId>(), e.at(1).get<NodeId>());
    return g;
}

/// 12 significant digits per score.
inline nlohmann::json rank_to_json(const RankVector& r) {
    nlohmann::json scores = nlohmann::json::array();
    for (double s : r.scores) scores.push_back(detail::round_sig(s, 12));
    nlohmann::json pers;
    if (r.personalization) {
        pers = nlohmann::json::array();
        for (double w : *r.personalization) pers.push_back(detail::round_sig(w, 12));
    }
    return {{"d", r.damping}, {"scores", std::move(scores)}, {"personalization", std::move(pers)}};
}

/// Per-state breakdown of one node: member sets, binary labels, and the score
/// mass / probability columns at 6 decimals.
inline nlohmann::json state_table_to_json(const NodeStateTable& t) {
    nlohmann::json states = nlohmann::json::array();
    const std::size_t deg = t.neighbors_desc.size();
    for (std::size_t k = 0; k < t.state_count(); ++k) {
        nlohmann::json members = nlohmann::json::array();
        std::string binary(deg, '0');
        for (std::size_t b = deg; b-- > 0;) {
            if ((k >> b) & 1u) {
                binary[deg - 1 - b] = '1';
                members.push_back(t.neighbors_desc[deg - 1 - b]);
            }
        }
        states.push_back({{"k", k},
                          {"members", std::move(members)},
                          {"binary", std::move(binary)},
                          {"pr", detail::round_places(t.state_pr[k], 6)},
                          {"prob", detail::round_places(t.state_prob[k], 6)}});
    }
    return {{"node", t.node},
            {"neighbors", t.neighbors_desc},
            {"states", std::move(states)},
            {"max_state_pr", detail::round_places(t.max_state_pr, 6)}};
}

inline nlohmann::json spread_result_to_json(const SpreadResult& r) {
    return {{"source", r.query.source},
            {"n_page", r.query.n_page},
            {"probability", r.probability},
            {"elapsed_s", r.elapsed_s},
            {"expansions", r.expansions}};
}

}  // namespace netspread
