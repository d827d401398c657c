#pragma once

#include <cstdio>
#include <cstdlib>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include <netspread/graph.hpp>
#include <netspread/rank.hpp>
#include <netspread/spread.hpp>
#include <netspread/states.hpp>

namespace netspread {

/// One scoring scenario of an experiment: either plain scores or scores
/// personalized toward some preference vector.
struct CaseDefinition {
    std::string label;
    std::optional<std::vector<double>> preference;  ///< nullopt: plain pagerank
};

struct CaseResult {
    CaseDefinition def;
    RankVector ranks;
    std::vector<double> max_state_score;  ///< per node
    SpreadMatrix matrix;                  ///< empty unless spread was requested
};

/// Assembled experiment output: rank tables, spread matrices, deltas against
/// the first case, and max-state rankings. Rendering is deterministic, so
/// identical inputs give byte-identical documents.
struct ExperimentReport {
    std::vector<std::pair<std::string, std::string>> config;  ///< echoed key/values
    Graph graph;
    std::vector<CaseResult> cases;
    std::vector<NodeId> sources;       ///< matrix rows to render
    std::vector<std::size_t> n_pages;  ///< matrix columns to render
    bool include_spread = false;
};

/// Node with the most neighbors, smallest label winning ties.
inline NodeId argmax_degree_node(const Graph& g) {
    if (g.node_count() == 0) throw std::invalid_argument("argmax_degree_node: empty graph");
    NodeId best = 0;
    for (NodeId i = 1; i < g.node_count(); ++i)
        if (g.degree(i) > g.degree(best)) best = i;
    return best;
}

/// Node with the smallest score, smallest label winning ties.
inline NodeId argmin_score_node(const RankVector& ranks) {
    if (ranks.scores.empty()) throw std::invalid_argument("argmin_score_node: empty rank vector");
    NodeId best = 0;
    for (NodeId i = 1; i < ranks.scores.size(); ++i)
        if (ranks.scores[i] < ranks.scores[best]) best = i;
    return best;
}

/// Descending competition ranking: ties share the best rank, the next value
/// skips past them (1, 2, 3, 4, 4, 6, ...).
inline std::vector<std::size_t> competition_ranks(std::span<const double> values) {
    std::vector<std::size_t> ranks(values.size());
    for (std::size_t i = 0; i < values.size(); ++i) {
        std::size_t above = 0;
        for (std::size_t j = 0; j < values.size(); ++j)
            if (values[j] > values[i]) ++above;
        ranks[i] = above + 1;
    }
    return ranks;
}

/// Builds the full experiment: per case, score the graph, build state tables,
/// and (optionally) run the requested spread cells. Empty `sources` or
/// `n_pages` means all of them.
inline ExperimentReport run_experiment(const Graph& g, std::span<const CaseDefinition> defs,
                                       const RankConfig& cfg, bool include_spread,
                                       std::vector<NodeId> sources = {},
                                       std::vector<std::size_t> n_pages = {},
                                       std::size_t jobs = 1) {
    ExperimentReport rep;
    rep.graph = g;
    rep.include_spread = include_spread;
    if (sources.empty())
        for (NodeId i = 0; i < g.node_count(); ++i) sources.push_back(i);
    if (n_pages.empty())
        for (std::size_t p = 1; p <= g.node_count(); ++p) n_pages.push_back(p);
    rep.sources = std::move(sources);
    rep.n_pages = std::move(n_pages);

    std::vector<SpreadQuery> queries;
    for (NodeId s : rep.sources)
        for (std::size_t p : rep.n_pages) queries.push_back({s, p});

    for (const CaseDefinition& def : defs) {
        CaseResult cr;
        cr.def = def;
        cr.ranks = def.preference ? personalized_pagerank(g, *def.preference, cfg)
                                  : pagerank(g, cfg);
        for (NodeId i = 0; i < g.node_count(); ++i)
            cr.max_state_score.push_back(max_state_pagerank(i, g, cr.ranks));
        if (include_spread) {
            const auto tables = build_state_tables(g, cr.ranks);
            cr.matrix = spread_cells(g, tables, queries, jobs);
        }
        rep.cases.push_back(std::move(cr));
    }
    return rep;
}

namespace detail {

inline std::string fixed(double x, int places) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.*f", places, x);
    return buf;
}

inline std::string join_desc_neighbors(const Graph& g, NodeId i) {
    std::string s;
    const auto& asc = g.neighbors(i);
    for (auto it = asc.rbegin(); it != asc.rend(); ++it) {
        if (!s.empty()) s += ' ';
        s += std::to_string(*it);
    }
    return s;
}

}  // namespace detail

/// CSV rendering. Rank values at 6 decimals, spread and delta cells at 4;
/// deltas are differences of the unrounded cells.
inline std::string render_csv(const ExperimentReport& rep) {
    std::string out;
    for (const auto& [k, v] : rep.config) out += "# " + k + "=" + v + "\n";

    const Graph& g = rep.graph;
    for (const CaseResult& cr : rep.cases) {
        out += "section,rank," + cr.def.label + "\n";
        out += "node,deg,neighbors,states,score,max_state_score\n";
        for (NodeId i = 0; i < g.node_count(); ++i) {
            out += std::to_string(i) + "," + std::to_string(g.degree(i)) + "," +
                   detail::join_desc_neighbors(g, i) + "," +
                   std::to_string(std::uint64_t(1) << g.degree(i)) + "," +
                   detail::fixed(cr.ranks.scores[i], 6) + "," +
                   detail::fixed(cr.max_state_score[i], 6) + "\n";
        }
    }

    if (rep.include_spread) {
        for (const CaseResult& cr : rep.cases) {
            out += "section,spread," + cr.def.label + "\n";
            out += "node";
            for (std::size_t p : rep.n_pages) out += "," + std::to_string(p);
            out += "\n";
            for (NodeId s : rep.sources) {
                out += std::to_string(s);
                for (std::size_t p : rep.n_pages) out += "," + detail::fixed(cr.matrix.at(s, p), 4);
                out += "\n";
            }
        }
        for (std::size_t c = 1; c < rep.cases.size(); ++c) {
            const CaseResult& base = rep.cases[0];
            const CaseResult& cr = rep.cases[c];
            out += "section,delta," + cr.def.label + "-" + base.def.label + "\n";
            out += "node";
            for (std::size_t p : rep.n_pages) out += "," + std::to_string(p);
            out += "\n";
            for (NodeId s : rep.sources) {
                out += std::to_string(s);
                for (std::size_t p : rep.n_pages)
                    out += "," + detail::fixed(cr.matrix.at(s, p) - base.matrix.at(s, p), 4);
                out += "\n";
            }
        }
    }

    // Max-state ranking, all cases side by side.
    out += "section,ranking,max_state_score\n";
    out += "node";
    for (const CaseResult& cr : rep.cases)
        out += "," + cr.def.label + "_value," + cr.def.label + "_rank";
    out += "\n";
    std::vector<std::vector<std::size_t>> ranks;
    for (const CaseResult& cr : rep.cases) ranks.push_back(competition_ranks(cr.max_state_score));
    for (NodeId i = 0; i < g.node_count(); ++i) {
        out += std::to_string(i);
        for (std::size_t c = 0; c < rep.cases.size(); ++c)
            out += "," + detail::fixed(rep.cases[c].max_state_score[i], 6) + "," +
                   std::to_string(ranks[c][i]);
        out += "\n";
    }

    // Per personalized case: how the max-state score and its rank moved.
    for (std::size_t c = 1; c < rep.cases.size(); ++c) {
        const CaseResult& base = rep.cases[0];
        const CaseResult& cr = rep.cases[c];
        out += "section,rank_change," + cr.def.label + "-" + base.def.label + "\n";
        out += "node,base_value,value,delta,rank_change\n";
        for (NodeId i = 0; i < g.node_count(); ++i) {
            const double delta = cr.max_state_score[i] - base.max_state_score[i];
            out += std::to_string(i) + "," + detail::fixed(base.max_state_score[i], 6) + "," +
                   detail::fixed(cr.max_state_score[i], 6) + "," + detail::fixed(delta, 6) + "," +
                   std::to_string(ranks[0][i]) + "->" + std::to_string(ranks[c][i]) + "\n";
        }
    }
    return out;
}

/// JSON rendering of the same document, values rounded like the CSV.
inline nlohmann::ordered_json render_json(const ExperimentReport& rep) {
    using nlohmann::ordered_json;
    const Graph& g = rep.graph;
    ordered_json doc;
    ordered_json config = ordered_json::object();
    for (const auto& [k, v] : rep.config) config[k] = v;
    doc["config"] = std::move(config);

    auto fixed_num = [](double x, int places) {
        return std::strtod(detail::fixed(x, places).c_str(), nullptr);
    };

    std::vector<std::vector<std::size_t>> ranks;
    for (const CaseResult& cr : rep.cases) ranks.push_back(competition_ranks(cr.max_state_score));

    ordered_json cases = ordered_json::array();
    for (std::size_t c = 0; c < rep.cases.size(); ++c) {
        const CaseResult& cr = rep.cases[c];
        ordered_json jc;
        jc["label"] = cr.def.label;
        jc["personalized"] = cr.def.preference.has_value();
        ordered_json nodes = ordered_json::array();
        for (NodeId i = 0; i < g.node_count(); ++i) {
            ordered_json row;
            row["node"] = i;
            row["deg"] = g.degree(i);
            row["neighbors"] = neighbors_desc(g, i);
            row["states"] = std::uint64_t(1) << g.degree(i);
            row["score"] = fixed_num(cr.ranks.scores[i], 6);
            row["max_state_score"] = fixed_num(cr.max_state_score[i], 6);
            row["rank"] = ranks[c][i];
            if (c > 0) {
                row["delta"] = fixed_num(cr.max_state_score[i] - rep.cases[0].max_state_score[i], 6);
                row["rank_change"] =
                    std::to_string(ranks[0][i]) + "->" + std::to_string(ranks[c][i]);
            }
            nodes.push_back(std::move(row));
        }
        jc["nodes"] = std::move(nodes);
        if (rep.include_spread) {
            ordered_json matrix = ordered_json::array();
            ordered_json deltas = ordered_json::array();
            for (NodeId s : rep.sources) {
                ordered_json row = ordered_json::array();
                ordered_json drow = ordered_json::array();
                for (std::size_t p : rep.n_pages) {
                    row.push_back(fixed_num(cr.matrix.at(s, p), 4));
                    if (c > 0)
                        drow.push_back(fixed_num(cr.matrix.at(s, p) - rep.cases[0].matrix.at(s, p), 4));
                }
                matrix.push_back(std::move(row));
                if (c > 0) deltas.push_back(std::move(drow));
            }
            jc["spread"] = std::move(matrix);
            if (c > 0) jc["spread_delta"] = std::move(deltas);
        }
        cases.push_back(std::move(jc));
    }
    doc["sources"] = rep.sources;
    doc["n_pages"] = rep.n_pages;
    doc["cases"] = std::move(cases);
    return doc;
}

}  // namespace netspread
