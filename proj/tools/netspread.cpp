// netspread command-line front end: graph generation, node ranking, cascade
// spread matrices, and a randomized self-check suite.
#include <CLI11.hpp>

#include <netspread/netspread.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace {

using namespace netspread;

struct GraphSource {
    std::string fixture_name;
    std::string path;
    std::size_t n = 0;
    std::size_t m = 1;
    std::size_t m0 = 0;  // 0: default to m
    std::uint64_t seed = 0;
};

void add_graph_source_flags(CLI::App* cmd, GraphSource& src) {
    cmd->add_option("--fixture", src.fixture_name, "built-in network (fig6, fig7)");
    cmd->add_option("--graph", src.path, "edge-list file to load");
    cmd->add_option("--n", src.n, "generated network: node count");
    cmd->add_option("--m", src.m, "generated network: edges per new node");
    cmd->add_option("--m0", src.m0, "generated network: initial node count (default: m)");
    cmd->add_option("--seed", src.seed, "generated network: RNG seed");
}

Graph resolve_graph(const GraphSource& src, std::string& echo) {
    const int picked = (!src.fixture_name.empty()) + (!src.path.empty()) + (src.n > 0);
    if (picked != 1)
        throw std::invalid_argument(
            "choose exactly one graph source: --fixture, --graph, or --n/--m/--seed");
    if (!src.fixture_name.empty()) {
        echo = "fixture:" + src.fixture_name;
        return fixture(src.fixture_name);
    }
    if (!src.path.empty()) {
        echo = "file:" + src.path;
        return load_edge_list(src.path);
    }
    const BaParams params{src.n, src.m, src.m0 == 0 ? src.m : src.m0, src.seed};
    echo = "ba:n=" + std::to_string(params.n) + ",m=" + std::to_string(params.m) +
           ",m0=" + std::to_string(params.m0) + ",seed=" + std::to_string(params.seed);
    return generate_ba(params);
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> parts;
    std::string cur;
    for (char c : s) {
        if (c == sep) {
            parts.push_back(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    parts.push_back(cur);
    return parts;
}

std::size_t parse_count(const std::string& tok, const char* what) {
    std::size_t pos = 0;
    long long v = -1;
    try {
        v = std::stoll(tok, &pos);
    } catch (const std::exception&) {
        pos = 0;
    }
    if (pos != tok.size() || v < 0)
        throw std::invalid_argument(std::string("cannot parse ") + what + ": '" + tok + "'");
    return std::size_t(v);
}

/// "3=1" or "3=0.4,5=0.6" -> per-node weight vector.
std::vector<double> parse_prefer(const std::string& spec, std::size_t n) {
    std::vector<double> w(n, 0.0);
    for (const std::string& item : split(spec, ',')) {
        const auto eq = item.find('=');
        if (eq == std::string::npos)
            throw std::invalid_argument("--prefer expects node=weight[,node=weight...]");
        const std::size_t node = parse_count(item.substr(0, eq), "--prefer node");
        if (node >= n)
            throw std::invalid_argument("--prefer: node " + std::to_string(node) +
                                        " not in the graph");
        w[node] = std::stod(item.substr(eq + 1));
    }
    return w;
}

/// "1..4", "8", or "1,3,8" -> ascending unique thresholds.
std::vector<std::size_t> parse_npage(const std::string& spec, std::size_t n) {
    std::vector<std::size_t> out;
    for (const std::string& item : split(spec, ',')) {
        const auto dots = item.find("..");
        std::size_t lo, hi;
        if (dots == std::string::npos) {
            lo = hi = parse_count(item, "--npage");
        } else {
            lo = parse_count(item.substr(0, dots), "--npage");
            hi = parse_count(item.substr(dots + 2), "--npage");
        }
        if (lo < 1 || hi > n || lo > hi)
            throw std::invalid_argument("--npage: range " + item + " outside [1, " +
                                        std::to_string(n) + "]");
        for (std::size_t p = lo; p <= hi; ++p)
            if (out.empty() || out.back() != p) out.push_back(p);
    }
    return out;
}

std::vector<NodeId> parse_sources(const std::string& spec, std::size_t n) {
    std::vector<NodeId> out;
    if (spec == "all") {
        for (NodeId i = 0; i < n; ++i) out.push_back(i);
        return out;
    }
    for (const std::string& item : split(spec, ',')) {
        const std::size_t s = parse_count(item, "--sources");
        if (s >= n)
            throw std::invalid_argument("--sources: node " + std::to_string(s) +
                                        " not in the graph");
        out.push_back(NodeId(s));
    }
    return out;
}

void write_output(const std::string& out_path, const std::string& text) {
    if (out_path.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream out(out_path);
    if (!out) throw std::runtime_error("cannot open " + out_path + " for writing");
    out << text;
    if (!out.flush()) throw std::runtime_error("write failed: " + out_path);
}

// ---------------------------------------------------------------------------

int cmd_generate(const GraphSource& src, const std::string& out_path) {
    if (src.n == 0) throw std::invalid_argument("generate: --n is required");
    const BaParams params{src.n, src.m, src.m0 == 0 ? src.m : src.m0, src.seed};
    const Graph g = generate_ba(params);

    std::ostringstream edge_text;
    write_edge_list(edge_text, g);
    if (out_path.empty())
        std::cout << edge_text.str();
    else
        write_output(out_path, edge_text.str());

    std::ostream& info = out_path.empty() ? std::cerr : std::cout;
    const DegreeHistogram h = degree_histogram(g);
    info << g.node_count() << " nodes, " << g.edge_count() << " edges\n";
    info << "degree histogram:\n";
    for (const auto& [deg, count] : h.counts) info << "  " << deg << ": " << count << "\n";
    if (h.exponent) {
        char buf[32];
        std::snprintf(buf, sizeof(buf), "%.3f", *h.exponent);
        info << "power-law exponent estimate: " << buf << "\n";
    }
    return 0;
}

int cmd_rank(const GraphSource& src, double damping, const std::string& prefer,
             const std::string& format, const std::string& out_path) {
    std::string graph_echo;
    const Graph g = resolve_graph(src, graph_echo);
    RankConfig cfg;
    cfg.damping = damping;

    std::vector<CaseDefinition> defs;
    defs.push_back({"case1", std::nullopt});
    if (!prefer.empty()) defs.push_back({"personalized", parse_prefer(prefer, g.node_count())});

    ExperimentReport rep = run_experiment(g, defs, cfg, /*include_spread=*/false);
    rep.config = {{"command", "rank"},
                  {"graph", graph_echo},
                  {"damping", detail::fixed(damping, 6)},
                  {"prefer", prefer.empty() ? "-" : prefer}};
    write_output(out_path, format == "json" ? render_json(rep).dump(2) + "\n" : render_csv(rep));
    return 0;
}

int cmd_spread(const GraphSource& src, double damping, std::string cases_spec,
               const std::string& prefer, const std::string& npage_spec,
               const std::string& sources_spec, const std::string& format,
               const std::string& out_path, bool traces, std::size_t jobs) {
    std::string graph_echo;
    const Graph g = resolve_graph(src, graph_echo);
    RankConfig cfg;
    cfg.damping = damping;

    // A bare --prefer without --cases means: plain scores plus one custom
    // personalized scenario.
    if (cases_spec.empty()) cases_spec = prefer.empty() ? "1" : "1,custom";

    std::optional<std::vector<double>> override_pref;
    if (!prefer.empty()) override_pref = parse_prefer(prefer, g.node_count());

    std::vector<CaseDefinition> defs;
    for (const std::string& item : split(cases_spec, ',')) {
        if (item == "1") {
            defs.push_back({"case1", std::nullopt});
        } else if (item == "2") {
            std::vector<double> w(g.node_count(), 0.0);
            w[argmax_degree_node(g)] = 1.0;
            defs.push_back({"case2", override_pref ? *override_pref : w});
        } else if (item == "3") {
            std::vector<double> w(g.node_count(), 0.0);
            w[argmin_score_node(pagerank(g, cfg))] = 1.0;
            defs.push_back({"case3", override_pref ? *override_pref : w});
        } else if (item == "custom") {
            if (!override_pref)
                throw std::invalid_argument("--cases custom requires --prefer");
            defs.push_back({"custom", *override_pref});
        } else {
            throw std::invalid_argument("--cases: unknown case '" + item + "' (use 1, 2, 3)");
        }
    }

    std::vector<NodeId> sources = parse_sources(sources_spec.empty() ? "all" : sources_spec,
                                                g.node_count());
    std::vector<std::size_t> n_pages =
        npage_spec.empty() ? std::vector<std::size_t>{} : parse_npage(npage_spec, g.node_count());

    ExperimentReport rep =
        run_experiment(g, defs, cfg, /*include_spread=*/true, sources, n_pages, jobs);
    rep.config = {{"command", "spread"},
                  {"graph", graph_echo},
                  {"damping", detail::fixed(damping, 6)},
                  {"cases", cases_spec},
                  {"prefer", prefer.empty() ? "-" : prefer},
                  {"npage", npage_spec.empty() ? "all" : npage_spec},
                  {"sources", sources_spec.empty() ? "all" : sources_spec},
                  {"jobs", std::to_string(jobs)}};

    std::string text;
    nlohmann::ordered_json doc;
    if (format == "json")
        doc = render_json(rep);
    else
        text = render_csv(rep);

    if (traces) {
        SpreadOptions opt;
        opt.record_traces = true;
        for (std::size_t c = 0; c < rep.cases.size(); ++c) {
            const auto tables = build_state_tables(g, rep.cases[c].ranks);
            nlohmann::ordered_json jtraces = nlohmann::ordered_json::array();
            if (format != "json")
                text += "section,traces," + rep.cases[c].def.label + "\nsource,npage,trace\n";
            for (NodeId s : rep.sources) {
                for (std::size_t p : rep.n_pages) {
                    const SpreadResult r = spread_probability(g, tables, {s, p}, opt);
                    if (format == "json") {
                        nlohmann::ordered_json cell;
                        cell["source"] = s;
                        cell["n_page"] = p;
                        auto list = nlohmann::ordered_json::array();
                        for (const StateVectorTrace& tr : *r.traces) list.push_back(format_trace(tr));
                        cell["traces"] = std::move(list);
                        jtraces.push_back(std::move(cell));
                    } else {
                        for (const StateVectorTrace& tr : *r.traces)
                            text += std::to_string(s) + "," + std::to_string(p) + ",\"" +
                                    format_trace(tr) + "\"\n";
                    }
                }
            }
            if (format == "json") doc["cases"][c]["traces"] = std::move(jtraces);
        }
    }

    double total_elapsed = 0.0, worst = 0.0;
    for (const CaseResult& cr : rep.cases)
        for (double e : cr.matrix.elapsed_s) {
            total_elapsed += e;
            worst = std::max(worst, e);
        }
    std::fprintf(stderr, "spread: %zu case(s), search time %.3fs total, %.3fs worst cell\n",
                 rep.cases.size(), total_elapsed, worst);

    write_output(out_path, format == "json" ? doc.dump(2) + "\n" : text);
    return 0;
}

struct VerifyStats {
    std::size_t graphs = 0;
    std::size_t failures = 0;
};

bool verify_one(const Graph& g, const std::string& label, bool corrupt, VerifyStats& stats) {
    auto fail = [&](const std::string& invariant) {
        std::cerr << "FAIL " << label << ": " << invariant << "\n";
        ++stats.failures;
        return false;
    };

    const RankVector ranks = pagerank(g);
    double sum = 0.0;
    for (double s : ranks.scores) sum += s;
    if (std::abs(sum - 1.0) > 1e-9) return fail("rank scores sum to 1");

    auto tables = build_state_tables(g, ranks);
    if (corrupt) tables[0].state_prob[0] += 0.05;

    for (const NodeStateTable& t : tables) {
        double psum = 0.0;
        for (double p : t.state_prob) psum += p;
        if (std::abs(psum - 1.0) > 1e-9) return fail("state probabilities sum to 1");
        if (t.state_pr.back() != max_state_pagerank(t.node, g, ranks))
            return fail("max state mass equals neighbor score sum");
        double min_score = ranks.scores[t.neighbors_desc.front()];
        for (NodeId j : t.neighbors_desc) min_score = std::min(min_score, ranks.scores[j]);
        if (t.state_pr[0] != 0.5 * min_score)
            return fail("state 0 mass is half the minimum neighbor score");
    }

    const std::size_t n = g.node_count();
    SpreadOptions raw;
    raw.prune_unreachable = false;
    for (NodeId s = 0; s < n; ++s) {
        double prev = 2.0;
        for (std::size_t p = 1; p <= n; ++p) {
            const SpreadResult r = spread_probability(g, tables, {s, p});
            if (!(r.probability >= 0.0 && r.probability <= 1.0))
                return fail("probability within [0, 1]");
            if (p == 1 && r.probability != 1.0) return fail("probability is exactly 1 at npage 1");
            if (r.probability > prev + 1e-12) return fail("row non-increasing in npage");
            prev = r.probability;
            const double oracle = oracle_spread(g, tables, {s, p});
            if (std::abs(oracle - r.probability) > 1e-12)
                return fail("search matches brute-force oracle within 1e-12");
            const SpreadResult unpruned = spread_probability(g, tables, {s, p}, raw);
            if (unpruned.probability != r.probability)
                return fail("reachability prune does not change the result");
        }
    }
    ++stats.graphs;
    return true;
}

int cmd_verify(std::size_t graphs, std::size_t max_n, std::uint64_t seed, bool corrupt) {
    if (max_n < 4 || max_n > kMaxOracleNodes)
        throw std::invalid_argument("verify: --max-n must lie in [4, " +
                                    std::to_string(kMaxOracleNodes) + "]");
    // BAT enumeration against plain integer counting, once per width.
    for (std::size_t m = 0; m <= 10; ++m) {
        const auto vecs = bat_enumerate(m);
        if (vecs.size() != (std::size_t(1) << m)) {
            std::cerr << "FAIL bat: enumeration size for m=" << m << "\n";
            return 1;
        }
        for (std::size_t k = 0; k < vecs.size(); ++k)
            if (vecs[k].value() != k) {
                std::cerr << "FAIL bat: enumeration order for m=" << m << "\n";
                return 1;
            }
    }

    VerifyStats stats;
    verify_one(fixture("fig6"), "fig6", false, stats);
    const bool fixture_ok = stats.failures == 0;
    stats = VerifyStats{};

    std::mt19937_64 rng(seed);
    for (std::size_t t = 0; t < graphs; ++t) {
        const std::size_t n = 4 + detail::uniform_index(rng, max_n - 3);
        // m = 2 is the expensive regime for the exhaustive oracle; cap it to
        // graphs small enough to finish promptly.
        const std::size_t m = (n <= 8 && detail::uniform_index(rng, 2) == 1) ? 2 : 1;
        const std::uint64_t gseed = rng();
        const Graph g = generate_ba({n, m, m, gseed});
        verify_one(g, "ba(n=" + std::to_string(n) + ",m=" + std::to_string(m) +
                          ",seed=" + std::to_string(gseed) + ")",
                   corrupt && t == 0, stats);
    }

    std::cout << (fixture_ok ? "bridge fixture: ok\n" : "bridge fixture: FAILED\n");
    std::cout << stats.graphs << "/" << graphs << " graphs: oracle match, sums ok, monotone ok\n";
    return (stats.failures == 0 && fixture_ok) ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"propagation probability toolkit for scale-free networks"};
    app.require_subcommand(1);

    GraphSource gen_src, rank_src, spread_src;
    std::string out_path, rank_out, spread_out;
    double rank_damping = 0.85, spread_damping = 0.85;
    std::string rank_prefer, spread_prefer;
    std::string rank_format = "csv", spread_format = "csv";
    std::string cases_spec, npage_spec, sources_spec;
    bool traces = false;
    std::size_t jobs = 1;
    std::size_t verify_graphs = 50, verify_max_n = 10;
    std::uint64_t verify_seed = 0;
    bool verify_corrupt = false;

    CLI::App* gen = app.add_subcommand("generate", "grow a preferential-attachment network");
    gen->add_option("--n", gen_src.n, "node count")->required();
    gen->add_option("--m", gen_src.m, "edges per new node");
    gen->add_option("--m0", gen_src.m0, "initial node count (default: m)");
    gen->add_option("--seed", gen_src.seed, "RNG seed");
    gen->add_option("--out", out_path, "edge-list output file (default: stdout)");

    CLI::App* rankc = app.add_subcommand("rank", "score nodes and their maximum propagation state");
    add_graph_source_flags(rankc, rank_src);
    rankc->add_option("--damping", rank_damping, "damping factor (default 0.85)");
    rankc->add_option("--prefer", rank_prefer, "personalization weights, node=w[,node=w...]");
    rankc->add_option("--format", rank_format, "csv or json")
        ->check(CLI::IsMember({"csv", "json"}));
    rankc->add_option("--out", rank_out, "output file (default: stdout)");

    CLI::App* spreadc = app.add_subcommand("spread", "propagation probability matrices");
    add_graph_source_flags(spreadc, spread_src);
    spreadc->add_option("--damping", spread_damping, "damping factor (default 0.85)");
    spreadc->add_option("--cases", cases_spec, "score scenarios to run, e.g. 1,2,3");
    spreadc->add_option("--prefer", spread_prefer, "personalization override, node=w[,node=w...]");
    spreadc->add_option("--npage", npage_spec, "thresholds, e.g. 1..8 or 2,4,8 (default: all)");
    spreadc->add_option("--sources", sources_spec, "source nodes, comma list or 'all'");
    spreadc->add_option("--format", spread_format, "csv or json")
        ->check(CLI::IsMember({"csv", "json"}));
    spreadc->add_option("--out", spread_out, "output file (default: stdout)");
    spreadc->add_flag("--traces", traces, "list contributing state configurations (small graphs)");
    spreadc->add_option("--jobs", jobs, "worker threads for matrix cells");

    CLI::App* verifyc = app.add_subcommand("verify", "randomized invariant and oracle suite");
    verifyc->add_option("--graphs", verify_graphs, "number of generated graphs");
    verifyc->add_option("--max-n", verify_max_n, "largest node count (4..12)");
    verifyc->add_option("--seed", verify_seed, "suite seed");
    verifyc->add_flag("--corrupt", verify_corrupt, "")->group("");  // negative control

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (gen->parsed()) return cmd_generate(gen_src, out_path);
        if (rankc->parsed())
            return cmd_rank(rank_src, rank_damping, rank_prefer, rank_format, rank_out);
        if (spreadc->parsed())
            return cmd_spread(spread_src, spread_damping, cases_spec, spread_prefer, npage_spec,
                              sources_spec, spread_format, spread_out, traces, jobs);
        if (verifyc->parsed())
            return cmd_verify(verify_graphs, verify_max_n, verify_seed, verify_corrupt);
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::out_of_range& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 2;
}
