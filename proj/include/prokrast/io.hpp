#pragma once

#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "prokrast/agent.hpp"
#include "prokrast/bias.hpp"
#include "prokrast/common.hpp"
#include "prokrast/graph.hpp"
#include "prokrast/worstcase.hpp"

namespace prokrast::io {

using nlohmann::json;

// ---------------------------------------------------------------------------
// Graph files
// ---------------------------------------------------------------------------
//
// {"n": int, "nodes": [{"id": str, "layer": int}], "edges": [{"from": str,
//  "to": str, "w": float}], "start": str, "target": str}
//
// Weights round-trip bit-exactly (shortest round-trip decimal form).

inline json graph_to_json(const TaskGraph& g) {
    json j;
    j["n"] = g.days();
    j["start"] = g.id(g.start());
    j["target"] = g.id(g.target());
    j["nodes"] = json::array();
    for (int v = 0; v < g.num_nodes(); ++v)
        j["nodes"].push_back({{"id", g.id(v)}, {"layer", g.layer(v)}});
    j["edges"] = json::array();
    for (const auto& e : g.edges())
        j["edges"].push_back({{"from", g.id(e.from)}, {"to", g.id(e.to)}, {"w", e.w}});
    return j;
}

inline TaskGraph graph_from_json(const json& j) {
    GraphSpec spec;
    for (const auto& nd : j.at("nodes"))
        spec.nodes.push_back({nd.at("id").get<std::string>(), nd.at("layer").get<int>()});
    for (const auto& ed : j.at("edges"))
        spec.edges.push_back({ed.at("from").get<std::string>(), ed.at("to").get<std::string>(),
                              ed.at("w").get<double>()});
    spec.start = j.at("start").get<std::string>();
    spec.target = j.at("target").get<std::string>();
    TaskGraph g = TaskGraph::build(spec);
    if (j.contains("n") && j.at("n").get<int>() != g.days())
        throw LayeringError("declared n does not match the layer structure");
    return g;
}

// ---------------------------------------------------------------------------
// Distribution files
// ---------------------------------------------------------------------------
//
// {"kind": "finite", "atoms": [[b, p], ...]}
// {"kind": "uniform", "lo": .., "hi": ..}
// {"kind": "equal_revenue", "z": .., "cap": ..}
// {"kind": "half_normal", "mean": .., "sd": ..}
// {"kind": "heavy_tail_sqrt", "cap": ..}

inline json dist_to_json(const BiasDistribution& d) {
    json j;
    j["kind"] = to_string(d.kind());
    switch (d.kind()) {
        case DistKind::finite: {
            j["atoms"] = json::array();
            for (std::size_t i = 0; i < d.finite_atoms_b().size(); ++i)
                j["atoms"].push_back({d.finite_atoms_b()[i], d.finite_atoms_p()[i]});
            break;
        }
        case DistKind::uniform:
            j["lo"] = d.uniform_lo();
            j["hi"] = d.uniform_hi();
            break;
        case DistKind::equal_revenue:
            j["z"] = d.revenue_z();
            j["cap"] = d.cap();
            break;
        case DistKind::half_normal:
            j["mean"] = d.normal_mean();
            j["sd"] = d.normal_sd();
            break;
        case DistKind::heavy_tail_sqrt:
            j["cap"] = d.cap();
            break;
    }
    return j;
}

inline BiasDistribution dist_from_json(const json& j) {
    const std::string kind = j.at("kind").get<std::string>();
    if (kind == "finite") {
        std::vector<std::pair<double, double>> atoms;
        for (const auto& a : j.at("atoms"))
            atoms.emplace_back(a.at(0).get<double>(), a.at(1).get<double>());
        return BiasDistribution::finite(std::move(atoms));
    }
    if (kind == "uniform")
        return BiasDistribution::uniform(j.at("lo").get<double>(), j.at("hi").get<double>());
    if (kind == "equal_revenue")
        return BiasDistribution::equal_revenue(j.at("z").get<double>(), j.at("cap").get<double>());
    if (kind == "half_normal")
        return BiasDistribution::half_normal(j.at("mean").get<double>(), j.at("sd").get<double>());
    if (kind == "heavy_tail_sqrt")
        return BiasDistribution::heavy_tail_sqrt(j.at("cap").get<double>());
    throw PreconditionError("unknown distribution kind '" + kind + "'");
}

// ---------------------------------------------------------------------------
// Files and CSV
// ---------------------------------------------------------------------------

inline std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

inline void write_file(const std::string& path, const std::string& contents) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write '" + path + "'");
    out << contents;
}

inline TaskGraph load_graph(const std::string& path) {
    return graph_from_json(json::parse(read_file(path)));
}

inline BiasDistribution load_dist(const std::string& path) {
    return dist_from_json(json::parse(read_file(path)));
}

inline void save_graph(const std::string& path, const TaskGraph& g) {
    write_file(path, graph_to_json(g).dump(2) + "\n");
}

// CSV: '.' decimal, 12 significant digits, '\n' line ends.

inline std::string csv_ratio_report(const RatioReport& r) {
    std::ostringstream out;
    out << "method,ratio,d_start,expected_cost,std_error,trials\n";
    out << r.method << ',' << fmt_sig(r.ratio) << ',' << fmt_sig(r.d_start) << ','
        << fmt_sig(r.expected_cost) << ',';
    if (r.method == "simulate") out << fmt_sig(r.std_error) << ',' << r.trials;
    else out << ',';
    out << '\n';
    return out.str();
}

inline std::string csv_trajectories(const TaskGraph& g, const std::vector<Trajectory>& ts) {
    std::ostringstream out;
    out << "trial,step,node,bias,step_cost\n";
    for (std::size_t i = 0; i < ts.size(); ++i)
        for (std::size_t k = 0; k < ts[i].step_costs.size(); ++k)
            out << i << ',' << (k + 1) << ',' << g.id(ts[i].path[k]) << ','
                << fmt_sig(ts[i].biases[k]) << ',' << fmt_sig(ts[i].step_costs[k]) << '\n';
    return out.str();
}

inline std::string csv_worst_case_spec(const WorstCaseSpec& s) {
    std::ostringstream out;
    out << "layer,price,distance,ratio\n";
    for (int i = 0; i < s.n; ++i) {
        out << (i + 1) << ',';
        if (i < static_cast<int>(s.prices.size())) out << fmt_sig(s.prices[i]);
        out << ',' << fmt_sig(s.distances[i]) << ',' << fmt_sig(s.ratios[i]) << '\n';
    }
    return out.str();
}

}  // namespace prokrast::io
