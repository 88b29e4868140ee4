#pragma once

#include <cmath>
#include <string>

#include "prokrast/common.hpp"
#include "prokrast/graph.hpp"

namespace prokrast {

// Three small task-graph families used throughout the tests and the CLI.
// All of them normalize d(s,t) to a simple closed form so expected costs
// read directly as procrastination ratios.

/// Two chains: "not done yet" states s_i with a completion edge whose cost
/// doubles every day (2^{i-1}), and free "done" states t_i. Doubling beats
/// any bias threshold of 2 or more, which is what makes expected cost grow
/// geometrically. d(s,t) = 1. Not bounded-distance.
inline TaskGraph homework_graph(int n) {
    if (n < 1) throw PreconditionError("homework_graph needs n >= 1");
    GraphSpec spec;
    auto s = [](int i) { return "s" + std::to_string(i); };
    auto t = [](int i) { return "t" + std::to_string(i); };
    for (int i = 1; i <= n; ++i) spec.nodes.push_back({s(i), i});
    for (int i = 2; i <= n + 1; ++i) spec.nodes.push_back({t(i), i});
    for (int i = 1; i < n; ++i) spec.edges.push_back({s(i), s(i + 1), 0.0});
    for (int i = 2; i <= n; ++i) spec.edges.push_back({t(i), t(i + 1), 0.0});
    for (int i = 1; i <= n; ++i) spec.edges.push_back({s(i), t(i + 1), std::ldexp(1.0, i - 1)});
    spec.start = s(1);
    spec.target = t(n + 1);
    return TaskGraph::build(spec);
}

/// Fitness lattice over levels 0..m. Training costs 1/m and raises the
/// level; sleeping is free and lowers it; level m maintains itself for
/// free, level 0 for a small cost epsilon; the final day costs 1 - j/m at
/// level j. d(v,t) = 1 - j/m everywhere, so the graph is bounded-distance
/// (but not monotone). d(s,t) = 1.
inline TaskGraph marathon_graph(int n, int m, double epsilon) {
    if (n < 1) throw PreconditionError("marathon_graph needs n >= 1");
    if (m < 2) throw PreconditionError("marathon_graph needs m >= 2");
    if (!(epsilon >= 0.0) || !(epsilon < 2.0 / (3.0 * m)))
        throw PreconditionError("marathon_graph needs 0 <= epsilon < 2/(3m)");
    GraphSpec spec;
    auto node = [](int i, int j) { return "f" + std::to_string(i) + "_" + std::to_string(j); };
    const double unit = 1.0 / m;
    spec.nodes.push_back({node(1, 0), 1});
    for (int i = 2; i <= n; ++i)
        for (int j = 0; j <= std::min(m, i - 1); ++j) spec.nodes.push_back({node(i, j), i});
    spec.nodes.push_back({"t", n + 1});
    for (int i = 1; i < n; ++i) {
        for (int j = 0; j <= std::min(m, i - 1); ++j) {
            if (j < m) spec.edges.push_back({node(i, j), node(i + 1, j + 1), unit});
            if (j > 0) spec.edges.push_back({node(i, j), node(i + 1, j - 1), 0.0});
            if (j == m) spec.edges.push_back({node(i, j), node(i + 1, m), 0.0});
            if (j == 0) spec.edges.push_back({node(i, j), node(i + 1, 0), epsilon});
        }
    }
    for (int j = 0; j <= std::min(m, n - 1); ++j)
        spec.edges.push_back({node(n, j), "t", 1.0 - static_cast<double>(j) / m});
    spec.start = node(1, 0);
    spec.target = "t";
    return TaskGraph::build(spec);
}

/// Rent-or-buy: renting costs delta per weekend, buying costs 1 once and
/// makes every later weekend free. Monotone distance; d(s,t) =
/// min(1, n*delta).
inline TaskGraph ski_graph(int n, double delta) {
    if (n < 1) throw PreconditionError("ski_graph needs n >= 1");
    if (!(delta > 0.0) || delta > 1.0) throw PreconditionError("ski_graph needs delta in (0,1]");
    GraphSpec spec;
    auto rent = [](int i) { return "r" + std::to_string(i); };
    auto own = [](int i) { return "o" + std::to_string(i); };
    spec.nodes.push_back({"s", 1});
    for (int i = 2; i <= n; ++i) {
        spec.nodes.push_back({rent(i), i});
        spec.nodes.push_back({own(i), i});
    }
    spec.nodes.push_back({"t", n + 1});
    auto rent_id = [&](int i) { return i == 1 ? std::string("s") : i == n + 1 ? std::string("t") : rent(i); };
    auto own_id = [&](int i) { return i == n + 1 ? std::string("t") : own(i); };
    for (int i = 1; i <= n; ++i) {
        spec.edges.push_back({rent_id(i), rent_id(i + 1), delta});
        if (i < n) spec.edges.push_back({rent_id(i), own_id(i + 1), 1.0});
        if (i >= 2) spec.edges.push_back({own_id(i), own_id(i + 1), 0.0});
    }
    spec.start = "s";
    spec.target = "t";
    return TaskGraph::build(spec);
}

enum class Scenario { homework, marathon, ski };

/// One record describing any of the three scenario families; unused
/// parameters are ignored by the builder.
struct ScenarioSpec {
    Scenario scenario = Scenario::homework;
    int n = 1;
    int m = 2;              // marathon fitness levels
    double epsilon = 0.0;   // marathon level-0 upkeep, in [0, 2/(3m))
    double delta = 0.5;     // ski rent cost, in (0, 1]
};

inline TaskGraph build_scenario(const ScenarioSpec& s) {
    switch (s.scenario) {
        case Scenario::homework: return homework_graph(s.n);
        case Scenario::marathon: return marathon_graph(s.n, s.m, s.epsilon);
        case Scenario::ski: return ski_graph(s.n, s.delta);
    }
    throw PreconditionError("unknown scenario");
}

}  // namespace prokrast
