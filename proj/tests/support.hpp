#pragma once

// Test-only helpers: randomized instance generators and the brute-force
// bias-sequence oracle the exact DP is checked against.

#include <algorithm>
#include <cassert>
#include <cmath>
#include <string>
#include <vector>

#include "prokrast/agent.hpp"
#include "prokrast/bias.hpp"
#include "prokrast/graph.hpp"
#include "prokrast/rng.hpp"

namespace testsupport {

using namespace prokrast;

// ---------------------------------------------------------------------------
// Brute-force oracle
// ---------------------------------------------------------------------------

/// Expected ratio by enumerating every |atoms|^n bias sequence and walking
/// the graph with the one-step choice rule. Exponential; keep n small.
inline double oracle_ratio(const TaskGraph& g, const BiasDistribution& dist) {
    assert(dist.is_finite_kind());
    const DistanceTable dt = distances(g);
    const auto& bs = dist.finite_atoms_b();
    const auto& ps = dist.finite_atoms_p();
    const int n = g.days();
    const int k = static_cast<int>(bs.size());

    std::vector<int> seq(n, 0);
    double acc = 0.0;
    while (true) {
        double prob = 1.0, total = 0.0;
        int v = g.start();
        for (int step = 0; step < n; ++step) {
            prob *= ps[seq[step]];
            const int e = choose_edge(g, dt, v, bs[seq[step]]);
            total += g.edge(e).w;
            v = g.edge(e).to;
        }
        assert(v == g.target());
        acc += prob * total;
        int pos = n - 1;
        while (pos >= 0 && seq[pos] == k - 1) seq[pos--] = 0;
        if (pos < 0) break;
        seq[pos]++;
    }
    return acc / dt.at(g.start());
}

// ---------------------------------------------------------------------------
// Random instances
// ---------------------------------------------------------------------------

inline BiasDistribution random_finite_dist(rng::Stream& rng, int max_atoms = 3,
                                           double max_b = 4.0) {
    const int k = 1 + static_cast<int>(rng.next_u64() % max_atoms);
    std::vector<std::pair<double, double>> atoms;
    for (int i = 0; i < k; ++i) {
        double b = (i == 0 && rng.uniform01() < 0.5) ? 1.0 : 1.0 + rng.uniform01() * (max_b - 1.0);
        atoms.emplace_back(b, 0.05 + rng.uniform01());
    }
    double total = 0.0;
    for (auto& [b, p] : atoms) total += p;
    for (auto& [b, p] : atoms) p /= total;
    return BiasDistribution::finite(std::move(atoms));
}

/// Same atom masses with every atom pulled toward 1; the original
/// distribution stochastically dominates the result.
inline BiasDistribution shrink_toward_one(const BiasDistribution& d, rng::Stream& rng) {
    assert(d.is_finite_kind());
    std::vector<std::pair<double, double>> atoms;
    for (std::size_t i = 0; i < d.finite_atoms_b().size(); ++i) {
        const double b = d.finite_atoms_b()[i];
        atoms.emplace_back(1.0 + (b - 1.0) * rng.uniform01(), d.finite_atoms_p()[i]);
    }
    return BiasDistribution::finite(std::move(atoms));
}

/// Arbitrary layered graph: random widths and random nonnegative weights
/// (a fifth of them zero), connectivity patched up per layer. Regenerates
/// until d(s,t) > 0 so ratio calls are well defined.
inline TaskGraph random_layered_graph(rng::Stream& rng, int max_layers = 6, int max_width = 3,
                                      double max_w = 4.0) {
    while (true) {
        const int layers = 2 + static_cast<int>(rng.next_u64() % (max_layers - 1));
        std::vector<int> width(layers + 1, 1);
        for (int i = 2; i < layers; ++i) width[i] = 1 + static_cast<int>(rng.next_u64() % max_width);

        GraphSpec spec;
        auto id = [](int i, int j) { return "v" + std::to_string(i) + "_" + std::to_string(j); };
        for (int i = 1; i <= layers; ++i)
            for (int j = 0; j < width[i]; ++j) spec.nodes.push_back({id(i, j), i});
        auto weight = [&]() { return rng.uniform01() < 0.2 ? 0.0 : rng.uniform01() * max_w; };
        for (int i = 1; i < layers; ++i) {
            std::vector<char> covered(width[i + 1], 0);
            for (int j = 0; j < width[i]; ++j) {
                const int u = static_cast<int>(rng.next_u64() % width[i + 1]);
                covered[u] = 1;
                spec.edges.push_back({id(i, j), id(i + 1, u), weight()});
                for (int extra = 0; extra < width[i + 1]; ++extra)
                    if (rng.uniform01() < 0.35) {
                        covered[extra] = 1;
                        spec.edges.push_back({id(i, j), id(i + 1, extra), weight()});
                    }
            }
            for (int u = 0; u < width[i + 1]; ++u)
                if (!covered[u]) {
                    const int j = static_cast<int>(rng.next_u64() % width[i]);
                    spec.edges.push_back({id(i, j), id(i + 1, u), weight()});
                }
        }
        spec.start = id(1, 0);
        spec.target = id(layers, 0);
        TaskGraph g = TaskGraph::build(spec);
        if (distances(g).at(g.start()) > 1e-3) return g;
    }
}

/// Layered graph with per-node distances assigned first and edge weights
/// derived from them, so the structural property holds by construction.
/// monotone=false gives bounded distance (d(v) <= d(s) everywhere);
/// monotone=true additionally forbids edges that increase the distance.
inline TaskGraph random_structured_graph(rng::Stream& rng, bool monotone, int max_layers = 8,
                                         int max_width = 4) {
    const int layers = 3 + static_cast<int>(rng.next_u64() % (max_layers - 2));
    std::vector<int> width(layers + 1, 1);
    for (int i = 2; i < layers; ++i) width[i] = 1 + static_cast<int>(rng.next_u64() % max_width);

    const double d_start = 0.5 + 2.5 * rng.uniform01();
    std::vector<std::vector<double>> d(layers + 1);
    d[1] = {d_start};
    d[layers] = {0.0};
    double prev_min = d_start, prev_max = d_start;
    for (int i = 2; i < layers; ++i) {
        // Downhill witnesses need layer minima to be nonincreasing; the
        // monotone variant also needs every value under the previous max so
        // an uphill incoming edge exists.
        const double cap = monotone ? prev_max : d_start;
        d[i].resize(width[i]);
        d[i][0] = rng.uniform01() * prev_min;
        for (int j = 1; j < width[i]; ++j) d[i][j] = rng.uniform01() * cap;
        prev_min = *std::min_element(d[i].begin(), d[i].end());
        prev_max = *std::max_element(d[i].begin(), d[i].end());
    }

    GraphSpec spec;
    auto id = [](int i, int j) { return "v" + std::to_string(i) + "_" + std::to_string(j); };
    for (int i = 1; i <= layers; ++i)
        for (int j = 0; j < width[i]; ++j) spec.nodes.push_back({id(i, j), i});

    for (int i = 1; i < layers; ++i) {
        std::vector<char> covered(width[i + 1], 0);
        for (int j = 0; j < width[i]; ++j) {
            // Exact-witness edge: realizes d[i][j] through a downhill neighbor.
            std::vector<int> downhill;
            for (int u = 0; u < width[i + 1]; ++u)
                if (d[i + 1][u] <= d[i][j]) downhill.push_back(u);
            assert(!downhill.empty());
            const int u = downhill[rng.next_u64() % downhill.size()];
            covered[u] = 1;
            spec.edges.push_back({id(i, j), id(i + 1, u), d[i][j] - d[i + 1][u]});
            // Slack edges keep the property: w + d(u) >= d(v), and for the
            // monotone variant only downhill targets are allowed.
            for (int extra = 0; extra < width[i + 1]; ++extra) {
                if (rng.uniform01() >= 0.4) continue;
                if (monotone && d[i + 1][extra] > d[i][j]) continue;
                covered[extra] = 1;
                const double slack = rng.uniform01();
                spec.edges.push_back({id(i, j), id(i + 1, extra),
                                      std::max(0.0, d[i][j] - d[i + 1][extra]) + slack});
            }
        }
        for (int u = 0; u < width[i + 1]; ++u) {
            if (covered[u]) continue;
            std::vector<int> sources;
            for (int j = 0; j < width[i]; ++j)
                if (!monotone || d[i][j] >= d[i + 1][u]) sources.push_back(j);
            assert(!sources.empty());
            const int j = sources[rng.next_u64() % sources.size()];
            const double slack = rng.uniform01();
            spec.edges.push_back(
                {id(i, j), id(i + 1, u), std::max(0.0, d[i][j] - d[i + 1][u]) + slack});
        }
    }
    spec.start = id(1, 0);
    spec.target = id(layers, 0);
    return TaskGraph::build(spec);
}

}  // namespace testsupport
