#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <queue>
#include <string>
#include <unordered_map>
#include <vector>

#include "prokrast/common.hpp"

namespace prokrast {

// ---------------------------------------------------------------------------
// Raw descriptions (what file loaders and generators produce).
// ---------------------------------------------------------------------------

struct NodeSpec {
    std::string id;
    int layer = 0;  // 1-based; layer 1 holds the start, layer n+1 the target
};

struct EdgeSpec {
    std::string from;
    std::string to;
    double w = 0.0;
};

struct GraphSpec {
    std::vector<NodeSpec> nodes;
    std::vector<EdgeSpec> edges;
    std::string start;
    std::string target;
};

/// A generic weighted DAG (not yet layered); input to layerize().
struct DagSpec {
    std::vector<std::string> nodes;
    std::vector<EdgeSpec> edges;
    std::string start;
    std::string target;
};

// ---------------------------------------------------------------------------
// TaskGraph
// ---------------------------------------------------------------------------
//
// A layered weighted DAG over days 1..n. Node v in layer i is a possible
// state on day i; every edge goes from layer i to layer i+1 and carries a
// nonnegative transition cost. After construction:
//   * layer 1 = {start}, layer n+1 = {target},
//   * every node lies on some start->target path (dead nodes are pruned),
//   * nodes and edges are in a canonical deterministic order, so anything
//     downstream that breaks ties "by edge order" is reproducible.
//
// Immutable after build(); safe to share across threads.

class TaskGraph {
public:
    struct Edge {
        int from;
        int to;
        double w;
    };

    static TaskGraph build(const GraphSpec& spec);

    int days() const { return n_; }                       // n
    int num_layers() const { return n_ + 1; }
    int num_nodes() const { return static_cast<int>(ids_.size()); }
    int num_edges() const { return static_cast<int>(edges_.size()); }
    int start() const { return start_; }
    int target() const { return target_; }
    int layer(int v) const { return layers_[v]; }
    const std::string& id(int v) const { return ids_[v]; }

    const std::vector<Edge>& edges() const { return edges_; }
    const Edge& edge(int e) const { return edges_[e]; }

    /// Indices of the outgoing edges of v, in canonical order.
    std::pair<int, int> out_range(int v) const { return {out_begin_[v], out_begin_[v + 1]}; }
    int out_degree(int v) const { return out_begin_[v + 1] - out_begin_[v]; }

    /// Node index by id; -1 if absent (pruned or never present).
    int find(const std::string& id) const {
        auto it = index_.find(id);
        return it == index_.end() ? -1 : it->second;
    }

private:
    int n_ = 0;
    std::vector<std::string> ids_;
    std::vector<int> layers_;
    std::vector<Edge> edges_;
    std::vector<int> out_begin_;
    int start_ = -1;
    int target_ = -1;
    std::unordered_map<std::string, int> index_;
};

inline TaskGraph TaskGraph::build(const GraphSpec& spec) {
    if (spec.nodes.empty()) throw DisconnectedError("graph has no nodes");

    std::unordered_map<std::string, int> raw_index;
    raw_index.reserve(spec.nodes.size());
    for (std::size_t i = 0; i < spec.nodes.size(); ++i) {
        const auto& nd = spec.nodes[i];
        if (nd.layer < 1) throw LayeringError("node '" + nd.id + "' has layer < 1");
        if (!raw_index.emplace(nd.id, static_cast<int>(i)).second)
            throw LayeringError("duplicate node id '" + nd.id + "'");
    }

    auto raw_of = [&](const std::string& id) {
        auto it = raw_index.find(id);
        if (it == raw_index.end()) throw LayeringError("unknown node id '" + id + "'");
        return it->second;
    };
    const int raw_start = raw_of(spec.start);
    const int raw_target = raw_of(spec.target);
    if (spec.nodes[raw_start].layer != 1)
        throw LayeringError("start node must be in layer 1");
    const int last_layer = spec.nodes[raw_target].layer;
    if (last_layer < 2) throw LayeringError("target must be in layer >= 2");

    for (const auto& e : spec.edges) {
        if (!std::isfinite(e.w) || e.w < 0.0)
            throw NegativeWeightError("edge " + e.from + "->" + e.to + " has invalid weight");
        const int a = raw_of(e.from);
        const int b = raw_of(e.to);
        if (spec.nodes[b].layer != spec.nodes[a].layer + 1)
            throw LayeringError("edge " + e.from + "->" + e.to + " does not go to the next layer");
    }

    // Keep exactly the nodes on some start->target path.
    const int rn = static_cast<int>(spec.nodes.size());
    std::vector<std::vector<int>> out(rn), in(rn);
    for (const auto& e : spec.edges) {
        out[raw_of(e.from)].push_back(raw_of(e.to));
        in[raw_of(e.to)].push_back(raw_of(e.from));
    }
    auto reach = [&](int from, const std::vector<std::vector<int>>& adj) {
        std::vector<char> seen(rn, 0);
        std::queue<int> q;
        seen[from] = 1;
        q.push(from);
        while (!q.empty()) {
            int v = q.front();
            q.pop();
            for (int u : adj[v])
                if (!seen[u]) {
                    seen[u] = 1;
                    q.push(u);
                }
        }
        return seen;
    };
    const auto fwd = reach(raw_start, out);
    const auto bwd = reach(raw_target, in);
    if (!fwd[raw_target]) throw DisconnectedError("no start->target path");

    std::vector<int> keep;
    for (int i = 0; i < rn; ++i)
        if (fwd[i] && bwd[i]) keep.push_back(i);

    // Canonical order: (layer, id).
    std::sort(keep.begin(), keep.end(), [&](int a, int b) {
        if (spec.nodes[a].layer != spec.nodes[b].layer) return spec.nodes[a].layer < spec.nodes[b].layer;
        return spec.nodes[a].id < spec.nodes[b].id;
    });

    TaskGraph g;
    g.n_ = last_layer - 1;
    std::vector<int> remap(rn, -1);
    for (std::size_t i = 0; i < keep.size(); ++i) {
        const auto& nd = spec.nodes[keep[i]];
        remap[keep[i]] = static_cast<int>(i);
        g.ids_.push_back(nd.id);
        g.layers_.push_back(nd.layer);
        g.index_.emplace(nd.id, static_cast<int>(i));
        if (nd.layer > last_layer)
            throw LayeringError("node '" + nd.id + "' lies beyond the target layer");
    }
    g.start_ = remap[raw_start];
    g.target_ = remap[raw_target];

    for (const auto& e : spec.edges) {
        const int a = remap[raw_of(e.from)];
        const int b = remap[raw_of(e.to)];
        if (a >= 0 && b >= 0) g.edges_.push_back({a, b, e.w});
    }
    std::sort(g.edges_.begin(), g.edges_.end(), [](const Edge& x, const Edge& y) {
        if (x.from != y.from) return x.from < y.from;
        if (x.to != y.to) return x.to < y.to;
        return x.w < y.w;
    });
    // Parallel edges are allowed; only exact duplicates collapse.
    g.edges_.erase(std::unique(g.edges_.begin(), g.edges_.end(),
                               [](const Edge& x, const Edge& y) {
                                   return x.from == y.from && x.to == y.to && x.w == y.w;
                               }),
                   g.edges_.end());

    const int nn = g.num_nodes();
    g.out_begin_.assign(nn + 1, 0);
    for (const auto& e : g.edges_) g.out_begin_[e.from + 1]++;
    for (int i = 0; i < nn; ++i) g.out_begin_[i + 1] += g.out_begin_[i];

    // Pruning guarantees layer 1 = {start} and the last layer = {target}:
    // any other node there cannot lie on a start->target path.
    return g;
}

// ---------------------------------------------------------------------------
// Distances to the target
// ---------------------------------------------------------------------------

class DistanceTable {
public:
    explicit DistanceTable(std::vector<double> d) : d_(std::move(d)) {}
    double at(int v) const { return d_[v]; }
    const std::vector<double>& values() const { return d_; }

private:
    std::vector<double> d_;
};

/// Exact backward DP over layers; linear in the number of edges.
inline DistanceTable distances(const TaskGraph& g) {
    std::vector<double> d(g.num_nodes(), std::numeric_limits<double>::infinity());
    d[g.target()] = 0.0;
    // Canonical order sorts by layer, so a reverse scan is a topological order.
    for (int v = g.num_nodes() - 1; v >= 0; --v) {
        if (v == g.target()) continue;
        auto [b, e] = g.out_range(v);
        for (int k = b; k < e; ++k) {
            const auto& ed = g.edge(k);
            d[v] = std::min(d[v], ed.w + d[ed.to]);
        }
    }
    return DistanceTable(std::move(d));
}

/// True iff d(v,t) <= d(s,t) for every node.
inline bool is_bounded_distance(const TaskGraph& g) {
    const DistanceTable dt = distances(g);
    const double ds = dt.at(g.start());
    for (int v = 0; v < g.num_nodes(); ++v)
        if (dt.at(v) > ds + kTieTol) return false;
    return true;
}

/// True iff d(v,t) >= d(u,t) along every edge (v,u). Implies bounded distance.
inline bool is_monotone_distance(const TaskGraph& g) {
    const DistanceTable dt = distances(g);
    for (const auto& e : g.edges())
        if (dt.at(e.from) < dt.at(e.to) - kTieTol) return false;
    return true;
}

// ---------------------------------------------------------------------------
// Layerization of a generic DAG
// ---------------------------------------------------------------------------
//
// Copies node v into layer i iff v is reachable from the start in exactly
// i-1 edges, treating the target as if it had a zero-weight self-loop so
// early arrivals ride a free chain to the final layer. The horizon n is the
// longest start->target path, which makes the multiset of start->target
// path costs identical in the input and the output. Node count is at most
// quadratic in the input size.

inline TaskGraph layerize(const DagSpec& dag) {
    const int rn = static_cast<int>(dag.nodes.size());
    std::unordered_map<std::string, int> index;
    for (int i = 0; i < rn; ++i)
        if (!index.emplace(dag.nodes[i], i).second)
            throw LayeringError("duplicate node id '" + dag.nodes[i] + "'");
    auto at = [&](const std::string& id) {
        auto it = index.find(id);
        if (it == index.end()) throw LayeringError("unknown node id '" + id + "'");
        return it->second;
    };
    const int s = at(dag.start);
    const int t = at(dag.target);

    // Incoming edges of the start are ignored by definition of the traversal.
    std::vector<std::vector<std::pair<int, double>>> out(rn);
    std::vector<int> indeg(rn, 0);
    for (const auto& e : dag.edges) {
        if (!std::isfinite(e.w) || e.w < 0.0)
            throw NegativeWeightError("edge " + e.from + "->" + e.to + " has invalid weight");
        const int a = at(e.from), b = at(e.to);
        if (b == s) continue;
        out[a].push_back({b, e.w});
        indeg[b]++;
    }

    // Kahn topological sort; leftovers with positive in-degree sit on a cycle.
    std::vector<int> order;
    {
        std::vector<int> deg = indeg;
        std::queue<int> q;
        for (int i = 0; i < rn; ++i)
            if (deg[i] == 0) q.push(i);
        while (!q.empty()) {
            int v = q.front();
            q.pop();
            order.push_back(v);
            for (auto [u, w] : out[v])
                if (--deg[u] == 0) q.push(u);
        }
        if (static_cast<int>(order.size()) != rn) throw CycleError("input graph has a cycle");
    }

    // Longest start->target distance (in edges) bounds the horizon.
    constexpr int kUnreached = -1;
    std::vector<int> longest_from_s(rn, kUnreached);
    longest_from_s[s] = 0;
    for (int v : order) {
        if (longest_from_s[v] == kUnreached) continue;
        for (auto [u, w] : out[v])
            longest_from_s[u] = std::max(longest_from_s[u], longest_from_s[v] + 1);
    }
    if (longest_from_s[t] == kUnreached) throw UnreachableTargetError("target unreachable from start");
    if (t == s) throw UnreachableTargetError("start and target must differ");
    const int n = longest_from_s[t];

    // reach[k] = nodes reachable in exactly k edges, with the target absorbing.
    std::vector<std::vector<char>> reach(n + 1, std::vector<char>(rn, 0));
    reach[0][s] = 1;
    for (int k = 0; k < n; ++k)
        for (int v = 0; v < rn; ++v)
            if (reach[k][v]) {
                if (v == t) reach[k + 1][t] = 1;
                for (auto [u, w] : out[v]) reach[k + 1][u] = 1;
            }

    auto copy_id = [&](int v, int layer) { return dag.nodes[v] + "@" + std::to_string(layer); };

    GraphSpec spec;
    for (int k = 0; k <= n; ++k)
        for (int v = 0; v < rn; ++v)
            if (reach[k][v]) spec.nodes.push_back({copy_id(v, k + 1), k + 1});
    for (int k = 0; k < n; ++k)
        for (int v = 0; v < rn; ++v)
            if (reach[k][v]) {
                if (v == t) spec.edges.push_back({copy_id(t, k + 1), copy_id(t, k + 2), 0.0});
                for (auto [u, w] : out[v])
                    if (reach[k + 1][u]) spec.edges.push_back({copy_id(v, k + 1), copy_id(u, k + 2), w});
            }
    spec.start = copy_id(s, 1);
    spec.target = copy_id(t, n + 1);
    return TaskGraph::build(spec);  // build() prunes copies that cannot finish
}

}  // namespace prokrast
