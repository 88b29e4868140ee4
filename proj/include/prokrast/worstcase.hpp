#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "prokrast/agent.hpp"
#include "prokrast/bias.hpp"
#include "prokrast/common.hpp"
#include "prokrast/graph.hpp"
#include "prokrast/pricing.hpp"

namespace prokrast {

// ---------------------------------------------------------------------------
// Worst-case task graph for a distribution
// ---------------------------------------------------------------------------
//
// The ratio-maximizing graph is a two-chain: on day i the agent either pays
// its whole current distance d_i and coasts to the target for free, or
// procrastinates for free while the distance grows to d_{i+1} = p_i * d_i.
// The per-layer growth factors p_i are posted prices: with r_{i+1} the
// worst-case ratio over the remaining days,
//
//     r_i = max over p >= 1 of  (1 - survival(p)) + p * survival(p) * r_{i+1},
//
// since the agent pays now exactly when its bias falls below p (ties
// procrastinate). For a purely atomic distribution the maximum sits on an
// atom, so the search is exact there; continuous kinds use a dense grid
// plus golden-section refinement.

struct WorstCaseSpec {
    int n = 0;
    std::vector<double> prices;     // p_1..p_{n-1}
    std::vector<double> distances;  // d(s_1)=1, ..., d(s_n)
    std::vector<double> ratios;     // r_1..r_n, r_n = 1
};

struct Synthesis {
    WorstCaseSpec spec;
    TaskGraph graph;
};

namespace detail {

inline std::pair<double, double> best_layer_price(const BiasDistribution& dist,
                                                  double next_ratio) {
    auto value = [&](double p) {
        const double s = p <= 1.0 ? 1.0 : dist.survival(p);
        return (1.0 - s) + p * s * next_ratio;
    };
    std::vector<double> candidates = dist.atom_points();
    candidates.push_back(1.0);
    if (!dist.is_finite_kind()) {
        const int grid = 10000;
        const double hi = dist.search_max();
        for (int i = 0; i <= grid; ++i) candidates.push_back(1.0 + (hi - 1.0) * i / grid);
        auto [coarse, cv] = maximize_over(value, candidates, false);
        const double step = (hi - 1.0) / grid;
        candidates.push_back(golden_max(value, std::max(1.0, coarse - step), coarse + step));
    }
    // Ties take the smaller price: same ratio, smaller graph.
    return maximize_over(value, candidates, false);
}

}  // namespace detail

inline TaskGraph materialize_worst_case(const WorstCaseSpec& spec) {
    GraphSpec g;
    const int n = spec.n;
    auto s = [](int i) { return "s" + std::to_string(i); };
    auto t = [](int i) { return "t" + std::to_string(i); };
    for (int i = 1; i <= n; ++i) g.nodes.push_back({s(i), i});
    for (int i = 2; i <= n + 1; ++i) g.nodes.push_back({t(i), i});
    for (int i = 1; i < n; ++i) g.edges.push_back({s(i), s(i + 1), 0.0});
    for (int i = 2; i <= n; ++i) g.edges.push_back({t(i), t(i + 1), 0.0});
    for (int i = 1; i <= n; ++i) g.edges.push_back({s(i), t(i + 1), spec.distances[i - 1]});
    g.start = s(1);
    g.target = t(n + 1);
    return TaskGraph::build(g);
}

inline Synthesis synthesize(const BiasDistribution& dist, int n) {
    if (n < 1) throw PreconditionError("synthesize needs n >= 1");
    if (dist.z_value().unbounded)
        throw UnboundedRatioError("worst-case ratio diverges for this distribution");

    WorstCaseSpec spec;
    spec.n = n;
    spec.ratios.assign(n, 0.0);
    spec.ratios[n - 1] = 1.0;
    spec.prices.assign(std::max(0, n - 1), 0.0);
    for (int i = n - 2; i >= 0; --i) {
        auto [price, value] = detail::best_layer_price(dist, spec.ratios[i + 1]);
        spec.prices[i] = price;
        spec.ratios[i] = value;
    }
    spec.distances.assign(n, 1.0);
    for (int i = 1; i < n; ++i) spec.distances[i] = spec.distances[i - 1] * spec.prices[i - 1];

    return Synthesis{spec, materialize_worst_case(spec)};
}

/// Sum of the first n powers of z: the worst-case ratio over n days for any
/// distribution whose posted-price revenue is at most z.
inline double geometric_bound(double z, int n) {
    if (std::abs(z - 1.0) <= 1e-12) return static_cast<double>(n);
    return (std::pow(z, n) - 1.0) / (z - 1.0);
}

// ---------------------------------------------------------------------------
// Growth graph pinned at a single threshold
// ---------------------------------------------------------------------------
//
// The two-chain graph whose distance grows by a fixed factor b0 every day,
// so the agent procrastinates exactly when its bias is >= b0. Its exact
// ratio is sum_{i<n} (1 - z0/b0) z0^{i-1} + z0^{n-1} with
// z0 = b0 * survival(b0), since the agent pays with probability
// 1 - survival(b0) = 1 - z0/b0 per step. `formula_value` is the variant
// with per-step pay probability (1 - 1/b0) instead; both are reported and
// the gap is flagged, not corrected.

struct ThresholdGrowth {
    TaskGraph graph;
    double z0 = 0.0;
    double formula_value = 0.0;  // sum_{i<n} (1 - 1/b0) z0^{i-1} + z0^{n-1}
    double graph_ratio = 0.0;    // exact_ratio of the built graph
    bool discrepant = false;
};

inline ThresholdGrowth threshold_growth_graph(const BiasDistribution& dist, double b0, int n) {
    if (!(b0 > 1.0)) throw InvalidThresholdError("threshold must exceed 1");
    const double s = dist.survival(b0);
    if (!(s > 0.0)) throw InvalidThresholdError("survival at the threshold is zero");
    if (n < 1) throw PreconditionError("threshold_growth_graph needs n >= 1");

    WorstCaseSpec spec;
    spec.n = n;
    spec.prices.assign(std::max(0, n - 1), b0);
    spec.distances.assign(n, 1.0);
    for (int i = 1; i < n; ++i) spec.distances[i] = spec.distances[i - 1] * b0;

    ThresholdGrowth out{materialize_worst_case(spec), b0 * s, 0.0, 0.0, false};
    double zpow = 1.0;
    for (int i = 1; i <= n - 1; ++i) {
        out.formula_value += (1.0 - 1.0 / b0) * zpow;
        zpow *= out.z0;
    }
    out.formula_value += zpow;  // z0^{n-1}
    out.graph_ratio = exact_ratio(out.graph, dist).ratio;
    out.discrepant = std::abs(out.formula_value - out.graph_ratio) > 1e-9;
    return out;
}

// ---------------------------------------------------------------------------
// Dominance monotonicity
// ---------------------------------------------------------------------------

/// Worst-case cost is monotone under stochastic dominance: evaluating the
/// worst-case graph synthesized for f_low under a dominating f_high can
/// only cost more. Checks that claim on one pair.
struct DominanceReport {
    double cost_low = 0.0;
    double cost_high = 0.0;
    bool ok = false;
};

inline DominanceReport dominance_cost_report(const BiasDistribution& f_low,
                                             const BiasDistribution& f_high, int n) {
    if (!dominates(f_high, f_low))
        throw NotDominantError("f_high does not stochastically dominate f_low");
    const Synthesis syn = synthesize(f_low, n);
    DominanceReport r;
    r.cost_low = exact_ratio(syn.graph, f_low).expected_cost;
    r.cost_high = exact_ratio(syn.graph, f_high).expected_cost;
    r.ok = r.cost_high >= r.cost_low - 1e-9;
    return r;
}

}  // namespace prokrast
