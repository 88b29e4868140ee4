#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "prokrast/agent.hpp"
#include "prokrast/bias.hpp"
#include "prokrast/common.hpp"
#include "prokrast/graph.hpp"

namespace prokrast {

// ---------------------------------------------------------------------------
// Bounded distance: per-step and total cost bounds
// ---------------------------------------------------------------------------
//
// On a bounded-distance graph every chosen edge costs at most the current
// distance (the shortest path's first edge is always on the menu), so a
// realized walk never pays more than n * d(s,t). This checks both facts on
// simulated trajectories and hands back the first offender if there is one.

struct StepBoundReport {
    std::uint64_t trials = 0;
    std::uint64_t violations = 0;
    double max_total = 0.0;   // largest realized total cost
    double total_bound = 0.0;  // n * d(s,t)
    bool passed = false;
    std::optional<Trajectory> offender;
};

inline StepBoundReport check_step_cost_bound(const TaskGraph& g, const BiasDistribution& dist,
                                             std::uint64_t trials, std::uint64_t seed) {
    if (!is_bounded_distance(g))
        throw PreconditionError("step-cost bound requires a bounded-distance graph");
    const DistanceTable dt = distances(g);
    const double ds = dt.at(g.start());

    StepBoundReport rep;
    rep.trials = trials;
    rep.total_bound = static_cast<double>(g.days()) * ds;
    const double tol = 1e-9 * std::max(1.0, ds);
    for (std::uint64_t i = 0; i < trials; ++i) {
        rng::Stream stream(rng::mix(seed, i));
        const Trajectory t = run_trajectory(g, dt, dist, stream);
        bool bad = t.total_cost > rep.total_bound + tol;
        for (std::size_t k = 0; !bad && k < t.step_costs.size(); ++k)
            bad = t.step_costs[k] > dt.at(t.path[k]) + tol;
        rep.max_total = std::max(rep.max_total, t.total_cost);
        if (bad) {
            ++rep.violations;
            if (!rep.offender) rep.offender = t;
        }
    }
    rep.passed = rep.violations == 0;
    return rep;
}

// ---------------------------------------------------------------------------
// Drift-walk graph: linear lower bound on bounded-distance graphs
// ---------------------------------------------------------------------------
//
// States carry an index j with distance decay^j to the target. A low-bias
// agent climbs (pays, index +beta); a high-bias agent slides (free, index
// -alpha). Parameters are chosen so the climb probability is below the
// slide probability: the walk drifts down, keeps re-paying the recovery
// cost near the floor, and accumulates cost linear in the horizon.

struct DriftWalkParams {
    double b_star = 0.0;  // bias threshold separating climbers from sliders
    int alpha = 0;        // index drop on the free edge
    int beta = 0;         // index gain on the costly edge
    double delta = 0.0;   // distance decay per index step
    double z = 0.0;       // b_star * survival(b_star)
    double gamma = 0.0;   // expected index drift per interior step (negative)
};

namespace detail {

/// Sliders must prefer the free edge even at bias exactly b_star, which
/// holds when b_star * delta^alpha - (b_star - 1) * delta^(alpha+beta) > 1.
inline double climb_margin(double b_star, int alpha, int beta, double delta) {
    return b_star * std::pow(delta, alpha) - (b_star - 1.0) * std::pow(delta, alpha + beta);
}

}  // namespace detail

inline DriftWalkParams drift_walk_params(const BiasDistribution& dist) {
    const ZValue zv = dist.z_value();
    if (!(zv.z > 1.0))
        throw NoValidFractionError("drift-walk construction needs z(F) > 1");

    DriftWalkParams p;
    p.b_star = zv.argmax_b;
    p.z = zv.z;
    const double s = dist.survival(p.b_star);

    // Smallest alpha+beta with 1/b_star < beta/(alpha+beta) < survival(b_star);
    // the interval is nonempty exactly because b_star * s > 1.
    for (int total = 2; total <= 64 && p.beta == 0; ++total)
        for (int beta = 1; beta < total; ++beta) {
            const double frac = static_cast<double>(beta) / total;
            if (frac > 1.0 / p.b_star + 1e-12 && frac < s - 1e-12) {
                p.alpha = total - beta;
                p.beta = beta;
                break;
            }
        }
    if (p.beta == 0) throw NoValidFractionError("no integer fraction fits the drift interval");

    // Decimal scan from just below 1: first delta whose climb margin clears 1.
    for (int k = 1; k <= 12 && p.delta == 0.0; ++k)
        for (int j = 1; j <= 9; ++j) {
            const double cand = 1.0 - j * std::pow(10.0, -k);
            if (cand <= 0.0) break;
            if (detail::climb_margin(p.b_star, p.alpha, p.beta, cand) > 1.0 + 1e-6) {
                p.delta = cand;
                break;
            }
        }
    if (p.delta == 0.0) throw NoValidDeltaError("no delta close to 1 clears the climb margin");

    p.gamma = p.beta * (1.0 - s) - p.alpha * s;
    if (!(p.gamma < 0.0)) throw NoValidDeltaError("drift is not negative; parameter search failed");
    return p;
}

/// Materialize the walk over n days: layer i holds indices 0..n*beta, with
/// interior nodes offering the free slide to j-alpha or the costly climb to
/// j+beta at cost delta^j - delta^(j+beta). Below alpha the agent is forced
/// to climb back to alpha; above (n-1)*beta it coasts. The last day pays
/// delta^j. Every index has distance delta^j, so the graph is
/// bounded-distance with d(s,t) = 1.
inline TaskGraph drift_walk_graph(const DriftWalkParams& p, int n) {
    if (n < 2) throw PreconditionError("drift_walk_graph needs n >= 2");
    if (p.alpha > n * p.beta)
        throw PreconditionError("horizon too short: recovery index alpha exceeds n*beta");
    const int max_j = n * p.beta;
    std::vector<double> pow_delta(max_j + 1, 1.0);
    for (int j = 1; j <= max_j; ++j) pow_delta[j] = pow_delta[j - 1] * p.delta;

    GraphSpec spec;
    auto id = [](int i, int j) { return "v" + std::to_string(i) + "_" + std::to_string(j); };
    for (int i = 1; i <= n; ++i)
        for (int j = 0; j <= max_j; ++j) spec.nodes.push_back({id(i, j), i});
    spec.nodes.push_back({"t", n + 1});

    for (int i = 1; i < n; ++i) {
        for (int j = 0; j <= max_j; ++j) {
            if (j < p.alpha) {
                spec.edges.push_back({id(i, j), id(i + 1, p.alpha), pow_delta[j] - pow_delta[p.alpha]});
            } else if (j > (n - 1) * p.beta) {
                spec.edges.push_back({id(i, j), id(i + 1, j), 0.0});
            } else {
                spec.edges.push_back({id(i, j), id(i + 1, j - p.alpha), 0.0});
                spec.edges.push_back(
                    {id(i, j), id(i + 1, j + p.beta), pow_delta[j] - pow_delta[j + p.beta]});
            }
        }
    }
    for (int j = 0; j <= max_j; ++j) spec.edges.push_back({id(n, j), "t", pow_delta[j]});
    spec.start = id(1, 0);
    spec.target = "t";
    return TaskGraph::build(spec);
}

// ---------------------------------------------------------------------------
// Monotone distance: constant bound when there is mass near bias 1
// ---------------------------------------------------------------------------

/// Witness of cdf(x) >= beta * (x - 1) on [1, 1 + delta], and the constant
/// procrastination bound max(1 + 1/beta, 1/(beta*delta)) it certifies for
/// every monotone-distance graph.
struct MonotoneCondition {
    double beta = 0.0;
    double delta = 0.0;
    double bound = 0.0;
};

inline MonotoneCondition monotone_constant_condition(const BiasDistribution& dist,
                                                     const std::vector<double>& deltas = {1.0}) {
    MonotoneCondition best;
    for (double delta : deltas) {
        if (!(delta > 0.0)) continue;
        // Largest feasible beta for this delta: min of cdf(x)/(x-1) over the
        // window, probed on a dense grid plus the distribution's kinks.
        std::vector<double> probes;
        const int grid = 4000;
        for (int i = 1; i <= grid; ++i) probes.push_back(1.0 + delta * i / grid);
        for (double a : dist.atom_points())
            if (a > 1.0 && a <= 1.0 + delta) probes.push_back(a);
        double beta = std::numeric_limits<double>::infinity();
        for (double x : probes) beta = std::min(beta, dist.cdf(x) / (x - 1.0));
        if (!(beta > 0.0) || !std::isfinite(beta)) continue;
        const double bound = std::max(1.0 + 1.0 / beta, 1.0 / (beta * delta));
        if (best.bound == 0.0 || bound < best.bound) best = {beta, delta, bound};
    }
    if (best.bound == 0.0)
        throw ConditionUnsatisfiableError("distribution has no mass just above bias 1");
    return best;
}

struct MonotoneBoundReport {
    MonotoneCondition condition;
    double ratio = 0.0;
    bool passed = false;
};

inline MonotoneBoundReport check_monotone_constant(const TaskGraph& g,
                                                   const BiasDistribution& dist) {
    if (!is_monotone_distance(g))
        throw PreconditionError("constant bound requires a monotone-distance graph");
    MonotoneBoundReport rep;
    rep.condition = monotone_constant_condition(dist);
    rep.ratio = exact_ratio(g, dist).ratio;
    rep.passed = rep.ratio <= rep.condition.bound * (1.0 + 1e-9);
    return rep;
}

}  // namespace prokrast
