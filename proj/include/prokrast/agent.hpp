#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <limits>
#include <string>
#include <thread>
#include <vector>

#include "prokrast/bias.hpp"
#include "prokrast/common.hpp"
#include "prokrast/graph.hpp"
#include "prokrast/rng.hpp"

namespace prokrast {

// ---------------------------------------------------------------------------
// Single-step choice
// ---------------------------------------------------------------------------

/// The edge a bias-b agent takes out of v: argmin of b*w(e) + d(head(e)).
/// Perceived-cost ties (within kTieTol) go to the larger continuation
/// distance -- the agent procrastinates -- then to canonical edge order.
inline int choose_edge(const TaskGraph& g, const DistanceTable& dt, int v, double b) {
    auto [lo, hi] = g.out_range(v);
    double min_cost = std::numeric_limits<double>::infinity();
    for (int e = lo; e < hi; ++e) {
        const auto& ed = g.edge(e);
        min_cost = std::min(min_cost, b * ed.w + dt.at(ed.to));
    }
    int best = -1;
    double best_d = -1.0;
    for (int e = lo; e < hi; ++e) {
        const auto& ed = g.edge(e);
        if (b * ed.w + dt.at(ed.to) > min_cost + kTieTol) continue;
        if (best < 0 || dt.at(ed.to) > best_d) {
            best = e;
            best_d = dt.at(ed.to);
        }
    }
    return best;
}

// ---------------------------------------------------------------------------
// Choice policy: the bias axis [1, inf) split into intervals
// ---------------------------------------------------------------------------
//
// Out of a node, perceived cost as a function of b is a line per edge
// (slope w, intercept d(head)). The chosen edge is the lower envelope of
// those lines; slopes strictly decrease from one interval to the next.
// Intervals are left-closed, so the lower-slope (larger-d) edge owns its
// own breakpoint, matching the procrastinate-on-tie rule above.

struct ChoicePolicy {
    struct Interval {
        double from;  // interval is [from, next.from)
        int edge;
    };
    std::vector<Interval> intervals;

    int edge_at(double b) const {
        int lo = 0, hi = static_cast<int>(intervals.size());
        while (hi - lo > 1) {
            const int mid = (lo + hi) / 2;
            (intervals[mid].from <= b ? lo : hi) = mid;
        }
        return intervals[lo].edge;
    }
};

inline ChoicePolicy build_policy(const TaskGraph& g, const DistanceTable& dt, int v) {
    struct Line {
        double w, d;
        int edge;
    };
    auto [lo, hi] = g.out_range(v);
    std::vector<Line> lines;
    lines.reserve(hi - lo);
    for (int e = lo; e < hi; ++e) {
        const auto& ed = g.edge(e);
        const Line l{ed.w, dt.at(ed.to), e};
        bool drop = false;
        for (const auto& o : lines)
            if (o.w == l.w && o.d == l.d) { drop = true; break; }  // duplicate line, canonical-first
        if (!drop) lines.push_back(l);
    }
    // Steepest first; among equal slopes only the lowest intercept can win.
    std::sort(lines.begin(), lines.end(), [](const Line& a, const Line& b) {
        if (a.w != b.w) return a.w > b.w;
        if (a.d != b.d) return a.d < b.d;
        return a.edge < b.edge;
    });
    lines.erase(std::unique(lines.begin(), lines.end(),
                            [](const Line& a, const Line& b) { return a.w == b.w; }),
                lines.end());

    struct Seg {
        Line line;
        double start;
    };
    std::vector<Seg> stack;
    for (const auto& l : lines) {
        double start = -std::numeric_limits<double>::infinity();
        while (!stack.empty()) {
            const Seg& top = stack.back();
            if (l.d <= top.line.d) {  // flatter and no higher: top never wins
                stack.pop_back();
                continue;
            }
            const double x = (l.d - top.line.d) / (top.line.w - l.w);
            if (x <= top.start + kTieTol) {
                stack.pop_back();
                continue;
            }
            start = x;
            break;
        }
        stack.push_back({l, start});
    }

    ChoicePolicy policy;
    for (std::size_t i = 0; i < stack.size(); ++i) {
        const double end =
            i + 1 < stack.size() ? stack[i + 1].start : std::numeric_limits<double>::infinity();
        if (end <= 1.0 + kTieTol) continue;  // segment lies entirely below the bias domain
        policy.intervals.push_back({std::max(stack[i].start, 1.0), stack[i].line.edge});
    }
    return policy;
}

// ---------------------------------------------------------------------------
// Reports and trajectories
// ---------------------------------------------------------------------------

struct RatioReport {
    std::string method;    // "exact" or "simulate"
    double ratio = 0.0;    // expected_cost / d_start
    double d_start = 0.0;  // d(s,t)
    double expected_cost = 0.0;
    double std_error = 0.0;      // 0 for the exact method
    std::uint64_t trials = 0;  // 0 for the exact method
};

struct Trajectory {
    std::vector<int> path;  // s = path[0], ..., t = path[n]
    std::vector<double> biases;
    std::vector<double> step_costs;
    double total_cost = 0.0;
};

// ---------------------------------------------------------------------------
// Exact procrastination ratio
// ---------------------------------------------------------------------------
//
// Backward DP: for each node build the choice policy, convert its intervals
// to probabilities via survival differences, and average one-step cost plus
// continuation. Breakpoints are probed a hair (kTieTol) to the left so an
// atom sitting exactly on a threshold lands on the interval the tie rule
// assigns it to, even after rounding in the breakpoint computation.

inline RatioReport exact_ratio(const TaskGraph& g, const BiasDistribution& dist) {
    const DistanceTable dt = distances(g);
    const double ds = dt.at(g.start());
    if (!(ds > 0.0))
        throw PreconditionError("procrastination ratio undefined: d(s,t) is zero");

    auto mass_from = [&](double c) {
        if (std::isinf(c)) return 0.0;
        return dist.survival(c - kTieTol);
    };

    std::vector<double> exp_cost(g.num_nodes(), 0.0);
    for (int v = g.num_nodes() - 1; v >= 0; --v) {
        if (v == g.target()) continue;
        const ChoicePolicy policy = build_policy(g, dt, v);
        double e = 0.0;
        for (std::size_t j = 0; j < policy.intervals.size(); ++j) {
            const double lo = policy.intervals[j].from;
            const double hi = j + 1 < policy.intervals.size()
                                  ? policy.intervals[j + 1].from
                                  : std::numeric_limits<double>::infinity();
            const double pr = mass_from(lo) - mass_from(hi);
            if (pr <= 0.0) continue;
            const auto& ed = g.edge(policy.intervals[j].edge);
            e += pr * (ed.w + exp_cost[ed.to]);
        }
        exp_cost[v] = e;
    }

    RatioReport r;
    r.method = "exact";
    r.d_start = ds;
    r.expected_cost = exp_cost[g.start()];
    r.ratio = r.expected_cost / ds;
    return r;
}

// ---------------------------------------------------------------------------
// Monte Carlo simulation
// ---------------------------------------------------------------------------

/// One realized walk; the rng stream should be dedicated to this trajectory.
inline Trajectory run_trajectory(const TaskGraph& g, const DistanceTable& dt,
                                 const BiasDistribution& dist, rng::Stream& rng) {
    Trajectory t;
    t.path.reserve(g.days() + 1);
    int v = g.start();
    t.path.push_back(v);
    while (v != g.target()) {
        const double b = dist.sample(rng);
        const int e = choose_edge(g, dt, v, b);
        const auto& ed = g.edge(e);
        t.biases.push_back(b);
        t.step_costs.push_back(ed.w);
        t.total_cost += ed.w;
        v = ed.to;
        t.path.push_back(v);
    }
    return t;
}

inline int resolve_thread_count(int threads, std::uint64_t trials) {
    if (threads <= 0) {
        if (const char* env = std::getenv("PROKRAST_THREADS")) {
            const long v = std::strtol(env, nullptr, 10);
            if (v >= 1) threads = static_cast<int>(std::min(v, 256L));
        }
    }
    if (threads <= 0) threads = static_cast<int>(std::thread::hardware_concurrency());
    if (threads <= 0) threads = 1;
    return static_cast<int>(std::min<std::uint64_t>(threads, std::max<std::uint64_t>(trials, 1)));
}

/// Estimate the procrastination ratio from `trials` independent walks.
/// Trajectory i always draws from substream mix(seed, i) and the reduction
/// runs in index order, so the report is bit-identical for any thread count.
/// Pass `trajectories` to keep the walks (trace output); leave null for
/// large runs.
inline RatioReport simulate(const TaskGraph& g, const BiasDistribution& dist,
                            std::uint64_t seed, std::uint64_t trials, int threads = 0,
                            std::vector<Trajectory>* trajectories = nullptr) {
    if (trials < 1) throw PreconditionError("simulate needs trials >= 1");
    const DistanceTable dt = distances(g);
    const double ds = dt.at(g.start());
    if (!(ds > 0.0))
        throw PreconditionError("procrastination ratio undefined: d(s,t) is zero");

    std::vector<double> totals(trials);
    if (trajectories) trajectories->resize(trials);

    const int workers = resolve_thread_count(threads, trials);
    auto run_range = [&](std::uint64_t lo, std::uint64_t hi) {
        for (std::uint64_t i = lo; i < hi; ++i) {
            rng::Stream stream(rng::mix(seed, i));
            Trajectory t = run_trajectory(g, dt, dist, stream);
            totals[i] = t.total_cost;
            if (trajectories) (*trajectories)[i] = std::move(t);
        }
    };
    if (workers == 1) {
        run_range(0, trials);
    } else {
        std::vector<std::thread> pool;
        const std::uint64_t chunk = (trials + workers - 1) / workers;
        for (int k = 0; k < workers; ++k) {
            const std::uint64_t lo = k * chunk;
            const std::uint64_t hi = std::min<std::uint64_t>(trials, lo + chunk);
            if (lo >= hi) break;
            pool.emplace_back(run_range, lo, hi);
        }
        for (auto& th : pool) th.join();
    }

    double sum = 0.0;
    for (std::uint64_t i = 0; i < trials; ++i) sum += totals[i];
    const double mean_total = sum / static_cast<double>(trials);
    double sq = 0.0;
    for (std::uint64_t i = 0; i < trials; ++i) {
        const double d = totals[i] - mean_total;
        sq += d * d;
    }
    const double sd = trials > 1 ? std::sqrt(sq / static_cast<double>(trials - 1)) : 0.0;

    RatioReport r;
    r.method = "simulate";
    r.trials = trials;
    r.d_start = ds;
    r.expected_cost = mean_total;
    r.ratio = mean_total / ds;
    r.std_error = sd / std::sqrt(static_cast<double>(trials)) / ds;
    return r;
}

}  // namespace prokrast
