#include <doctest.h>

#include <cmath>
#include <vector>

#include "prokrast/agent.hpp"
#include "prokrast/scenarios.hpp"
#include "support.hpp"

using namespace prokrast;

namespace {
const BiasDistribution kThirds = BiasDistribution::finite({{1.0, 1.0 / 3.0}, {3.0, 2.0 / 3.0}});

/// pay-or-wait gadget: pay w=1 now and be done, or wait free with the
/// continuation distance d_next.
TaskGraph pay_or_wait(double d_next) {
    GraphSpec spec;
    spec.nodes = {{"s", 1}, {"pay", 2}, {"wait", 2}, {"t", 3}};
    spec.edges = {{"s", "pay", 1.0}, {"s", "wait", 0.0}, {"pay", "t", 0.0}, {"wait", "t", d_next}};
    spec.start = "s";
    spec.target = "t";
    return TaskGraph::build(spec);
}
}  // namespace

TEST_CASE("choose_edge: two-line comparison and the procrastinate tie") {
    const TaskGraph g = pay_or_wait(1.5);
    const DistanceTable dt = distances(g);
    const int s = g.start();

    const int at_1 = choose_edge(g, dt, s, 1.0);
    CHECK(g.id(g.edge(at_1).to) == "pay");  // 1.0 < 1.5
    const int at_2 = choose_edge(g, dt, s, 2.0);
    CHECK(g.id(g.edge(at_2).to) == "wait");  // 2.0 > 1.5
    const int at_tie = choose_edge(g, dt, s, 1.5);
    CHECK(g.id(g.edge(at_tie).to) == "wait");  // tie goes to the larger distance
}

TEST_CASE("choose_edge on the homework graph waits whenever b > 2") {
    const TaskGraph g = homework_graph(5);
    const DistanceTable dt = distances(g);
    for (int i = 1; i <= 4; ++i) {
        const int v = g.find("s" + std::to_string(i));
        REQUIRE(v >= 0);
        const int wait = choose_edge(g, dt, v, 3.0);
        CHECK(g.id(g.edge(wait).to) == "s" + std::to_string(i + 1));
        const int act = choose_edge(g, dt, v, 1.0);
        CHECK(g.id(g.edge(act).to) == "t" + std::to_string(i + 1));
        const int tie = choose_edge(g, dt, v, 2.0);  // 2*2^{i-1} == 2^i
        CHECK(g.id(g.edge(tie).to) == "s" + std::to_string(i + 1));
    }
}

TEST_CASE("policy intervals agree with direct argmin probes") {
    rng::Stream rng(314159);
    for (int iter = 0; iter < 60; ++iter) {
        const TaskGraph g = testsupport::random_layered_graph(rng, 6, 4);
        const DistanceTable dt = distances(g);
        for (int v = 0; v < g.num_nodes(); ++v) {
            if (v == g.target()) continue;
            const ChoicePolicy pol = build_policy(g, dt, v);
            REQUIRE(!pol.intervals.empty());
            CHECK(pol.intervals.front().from == 1.0);
            for (std::size_t j = 0; j + 1 < pol.intervals.size(); ++j) {
                CHECK(pol.intervals[j].from < pol.intervals[j + 1].from);
                // slopes strictly decrease across intervals
                CHECK(g.edge(pol.intervals[j].edge).w > g.edge(pol.intervals[j + 1].edge).w);
            }
            for (int probe = 0; probe < 200; ++probe) {
                const double b = 1.0 + rng.uniform01() * 6.0;
                CHECK(pol.edge_at(b) == choose_edge(g, dt, v, b));
            }
        }
    }
}

TEST_CASE("exact ratio: homework n=2 under the two-atom reference") {
    const RatioReport r = exact_ratio(homework_graph(2), kThirds);
    CHECK(r.ratio == doctest::Approx(5.0 / 3.0).epsilon(1e-12));
    CHECK(r.d_start == 1.0);
}

TEST_CASE("exact ratio is 1 for an unbiased agent") {
    rng::Stream rng(2718);
    const auto point = BiasDistribution::finite({{1.0, 1.0}});
    for (int iter = 0; iter < 30; ++iter) {
        const TaskGraph g = testsupport::random_layered_graph(rng);
        CHECK(exact_ratio(g, point).ratio == doctest::Approx(1.0).epsilon(1e-12));
    }
}

TEST_CASE("oracle equivalence on random instances") {
    rng::Stream rng(160914);
    for (int iter = 0; iter < 120; ++iter) {
        const TaskGraph g = testsupport::random_layered_graph(rng, 6, 3);
        const BiasDistribution dist = testsupport::random_finite_dist(rng, 3);
        const double dp = exact_ratio(g, dist).ratio;
        const double brute = testsupport::oracle_ratio(g, dist);
        CHECK(dp == doctest::Approx(brute).epsilon(1e-12));
        CHECK(dp >= 1.0 - 1e-9);
    }
}

TEST_CASE("exact ratio handles continuous kinds") {
    // Single pay-or-wait step: pay happens when b < 1.5, so the expected
    // cost is cdf(1.5-) * 1 + survival(1.5) * 1.5 against uniform[1,2].
    const TaskGraph g = pay_or_wait(1.5);
    const auto u12 = BiasDistribution::uniform(1.0, 2.0);
    const double expect = 0.5 * 1.0 + 0.5 * 1.5;
    CHECK(exact_ratio(g, u12).expected_cost == doctest::Approx(expect).epsilon(1e-12));
}

TEST_CASE("zero start distance is rejected") {
    GraphSpec spec;
    spec.nodes = {{"s", 1}, {"t", 2}};
    spec.edges = {{"s", "t", 0.0}};
    spec.start = "s";
    spec.target = "t";
    const TaskGraph g = TaskGraph::build(spec);
    CHECK_THROWS_AS(exact_ratio(g, kThirds), PreconditionError);
    CHECK_THROWS_AS(simulate(g, kThirds, 1, 10), PreconditionError);
}

namespace {
/// Independent route for continuous kinds: per node, integrate the one-step
/// choice over bias via midpoint quadrature in quantile space (which also
/// absorbs atoms), using only choose_edge. Converges O(1/N) at the policy
/// breakpoints, so tolerances are loose but the machinery shares nothing
/// with the envelope/survival path it checks.
double quadrature_ratio(const TaskGraph& g, const BiasDistribution& dist, int points) {
    const DistanceTable dt = distances(g);
    std::vector<double> exp_cost(g.num_nodes(), 0.0);
    for (int v = g.num_nodes() - 1; v >= 0; --v) {
        if (v == g.target()) continue;
        double acc = 0.0;
        for (int k = 0; k < points; ++k) {
            const double b = dist.quantile((k + 0.5) / points);
            const auto& ed = g.edge(choose_edge(g, dt, v, b));
            acc += ed.w + exp_cost[ed.to];
        }
        exp_cost[v] = acc / points;
    }
    return exp_cost[g.start()] / dt.at(g.start());
}
}  // namespace

TEST_CASE("quadrature oracle agrees on continuous distributions") {
    rng::Stream rng(271828);
    const std::vector<BiasDistribution> dists = {
        BiasDistribution::uniform(1.0, 2.0),
        BiasDistribution::uniform(1.0, 3.0),
        BiasDistribution::equal_revenue(1.5, 20.0),
        BiasDistribution::half_normal(1.0, 1.0),
        BiasDistribution::heavy_tail_sqrt(50.0),
    };
    for (int iter = 0; iter < 25; ++iter) {
        const TaskGraph g = testsupport::random_layered_graph(rng, 5, 3);
        const auto& dist = dists[iter % dists.size()];
        const double dp = exact_ratio(g, dist).ratio;
        const double quad = quadrature_ratio(g, dist, 200000);
        CHECK(dp == doctest::Approx(quad).epsilon(5e-3));
    }
}

TEST_CASE("simulation: point mass at 1 walks a shortest path") {
    const auto point = BiasDistribution::finite({{1.0, 1.0}});
    const RatioReport r = simulate(homework_graph(6), point, 99, 500);
    CHECK(r.ratio == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(r.std_error == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("simulation matches the exact DP within noise") {
    const TaskGraph g = homework_graph(2);
    const RatioReport sim = simulate(g, kThirds, 7, 1000000);
    CHECK(sim.ratio == doctest::Approx(5.0 / 3.0).epsilon(3.0 * sim.std_error / (5.0 / 3.0)));

    const TaskGraph ski = ski_graph(10, 0.5);
    const RatioReport s2 = simulate(ski, kThirds, 8, 200000);
    const double exact = exact_ratio(ski, kThirds).ratio;
    CHECK(std::abs(s2.ratio - exact) <= 3.0 * s2.std_error);
}

TEST_CASE("monte carlo vs exact across random instances") {
    rng::Stream rng(5150);
    int close = 0;
    const int cases = 100;
    for (int iter = 0; iter < cases; ++iter) {
        const TaskGraph g = testsupport::random_layered_graph(rng, 6, 3);
        const BiasDistribution dist = testsupport::random_finite_dist(rng, 3);
        const double exact = exact_ratio(g, dist).ratio;
        const RatioReport sim = simulate(g, dist, 1000 + iter, 4000);
        const double slack = std::max(3.0 * sim.std_error, 1e-12);
        close += std::abs(sim.ratio - exact) <= slack;
    }
    CHECK(close >= 99);
}

TEST_CASE("simulation is identical across thread counts") {
    const TaskGraph g = ski_graph(12, 0.5);
    const RatioReport one = simulate(g, kThirds, 424242, 20000, 1);
    const RatioReport eight = simulate(g, kThirds, 424242, 20000, 8);
    CHECK(one.ratio == eight.ratio);
    CHECK(one.std_error == eight.std_error);
    CHECK(one.expected_cost == eight.expected_cost);
}

TEST_CASE("every realized trajectory costs at least d(s,t)") {
    rng::Stream rng(8080);
    for (int iter = 0; iter < 20; ++iter) {
        const TaskGraph g = testsupport::random_layered_graph(rng, 6, 3);
        const BiasDistribution dist = testsupport::random_finite_dist(rng, 3);
        const DistanceTable dt = distances(g);
        std::vector<Trajectory> ts;
        simulate(g, dist, 12345 + iter, 300, 1, &ts);
        for (const auto& t : ts) {
            CHECK(t.total_cost >= dt.at(g.start()) - 1e-9);
            CHECK(static_cast<int>(t.path.size()) == g.days() + 1);
            double sum = 0.0;
            for (double w : t.step_costs) sum += w;
            CHECK(sum == doctest::Approx(t.total_cost).epsilon(1e-12));
        }
    }
}
