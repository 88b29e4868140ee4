#include <doctest.h>

#include <cmath>
#include <vector>

#include "prokrast/pricing.hpp"
#include "support.hpp"

using namespace prokrast;

namespace {
const BiasDistribution kThirds = BiasDistribution::finite({{1.0, 1.0 / 3.0}, {3.0, 2.0 / 3.0}});

Menu random_menu(rng::Stream& rng, int max_options = 4, bool unit_square = false) {
    const int k = 1 + static_cast<int>(rng.next_u64() % max_options);
    std::vector<MenuOption> opts;
    for (int i = 0; i < k; ++i) {
        const double x = rng.uniform01();
        const double p = unit_square ? rng.uniform01() : rng.uniform01() * 2.5;
        opts.push_back({x, p});
    }
    return Menu::make(std::move(opts));
}
}  // namespace

TEST_CASE("best response basics") {
    const Menu m = Menu::make({{1.0, 1.0}});
    CHECK(best_response(m, 2.0).x == 1.0);       // 2-1 > 0
    CHECK(best_response(m, 1.0).p == 1.0);       // tie, buys
    CHECK(best_response(m, 0.5).x == 0.0);       // walks away

    const Menu m3 = Menu::make({{0.5, 0.4}, {1.0, 1.0}});
    const MenuOption pick = best_response(m3, 1.1);
    CHECK(pick.x == 0.5);  // utilities: 0, 0.15, 0.1
    CHECK(pick.p == 0.4);
}

TEST_CASE("posted price for the revenue objective") {
    const PostedPrice r = optimal_posted_price(kThirds, {0.0, 1.0});
    CHECK(r.price == doctest::Approx(3.0).epsilon(1e-12));
    CHECK(r.value == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(r.expected_payment == doctest::Approx(2.0).epsilon(1e-12));
}

TEST_CASE("posted price for a pure allocation objective sells to everyone") {
    const PostedPrice r = optimal_posted_price(kThirds, {1.0, 0.0});
    CHECK(r.price == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(r.value == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(r.expected_allocation == 1.0);
}

TEST_CASE("degenerate objective") {
    const PostedPrice r = optimal_posted_price(kThirds, {0.0, 0.0});
    CHECK(r.degenerate);
    CHECK(r.value == 0.0);
}

TEST_CASE("posted prices dominate every finite menu (random sweep)") {
    rng::Stream rng(20240501);
    for (int iter = 0; iter < 200; ++iter) {
        const BiasDistribution dist = testsupport::random_finite_dist(rng, 4);
        const Menu menu = random_menu(rng);
        const LinearObjective obj{-2.0 + 4.0 * rng.uniform01(), -2.0 + 4.0 * rng.uniform01()};
        const double mv = menu_value(menu, dist, obj);
        const PostedPrice best = optimal_posted_price(dist, obj);
        CHECK(best.value >= mv - 1e-9);
    }
}

TEST_CASE("capped menus dominate every unit-square menu (random sweep)") {
    rng::Stream rng(20240502);
    for (int iter = 0; iter < 200; ++iter) {
        const BiasDistribution dist = testsupport::random_finite_dist(rng, 4);
        const Menu menu = random_menu(rng, 4, true);
        const LinearObjective obj{-2.0 + 4.0 * rng.uniform01(), 2.0 * rng.uniform01()};
        const double mv = menu_value(menu, dist, obj);
        const CappedMenu best = optimal_capped_menu(dist, obj);
        CHECK(best.value >= mv - 1e-9);
    }
}

TEST_CASE("capped optimum against a grid of two-option menus") {
    const auto u12 = BiasDistribution::uniform(1.0, 2.0);
    const LinearObjective obj{-1.0, 1.0};
    const CappedMenu best = optimal_capped_menu(u12, obj);
    for (int xi = 0; xi <= 100; ++xi)
        for (int pi = 0; pi <= 100; ++pi) {
            const Menu m = Menu::make({{xi / 100.0, pi / 100.0}});
            double ex = 0.0, ep = 0.0;
            for (int k = 0; k < 2000; ++k) {  // quadrature over uniform[1,2]
                const double v = 1.0 + (k + 0.5) / 2000.0;
                const MenuOption o = best_response(m, v);
                ex += o.x / 2000.0;
                ep += o.p / 2000.0;
            }
            CHECK(best.value >= obj.alpha * ex + obj.beta * ep - 1e-3);
        }
}

TEST_CASE("capped pricing rejects negative beta") {
    CHECK_THROWS_AS(optimal_capped_menu(kThirds, {1.0, -0.5}), PreconditionError);
}

TEST_CASE("menu decomposition: already a two-option menu") {
    const MenuDecomposition d = randomized_menu_decomposition(Menu::make({{1.0, 1.0}}));
    REQUIRE(d.components.size() == 1);
    CHECK(d.components[0].threshold == doctest::Approx(1.0));
    CHECK(d.components[0].weight == doctest::Approx(1.0));
    CHECK_FALSE(d.oversubscribed);
    CHECK(d.null_weight == doctest::Approx(0.0));
}

TEST_CASE("menu decomposition: the documented oversubscribed menus") {
    const MenuDecomposition d =
        randomized_menu_decomposition(Menu::make({{0.5, 0.4}, {1.0, 1.0}}));
    REQUIRE(d.components.size() == 2);
    CHECK(d.components[0].weight == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(d.components[1].threshold == doctest::Approx(1.2).epsilon(1e-12));
    CHECK(d.components[1].weight == doctest::Approx(0.6).epsilon(1e-12));
    CHECK(d.weight_sum == doctest::Approx(1.1).epsilon(1e-12));
    CHECK(d.oversubscribed);

    // Oversubscription needs IR slack at the bottom option (p < x), which a
    // task-graph menu can never have -- so this one is flagged on both counts.
    const Menu counterexample = Menu::make({{0.6, 0.4}, {1.0, 1.0}});
    CHECK_FALSE(counterexample.triangle_feasible());
    const MenuDecomposition d2 = randomized_menu_decomposition(counterexample);
    CHECK(d2.weight_sum == doctest::Approx(1.2).epsilon(1e-12));
    CHECK(d2.oversubscribed);
}

TEST_CASE("menu decomposition rejects non-monotone menus") {
    CHECK_THROWS_AS(randomized_menu_decomposition(Menu::make({{0.5, 1.0}, {1.0, 0.9}})),
                    NonMonotoneMenuError);
    CHECK_THROWS_AS(randomized_menu_decomposition(Menu::make({{0.3, 0.5}})),
                    NonMonotoneMenuError);  // not affordable at value 1
}

TEST_CASE("decomposition reproduces allocations and never undercollects") {
    rng::Stream rng(808017);
    int decomposable = 0;
    for (int iter = 0; iter < 400 || decomposable < 40; ++iter) {
        REQUIRE(iter < 4000);
        // Random monotone menu with increasing x and p, affordable at 1.
        const int k = 1 + static_cast<int>(rng.next_u64() % 3);
        std::vector<MenuOption> opts;
        double x = 0.1 + 0.2 * rng.uniform01(), p = x * rng.uniform01();
        for (int i = 0; i < k && x <= 1.0; ++i) {
            opts.push_back({x, p});
            x += 0.1 + 0.4 * rng.uniform01();
            p += 0.1 + 0.6 * rng.uniform01();
        }
        Menu m = Menu::make(opts);
        MenuDecomposition d;
        try {
            d = randomized_menu_decomposition(m);
        } catch (const NonMonotoneMenuError&) {
            continue;
        }
        ++decomposable;
        // Probe strictly inside every interval, plus far beyond the last.
        std::vector<double> probes;
        for (std::size_t j = 0; j + 1 < d.components.size(); ++j)
            probes.push_back(0.5 * (d.components[j].threshold + d.components[j + 1].threshold));
        probes.push_back(d.components.back().threshold + 1.0);
        for (double v : probes) {
            const MenuOption direct = best_response(m, v);
            CHECK(decomposition_allocation(d, v) == doctest::Approx(direct.x).epsilon(1e-9));
            CHECK(decomposition_payment(d, v) >= direct.p - 1e-9);
        }
    }
}
