#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "prokrast/bias.hpp"
#include "prokrast/common.hpp"

namespace prokrast {

// ---------------------------------------------------------------------------
// Menus and buyer behavior
// ---------------------------------------------------------------------------
//
// A menu is a set of (allocation x in [0,1], price p) options that always
// includes the walk-away option (0,0). A buyer of value v picks the option
// maximizing v*x - p; ties go to the larger price, then the larger
// allocation. Under the task-graph correspondence x = 1 - w/d(v) and
// p = d(next)/d(v), so "larger price" is the same tie rule as the agent's
// "larger continuation distance".

struct MenuOption {
    double x = 0.0;
    double p = 0.0;
};

struct Menu {
    std::vector<MenuOption> options;

    static Menu make(std::vector<MenuOption> opts) {
        Menu m;
        m.options = std::move(opts);
        const bool has_null = std::any_of(m.options.begin(), m.options.end(),
                                          [](const MenuOption& o) { return o.x == 0.0 && o.p == 0.0; });
        if (!has_null) m.options.insert(m.options.begin(), MenuOption{0.0, 0.0});
        for (const auto& o : m.options)
            if (!(o.x >= 0.0 && o.x <= 1.0) || !std::isfinite(o.p))
                throw PreconditionError("menu option out of range");
        return m;
    }

    /// Feasibility of menus derived from a task graph: each option encodes a
    /// successor with w + d(next) >= d(v), which in menu coordinates
    /// (x = 1 - w/d, p = d(next)/d) reads (1 - x) + p >= 1, i.e. p >= x.
    /// The walk-away option (0,0) is the pay-everything-now edge and sits
    /// exactly on the boundary.
    bool triangle_feasible() const {
        for (const auto& o : options)
            if (o.p < o.x - kTieTol) return false;
        return true;
    }
};

inline int best_response_index(const Menu& menu, double v) {
    double best_u = -std::numeric_limits<double>::infinity();
    for (const auto& o : menu.options) best_u = std::max(best_u, v * o.x - o.p);
    int best = -1;
    for (std::size_t i = 0; i < menu.options.size(); ++i) {
        const auto& o = menu.options[i];
        if (v * o.x - o.p < best_u - kTieTol) continue;
        if (best < 0 || o.p > menu.options[best].p + kTieTol ||
            (std::abs(o.p - menu.options[best].p) <= kTieTol && o.x > menu.options[best].x))
            best = static_cast<int>(i);
    }
    return best;
}

inline MenuOption best_response(const Menu& menu, double v) {
    return menu.options[best_response_index(menu, v)];
}

// ---------------------------------------------------------------------------
// Linear menu objectives and optimal posted prices
// ---------------------------------------------------------------------------

struct LinearObjective {
    double alpha = 0.0;  // coefficient on E[x]
    double beta = 0.0;   // coefficient on E[p]
};

/// alpha*E[x] + beta*E[p] induced by a menu against bias values drawn from
/// a finite distribution (the property tests' brute-force side).
inline double menu_value(const Menu& menu, const BiasDistribution& dist,
                         const LinearObjective& obj) {
    if (!dist.is_finite_kind())
        throw PreconditionError("menu_value is only defined for finite distributions");
    double ex = 0.0, ep = 0.0;
    const auto& bs = dist.finite_atoms_b();
    const auto& ps = dist.finite_atoms_p();
    for (std::size_t i = 0; i < bs.size(); ++i) {
        const MenuOption o = best_response(menu, bs[i]);
        ex += ps[i] * o.x;
        ep += ps[i] * o.p;
    }
    return obj.alpha * ex + obj.beta * ep;
}

struct PostedPrice {
    double price = 0.0;
    double value = 0.0;
    double expected_allocation = 0.0;  // Pr[B >= price]
    double expected_payment = 0.0;     // price * Pr[B >= price]
    bool degenerate = false;           // both objective coefficients were zero
};

namespace detail {

/// Deterministic maximizer over a sorted candidate list; `prefer_larger`
/// picks the larger argument on exact value ties.
template <class F>
std::pair<double, double> maximize_over(F&& value, std::vector<double> candidates,
                                        bool prefer_larger) {
    std::sort(candidates.begin(), candidates.end());
    candidates.erase(std::unique(candidates.begin(), candidates.end()), candidates.end());
    double best_x = candidates.front(), best_v = value(best_x);
    for (double x : candidates) {
        const double v = value(x);
        if (v > best_v || (v == best_v && prefer_larger && x > best_x)) {
            best_v = v;
            best_x = x;
        }
    }
    return {best_x, best_v};
}

inline std::vector<double> price_grid(const BiasDistribution& dist, int points = 10000) {
    std::vector<double> g;
    const double hi = dist.search_max();
    g.reserve(points + 8);
    for (int i = 0; i <= points; ++i) g.push_back(1.0 + (hi - 1.0) * i / points);
    for (double a : dist.atom_points()) g.push_back(a);
    g.push_back(hi + 1.0);  // "never sell": survival is zero beyond the support
    return g;
}

}  // namespace detail

/// Best two-option menu {(0,0), (1, p*)} for the objective. A buyer of value
/// v takes (1, p) iff v >= p (ties buy), so the objective at price p is
/// alpha*survival(p) + beta*p*survival(p). Prices range over [0, inf);
/// every p in (0,1) is dominated by one of the endpoints, so candidates are
/// {0, 1}, the distribution's atoms, a dense grid, and a golden-section
/// refinement around the best grid point.
inline PostedPrice optimal_posted_price(const BiasDistribution& dist, const LinearObjective& obj) {
    PostedPrice r;
    if (obj.alpha == 0.0 && obj.beta == 0.0) {
        r.degenerate = true;
        r.price = 1.0;
        r.expected_allocation = 1.0;
        r.expected_payment = 1.0;
        return r;
    }
    auto value = [&](double p) {
        const double s = p <= 1.0 ? 1.0 : dist.survival(p);
        return obj.alpha * s + obj.beta * p * s;
    };
    std::vector<double> candidates = detail::price_grid(dist);
    candidates.push_back(0.0);
    if (!dist.is_finite_kind()) {
        auto [coarse, cv] = detail::maximize_over(value, candidates, true);
        const double step = (dist.search_max() - 1.0) / 10000.0;
        candidates.push_back(
            detail::golden_max(value, std::max(1.0, coarse - step), coarse + step));
    }
    auto [p, v] = detail::maximize_over(value, candidates, true);
    r.price = p;
    r.value = v;
    r.expected_allocation = p <= 1.0 ? 1.0 : dist.survival(p);
    r.expected_payment = p * r.expected_allocation;
    return r;
}

struct CappedMenu {
    double x_star = 0.0;     // allocation of the priced option; 0 means "never sell"
    double threshold = 0.0;  // buyers with v >= threshold (= 1/x_star) take it
    double value = 0.0;
    double expected_allocation = 0.0;
    double expected_payment = 0.0;
};

/// Price-capped counterpart: menus {(0,0), (x*, 1)} with x* in [0,1]. The
/// buyer takes (x*, 1) iff v * x* >= 1 (ties buy). Requires beta >= 0.
inline CappedMenu optimal_capped_menu(const BiasDistribution& dist, const LinearObjective& obj) {
    if (obj.beta < 0.0) throw PreconditionError("capped pricing requires beta >= 0");
    auto value_at_threshold = [&](double t) {
        const double s = t <= 1.0 ? 1.0 : dist.survival(t);
        return (obj.alpha / t + obj.beta) * s;
    };
    std::vector<double> thresholds = detail::price_grid(dist);
    if (!dist.is_finite_kind()) {
        auto [coarse, cv] = detail::maximize_over(value_at_threshold, thresholds, false);
        const double step = (dist.search_max() - 1.0) / 10000.0;
        thresholds.push_back(detail::golden_max(value_at_threshold, std::max(1.0, coarse - step),
                                                coarse + step));
    }
    auto [t, v] = detail::maximize_over(value_at_threshold, thresholds, false);

    CappedMenu r;
    if (v <= 0.0) {  // the null menu is at least as good
        r.x_star = 0.0;
        r.threshold = std::numeric_limits<double>::infinity();
        r.value = 0.0;
        return r;
    }
    r.threshold = t;
    r.x_star = 1.0 / t;
    r.value = v;
    r.expected_allocation = r.x_star * (t <= 1.0 ? 1.0 : dist.survival(t));
    r.expected_payment = t <= 1.0 ? 1.0 : dist.survival(t);
    return r;
}

// ---------------------------------------------------------------------------
// Randomized decomposition into two-option price-1 menus
// ---------------------------------------------------------------------------
//
// A monotone menu (x and p strictly increasing, first option affordable at
// v = 1) splits into menus M_j = {(0,0), (1/v_{j-1}, 1)} offered with weight
// m_j = v_{j-1} * (x_j - x_{j-1}), where v_{j-1} is the indifference
// threshold between options j-1 and j (v_0 = 1). The mixture reproduces the
// menu's allocation exactly and never collects less. The weights need not
// sum to at most 1, though; the result flags oversubscription instead of
// normalizing it away.

struct MenuDecomposition {
    struct Component {
        double threshold;  // v_{j-1}
        double weight;     // m_j
        Menu menu;         // {(0,0), (1/threshold, 1)}
    };
    std::vector<Component> components;
    double weight_sum = 0.0;
    bool oversubscribed = false;  // weight_sum > 1
    double null_weight = 0.0;     // padding up to 1 when undersubscribed
};

inline MenuDecomposition randomized_menu_decomposition(const Menu& menu) {
    std::vector<MenuOption> opts;
    for (const auto& o : menu.options)
        if (!(o.x == 0.0 && o.p == 0.0)) opts.push_back(o);
    std::sort(opts.begin(), opts.end(),
              [](const MenuOption& a, const MenuOption& b) { return a.x < b.x; });
    if (opts.empty()) throw NonMonotoneMenuError("menu has no priced options");
    for (std::size_t i = 0; i + 1 < opts.size(); ++i)
        if (!(opts[i].x < opts[i + 1].x) || !(opts[i].p < opts[i + 1].p))
            throw NonMonotoneMenuError("menu allocations/prices are not strictly increasing");
    if (!(opts[0].x > 0.0) || opts[0].p > opts[0].x + kTieTol)
        throw NonMonotoneMenuError("lowest option is not affordable at value 1");

    std::vector<double> thresholds{1.0};  // v_0
    for (std::size_t j = 1; j < opts.size(); ++j) {
        const double v = (opts[j].p - opts[j - 1].p) / (opts[j].x - opts[j - 1].x);
        if (v <= thresholds.back() + kTieTol)
            throw NonMonotoneMenuError("indifference thresholds are not increasing");
        thresholds.push_back(v);
    }

    MenuDecomposition d;
    double prev_x = 0.0;
    for (std::size_t j = 0; j < opts.size(); ++j) {
        MenuDecomposition::Component c;
        c.threshold = thresholds[j];
        c.weight = thresholds[j] * (opts[j].x - prev_x);
        c.menu = Menu::make({{1.0 / thresholds[j], 1.0}});
        prev_x = opts[j].x;
        d.weight_sum += c.weight;
        d.components.push_back(std::move(c));
    }
    d.oversubscribed = d.weight_sum > 1.0 + kTieTol;
    d.null_weight = d.oversubscribed ? 0.0 : 1.0 - d.weight_sum;
    return d;
}

/// Expected allocation of a value-v buyer under the randomized menus: the
/// buyer accepts component j iff v >= its threshold (ties buy).
inline double decomposition_allocation(const MenuDecomposition& d, double v) {
    double x = 0.0;
    for (const auto& c : d.components)
        if (v >= c.threshold - kTieTol) x += c.weight / c.threshold;
    return x;
}

/// Expected payment of a value-v buyer under the randomized menus.
inline double decomposition_payment(const MenuDecomposition& d, double v) {
    double p = 0.0;
    for (const auto& c : d.components)
        if (v >= c.threshold - kTieTol) p += c.weight;
    return p;
}

}  // namespace prokrast
