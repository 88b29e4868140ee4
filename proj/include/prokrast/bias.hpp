#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include "prokrast/common.hpp"
#include "prokrast/rng.hpp"

namespace prokrast {

namespace detail {

inline double normal_cdf(double t) { return 0.5 * std::erfc(-t * M_SQRT1_2); }
inline double normal_sf(double t) { return 0.5 * std::erfc(t * M_SQRT1_2); }

/// Inverse standard normal CDF: Acklam's rational approximation plus one
/// Halley step, good to ~1e-15 over (0,1).
inline double normal_quantile(double p) {
    if (p <= 0.0) return -std::numeric_limits<double>::infinity();
    if (p >= 1.0) return std::numeric_limits<double>::infinity();
    static const double a[] = {-3.969683028665376e+01, 2.209460984245205e+02,
                               -2.759285104469687e+02, 1.383577518672690e+02,
                               -3.066479806614716e+01, 2.506628277459239e+00};
    static const double b[] = {-5.447609879822406e+01, 1.615858368580409e+02,
                               -1.556989798598866e+02, 6.680131188771972e+01,
                               -1.328068155288572e+01};
    static const double c[] = {-7.784894002430293e-03, -3.223964580411365e-01,
                               -2.400758277161838e+00, -2.549732539343734e+00,
                               4.374664141464968e+00,  2.938163982698783e+00};
    static const double d[] = {7.784695709041462e-03, 3.224671290700398e-01,
                               2.445134137142996e+00, 3.754408661907416e+00};
    const double plow = 0.02425;
    double x;
    if (p < plow) {
        double q = std::sqrt(-2.0 * std::log(p));
        x = (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
            ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
    } else if (p <= 1.0 - plow) {
        double q = p - 0.5, r = q * q;
        x = (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
            (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
    } else {
        double q = std::sqrt(-2.0 * std::log1p(-p));
        x = -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
            ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
    }
    const double e = normal_cdf(x) - p;
    const double u = e * std::sqrt(2.0 * M_PI) * std::exp(0.5 * x * x);
    return x - u / (1.0 + 0.5 * x * u);
}

/// Maximize f on [lo, hi] by golden-section search (f unimodal enough near
/// the bracket; callers seed the bracket from a dense grid).
template <class F>
double golden_max(F&& f, double lo, double hi, int iters = 200) {
    const double phi = (std::sqrt(5.0) - 1.0) / 2.0;
    double a = lo, b = hi;
    double x1 = b - phi * (b - a), x2 = a + phi * (b - a);
    double f1 = f(x1), f2 = f(x2);
    for (int i = 0; i < iters && (b - a) > 1e-13 * std::max(1.0, std::abs(b)); ++i) {
        if (f1 < f2) {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + phi * (b - a);
            f2 = f(x2);
        } else {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - phi * (b - a);
            f1 = f(x1);
        }
    }
    return 0.5 * (a + b);
}

}  // namespace detail

enum class DistKind { finite, uniform, equal_revenue, half_normal, heavy_tail_sqrt };

inline const char* to_string(DistKind k) {
    switch (k) {
        case DistKind::finite: return "finite";
        case DistKind::uniform: return "uniform";
        case DistKind::equal_revenue: return "equal_revenue";
        case DistKind::half_normal: return "half_normal";
        case DistKind::heavy_tail_sqrt: return "heavy_tail_sqrt";
    }
    return "?";
}

/// z(F) = sup over b > 1 of b * Pr[B >= b], the best posted-price revenue
/// against bias value b when a price of exactly 1 (sell to everyone) is
/// excluded. `argmax_b` is the smallest point attaining the supremum when
/// one exists, else the point it is approached at.
struct ZValue {
    double z = 0.0;
    double argmax_b = 1.0;
    bool exact = false;    // closed form vs numeric search
    bool unbounded = false;  // b * Pr[B >= b] diverges
};

// Present-bias distribution on [1, inf): an immutable value object exposing
// the right/left tail exactly per kind. survival(x) = Pr[B >= x] uses the
// left limit at atoms; cdf(x) = Pr[B <= x] is the usual right-continuous CDF.
class BiasDistribution {
public:
    static BiasDistribution finite(std::vector<std::pair<double, double>> atoms) {
        BiasDistribution d(DistKind::finite);
        if (atoms.empty()) throw PreconditionError("finite distribution needs at least one atom");
        std::sort(atoms.begin(), atoms.end());
        double total = 0.0;
        for (auto& [b, p] : atoms) {
            if (!(b >= 1.0) || !std::isfinite(b))
                throw PreconditionError("atom below 1 in bias distribution");
            if (!(p >= 0.0) || !std::isfinite(p)) throw PreconditionError("negative atom mass");
            total += p;
        }
        if (std::abs(total - 1.0) > 1e-9) throw PreconditionError("atom masses must sum to 1");
        for (auto& [b, p] : atoms) {
            p /= total;
            if (p == 0.0) continue;
            if (!d.atom_b_.empty() && d.atom_b_.back() == b)
                d.atom_p_.back() += p;  // merge duplicate positions
            else {
                d.atom_b_.push_back(b);
                d.atom_p_.push_back(p);
            }
        }
        if (d.atom_b_.empty()) throw PreconditionError("finite distribution has no mass");
        // Suffix sums give exact survival at atoms.
        d.suffix_.assign(d.atom_b_.size() + 1, 0.0);
        for (int i = static_cast<int>(d.atom_b_.size()) - 1; i >= 0; --i)
            d.suffix_[i] = d.suffix_[i + 1] + d.atom_p_[i];
        return d;
    }

    static BiasDistribution uniform(double lo, double hi) {
        BiasDistribution d(DistKind::uniform);
        if (!(lo >= 1.0) || !(hi > lo)) throw PreconditionError("uniform needs 1 <= lo < hi");
        d.lo_ = lo;
        d.hi_ = hi;
        return d;
    }

    /// Revenue z on [max(1,z), cap], an atom of mass z/cap at the cap, and
    /// for z < 1 an atom of mass 1-z at 1.
    static BiasDistribution equal_revenue(double z, double cap) {
        BiasDistribution d(DistKind::equal_revenue);
        if (!(z > 0.0)) throw PreconditionError("equal_revenue needs z > 0");
        if (!(cap > std::max(1.0, z))) throw PreconditionError("equal_revenue needs cap > max(1, z)");
        d.z_ = z;
        d.cap_ = cap;
        return d;
    }

    /// B = max(xi, 1) with xi ~ Normal(mean, sd); atom at 1 of the truncated mass.
    static BiasDistribution half_normal(double mean, double sd) {
        BiasDistribution d(DistKind::half_normal);
        if (!(sd > 0.0)) throw PreconditionError("half_normal needs sd > 0");
        d.mean_ = mean;
        d.sd_ = sd;
        return d;
    }

    /// cdf(x) = 1 - 1/(2 sqrt(x)) on [1, cap), atom of mass 1/(2 sqrt(cap)) at cap.
    static BiasDistribution heavy_tail_sqrt(double cap) {
        BiasDistribution d(DistKind::heavy_tail_sqrt);
        if (!(cap > 1.0)) throw PreconditionError("heavy_tail_sqrt needs cap > 1");
        d.cap_ = cap;
        return d;
    }

    DistKind kind() const { return kind_; }

    double cdf(double x) const {
        switch (kind_) {
            case DistKind::finite: {
                double c = 0.0;
                for (std::size_t i = 0; i < atom_b_.size() && atom_b_[i] <= x; ++i) c += atom_p_[i];
                return c;
            }
            case DistKind::uniform:
                return clamp01((x - lo_) / (hi_ - lo_));
            case DistKind::equal_revenue:
                if (x >= cap_) return 1.0;
                if (x < 1.0) return 0.0;
                return std::max(0.0, 1.0 - z_ / x);
            case DistKind::half_normal:
                if (x < 1.0) return 0.0;
                return detail::normal_cdf((x - mean_) / sd_);
            case DistKind::heavy_tail_sqrt:
                if (x >= cap_) return 1.0;
                if (x < 1.0) return 0.0;
                return 1.0 - 0.5 / std::sqrt(x);
        }
        return 0.0;
    }

    double survival(double x) const {
        if (x <= 1.0) return 1.0;
        switch (kind_) {
            case DistKind::finite: {
                const auto it = std::lower_bound(atom_b_.begin(), atom_b_.end(), x);
                return suffix_[static_cast<std::size_t>(it - atom_b_.begin())];
            }
            case DistKind::uniform:
                return clamp01((hi_ - x) / (hi_ - lo_));
            case DistKind::equal_revenue:
                if (x > cap_) return 0.0;
                return std::min(1.0, z_ / x);
            case DistKind::half_normal:
                return detail::normal_sf((x - mean_) / sd_);
            case DistKind::heavy_tail_sqrt:
                if (x > cap_) return 0.0;
                return std::min(1.0, 0.5 / std::sqrt(x));
        }
        return 0.0;
    }

    /// Generalized inverse CDF; u in [0, 1).
    double quantile(double u) const {
        switch (kind_) {
            case DistKind::finite: {
                double c = 0.0;
                for (std::size_t i = 0; i < atom_b_.size(); ++i) {
                    c += atom_p_[i];
                    if (u < c) return atom_b_[i];
                }
                return atom_b_.back();
            }
            case DistKind::uniform:
                return lo_ + u * (hi_ - lo_);
            case DistKind::equal_revenue: {
                if (z_ < 1.0 && u < 1.0 - z_) return 1.0;
                if (u >= 1.0 - z_ / cap_) return cap_;
                return z_ / (1.0 - u);  // in [max(1,z), cap)
            }
            case DistKind::half_normal: {
                const double at_one = detail::normal_cdf((1.0 - mean_) / sd_);
                if (u <= at_one) return 1.0;
                return mean_ + sd_ * detail::normal_quantile(u);
            }
            case DistKind::heavy_tail_sqrt: {
                if (u < 0.5) return 1.0;
                if (u >= 1.0 - 0.5 / std::sqrt(cap_)) return cap_;
                const double s = 0.5 / (1.0 - u);
                return s * s;
            }
        }
        return 1.0;
    }

    double sample(rng::Stream& rng) const { return quantile(rng.uniform01()); }

    /// Largest support point (+inf for the unbounded normal tail).
    double support_max() const {
        switch (kind_) {
            case DistKind::finite: return atom_b_.back();
            case DistKind::uniform: return hi_;
            case DistKind::equal_revenue: return cap_;
            case DistKind::half_normal: return std::numeric_limits<double>::infinity();
            case DistKind::heavy_tail_sqrt: return cap_;
        }
        return 1.0;
    }

    /// A practical upper end for grids: support max, or a far normal tail.
    double search_max() const {
        const double m = support_max();
        return std::isfinite(m) ? m : mean_ + 12.0 * sd_;
    }

    /// Atom locations and kinks; useful as exact candidates in optimizations.
    std::vector<double> atom_points() const {
        switch (kind_) {
            case DistKind::finite: return atom_b_;
            case DistKind::uniform: return {lo_, hi_};
            case DistKind::equal_revenue:
                return z_ < 1.0 ? std::vector<double>{1.0, cap_} : std::vector<double>{z_, cap_};
            case DistKind::half_normal: return {1.0};
            case DistKind::heavy_tail_sqrt: return {1.0, cap_};
        }
        return {};
    }

    bool is_finite_kind() const { return kind_ == DistKind::finite; }

    ZValue z_value() const;

    // Parameter accessors (file I/O and reporting).
    const std::vector<double>& finite_atoms_b() const { return atom_b_; }
    const std::vector<double>& finite_atoms_p() const { return atom_p_; }
    double uniform_lo() const { return lo_; }
    double uniform_hi() const { return hi_; }
    double revenue_z() const { return z_; }
    double cap() const { return cap_; }
    double normal_mean() const { return mean_; }
    double normal_sd() const { return sd_; }

private:
    explicit BiasDistribution(DistKind k) : kind_(k) {}
    static double clamp01(double x) { return std::min(1.0, std::max(0.0, x)); }

    DistKind kind_;
    std::vector<double> atom_b_, atom_p_, suffix_;
    double lo_ = 0, hi_ = 0;
    double z_ = 0, cap_ = 0;
    double mean_ = 0, sd_ = 0;
};

inline ZValue BiasDistribution::z_value() const {
    ZValue r;
    switch (kind()) {
        case DistKind::finite: {
            // On (a_k, a_{k+1}] survival is constant, so b*survival peaks at atoms.
            r.exact = true;
            r.z = 0.0;
            r.argmax_b = 1.0;
            const auto& bs = finite_atoms_b();
            for (std::size_t i = 0; i < bs.size(); ++i) {
                if (bs[i] <= 1.0) continue;
                const double val = bs[i] * suffix_[i];
                if (val > r.z) {
                    r.z = val;
                    r.argmax_b = bs[i];
                }
            }
            return r;
        }
        case DistKind::uniform: {
            r.exact = true;
            const double b = std::min(hi_, std::max(lo_, hi_ / 2.0));
            r.argmax_b = b;
            r.z = b * (hi_ - b) / (hi_ - lo_);
            return r;
        }
        case DistKind::equal_revenue: {
            // b * survival(b) = z on the whole revenue plateau.
            r.exact = true;
            r.z = z_;
            r.argmax_b = z_ >= 1.0 ? z_ : cap_;
            return r;
        }
        case DistKind::heavy_tail_sqrt: {
            r.exact = true;  // b / (2 sqrt(b)) is increasing, peak at the cap atom
            r.z = 0.5 * std::sqrt(cap_);
            r.argmax_b = cap_;
            return r;
        }
        case DistKind::half_normal: {
            r.exact = false;
            const auto f = [this](double b) { return b * survival(b); };
            const double hi = search_max();
            const int grid = 10000;
            double best_b = 1.0 + (hi - 1.0) / grid, best = f(best_b);
            for (int i = 2; i <= grid; ++i) {
                const double b = 1.0 + (hi - 1.0) * i / grid;
                const double v = f(b);
                if (v > best) {
                    best = v;
                    best_b = b;
                }
            }
            const double step = (hi - 1.0) / grid;
            const double b = detail::golden_max(f, std::max(1.0, best_b - step), best_b + step);
            r.argmax_b = b;
            r.z = f(b);
            return r;
        }
    }
    return r;
}

/// Default probe grid for dominance checks: atoms of both plus a dense
/// linear sweep of the joint support.
inline std::vector<double> dominance_grid(const BiasDistribution& a, const BiasDistribution& b,
                                          int points = 2001) {
    std::vector<double> grid;
    const double hi = std::max(a.search_max(), b.search_max());
    for (int i = 0; i <= points; ++i) grid.push_back(1.0 + (hi - 1.0) * i / points);
    for (const auto* d : {&a, &b})
        for (double x : d->atom_points()) grid.push_back(x);
    std::sort(grid.begin(), grid.end());
    grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
    return grid;
}

/// True iff a stochastically dominates b: Pr_a[B >= x] >= Pr_b[B >= x] at
/// every probe point.
inline bool dominates(const BiasDistribution& a, const BiasDistribution& b,
                      const std::vector<double>& grid) {
    for (double x : grid)
        if (a.survival(x) < b.survival(x) - kTieTol) return false;
    return true;
}

inline bool dominates(const BiasDistribution& a, const BiasDistribution& b) {
    return dominates(a, b, dominance_grid(a, b));
}

}  // namespace prokrast
