#include "latcr/power.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "latcr/errors.hpp"
#include "latcr/markov.hpp"
#include "latcr/qfunc.hpp"

namespace latcr {

DerivativeTerms derivative_terms(const RadioParams& p, const TransitionProbs& t, double pm) {
    const double a = 1.0 / t.mu() - 1.0;
    const double root_n = std::sqrt(static_cast<double>(p.ns()));
    const double g = p.gamma_s() / (p.gamma_i() + 1.0);
    const double qinv_upper = -q_inv(pm);  // Q^-1(1 - pm)

    DerivativeTerms d{};
    d.pf0 = pf0_of_pm(pm, p);
    d.rho = qinv_upper * (g + 1.0) + g * root_n;
    d.pf1 = q(d.rho);
    d.alpha = a * (d.pf1 - d.pf0 + 1.0) + 1.0;
    d.kappa = (a * (1.0 - d.pf0) + pm) / d.alpha;
    d.xi = p.gamma_s() * p.chi2() * (qinv_upper + root_n);
    return d;
}

ThroughputPoint throughput(const RadioParams& p, const TransitionProbs& t, double pm) {
    ThroughputPoint pt{};
    pt.sigma_s2 = p.sigma_s2();
    pt.rate = std::log2(1.0 + p.gamma_t());
    pt.waste = waste_ratio(profile_from_pm(pm, p), t);
    pt.c = pt.rate * (1.0 - pt.waste);
    pt.dc = dthroughput(p, t, pm);
    return pt;
}

double dthroughput(const RadioParams& p, const TransitionProbs& t, double pm) {
    const DerivativeTerms d = derivative_terms(p, t, pm);
    const double a = 1.0 / t.mu() - 1.0;
    const double gt = p.gamma_t();
    const double gi1 = p.gamma_i() + 1.0;
    const double sqrt_2pi = std::sqrt(2.0 * std::numbers::pi);

    // Rate held, waste ratio moving through pf1.
    const double waste_term = -std::log2(gt + 1.0) * std::exp(-0.5 * d.rho * d.rho) * a *
                              (d.xi / (gi1 * gi1)) / (sqrt_2pi * d.alpha * d.alpha) *
                              (a * (1.0 - d.pf0) + pm);
    // Waste ratio held, rate moving.
    const double rate_term = -p.sigma_t2() / (std::numbers::ln2 * (gt + 1.0)) *
                             (t.mu() / 2.0 + (d.pf1 * a - pm + 1.0) / d.alpha - 1.0);
    return (waste_term + rate_term) / p.sigma_u2();
}

double dthroughput_compact(const RadioParams& p, const TransitionProbs& t, double pm) {
    const DerivativeTerms d = derivative_terms(p, t, pm);
    const double a = 1.0 / t.mu() - 1.0;
    const double gt = p.gamma_t();
    const double gi1 = p.gamma_i() + 1.0;
    const double stationarity =
        d.kappa * std::log(gt + 1.0) * std::exp(-0.5 * d.rho * d.rho) * a * d.xi /
            (std::sqrt(2.0 * std::numbers::pi) * gi1 * gi1 * d.alpha) +
        p.sigma_t2() * (t.mu() / 2.0 - d.kappa) / (gt + 1.0);
    return -stationarity / (std::numbers::ln2 * p.sigma_u2());
}

StationaritySides small_mu_sides(const RadioParams& p, const TransitionProbs& t, double pm) {
    const DerivativeTerms d = derivative_terms(p, t, pm);
    const double gt = p.gamma_t();
    const double gi1 = p.gamma_i() + 1.0;
    StationaritySides s{};
    s.left = std::exp(-0.5 * d.rho * d.rho) * (gt + 1.0) * std::log(gt + 1.0) / (gi1 * gi1);
    s.right = (d.xi > 0.0)
                  ? std::sqrt(2.0 * std::numbers::pi) * p.sigma_t2() * (1.0 - d.pf0 + d.pf1) / d.xi
                  : std::numeric_limits<double>::infinity();
    return s;
}

PowerSearch PowerSearch::from_db(double lo_db, double hi_db, int points, double sigma_u2) {
    return {sigma_u2 * std::pow(10.0, lo_db / 10.0), sigma_u2 * std::pow(10.0, hi_db / 10.0),
            points};
}

std::vector<double> PowerSearch::grid() const {
    std::vector<double> g(static_cast<std::size_t>(points));
    const double llo = std::log(lo);
    const double step = (std::log(hi) - llo) / (points - 1);
    for (int i = 0; i < points; ++i) g[i] = std::exp(llo + step * i);
    g.front() = lo;
    g.back() = hi;
    return g;
}

namespace {

double refine_root(const RadioParams& p, const TransitionProbs& t, double pm, double lo,
                   double hi) {
    double f_lo = dthroughput(p.with_sigma_s2(lo), t, pm);
    while (hi / lo - 1.0 > 1e-8) {
        const double mid = std::sqrt(lo * hi);
        const double f_mid = dthroughput(p.with_sigma_s2(mid), t, pm);
        if ((f_mid > 0.0) == (f_lo > 0.0)) {
            lo = mid;
            f_lo = f_mid;
        } else {
            hi = mid;
        }
    }
    return std::sqrt(lo * hi);
}

}  // namespace

OptimalPowerResult optimal_power(const RadioParams& p, const TransitionProbs& t, double pm,
                                 const PowerSearch& search) {
    require(search.lo > 0.0 && search.hi > search.lo, "optimal_power: search interval must be positive and ordered");
    require(search.points >= 100, "optimal_power: search grid needs at least 100 points");

    const std::vector<double> grid = search.grid();
    std::vector<bool> positive(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) {
        positive[i] = dthroughput(p.with_sigma_s2(grid[i]), t, pm) >= 0.0;
    }

    std::vector<double> roots;
    std::vector<bool> is_max;
    for (std::size_t i = 0; i + 1 < grid.size(); ++i) {
        if (positive[i] != positive[i + 1]) {
            roots.push_back(refine_root(p, t, pm, grid[i], grid[i + 1]));
            is_max.push_back(positive[i]);
        }
    }
    if (roots.size() > 2) {
        std::ostringstream os;
        os << "optimal_power: " << roots.size() << " stationary points at sigma_s2 =";
        for (double r : roots) os << ' ' << r;
        fail(ErrorKind::AmbiguousLandscape, os.str());
    }

    OptimalPowerResult res;
    for (std::size_t i = 0; i < roots.size(); ++i) {
        if (is_max[i] && !res.local_max) {
            res.local_max = roots[i];
        } else if (!is_max[i] && res.local_max && !res.local_min) {
            res.local_min = roots[i];
        }
    }
    res.exists = res.local_max.has_value();
    if (res.exists) res.c_at_max = throughput(p.with_sigma_s2(*res.local_max), t, pm).c;
    return res;
}

ExistencePoint existence_point(const RadioParams& p, const TransitionProbs& t, double pm,
                               double chi2) {
    const RadioParams base = p.with_chi2(chi2);
    auto left_at = [&](double log_ratio) {
        return small_mu_sides(base.with_sigma_s2(p.sigma_u2() * std::exp(log_ratio)), t, pm).left;
    };

    // Coarse scan of sigma_s2 / sigma_u2 over 1e-6 .. 1e12, then golden section.
    constexpr int n = 1801;
    const double lo = std::log(1e-6);
    const double hi = std::log(1e12);
    const double step = (hi - lo) / (n - 1);
    int best = 0;
    double best_val = -1.0;
    for (int i = 0; i < n; ++i) {
        const double v = left_at(lo + step * i);
        if (v > best_val) {
            best_val = v;
            best = i;
        }
    }
    double a = lo + step * std::max(best - 1, 0);
    double b = lo + step * std::min(best + 1, n - 1);
    const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
    double x1 = b - inv_phi * (b - a);
    double x2 = a + inv_phi * (b - a);
    double f1 = left_at(x1);
    double f2 = left_at(x2);
    while (b - a > 1e-10) {
        if (f1 < f2) {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + inv_phi * (b - a);
            f2 = left_at(x2);
        } else {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - inv_phi * (b - a);
            f1 = left_at(x1);
        }
    }
    double arg = 0.5 * (a + b);
    if (left_at(arg) < best_val) arg = lo + step * best;

    const double sigma_s2 = p.sigma_u2() * std::exp(arg);
    const StationaritySides s = small_mu_sides(base.with_sigma_s2(sigma_s2), t, pm);
    return {chi2, s.left, s.right, sigma_s2};
}

std::vector<ExistencePoint> existence_curves(const RadioParams& p, const TransitionProbs& t,
                                             double pm, std::span<const double> chi2_grid) {
    require(!chi2_grid.empty(), "existence_curves: chi2 grid must be nonempty");
    std::vector<ExistencePoint> out;
    out.reserve(chi2_grid.size());
    for (double chi2 : chi2_grid) out.push_back(existence_point(p, t, pm, chi2));
    return out;
}

double existence_crossing(const RadioParams& p, const TransitionProbs& t, double pm, double lo,
                          double hi) {
    require(lo > 0.0 && hi > lo, "existence_crossing: chi2 interval must be positive and ordered");
    auto gap = [&](double chi2) {
        const ExistencePoint e = existence_point(p, t, pm, chi2);
        return std::log(e.left_max / e.right_at_argmax);
    };
    double g_lo = gap(lo);
    const double g_hi = gap(hi);
    if ((g_lo > 0.0) == (g_hi > 0.0)) {
        fail(ErrorKind::NoRoot, "existence_crossing: interval does not bracket the crossing");
    }
    while (hi / lo - 1.0 > 1e-9) {
        const double mid = std::sqrt(lo * hi);
        const double g_mid = gap(mid);
        if ((g_mid > 0.0) == (g_lo > 0.0)) {
            lo = mid;
            g_lo = g_mid;
        } else {
            hi = mid;
        }
    }
    return std::sqrt(lo * hi);
}

}  // namespace latcr
