#include "latcr/sensing.hpp"

#include <cmath>
#include <sstream>

#include "latcr/errors.hpp"
#include "latcr/markov.hpp"
#include "latcr/qfunc.hpp"

namespace latcr {

RadioParams::RadioParams(const Fields& f) : f_(f) {
    require(f.ns >= kMinSamples, "RadioParams: ns must be at least 50 for the Gaussian detector model");
    require(f.gamma_s >= 0.0, "RadioParams: gamma_s must be non-negative");
    require(f.chi2 >= 0.0, "RadioParams: chi2 must be non-negative");
    require(f.sigma_u2 > 0.0, "RadioParams: sigma_u2 must be positive");
    require(f.sigma_s2 >= 0.0, "RadioParams: sigma_s2 must be non-negative");
    require(f.sigma_t2 >= 0.0, "RadioParams: sigma_t2 must be non-negative");
}

RadioParams RadioParams::with_sigma_s2(double sigma_s2) const {
    Fields f = f_;
    f.sigma_s2 = sigma_s2;
    return RadioParams(f);
}

RadioParams RadioParams::with_chi2(double chi2) const {
    Fields f = f_;
    f.chi2 = chi2;
    return RadioParams(f);
}

std::string_view to_string(Hypothesis h) {
    switch (h) {
        case Hypothesis::H00: return "H00";
        case Hypothesis::H01: return "H01";
        case Hypothesis::H10: return "H10";
        case Hypothesis::H11: return "H11";
    }
    return "?";
}

std::string_view to_string(PmMode m) { return m == PmMode::Exact ? "exact" : "approx"; }

double received_power(const RadioParams& p, Hypothesis h) {
    const double su = (h == Hypothesis::H10 || h == Hypothesis::H11) ? p.gamma_i() : 0.0;
    const double pu = (h == Hypothesis::H01 || h == Hypothesis::H11) ? p.gamma_s() : 0.0;
    return (1.0 + pu + su) * p.sigma_u2();
}

HypothesisStats hypothesis_stats(const RadioParams& p, Hypothesis h) {
    const double mean = received_power(p, h);
    return {mean, mean * mean / p.ns()};
}

ErrorProfile::ErrorProfile(double pf0, double pm0, double pf1, double pm1)
    : pf0_(pf0), pm0_(pm0), pf1_(pf1), pm1_(pm1) {
    for (double v : {pf0, pm0, pf1, pm1}) {
        require(v >= 0.0 && v <= 1.0, "ErrorProfile: probabilities must lie in [0, 1]");
    }
}

ErrorProfile error_probs(const RadioParams& p, const ThresholdPair& th) {
    require(th.eps0 > 0.0 && th.eps1 > 0.0, "error_probs: thresholds must be positive");
    const double root_n = std::sqrt(static_cast<double>(p.ns()));
    const double u = p.sigma_u2();
    const double gs = p.gamma_s();
    const double gi = p.gamma_i();
    // 1 - Q(x) is evaluated as Q(-x) to keep precision in the tails.
    const double pm0 = q(-(th.eps0 / ((1.0 + gs) * u) - 1.0) * root_n);
    const double pf0 = q((th.eps0 / u - 1.0) * root_n);
    const double pm1 = q(-(th.eps1 / ((1.0 + gs + gi) * u) - 1.0) * root_n);
    const double pf1 = q((th.eps1 / ((1.0 + gi) * u) - 1.0) * root_n);
    return ErrorProfile(pf0, pm0, pf1, pm1);
}

namespace {

void require_open_unit(double pm, const char* who) {
    if (!(pm > 0.0 && pm < 1.0)) {
        std::ostringstream os;
        os << who << ": miss probability must lie in (0, 1), got " << pm;
        fail(ErrorKind::InvalidArgument, os.str());
    }
}

}  // namespace

double pf0_of_pm(double pm, const RadioParams& p) {
    require_open_unit(pm, "pf0_of_pm");
    const double gs = p.gamma_s();
    return q(-q_inv(pm) * (1.0 + gs) + gs * std::sqrt(static_cast<double>(p.ns())));
}

double pf1_of_pm(double pm, const RadioParams& p) {
    require_open_unit(pm, "pf1_of_pm");
    const double g = p.gamma_s() / (1.0 + p.gamma_i());
    return q(-q_inv(pm) * (1.0 + g) + g * std::sqrt(static_cast<double>(p.ns())));
}

ThresholdPair thresholds_from_pm(double pm, const RadioParams& p) {
    require_open_unit(pm, "thresholds_from_pm");
    // Q^-1(1 - pm) = -Q^-1(pm)
    const double scale = -q_inv(pm) / std::sqrt(static_cast<double>(p.ns())) + 1.0;
    const double u = p.sigma_u2();
    return {scale * (1.0 + p.gamma_s()) * u, scale * (1.0 + p.gamma_s() + p.gamma_i()) * u};
}

ErrorProfile profile_from_pm(double pm, const RadioParams& p) {
    return ErrorProfile(pf0_of_pm(pm, p), pm, pf1_of_pm(pm, p), pm);
}

double required_pm_approx(double constraint_pc, const TransitionProbs& t) {
    if (constraint_pc <= t.nu() / 2.0) {
        fail(ErrorKind::InfeasibleConstraint, "infeasible: Pc <= nu/2");
    }
    const double pm = constraint_pc - t.nu() / 2.0;
    if (pm >= 1.0) fail(ErrorKind::NoRoot, "required_pm: Pc - nu/2 is not below 1");
    return pm;
}

double required_pm(double constraint_pc, const TransitionProbs& t, PmMode mode,
                   const RadioParams& p) {
    const double approx = required_pm_approx(constraint_pc, t);
    if (mode == PmMode::Approx) return approx;

    auto residual = [&](double pm) {
        return collision_ratio(profile_from_pm(pm, p), t) - constraint_pc;
    };
    double lo = 1e-12;
    double hi = 1.0 - 1e-12;
    double f_lo = residual(lo);
    const double f_hi = residual(hi);
    if (f_lo == 0.0) return lo;
    if (f_hi == 0.0) return hi;
    if ((f_lo > 0.0) == (f_hi > 0.0)) {
        fail(ErrorKind::NoRoot, "required_pm: collision constraint has no solution in (0, 1)");
    }
    while (hi - lo > 1e-10) {
        const double mid = 0.5 * (lo + hi);
        const double f_mid = residual(mid);
        if (f_mid == 0.0) return mid;
        if ((f_mid > 0.0) == (f_lo > 0.0)) {
            lo = mid;
            f_lo = f_mid;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

}  // namespace latcr
