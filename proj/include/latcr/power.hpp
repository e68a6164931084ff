#pragma once

#include <optional>
#include <span>
#include <vector>

#include "latcr/sensing.hpp"
#include "latcr/traffic.hpp"

namespace latcr {

// Throughput analysis with the miss probability pm held fixed: thresholds are
// re-derived per transmit power so only the transmitting-state false alarm
// moves with sigma_s2.

struct ThroughputPoint {
    double sigma_s2;
    double rate;   // log2(1 + gamma_t)
    double waste;  // spectrum waste ratio
    double c;      // rate * (1 - waste)
    double dc;     // dC / d sigma_s2
};

/// Intermediate quantities of the throughput derivative.
struct DerivativeTerms {
    double rho;    // Q(rho) = pf1
    double alpha;  // (1/mu - 1)(Q(rho) - pf0 + 1) + 1
    double kappa;  // ((1/mu - 1)(1 - pf0) + pm) / alpha
    double xi;     // gamma_s chi2 (Q^-1(1 - pm) + sqrt(Ns))
    double pf0;
    double pf1;
};

DerivativeTerms derivative_terms(const RadioParams& p, const TransitionProbs& t, double pm);

ThroughputPoint throughput(const RadioParams& p, const TransitionProbs& t, double pm);

/// dC/d sigma_s2, written term by term from the product rule.
double dthroughput(const RadioParams& p, const TransitionProbs& t, double pm);

/// The same derivative through the kappa/alpha/Xi grouping.
double dthroughput_compact(const RadioParams& p, const TransitionProbs& t, double pm);

/// Both sides of the small-mu stationarity condition at p.sigma_s2():
/// exp(-rho^2/2) (gamma_t + 1) ln(gamma_t + 1) / (gamma_i + 1)^2  versus
/// sqrt(2 pi) sigma_t2 (1 - pf0 + Q(rho)) / Xi.
struct StationaritySides {
    double left;
    double right;
};

StationaritySides small_mu_sides(const RadioParams& p, const TransitionProbs& t, double pm);

/// Log-spaced transmit-power grid, in watts.
struct PowerSearch {
    double lo;
    double hi;
    int points;

    /// Grid given as sigma_s2 / sigma_u2 in dB.
    static PowerSearch from_db(double lo_db, double hi_db, int points, double sigma_u2);
    static PowerSearch defaults(double sigma_u2) { return from_db(-20.0, 60.0, 400, sigma_u2); }

    std::vector<double> grid() const;
};

struct OptimalPowerResult {
    bool exists = false;
    std::optional<double> local_max;
    std::optional<double> local_min;
    std::optional<double> c_at_max;
};

/// Scans the sign of dC/d sigma_s2 over the grid and refines each crossing by
/// bisection. More than two sign changes throws AmbiguousLandscape.
OptimalPowerResult optimal_power(const RadioParams& p, const TransitionProbs& t, double pm,
                                 const PowerSearch& search);

struct ExistencePoint {
    double chi2;
    double left_max;          // max over sigma_s2 of the left side
    double right_at_argmax;   // right side at that sigma_s2
    double argmax_sigma_s2;
    bool solutions() const { return left_max > right_at_argmax; }
};

std::vector<ExistencePoint> existence_curves(const RadioParams& p, const TransitionProbs& t,
                                             double pm, std::span<const double> chi2_grid);

ExistencePoint existence_point(const RadioParams& p, const TransitionProbs& t, double pm,
                               double chi2);

/// chi2 in [lo, hi] where left_max meets right_at_argmax, by bisection on
/// log(left/right). Throws NoRoot when the interval does not bracket it.
double existence_crossing(const RadioParams& p, const TransitionProbs& t, double pm, double lo,
                          double hi);

}  // namespace latcr
