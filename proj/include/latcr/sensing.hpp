#pragma once

#include <array>
#include <string_view>

#include "latcr/traffic.hpp"

namespace latcr {

/// Detector and link parameters, all linear. gamma_s is taken as the primitive
/// sensing SNR; the INR and link SNR are derived from the powers.
class RadioParams {
public:
    struct Fields {
        int ns = 300;            // samples per slot
        double gamma_s = 0.0;    // sensing SNR
        double chi2 = 0.0;       // residual self-interference factor
        double sigma_u2 = 1.0;   // noise power (W)
        double sigma_s2 = 0.0;   // secondary transmit power (W)
        double sigma_t2 = 1.0;   // transmit channel gain
    };

    /// Smallest sample count for which the Gaussian detector model is accepted.
    static constexpr int kMinSamples = 50;

    explicit RadioParams(const Fields& f);

    int ns() const { return f_.ns; }
    double gamma_s() const { return f_.gamma_s; }
    double chi2() const { return f_.chi2; }
    double sigma_u2() const { return f_.sigma_u2; }
    double sigma_s2() const { return f_.sigma_s2; }
    double sigma_t2() const { return f_.sigma_t2; }
    const Fields& fields() const { return f_; }

    double gamma_i() const { return f_.chi2 * f_.sigma_s2 / f_.sigma_u2; }
    double gamma_t() const { return f_.sigma_s2 * f_.sigma_t2 / f_.sigma_u2; }

    RadioParams with_sigma_s2(double sigma_s2) const;
    RadioParams with_chi2(double chi2) const;

private:
    Fields f_;
};

/// The four detector hypotheses: first digit SU activity, second PU activity.
enum class Hypothesis { H00, H01, H10, H11 };

inline constexpr std::array<Hypothesis, 4> kAllHypotheses{Hypothesis::H00, Hypothesis::H01,
                                                          Hypothesis::H10, Hypothesis::H11};

std::string_view to_string(Hypothesis h);

/// Gaussian approximation of the energy statistic M under one hypothesis.
struct HypothesisStats {
    double mean;
    double var;
};

/// Per-sample received power under hypothesis `h`.
double received_power(const RadioParams& p, Hypothesis h);

HypothesisStats hypothesis_stats(const RadioParams& p, Hypothesis h);

/// Detection thresholds for a silent (eps0) and a transmitting (eps1) SU.
struct ThresholdPair {
    double eps0;
    double eps1;
};

/// False-alarm and miss-detection probabilities for both SU activities.
class ErrorProfile {
public:
    ErrorProfile(double pf0, double pm0, double pf1, double pm1);

    static ErrorProfile perfect() { return ErrorProfile(0.0, 0.0, 0.0, 0.0); }

    double pf0() const { return pf0_; }
    double pm0() const { return pm0_; }
    double pf1() const { return pf1_; }
    double pm1() const { return pm1_; }
    double xi() const { return 1.0 - pf0_ + pf1_; }
    double zeta() const { return 1.0 + pm0_ - pm1_; }

private:
    double pf0_, pm0_, pf1_, pm1_;
};

ErrorProfile error_probs(const RadioParams& p, const ThresholdPair& th);

/// False-alarm probability of a silent SU whose miss probability is pm.
double pf0_of_pm(double pm, const RadioParams& p);

/// False-alarm probability of a transmitting SU whose miss probability is pm.
double pf1_of_pm(double pm, const RadioParams& p);

/// Thresholds giving miss probability pm in both SU states.
ThresholdPair thresholds_from_pm(double pm, const RadioParams& p);

/// Error profile induced by thresholds_from_pm(pm, p), evaluated in closed form.
ErrorProfile profile_from_pm(double pm, const RadioParams& p);

enum class PmMode { Exact, Approx };

std::string_view to_string(PmMode m);

/// Miss probability meeting a collision-ratio constraint. Approx mode is
/// pc - nu/2; exact mode solves the collision-ratio equation for a common
/// miss probability by bisection.
double required_pm(double constraint_pc, const TransitionProbs& t, PmMode mode,
                   const RadioParams& p);

/// Approx-mode shortcut that needs no radio parameters.
double required_pm_approx(double constraint_pc, const TransitionProbs& t);

}  // namespace latcr
