#pragma once

#include <cstdint>
#include <vector>

namespace latcr {

/// Primary-user alternating busy/idle process with exponential holding times.
/// Mean holding times shorter than one slot are rejected.
class PuTraffic {
public:
    /// Mean idle duration, mean busy duration and slot length, all in seconds.
    PuTraffic(double tau0, double tau1, double slot);

    /// Builds the traffic whose per-slot arrival/departure probabilities are
    /// exactly `mu` and `nu`.
    static PuTraffic from_probabilities(double mu, double nu, double slot);

    double tau0() const { return tau0_; }
    double tau1() const { return tau1_; }
    double slot() const { return slot_; }
    double m0() const { return tau0_ / slot_; }
    double m1() const { return tau1_ / slot_; }
    double busy_fraction() const { return tau1_ / (tau0_ + tau1_); }

private:
    double tau0_;
    double tau1_;
    double slot_;
};

/// Per-slot state-change probabilities of the PU.
class TransitionProbs {
public:
    TransitionProbs(double mu, double nu);

    double mu() const { return mu_; }
    double nu() const { return nu_; }
    double r() const { return nu_ / mu_; }
    double delta() const { return 1.0 + r() - 1.0 / mu_; }
    double busy() const { return mu_ / (mu_ + nu_); }
    double idle() const { return nu_ / (mu_ + nu_); }

private:
    double mu_;
    double nu_;
};

TransitionProbs transition_probs(const PuTraffic& t);

enum class PuState : std::uint8_t { Idle, Busy };

struct PuInterval {
    PuState state;
    double duration;
};

struct PuTrace {
    std::vector<PuInterval> intervals;
    double total = 0.0;
};

/// Draws a trace of length `total` seconds. The first interval starts in the
/// stationary distribution; the last one is truncated at `total`.
PuTrace sample_trace(const PuTraffic& t, double total, std::uint64_t seed);

struct SlotOccupancy {
    double busy_fraction;  // overlap of busy intervals with the slot, divided by slot
    int transitions;       // PU state changes strictly inside the slot
};

std::vector<SlotOccupancy> slotize(const PuTrace& trace, double slot);

}  // namespace latcr
