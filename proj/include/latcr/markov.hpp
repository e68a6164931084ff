#pragma once

#include <array>

#include "latcr/sensing.hpp"
#include "latcr/traffic.hpp"

namespace latcr {

/// Spectrum-utilization states of one slot.
enum class SlotState : int {
    Waste = 0,      // PU idle, SU silent
    PuOnly = 1,     // PU busy, SU silent
    SuOnly = 2,     // PU idle, SU transmitting
    Collision = 3,  // PU busy, SU transmitting
};

using Matrix4 = std::array<std::array<double, 4>, 4>;

/// Column-stochastic transition matrix: at(to, from) is the probability of
/// moving from state `from` in one slot to state `to` in the next.
class TransitionMatrix {
public:
    /// Validates entries in [0, 1] and unit column sums (tolerance 1e-9).
    explicit TransitionMatrix(const Matrix4& psi);

    double at(int to, int from) const { return psi_[to][from]; }
    const Matrix4& data() const { return psi_; }

private:
    Matrix4 psi_;
};

TransitionMatrix build_transition_matrix(const ErrorProfile& e, const TransitionProbs& t);

struct SteadyState {
    std::array<double, 4> p{};

    double operator[](SlotState s) const { return p[static_cast<int>(s)]; }
    double busy() const { return p[1] + p[3]; }
    double idle() const { return p[0] + p[2]; }
};

/// Solves psi * p = p with sum(p) = 1 by Gaussian elimination.
/// Throws SingularSystem for reducible chains.
SteadyState steady_state_numeric(const TransitionMatrix& m);

/// Closed-form stationary vector. Throws DegenerateDenominator when
/// (1 - xi*delta)*zeta + xi*r vanishes.
SteadyState steady_state_closed_form(const ErrorProfile& e, const TransitionProbs& t);

/// Long-run collision ratio including the half-slot collision at each PU arrival.
double collision_ratio(const ErrorProfile& e, const TransitionProbs& t);

/// Collision ratio in the common-miss-probability form (pm0 = pm1 = e.pm0()).
double collision_ratio_common_pm(const ErrorProfile& e, const TransitionProbs& t);

/// Long-run spectrum waste ratio including the half-slot waste at each PU departure.
double waste_ratio(const ErrorProfile& e, const TransitionProbs& t);

struct UtilizationReport {
    double pc;
    double pw;
    SteadyState steady;
};

UtilizationReport utilization(const ErrorProfile& e, const TransitionProbs& t);

}  // namespace latcr
