#include "latcr/markov.hpp"

#include <cmath>
#include <utility>

#include "latcr/errors.hpp"

namespace latcr {

TransitionMatrix::TransitionMatrix(const Matrix4& psi) : psi_(psi) {
    for (int from = 0; from < 4; ++from) {
        double sum = 0.0;
        for (int to = 0; to < 4; ++to) {
            const double v = psi[to][from];
            if (!(v >= -1e-15 && v <= 1.0 + 1e-15)) {
                fail(ErrorKind::ColumnSumViolation, "transition matrix entry outside [0, 1]");
            }
            sum += v;
        }
        if (std::abs(sum - 1.0) > 1e-9) {
            fail(ErrorKind::ColumnSumViolation, "transition matrix column does not sum to 1");
        }
    }
}

TransitionMatrix build_transition_matrix(const ErrorProfile& e, const TransitionProbs& t) {
    const double mu = t.mu();
    const double nu = t.nu();
    const double pf0 = e.pf0(), pm0 = e.pm0(), pf1 = e.pf1(), pm1 = e.pm1();
    // Columns: the SU's decision at the end of slot k fixes its activity in
    // slot k+1; the PU moves independently with (mu, nu).
    // The S1 -> S0 entry is (1 - pm0) * nu: the PU is detected, then leaves.
    Matrix4 psi{{
        {pf0 * (1 - mu), (1 - pm0) * nu, pf1 * (1 - mu), (1 - pm1) * nu},
        {pf0 * mu, (1 - pm0) * (1 - nu), pf1 * mu, (1 - pm1) * (1 - nu)},
        {(1 - pf0) * (1 - mu), pm0 * nu, (1 - pf1) * (1 - mu), pm1 * nu},
        {(1 - pf0) * mu, pm0 * (1 - nu), (1 - pf1) * mu, pm1 * (1 - nu)},
    }};
    return TransitionMatrix(psi);
}

SteadyState steady_state_numeric(const TransitionMatrix& m) {
    // (psi - I) p = 0 with the last balance row replaced by sum(p) = 1.
    std::array<std::array<double, 5>, 4> a{};
    for (int i = 0; i < 4; ++i) {
        for (int j = 0; j < 4; ++j) a[i][j] = m.at(i, j) - (i == j ? 1.0 : 0.0);
        a[i][4] = 0.0;
    }
    for (int j = 0; j < 4; ++j) a[3][j] = 1.0;
    a[3][4] = 1.0;

    for (int col = 0; col < 4; ++col) {
        int pivot = col;
        for (int r = col + 1; r < 4; ++r) {
            if (std::abs(a[r][col]) > std::abs(a[pivot][col])) pivot = r;
        }
        if (std::abs(a[pivot][col]) < 1e-14) {
            fail(ErrorKind::SingularSystem, "steady state: chain is reducible or degenerate");
        }
        std::swap(a[col], a[pivot]);
        for (int r = col + 1; r < 4; ++r) {
            const double f = a[r][col] / a[col][col];
            for (int c = col; c < 5; ++c) a[r][c] -= f * a[col][c];
        }
    }
    SteadyState s;
    for (int i = 3; i >= 0; --i) {
        double v = a[i][4];
        for (int j = i + 1; j < 4; ++j) v -= a[i][j] * s.p[j];
        s.p[i] = v / a[i][i];
    }
    for (double& v : s.p) {
        if (v < 0.0 && v > -1e-13) v = 0.0;
    }
    return s;
}

namespace {

double checked_denominator(const ErrorProfile& e, const TransitionProbs& t) {
    const double den = (1.0 - e.xi() * t.delta()) * e.zeta() + e.xi() * t.r();
    if (!(std::abs(den) > 1e-12)) {
        fail(ErrorKind::DegenerateDenominator, "closed form: (1 - xi*delta)*zeta + xi*r vanishes");
    }
    return den;
}

}  // namespace

SteadyState steady_state_closed_form(const ErrorProfile& e, const TransitionProbs& t) {
    const double den = checked_denominator(e, t);
    const double r = t.r();
    const double delta = t.delta();
    const double xi = e.xi();
    const double zeta = e.zeta();
    const double scale = 1.0 / ((r + 1.0) * den);
    SteadyState s;
    s.p[0] = scale * r * (e.pf1() * (r - zeta * delta) + 1.0 - e.pm1());
    s.p[1] = scale * ((1.0 - e.pm1()) * (1.0 - xi * delta) + e.pf1() * r);
    s.p[2] = scale * r * ((1.0 - e.pf0()) * (r - zeta * delta) + e.pm0());
    s.p[3] = scale * (e.pm0() * (1.0 - xi * delta) + (1.0 - e.pf0()) * r);
    return s;
}

double collision_ratio(const ErrorProfile& e, const TransitionProbs& t) {
    const double den = checked_denominator(e, t);
    return t.nu() / 2.0 + (e.pm0() * (1.0 - e.xi() * t.delta()) + (1.0 - e.pf0()) * t.r()) / den;
}

double collision_ratio_common_pm(const ErrorProfile& e, const TransitionProbs& t) {
    const double den = 1.0 + (1.0 / t.mu() - 1.0) * e.xi();
    if (!(std::abs(den) > 1e-12)) {
        fail(ErrorKind::DegenerateDenominator, "closed form: 1 + (1/mu - 1)*xi vanishes");
    }
    const double pm = e.pm0();
    return t.nu() / 2.0 + (pm * (1.0 - e.xi() * t.delta()) + (1.0 - e.pf0()) * t.r()) / den;
}

double waste_ratio(const ErrorProfile& e, const TransitionProbs& t) {
    const double den = checked_denominator(e, t);
    // With pm0 = pm1 this is mu/2 + ((1/mu - 1) pf1 + 1 - pm) / (1 + (1/mu - 1) xi).
    return t.mu() / 2.0 + (e.pf1() * (t.r() - e.zeta() * t.delta()) + 1.0 - e.pm1()) / den;
}

UtilizationReport utilization(const ErrorProfile& e, const TransitionProbs& t) {
    return {collision_ratio(e, t), waste_ratio(e, t), steady_state_closed_form(e, t)};
}

}  // namespace latcr
