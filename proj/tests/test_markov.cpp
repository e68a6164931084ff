#include <doctest.h>

#include <cmath>
#include <random>

#include "latcr/errors.hpp"
#include "latcr/markov.hpp"

using namespace latcr;

namespace {

// Independent oracle: repeated multiplication by psi.
std::array<double, 4> power_iterate(const TransitionMatrix& m) {
    std::array<double, 4> p{0.25, 0.25, 0.25, 0.25};
    for (int it = 0; it < 200000; ++it) {
        std::array<double, 4> next{};
        for (int i = 0; i < 4; ++i) {
            for (int j = 0; j < 4; ++j) next[i] += m.at(i, j) * p[j];
        }
        double diff = 0.0;
        for (int i = 0; i < 4; ++i) diff = std::max(diff, std::abs(next[i] - p[i]));
        p = next;
        if (diff < 1e-16) break;
    }
    return p;
}

struct Random {
    std::mt19937_64 rng{2024};
    double uniform(double a, double b) { return std::uniform_real_distribution<double>(a, b)(rng); }
    double log_uniform(double a, double b) { return std::exp(uniform(std::log(a), std::log(b))); }
};

}  // namespace

TEST_CASE("transition matrix columns are distributions") {
    const ErrorProfile e(0.05, 0.1, 0.2, 0.15);
    const auto m = build_transition_matrix(e, TransitionProbs(0.01, 0.05));
    for (int j = 0; j < 4; ++j) {
        double s = 0.0;
        for (int i = 0; i < 4; ++i) s += m.at(i, j);
        CHECK(s == doctest::Approx(1.0).epsilon(1e-15));
    }
    // After a PU-only slot, waste follows when the silent SU detects the PU
    // (so stays silent) and the PU then leaves.
    CHECK(m.at(0, 1) == doctest::Approx((1 - 0.1) * 0.05));
}

TEST_CASE("invalid matrices are rejected") {
    Matrix4 bad{};
    for (int j = 0; j < 4; ++j) bad[0][j] = 1.0;
    bad[1][2] = 0.1;
    try {
        TransitionMatrix m(bad);
        FAIL("expected a column sum violation");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::ColumnSumViolation);
    }
}

TEST_CASE("steady state with perfect sensing, frozen") {
    const TransitionProbs t(1.0 / 500, 6.0 / 500);
    const std::array<double, 4> expect{0.0017142857142857143, 0.14114285714285714,
                                       0.85542857142857143, 0.0017142857142857143};
    const auto closed = steady_state_closed_form(ErrorProfile::perfect(), t);
    const auto numeric = steady_state_numeric(build_transition_matrix(ErrorProfile::perfect(), t));
    for (int i = 0; i < 4; ++i) {
        CHECK(closed.p[i] == doctest::Approx(expect[i]).epsilon(1e-13));
        CHECK(numeric.p[i] == doctest::Approx(expect[i]).epsilon(1e-13));
    }
}

TEST_CASE("steady state of an always-transmitting SU, frozen") {
    const TransitionProbs t(1.0 / 500, 6.0 / 500);
    const ErrorProfile e(0.0, 1.0, 0.0, 1.0);
    const auto s = steady_state_closed_form(e, t);
    CHECK(s.p[0] == doctest::Approx(0.0).epsilon(1e-15));
    CHECK(s.p[1] == doctest::Approx(0.0).epsilon(1e-15));
    CHECK(s.p[2] == doctest::Approx(0.85714285714285714).epsilon(1e-13));
    CHECK(s.p[3] == doctest::Approx(0.14285714285714286).epsilon(1e-13));
}

TEST_CASE("closed form, numeric solve and power iteration agree") {
    Random r;
    for (int k = 0; k < 50; ++k) {
        const double mu = r.log_uniform(1e-3, 0.05);
        const TransitionProbs t(mu, mu * r.uniform(1.0, 10.0));
        const ErrorProfile e(r.uniform(0.001, 0.5), r.uniform(0.001, 0.5), r.uniform(0.001, 0.5),
                             r.uniform(0.001, 0.5));
        const auto m = build_transition_matrix(e, t);
        const auto closed = steady_state_closed_form(e, t);
        const auto numeric = steady_state_numeric(m);
        const auto iter = power_iterate(m);
        for (int i = 0; i < 4; ++i) {
            CHECK(closed.p[i] == doctest::Approx(numeric.p[i]).epsilon(1e-10));
            CHECK(closed.p[i] == doctest::Approx(iter[i]).epsilon(1e-9));
        }
        CHECK(closed.busy() == doctest::Approx(t.busy()).epsilon(1e-12));
    }
}

TEST_CASE("perfect sensing ratios") {
    for (double mu : {1e-4, 0.002, 0.05}) {
        const TransitionProbs t(mu, 6 * mu);
        CHECK(collision_ratio(ErrorProfile::perfect(), t) == doctest::Approx(1.5 * t.nu()).epsilon(1e-12));
        CHECK(waste_ratio(ErrorProfile::perfect(), t) == doctest::Approx(1.5 * t.mu()).epsilon(1e-12));
    }
}

TEST_CASE("collision and waste ratios against the steady state") {
    // Pc is collision slots over busy slots plus a half slot per arrival; Pw
    // likewise over idle slots with a half slot per departure.
    Random r;
    for (int k = 0; k < 20; ++k) {
        const double mu = r.log_uniform(1e-3, 0.05);
        const TransitionProbs t(mu, mu * r.uniform(1.0, 10.0));
        const double pm = r.uniform(0.01, 0.4);
        const ErrorProfile e(r.uniform(0.001, 0.3), pm, r.uniform(0.001, 0.3), pm);
        const auto s = steady_state_closed_form(e, t);
        CHECK(collision_ratio(e, t) == doctest::Approx(collision_ratio_common_pm(e, t)).epsilon(1e-12));
        const auto u = utilization(e, t);
        CHECK(u.pc == collision_ratio(e, t));
        CHECK(u.pw == waste_ratio(e, t));
        CHECK(u.steady.p == s.p);
        CHECK(u.pc > 0.0);
        CHECK(u.pw < 1.0);
    }
}

TEST_CASE("collision ratio grows with the miss probability") {
    const TransitionProbs t(0.002, 0.012);
    double prev = 0.0;
    for (double pm = 0.01; pm < 0.9; pm += 0.05) {
        const double pc = collision_ratio(ErrorProfile(0.01, pm, 0.05, pm), t);
        CHECK(pc > prev);
        prev = pc;
    }
}

TEST_CASE("degenerate denominator is reported") {
    // xi = 0 and zeta = 0: the SU never changes its mind.
    const ErrorProfile e(1.0, 0.0, 0.0, 1.0);
    try {
        steady_state_closed_form(e, TransitionProbs(0.01, 0.05));
        FAIL("expected a degenerate denominator");
    } catch (const Error& err) {
        CHECK(err.kind() == ErrorKind::DegenerateDenominator);
    }
    CHECK_THROWS_AS(steady_state_numeric(build_transition_matrix(e, TransitionProbs(0.01, 0.05))), Error);
}
