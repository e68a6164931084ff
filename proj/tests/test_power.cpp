#include <doctest.h>

#include <cmath>
#include <random>

#include "latcr/errors.hpp"
#include "latcr/markov.hpp"
#include "latcr/power.hpp"
#include "latcr/sensing.hpp"

using namespace latcr;

namespace {

const double kGammaS = std::pow(10.0, -0.5);
const TransitionProbs kTraffic(1.0 / 500, 6.0 / 500);
constexpr double kPm = 0.094;

RadioParams fig4(double chi2, double sigma_s2 = 10.0) {
    RadioParams::Fields f;
    f.ns = 300;
    f.gamma_s = kGammaS;
    f.chi2 = chi2;
    f.sigma_s2 = sigma_s2;
    f.sigma_t2 = 10.0;
    return RadioParams(f);
}

double central_difference(const RadioParams& p, const TransitionProbs& t, double pm) {
    const double s = p.sigma_s2();
    const double h = s * 1e-5;
    return (throughput(p.with_sigma_s2(s + h), t, pm).c - throughput(p.with_sigma_s2(s - h), t, pm).c) /
           (2 * h);
}

}  // namespace

TEST_CASE("throughput without waste is the link rate") {
    // Pm -> 0 and pf -> 0 are not reachable; use the definition instead.
    const auto p = fig4(0.0, 0.1);  // gamma_t = 1
    const auto tp = throughput(p, kTraffic, kPm);
    CHECK(tp.rate == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(tp.c == doctest::Approx(tp.rate * (1 - tp.waste)).epsilon(1e-12));
    CHECK(tp.waste == doctest::Approx(waste_ratio(profile_from_pm(kPm, p), kTraffic)).epsilon(1e-12));
}

TEST_CASE("derivative against central differences") {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int k = 0; k < 20; ++k) {
        RadioParams::Fields f;
        f.ns = 100 + static_cast<int>(400 * u(rng));
        f.gamma_s = std::pow(10.0, -1.5 + u(rng));
        f.chi2 = std::pow(10.0, -3.5 + 3 * u(rng));
        f.sigma_u2 = 0.5 + u(rng);
        f.sigma_s2 = 1.0;
        f.sigma_t2 = 1.0 + 9 * u(rng);
        const RadioParams base(f);
        const double mu = std::pow(10.0, -3.5 + 2 * u(rng));
        const TransitionProbs t(mu, mu * (1 + 9 * u(rng)));
        const double pm = 0.02 + 0.2 * u(rng);
        for (double db = -10; db <= 40; db += 2.5) {
            const auto p = base.with_sigma_s2(f.sigma_u2 * std::pow(10.0, db / 10));
            const double exact = dthroughput(p, t, pm);
            const double fd = central_difference(p, t, pm);
            const double scale = std::abs(throughput(p, t, pm).c) / p.sigma_s2();
            CHECK(std::abs(exact - fd) <= 1e-4 * std::max(std::abs(exact), scale));
            CHECK(dthroughput_compact(p, t, pm) == doctest::Approx(exact).epsilon(1e-12));
        }
    }
}

TEST_CASE("rho reproduces the transmitting false alarm") {
    for (double chi2 : {0.0, 0.001, 0.1, 0.9}) {
        const auto p = fig4(chi2, 30.0);
        const auto d = derivative_terms(p, kTraffic, kPm);
        CHECK(d.pf1 == doctest::Approx(pf1_of_pm(kPm, p)).epsilon(1e-12));
        CHECK(d.pf0 == doctest::Approx(pf0_of_pm(kPm, p)).epsilon(1e-12));
    }
}

TEST_CASE("ideal cancellation: throughput increases with power") {
    const auto p = fig4(0.0);
    for (double db = -20; db <= 60; db += 0.5) {
        CHECK(dthroughput(p.with_sigma_s2(std::pow(10.0, db / 10)), kTraffic, kPm) > 0.0);
    }
    CHECK_FALSE(optimal_power(p, kTraffic, kPm, PowerSearch::defaults(1.0)).exists);
}

TEST_CASE("local optima against frozen finite-difference roots") {
    struct Case {
        double chi2, max, min;
    };
    for (const Case c : {Case{0.1, 9.924164600456544, 46.36192937597103},
                         Case{0.01, 79.13935854550016, 625.8536287144011},
                         Case{0.001, 687.8269991528169, 7687.5237552501385}}) {
        const auto r = optimal_power(fig4(c.chi2), kTraffic, kPm, PowerSearch::defaults(1.0));
        REQUIRE(r.exists);
        CHECK(*r.local_max == doctest::Approx(c.max).epsilon(1e-5));
        CHECK(*r.local_min == doctest::Approx(c.min).epsilon(1e-5));
        CHECK(*r.local_max < *r.local_min);
        const auto p = fig4(c.chi2);
        const double cmax = throughput(p.with_sigma_s2(*r.local_max), kTraffic, kPm).c;
        CHECK(*r.c_at_max == doctest::Approx(cmax));
        CHECK(cmax >= throughput(p.with_sigma_s2(*r.local_max * 1.01), kTraffic, kPm).c);
        CHECK(cmax >= throughput(p.with_sigma_s2(*r.local_max * 0.99), kTraffic, kPm).c);
        const double cmin = throughput(p.with_sigma_s2(*r.local_min), kTraffic, kPm).c;
        CHECK(cmin <= throughput(p.with_sigma_s2(*r.local_min * 1.01), kTraffic, kPm).c);
        CHECK(cmin <= throughput(p.with_sigma_s2(*r.local_min * 0.99), kTraffic, kPm).c);
    }
}

TEST_CASE("derivative sign alternates around the optima") {
    const auto p = fig4(0.01);
    const auto r = optimal_power(p, kTraffic, kPm, PowerSearch::defaults(1.0));
    REQUIRE(r.exists);
    CHECK(dthroughput(p.with_sigma_s2(*r.local_max * 0.8), kTraffic, kPm) > 0);
    CHECK(dthroughput(p.with_sigma_s2(std::sqrt(*r.local_max * *r.local_min)), kTraffic, kPm) < 0);
    CHECK(dthroughput(p.with_sigma_s2(*r.local_min * 1.25), kTraffic, kPm) > 0);
}

TEST_CASE("search validation") {
    CHECK_THROWS_AS(optimal_power(fig4(0.01), kTraffic, kPm, PowerSearch{1.0, 100.0, 50}), Error);
    CHECK_THROWS_AS(optimal_power(fig4(0.01), kTraffic, kPm, PowerSearch{10.0, 1.0, 400}), Error);
    const auto g = PowerSearch::from_db(-10, 10, 101, 2.0).grid();
    REQUIRE(g.size() == 101);
    CHECK(g.front() == doctest::Approx(0.2));
    CHECK(g.back() == doctest::Approx(20.0));
    CHECK(g[50] == doctest::Approx(2.0));
}

TEST_CASE("small-mu stationarity collapses onto the exact root") {
    const TransitionProbs t(1e-6, 6e-6);
    for (double chi2 : {0.1, 0.01, 0.001}) {
        const auto p = fig4(chi2);
        const auto r = optimal_power(p, t, kPm, PowerSearch::defaults(1.0));
        REQUIRE(r.exists);
        const auto s = small_mu_sides(p.with_sigma_s2(*r.local_max), t, kPm);
        CHECK(std::abs(s.left - s.right) <= 1e-6 * std::min(s.left, s.right));
    }
}

TEST_CASE("existence curves") {
    const auto p = fig4(0.1);
    const std::vector<double> grid{0.01, 0.1, 0.5, 0.8, 0.9, 1.5};
    const auto pts = existence_curves(p, kTraffic, kPm, grid);
    REQUIRE(pts.size() == grid.size());
    CHECK(pts[0].solutions());
    CHECK(pts[3].solutions());
    CHECK_FALSE(pts[4].solutions());
    CHECK_FALSE(pts[5].solutions());
    for (const auto& e : pts) CHECK(e.chi2 > 0.0);
    // Lower RSI leaves more room between the two sides.
    CHECK(pts[0].left_max / pts[0].right_at_argmax > pts[1].left_max / pts[1].right_at_argmax);
    const double x = existence_crossing(p, kTraffic, kPm, 0.5, 1.5);
    CHECK(x == doctest::Approx(0.86547454).epsilon(1e-6));
    CHECK_THROWS_AS(existence_crossing(p, kTraffic, kPm, 0.1, 0.5), Error);
}

TEST_CASE("existence test agrees with the solver away from the threshold") {
    for (double chi2 : {0.001, 0.01, 0.1, 0.3, 0.6}) {
        const auto p = fig4(chi2);
        const auto e = existence_point(p, kTraffic, kPm, chi2);
        const auto r = optimal_power(p, kTraffic, kPm, PowerSearch::defaults(1.0));
        CHECK(e.solutions() == r.exists);
    }
    for (double chi2 : {2.0, 5.0}) {
        const auto p = fig4(chi2);
        CHECK_FALSE(existence_point(p, kTraffic, kPm, chi2).solutions());
        CHECK_FALSE(optimal_power(p, kTraffic, kPm, PowerSearch::defaults(1.0)).exists);
    }
}
