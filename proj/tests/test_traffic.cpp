#include <doctest.h>

#include <cmath>
#include <numeric>

#include "latcr/errors.hpp"
#include "latcr/traffic.hpp"

using namespace latcr;

TEST_CASE("transition probabilities from mean holding times") {
    // 1 - exp(-1) and 1 - exp(-1/500), computed with mpmath.
    const auto a = transition_probs(PuTraffic(1.0, 1.0, 1.0));
    CHECK(a.mu() == doctest::Approx(0.63212055882855768).epsilon(1e-15));
    const auto b = transition_probs(PuTraffic(500.0, 250.0, 1.0));
    CHECK(b.mu() == doctest::Approx(0.0019980013326669332).epsilon(1e-14));
    CHECK(b.nu() == doctest::Approx(-std::expm1(-1.0 / 250.0)).epsilon(1e-14));
}

TEST_CASE("derived ratios") {
    const TransitionProbs t(0.002, 0.012);
    CHECK(t.r() == doctest::Approx(6.0));
    CHECK(t.delta() == doctest::Approx(1.0 + 6.0 - 500.0));
    CHECK(t.busy() + t.idle() == doctest::Approx(1.0));
    CHECK(t.busy() == doctest::Approx(1.0 / 7.0));
}

TEST_CASE("from_probabilities round trips") {
    for (double mu : {1e-6, 1e-3, 0.05, 0.2}) {
        const auto tr = PuTraffic::from_probabilities(mu, 3.0 * mu, 0.25);
        const auto t = transition_probs(tr);
        CHECK(t.mu() == doctest::Approx(mu).epsilon(1e-12));
        CHECK(t.nu() == doctest::Approx(3.0 * mu).epsilon(1e-12));
        CHECK(tr.slot() == 0.25);
    }
}

TEST_CASE("invalid traffic is rejected") {
    CHECK_THROWS_AS(PuTraffic(0.5, 10.0, 1.0), Error);
    CHECK_THROWS_AS(PuTraffic(10.0, 0.5, 1.0), Error);
    CHECK_THROWS_AS(PuTraffic(10.0, 10.0, 0.0), Error);
    CHECK_THROWS_AS(TransitionProbs(0.0, 0.1), Error);
    CHECK_THROWS_AS(TransitionProbs(0.1, 1.0), Error);
    CHECK_NOTHROW(PuTraffic(1.0, 1.0, 1.0));
}

TEST_CASE("sample_trace is deterministic and covers the requested span") {
    const PuTraffic tr(20.0, 5.0, 1.0);
    const auto a = sample_trace(tr, 10000.0, 42);
    const auto b = sample_trace(tr, 10000.0, 42);
    const auto c = sample_trace(tr, 10000.0, 43);
    REQUIRE(a.intervals.size() == b.intervals.size());
    for (std::size_t i = 0; i < a.intervals.size(); ++i) {
        CHECK(a.intervals[i].duration == b.intervals[i].duration);
        CHECK(a.intervals[i].state == b.intervals[i].state);
    }
    CHECK(a.intervals.front().duration != c.intervals.front().duration);
    const double sum = std::accumulate(a.intervals.begin(), a.intervals.end(), 0.0,
                                       [](double s, const PuInterval& iv) { return s + iv.duration; });
    CHECK(sum == doctest::Approx(10000.0).epsilon(1e-12));
    for (std::size_t i = 1; i < a.intervals.size(); ++i) {
        CHECK(a.intervals[i].state != a.intervals[i - 1].state);
    }
}

TEST_CASE("sample_trace holding times and busy fraction") {
    const PuTraffic tr(20.0, 5.0, 1.0);
    const auto trace = sample_trace(tr, 2e6, 7);
    double busy = 0.0, idle_sum = 0.0;
    int idle_n = 0;
    // Skip the truncated first and last intervals.
    for (std::size_t i = 1; i + 1 < trace.intervals.size(); ++i) {
        const auto& iv = trace.intervals[i];
        if (iv.state == PuState::Busy) {
            busy += iv.duration;
        } else {
            idle_sum += iv.duration;
            ++idle_n;
        }
    }
    // ~80000 idle intervals: the mean has relative s.e. ~0.35%.
    CHECK(idle_sum / idle_n == doctest::Approx(20.0).epsilon(0.015));
    CHECK(busy / 2e6 == doctest::Approx(tr.busy_fraction()).epsilon(0.02));
}

TEST_CASE("slotize splits intervals exactly") {
    PuTrace t;
    t.intervals = {{PuState::Idle, 1.5}, {PuState::Busy, 2.0}, {PuState::Idle, 0.5}};
    t.total = 4.0;
    const auto s = slotize(t, 1.0);
    REQUIRE(s.size() == 4);
    CHECK(s[0].busy_fraction == 0.0);
    CHECK(s[0].transitions == 0);
    CHECK(s[1].busy_fraction == doctest::Approx(0.5));
    CHECK(s[1].transitions == 1);
    CHECK(s[2].busy_fraction == doctest::Approx(1.0));
    CHECK(s[2].transitions == 0);
    CHECK(s[3].busy_fraction == doctest::Approx(0.5));
    CHECK(s[3].transitions == 1);
}

TEST_CASE("slot transition frequency matches mu") {
    const auto tr = PuTraffic::from_probabilities(0.05, 0.2, 1.0);
    const auto slots = slotize(sample_trace(tr, 4e5, 3), 1.0);
    // A slot whose start is idle sees an arrival inside it with probability mu.
    // Approximate the start state from the previous slot's end: use slots with
    // no transition before and count arrivals after fully idle slots.
    int idle_prev = 0, arrivals = 0;
    for (std::size_t i = 1; i < slots.size(); ++i) {
        if (slots[i - 1].busy_fraction == 0.0) {
            ++idle_prev;
            if (slots[i].transitions > 0) ++arrivals;
        }
    }
    const double p = static_cast<double>(arrivals) / idle_prev;
    const double se = std::sqrt(0.05 * 0.95 / idle_prev);
    CHECK(std::abs(p - 0.05) < 4 * se);
}
