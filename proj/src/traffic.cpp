#include "latcr/traffic.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <string>

#include "latcr/errors.hpp"

namespace latcr {

PuTraffic::PuTraffic(double tau0, double tau1, double slot)
    : tau0_(tau0), tau1_(tau1), slot_(slot) {
    require(tau0 > 0.0 && tau1 > 0.0 && slot > 0.0,
            "PuTraffic: tau0, tau1 and slot must be positive");
    // Tolerate round-off from from_probabilities at exactly one slot.
    constexpr double slack = 1e-12;
    require(tau0 / slot >= 1.0 - slack && tau1 / slot >= 1.0 - slack,
            "PuTraffic: mean holding times must span at least one slot (m0, m1 >= 1)");
}

PuTraffic PuTraffic::from_probabilities(double mu, double nu, double slot) {
    const TransitionProbs probs(mu, nu);
    return PuTraffic(-slot / std::log1p(-probs.mu()), -slot / std::log1p(-probs.nu()), slot);
}

TransitionProbs::TransitionProbs(double mu, double nu) : mu_(mu), nu_(nu) {
    require(mu > 0.0 && mu < 1.0, "TransitionProbs: mu must lie in (0, 1)");
    require(nu > 0.0 && nu < 1.0, "TransitionProbs: nu must lie in (0, 1)");
}

TransitionProbs transition_probs(const PuTraffic& t) {
    return TransitionProbs(-std::expm1(-t.slot() / t.tau0()), -std::expm1(-t.slot() / t.tau1()));
}

PuTrace sample_trace(const PuTraffic& t, double total, std::uint64_t seed) {
    require(total > 0.0, "sample_trace: total must be positive");

    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      0x7261U};
    std::mt19937_64 rng(seq);
    std::exponential_distribution<double> idle_len(1.0 / t.tau0());
    std::exponential_distribution<double> busy_len(1.0 / t.tau1());
    std::bernoulli_distribution start_busy(t.busy_fraction());

    PuTrace trace;
    trace.total = total;
    PuState state = start_busy(rng) ? PuState::Busy : PuState::Idle;
    double elapsed = 0.0;
    while (elapsed < total) {
        const double d = (state == PuState::Busy) ? busy_len(rng) : idle_len(rng);
        if (d <= 0.0) continue;
        if (d >= total - elapsed) {
            trace.intervals.push_back({state, total - elapsed});
            break;
        }
        trace.intervals.push_back({state, d});
        elapsed += d;
        state = (state == PuState::Busy) ? PuState::Idle : PuState::Busy;
    }
    return trace;
}

std::vector<SlotOccupancy> slotize(const PuTrace& trace, double slot) {
    require(slot > 0.0, "slotize: slot must be positive");
    const auto n_slots = static_cast<std::size_t>(std::ceil(trace.total / slot - 1e-9));
    std::vector<SlotOccupancy> out(n_slots, SlotOccupancy{0.0, 0});

    double start = 0.0;
    for (std::size_t i = 0; i < trace.intervals.size(); ++i) {
        const auto& iv = trace.intervals[i];
        const double end = start + iv.duration;
        if (iv.state == PuState::Busy) {
            auto k = static_cast<std::size_t>(start / slot);
            for (; k < n_slots && k * slot < end; ++k) {
                const double lo = std::max(start, k * slot);
                const double hi = std::min(end, (k + 1) * slot);
                if (hi > lo) out[k].busy_fraction += (hi - lo) / slot;
            }
        }
        if (i + 1 < trace.intervals.size()) {
            const auto k = static_cast<std::size_t>(end / slot);
            // A change exactly on a boundary is not inside any slot.
            if (k < n_slots && end > k * slot) ++out[k].transitions;
        }
        start = end;
    }
    for (auto& s : out) s.busy_fraction = std::clamp(s.busy_fraction, 0.0, 1.0);
    return out;
}

}  // namespace latcr
