#include "latcr/sim.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <random>
#include <thread>

#include "latcr/errors.hpp"

namespace latcr {

std::string_view to_string(SimMode m) {
    return m == SimMode::SampleLevel ? "sample_level" : "slot_statistical";
}

namespace {

constexpr int kBatches = 40;

std::mt19937_64 make_rng(std::uint64_t seed, std::uint32_t stream) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      stream};
    return std::mt19937_64(seq);
}

Hypothesis hypothesis_of(bool su_tx, bool pu_busy) {
    if (su_tx) return pu_busy ? Hypothesis::H11 : Hypothesis::H10;
    return pu_busy ? Hypothesis::H01 : Hypothesis::H00;
}

/// Sum of |y|^2 over ns circular complex Gaussian samples of the given power.
class EnergySampler {
public:
    explicit EnergySampler(std::mt19937_64& rng) : rng_(rng) {}

    double sample_power(double power) {
        const double a = normal_(rng_);
        const double b = normal_(rng_);
        return 0.5 * power * (a * a + b * b);
    }

private:
    std::mt19937_64& rng_;
    std::normal_distribution<double> normal_;
};

struct Batch {
    double collision = 0, waste = 0, busy = 0, idle = 0, delivered = 0, total = 0;
};

double ratio_se(const std::vector<Batch>& batches, double Batch::*num, double Batch::*den) {
    double sum_num = 0.0, sum_den = 0.0;
    for (const auto& b : batches) {
        sum_num += b.*num;
        sum_den += b.*den;
    }
    const auto n = static_cast<double>(batches.size());
    if (sum_den <= 0.0 || n < 2) return 0.0;
    const double ratio = sum_num / sum_den;
    const double mean_den = sum_den / n;
    double ss = 0.0;
    for (const auto& b : batches) {
        const double e = b.*num - ratio * b.*den;
        ss += e * e;
    }
    return std::sqrt(ss / (n * (n - 1.0))) / mean_den;
}

void validate(const SimConfig& cfg) {
    require(cfg.slots >= SimConfig::kMinSlots, "SimConfig: at least 1000 slots are required");
    require(cfg.thresholds.eps0 > 0.0 && cfg.thresholds.eps1 > 0.0,
            "SimConfig: thresholds must be positive");
}

void finish(SimMetrics& m, const std::vector<Batch>& batches, double rate) {
    m.empirical_pc = m.pu_busy_time > 0 ? m.collision_time / m.pu_busy_time : 0.0;
    m.empirical_pw = m.pu_idle_time > 0 ? m.waste_time / m.pu_idle_time : 0.0;
    m.throughput = rate * m.delivered_time / m.total_time;
    m.hole_throughput = m.pu_idle_time > 0 ? rate * m.delivered_time / m.pu_idle_time : 0.0;
    m.pc_se = ratio_se(batches, &Batch::collision, &Batch::busy);
    m.pw_se = ratio_se(batches, &Batch::waste, &Batch::idle);
    m.throughput_se = rate * ratio_se(batches, &Batch::delivered, &Batch::total);
    m.hole_throughput_se = rate * ratio_se(batches, &Batch::delivered, &Batch::idle);
}

SimMetrics run_sample_level(const SimConfig& cfg, std::vector<SlotRecord>* log) {
    const double slot = cfg.traffic.slot();
    const RadioParams& radio = cfg.radio;
    const int ns = radio.ns();
    const double noise = radio.sigma_u2();
    const double pu_power = radio.gamma_s() * noise;
    const double rsi_power = radio.gamma_i() * noise;

    const PuTrace trace = sample_trace(cfg.traffic, static_cast<double>(cfg.slots) * slot, cfg.seed);
    const std::vector<SlotOccupancy> occ = slotize(trace, slot);

    auto rng = make_rng(cfg.seed, 0x5a3cU);
    EnergySampler sampler(rng);

    SimMetrics m;
    m.slots = cfg.slots;
    std::vector<Batch> batches(kBatches);
    const std::int64_t per_batch = (cfg.slots + kBatches - 1) / kBatches;

    std::size_t iv = 0;
    double iv_end = trace.intervals[0].duration;
    bool su_tx = false;

    for (std::int64_t k = 0; k < cfg.slots; ++k) {
        const double f = occ[static_cast<std::size_t>(k)].busy_fraction;
        const bool steady = occ[static_cast<std::size_t>(k)].transitions == 0;
        Batch& b = batches[static_cast<std::size_t>(k / per_batch)];

        const double busy_t = f * slot;
        const double idle_t = slot - busy_t;
        b.busy += busy_t;
        b.idle += idle_t;
        b.total += slot;
        if (su_tx) {
            b.collision += busy_t;
            b.delivered += idle_t;
            m.su_tx_time += slot;
        } else {
            b.waste += idle_t;
        }

        const double base = noise + (su_tx ? rsi_power : 0.0);
        double energy = 0.0;
        const double slot_start = static_cast<double>(k) * slot;
        for (int n = 0; n < ns; ++n) {
            const double t = slot_start + (n + 0.5) * slot / ns;
            while (t >= iv_end && iv + 1 < trace.intervals.size()) {
                ++iv;
                iv_end += trace.intervals[iv].duration;
            }
            const bool busy = trace.intervals[iv].state == PuState::Busy;
            energy += sampler.sample_power(base + (busy ? pu_power : 0.0));
        }
        const double stat = energy / ns;
        const bool occupied = stat >= (su_tx ? cfg.thresholds.eps1 : cfg.thresholds.eps0);

        if (steady) {
            auto& tally = m.steady_tally[static_cast<int>(hypothesis_of(su_tx, f > 0.5))];
            ++tally.slots;
            tally.occupied += occupied ? 1 : 0;
        }
        if (log) log->push_back({f, su_tx, occupied});
        su_tx = !occupied;
    }

    for (const auto& b : batches) {
        m.collision_time += b.collision;
        m.waste_time += b.waste;
        m.pu_busy_time += b.busy;
        m.pu_idle_time += b.idle;
        m.delivered_time += b.delivered;
        m.total_time += b.total;
    }
    finish(m, batches, std::log2(1.0 + radio.gamma_t()));
    return m;
}

// Follows the analytical model's own assumptions: the PU changes state only
// at slot boundaries, each decision is a coin with the closed-form error
// probability, and every arrival (departure) adds half a slot of collision
// (waste).
SimMetrics run_slot_statistical(const SimConfig& cfg, std::vector<SlotRecord>* log) {
    const double slot = cfg.traffic.slot();
    const TransitionProbs probs = transition_probs(cfg.traffic);
    const ErrorProfile e = error_probs(cfg.radio, cfg.thresholds);

    auto rng = make_rng(cfg.seed, 0x51a7U);
    std::uniform_real_distribution<double> unit(0.0, 1.0);

    SimMetrics m;
    m.slots = cfg.slots;
    std::vector<Batch> batches(kBatches);
    const std::int64_t per_batch = (cfg.slots + kBatches - 1) / kBatches;

    bool pu_busy = unit(rng) < probs.busy();
    bool su_tx = false;
    for (std::int64_t k = 0; k < cfg.slots; ++k) {
        Batch& b = batches[static_cast<std::size_t>(k / per_batch)];
        b.total += slot;
        if (pu_busy) {
            b.busy += slot;
            if (su_tx) b.collision += slot;
        } else {
            b.idle += slot;
            if (su_tx) {
                b.delivered += slot;
            } else {
                b.waste += slot;
            }
        }
        if (su_tx) m.su_tx_time += slot;

        const double u = unit(rng);
        bool occupied;
        if (pu_busy) {
            occupied = u >= (su_tx ? e.pm1() : e.pm0());
        } else {
            occupied = u < (su_tx ? e.pf1() : e.pf0());
        }
        auto& tally = m.steady_tally[static_cast<int>(hypothesis_of(su_tx, pu_busy))];
        ++tally.slots;
        tally.occupied += occupied ? 1 : 0;
        if (log) log->push_back({pu_busy ? 1.0 : 0.0, su_tx, occupied});

        su_tx = !occupied;
        if (pu_busy) {
            if (unit(rng) < probs.nu()) {
                pu_busy = false;
                b.waste += 0.5 * slot;
            }
        } else if (unit(rng) < probs.mu()) {
            pu_busy = true;
            b.collision += 0.5 * slot;
        }
    }

    for (const auto& b : batches) {
        m.collision_time += b.collision;
        m.waste_time += b.waste;
        m.pu_busy_time += b.busy;
        m.pu_idle_time += b.idle;
        m.delivered_time += b.delivered;
        m.total_time += b.total;
    }
    finish(m, batches, std::log2(1.0 + cfg.radio.gamma_t()));
    return m;
}

SimMetrics run_impl(const SimConfig& cfg, std::vector<SlotRecord>* log) {
    validate(cfg);
    if (log) {
        log->clear();
        log->reserve(static_cast<std::size_t>(cfg.slots));
    }
    return cfg.mode == SimMode::SampleLevel ? run_sample_level(cfg, log)
                                            : run_slot_statistical(cfg, log);
}

}  // namespace

SimMetrics run(const SimConfig& cfg) { return run_impl(cfg, nullptr); }

SimMetrics run_logged(const SimConfig& cfg, std::vector<SlotRecord>& log) {
    return run_impl(cfg, &log);
}

std::vector<SimMetrics> run_batch(std::span<const SimConfig> cfgs) {
    require(!cfgs.empty(), "run_batch: config list must be nonempty");
    for (const auto& c : cfgs) validate(c);

    std::vector<SimMetrics> out(cfgs.size());
    std::atomic<std::size_t> next{0};
    const unsigned hw = std::max(1U, std::thread::hardware_concurrency());
    const auto workers = static_cast<unsigned>(std::min<std::size_t>(hw, cfgs.size()));
    {
        std::vector<std::jthread> pool;
        for (unsigned w = 0; w < workers; ++w) {
            pool.emplace_back([&] {
                for (std::size_t i = next++; i < cfgs.size(); i = next++) out[i] = run(cfgs[i]);
            });
        }
    }
    return out;
}

DetectorTally detector_trials(const RadioParams& p, Hypothesis h, double threshold,
                              std::int64_t slots, std::uint64_t seed) {
    require(slots > 0, "detector_trials: slots must be positive");
    auto rng = make_rng(seed, 0xde7eU);
    EnergySampler sampler(rng);
    const double power = received_power(p, h);
    DetectorTally tally;
    for (std::int64_t k = 0; k < slots; ++k) {
        double energy = 0.0;
        for (int n = 0; n < p.ns(); ++n) energy += sampler.sample_power(power);
        ++tally.slots;
        if (energy / p.ns() >= threshold) ++tally.occupied;
    }
    return tally;
}

}  // namespace latcr
