#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include "latcr/sensing.hpp"
#include "latcr/traffic.hpp"

namespace latcr {

enum class SimMode {
    SampleLevel,      // complex Gaussian samples over a continuous PU trace
    SlotStatistical,  // per-slot coin flips with the closed-form error probabilities
};

std::string_view to_string(SimMode m);

struct SimConfig {
    PuTraffic traffic;
    RadioParams radio;
    ThresholdPair thresholds;
    std::int64_t slots;
    std::uint64_t seed;
    SimMode mode;

    static constexpr std::int64_t kMinSlots = 1000;
};

/// Decisions taken on slots of one hypothesis.
struct DetectorTally {
    std::int64_t slots = 0;
    std::int64_t occupied = 0;

    double occupied_rate() const { return slots ? static_cast<double>(occupied) / slots : 0.0; }
};

struct SimMetrics {
    std::int64_t slots = 0;
    double total_time = 0.0;
    double collision_time = 0.0;
    double waste_time = 0.0;
    double pu_busy_time = 0.0;
    double pu_idle_time = 0.0;
    double su_tx_time = 0.0;
    double delivered_time = 0.0;  // SU transmitting while the PU is idle

    double empirical_pc = 0.0;
    double empirical_pw = 0.0;
    double throughput = 0.0;       // rate * delivered_time / total_time
    double hole_throughput = 0.0;  // rate * delivered_time / pu_idle_time

    // Batch-means standard errors.
    double pc_se = 0.0;
    double pw_se = 0.0;
    double throughput_se = 0.0;
    double hole_throughput_se = 0.0;

    /// Detector decisions on slots without a PU state change, indexed by Hypothesis.
    std::array<DetectorTally, 4> steady_tally{};

    const DetectorTally& tally(Hypothesis h) const { return steady_tally[static_cast<int>(h)]; }
};

struct SlotRecord {
    double busy_fraction;
    bool su_transmitting;
    bool judged_occupied;
};

SimMetrics run(const SimConfig& cfg);

/// As run(), also recording one entry per slot.
SimMetrics run_logged(const SimConfig& cfg, std::vector<SlotRecord>& log);

/// Runs every config, concurrently; results are in input order and equal to
/// independent run() calls.
std::vector<SimMetrics> run_batch(std::span<const SimConfig> cfgs);

/// Draws `slots` energy statistics under a fixed hypothesis, each from ns
/// complex Gaussian samples, and counts those at or above `threshold`.
DetectorTally detector_trials(const RadioParams& p, Hypothesis h, double threshold,
                              std::int64_t slots, std::uint64_t seed);

}  // namespace latcr
