#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <map>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "latcr/sensing.hpp"
#include "latcr/sim.hpp"
#include "latcr/traffic.hpp"

namespace latcr {

inline constexpr const char* kVersion = "1.0.0";

double db_to_linear(double db);
double linear_to_db(double x);

/// User-facing parameter set. Powers are in dB here and nowhere else; the
/// conversions to the linear library types happen in radio() and probs().
struct ExperimentParams {
    int ns = 300;
    double mu = 1.0 / 500.0;
    double nu = 6.0 / 500.0;
    double pc = 0.1;            // collision-ratio constraint
    double gamma_s_db = -5.0;
    double chi2 = 0.01;         // linear; 0 means ideal cancellation
    double sigma_s_db = 10.0;   // sigma_s2 / sigma_u2
    double sigma_t_db = 10.0;   // sigma_t2
    double sigma_u2 = 1.0;
    double slot = 1.0;          // slot length in seconds
    PmMode pm_mode = PmMode::Approx;
    bool ratio_locked = false;  // set by `r`: nu then tracks mu

    RadioParams radio() const;
    TransitionProbs probs() const;
    PuTraffic traffic() const;

    /// Applies one `key = value` assignment. Returns false for unknown keys.
    bool set(const std::string& key, const std::string& value);

    /// All parameters as ordered key/value strings, for header echo.
    std::vector<std::pair<std::string, std::string>> echo() const;
};

struct AnalyticFields {
    double pm, pf0, pf1, eps0, eps1, pc, pw, c, dc;
};

struct SimulatedFields {
    SimMode mode;
    std::int64_t slots;
    std::uint64_t seed;
    SimMetrics metrics;
};

struct ResultRow {
    std::optional<double> sweep_value;
    ExperimentParams params;
    AnalyticFields analytic;
    std::optional<SimulatedFields> sim;
};

AnalyticFields analyze(const ExperimentParams& params);

SimulatedFields simulate(const ExperimentParams& params, std::int64_t slots, std::uint64_t seed,
                         SimMode mode);

/// Formats with 9 significant digits; non-finite values print as inf/-inf/nan.
std::string format_number(double v);

std::vector<std::string> result_columns();
std::vector<std::string> result_cells(const ResultRow& row);

/// Writes a comment block (one "# ..." line per entry) followed by an RFC-4180 table.
void write_csv(std::ostream& os, const std::vector<std::string>& comments,
               const std::vector<std::string>& header,
               const std::vector<std::vector<std::string>>& rows);

// --- presets and figures -------------------------------------------------

enum class SweepAxis { SigmaS2Db, Chi2Db, PcConstraint, Mu, Ns };

SweepAxis parse_axis(const std::string& name);
std::string to_string(SweepAxis a);
void apply_sweep(ExperimentParams& p, SweepAxis axis, double value);

struct CurveSpec {
    std::string name;
    std::vector<std::pair<std::string, std::string>> overrides;
};

/// A figure preset: base parameters, a sweep and one or more curves.
struct Preset {
    std::string figure;
    SweepAxis axis = SweepAxis::SigmaS2Db;
    std::vector<double> grid;
    std::vector<std::pair<std::string, std::string>> base;
    std::vector<CurveSpec> curves;
    std::vector<std::string> notes;  // documentation comments carried into CSV headers
    int sim_stride = 1;
};

/// Parses the key=value preset format. Throws Error(Io) on unreadable files
/// and InvalidArgument on malformed content.
Preset parse_preset(const std::string& text);
Preset load_preset(const std::filesystem::path& path);

/// "a:b:step" (inclusive) or a comma list; must be strictly increasing.
std::vector<double> parse_grid(const std::string& text);

struct FigureOptions {
    std::filesystem::path out_dir;
    std::vector<std::pair<std::string, std::string>> overrides;  // applied after presets
    bool simulate = false;
    std::int64_t slots = 1'000'000;
    std::uint64_t seed = 1;
    SimMode mode = SimMode::SampleLevel;
    std::string command_line;  // echoed in headers
    // Called after each simulated sweep point with (curve, done, total).
    std::function<void(const std::string&, std::size_t, std::size_t)> progress;
};

/// Produces the CSV files of one figure and returns their paths.
std::vector<std::filesystem::path> run_figure(const Preset& preset, const FigureOptions& opts);

/// Evaluates fn(i) for i in [0, n) on a thread pool.
template <class Fn>
void parallel_for(std::size_t n, Fn&& fn);

}  // namespace latcr

#include "latcr/detail/parallel.hpp"
