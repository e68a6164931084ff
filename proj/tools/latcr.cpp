// latcr: command-line harness for the listen-and-talk analysis and simulator.
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "latcr/errors.hpp"
#include "latcr/experiment.hpp"
#include "latcr/power.hpp"

namespace fs = std::filesystem;
using namespace latcr;

namespace {

enum Exit { kOk = 0, kInvalid = 1, kInfeasible = 2, kDegenerate = 3, kIo = 4 };

int exit_code(ErrorKind k) {
    switch (k) {
        case ErrorKind::InvalidArgument: return kInvalid;
        case ErrorKind::InfeasibleConstraint: return kInfeasible;
        case ErrorKind::Io: return kIo;
        default: return kDegenerate;
    }
}

// Flag values are kept as strings and replayed through ExperimentParams::set,
// so the CLI and preset files share one parser.
struct ParamFlags {
    std::vector<std::pair<const char*, std::optional<std::string>>> slots{
        {"ns", {}},         {"mu", {}},         {"nu", {}},         {"pc", {}},
        {"gamma_s_db", {}}, {"chi2_db", {}},    {"sigma_s_db", {}}, {"sigma_t_db", {}},
        {"sigma_u2", {}},   {"pm_mode", {}},
    };

    void attach(CLI::App* app) {
        for (auto& [key, value] : slots) {
            std::string flag = "--" + std::string(key);
            for (auto& ch : flag) {
                if (ch == '_') ch = '-';
            }
            auto* opt = app->add_option(flag, value);
            if (std::string(key) == "pm_mode") opt->check(CLI::IsMember({"exact", "approx"}));
        }
    }

    std::vector<std::pair<std::string, std::string>> overrides() const {
        std::vector<std::pair<std::string, std::string>> out;
        for (auto& [key, value] : slots) {
            if (value) out.emplace_back(key, *value);
        }
        return out;
    }

    ExperimentParams params() const {
        ExperimentParams p;
        for (auto& [k, v] : overrides()) p.set(k, v);
        return p;
    }
};

std::string command_line(int argc, char** argv) {
    std::string s = "latcr";
    for (int i = 1; i < argc; ++i) {
        std::string a = argv[i];
        const bool quote = a.empty() || a.find_first_of(" \t\"'$") != std::string::npos;
        s += ' ';
        s += quote ? "'" + a + "'" : a;
    }
    return s;
}

std::vector<std::string> param_comments(const ExperimentParams& p, const std::string& cmd) {
    std::vector<std::string> c{std::string("latcr ") + kVersion, "command: " + cmd};
    for (auto& [k, v] : p.echo()) c.push_back("param " + k + " = " + v);
    return c;
}

fs::path preset_path(const std::string& which, const std::string& explicit_path) {
    if (!explicit_path.empty()) return explicit_path;
    if (const char* env = std::getenv("LATCR_PRESET_DIR")) return fs::path(env) / (which + ".conf");
#ifdef LATCR_DEFAULT_PRESET_DIR
    return fs::path(LATCR_DEFAULT_PRESET_DIR) / (which + ".conf");
#else
    return fs::path("presets") / (which + ".conf");
#endif
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Listen-and-talk full-duplex cognitive radio: analysis and simulation"};
    app.set_version_flag("--version", std::string(kVersion));
    app.require_subcommand(1);

    ParamFlags flags;
    std::int64_t slots = 1'000'000;
    std::uint64_t seed = 1;
    std::string mode = "sample_level";
    std::string out_dir = "out";
    std::string preset_file;
    bool with_sim = false;
    std::string which;

    auto* analyze_cmd = app.add_subcommand("analyze", "print the analytic result row");
    flags.attach(analyze_cmd);

    auto* simulate_cmd = app.add_subcommand("simulate", "analytic row plus Monte Carlo estimates");
    flags.attach(simulate_cmd);
    simulate_cmd->add_option("--slots", slots)->check(CLI::Range(SimConfig::kMinSlots, INT64_MAX));
    simulate_cmd->add_option("--seed", seed);
    simulate_cmd->add_option("--mode", mode)
        ->check(CLI::IsMember({"sample_level", "slot_statistical", "both"}));

    auto* figure_cmd = app.add_subcommand("figure", "write the CSV files of one figure");
    figure_cmd->add_option("which", which, "fig3, fig4a, fig4b, fig5 or fig6")
        ->required()
        ->check(CLI::IsMember({"fig3", "fig4a", "fig4b", "fig5", "fig6"}));
    flags.attach(figure_cmd);
    figure_cmd->add_option("--out", out_dir);
    figure_cmd->add_option("--preset", preset_file, "preset file (default: shipped preset)");
    figure_cmd->add_flag("--simulate", with_sim, "add simulated columns");
    figure_cmd->add_option("--slots", slots)->check(CLI::Range(SimConfig::kMinSlots, INT64_MAX));
    figure_cmd->add_option("--seed", seed);
    figure_cmd->add_option("--mode", mode)->check(CLI::IsMember({"sample_level", "slot_statistical"}));

    auto* optimal_cmd = app.add_subcommand("optimal-power", "local optima of throughput over power");
    flags.attach(optimal_cmd);
    double lo_db = -20.0, hi_db = 60.0;
    int points = 400;
    optimal_cmd->add_option("--lo-db", lo_db);
    optimal_cmd->add_option("--hi-db", hi_db);
    optimal_cmd->add_option("--points", points);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kInvalid;
    }

    const std::string cmd = command_line(argc, argv);
    try {
        if (*analyze_cmd) {
            const ExperimentParams p = flags.params();
            const ResultRow row{std::nullopt, p, analyze(p), std::nullopt};
            write_csv(std::cout, param_comments(p, cmd), result_columns(), {result_cells(row)});
        } else if (*simulate_cmd) {
            const ExperimentParams p = flags.params();
            const AnalyticFields a = analyze(p);
            std::vector<SimMode> modes;
            if (mode != "slot_statistical") modes.push_back(SimMode::SampleLevel);
            if (mode != "sample_level") modes.push_back(SimMode::SlotStatistical);
            std::vector<std::vector<std::string>> rows;
            for (SimMode m : modes) {
                rows.push_back(result_cells({std::nullopt, p, a, simulate(p, slots, seed, m)}));
            }
            auto comments = param_comments(p, cmd);
            comments.push_back("seed: " + std::to_string(seed));
            write_csv(std::cout, comments, result_columns(), rows);
        } else if (*figure_cmd) {
            const Preset preset = load_preset(preset_path(which, preset_file));
            FigureOptions opts;
            opts.out_dir = out_dir;
            opts.overrides = flags.overrides();
            opts.simulate = with_sim;
            opts.slots = slots;
            opts.seed = seed;
            opts.mode = mode == "slot_statistical" ? SimMode::SlotStatistical : SimMode::SampleLevel;
            opts.command_line = cmd;
            if (with_sim) {
                opts.progress = [&](const std::string& curve, std::size_t done, std::size_t total) {
                    std::cerr << preset.figure << ' ' << curve << ": simulated " << done << '/' << total
                              << " points\n";
                };
            }
            for (const auto& f : run_figure(preset, opts)) std::cout << f.string() << '\n';
        } else if (*optimal_cmd) {
            const ExperimentParams p = flags.params();
            const RadioParams radio = p.radio();
            const TransitionProbs probs = p.probs();
            const double pm = required_pm(p.pc, probs, p.pm_mode, radio);
            const PowerSearch search = PowerSearch::from_db(lo_db, hi_db, points, radio.sigma_u2());
            const OptimalPowerResult r = optimal_power(radio, probs, pm, search);
            auto db = [&](const std::optional<double>& v) {
                return v ? format_number(linear_to_db(*v / radio.sigma_u2())) : std::string();
            };
            auto comments = param_comments(p, cmd);
            comments.push_back("pm = " + format_number(pm));
            write_csv(std::cout, comments, {"exists", "local_max_db", "local_min_db", "c_at_max"},
                      {{r.exists ? "1" : "0", db(r.local_max), db(r.local_min),
                        r.c_at_max ? format_number(*r.c_at_max) : std::string()}});
        }
    } catch (const Error& e) {
        std::cerr << "latcr: " << e.what() << '\n';
        return exit_code(e.kind());
    }
    return kOk;
}
