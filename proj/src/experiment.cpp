#include "latcr/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <mutex>
#include <sstream>

#include "latcr/errors.hpp"
#include "latcr/markov.hpp"
#include "latcr/power.hpp"

namespace latcr {

double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }
double linear_to_db(double x) { return 10.0 * std::log10(x); }

namespace {

double parse_double(const std::string& key, const std::string& value) {
    const char* begin = value.c_str();
    char* end = nullptr;
    const double v = std::strtod(begin, &end);
    while (end && *end == ' ') ++end;
    if (end == begin || (end && *end != '\0')) {
        fail(ErrorKind::InvalidArgument, "invalid number for " + key + ": '" + value + "'");
    }
    return v;
}

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

}  // namespace

RadioParams ExperimentParams::radio() const {
    RadioParams::Fields f;
    f.ns = ns;
    f.gamma_s = db_to_linear(gamma_s_db);
    f.chi2 = chi2;
    f.sigma_u2 = sigma_u2;
    f.sigma_s2 = sigma_u2 * db_to_linear(sigma_s_db);
    f.sigma_t2 = db_to_linear(sigma_t_db);
    return RadioParams(f);
}

TransitionProbs ExperimentParams::probs() const { return TransitionProbs(mu, nu); }

PuTraffic ExperimentParams::traffic() const { return PuTraffic::from_probabilities(mu, nu, slot); }

bool ExperimentParams::set(const std::string& key, const std::string& value) {
    if (key == "ns") {
        const double v = parse_double(key, value);
        require(v == std::floor(v) && v > 0 && v < 1e9, "ns must be a positive integer");
        ns = static_cast<int>(v);
    } else if (key == "mu") {
        // A fixed departure/arrival ratio follows mu.
        const double ratio = nu / mu;
        mu = parse_double(key, value);
        if (ratio_locked) nu = ratio * mu;
    } else if (key == "nu") {
        nu = parse_double(key, value);
        ratio_locked = false;
    } else if (key == "r") {
        nu = parse_double(key, value) * mu;
        ratio_locked = true;
    } else if (key == "pc" || key == "pc_constraint") {
        pc = parse_double(key, value);
    } else if (key == "gamma_s_db") {
        gamma_s_db = parse_double(key, value);
    } else if (key == "chi2") {
        chi2 = parse_double(key, value);
    } else if (key == "chi2_db") {
        chi2 = db_to_linear(parse_double(key, value));
    } else if (key == "sigma_s_db" || key == "sigma_s2_db") {
        sigma_s_db = parse_double(key, value);
    } else if (key == "sigma_t_db") {
        sigma_t_db = parse_double(key, value);
    } else if (key == "sigma_u2") {
        sigma_u2 = parse_double(key, value);
    } else if (key == "slot") {
        slot = parse_double(key, value);
    } else if (key == "pm_mode") {
        if (value == "exact") {
            pm_mode = PmMode::Exact;
        } else if (value == "approx") {
            pm_mode = PmMode::Approx;
        } else {
            fail(ErrorKind::InvalidArgument, "pm_mode must be exact or approx");
        }
    } else {
        return false;
    }
    return true;
}

std::vector<std::pair<std::string, std::string>> ExperimentParams::echo() const {
    return {
        {"ns", std::to_string(ns)},
        {"mu", format_number(mu)},
        {"nu", format_number(nu)},
        {"pc_constraint", format_number(pc)},
        {"gamma_s_db", format_number(gamma_s_db)},
        {"chi2_db", format_number(linear_to_db(chi2))},
        {"sigma_s_db", format_number(sigma_s_db)},
        {"sigma_t_db", format_number(sigma_t_db)},
        {"sigma_u2", format_number(sigma_u2)},
        {"slot", format_number(slot)},
        {"pm_mode", std::string(to_string(pm_mode))},
    };
}

AnalyticFields analyze(const ExperimentParams& params) {
    const RadioParams radio = params.radio();
    const TransitionProbs probs = params.probs();
    AnalyticFields a{};
    a.pm = required_pm(params.pc, probs, params.pm_mode, radio);
    const ThresholdPair th = thresholds_from_pm(a.pm, radio);
    const ErrorProfile e = error_probs(radio, th);
    a.pf0 = e.pf0();
    a.pf1 = e.pf1();
    a.eps0 = th.eps0;
    a.eps1 = th.eps1;
    a.pc = collision_ratio(e, probs);
    a.pw = waste_ratio(e, probs);
    const ThroughputPoint tp = throughput(radio, probs, a.pm);
    a.c = tp.c;
    a.dc = tp.dc;
    return a;
}

SimulatedFields simulate(const ExperimentParams& params, std::int64_t slots, std::uint64_t seed,
                         SimMode mode) {
    const RadioParams radio = params.radio();
    const double pm = required_pm(params.pc, params.probs(), params.pm_mode, radio);
    const SimConfig cfg{params.traffic(), radio, thresholds_from_pm(pm, radio), slots, seed, mode};
    return {mode, slots, seed, run(cfg)};
}

std::string format_number(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.9g", v);
    return buf;
}

std::vector<std::string> result_columns() {
    return {"sweep_value", "ns", "mu", "nu", "pc_constraint", "gamma_s_db", "chi2_db",
            "sigma_s_db", "sigma_t_db", "sigma_u2", "slot", "pm_mode",
            "pm", "pf0", "pf1", "eps0", "eps1", "pc", "pw", "c", "dc",
            "sim_mode", "slots", "seed", "empirical_pc", "empirical_pc_se", "empirical_pw",
            "empirical_pw_se", "throughput", "throughput_se", "hole_throughput",
            "hole_throughput_se", "pc_abs_diff", "pw_abs_diff", "c_rel_diff"};
}

std::vector<std::string> result_cells(const ResultRow& row) {
    std::vector<std::string> cells;
    cells.push_back(row.sweep_value ? format_number(*row.sweep_value) : "");
    for (auto& [k, v] : row.params.echo()) cells.push_back(v);
    const AnalyticFields& a = row.analytic;
    for (double v : {a.pm, a.pf0, a.pf1, a.eps0, a.eps1, a.pc, a.pw, a.c, a.dc}) {
        cells.push_back(format_number(v));
    }
    if (row.sim) {
        const SimMetrics& m = row.sim->metrics;
        cells.push_back(std::string(to_string(row.sim->mode)));
        cells.push_back(std::to_string(row.sim->slots));
        cells.push_back(std::to_string(row.sim->seed));
        for (double v : {m.empirical_pc, m.pc_se, m.empirical_pw, m.pw_se, m.throughput,
                         m.throughput_se, m.hole_throughput, m.hole_throughput_se,
                         std::abs(m.empirical_pc - a.pc), std::abs(m.empirical_pw - a.pw),
                         a.c != 0.0 ? std::abs(m.hole_throughput - a.c) / a.c : 0.0}) {
            cells.push_back(format_number(v));
        }
    } else {
        cells.resize(result_columns().size());
    }
    return cells;
}

namespace {

std::string csv_escape(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + "\"";
}

void write_line(std::ostream& os, const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
        if (i) os << ',';
        os << csv_escape(cells[i]);
    }
    os << '\n';
}

}  // namespace

void write_csv(std::ostream& os, const std::vector<std::string>& comments,
               const std::vector<std::string>& header,
               const std::vector<std::vector<std::string>>& rows) {
    for (const auto& c : comments) os << "# " << c << '\n';
    write_line(os, header);
    for (const auto& r : rows) write_line(os, r);
}

SweepAxis parse_axis(const std::string& name) {
    if (name == "sigma_s2_db" || name == "sigma_s_db") return SweepAxis::SigmaS2Db;
    if (name == "chi2_db") return SweepAxis::Chi2Db;
    if (name == "pc_constraint" || name == "pc") return SweepAxis::PcConstraint;
    if (name == "mu") return SweepAxis::Mu;
    if (name == "ns") return SweepAxis::Ns;
    fail(ErrorKind::InvalidArgument,
         "unknown sweep axis '" + name + "' (sigma_s2_db, chi2_db, pc_constraint, mu, ns)");
}

std::string to_string(SweepAxis a) {
    switch (a) {
        case SweepAxis::SigmaS2Db: return "sigma_s2_db";
        case SweepAxis::Chi2Db: return "chi2_db";
        case SweepAxis::PcConstraint: return "pc_constraint";
        case SweepAxis::Mu: return "mu";
        case SweepAxis::Ns: return "ns";
    }
    return "?";
}

void apply_sweep(ExperimentParams& p, SweepAxis axis, double value) {
    const std::string v = format_number(value);
    switch (axis) {
        case SweepAxis::SigmaS2Db: p.sigma_s_db = value; break;
        case SweepAxis::Chi2Db: p.chi2 = db_to_linear(value); break;
        case SweepAxis::PcConstraint: p.pc = value; break;
        case SweepAxis::Mu: p.set("mu", v); break;
        case SweepAxis::Ns: p.set("ns", v); break;
    }
}

std::vector<double> parse_grid(const std::string& text) {
    std::vector<double> g;
    if (text.find(':') != std::string::npos) {
        std::stringstream ss(text);
        std::string a, b, c;
        std::getline(ss, a, ':');
        std::getline(ss, b, ':');
        std::getline(ss, c, ':');
        const double lo = parse_double("grid", trim(a));
        const double hi = parse_double("grid", trim(b));
        const double step = parse_double("grid", trim(c));
        require(step > 0.0 && hi >= lo, "grid: expected lo:hi:step with step > 0 and hi >= lo");
        const auto n = static_cast<long>(std::floor((hi - lo) / step + 1e-9));
        for (long i = 0; i <= n; ++i) g.push_back(lo + static_cast<double>(i) * step);
    } else {
        std::stringstream ss(text);
        std::string item;
        while (std::getline(ss, item, ',')) g.push_back(parse_double("grid", trim(item)));
    }
    require(!g.empty(), "grid must be nonempty");
    for (std::size_t i = 1; i < g.size(); ++i) {
        require(g[i] > g[i - 1], "grid must be strictly increasing");
    }
    return g;
}

Preset parse_preset(const std::string& text) {
    Preset p;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const std::string t = trim(line);
        if (t.empty() || t[0] == '#') continue;
        const auto eq = t.find('=');
        if (eq == std::string::npos) {
            fail(ErrorKind::InvalidArgument, "preset line " + std::to_string(lineno) + ": expected key = value");
        }
        const std::string key = trim(t.substr(0, eq));
        const std::string value = trim(t.substr(eq + 1));
        if (key == "figure") {
            p.figure = value;
        } else if (key == "sweep") {
            p.axis = parse_axis(value);
        } else if (key == "grid") {
            p.grid = parse_grid(value);
        } else if (key == "note") {
            p.notes.push_back(value);
        } else if (key == "sim_stride") {
            p.sim_stride = static_cast<int>(parse_double(key, value));
            require(p.sim_stride >= 1, "sim_stride must be at least 1");
        } else if (key == "curve") {
            const auto colon = value.find(':');
            CurveSpec c;
            c.name = trim(value.substr(0, colon));
            require(!c.name.empty(), "preset curve needs a name");
            if (colon != std::string::npos) {
                std::istringstream kv(value.substr(colon + 1));
                std::string item;
                while (kv >> item) {
                    const auto e = item.find('=');
                    require(e != std::string::npos, "preset curve entries must be key=value");
                    c.overrides.emplace_back(item.substr(0, e), item.substr(e + 1));
                }
            }
            p.curves.push_back(std::move(c));
        } else {
            p.base.emplace_back(key, value);
        }
    }
    require(!p.figure.empty(), "preset must name its figure");
    require(!p.grid.empty(), "preset must define a grid");
    if (p.curves.empty()) p.curves.push_back({"default", {}});
    // Validate keys eagerly.
    ExperimentParams probe;
    for (auto& [k, v] : p.base) {
        if (!probe.set(k, v)) fail(ErrorKind::InvalidArgument, "preset: unknown key '" + k + "'");
    }
    for (const auto& c : p.curves) {
        ExperimentParams q = probe;
        for (auto& [k, v] : c.overrides) {
            if (!q.set(k, v)) fail(ErrorKind::InvalidArgument, "preset curve: unknown key '" + k + "'");
        }
    }
    return p;
}

Preset load_preset(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) fail(ErrorKind::Io, "cannot read preset " + path.string());
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_preset(ss.str());
}

namespace {

ExperimentParams curve_params(const Preset& preset, const CurveSpec& curve,
                              const FigureOptions& opts) {
    ExperimentParams p;
    for (auto& [k, v] : preset.base) p.set(k, v);
    for (auto& [k, v] : curve.overrides) p.set(k, v);
    for (auto& [k, v] : opts.overrides) {
        if (!p.set(k, v)) fail(ErrorKind::InvalidArgument, "unknown override '" + k + "'");
    }
    return p;
}

std::vector<std::string> header_comments(const Preset& preset, const CurveSpec& curve,
                                         const ExperimentParams& p, const FigureOptions& opts) {
    std::vector<std::string> c;
    c.push_back(std::string("latcr ") + kVersion);
    c.push_back("command: " + opts.command_line);
    c.push_back("figure: " + preset.figure);
    c.push_back("curve: " + curve.name);
    c.push_back("sweep: " + to_string(preset.axis));
    c.push_back("seed: " + std::to_string(opts.seed));
    if (opts.simulate) {
        c.push_back("simulation: " + std::string(to_string(opts.mode)) + ", " +
                    std::to_string(opts.slots) + " slots, every " +
                    std::to_string(preset.sim_stride) + " sweep points, seed + point index");
    }
    for (auto& [k, v] : p.echo()) c.push_back("param " + k + " = " + v);
    for (const auto& n : preset.notes) c.push_back("note: " + n);
    return c;
}

void write_file(const std::filesystem::path& path, const std::vector<std::string>& comments,
                const std::vector<std::string>& header,
                const std::vector<std::vector<std::string>>& rows) {
    std::ofstream out(path, std::ios::binary);
    if (!out) fail(ErrorKind::Io, "cannot write " + path.string());
    write_csv(out, comments, header, rows);
    if (!out) fail(ErrorKind::Io, "failed writing " + path.string());
}

bool is_skippable(const Error& e) {
    return e.kind() == ErrorKind::InfeasibleConstraint || e.kind() == ErrorKind::NoRoot;
}

std::vector<std::filesystem::path> run_existence_figure(const Preset& preset,
                                                        const FigureOptions& opts) {
    std::vector<std::filesystem::path> files;
    for (const auto& curve : preset.curves) {
        const ExperimentParams p = curve_params(preset, curve, opts);
        const RadioParams radio = p.radio();
        const TransitionProbs probs = p.probs();
        const double pm = required_pm(p.pc, probs, p.pm_mode, radio);

        std::vector<double> chi2(preset.grid.size());
        for (std::size_t i = 0; i < chi2.size(); ++i) chi2[i] = db_to_linear(preset.grid[i]);
        std::vector<ExistencePoint> pts(chi2.size());
        parallel_for(chi2.size(), [&](std::size_t i) {
            pts[i] = existence_point(radio, probs, pm, chi2[i]);
        });

        auto comments = header_comments(preset, curve, p, opts);
        comments.push_back("pm = " + format_number(pm));
        for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
            if (pts[i].solutions() != pts[i + 1].solutions()) {
                const double x = existence_crossing(radio, probs, pm, chi2[i], chi2[i + 1]);
                comments.push_back("crossing_chi2 = " + format_number(x));
            }
        }
        std::vector<std::vector<std::string>> rows;
        for (std::size_t i = 0; i < pts.size(); ++i) {
            const auto& e = pts[i];
            rows.push_back({format_number(preset.grid[i]), format_number(e.chi2),
                            format_number(e.left_max), format_number(e.right_at_argmax),
                            format_number(linear_to_db(e.argmax_sigma_s2 / p.sigma_u2)),
                            e.solutions() ? "1" : "0", format_number(pm)});
        }
        const auto path = opts.out_dir / (preset.figure + "_" + curve.name + ".csv");
        write_file(path, comments,
                   {"sweep_value", "chi2", "left_max", "right_at_argmax", "argmax_sigma_s_db",
                    "solutions", "pm"},
                   rows);
        files.push_back(path);
    }
    return files;
}

}  // namespace

std::vector<std::filesystem::path> run_figure(const Preset& preset, const FigureOptions& opts) {
    std::error_code ec;
    std::filesystem::create_directories(opts.out_dir, ec);
    if (ec) fail(ErrorKind::Io, "cannot create output directory " + opts.out_dir.string());

    if (preset.figure == "fig4b") return run_existence_figure(preset, opts);

    std::vector<std::filesystem::path> files;
    std::vector<std::vector<std::string>> optima_rows;
    for (const auto& curve : preset.curves) {
        const ExperimentParams base = curve_params(preset, curve, opts);
        const std::size_t n = preset.grid.size();
        std::vector<std::optional<ResultRow>> rows(n);
        const std::size_t stride = static_cast<std::size_t>(preset.sim_stride);
        const std::size_t sim_total = opts.simulate ? (n + stride - 1) / stride : 0;
        std::size_t sim_done = 0;
        std::mutex progress_mutex;
        parallel_for(n, [&](std::size_t i) {
            ExperimentParams p = base;
            apply_sweep(p, preset.axis, preset.grid[i]);
            try {
                ResultRow row{preset.grid[i], p, analyze(p), std::nullopt};
                if (opts.simulate && i % stride == 0) {
                    row.sim = simulate(p, opts.slots, opts.seed + i, opts.mode);
                    if (opts.progress) {
                        std::lock_guard lock(progress_mutex);
                        opts.progress(curve.name, ++sim_done, sim_total);
                    }
                }
                rows[i] = std::move(row);
            } catch (const Error& e) {
                if (!is_skippable(e)) throw;
            }
        });

        auto comments = header_comments(preset, curve, base, opts);
        const auto skipped = std::count_if(rows.begin(), rows.end(), [](auto& r) { return !r; });
        if (skipped) {
            comments.push_back("skipped: " + std::to_string(skipped) +
                               " sweep points with an infeasible collision constraint");
        }
        std::vector<std::vector<std::string>> cells;
        for (const auto& r : rows) {
            if (r) cells.push_back(result_cells(*r));
        }
        const auto path = opts.out_dir / (preset.figure + "_" + curve.name + ".csv");
        write_file(path, comments, result_columns(), cells);
        files.push_back(path);

        if (preset.figure == "fig4a") {
            const RadioParams radio = base.radio();
            const TransitionProbs probs = base.probs();
            const double pm = required_pm(base.pc, probs, base.pm_mode, radio);
            std::vector<std::string> row{curve.name, format_number(linear_to_db(base.chi2))};
            try {
                const OptimalPowerResult r =
                    optimal_power(radio, probs, pm, PowerSearch::defaults(radio.sigma_u2()));
                auto db = [&](const std::optional<double>& v) {
                    return v ? format_number(linear_to_db(*v / radio.sigma_u2())) : std::string();
                };
                row.push_back(r.exists ? "1" : "0");
                row.push_back(db(r.local_max));
                row.push_back(db(r.local_min));
                row.push_back(r.c_at_max ? format_number(*r.c_at_max) : std::string());
            } catch (const Error& e) {
                if (e.kind() != ErrorKind::AmbiguousLandscape) throw;
                row.insert(row.end(), {"ambiguous", "", "", ""});
            }
            optima_rows.push_back(std::move(row));
        }
    }
    if (!optima_rows.empty()) {
        const auto path = opts.out_dir / (preset.figure + "_optima.csv");
        write_file(path,
                   {std::string("latcr ") + kVersion, "command: " + opts.command_line,
                    "figure: " + preset.figure,
                    "local optima of C over sigma_s2/sigma_u2 in [-20, 60] dB, 400-point scan"},
                   {"curve", "chi2_db", "exists", "local_max_db", "local_min_db", "c_at_max"},
                   optima_rows);
        files.push_back(path);
    }
    return files;
}

}  // namespace latcr
