// Copyright 2026 The qbattery Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "commands.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <exception>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "CLI11.hpp"
#include "json.hpp"
#include "qbattery/errors.hpp"
#include "qbattery/optimizer.hpp"

namespace qbattery::cli {

namespace {

constexpr int kSeparableId = 1;
constexpr int kEntangledId = 2;

// Runs job(i) for i in [0, n) on up to `threads` workers; rethrows the first failure.
template <typename Job>
void parallel_for(std::size_t n, unsigned threads, Job job) {
    const unsigned workers = static_cast<unsigned>(std::clamp<std::size_t>(threads, 1, std::max<std::size_t>(n, 1)));
    if (workers == 1) {
        for (std::size_t i = 0; i < n; ++i) {
            job(i);
        }
        return;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::exception_ptr> failures(workers);
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) {
        pool.emplace_back([&, w] {
            try {
                for (std::size_t i = next++; i < n; i = next++) {
                    job(i);
                }
            } catch (...) {
                failures[w] = std::current_exception();
                next = n;
            }
        });
    }
    for (std::thread &t : pool) {
        t.join();
    }
    for (const std::exception_ptr &failure : failures) {
        if (failure) {
            std::rethrow_exception(failure);
        }
    }
}

std::string csv_bool(bool value) { return value ? "true" : "false"; }

std::string units_banner() { return "energies in units of h, times in units of 1/h"; }

std::string describe(const RunConfig &cfg) {
    std::ostringstream os;
    os << "h=" << format_number(cfg.h) << " J=" << format_number(cfg.resolved_coupling())
       << " k=[" << format_number(cfg.k_min) << ", " << format_number(cfg.k_max) << "] x" << cfg.k_points
       << " budget=" << cfg.budget << " seed=" << cfg.seed << " t_max=" << format_number(cfg.t_max);
    return os.str();
}

std::string default_path(const std::string &stem, const RunConfig &cfg) {
    return cfg.out.empty() ? stem + ".csv" : cfg.out;
}

std::string script_path(const std::string &csv_path) {
    const std::string suffix = ".csv";
    if (csv_path.size() > suffix.size() && csv_path.ends_with(suffix)) {
        return csv_path.substr(0, csv_path.size() - suffix.size()) + ".py";
    }
    return csv_path + ".py";
}

void emit_plot_script(const RunConfig &cfg, const std::string &kind, const std::string &csv_path,
                      std::ostream &report) {
    if (!cfg.plot_script) {
        return;
    }
    const std::string path = script_path(csv_path);
    write_file(path, [&](std::ostream &os) { os << plot_script(kind, csv_path); });
    report << "plot script: " << path << "\n";
}

}  // namespace

void validate(const RunConfig &cfg) {
    if (!(cfg.h > 0.0) || !std::isfinite(cfg.h)) {
        throw ConfigurationError("--h must be positive and finite");
    }
    if (!std::isfinite(cfg.resolved_coupling())) {
        throw ConfigurationError("--J must be finite");
    }
    if (!(cfg.k_min >= -1.0 && cfg.k_max <= 1.0 && cfg.k_min <= cfg.k_max)) {
        throw ConfigurationError("k range must satisfy -1 <= k-min <= k-max <= 1");
    }
    if (cfg.k_points < 1 || (cfg.k_points == 1 && cfg.k_min != cfg.k_max)) {
        throw ConfigurationError("--k-points must be at least 2 for a non-degenerate k range");
    }
    if (cfg.budget < 1) {
        throw ConfigurationError("--budget must be at least 1");
    }
    if (!(cfg.t_max > 0.0) || !std::isfinite(cfg.t_max)) {
        throw ConfigurationError("--t-max must be positive and finite");
    }
    if (cfg.threads < 1) {
        throw ConfigurationError("--threads must be at least 1");
    }
}

std::vector<double> k_grid(const RunConfig &cfg) {
    if (cfg.k_points == 1) {
        return {cfg.k_min};
    }
    std::vector<double> grid(cfg.k_points);
    const double last = static_cast<double>(cfg.k_points - 1);
    for (std::size_t i = 0; i < cfg.k_points; ++i) {
        const double step = static_cast<double>(i);
        grid[i] = (cfg.k_min * (last - step) + cfg.k_max * step) / last;
    }
    return grid;
}

void apply_json_config(const std::string &json_text, RunConfig &cfg) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(json_text);
    } catch (const nlohmann::json::parse_error &e) {
        throw ConfigurationError(std::string("config file is not valid JSON: ") + e.what());
    }
    if (!doc.is_object()) {
        throw ConfigurationError("config file must hold a JSON object");
    }
    try {
        for (const auto &[key, value] : doc.items()) {
            if (key == "h") {
                cfg.h = value.get<double>();
            } else if (key == "J") {
                cfg.coupling = value.get<double>();
            } else if (key == "k_min") {
                cfg.k_min = value.get<double>();
            } else if (key == "k_max") {
                cfg.k_max = value.get<double>();
            } else if (key == "k_points") {
                cfg.k_points = value.get<std::size_t>();
            } else if (key == "budget") {
                cfg.budget = value.get<std::uint64_t>();
            } else if (key == "seed") {
                cfg.seed = value.get<std::uint64_t>();
            } else if (key == "t_max") {
                cfg.t_max = value.get<double>();
            } else if (key == "threads") {
                cfg.threads = value.get<unsigned>();
            } else if (key == "out") {
                cfg.out = value.get<std::string>();
            } else {
                throw ConfigurationError("unknown config key '" + key + "'");
            }
        }
    } catch (const nlohmann::json::exception &e) {
        throw ConfigurationError(std::string("config file has a value of the wrong type: ") + e.what());
    }
}

std::uint64_t row_seed(std::uint64_t seed, int family_id, std::size_t k_index) {
    return derive_seed(seed, (static_cast<std::uint64_t>(family_id) << 32) | k_index);
}

std::string format_number(double value) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.12g", value);
    if (std::string_view(buf) == "-0") {
        return "0";
    }
    return buf;
}

SweepKind parse_sweep_kind(const std::string &name) {
    if (name == "unitary") {
        return SweepKind::kUnitary;
    }
    if (name == "separable") {
        return SweepKind::kSeparable;
    }
    if (name == "entangled") {
        return SweepKind::kEntangled;
    }
    throw ConfigurationError("unknown sweep family '" + name + "'");
}

std::vector<SweepRow> sweep(SweepKind kind, const RunConfig &cfg) {
    validate(cfg);
    const HamiltonianSpec spec = cfg.spec();
    const std::vector<double> grid = k_grid(cfg);
    std::vector<SweepRow> rows(grid.size());
    if (kind == SweepKind::kUnitary) {
        for (std::size_t i = 0; i < grid.size(); ++i) {
            rows[i] = {grid[i], ergotropy(battery_state(grid[i]), spec) / spec.h(), true, 0, cfg.seed};
        }
        return rows;
    }
    const Family family = kind == SweepKind::kSeparable ? Family::kSeparable : Family::kEntangled;
    const int family_id = kind == SweepKind::kSeparable ? kSeparableId : kEntangledId;
    parallel_for(grid.size(), cfg.threads, [&](std::size_t i) {
        const std::uint64_t seed = row_seed(cfg.seed, family_id, i);
        const OptimizationReport report = optimize({family, grid[i], cfg.t_max / spec.h()}, spec, cfg.budget, seed);
        rows[i] = {grid[i], report.best_value / spec.h(), report.converged, report.samples_used, seed};
    });
    return rows;
}

std::vector<Fig2Row> inset_fig2(const std::vector<SweepRow> &unitary, const std::vector<SweepRow> &separable) {
    if (unitary.size() != separable.size()) {
        throw ConfigurationError("fig2 inset: sweeps cover different grids");
    }
    std::vector<Fig2Row> rows;
    rows.reserve(unitary.size());
    for (std::size_t i = 0; i < unitary.size(); ++i) {
        rows.push_back({unitary[i].k, separable[i].value - unitary[i].value});
    }
    return rows;
}

std::vector<Fig2Row> inset_fig2(const RunConfig &cfg) {
    return inset_fig2(sweep(SweepKind::kUnitary, cfg), sweep(SweepKind::kSeparable, cfg));
}

std::vector<Fig3Row> inset_fig3(const std::vector<SweepRow> &separable, const std::vector<SweepRow> &entangled) {
    if (separable.size() != entangled.size()) {
        throw ConfigurationError("fig3 inset: sweeps cover different grids");
    }
    std::vector<Fig3Row> rows;
    auto add = [&](std::size_t i, int sign) {
        rows.push_back({entanglement_entropy(separable[i].k), entangled[i].value - separable[i].value, sign});
    };
    for (std::size_t i = separable.size(); i-- > 0;) {
        if (separable[i].k >= 0.0) {
            add(i, +1);
        }
    }
    for (std::size_t i = 0; i < separable.size(); ++i) {
        if (separable[i].k <= 0.0) {
            add(i, -1);
        }
    }
    return rows;
}

std::vector<Fig3Row> inset_fig3(const RunConfig &cfg) {
    return inset_fig3(sweep(SweepKind::kSeparable, cfg), sweep(SweepKind::kEntangled, cfg));
}

void write_sweep_csv(std::ostream &out, const std::vector<SweepRow> &rows) {
    out << "k,value,converged,samples,seed\n";
    for (const SweepRow &r : rows) {
        out << format_number(r.k) << ',' << format_number(r.value) << ',' << csv_bool(r.converged) << ','
            << r.samples << ',' << r.seed << '\n';
    }
}

void write_fig2_csv(std::ostream &out, const std::vector<Fig2Row> &rows) {
    out << "k,diff\n";
    for (const Fig2Row &r : rows) {
        out << format_number(r.k) << ',' << format_number(r.diff) << '\n';
    }
}

void write_fig3_csv(std::ostream &out, const std::vector<Fig3Row> &rows) {
    out << "entropy_ebits,diff,k_sign\n";
    for (const Fig3Row &r : rows) {
        out << format_number(r.entropy_ebits) << ',' << format_number(r.diff) << ',' << r.k_sign << '\n';
    }
}

void write_mps_csv(std::ostream &out, const MpsScanReport &report, double h) {
    out << "s,theta,max_wp,verdict\n";
    for (const MpsPoint &p : report.points) {
        out << format_number(p.s) << ',' << format_number(p.theta) << ',' << format_number(p.max_wp / h) << ','
            << (p.passive ? "passive" : "extractable") << '\n';
    }
}

void write_file(const std::string &path, const std::function<void(std::ostream &)> &writer) {
    std::ofstream os(path, std::ios::binary | std::ios::trunc);
    if (!os) {
        throw std::runtime_error("cannot open '" + path + "' for writing");
    }
    writer(os);
    os.flush();
    if (!os) {
        throw std::runtime_error("failed while writing '" + path + "'");
    }
}

std::string plot_script(const std::string &kind, const std::string &csv_path) {
    std::ostringstream os;
    os << "import csv\nimport matplotlib.pyplot as plt\n\n"
       << "with open(" << nlohmann::json(csv_path).dump() << ") as f:\n"
       << "    rows = list(csv.DictReader(f))\n\n"
       << "fig, ax = plt.subplots()\n";
    if (kind == "fig3") {
        os << "for sign, label in ((1, 'k > 0'), (-1, 'k < 0')):\n"
           << "    branch = [r for r in rows if int(r['k_sign']) == sign]\n"
           << "    ax.plot([float(r['entropy_ebits']) for r in branch], [float(r['diff']) for r in branch], "
              "label=label)\n"
           << "ax.set_xlabel('entanglement entropy (ebits)')\n"
           << "ax.set_ylabel('W_E - W_S (units of h)')\n"
           << "ax.legend()\n";
    } else if (kind == "fig2") {
        os << "ax.plot([float(r['k']) for r in rows], [float(r['diff']) for r in rows])\n"
           << "ax.axhline(0.0, color='gray', lw=0.5)\n"
           << "ax.set_xlabel('k')\n"
           << "ax.set_ylabel('W_S - W_U (units of h)')\n";
    } else if (kind == "mps") {
        os << "passive = [r for r in rows if r['verdict'] == 'passive']\n"
           << "ax.scatter([float(r['theta']) for r in rows], [float(r['s']) for r in rows], "
              "c=[float(r['max_wp']) for r in rows], s=4)\n"
           << "ax.scatter([float(r['theta']) for r in passive], [float(r['s']) for r in passive], "
              "marker='x', color='red', label='passive')\n"
           << "ax.set_xlabel('theta')\n"
           << "ax.set_ylabel('s')\n"
           << "ax.legend()\n";
    } else {
        os << "ax.plot([float(r['k']) for r in rows], [float(r['value']) for r in rows], label="
           << nlohmann::json(kind).dump() << ")\n"
           << "ax.set_xlabel('k')\n"
           << "ax.set_ylabel('extractable energy (units of h)')\n"
           << "ax.legend()\n";
    }
    os << "plt.show()\n";
    return os.str();
}

std::vector<SuiteResult> verify(const RunConfig &cfg, std::optional<double> closed_form_tolerance) {
    validate(cfg);
    VerifyOptions options;
    options.spec = cfg.spec();
    options.seed = cfg.seed;
    options.closed_form_t_max = cfg.t_max / cfg.h;
    if (closed_form_tolerance) {
        options.closed_form_tolerance = *closed_form_tolerance;
    }
    return run_verification(options);
}

MpsScanReport mps(const RunConfig &cfg, std::size_t grid_n, double t_probe) {
    validate(cfg);
    return mps_scan(grid_n, t_probe / cfg.h, cfg.spec());
}

int run(int argc, const char *const *argv, std::ostream &report, std::ostream &errors) {
    CLI::App app{"Energy extraction from a single-qubit quantum battery: unitary vs. measurement-based protocols"};
    app.set_help_flag("--help", "Print this help message and exit");
    app.require_subcommand(1);
    app.fallthrough();

    RunConfig flags;
    flags.threads = std::max(1u, std::thread::hardware_concurrency());
    double coupling = 0.0;
    std::string config_path;
    CLI::Option *h_opt = app.add_option("--h", flags.h, "Field strength h (energy unit)");
    CLI::Option *j_opt = app.add_option("--J", coupling, "Coupling J, same energy unit as h (default 2h)");
    CLI::Option *kmin_opt = app.add_option("--k-min", flags.k_min, "Lower end of the k grid");
    CLI::Option *kmax_opt = app.add_option("--k-max", flags.k_max, "Upper end of the k grid");
    CLI::Option *kpts_opt = app.add_option("--k-points", flags.k_points, "Number of k grid points");
    CLI::Option *budget_opt = app.add_option("--budget", flags.budget, "Protocol evaluations per k point");
    CLI::Option *seed_opt = app.add_option("--seed", flags.seed, "64-bit master seed");
    CLI::Option *tmax_opt = app.add_option("--t-max", flags.t_max, "Largest evolution time, units of 1/h");
    CLI::Option *threads_opt = app.add_option("--threads", flags.threads, "Worker threads over k points");
    CLI::Option *out_opt = app.add_option("--out", flags.out, "Output CSV path");
    app.add_option("--config", config_path, "JSON config file; command-line flags take precedence");
    app.add_flag("--plot-script", flags.plot_script, "Also write a matplotlib script next to the CSV");

    std::string family;
    CLI::App *sweep_cmd = app.add_subcommand("sweep", "Extractable energy across the k grid");
    sweep_cmd->add_option("family", family, "unitary | separable | entangled")
        ->required()
        ->check(CLI::IsMember({"unitary", "separable", "entangled"}));

    std::string which;
    CLI::App *inset_cmd = app.add_subcommand("inset", "Difference curves between protocols");
    inset_cmd->add_option("which", which, "fig2 (W_S - W_U vs k) | fig3 (W_E - W_S vs entropy)")
        ->required()
        ->check(CLI::IsMember({"fig2", "fig3"}));

    double closed_form_tol = 0.0;
    CLI::App *verify_cmd = app.add_subcommand("verify", "Run the numerical self-checks");
    CLI::Option *tol_opt =
        verify_cmd->add_option("--closed-form-tol", closed_form_tol, "Tolerance of the closed-form W_P suite");

    std::size_t grid_n = 101;
    double t_probe = kDefaultProbeTime;
    CLI::App *mps_cmd = app.add_subcommand("mps", "Scan battery states for measurement passivity");
    mps_cmd->add_option("--grid", grid_n, "Grid points per axis over (s, theta)");
    mps_cmd->add_option("--t-probe", t_probe, "Probe evolution time, units of 1/h");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError &e) {
        const int code = app.exit(e, report, errors);
        return code == 0 ? kExitOk : kExitConfigError;
    }

    try {
        RunConfig cfg;
        cfg.threads = flags.threads;
        if (!config_path.empty()) {
            std::ifstream in(config_path, std::ios::binary);
            if (!in) {
                throw ConfigurationError("cannot read config file '" + config_path + "'");
            }
            std::stringstream text;
            text << in.rdbuf();
            apply_json_config(text.str(), cfg);
        }
        auto take = [](CLI::Option *opt, auto &field, const auto &value) {
            if (opt->count() > 0) {
                field = value;
            }
        };
        take(h_opt, cfg.h, flags.h);
        take(kmin_opt, cfg.k_min, flags.k_min);
        take(kmax_opt, cfg.k_max, flags.k_max);
        take(kpts_opt, cfg.k_points, flags.k_points);
        take(budget_opt, cfg.budget, flags.budget);
        take(seed_opt, cfg.seed, flags.seed);
        take(tmax_opt, cfg.t_max, flags.t_max);
        take(threads_opt, cfg.threads, flags.threads);
        take(out_opt, cfg.out, flags.out);
        if (j_opt->count() > 0) {
            cfg.coupling = coupling;
        }
        cfg.plot_script = flags.plot_script;
        validate(cfg);

        if (*sweep_cmd) {
            report << "# sweep " << family << " (" << units_banner() << ")\n# " << describe(cfg) << "\n";
            const std::vector<SweepRow> rows = sweep(parse_sweep_kind(family), cfg);
            const std::string path = default_path("sweep_" + family, cfg);
            write_file(path, [&](std::ostream &os) { write_sweep_csv(os, rows); });
            std::size_t converged = 0;
            for (const SweepRow &r : rows) {
                converged += r.converged ? 1 : 0;
            }
            report << "wrote " << rows.size() << " rows to " << path << " (" << converged << " converged)\n";
            emit_plot_script(cfg, family, path, report);
        } else if (*inset_cmd) {
            report << "# inset " << which << " (" << units_banner() << ")\n# " << describe(cfg) << "\n";
            const std::string path = default_path("inset_" + which, cfg);
            std::size_t count = 0;
            if (which == "fig2") {
                const std::vector<Fig2Row> rows = inset_fig2(cfg);
                count = rows.size();
                write_file(path, [&](std::ostream &os) { write_fig2_csv(os, rows); });
            } else {
                const std::vector<Fig3Row> rows = inset_fig3(cfg);
                count = rows.size();
                write_file(path, [&](std::ostream &os) { write_fig3_csv(os, rows); });
            }
            report << "wrote " << count << " rows to " << path << "\n";
            emit_plot_script(cfg, which, path, report);
        } else if (*verify_cmd) {
            report << "# verify (" << units_banner() << ")\n# " << describe(cfg) << "\n";
            const std::vector<SuiteResult> results =
                verify(cfg, tol_opt->count() > 0 ? std::optional<double>(closed_form_tol) : std::nullopt);
            bool all = true;
            for (const SuiteResult &r : results) {
                all = all && r.passed;
                report << (r.passed ? "PASS  " : "FAIL  ") << r.name << "  max_residual=" << format_number(r.max_residual)
                       << "  tolerance=" << format_number(r.tolerance);
                if (!r.note.empty()) {
                    report << "  (" << r.note << ")";
                }
                report << "\n";
            }
            report << (all ? "all suites passed\n" : "verification FAILED\n");
            return all ? kExitOk : kExitVerificationFailed;
        } else if (*mps_cmd) {
            report << "# mps (" << units_banner() << ")\n# h=" << format_number(cfg.h)
                   << " J=" << format_number(cfg.resolved_coupling()) << " grid=" << grid_n
                   << " t_probe=" << format_number(t_probe) << "\n";
            const MpsScanReport scan = mps(cfg, grid_n, t_probe);
            const std::string path = default_path("mps", cfg);
            write_file(path, [&](std::ostream &os) { write_mps_csv(os, scan, cfg.h); });
            report << "wrote " << scan.points.size() << " rows to " << path << "\n";
            for (const MpsPoint &p : scan.points) {
                if (p.passive) {
                    report << "passive state at s=" << format_number(p.s) << " theta=" << format_number(p.theta)
                           << "\n";
                }
            }
            report << "passive points: " << scan.passive_count() << "\n";
            emit_plot_script(cfg, "mps", path, report);
        }
    } catch (const std::exception &e) {
        errors << "error: " << e.what() << "\n";
        return kExitConfigError;
    }
    return kExitOk;
}

}  // namespace qbattery::cli
