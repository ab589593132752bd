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

#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "qbattery/analytic.hpp"
#include "qbattery/battery.hpp"
#include "qbattery/verify.hpp"

namespace qbattery::cli {

/// Exit statuses of the command-line driver.
inline constexpr int kExitOk = 0;
inline constexpr int kExitVerificationFailed = 1;
inline constexpr int kExitConfigError = 2;

/// Numerical regime and I/O settings shared by all subcommands.
/// Energies are in units of h and times in units of 1/h.
struct RunConfig {
    double h = 1.0;
    /// Coupling J; tracks 2h when unset.
    std::optional<double> coupling;
    double k_min = -1.0;
    double k_max = 1.0;
    std::size_t k_points = 81;
    std::uint64_t budget = 200000;
    std::uint64_t seed = 1;
    double t_max = 10.0;
    unsigned threads = 1;
    /// Output CSV path; empty selects the subcommand's default file name.
    std::string out;
    /// Also write a matplotlib script next to the CSV.
    bool plot_script = false;

    double resolved_coupling() const { return coupling.value_or(2.0 * h); }
    HamiltonianSpec spec() const { return HamiltonianSpec(h, resolved_coupling()); }
};

/// Throws ConfigurationError for an inconsistent configuration.
void validate(const RunConfig &cfg);

/// k_points values evenly spaced on [k_min, k_max].
std::vector<double> k_grid(const RunConfig &cfg);

/// Fills every field present in a JSON object; unknown keys are rejected.
/// Throws ConfigurationError on malformed input.
void apply_json_config(const std::string &json_text, RunConfig &cfg);

/// Seed of the optimizer run for grid point `k_index` of a measurement family
/// (1 = separable, 2 = entangled). Shared by sweeps and insets so that both
/// see the same optimum at each k.
std::uint64_t row_seed(std::uint64_t seed, int family_id, std::size_t k_index);

/// Fixed 12-significant-digit rendering used in every CSV; never prints "-0".
std::string format_number(double value);

enum class SweepKind { kUnitary, kSeparable, kEntangled };

/// Parses "unitary" | "separable" | "entangled"; throws ConfigurationError otherwise.
SweepKind parse_sweep_kind(const std::string &name);

struct SweepRow {
    double k;
    double value;
    bool converged;
    std::uint64_t samples;
    std::uint64_t seed;
};

/// One row per k-grid point, in grid order; grid points are distributed over
/// cfg.threads workers.
std::vector<SweepRow> sweep(SweepKind kind, const RunConfig &cfg);

struct Fig2Row {
    double k;
    double diff;
};

struct Fig3Row {
    double entropy_ebits;
    double diff;
    int k_sign;
};

/// W_S^M - W^U per grid point.
std::vector<Fig2Row> inset_fig2(const RunConfig &cfg);
std::vector<Fig2Row> inset_fig2(const std::vector<SweepRow> &unitary, const std::vector<SweepRow> &separable);

/// W_E^M - W_S^M against the entanglement entropy, as two branches: k >= 0
/// (k_sign +1) then k <= 0 (k_sign -1), each ordered by increasing entropy.
/// k = 0 closes both branches.
std::vector<Fig3Row> inset_fig3(const RunConfig &cfg);
std::vector<Fig3Row> inset_fig3(const std::vector<SweepRow> &separable, const std::vector<SweepRow> &entangled);

void write_sweep_csv(std::ostream &out, const std::vector<SweepRow> &rows);
void write_fig2_csv(std::ostream &out, const std::vector<Fig2Row> &rows);
void write_fig3_csv(std::ostream &out, const std::vector<Fig3Row> &rows);
void write_mps_csv(std::ostream &out, const MpsScanReport &report, double h);

/// Opens `path` for writing and runs `writer`; throws std::runtime_error when
/// the file cannot be written.
void write_file(const std::string &path, const std::function<void(std::ostream &)> &writer);

/// Matplotlib script plotting the CSV at `csv_path`.
std::string plot_script(const std::string &kind, const std::string &csv_path);

/// Runs the verification suites for cfg; `closed_form_tolerance` overrides the
/// default tolerance of the closed-form W_P suite.
std::vector<SuiteResult> verify(const RunConfig &cfg, std::optional<double> closed_form_tolerance = std::nullopt);

/// Measurement-passivity scan with the probe time given in units of 1/h.
MpsScanReport mps(const RunConfig &cfg, std::size_t grid_n, double t_probe = kDefaultProbeTime);

/// Subcommand entry point: parses argv, runs, writes outputs, returns the exit status.
int run(int argc, const char *const *argv, std::ostream &report, std::ostream &errors);

}  // namespace qbattery::cli
