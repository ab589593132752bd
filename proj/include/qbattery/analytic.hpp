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
#include <vector>

#include "qbattery/battery.hpp"
#include "qbattery/protocol.hpp"

namespace qbattery {

// Probe protocol used to rule out measurement-passive states: battery in the
// Bloch state (s, theta_t, 0), auxiliary in the ground state |1><1|, z-basis
// measurement of the auxiliary, outcome |1><1| post-selected.

/// Closed-form W_P of the probe protocol at time t.
double wp_closed_form(double s, double theta_t, const HamiltonianSpec &spec, double t);

/// Coefficient c of the leading small-t behaviour W_P ~ c t^4 of the probe protocol.
double wp_small_t(double s, double theta_t, const HamiltonianSpec &spec);

/// Probe-protocol W_P by explicit evolution and measurement.
double wp_probe_oracle(double s, double theta_t, const HamiltonianSpec &spec, double t);
double wp_probe_oracle(double s, double theta_t, const ProtocolEngine &engine, double t);

/// Fully charged battery |0><0| with auxiliary |0><0|, z-basis, outcome |1><1|:
/// W_P by explicit evolution and measurement.
double wp_excited_oracle(const HamiltonianSpec &spec, double t);

/// 2 h J^2 sin^2(w t) / w^2 with w = sqrt(4h^2 + J^2), the value the
/// excited-state oracle follows (two-level dynamics in span{|00>, |11>}).
double wp_excited_two_level(const HamiltonianSpec &spec, double t);

/// 2 h J^2 sin((4h^2 + J^2) t) / (4h^2 + J^2). This is the commonly quoted
/// form; its sine argument is not dimensionless with hbar = 1 and it does not
/// match the oracle. Kept only for side-by-side reporting.
double wp_excited_quoted(const HamiltonianSpec &spec, double t);

/// First time at which the excited-state oracle reaches its maximum, pi / (2 w).
double excited_quarter_period(const HamiltonianSpec &spec);

/// Base-2 entropy of the battery marginal of |psi_BA(k)>, in ebits.
/// Throws DomainError for |k| > 1.
double entanglement_entropy(double k);

struct MpsPoint {
    double s;
    double theta;
    double max_wp;
    bool passive;
};

struct MpsScanReport {
    std::size_t grid_n = 0;
    double t_probe = 0.0;
    double threshold = 0.0;
    /// Row-major over (s, theta): s = i/(n-1), theta = pi j/(n-1).
    std::vector<MpsPoint> points;

    std::size_t passive_count() const;
};

inline constexpr double kMpsThreshold = 1e-8;
inline constexpr double kDefaultProbeTime = 0.1;

/// Scans battery Bloch states for measurement passivity. A point is
/// extractable when the probe protocol at t_probe, or for the fully charged
/// state the excited-state protocol at its quarter period, yields
/// W_P > threshold * h.
///
/// Throws ConfigurationError for grid_n < 2 or a non-positive t_probe.
MpsScanReport mps_scan(std::size_t grid_n, double t_probe, const HamiltonianSpec &spec,
                       double threshold = kMpsThreshold);

}  // namespace qbattery
