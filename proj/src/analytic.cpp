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

#include "qbattery/analytic.hpp"

#include <cmath>
#include <numbers>

#include "qbattery/errors.hpp"

namespace qbattery {

namespace {

double rabi_frequency(const HamiltonianSpec &spec) {
    return std::sqrt(4.0 * spec.h() * spec.h() + spec.coupling() * spec.coupling());
}

// z-basis measurement; |psi_perp> = -|1>, so the orthogonal outcome selects |1><1|.
constexpr MeasurementBasis kZBasis{0.0, 0.0};
constexpr Outcome kGroundOutcome = Outcome::kOrthogonal;

double binary_term(double p) { return p > 0.0 ? -p * std::log2(p) : 0.0; }

}  // namespace

double wp_closed_form(double s, double theta_t, const HamiltonianSpec &spec, double t) {
    const double h = spec.h();
    const double j = spec.coupling();
    const double w2 = 4.0 * h * h + j * j;
    const double bracket = -4.0 * h * h + w2 * std::cos(2.0 * j * t) - j * j * std::cos(2.0 * std::sqrt(w2) * t);
    const double c = std::cos(theta_t);
    return h * bracket / (4.0 * w2) * (-1.0 + s * s * c * c);
}

double wp_small_t(double s, double theta_t, const HamiltonianSpec &spec) {
    const double h = spec.h();
    const double j = spec.coupling();
    const double c = std::cos(theta_t);
    const double h2 = h * h;
    const double j2 = j * j;
    return -8.0 * h * (4.0 * h2 * h2 * j2 + h2 * j2 * j2) * (-1.0 + s * s * c * c) / (12.0 * (4.0 * h2 + j2));
}

double wp_probe_oracle(double s, double theta_t, const ProtocolEngine &engine, double t) {
    const DensityMatrix rho0(kron(bloch_state({s, theta_t, 0.0}).matrix(), battery_state(-1.0).matrix()));
    return engine.run(rho0, t, kZBasis, kGroundOutcome).w_p;
}

double wp_probe_oracle(double s, double theta_t, const HamiltonianSpec &spec, double t) {
    return wp_probe_oracle(s, theta_t, ProtocolEngine(spec), t);
}

double wp_excited_oracle(const HamiltonianSpec &spec, double t) {
    return run_protocol(separable_initial(1.0, {1.0, 0.0, 0.0}), spec, t, kZBasis, kGroundOutcome).w_p;
}

double wp_excited_two_level(const HamiltonianSpec &spec, double t) {
    const double w = rabi_frequency(spec);
    const double sine = std::sin(w * t);
    return 2.0 * spec.h() * spec.coupling() * spec.coupling() * sine * sine / (w * w);
}

double wp_excited_quoted(const HamiltonianSpec &spec, double t) {
    const double w2 = 4.0 * spec.h() * spec.h() + spec.coupling() * spec.coupling();
    return 2.0 * spec.h() * spec.coupling() * spec.coupling() * std::sin(w2 * t) / w2;
}

double excited_quarter_period(const HamiltonianSpec &spec) { return std::numbers::pi / (2.0 * rabi_frequency(spec)); }

double entanglement_entropy(double k) {
    if (!(std::abs(k) <= 1.0)) {
        throw DomainError("battery parameter k must lie in [-1, 1]");
    }
    return binary_term(0.5 * (1.0 + k)) + binary_term(0.5 * (1.0 - k));
}

std::size_t MpsScanReport::passive_count() const {
    std::size_t n = 0;
    for (const MpsPoint &p : points) {
        n += p.passive ? 1 : 0;
    }
    return n;
}

MpsScanReport mps_scan(std::size_t grid_n, double t_probe, const HamiltonianSpec &spec, double threshold) {
    if (grid_n < 2) {
        throw ConfigurationError("mps scan needs at least 2 grid points per axis");
    }
    if (!(t_probe > 0.0) || !std::isfinite(t_probe)) {
        throw ConfigurationError("mps scan probe time must be positive and finite");
    }
    const ProtocolEngine engine(spec);
    const double excited_value = wp_excited_oracle(spec, excited_quarter_period(spec));

    MpsScanReport report;
    report.grid_n = grid_n;
    report.t_probe = t_probe;
    report.threshold = threshold;
    report.points.reserve(grid_n * grid_n);
    const double last = static_cast<double>(grid_n - 1);
    for (std::size_t i = 0; i < grid_n; ++i) {
        const double s = static_cast<double>(i) / last;
        for (std::size_t j = 0; j < grid_n; ++j) {
            const double theta = std::numbers::pi * static_cast<double>(j) / last;
            double value = wp_probe_oracle(s, theta, engine, t_probe);
            if (i + 1 == grid_n && j == 0) {
                value = std::max(value, excited_value);
            }
            report.points.push_back({s, theta, value, !(value > threshold * spec.h())});
        }
    }
    return report;
}

}  // namespace qbattery
