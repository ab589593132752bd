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

#include <array>
#include <optional>

#include "qbattery/battery.hpp"
#include "qbattery/qmath.hpp"

namespace qbattery {

using QubitKet = std::array<Complex, 2>;
using TwoQubitKet = std::array<Complex, 4>;

/// Which projector of a two-outcome measurement was post-selected.
enum class Outcome : int {
    kAligned = 0,     ///< |psi>
    kOrthogonal = 1,  ///< |psi_perp>
};

/// Rank-1 projective measurement basis on the auxiliary qubit:
///   |psi>      = cos(theta/2)|0> + e^{-i phi} sin(theta/2)|1>
///   |psi_perp> = sin(theta/2)|0> - e^{-i phi} cos(theta/2)|1>
struct MeasurementBasis {
    double theta = 0.0;
    double phi = 0.0;

    QubitKet aligned() const;
    QubitKet orthogonal() const;
    QubitKet ket(Outcome outcome) const { return outcome == Outcome::kAligned ? aligned() : orthogonal(); }
};

/// Pure battery-auxiliary state
///   sqrt((1+k)/2)|0>|phi> + sqrt((1-k)/2)|1>|phi_perp>
/// with (|phi>, |phi_perp>) parameterized like MeasurementBasis by (theta2, phi2).
/// Its battery marginal is battery_state(k) for every choice of angles.
struct EntangledInitParams {
    double k = 0.0;
    double theta2 = 0.0;
    double phi2 = 0.0;
};

struct ProtocolResult {
    double probability = 0.0;
    /// Empty when the outcome is impossible (probability below 1e-12).
    std::optional<DensityMatrix> post_state;
    double delta_e = 0.0;
    double w_p = 0.0;
    Outcome outcome = Outcome::kAligned;

    int outcome_index() const noexcept { return static_cast<int>(outcome); }
    bool impossible() const noexcept { return !post_state.has_value(); }
};

/// Outcome probabilities below this are treated as impossible.
inline constexpr double kImpossibleProbability = 1e-12;

DensityMatrix separable_initial(double k, const BlochVector &aux);

TwoQubitKet entangled_initial_ket(const EntangledInitParams &p);
DensityMatrix entangled_initial(const EntangledInitParams &p);

/// Measurement-based extraction under a fixed joint Hamiltonian.
///
/// Evolves rho0 under H_BA for time t, projects the auxiliary onto the chosen
/// basis vector, traces it out and scores the branch by W_P = P_o * dE where
/// dE is measured against the battery marginal of rho0 (before evolution).
/// The engine diagonalizes H_BA once, so reuse it across many evaluations.
class ProtocolEngine {
  public:
    explicit ProtocolEngine(const HamiltonianSpec &spec);

    const HamiltonianSpec &spec() const noexcept { return spec_; }

    ProtocolResult run(const DensityMatrix &rho0, double t, const MeasurementBasis &basis, Outcome outcome) const;

    /// The outcome with the larger W_P; ties go to Outcome::kAligned.
    ProtocolResult best(const DensityMatrix &rho0, double t, const MeasurementBasis &basis) const;

    struct Score {
        double w_p;
        Outcome outcome;
    };

    /// Unvalidated fast path of best() for search loops. `rho0` must be a
    /// valid 4x4 state whose battery marginal has energy `initial_energy`.
    Score best_score(const ComplexMatrix &rho0, double initial_energy, double t, const MeasurementBasis &basis) const;

  private:
    HamiltonianSpec spec_;
    Propagator propagator_;
};

ProtocolResult run_protocol(const DensityMatrix &rho0, const HamiltonianSpec &spec, double t,
                            const MeasurementBasis &basis, Outcome outcome);

ProtocolResult best_outcome(const DensityMatrix &rho0, const HamiltonianSpec &spec, double t,
                            const MeasurementBasis &basis);

}  // namespace qbattery
