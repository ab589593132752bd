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

#include <cstdint>
#include <string_view>
#include <vector>

#include "qbattery/battery.hpp"
#include "qbattery/protocol.hpp"

namespace qbattery {

/// Initial-state family searched by the optimizer.
///   separable: rho_B(k) (x) rho_A(r, theta1, phi1); parameters (r, theta1, phi1, t, theta, phi)
///   entangled: |psi_BA(k, theta2, phi2)>;           parameters (theta2, phi2, t, theta, phi)
enum class Family { kSeparable, kEntangled };

std::string_view to_string(Family family);

struct SearchSpace {
    Family family = Family::kSeparable;
    double k = 0.0;
    /// Upper bound of the evolution time, in the same time unit as 1/h.
    double t_max = 10.0;
};

struct ParameterBounds {
    double lower;
    double upper;
};

using ParameterVector = std::vector<double>;

/// Bounds per coordinate in family order. Throws ConfigurationError for an
/// invalid space (k outside [-1, 1], t_max not positive and finite).
std::vector<ParameterBounds> parameter_bounds(const SearchSpace &space);
std::vector<std::string_view> parameter_names(Family family);

/// Mixes two 64-bit words into a well-distributed seed (SplitMix64 finalizer).
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream);

/// SplitMix64 generator keyed by (seed, stream).
///
/// Sample n of a search draws from stream n, so the value of every sample
/// depends only on the seed and its index, never on how the index range is
/// split among threads.
class CounterRng {
  public:
    CounterRng(std::uint64_t seed, std::uint64_t stream);

    std::uint64_t next_u64();
    /// Uniform on [0, 1) with 53 random bits.
    double uniform();

  private:
    std::uint64_t state_;
};

/// Draws one parameter vector: pure-state angles Haar-uniform on the Bloch
/// sphere (cos theta uniform on [-1, 1], phi uniform on [0, 2pi)), r uniform
/// on [0, 1], t uniform on [0, t_max].
ParameterVector sample_point(const SearchSpace &space, CounterRng &rng);

/// W_P (best outcome) of the protocol described by `params` in `space`.
class ParameterObjective {
  public:
    ParameterObjective(const SearchSpace &space, const HamiltonianSpec &spec);

    ProtocolEngine::Score operator()(const ParameterVector &params) const;

    const SearchSpace &space() const noexcept { return space_; }

  private:
    SearchSpace space_;
    ProtocolEngine engine_;
    ComplexMatrix battery_;
    double initial_energy_;
};

struct TracePoint {
    std::uint64_t sample_index;
    double running_best;
};

struct OptimizationReport {
    double best_value = 0.0;
    ParameterVector best_params;
    Outcome best_outcome = Outcome::kAligned;
    /// Maximum over the exploration phase alone.
    double exploration_best = 0.0;
    std::uint64_t samples_used = 0;
    bool converged = false;
    /// (sample index, running best) at every improvement; running_best is non-decreasing.
    std::vector<TracePoint> trace;
    std::uint64_t seed = 0;
};

struct OptimizerOptions {
    /// Share of the budget spent on Haar-uniform exploration; the rest refines.
    double exploration_fraction = 0.8;
    /// Worker threads for exploration. The result does not depend on this.
    unsigned threads = 1;
    /// Improvement over the final ceil(budget/5) samples below which the run counts as converged.
    double convergence_tolerance = 1e-2;
};

/// Maximizes W_P over the family's parameters: seeded Haar-uniform
/// exploration followed by coordinate-wise golden-section refinement around
/// the incumbent. Sample 0 evaluates t = 0, which extracts nothing from
/// product states, so the separable optimum is never negative.
///
/// Throws ConfigurationError for budget < 1 or an invalid space.
OptimizationReport optimize(const SearchSpace &space, const HamiltonianSpec &spec, std::uint64_t budget,
                            std::uint64_t seed, const OptimizerOptions &options = {});

}  // namespace qbattery
