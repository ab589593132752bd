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

#include "qbattery/protocol.hpp"

#include <algorithm>
#include <cmath>

#include "qbattery/errors.hpp"

namespace qbattery {

namespace {

struct Branch {
    double probability = 0.0;
    bool possible = false;
    ComplexMatrix post{2};
    double delta_e = 0.0;
    double w_p = 0.0;
};

// Projects the auxiliary of `evolved` onto chi and traces it out. The
// normalized battery block is re-Hermitized and its Bloch radius clamped to 1
// so that rounding in nearly impossible branches cannot leave the state space.
Branch project_auxiliary(const ComplexMatrix &evolved, const QubitKet &chi, double h, double initial_energy) {
    Complex block[2][2];
    for (std::size_t i = 0; i < 2; ++i) {
        for (std::size_t j = 0; j < 2; ++j) {
            Complex acc = 0.0;
            for (std::size_t a = 0; a < 2; ++a) {
                Complex row = 0.0;
                for (std::size_t b = 0; b < 2; ++b) {
                    row += evolved(2 * i + a, 2 * j + b) * chi[b];
                }
                acc += std::conj(chi[a]) * row;
            }
            block[i][j] = acc;
        }
    }
    Branch out;
    out.probability = block[0][0].real() + block[1][1].real();
    if (!(out.probability >= kImpossibleProbability)) {
        return out;
    }
    out.possible = true;
    double z = (block[0][0].real() - block[1][1].real()) / out.probability;
    Complex off = 0.5 * (block[0][1] + std::conj(block[1][0])) / out.probability;
    const double radius = std::sqrt(z * z + 4.0 * std::norm(off));
    if (radius > 1.0) {
        z /= radius;
        off /= radius;
    }
    out.post(0, 0) = 0.5 * (1.0 + z);
    out.post(1, 1) = 0.5 * (1.0 - z);
    out.post(0, 1) = off;
    out.post(1, 0) = std::conj(off);
    out.delta_e = initial_energy - h * z;
    out.w_p = out.probability * out.delta_e;
    return out;
}

double marginal_energy(const ComplexMatrix &rho0, double h) {
    const ComplexMatrix marginal = partial_trace_second(rho0);
    return h * (marginal(0, 0).real() - marginal(1, 1).real());
}

QubitKet basis_ket(double theta, double phi, bool orthogonal) {
    const double c = std::cos(0.5 * theta);
    const double s = std::sin(0.5 * theta);
    const Complex phase(std::cos(phi), -std::sin(phi));
    if (orthogonal) {
        return {Complex(s), -phase * c};
    }
    return {Complex(c), phase * s};
}

}  // namespace

QubitKet MeasurementBasis::aligned() const { return basis_ket(theta, phi, false); }

QubitKet MeasurementBasis::orthogonal() const { return basis_ket(theta, phi, true); }

DensityMatrix separable_initial(double k, const BlochVector &aux) {
    return DensityMatrix(kron(battery_state(k).matrix(), bloch_state(aux).matrix()));
}

TwoQubitKet entangled_initial_ket(const EntangledInitParams &p) {
    if (!(std::abs(p.k) <= 1.0)) {
        throw DomainError("battery parameter k must lie in [-1, 1]");
    }
    if (!std::isfinite(p.theta2) || !std::isfinite(p.phi2)) {
        throw DomainError("auxiliary angles must be finite");
    }
    const double excited = std::sqrt(0.5 * (1.0 + p.k));
    const double ground = std::sqrt(0.5 * (1.0 - p.k));
    const QubitKet phi = basis_ket(p.theta2, p.phi2, false);
    const QubitKet phi_perp = basis_ket(p.theta2, p.phi2, true);
    // Index 2 * battery + auxiliary.
    return {excited * phi[0], excited * phi[1], ground * phi_perp[0], ground * phi_perp[1]};
}

DensityMatrix entangled_initial(const EntangledInitParams &p) {
    const TwoQubitKet psi = entangled_initial_ket(p);
    ComplexMatrix m(4);
    for (std::size_t i = 0; i < 4; ++i) {
        for (std::size_t j = 0; j < 4; ++j) {
            m(i, j) = psi[i] * std::conj(psi[j]);
        }
    }
    return DensityMatrix(m);
}

ProtocolEngine::ProtocolEngine(const HamiltonianSpec &spec)
    : spec_(spec), propagator_(hamiltonian_joint(spec)) {}

ProtocolResult ProtocolEngine::run(const DensityMatrix &rho0, double t, const MeasurementBasis &basis,
                                   Outcome outcome) const {
    if (rho0.dim() != 4) {
        throw InvalidDimension("protocol expects a two-qubit initial state");
    }
    const ComplexMatrix evolved = conjugate_by(propagator_.at(t), rho0.matrix());
    const Branch branch =
        project_auxiliary(evolved, basis.ket(outcome), spec_.h(), marginal_energy(rho0.matrix(), spec_.h()));
    ProtocolResult result;
    result.outcome = outcome;
    result.probability = branch.probability;
    if (branch.possible) {
        result.post_state.emplace(branch.post);
        result.delta_e = branch.delta_e;
        result.w_p = branch.w_p;
    } else {
        result.probability = std::max(0.0, branch.probability);
    }
    return result;
}

ProtocolResult ProtocolEngine::best(const DensityMatrix &rho0, double t, const MeasurementBasis &basis) const {
    ProtocolResult aligned = run(rho0, t, basis, Outcome::kAligned);
    ProtocolResult orthogonal = run(rho0, t, basis, Outcome::kOrthogonal);
    return orthogonal.w_p > aligned.w_p ? orthogonal : aligned;
}

ProtocolEngine::Score ProtocolEngine::best_score(const ComplexMatrix &rho0, double initial_energy, double t,
                                                 const MeasurementBasis &basis) const {
    const ComplexMatrix evolved = conjugate_by(propagator_.at(t), rho0);
    const Branch aligned = project_auxiliary(evolved, basis.aligned(), spec_.h(), initial_energy);
    const Branch orthogonal = project_auxiliary(evolved, basis.orthogonal(), spec_.h(), initial_energy);
    if (orthogonal.w_p > aligned.w_p) {
        return {orthogonal.w_p, Outcome::kOrthogonal};
    }
    return {aligned.w_p, Outcome::kAligned};
}

ProtocolResult run_protocol(const DensityMatrix &rho0, const HamiltonianSpec &spec, double t,
                            const MeasurementBasis &basis, Outcome outcome) {
    return ProtocolEngine(spec).run(rho0, t, basis, outcome);
}

ProtocolResult best_outcome(const DensityMatrix &rho0, const HamiltonianSpec &spec, double t,
                            const MeasurementBasis &basis) {
    return ProtocolEngine(spec).best(rho0, t, basis);
}

}  // namespace qbattery
