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

#include "qbattery/battery.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "qbattery/errors.hpp"

namespace qbattery {

namespace {

constexpr double kStateTol = 1e-10;

}  // namespace

HamiltonianSpec::HamiltonianSpec() : HamiltonianSpec(1.0, 2.0) {}

HamiltonianSpec::HamiltonianSpec(double h, double coupling) : h_(h), coupling_(coupling) {
    if (!(h > 0.0) || !std::isfinite(h)) {
        throw DomainError("field strength h must be positive and finite");
    }
    if (!std::isfinite(coupling)) {
        throw DomainError("coupling J must be finite");
    }
}

HamiltonianSpec HamiltonianSpec::with_default_coupling(double h) { return HamiltonianSpec(h, 2.0 * h); }

DensityMatrix::DensityMatrix(const ComplexMatrix &m) : matrix_(m) {
    if (!m.is_hermitian(kStateTol)) {
        throw DomainError("density matrix must be Hermitian");
    }
    if (std::abs(m.trace() - 1.0) > kStateTol) {
        throw DomainError("density matrix must have unit trace");
    }
    double smallest;
    if (m.dim() == 2) {
        const double mean = 0.5 * (m(0, 0).real() + m(1, 1).real());
        const double half_gap = std::hypot(0.5 * (m(0, 0).real() - m(1, 1).real()), std::abs(m(0, 1)));
        smallest = mean - half_gap;
    } else {
        smallest = hermitian_eig(m).eigenvalues.front();
    }
    if (smallest < -kStateTol) {
        throw DomainError("density matrix must be positive semidefinite");
    }
}

DensityMatrix battery_state(double k) {
    if (!(std::abs(k) <= 1.0)) {
        throw DomainError("battery parameter k must lie in [-1, 1]");
    }
    return DensityMatrix(ComplexMatrix::diagonal({(1.0 + k) / 2.0, (1.0 - k) / 2.0}));
}

DensityMatrix bloch_state(const BlochVector &b) {
    if (!(b.r >= 0.0 && b.r <= 1.0)) {
        throw DomainError("Bloch radius must lie in [0, 1]");
    }
    if (!std::isfinite(b.theta) || !std::isfinite(b.phi)) {
        throw DomainError("Bloch angles must be finite");
    }
    const double x = b.r * std::sin(b.theta) * std::cos(b.phi);
    const double y = b.r * std::sin(b.theta) * std::sin(b.phi);
    const double z = b.r * std::cos(b.theta);
    return DensityMatrix(ComplexMatrix(2, {0.5 * (1.0 + z), Complex(0.5 * x, -0.5 * y),  //
                                           Complex(0.5 * x, 0.5 * y), 0.5 * (1.0 - z)}));
}

ComplexMatrix hamiltonian_battery(const HamiltonianSpec &spec) { return spec.h() * pauli_z(); }

ComplexMatrix hamiltonian_joint(const HamiltonianSpec &spec) {
    const ComplexMatrix id = ComplexMatrix::identity(2);
    return spec.h() * kron(pauli_z(), id) + spec.h() * kron(id, pauli_z()) +
           spec.coupling() * kron(pauli_x(), pauli_x());
}

double energy(const DensityMatrix &rho, const HamiltonianSpec &spec) {
    if (rho.dim() != 2) {
        throw InvalidDimension("energy expects a single-qubit state");
    }
    return spec.h() * (rho.matrix()(0, 0).real() - rho.matrix()(1, 1).real());
}

DensityMatrix passive_state(const DensityMatrix &rho, const ComplexMatrix &h_op) {
    if (rho.dim() != h_op.dim()) {
        throw InvalidDimension("passive_state: state and Hamiltonian dimensions differ");
    }
    const EigenDecomposition populations = hermitian_eig(rho.matrix());
    const EigenDecomposition levels = hermitian_eig(h_op);
    const std::size_t n = rho.dim();
    ComplexMatrix sigma(n);
    for (std::size_t k = 0; k < n; ++k) {
        // Largest population on the lowest level.
        const double weight = populations.eigenvalues[n - 1 - k];
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = 0; j < n; ++j) {
                sigma(i, j) += weight * levels.eigenvectors(i, k) * std::conj(levels.eigenvectors(j, k));
            }
        }
    }
    return DensityMatrix(sigma);
}

double ergotropy(const DensityMatrix &rho, const HamiltonianSpec &spec) {
    const DensityMatrix sigma = passive_state(rho, hamiltonian_battery(spec));
    const double w = energy(rho, spec) - energy(sigma, spec);
    if (w < 0.0 && w >= -kStateTol) {
        return 0.0;
    }
    return w;
}

}  // namespace qbattery
