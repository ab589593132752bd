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

#include "qbattery/qmath.hpp"

namespace qbattery {

/// Field strength h and battery-auxiliary coupling J of the two-qubit model
///   H_B = h sz,  H_A = h sz,  H_I = J sx (x) sx.
/// Energies are in units of h and times in units of 1/h throughout.
class HamiltonianSpec {
  public:
    /// h = 1, J = 2h.
    HamiltonianSpec();
    /// Throws DomainError unless h > 0 and J is finite.
    HamiltonianSpec(double h, double coupling);
    /// J defaults to 2h.
    static HamiltonianSpec with_default_coupling(double h);

    double h() const noexcept { return h_; }
    double coupling() const noexcept { return coupling_; }

  private:
    double h_;
    double coupling_;
};

/// Spherical coordinates (r, theta, phi) of a qubit Bloch vector.
struct BlochVector {
    double r = 0.0;
    double theta = 0.0;
    double phi = 0.0;
};

/// Hermitian, unit-trace, positive-semidefinite operator on one or two qubits.
///
/// Construction validates the invariants (trace to 1e-10, eigenvalues above
/// -1e-10) and throws DomainError otherwise.
class DensityMatrix {
  public:
    explicit DensityMatrix(const ComplexMatrix &m);

    const ComplexMatrix &matrix() const noexcept { return matrix_; }
    std::size_t dim() const noexcept { return matrix_.dim(); }

  private:
    ComplexMatrix matrix_;
};

/// diag((1+k)/2, (1-k)/2) in the {|0>, |1>} basis, |0> excited.
DensityMatrix battery_state(double k);

/// (I + r.sigma)/2.
DensityMatrix bloch_state(const BlochVector &b);

/// h sz.
ComplexMatrix hamiltonian_battery(const HamiltonianSpec &spec);

/// h (sz (x) I) + h (I (x) sz) + J (sx (x) sx).
ComplexMatrix hamiltonian_joint(const HamiltonianSpec &spec);

/// Tr(rho h sz) for a single-qubit state.
double energy(const DensityMatrix &rho, const HamiltonianSpec &spec);

/// Passive state of rho with respect to h_op: populations sorted in
/// decreasing order occupy the levels of h_op in increasing energy.
DensityMatrix passive_state(const DensityMatrix &rho, const ComplexMatrix &h_op);

/// Maximal energy extractable from rho by unitaries (ergotropy), >= 0.
double ergotropy(const DensityMatrix &rho, const HamiltonianSpec &spec);

}  // namespace qbattery
