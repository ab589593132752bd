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

#include "qbattery/qmath.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "oracle.hpp"
#include "qbattery/battery.hpp"
#include "qbattery/errors.hpp"

using namespace qbattery;
using qbattery::testing::random_hermitian;

namespace {

const ComplexMatrix kId2 = ComplexMatrix::identity(2);

}  // namespace

TEST(Kron, IdentityTimesIdentity) { EXPECT_EQ(kron(kId2, kId2), ComplexMatrix::identity(4)); }

TEST(Kron, PauliZOnFirstQubit) { EXPECT_EQ(kron(pauli_z(), kId2), ComplexMatrix::diagonal({1.0, 1.0, -1.0, -1.0})); }

TEST(Kron, PauliXPauliXIsAntidiagonal) {
    ComplexMatrix expected(4);
    for (std::size_t i = 0; i < 4; ++i) {
        expected(i, 3 - i) = 1.0;
    }
    EXPECT_EQ(kron(pauli_x(), pauli_x()), expected);
}

TEST(Kron, RejectsTwoQubitOperands) {
    EXPECT_THROW(kron(ComplexMatrix::identity(4), kId2), InvalidDimension);
}

TEST(Kron, TraceIsMultiplicative) {
    std::mt19937_64 rng(11);
    for (int n = 0; n < 200; ++n) {
        const ComplexMatrix a = random_hermitian(rng, 2);
        const ComplexMatrix b = random_hermitian(rng, 2);
        EXPECT_NEAR(std::abs(kron(a, b).trace() - a.trace() * b.trace()), 0.0, 1e-12);
    }
}

TEST(ComplexMatrix, RejectsUnsupportedDimensions) {
    EXPECT_THROW(ComplexMatrix(3), InvalidDimension);
    EXPECT_THROW(ComplexMatrix(2, {1.0, 2.0, 3.0}), InvalidDimension);
    EXPECT_THROW(kId2 + ComplexMatrix::identity(4), InvalidDimension);
}

TEST(HermitianEig, PauliZ) {
    const EigenDecomposition eig = hermitian_eig(pauli_z());
    EXPECT_EQ(eig.eigenvalues, (std::vector<double>{-1.0, 1.0}));
    EXPECT_NEAR(frobenius_distance(eig.eigenvectors, ComplexMatrix(2, {0.0, 1.0, 1.0, 0.0})), 0.0, 1e-15);
}

TEST(HermitianEig, JointHamiltonianSpectrum) {
    const EigenDecomposition eig = hermitian_eig(hamiltonian_joint(HamiltonianSpec(1.0, 2.0)));
    const std::vector<double> expected{-std::sqrt(8.0), -2.0, 2.0, std::sqrt(8.0)};
    ASSERT_EQ(eig.eigenvalues.size(), 4u);
    for (std::size_t k = 0; k < 4; ++k) {
        EXPECT_NEAR(eig.eigenvalues[k], expected[k], 1e-12);
    }
}

TEST(HermitianEig, DegenerateSpectrumOrdersEigenvectorsLexicographically) {
    const EigenDecomposition eig = hermitian_eig(ComplexMatrix::identity(4));
    EXPECT_EQ(eig.eigenvalues, (std::vector<double>{1.0, 1.0, 1.0, 1.0}));
    // Real parts ascending lexicographically: e3 < e2 < e1 < e0.
    ComplexMatrix expected(4);
    for (std::size_t i = 0; i < 4; ++i) {
        expected(i, 3 - i) = 1.0;
    }
    EXPECT_EQ(eig.eigenvectors, expected);
}

TEST(HermitianEig, RejectsNonHermitian) {
    EXPECT_THROW(hermitian_eig(ComplexMatrix(2, {0.0, 1.0, 0.0, 0.0})), ContractViolation);
    EXPECT_THROW(hermitian_eig(ComplexMatrix(2, {Complex(0.0, 1.0), 0.0, 0.0, 0.0})), ContractViolation);
}

TEST(HermitianEig, ReconstructsRandomHermitianMatrices) {
    std::mt19937_64 rng(7);
    for (int n = 0; n < 500; ++n) {
        const ComplexMatrix m = random_hermitian(rng, n % 2 == 0 ? 2 : 4);
        const EigenDecomposition eig = hermitian_eig(m);
        EXPECT_LT(frobenius_distance(eig.reconstruct(), m), 1e-10);
        EXPECT_LT(frobenius_distance(eig.eigenvectors.adjoint() * eig.eigenvectors, ComplexMatrix::identity(m.dim())),
                  1e-10);
        for (std::size_t k = 0; k + 1 < eig.eigenvalues.size(); ++k) {
            EXPECT_LE(eig.eigenvalues[k], eig.eigenvalues[k + 1]);
        }
    }
}

TEST(HermitianEig, IsDeterministic) {
    std::mt19937_64 rng(3);
    const ComplexMatrix m = random_hermitian(rng, 4);
    const EigenDecomposition a = hermitian_eig(m);
    const EigenDecomposition b = hermitian_eig(m);
    EXPECT_EQ(a.eigenvalues, b.eigenvalues);
    EXPECT_EQ(a.eigenvectors, b.eigenvectors);
}

TEST(Evolve, ZeroTimeIsIdentity) {
    std::mt19937_64 rng(5);
    EXPECT_EQ(evolve(random_hermitian(rng, 4), 0.0), ComplexMatrix::identity(4));
}

TEST(Evolve, PauliZForHalfPeriod) {
    EXPECT_LT(frobenius_distance(evolve(pauli_z(), std::numbers::pi), ComplexMatrix::diagonal({-1.0, -1.0})), 1e-12);
}

TEST(Evolve, JointHamiltonianIsUnitary) {
    const ComplexMatrix h = hamiltonian_joint(HamiltonianSpec(1.0, 2.0));
    for (double t : {0.3, 1.7}) {
        const ComplexMatrix u = evolve(h, t);
        EXPECT_LT(frobenius_distance(u * u.adjoint(), ComplexMatrix::identity(4)), 1e-10);
    }
}

TEST(Evolve, MatchesTaylorSeriesOracle) {
    std::mt19937_64 rng(17);
    for (int n = 0; n < 100; ++n) {
        const ComplexMatrix h = random_hermitian(rng, n % 2 == 0 ? 2 : 4);
        const double t = qbattery::testing::uniform(rng, 0.0, 10.0);
        EXPECT_LT(frobenius_distance(evolve(h, t), qbattery::testing::taylor_evolve(h, t)), 1e-10);
    }
}

TEST(Evolve, GroupLaw) {
    std::mt19937_64 rng(19);
    const Propagator u(hamiltonian_joint(HamiltonianSpec(1.0, 2.0)));
    for (int n = 0; n < 200; ++n) {
        const double t1 = qbattery::testing::uniform(rng, 0.0, 10.0);
        const double t2 = qbattery::testing::uniform(rng, 0.0, 10.0);
        EXPECT_LT(frobenius_distance(u.at(t1) * u.at(t2), u.at(t1 + t2)), 1e-10);
    }
}

TEST(Evolve, RejectsNonHermitianGeneratorAndNegativeTime) {
    EXPECT_THROW(evolve(ComplexMatrix(2, {0.0, 1.0, 0.0, 0.0}), 1.0), ContractViolation);
    EXPECT_THROW(evolve(pauli_z(), -1.0), ContractViolation);
}

TEST(PartialTrace, ProductState) {
    const ComplexMatrix rho = bloch_state({0.6, 0.4, 1.1}).matrix();
    const ComplexMatrix sigma = bloch_state({0.9, 2.0, 4.0}).matrix();
    EXPECT_LT(frobenius_distance(partial_trace_second(kron(rho, sigma)), rho), 1e-15);
}

TEST(PartialTrace, BellStateIsMaximallyMixed) {
    const double a = 0.5;
    const ComplexMatrix bell(4, {a, 0, 0, a, 0, 0, 0, 0, 0, 0, 0, 0, a, 0, 0, a});
    EXPECT_LT(frobenius_distance(partial_trace_second(bell), 0.5 * kId2), 1e-15);
}

TEST(PartialTrace, RejectsSingleQubit) { EXPECT_THROW(partial_trace_second(kId2), InvalidDimension); }

TEST(PartialTrace, PreservesTrace) {
    std::mt19937_64 rng(23);
    for (int n = 0; n < 200; ++n) {
        const ComplexMatrix m = random_hermitian(rng, 4);
        EXPECT_NEAR(std::abs(partial_trace_second(m).trace() - m.trace()), 0.0, 1e-12);
    }
}
