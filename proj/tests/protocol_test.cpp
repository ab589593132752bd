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

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "oracle.hpp"
#include "qbattery/errors.hpp"

using namespace qbattery;
using qbattery::testing::uniform;

namespace {

constexpr double kTwoPi = 2 * std::numbers::pi;
const HamiltonianSpec kSpec(1.0, 2.0);

DensityMatrix random_separable(std::mt19937_64 &rng) {
    return separable_initial(uniform(rng, -1.0, 1.0),
                             {uniform(rng, 0.0, 1.0), qbattery::testing::haar_theta(rng), uniform(rng, 0.0, kTwoPi)});
}

DensityMatrix random_entangled(std::mt19937_64 &rng) {
    return entangled_initial({uniform(rng, -1.0, 1.0), qbattery::testing::haar_theta(rng), uniform(rng, 0.0, kTwoPi)});
}

MeasurementBasis random_basis(std::mt19937_64 &rng) {
    return {qbattery::testing::haar_theta(rng), uniform(rng, 0.0, kTwoPi)};
}

}  // namespace

TEST(MeasurementBasis, KetsAreOrthonormal) {
    std::mt19937_64 rng(41);
    for (int n = 0; n < 100; ++n) {
        const MeasurementBasis b = random_basis(rng);
        const QubitKet a = b.aligned();
        const QubitKet o = b.orthogonal();
        EXPECT_NEAR(std::norm(a[0]) + std::norm(a[1]), 1.0, 1e-14);
        EXPECT_NEAR(std::norm(o[0]) + std::norm(o[1]), 1.0, 1e-14);
        EXPECT_NEAR(std::abs(std::conj(a[0]) * o[0] + std::conj(a[1]) * o[1]), 0.0, 1e-14);
    }
}

TEST(SeparableInitial, Examples) {
    EXPECT_LT(frobenius_distance(separable_initial(1.0, {1.0, 0.0, 0.0}).matrix(),
                                 ComplexMatrix::diagonal({1.0, 0.0, 0.0, 0.0})),
              1e-15);
    EXPECT_LT(frobenius_distance(separable_initial(0.0, {0.0, 0.0, 0.0}).matrix(),
                                 ComplexMatrix::diagonal({0.25, 0.25, 0.25, 0.25})),
              1e-15);
}

TEST(SeparableInitial, BatteryMarginal) {
    std::mt19937_64 rng(43);
    for (int n = 0; n < 100; ++n) {
        const double k = uniform(rng, -1.0, 1.0);
        const DensityMatrix rho = separable_initial(k, {uniform(rng, 0.0, 1.0), 1.0, 2.0});
        EXPECT_LT(frobenius_distance(partial_trace_second(rho.matrix()), battery_state(k).matrix()), 1e-14);
    }
}

TEST(EntangledInitial, FullyChargedIsProduct) {
    // The ket phase e^{-i phi} maps to Bloch azimuth -phi.
    const DensityMatrix rho = entangled_initial({1.0, 0.8, 2.5});
    const ComplexMatrix expected = kron(battery_state(1.0).matrix(), bloch_state({1.0, 0.8, -2.5}).matrix());
    EXPECT_LT(frobenius_distance(rho.matrix(), expected), 1e-14);
}

TEST(EntangledInitial, MaximallyEntangledAtZero) {
    // (|00> - |11>)/sqrt(2) for a z-aligned auxiliary basis.
    const ComplexMatrix expected(4, {0.5, 0, 0, -0.5, 0, 0, 0, 0, 0, 0, 0, 0, -0.5, 0, 0, 0.5});
    EXPECT_LT(frobenius_distance(entangled_initial({0.0, 0.0, 0.0}).matrix(), expected), 1e-15);
}

TEST(EntangledInitial, BatteryMarginalIsDiagonal) {
    std::mt19937_64 rng(47);
    for (int n = 0; n < 100; ++n) {
        const EntangledInitParams p{uniform(rng, -1.0, 1.0), qbattery::testing::haar_theta(rng), uniform(rng, 0.0, kTwoPi)};
        const DensityMatrix rho = entangled_initial(p);
        EXPECT_NEAR(rho.matrix().trace().real(), 1.0, 1e-14);
        EXPECT_LT(frobenius_distance(partial_trace_second(rho.matrix()), battery_state(p.k).matrix()), 1e-14);
    }
}

TEST(EntangledInitial, RejectsOutOfRange) {
    EXPECT_THROW(entangled_initial({1.5, 0.0, 0.0}), DomainError);
    EXPECT_THROW(separable_initial(-1.5, {}), DomainError);
}

TEST(Protocol, NoCouplingExtractsNothing) {
    std::mt19937_64 rng(53);
    const ProtocolEngine engine(HamiltonianSpec(1.0, 0.0));
    for (int n = 0; n < 1000; ++n) {
        const DensityMatrix rho = n % 2 == 0 ? random_separable(rng) : random_entangled(rng);
        const double t = uniform(rng, 0.0, 10.0);
        const MeasurementBasis basis = random_basis(rng);
        for (Outcome o : {Outcome::kAligned, Outcome::kOrthogonal}) {
            const ProtocolResult r = engine.run(rho, t, basis, o);
            if (n % 2 == 0) {
                // Product states: the battery marginal only precesses.
                EXPECT_NEAR(r.w_p, 0.0, 1e-12);
            }
        }
        if (n % 2 == 0) {
            EXPECT_NEAR(engine.best(rho, t, basis).w_p, 0.0, 1e-12);
        }
    }
}

TEST(Protocol, GroundStateCannotDeliverWork) {
    std::mt19937_64 rng(59);
    const ProtocolEngine engine(kSpec);
    const DensityMatrix ground = separable_initial(-1.0, {1.0, std::numbers::pi, 0.0});
    for (int n = 0; n < 200; ++n) {
        const ProtocolResult r = engine.best(ground, uniform(rng, 0.0, 10.0), random_basis(rng));
        EXPECT_LE(r.w_p, 1e-12);
    }
}

TEST(Protocol, ExcitedStateTransfersThroughCoupling) {
    const ProtocolEngine engine(kSpec);
    const DensityMatrix excited = separable_initial(1.0, {1.0, 0.0, 0.0});
    const double omega = std::sqrt(8.0);
    for (double t : {0.1, 0.4, 1.0, 2.3}) {
        const ProtocolResult r = engine.run(excited, t, {0.0, 0.0}, Outcome::kOrthogonal);
        const double s = std::sin(omega * t);
        EXPECT_NEAR(r.probability, 0.5 * s * s, 1e-12);
        EXPECT_NEAR(r.delta_e, 2.0, 1e-10);
    }
}

TEST(Protocol, MatchesProjectionOracle) {
    std::mt19937_64 rng(61);
    const ProtocolEngine engine(kSpec);
    for (int n = 0; n < 300; ++n) {
        const DensityMatrix rho = n % 2 == 0 ? random_separable(rng) : random_entangled(rng);
        const double t = uniform(rng, 0.0, 10.0);
        const MeasurementBasis basis = random_basis(rng);
        for (Outcome o : {Outcome::kAligned, Outcome::kOrthogonal}) {
            const ProtocolResult r = engine.run(rho, t, basis, o);
            const auto expected = qbattery::testing::oracle_branch(kSpec, rho.matrix(), t, basis.ket(o));
            EXPECT_NEAR(r.probability, expected.probability, 1e-10);
            if (expected.probability > 1e-6) {
                ASSERT_FALSE(r.impossible());
                EXPECT_LT(frobenius_distance(r.post_state->matrix(), expected.post), 1e-8);
                EXPECT_NEAR(r.delta_e, expected.delta_e, 1e-8);
                EXPECT_NEAR(r.w_p, expected.probability * expected.delta_e, 1e-9);
            }
        }
    }
}

TEST(Protocol, ProbabilitiesAndEnergyBookkeeping) {
    std::mt19937_64 rng(67);
    const ProtocolEngine engine(kSpec);
    const ComplexMatrix hb = hamiltonian_battery(kSpec);
    for (int n = 0; n < 1000; ++n) {
        const DensityMatrix rho = n % 2 == 0 ? random_separable(rng) : random_entangled(rng);
        const double t = uniform(rng, 0.0, 10.0);
        const MeasurementBasis basis = random_basis(rng);
        const ProtocolResult a = engine.run(rho, t, basis, Outcome::kAligned);
        const ProtocolResult b = engine.run(rho, t, basis, Outcome::kOrthogonal);
        EXPECT_NEAR(a.probability + b.probability, 1.0, 1e-10);
        // Non-selective measurement leaves the battery marginal of the evolved state unchanged.
        const ComplexMatrix evolved = conjugate_by(evolve(hamiltonian_joint(kSpec), t), rho.matrix());
        const double e0 = (hb * partial_trace_second(rho.matrix())).trace().real();
        const double e1 = (hb * partial_trace_second(evolved)).trace().real();
        EXPECT_NEAR(a.w_p + b.w_p, e0 - e1, 1e-9);
        for (const ProtocolResult *r : {&a, &b}) {
            if (!r->impossible()) {
                EXPECT_NO_THROW(DensityMatrix(r->post_state->matrix()));
            }
        }
    }
}

TEST(Protocol, ZeroTimeEigenbasisMeasurementIsFree) {
    const ProtocolEngine engine(kSpec);
    for (double k : {-0.6, 0.0, 0.4}) {
        const DensityMatrix rho = separable_initial(k, {0.7, 0.0, 0.0});
        for (Outcome o : {Outcome::kAligned, Outcome::kOrthogonal}) {
            const ProtocolResult r = engine.run(rho, 0.0, {0.0, 0.0}, o);
            EXPECT_NEAR(r.delta_e, 0.0, 1e-14);
        }
    }
}

TEST(Protocol, BasisPhaseIsPeriodic) {
    std::mt19937_64 rng(71);
    const ProtocolEngine engine(kSpec);
    for (int n = 0; n < 100; ++n) {
        const DensityMatrix rho = random_entangled(rng);
        const double t = uniform(rng, 0.0, 10.0);
        const MeasurementBasis basis = random_basis(rng);
        const MeasurementBasis shifted{basis.theta, basis.phi + kTwoPi};
        EXPECT_NEAR(engine.best(rho, t, basis).w_p, engine.best(rho, t, shifted).w_p, 1e-10);
    }
}

TEST(Protocol, ImpossibleOutcome) {
    const ProtocolEngine engine(kSpec);
    const DensityMatrix rho = separable_initial(1.0, {1.0, 0.0, 0.0});
    const ProtocolResult r = engine.run(rho, 0.0, {0.0, 0.0}, Outcome::kOrthogonal);
    EXPECT_TRUE(r.impossible());
    EXPECT_EQ(r.w_p, 0.0);
    EXPECT_EQ(r.delta_e, 0.0);
    EXPECT_EQ(r.outcome_index(), 1);
}

TEST(Protocol, TiesFavourAlignedOutcome) {
    const DensityMatrix rho = separable_initial(1.0, {1.0, 0.0, 0.0});
    const ProtocolResult r = best_outcome(rho, kSpec, 0.0, {0.0, 0.0});
    EXPECT_EQ(r.outcome, Outcome::kAligned);
    EXPECT_EQ(r.w_p, 0.0);
}

TEST(Protocol, BestPicksTransferBranch) {
    const DensityMatrix rho = separable_initial(1.0, {1.0, 0.0, 0.0});
    const double quarter = std::numbers::pi / (2 * std::sqrt(8.0));
    const ProtocolResult r = best_outcome(rho, kSpec, quarter, {0.0, 0.0});
    EXPECT_EQ(r.outcome, Outcome::kOrthogonal);
    EXPECT_NEAR(r.w_p, 1.0, 1e-10);
}

TEST(Protocol, FastPathAgreesWithValidatedRun) {
    std::mt19937_64 rng(73);
    const ProtocolEngine engine(kSpec);
    for (int n = 0; n < 200; ++n) {
        const DensityMatrix rho = random_separable(rng);
        const double t = uniform(rng, 0.0, 10.0);
        const MeasurementBasis basis = random_basis(rng);
        const double e0 = (hamiltonian_battery(kSpec) * partial_trace_second(rho.matrix())).trace().real();
        const ProtocolEngine::Score s = engine.best_score(rho.matrix(), e0, t, basis);
        const ProtocolResult r = engine.best(rho, t, basis);
        EXPECT_EQ(s.outcome, r.outcome);
        EXPECT_NEAR(s.w_p, r.w_p, 1e-14);
    }
}

TEST(Protocol, RejectsSingleQubitState) {
    EXPECT_THROW(run_protocol(battery_state(0.0), kSpec, 1.0, {}, Outcome::kAligned), InvalidDimension);
    EXPECT_THROW(run_protocol(separable_initial(0.0, {}), kSpec, -1.0, {}, Outcome::kAligned), ContractViolation);
}
