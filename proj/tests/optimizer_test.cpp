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

#include "qbattery/optimizer.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <set>

#include "qbattery/errors.hpp"

using namespace qbattery;

namespace {

const HamiltonianSpec kSpec(1.0, 2.0);

}  // namespace

TEST(CounterRng, IsReproducibleAndStreamSeparated) {
    for (std::uint64_t stream = 0; stream < 10; ++stream) {
        CounterRng a(42, stream);
        CounterRng b(42, stream);
        for (int i = 0; i < 16; ++i) {
            EXPECT_EQ(a.next_u64(), b.next_u64());
        }
    }
    std::set<std::uint64_t> firsts;
    for (std::uint64_t stream = 0; stream < 1000; ++stream) {
        firsts.insert(CounterRng(42, stream).next_u64());
    }
    EXPECT_EQ(firsts.size(), 1000u);
    EXPECT_NE(derive_seed(1, 0), derive_seed(2, 0));
}

TEST(CounterRng, UniformInUnitInterval) {
    CounterRng rng(7, 0);
    double sum = 0.0;
    constexpr int n = 100000;
    for (int i = 0; i < n; ++i) {
        const double u = rng.uniform();
        ASSERT_GE(u, 0.0);
        ASSERT_LT(u, 1.0);
        sum += u;
    }
    EXPECT_NEAR(sum / n, 0.5, 0.005);
}

TEST(SamplePoint, PolarAnglesAreHaarDistributed) {
    const SearchSpace space{Family::kSeparable, 0.0, 10.0};
    CounterRng rng(3, 0);
    double mean_cos_aux = 0.0;
    double mean_cos_basis = 0.0;
    constexpr int n = 100000;
    for (int i = 0; i < n; ++i) {
        const ParameterVector p = sample_point(space, rng);
        mean_cos_aux += std::cos(p[1]);
        mean_cos_basis += std::cos(p[4]);
    }
    EXPECT_NEAR(mean_cos_aux / n, 0.0, 0.01);
    EXPECT_NEAR(mean_cos_basis / n, 0.0, 0.01);
}

TEST(SamplePoint, StaysWithinBounds) {
    for (Family family : {Family::kSeparable, Family::kEntangled}) {
        const SearchSpace space{family, 0.3, 4.0};
        const std::vector<ParameterBounds> bounds = parameter_bounds(space);
        ASSERT_EQ(bounds.size(), parameter_names(family).size());
        CounterRng rng(9, 1);
        for (int i = 0; i < 10000; ++i) {
            const ParameterVector p = sample_point(space, rng);
            ASSERT_EQ(p.size(), bounds.size());
            for (std::size_t d = 0; d < p.size(); ++d) {
                EXPECT_GE(p[d], bounds[d].lower);
                EXPECT_LE(p[d], bounds[d].upper);
            }
        }
    }
}

TEST(SamplePoint, SameSeedSameSequence) {
    const SearchSpace space{Family::kEntangled, -0.2, 10.0};
    CounterRng a(11, 5);
    CounterRng b(11, 5);
    for (int i = 0; i < 10; ++i) {
        EXPECT_EQ(sample_point(space, a), sample_point(space, b));
    }
}

TEST(ParameterBounds, RejectsInvalidSpaces) {
    EXPECT_THROW(parameter_bounds({Family::kSeparable, 1.5, 10.0}), ConfigurationError);
    EXPECT_THROW(parameter_bounds({Family::kSeparable, 0.0, 0.0}), ConfigurationError);
    EXPECT_THROW(parameter_bounds({Family::kEntangled, 0.0, -1.0}), ConfigurationError);
    EXPECT_THROW(parameter_bounds({Family::kEntangled, 0.0, INFINITY}), ConfigurationError);
}

TEST(Optimize, RejectsInvalidBudget) {
    EXPECT_THROW(optimize({Family::kSeparable, 0.0, 10.0}, kSpec, 0, 1), ConfigurationError);
    OptimizerOptions bad;
    bad.exploration_fraction = 0.0;
    EXPECT_THROW(optimize({Family::kSeparable, 0.0, 10.0}, kSpec, 100, 1, bad), ConfigurationError);
}

TEST(Optimize, GroundStateYieldsNothing) {
    for (Family family : {Family::kSeparable, Family::kEntangled}) {
        const OptimizationReport r = optimize({family, -1.0, 10.0}, kSpec, 20000, 1);
        EXPECT_NEAR(r.best_value, 0.0, 1e-9);
    }
}

TEST(Optimize, MaximallyMixedSeparable) {
    const OptimizationReport r = optimize({Family::kSeparable, 0.0, 10.0}, kSpec, 50000, 1);
    EXPECT_NEAR(r.best_value, 0.5, 0.02);
}

TEST(Optimize, FullyChargedFamiliesAgree) {
    const double s = optimize({Family::kSeparable, 1.0, 10.0}, kSpec, 20000, 1).best_value;
    const double e = optimize({Family::kEntangled, 1.0, 10.0}, kSpec, 20000, 1).best_value;
    EXPECT_NEAR(s, 2.0, 1e-2);
    EXPECT_NEAR(e, s, 1e-2);
}

TEST(Optimize, EntangledReachesOnePlusK) {
    for (double k : {-0.5, 0.0, 0.5}) {
        EXPECT_NEAR(optimize({Family::kEntangled, k, 10.0}, kSpec, 20000, 1).best_value, 1.0 + k, 1e-2) << "k=" << k;
    }
}

TEST(Optimize, ReportIsConsistent) {
    const SearchSpace space{Family::kSeparable, 0.2, 10.0};
    const OptimizationReport r = optimize(space, kSpec, 5000, 17);
    EXPECT_EQ(r.samples_used, 5000u);
    EXPECT_EQ(r.seed, 17u);
    EXPECT_GE(r.best_value, r.exploration_best);
    ASSERT_FALSE(r.trace.empty());
    EXPECT_EQ(r.trace.back().running_best, r.best_value);
    for (std::size_t i = 1; i < r.trace.size(); ++i) {
        EXPECT_GT(r.trace[i].running_best, r.trace[i - 1].running_best);
        EXPECT_GT(r.trace[i].sample_index, r.trace[i - 1].sample_index);
    }
    EXPECT_LT(r.trace.back().sample_index, r.samples_used);
    // The reported parameters reproduce the reported value.
    const ProtocolEngine::Score s = ParameterObjective(space, kSpec)(r.best_params);
    EXPECT_EQ(s.w_p, r.best_value);
    EXPECT_EQ(s.outcome, r.best_outcome);
}

TEST(Optimize, IsDeterministic) {
    const SearchSpace space{Family::kEntangled, -0.3, 10.0};
    const OptimizationReport a = optimize(space, kSpec, 4000, 5);
    const OptimizationReport b = optimize(space, kSpec, 4000, 5);
    EXPECT_EQ(a.best_value, b.best_value);
    EXPECT_EQ(a.best_params, b.best_params);
}

TEST(Optimize, IndependentOfThreadCount) {
    const SearchSpace space{Family::kSeparable, -0.4, 10.0};
    OptimizerOptions one;
    OptimizerOptions four;
    four.threads = 4;
    const OptimizationReport a = optimize(space, kSpec, 6000, 23, one);
    const OptimizationReport b = optimize(space, kSpec, 6000, 23, four);
    EXPECT_EQ(a.best_value, b.best_value);
    EXPECT_EQ(a.best_params, b.best_params);
    EXPECT_EQ(a.exploration_best, b.exploration_best);
    ASSERT_EQ(a.trace.size(), b.trace.size());
    for (std::size_t i = 0; i < a.trace.size(); ++i) {
        EXPECT_EQ(a.trace[i].sample_index, b.trace[i].sample_index);
        EXPECT_EQ(a.trace[i].running_best, b.trace[i].running_best);
    }
}

TEST(Optimize, ExplorationIsMonotoneInBudget) {
    // Exploration samples are keyed by index, so a larger budget scans a superset.
    const SearchSpace space{Family::kSeparable, 0.0, 10.0};
    double previous = -1.0;
    for (std::uint64_t budget : {1000u, 2000u, 4000u, 8000u}) {
        const OptimizationReport r = optimize(space, kSpec, budget, 3);
        EXPECT_GE(r.exploration_best, previous);
        previous = r.exploration_best;
    }
}

TEST(Optimize, DoublingBudgetDoesNotHurt) {
    for (double k : {-0.5, 0.0, 0.5}) {
        const SearchSpace space{Family::kSeparable, k, 10.0};
        const double small = optimize(space, kSpec, 10000, 1).best_value;
        const double large = optimize(space, kSpec, 20000, 1).best_value;
        EXPECT_GE(large, small - 1e-3) << "k=" << k;
    }
}

TEST(Optimize, BestValueIsNonNegative) {
    // Sample 0 sits at t = 0, where the two outcomes' W_P sum to zero.
    for (double k : {-1.0, -0.7, 0.0}) {
        EXPECT_GE(optimize({Family::kSeparable, k, 10.0}, kSpec, 1, 1).best_value, -1e-15);
        EXPECT_GE(optimize({Family::kEntangled, k, 10.0}, kSpec, 50, 1).best_value, -1e-15);
    }
}

TEST(Optimize, NoCouplingFindsNothing) {
    const OptimizationReport r = optimize({Family::kSeparable, 0.6, 10.0}, HamiltonianSpec(1.0, 0.0), 20000, 1);
    EXPECT_NEAR(r.best_value, 0.0, 1e-2);
}
