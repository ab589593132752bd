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
#include <cstdint>
#include <string>
#include <vector>

#include "qbattery/battery.hpp"

namespace qbattery {

/// Outcome of one numerical self-check.
struct SuiteResult {
    std::string name;
    bool passed = false;
    /// Largest residual observed, in the suite's own measure (absolute or relative).
    double max_residual = 0.0;
    double tolerance = 0.0;
    std::string note;
};

struct VerifyOptions {
    HamiltonianSpec spec;
    std::uint64_t seed = 1;
    /// Absolute tolerance for the closed-form W_P vs. explicit evolution.
    double closed_form_tolerance = 1e-9;
    std::size_t closed_form_samples = 1000;
    double closed_form_t_max = 10.0;
    /// Relative tolerance of the fitted t^4 coefficient.
    double quartic_tolerance = 1e-2;
    std::size_t quartic_samples = 100;
    std::size_t random_states = 10000;
    /// Evaluations per optimizer run in the no-coupling search.
    std::uint64_t optimizer_budget = 20000;
};

/// Runs every invariant and closed-form-vs-oracle check for `options.spec`.
/// The no-coupling suites always use J = 0 with the configured h.
std::vector<SuiteResult> run_verification(const VerifyOptions &options);

/// Least-squares c in W ~ c t^4.
double fit_quartic_coefficient(const std::vector<double> &times, const std::vector<double> &values);

}  // namespace qbattery
