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

#include "qbattery/verify.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numbers>

#include "qbattery/analytic.hpp"
#include "qbattery/optimizer.hpp"
#include "qbattery/protocol.hpp"
#include "qbattery/qmath.hpp"

namespace qbattery {

namespace {

constexpr double kPi = std::numbers::pi;

class Draws {
  public:
    Draws(std::uint64_t seed, std::uint64_t suite) : rng_(seed, suite) {}

    double uniform(double lo = 0.0, double hi = 1.0) { return lo + (hi - lo) * rng_.uniform(); }
    double polar() { return std::acos(uniform(-1.0, 1.0)); }

    BlochVector bloch() { return {uniform(), polar(), uniform(0.0, 2.0 * kPi)}; }
    MeasurementBasis basis() { return {polar(), uniform(0.0, 2.0 * kPi)}; }

    ComplexMatrix hermitian(std::size_t dim) {
        ComplexMatrix m(dim);
        for (std::size_t i = 0; i < dim; ++i) {
            m(i, i) = uniform(-2.0, 2.0);
            for (std::size_t j = i + 1; j < dim; ++j) {
                m(i, j) = Complex(uniform(-1.0, 1.0), uniform(-1.0, 1.0));
                m(j, i) = std::conj(m(i, j));
            }
        }
        return m;
    }

    DensityMatrix joint_state() {
        if (uniform() < 0.5) {
            return separable_initial(uniform(-1.0, 1.0), bloch());
        }
        return entangled_initial({uniform(-1.0, 1.0), polar(), uniform(0.0, 2.0 * kPi)});
    }

  private:
    CounterRng rng_;
};

class Tally {
  public:
    Tally(std::string name, double tolerance) { result_.name = std::move(name), result_.tolerance = tolerance; }

    void observe(double residual) {
        if (!std::isfinite(residual)) {
            residual = std::numeric_limits<double>::infinity();
        }
        result_.max_residual = std::max(result_.max_residual, residual);
    }

    SuiteResult finish(std::string note = {}) {
        result_.passed = result_.max_residual <= result_.tolerance;
        result_.note = std::move(note);
        return result_;
    }

  private:
    SuiteResult result_;
};

SuiteResult eigensystem_suite(const VerifyOptions &o) {
    Tally tally("hermitian eigendecomposition", 1e-10);
    Draws draws(o.seed, 1);
    for (int n = 0; n < 500; ++n) {
        const ComplexMatrix m = draws.hermitian(n % 2 == 0 ? 2 : 4);
        const EigenDecomposition eig = hermitian_eig(m);
        tally.observe(frobenius_distance(eig.reconstruct(), m));
        tally.observe(frobenius_distance(eig.eigenvectors.adjoint() * eig.eigenvectors,
                                         ComplexMatrix::identity(m.dim())));
        for (std::size_t k = 0; k + 1 < eig.eigenvalues.size(); ++k) {
            tally.observe(std::max(0.0, eig.eigenvalues[k] - eig.eigenvalues[k + 1]));
        }
    }
    return tally.finish();
}

SuiteResult evolution_suite(const VerifyOptions &o) {
    Tally tally("evolution group law and unitarity", 1e-10);
    Draws draws(o.seed, 2);
    const Propagator propagator(hamiltonian_joint(o.spec));
    for (int n = 0; n < 200; ++n) {
        const double t1 = draws.uniform(0.0, 10.0);
        const double t2 = draws.uniform(0.0, 10.0);
        const ComplexMatrix u1 = propagator.at(t1);
        tally.observe(frobenius_distance(u1 * propagator.at(t2), propagator.at(t1 + t2)));
        tally.observe(frobenius_distance(u1 * u1.adjoint(), ComplexMatrix::identity(4)));
    }
    return tally.finish();
}

SuiteResult trace_suite(const VerifyOptions &o) {
    Tally tally("partial trace and tensor product traces", 1e-12);
    Draws draws(o.seed, 3);
    for (int n = 0; n < 500; ++n) {
        const DensityMatrix rho = draws.joint_state();
        tally.observe(std::abs(partial_trace_second(rho.matrix()).trace() - rho.matrix().trace()));
        const ComplexMatrix a = draws.hermitian(2);
        const ComplexMatrix b = draws.hermitian(2);
        tally.observe(std::abs(kron(a, b).trace() - a.trace() * b.trace()));
    }
    return tally.finish();
}

SuiteResult ergotropy_suite(const VerifyOptions &o) {
    Tally tally("ergotropy and passive states", 1e-10);
    Draws draws(o.seed, 4);
    const ComplexMatrix h_battery = hamiltonian_battery(o.spec);
    for (std::size_t n = 0; n < o.random_states; ++n) {
        const DensityMatrix rho = bloch_state(draws.bloch());
        const double w = ergotropy(rho, o.spec);
        tally.observe(std::max(0.0, -w));
        const DensityMatrix sigma = passive_state(rho, h_battery);
        tally.observe(ergotropy(sigma, o.spec));
        tally.observe(frobenius_distance(passive_state(sigma, h_battery).matrix(), sigma.matrix()));
        tally.observe(commutator(sigma.matrix(), h_battery).frobenius_norm());
    }
    for (int i = 0; i <= 200; ++i) {
        const double k = -1.0 + 0.01 * i;
        const double expected = k >= 0.0 ? 2.0 * o.spec.h() * k : 0.0;
        tally.observe(std::abs(ergotropy(battery_state(k), o.spec) - expected));
    }
    return tally.finish();
}

SuiteResult measurement_suite(const VerifyOptions &o) {
    Tally tally("measurement bookkeeping", 1e-10);
    Draws draws(o.seed, 5);
    const ProtocolEngine engine(o.spec);
    const Propagator propagator(hamiltonian_joint(o.spec));
    for (int n = 0; n < 2000; ++n) {
        const DensityMatrix rho0 = draws.joint_state();
        const double t = draws.uniform(0.0, 10.0);
        MeasurementBasis basis = draws.basis();
        const ProtocolResult a = engine.run(rho0, t, basis, Outcome::kAligned);
        const ProtocolResult b = engine.run(rho0, t, basis, Outcome::kOrthogonal);
        tally.observe(std::abs(a.probability + b.probability - 1.0));
        tally.observe(std::abs(a.w_p - a.probability * a.delta_e));
        const DensityMatrix marginal0(partial_trace_second(rho0.matrix()));
        const DensityMatrix marginal_t(partial_trace_second(conjugate_by(propagator.at(t), rho0.matrix())));
        const double bookkeeping = energy(marginal0, o.spec) - energy(marginal_t, o.spec);
        tally.observe(std::abs(a.w_p + b.w_p - bookkeeping));
        basis.phi += 2.0 * kPi;
        tally.observe(std::abs(engine.run(rho0, t, basis, Outcome::kAligned).w_p - a.w_p));
    }
    return tally.finish();
}

SuiteResult closed_form_suite(const VerifyOptions &o) {
    Tally tally("closed-form W_P vs explicit evolution", o.closed_form_tolerance);
    Draws draws(o.seed, 6);
    const ProtocolEngine engine(o.spec);
    for (std::size_t n = 0; n < o.closed_form_samples; ++n) {
        const double s = draws.uniform();
        const double theta = draws.uniform(0.0, kPi);
        const double t = draws.uniform(0.0, o.closed_form_t_max);
        tally.observe(std::abs(wp_closed_form(s, theta, o.spec, t) - wp_probe_oracle(s, theta, engine, t)));
    }
    return tally.finish();
}

SuiteResult quartic_suite(const VerifyOptions &o) {
    Tally tally("small-t quartic law (relative)", o.quartic_tolerance);
    Draws draws(o.seed, 7);
    const ProtocolEngine engine(o.spec);
    const std::vector<double> times{1e-3, 2e-3, 4e-3};
    for (std::size_t n = 0; n < o.quartic_samples; ++n) {
        const double s = draws.uniform();
        const double theta = draws.uniform(0.0, kPi);
        std::vector<double> values;
        for (double t : times) {
            values.push_back(wp_probe_oracle(s, theta, engine, t));
        }
        const double fitted = fit_quartic_coefficient(times, values);
        const double expected = wp_small_t(s, theta, o.spec);
        tally.observe(expected != 0.0 ? std::abs(fitted - expected) / std::abs(expected) : std::abs(fitted));
    }
    return tally.finish();
}

SuiteResult excited_suite(const VerifyOptions &o) {
    Tally tally("fully charged battery extraction", 1e-9);
    const double quarter = excited_quarter_period(o.spec);
    const double coupling2 = o.spec.coupling() * o.spec.coupling();
    const double peak = 2.0 * o.spec.h() * coupling2 / (4.0 * o.spec.h() * o.spec.h() + coupling2);
    const double at_quarter = wp_excited_oracle(o.spec, quarter);
    tally.observe(std::abs(at_quarter - peak));
    for (int i = 0; i <= 100; ++i) {
        const double t = 0.1 * i;
        tally.observe(std::abs(wp_excited_oracle(o.spec, t) - wp_excited_two_level(o.spec, t)));
    }
    char note[160];
    std::snprintf(note, sizeof note, "oracle at quarter period %.12g, quoted sin((4h^2+J^2)t) form %.12g",
                  at_quarter, wp_excited_quoted(o.spec, quarter));
    return tally.finish(note);
}

SuiteResult entropy_suite(const VerifyOptions &) {
    Tally tally("entanglement entropy", 1e-12);
    for (int i = 0; i <= 200; ++i) {
        const double k = -1.0 + 0.01 * i;
        const double e = entanglement_entropy(k);
        tally.observe(std::max({0.0, -e, e - 1.0}));
        tally.observe(std::abs(e - entanglement_entropy(-k)));
        if (i > 0 && i < 200) {
            const double mid = 0.5 * (entanglement_entropy(k - 0.01) + entanglement_entropy(k + 0.01));
            tally.observe(std::max(0.0, mid - e));
        }
    }
    tally.observe(std::abs(entanglement_entropy(0.0) - 1.0));
    return tally.finish();
}

SuiteResult no_coupling_suite(const VerifyOptions &o) {
    Tally tally("no coupling, no extraction (J = 0)", 1e-12);
    Draws draws(o.seed, 8);
    const ProtocolEngine engine(HamiltonianSpec(o.spec.h(), 0.0));
    for (int n = 0; n < 2000; ++n) {
        const DensityMatrix rho0 = separable_initial(draws.uniform(-1.0, 1.0), draws.bloch());
        const double t = draws.uniform(0.0, 10.0);
        const MeasurementBasis basis = draws.basis();
        tally.observe(std::abs(engine.run(rho0, t, basis, Outcome::kAligned).w_p));
        tally.observe(std::abs(engine.run(rho0, t, basis, Outcome::kOrthogonal).w_p));
    }
    return tally.finish();
}

SuiteResult no_coupling_optimizer_suite(const VerifyOptions &o) {
    Tally tally("no coupling, optimized separable extraction (J = 0)", 1e-2);
    const HamiltonianSpec uncoupled(o.spec.h(), 0.0);
    for (double k : {-1.0, -0.5, 0.0, 0.5, 1.0}) {
        const OptimizationReport report =
            optimize({Family::kSeparable, k, o.closed_form_t_max}, uncoupled, o.optimizer_budget, o.seed);
        tally.observe(std::abs(report.best_value) / o.spec.h());
    }
    return tally.finish();
}

}  // namespace

double fit_quartic_coefficient(const std::vector<double> &times, const std::vector<double> &values) {
    double num = 0.0;
    double den = 0.0;
    for (std::size_t i = 0; i < times.size(); ++i) {
        const double t4 = std::pow(times[i], 4);
        num += values[i] * t4;
        den += t4 * t4;
    }
    return num / den;
}

std::vector<SuiteResult> run_verification(const VerifyOptions &options) {
    return {
        eigensystem_suite(options), evolution_suite(options), trace_suite(options),
        ergotropy_suite(options),   measurement_suite(options), closed_form_suite(options),
        quartic_suite(options),     excited_suite(options),     entropy_suite(options),
        no_coupling_suite(options), no_coupling_optimizer_suite(options),
    };
}

}  // namespace qbattery
