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
#include <complex>
#include <cstddef>
#include <initializer_list>
#include <vector>

namespace qbattery {

using Complex = std::complex<double>;

/// Dense complex matrix of dimension 2 (one qubit) or 4 (two qubits).
///
/// Storage is inline and row-major; the type is a plain value and cheap to
/// copy. Arithmetic between matrices of different dimensions throws
/// InvalidDimension.
class ComplexMatrix {
  public:
    static constexpr std::size_t kMaxDim = 4;

    /// Zero matrix of the given dimension (2 or 4).
    explicit ComplexMatrix(std::size_t dim = 2);

    /// Row-major construction; `entries.size()` must be dim*dim.
    ComplexMatrix(std::size_t dim, std::initializer_list<Complex> entries);

    static ComplexMatrix identity(std::size_t dim);
    static ComplexMatrix diagonal(std::initializer_list<Complex> diag);

    std::size_t dim() const noexcept { return dim_; }

    Complex &operator()(std::size_t row, std::size_t col) noexcept { return data_[row * kMaxDim + col]; }
    const Complex &operator()(std::size_t row, std::size_t col) const noexcept {
        return data_[row * kMaxDim + col];
    }

    ComplexMatrix adjoint() const;
    Complex trace() const;
    double frobenius_norm() const;
    /// Frobenius norm of the strictly off-diagonal part.
    double off_diagonal_norm() const;
    bool is_hermitian(double tol = 1e-12) const;

    ComplexMatrix &operator+=(const ComplexMatrix &other);
    ComplexMatrix &operator-=(const ComplexMatrix &other);
    ComplexMatrix &operator*=(Complex scalar);

    friend ComplexMatrix operator+(ComplexMatrix a, const ComplexMatrix &b) { return a += b; }
    friend ComplexMatrix operator-(ComplexMatrix a, const ComplexMatrix &b) { return a -= b; }
    friend ComplexMatrix operator*(ComplexMatrix a, Complex s) { return a *= s; }
    friend ComplexMatrix operator*(Complex s, ComplexMatrix a) { return a *= s; }
    friend ComplexMatrix operator*(const ComplexMatrix &a, const ComplexMatrix &b);
    friend bool operator==(const ComplexMatrix &a, const ComplexMatrix &b);

  private:
    std::size_t dim_;
    std::array<Complex, kMaxDim * kMaxDim> data_{};
};

/// ||a - b||_F. Throws InvalidDimension on mismatch.
double frobenius_distance(const ComplexMatrix &a, const ComplexMatrix &b);

/// [a, b] = ab - ba.
ComplexMatrix commutator(const ComplexMatrix &a, const ComplexMatrix &b);

ComplexMatrix pauli_x();
ComplexMatrix pauli_y();
ComplexMatrix pauli_z();

/// Tensor product of two single-qubit operators; block (i, j) equals a(i, j) * b.
ComplexMatrix kron(const ComplexMatrix &a, const ComplexMatrix &b);

/// Spectral decomposition of a Hermitian matrix.
///
/// Eigenvalues ascend; column k of `eigenvectors` pairs with eigenvalues[k].
/// Nearly equal eigenvalues (within 1e-12 relative) are ordered by a
/// lexicographic comparison of their eigenvector real parts so that
/// degenerate spectra decompose reproducibly. Each eigenvector is phased so
/// that its first component of maximal modulus is real and positive.
struct EigenDecomposition {
    std::vector<double> eigenvalues;
    ComplexMatrix eigenvectors;

    /// V diag(lambda) V^dagger.
    ComplexMatrix reconstruct() const;
};

/// Cyclic Jacobi diagonalization, iterated until the off-diagonal Frobenius
/// norm drops below 1e-13 (relative to max(1, ||m||_F)).
/// Throws ContractViolation when m is not Hermitian within 1e-12.
EigenDecomposition hermitian_eig(const ComplexMatrix &m);

/// Time-evolution operator exp(-i H t) for a fixed Hermitian generator (hbar = 1).
///
/// The generator is diagonalized once; each call to at() only exponentiates
/// the eigenvalues, so a Propagator is the cheap way to evolve repeatedly
/// under the same Hamiltonian.
class Propagator {
  public:
    explicit Propagator(const ComplexMatrix &generator);

    /// exp(-i H t); exactly the identity at t = 0. Throws ContractViolation for t < 0.
    ComplexMatrix at(double t) const;

    const EigenDecomposition &spectrum() const noexcept { return spectrum_; }

  private:
    EigenDecomposition spectrum_;
};

/// exp(-i h_total t) via exact eigendecomposition.
ComplexMatrix evolve(const ComplexMatrix &h_total, double t);

/// U rho U^dagger.
ComplexMatrix conjugate_by(const ComplexMatrix &u, const ComplexMatrix &rho);

/// Traces out the second qubit of a 4x4 operator: out(i, j) = sum_a m(2i + a, 2j + a).
ComplexMatrix partial_trace_second(const ComplexMatrix &rho);

}  // namespace qbattery
