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

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "qbattery/errors.hpp"

namespace qbattery {

namespace {

void require_supported_dim(std::size_t dim) {
    if (dim != 2 && dim != 4) {
        throw InvalidDimension("matrix dimension must be 2 or 4, got " + std::to_string(dim));
    }
}

void require_same_dim(const ComplexMatrix &a, const ComplexMatrix &b) {
    if (a.dim() != b.dim()) {
        throw InvalidDimension("dimension mismatch: " + std::to_string(a.dim()) + " vs " +
                               std::to_string(b.dim()));
    }
}

constexpr double kHermitianTol = 1e-12;
constexpr double kJacobiTol = 1e-13;
constexpr int kMaxJacobiSweeps = 100;

// Degenerate-eigenvalue tie detection.
bool nearly_equal(double a, double b) {
    return std::abs(a - b) <= 1e-12 * std::max({1.0, std::abs(a), std::abs(b)});
}

}  // namespace

ComplexMatrix::ComplexMatrix(std::size_t dim) : dim_(dim) { require_supported_dim(dim); }

ComplexMatrix::ComplexMatrix(std::size_t dim, std::initializer_list<Complex> entries) : dim_(dim) {
    require_supported_dim(dim);
    if (entries.size() != dim * dim) {
        throw InvalidDimension("expected " + std::to_string(dim * dim) + " entries, got " +
                               std::to_string(entries.size()));
    }
    std::size_t n = 0;
    for (const Complex &z : entries) {
        (*this)(n / dim, n % dim) = z;
        ++n;
    }
}

ComplexMatrix ComplexMatrix::identity(std::size_t dim) {
    ComplexMatrix m(dim);
    for (std::size_t i = 0; i < dim; ++i) {
        m(i, i) = 1.0;
    }
    return m;
}

ComplexMatrix ComplexMatrix::diagonal(std::initializer_list<Complex> diag) {
    ComplexMatrix m(diag.size());
    std::size_t i = 0;
    for (const Complex &z : diag) {
        m(i, i) = z;
        ++i;
    }
    return m;
}

ComplexMatrix ComplexMatrix::adjoint() const {
    ComplexMatrix out(dim_);
    for (std::size_t i = 0; i < dim_; ++i) {
        for (std::size_t j = 0; j < dim_; ++j) {
            out(i, j) = std::conj((*this)(j, i));
        }
    }
    return out;
}

Complex ComplexMatrix::trace() const {
    Complex acc = 0.0;
    for (std::size_t i = 0; i < dim_; ++i) {
        acc += (*this)(i, i);
    }
    return acc;
}

double ComplexMatrix::frobenius_norm() const {
    double acc = 0.0;
    for (std::size_t i = 0; i < dim_; ++i) {
        for (std::size_t j = 0; j < dim_; ++j) {
            acc += std::norm((*this)(i, j));
        }
    }
    return std::sqrt(acc);
}

double ComplexMatrix::off_diagonal_norm() const {
    double acc = 0.0;
    for (std::size_t i = 0; i < dim_; ++i) {
        for (std::size_t j = 0; j < dim_; ++j) {
            if (i != j) {
                acc += std::norm((*this)(i, j));
            }
        }
    }
    return std::sqrt(acc);
}

bool ComplexMatrix::is_hermitian(double tol) const {
    for (std::size_t i = 0; i < dim_; ++i) {
        for (std::size_t j = i; j < dim_; ++j) {
            if (std::abs((*this)(i, j) - std::conj((*this)(j, i))) > tol) {
                return false;
            }
        }
    }
    return true;
}

ComplexMatrix &ComplexMatrix::operator+=(const ComplexMatrix &other) {
    require_same_dim(*this, other);
    for (std::size_t i = 0; i < dim_; ++i) {
        for (std::size_t j = 0; j < dim_; ++j) {
            (*this)(i, j) += other(i, j);
        }
    }
    return *this;
}

ComplexMatrix &ComplexMatrix::operator-=(const ComplexMatrix &other) {
    require_same_dim(*this, other);
    for (std::size_t i = 0; i < dim_; ++i) {
        for (std::size_t j = 0; j < dim_; ++j) {
            (*this)(i, j) -= other(i, j);
        }
    }
    return *this;
}

ComplexMatrix &ComplexMatrix::operator*=(Complex scalar) {
    for (auto &z : data_) {
        z *= scalar;
    }
    return *this;
}

ComplexMatrix operator*(const ComplexMatrix &a, const ComplexMatrix &b) {
    require_same_dim(a, b);
    const std::size_t n = a.dim();
    ComplexMatrix out(n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t k = 0; k < n; ++k) {
            const Complex aik = a(i, k);
            for (std::size_t j = 0; j < n; ++j) {
                out(i, j) += aik * b(k, j);
            }
        }
    }
    return out;
}

bool operator==(const ComplexMatrix &a, const ComplexMatrix &b) {
    if (a.dim() != b.dim()) {
        return false;
    }
    for (std::size_t i = 0; i < a.dim(); ++i) {
        for (std::size_t j = 0; j < a.dim(); ++j) {
            if (a(i, j) != b(i, j)) {
                return false;
            }
        }
    }
    return true;
}

double frobenius_distance(const ComplexMatrix &a, const ComplexMatrix &b) { return (a - b).frobenius_norm(); }

ComplexMatrix commutator(const ComplexMatrix &a, const ComplexMatrix &b) { return a * b - b * a; }

ComplexMatrix pauli_x() { return ComplexMatrix(2, {0.0, 1.0, 1.0, 0.0}); }

ComplexMatrix pauli_y() { return ComplexMatrix(2, {0.0, Complex(0.0, -1.0), Complex(0.0, 1.0), 0.0}); }

ComplexMatrix pauli_z() { return ComplexMatrix(2, {1.0, 0.0, 0.0, -1.0}); }

ComplexMatrix kron(const ComplexMatrix &a, const ComplexMatrix &b) {
    if (a.dim() != 2 || b.dim() != 2) {
        throw InvalidDimension("kron expects two 2x2 operands");
    }
    ComplexMatrix out(4);
    for (std::size_t i = 0; i < 2; ++i) {
        for (std::size_t j = 0; j < 2; ++j) {
            for (std::size_t k = 0; k < 2; ++k) {
                for (std::size_t l = 0; l < 2; ++l) {
                    out(2 * i + k, 2 * j + l) = a(i, j) * b(k, l);
                }
            }
        }
    }
    return out;
}

ComplexMatrix EigenDecomposition::reconstruct() const {
    const std::size_t n = eigenvectors.dim();
    ComplexMatrix out(n);
    for (std::size_t k = 0; k < n; ++k) {
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = 0; j < n; ++j) {
                out(i, j) += eigenvalues[k] * eigenvectors(i, k) * std::conj(eigenvectors(j, k));
            }
        }
    }
    return out;
}

EigenDecomposition hermitian_eig(const ComplexMatrix &m) {
    if (!m.is_hermitian(kHermitianTol)) {
        throw ContractViolation("hermitian_eig: input is not Hermitian");
    }
    const std::size_t n = m.dim();
    ComplexMatrix a = m;
    ComplexMatrix v = ComplexMatrix::identity(n);
    for (std::size_t i = 0; i < n; ++i) {
        a(i, i) = a(i, i).real();
    }
    const double tol = kJacobiTol * std::max(1.0, m.frobenius_norm());

    for (int sweep = 0; sweep < kMaxJacobiSweeps && a.off_diagonal_norm() >= tol; ++sweep) {
        for (std::size_t p = 0; p + 1 < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                const Complex b = a(p, q);
                const double mag = std::abs(b);
                if (mag == 0.0) {
                    continue;
                }
                // Phase q so the pivot becomes real, then apply the real
                // symmetric Jacobi rotation. G = diag(1, e^{-i alpha}) R.
                const Complex phase = std::conj(b) / mag;
                const double theta = (a(q, q).real() - a(p, p).real()) / (2.0 * mag);
                const double t = (theta >= 0.0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double s = t * c;
                const Complex g_pp = c;
                const Complex g_pq = s;
                const Complex g_qp = -s * phase;
                const Complex g_qq = c * phase;

                for (std::size_t k = 0; k < n; ++k) {
                    const Complex akp = a(k, p);
                    const Complex akq = a(k, q);
                    a(k, p) = akp * g_pp + akq * g_qp;
                    a(k, q) = akp * g_pq + akq * g_qq;
                    const Complex vkp = v(k, p);
                    const Complex vkq = v(k, q);
                    v(k, p) = vkp * g_pp + vkq * g_qp;
                    v(k, q) = vkp * g_pq + vkq * g_qq;
                }
                for (std::size_t k = 0; k < n; ++k) {
                    const Complex apk = a(p, k);
                    const Complex aqk = a(q, k);
                    a(p, k) = std::conj(g_pp) * apk + std::conj(g_qp) * aqk;
                    a(q, k) = std::conj(g_pq) * apk + std::conj(g_qq) * aqk;
                }
                a(p, q) = 0.0;
                a(q, p) = 0.0;
                a(p, p) = a(p, p).real();
                a(q, q) = a(q, q).real();
            }
        }
    }

    // Phase convention: first maximal-modulus component real and positive.
    for (std::size_t k = 0; k < n; ++k) {
        double largest = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            largest = std::max(largest, std::abs(v(i, k)));
        }
        for (std::size_t i = 0; i < n; ++i) {
            const double mag = std::abs(v(i, k));
            if (mag >= largest - 1e-12) {
                const Complex phase = std::conj(v(i, k)) / mag;
                for (std::size_t j = 0; j < n; ++j) {
                    v(j, k) *= phase;
                }
                v(i, k) = mag;
                break;
            }
        }
    }

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t x, std::size_t y) { return a(x, x).real() < a(y, y).real(); });
    auto lexicographic = [&](std::size_t x, std::size_t y) {
        for (std::size_t i = 0; i < n; ++i) {
            if (v(i, x).real() != v(i, y).real()) {
                return v(i, x).real() < v(i, y).real();
            }
        }
        for (std::size_t i = 0; i < n; ++i) {
            if (v(i, x).imag() != v(i, y).imag()) {
                return v(i, x).imag() < v(i, y).imag();
            }
        }
        return false;
    };
    for (std::size_t start = 0; start < n;) {
        std::size_t stop = start + 1;
        while (stop < n && nearly_equal(a(order[stop - 1], order[stop - 1]).real(), a(order[stop], order[stop]).real())) {
            ++stop;
        }
        std::stable_sort(order.begin() + static_cast<std::ptrdiff_t>(start),
                         order.begin() + static_cast<std::ptrdiff_t>(stop), lexicographic);
        start = stop;
    }

    EigenDecomposition out{std::vector<double>(n), ComplexMatrix(n)};
    for (std::size_t k = 0; k < n; ++k) {
        out.eigenvalues[k] = a(order[k], order[k]).real();
        for (std::size_t i = 0; i < n; ++i) {
            out.eigenvectors(i, k) = v(i, order[k]);
        }
    }
    return out;
}

Propagator::Propagator(const ComplexMatrix &generator) : spectrum_(hermitian_eig(generator)) {}

ComplexMatrix Propagator::at(double t) const {
    if (!(t >= 0.0)) {
        throw ContractViolation("evolution time must be non-negative");
    }
    const std::size_t n = spectrum_.eigenvectors.dim();
    if (t == 0.0) {
        return ComplexMatrix::identity(n);
    }
    const ComplexMatrix &vecs = spectrum_.eigenvectors;
    ComplexMatrix u(n);
    for (std::size_t k = 0; k < n; ++k) {
        const double angle = -spectrum_.eigenvalues[k] * t;
        const Complex phase(std::cos(angle), std::sin(angle));
        for (std::size_t i = 0; i < n; ++i) {
            const Complex left = phase * vecs(i, k);
            for (std::size_t j = 0; j < n; ++j) {
                u(i, j) += left * std::conj(vecs(j, k));
            }
        }
    }
    return u;
}

ComplexMatrix evolve(const ComplexMatrix &h_total, double t) { return Propagator(h_total).at(t); }

ComplexMatrix conjugate_by(const ComplexMatrix &u, const ComplexMatrix &rho) { return u * rho * u.adjoint(); }

ComplexMatrix partial_trace_second(const ComplexMatrix &rho) {
    if (rho.dim() != 4) {
        throw InvalidDimension("partial_trace_second expects a 4x4 operator");
    }
    ComplexMatrix out(2);
    for (std::size_t i = 0; i < 2; ++i) {
        for (std::size_t j = 0; j < 2; ++j) {
            out(i, j) = rho(2 * i, 2 * j) + rho(2 * i + 1, 2 * j + 1);
        }
    }
    return out;
}

}  // namespace qbattery
