// Copyright 2026 The jcsub Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// numerics.hpp - dense complex matrix kernel: checked algebra, Hermitian
// eigendecomposition and unitary propagators.

#pragma once

#include <Eigen/Dense>

#include <complex>
#include <stdexcept>
#include <string>

namespace jcsub {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;

inline constexpr Complex kI{0.0, 1.0};

/// Rejected input: bad dimensions, non-Hermitian operators, invalid states.
class InputError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Two independent computation routes disagreed beyond tolerance.
class CrossCheckError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

namespace num {

// Checked algebra. Eigen only asserts conformability in debug builds.
ComplexMatrix matmul(const ComplexMatrix& a, const ComplexMatrix& b);
ComplexMatrix add(const ComplexMatrix& a, const ComplexMatrix& b);
ComplexMatrix subtract(const ComplexMatrix& a, const ComplexMatrix& b);
ComplexMatrix adjoint(const ComplexMatrix& m);
Complex trace(const ComplexMatrix& m);
double max_abs(const ComplexMatrix& m);
ComplexMatrix commutator(const ComplexMatrix& a, const ComplexMatrix& b);
ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b);

bool all_finite(const ComplexMatrix& m);
void require_square(const ComplexMatrix& m, const char* what);
void require_same_shape(const ComplexMatrix& a, const ComplexMatrix& b, const char* what);

/// max |M - M^dagger| measured against tol * max(1, max_abs(M)).
bool is_hermitian(const ComplexMatrix& m, double tol = 1e-12);
/// max |U^dagger U - I|.
double unitarity_defect(const ComplexMatrix& u);

}  // namespace num

/// A square matrix that passed the Hermiticity check at construction.
/// The stored matrix is symmetrized, so downstream solvers see an exactly
/// Hermitian operand.
class Hermitian {
public:
    static constexpr double kDefaultTolerance = 1e-12;

    explicit Hermitian(const ComplexMatrix& m, double tolerance = kDefaultTolerance);

    const ComplexMatrix& matrix() const noexcept { return m_; }
    Eigen::Index dim() const noexcept { return m_.rows(); }
    double tolerance() const noexcept { return tol_; }

private:
    ComplexMatrix m_;
    double tol_;
};

struct EigenSystem {
    RealVector values;     // ascending
    ComplexMatrix vectors; // columns, unitary
};

EigenSystem eig_hermitian(const Hermitian& h);

/// exp(-i t H) via the spectral decomposition of H.
ComplexMatrix unitary_from_hamiltonian(const Hermitian& h, double t);

/// Caches the eigendecomposition of H so that U(t) and U(t)|psi> can be
/// evaluated for many times without re-diagonalizing.
class Propagator {
public:
    explicit Propagator(const Hermitian& h);

    ComplexMatrix unitary(double t) const;
    ComplexVector apply(double t, const ComplexVector& psi) const;
    const EigenSystem& spectrum() const noexcept { return eig_; }
    Eigen::Index dim() const noexcept { return eig_.values.size(); }

private:
    EigenSystem eig_;
    ComplexMatrix vectors_adj_;
};

}  // namespace jcsub
