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

#include "jcsub/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace jcsub {
namespace num {
namespace {

std::string shape(const ComplexMatrix& m) {
    std::ostringstream os;
    os << m.rows() << "x" << m.cols();
    return os.str();
}

}  // namespace

void require_square(const ComplexMatrix& m, const char* what) {
    if (m.rows() != m.cols()) {
        throw InputError(std::string(what) + ": expected square matrix, got " + shape(m));
    }
}

void require_same_shape(const ComplexMatrix& a, const ComplexMatrix& b, const char* what) {
    if (a.rows() != b.rows() || a.cols() != b.cols()) {
        throw InputError(std::string(what) + ": shape mismatch " + shape(a) + " vs " + shape(b));
    }
}

ComplexMatrix matmul(const ComplexMatrix& a, const ComplexMatrix& b) {
    if (a.cols() != b.rows()) {
        throw InputError("matmul: inner dimensions differ (" + shape(a) + " * " + shape(b) + ")");
    }
    return a * b;
}

ComplexMatrix add(const ComplexMatrix& a, const ComplexMatrix& b) {
    require_same_shape(a, b, "add");
    return a + b;
}

ComplexMatrix subtract(const ComplexMatrix& a, const ComplexMatrix& b) {
    require_same_shape(a, b, "subtract");
    return a - b;
}

ComplexMatrix adjoint(const ComplexMatrix& m) { return m.adjoint(); }

Complex trace(const ComplexMatrix& m) {
    require_square(m, "trace");
    return m.trace();
}

double max_abs(const ComplexMatrix& m) {
    if (m.size() == 0) return 0.0;
    return m.cwiseAbs().maxCoeff();
}

ComplexMatrix commutator(const ComplexMatrix& a, const ComplexMatrix& b) {
    return subtract(matmul(a, b), matmul(b, a));
}

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
    ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i) {
        for (Eigen::Index j = 0; j < a.cols(); ++j) {
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
        }
    }
    return out;
}

bool all_finite(const ComplexMatrix& m) {
    for (Eigen::Index k = 0; k < m.size(); ++k) {
        const Complex z = m.data()[k];
        if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) return false;
    }
    return true;
}

bool is_hermitian(const ComplexMatrix& m, double tol) {
    if (m.rows() != m.cols()) return false;
    const double scale = std::max(1.0, max_abs(m));
    return max_abs(m - m.adjoint()) <= tol * scale;
}

double unitarity_defect(const ComplexMatrix& u) {
    require_square(u, "unitarity_defect");
    return max_abs(u.adjoint() * u - ComplexMatrix::Identity(u.rows(), u.cols()));
}

}  // namespace num

Hermitian::Hermitian(const ComplexMatrix& m, double tolerance) : tol_(tolerance) {
    num::require_square(m, "Hermitian");
    if (!num::all_finite(m)) throw InputError("Hermitian: matrix has non-finite entries");
    if (!num::is_hermitian(m, tolerance)) {
        std::ostringstream os;
        os << "Hermitian: max |M - M^dagger| = " << num::max_abs(m - m.adjoint())
           << " exceeds tolerance " << tolerance;
        throw InputError(os.str());
    }
    m_ = 0.5 * (m + m.adjoint());
}

EigenSystem eig_hermitian(const Hermitian& h) {
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(h.matrix());
    if (solver.info() != Eigen::Success) {
        throw std::runtime_error("eig_hermitian: eigendecomposition did not converge");
    }
    return {solver.eigenvalues(), solver.eigenvectors()};
}

ComplexMatrix unitary_from_hamiltonian(const Hermitian& h, double t) {
    return Propagator(h).unitary(t);
}

Propagator::Propagator(const Hermitian& h) : eig_(eig_hermitian(h)) {
    vectors_adj_ = eig_.vectors.adjoint();
}

ComplexMatrix Propagator::unitary(double t) const {
    if (t == 0.0) return ComplexMatrix::Identity(dim(), dim());
    ComplexVector phases(dim());
    for (Eigen::Index k = 0; k < dim(); ++k) phases(k) = std::exp(-kI * (eig_.values(k) * t));
    return eig_.vectors * phases.asDiagonal() * vectors_adj_;
}

ComplexVector Propagator::apply(double t, const ComplexVector& psi) const {
    if (psi.size() != dim()) throw InputError("Propagator::apply: state dimension mismatch");
    ComplexVector coeffs = vectors_adj_ * psi;
    for (Eigen::Index k = 0; k < dim(); ++k) coeffs(k) *= std::exp(-kI * (eig_.values(k) * t));
    return eig_.vectors * coeffs;
}

}  // namespace jcsub
