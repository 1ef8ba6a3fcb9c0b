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

#include "jcsub/hilbert.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace jcsub {
namespace {

// Above this photon number the running-product amplitude recursion hands
// over to lgamma.
constexpr int kRunningProductLimit = 150;

}  // namespace

FockSpace::FockSpace(int n_max) : n_max_(n_max) {
    if (n_max < 1) throw InputError("FockSpace: n_max must be >= 1");
}

LadderOps ladder_ops(const FockSpace& space) {
    const Eigen::Index d = space.dim();
    ComplexMatrix a = ComplexMatrix::Zero(d, d);
    for (Eigen::Index n = 1; n < d; ++n) a(n - 1, n) = std::sqrt(static_cast<double>(n));
    ComplexMatrix a_dag = a.adjoint();
    ComplexMatrix number = ComplexMatrix::Zero(d, d);
    for (Eigen::Index n = 0; n < d; ++n) number(n, n) = static_cast<double>(n);
    return {std::move(a), std::move(a_dag), std::move(number)};
}

PauliOps pauli_ops() {
    PauliOps p;
    p.x = ComplexMatrix::Zero(2, 2);
    p.y = ComplexMatrix::Zero(2, 2);
    p.z = ComplexMatrix::Zero(2, 2);
    p.x(0, 1) = 1.0;
    p.x(1, 0) = 1.0;
    p.y(0, 1) = -kI;
    p.y(1, 0) = kI;
    p.z(0, 0) = 1.0;
    p.z(1, 1) = -1.0;
    p.plus = 0.5 * (p.x + kI * p.y);
    p.minus = 0.5 * (p.x - kI * p.y);
    return p;
}

Quadratures quadrature_ops(const FockSpace& space, double omega) {
    if (!(omega > 0.0)) throw InputError("quadrature_ops: omega must be > 0");
    const auto ops = ladder_ops(space);
    const double s = std::sqrt(omega / 2.0);
    return {kI * s * (ops.a - ops.a_dag), s * (ops.a + ops.a_dag)};
}

double log_poisson(int n, double mean) {
    if (n < 0) return -INFINITY;
    if (mean == 0.0) return n == 0 ? 0.0 : -INFINITY;
    return -mean + n * std::log(mean) - std::lgamma(n + 1.0);
}

double poisson_tail(int n_max, double mean) {
    double sum = 0.0;
    const int hard_stop = n_max + 10000 + static_cast<int>(10.0 * mean);
    for (int n = n_max + 1; n < hard_stop; ++n) {
        const double term = std::exp(log_poisson(n, mean));
        sum += term;
        if (n > mean && (term == 0.0 || term <= 1e-17 * sum)) break;
    }
    return sum;
}

int auto_n_max(double mean, double eps) {
    if (mean < 0.0) throw InputError("auto_n_max: mean photon number must be >= 0");
    // The tail is monotone in n_max, so start near the mean and walk up.
    int n = std::max(1, static_cast<int>(mean));
    while (poisson_tail(n, mean) >= eps) ++n;
    return n;
}

CoherentState::CoherentState(double magnitude, double phase, const FockSpace& space)
    : magnitude_(magnitude), phase_(phase) {
    if (!(magnitude >= 0.0) || !std::isfinite(magnitude)) {
        throw InputError("CoherentState: magnitude must be finite and >= 0");
    }
    if (!std::isfinite(phase)) throw InputError("CoherentState: phase must be finite");
    const int n_max = space.n_max();
    const double mean = magnitude * magnitude;
    const Complex alpha = std::polar(magnitude, phase);
    amps_ = ComplexVector::Zero(n_max + 1);
    weights_.assign(n_max + 1, 0.0);

    // e^{-M/2} underflows for very bright fields; go straight to logs there.
    const int product_limit = mean < 600.0 ? kRunningProductLimit : -1;
    Complex running = std::exp(-0.5 * mean);
    for (int n = 0; n <= n_max; ++n) {
        if (n > 0 && n <= product_limit) {
            running *= alpha / std::sqrt(static_cast<double>(n));
        }
        if (n <= product_limit) {
            amps_(n) = running;
        } else {
            const double log_mag = -0.5 * mean + n * std::log(magnitude) - 0.5 * std::lgamma(n + 1.0);
            amps_(n) = std::polar(std::exp(log_mag), n * phase);
        }
        weights_[n] = std::norm(amps_(n));
    }
    tail_ = poisson_tail(n_max, mean);
}

double CoherentState::poisson(int n) const {
    if (n < 0) return 0.0;
    if (n < static_cast<int>(weights_.size())) return weights_[n];
    return std::exp(log_poisson(n, mean_number()));
}

AtomDensity::AtomDensity(Complex uu, Complex ud, Complex du, Complex dd) : m_(2, 2) {
    m_ << uu, ud, du, dd;
    if (!num::all_finite(m_)) throw InputError("AtomDensity: non-finite entry");
    if (!num::is_hermitian(m_, 1e-12)) throw InputError("AtomDensity: matrix is not Hermitian");
    if (std::abs(m_.trace() - 1.0) > 1e-12) {
        std::ostringstream os;
        os << "AtomDensity: trace " << m_.trace().real() << " differs from 1";
        throw InputError(os.str());
    }
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(m_);
    if (es.eigenvalues().minCoeff() < -1e-12) {
        throw InputError("AtomDensity: matrix is not positive semidefinite");
    }
}

AtomDensity AtomDensity::from_parts(double uu, Complex ud, double dd) {
    return AtomDensity(uu, ud, std::conj(ud), dd);
}

AtomDensity AtomDensity::from_matrix(const ComplexMatrix& m) {
    if (m.rows() != 2 || m.cols() != 2) throw InputError("AtomDensity: expected a 2x2 matrix");
    return AtomDensity(m(0, 0), m(0, 1), m(1, 0), m(1, 1));
}

void require_density(const ComplexMatrix& rho, const char* what, double tol) {
    num::require_square(rho, what);
    if (!num::all_finite(rho)) throw InputError(std::string(what) + ": non-finite entry");
    if (!num::is_hermitian(rho, tol)) throw InputError(std::string(what) + ": not Hermitian");
    if (std::abs(rho.trace() - 1.0) > tol) {
        std::ostringstream os;
        os << what << ": trace " << rho.trace().real() << " differs from 1 by more than " << tol;
        throw InputError(os.str());
    }
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(0.5 * (rho + rho.adjoint()), Eigen::EigenvaluesOnly);
    if (es.eigenvalues().minCoeff() < -tol) {
        throw InputError(std::string(what) + ": not positive semidefinite");
    }
}

ComplexMatrix tensor(const ComplexMatrix& photon_op, const ComplexMatrix& atom_op) {
    return num::kron(photon_op, atom_op);
}

ComplexMatrix embed_photon(const ComplexMatrix& op, const FockSpace& space) {
    if (op.rows() != space.dim() || op.cols() != space.dim()) {
        throw InputError("embed_photon: operator does not act on the photon space");
    }
    return tensor(op, ComplexMatrix::Identity(2, 2));
}

ComplexMatrix embed_atom(const ComplexMatrix& op, const FockSpace& space) {
    if (op.rows() != 2 || op.cols() != 2) throw InputError("embed_atom: operator is not 2x2");
    return tensor(ComplexMatrix::Identity(space.dim(), space.dim()), op);
}

ComplexMatrix partial_trace(const ComplexMatrix& rho, Subsystem over, const FockSpace& space) {
    const Eigen::Index d = space.dim();
    if (rho.rows() != 2 * d || rho.cols() != 2 * d) {
        throw InputError("partial_trace: matrix is not on the composite space");
    }
    if (over == Subsystem::Photon) {
        ComplexMatrix out = ComplexMatrix::Zero(2, 2);
        for (Eigen::Index n = 0; n < d; ++n) out += rho.block(2 * n, 2 * n, 2, 2);
        return out;
    }
    ComplexMatrix out(d, d);
    for (Eigen::Index n = 0; n < d; ++n) {
        for (Eigen::Index m = 0; m < d; ++m) {
            out(n, m) = rho(2 * n, 2 * m) + rho(2 * n + 1, 2 * m + 1);
        }
    }
    return out;
}

std::vector<Eigen::Index> validated_indices(const FockSpace& space) {
    std::vector<Eigen::Index> idx;
    idx.reserve(static_cast<std::size_t>(space.composite_dim()) - 1);
    for (int n = 0; n <= space.n_max(); ++n) {
        if (n < space.n_max()) idx.push_back(composite_index(n, Spin::Up));
        idx.push_back(composite_index(n, Spin::Down));
    }
    return idx;
}

double max_abs_diff_on(const ComplexMatrix& a, const ComplexMatrix& b,
                       const std::vector<Eigen::Index>& indices) {
    num::require_same_shape(a, b, "max_abs_diff_on");
    double worst = 0.0;
    for (Eigen::Index i : indices) {
        for (Eigen::Index j : indices) worst = std::max(worst, std::abs(a(i, j) - b(i, j)));
    }
    return worst;
}

}  // namespace jcsub
