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

// hilbert.hpp - truncated Fock space, two-level atom, the composite
// |n, s> space and the standard operators living on them.

#pragma once

#include "jcsub/numerics.hpp"

#include <cstddef>
#include <vector>

namespace jcsub {

enum class Spin : int { Up = 0, Down = 1 };

enum class Subsystem { Photon, Atom };

/// Photon numbers 0..n_max.
class FockSpace {
public:
    explicit FockSpace(int n_max);

    int n_max() const noexcept { return n_max_; }
    Eigen::Index dim() const noexcept { return n_max_ + 1; }
    Eigen::Index composite_dim() const noexcept { return 2 * dim(); }

private:
    int n_max_;
};

/// |n, s> -> 2n + s with s(Up) = 0, s(Down) = 1. Photon-major ordering, so
/// the JCM doublets {|n,Up>, |n+1,Down>} sit on a narrow band.
constexpr Eigen::Index composite_index(int n, Spin s) noexcept {
    return 2 * static_cast<Eigen::Index>(n) + static_cast<int>(s);
}

struct LadderOps {
    ComplexMatrix a;
    ComplexMatrix a_dag;
    ComplexMatrix number;
};

/// a|n> = sqrt(n)|n-1>; the truncated a^dagger annihilates |n_max>.
LadderOps ladder_ops(const FockSpace& space);

struct PauliOps {
    ComplexMatrix x, y, z, plus, minus;
};

/// Basis order {|Up>, |Down>}; sigma_z|Up> = +|Up>, sigma_+ = |Up><Down|.
PauliOps pauli_ops();

struct Quadratures {
    ComplexMatrix e_y;
    ComplexMatrix h_x;
};

/// E_y = i sqrt(omega/2)(a - a^dagger), H_x = sqrt(omega/2)(a + a^dagger).
Quadratures quadrature_ops(const FockSpace& space, double omega);

/// Truncated coherent state |alpha>, alpha = magnitude * exp(i phase).
/// Amplitudes are the exact (unrenormalized) expansion coefficients; the
/// probability mass beyond n_max is reported as tail_mass.
class CoherentState {
public:
    CoherentState(double magnitude, double phase, const FockSpace& space);

    double magnitude() const noexcept { return magnitude_; }
    double phase() const noexcept { return phase_; }
    Complex alpha() const noexcept { return std::polar(magnitude_, phase_); }
    double mean_number() const noexcept { return magnitude_ * magnitude_; }
    const ComplexVector& amplitudes() const noexcept { return amps_; }
    int n_max() const noexcept { return static_cast<int>(amps_.size()) - 1; }

    /// Poisson weight p(n) = e^{-M} M^n / n!; valid for any n >= 0,
    /// including n > n_max. Returns 0 for n < 0.
    double poisson(int n) const;
    const std::vector<double>& poisson_weights() const noexcept { return weights_; }

    /// Sum_{n > n_max} p(n), summed directly rather than as 1 - sum.
    double tail_mass() const noexcept { return tail_; }

    ComplexMatrix density() const { return amps_ * amps_.adjoint(); }

private:
    double magnitude_;
    double phase_;
    ComplexVector amps_;
    std::vector<double> weights_;
    double tail_;
};

/// log(p(n)) for a Poisson distribution of mean M.
double log_poisson(int n, double mean);

/// Sum_{n > n_max} p(n).
double poisson_tail(int n_max, double mean);

/// Smallest n_max (>= 1) whose Poisson tail beyond n_max is below eps.
int auto_n_max(double mean, double eps = 1e-10);

/// 2x2 atomic density matrix, validated on construction.
class AtomDensity {
public:
    AtomDensity(Complex uu, Complex ud, Complex du, Complex dd);
    /// Real populations and the Up-Down coherence; the Down-Up entry is its conjugate.
    static AtomDensity from_parts(double uu, Complex ud, double dd);
    static AtomDensity excited() { return from_parts(1.0, 0.0, 0.0); }
    static AtomDensity from_matrix(const ComplexMatrix& m);

    Complex uu() const noexcept { return m_(0, 0); }
    Complex ud() const noexcept { return m_(0, 1); }
    Complex du() const noexcept { return m_(1, 0); }
    Complex dd() const noexcept { return m_(1, 1); }
    Complex at(Spin row, Spin col) const noexcept {
        return m_(static_cast<int>(row), static_cast<int>(col));
    }
    const ComplexMatrix& matrix() const noexcept { return m_; }

private:
    ComplexMatrix m_;
};

/// Validates a photon density matrix: Hermitian, unit trace, PSD (1e-10).
void require_density(const ComplexMatrix& rho, const char* what, double tol = 1e-10);

/// O_photon (x) I_atom.
ComplexMatrix embed_photon(const ComplexMatrix& op, const FockSpace& space);
/// I_photon (x) O_atom.
ComplexMatrix embed_atom(const ComplexMatrix& op, const FockSpace& space);
/// O_photon (x) O_atom with the composite ordering above.
ComplexMatrix tensor(const ComplexMatrix& photon_op, const ComplexMatrix& atom_op);

/// Trace out the named subsystem. over == Photon returns the 2x2 atomic
/// matrix; over == Atom returns the photon matrix.
ComplexMatrix partial_trace(const ComplexMatrix& rho, Subsystem over, const FockSpace& space);

/// Composite indices of the truncation-safe subspace: every |n, Down> and
/// every |n, Up> with n < n_max.
std::vector<Eigen::Index> validated_indices(const FockSpace& space);

/// Max |a - b| over rows/cols restricted to the given index set.
double max_abs_diff_on(const ComplexMatrix& a, const ComplexMatrix& b,
                       const std::vector<Eigen::Index>& indices);

}  // namespace jcsub
