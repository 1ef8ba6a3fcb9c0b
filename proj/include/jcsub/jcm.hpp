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

// jcm.hpp - closed-form Jaynes-Cummings sub-dynamics.
//
// Photon-atom doublets {|n,Up>, |n+1,Down>} evolve independently, each as a
// 2x2 rotation parametrized by lambda_n, theta_n and the correlation factors
//
//   v_n(t) = e^{-i lambda_n t} sin^2 theta_n + e^{i lambda_n t} cos^2 theta_n
//   w_n(t) = sin(2 theta_n) sin(lambda_n t)
//
// with lambda_n = sqrt((dw/2)^2 + g^2 (n+1)) and dw = omega - omega0. The
// isolated state |0,Down> is sector n = -1 (zero coupling). All operators
// built here use the composite ordering of hilbert.hpp.

#pragma once

#include "jcsub/hilbert.hpp"
#include "jcsub/numerics.hpp"
#include "jcsub/subdyn.hpp"

#include <array>
#include <vector>

namespace jcsub::jcm {

/// H = omega (a^dagger a + 1/2) + (omega0/2) sigma_z + g (a sigma_+ + a^dagger sigma_-)
/// on photon numbers 0..n_max. Units with hbar = 1.
class JcmParams {
public:
    JcmParams(double omega, double omega0, double g, int n_max);

    double omega() const noexcept { return omega_; }
    double omega0() const noexcept { return omega0_; }
    double g() const noexcept { return g_; }
    int n_max() const noexcept { return n_max_; }
    double detuning() const noexcept { return omega_ - omega0_; }
    FockSpace space() const { return FockSpace(n_max_); }

    JcmParams with_coupling(double g) const { return {omega_, omega0_, g, n_max_}; }
    JcmParams with_n_max(int n_max) const { return {omega_, omega0_, g_, n_max}; }

private:
    double omega_;
    double omega0_;
    double g_;
    int n_max_;
};

/// Number-operator form of the Hamiltonian, split into its three parts.
subdyn::BipartiteHamiltonian hamiltonian(const JcmParams& p);

/// Same Hamiltonian assembled from the field quadratures:
/// (E_y^2 + H_x^2)/2 (x) I + (omega0/2) I (x) sigma_z
///   + g / sqrt(2 omega) (H_x (x) sigma_x + E_y (x) sigma_y).
/// Agrees with hamiltonian() away from the truncation edge.
ComplexMatrix quadrature_hamiltonian(const JcmParams& p);

/// Constant of motion N (x) I + 1/2 I (x) sigma_z.
ComplexMatrix constant_of_motion(const FockSpace& space);

struct CorrelationFactors {
    int n = 0;
    double lambda = 0.0;
    double theta = 0.0;
    Complex v{1.0, 0.0};
    double w = 0.0;
};

/// Sector n >= -1. For n = -1 the coupling g sqrt(n+1) vanishes, so
/// lambda = |dw|/2 and theta is 0 (dw >= 0) or pi/2 (dw < 0); the same
/// branch rule covers g = 0 for every n.
CorrelationFactors correlation_factors(int n, double t, const JcmParams& p);

/// Factors for sectors -1..n_max+1 at a single time.
class CorrelationTable {
public:
    CorrelationTable(double t, const JcmParams& p);

    double t() const noexcept { return t_; }
    int max_sector() const noexcept { return static_cast<int>(rows_.size()) - 2; }
    const CorrelationFactors& at(int n) const { return rows_.at(static_cast<std::size_t>(n + 1)); }
    Complex v(int n) const { return at(n).v; }
    double w(int n) const { return at(n).w; }

private:
    double t_;
    std::vector<CorrelationFactors> rows_;
};

enum class PhaseConvention {
    /// exp(-i t H) for H including the omega/2 zero-point term.
    WithZeroPoint,
    /// Sector phases e^{-i omega t (n +- 1/2)} without the zero-point term;
    /// differs from WithZeroPoint by the global factor e^{i omega t / 2}.
    WithoutZeroPoint,
};

/// Closed-form U(t). The unphysical top state |n_max, Up> (its partner
/// |n_max+1, Down> is truncated away) gets the phase of the truncated
/// Hamiltonian, so the matrix is unitary on the whole truncated space.
ComplexMatrix build_unitary_closed(double t, const JcmParams& p,
                                   PhaseConvention convention = PhaseConvention::WithZeroPoint);

/// Atom-side Kraus family W_N = <N|U|alpha>, N = 0..n_max.
subdyn::KrausSet kraus_closed_atom(const CoherentState& alpha, double t, const JcmParams& p);
/// Photon-side family V_{s s'} = <s|U|s'> in subdyn::photon_kraus_index order.
subdyn::KrausSet kraus_closed_photon(double t, const JcmParams& p);

ComplexMatrix marginal_closed_atom(const AtomDensity& rho_atom0, const CoherentState& alpha,
                                   double t, const JcmParams& p);
ComplexMatrix marginal_closed_photon(const AtomDensity& rho_atom0, const CoherentState& alpha,
                                     double t, const JcmParams& p);

struct PhotonDressing {
    Complex a{1.0, 0.0};  // single-photon annihilation weight
    Complex c{};          // |n-1><n+1| (two-photon) weight
    Complex d{};          // |n><n| (no-photon) weight
};

PhotonDressing photon_dressing(int n, const CorrelationTable& table, const AtomDensity& rho_atom0);
PhotonDressing photon_dressing(int n, double t, const AtomDensity& rho_atom0, const JcmParams& p);

/// a~(t) = e^{-i omega t} sum_n [sqrt(n+1) A_n |n><n+1| + C_n |n-1><n+1| + D_n |n><n|].
subdyn::EffectiveOperator quasi_annihilation(double t, const AtomDensity& rho_atom0,
                                             const JcmParams& p);

/// N~(t): diagonal n + rho_uu w_n^2 - rho_dd w_{n-1}^2, plus the
/// -i rho_ud w_n v_n |n+1><n| coherence and its conjugate.
subdyn::EffectiveOperator quasi_number(double t, const AtomDensity& rho_atom0, const JcmParams& p);

/// Coefficient series of the quasi-spin operators, summed over the retained
/// photon numbers 0..n_max with Poisson weights p(n).
///
/// plus[0..3] multiply |Up><Down|, |Down><Up|, |Up><Up|, |Down><Down| in
/// sigma~_+ (after the e^{i omega t} prefactor); z[0..3] multiply
/// |Up><Up|, |Down><Down|, |Up><Down|, |Down><Up| in sigma~_z.
struct SpinDressing {
    std::array<Complex, 4> plus{};
    std::array<Complex, 4> z{};
    /// Largest |last retained term| / |partial sum| over the series.
    double last_term_ratio = 0.0;
    bool truncation_ok = true;
};

inline constexpr double kSeriesTailRatio = 1e-12;

SpinDressing spin_plus_dressing(double t, const CoherentState& alpha, const JcmParams& p);
SpinDressing spin_z_dressing(double t, const CoherentState& alpha, const JcmParams& p);

/// sum_n p(n) v_n^* v_{n-1}: the |Up><Down| series without the conjugate on
/// v_{n-1}. It does not reduce to the free precession e^{i (omega0 - omega) t}
/// at g = 0 and is kept for auditing.
Complex s1_plus_unconjugated(double t, const CoherentState& alpha, const JcmParams& p);

/// sigma~_+(t); requires alpha != 0 because the series divide by alpha.
subdyn::EffectiveOperator quasi_sigma_plus(double t, const CoherentState& alpha, const JcmParams& p);
subdyn::EffectiveOperator quasi_sigma_minus(double t, const CoherentState& alpha, const JcmParams& p);
subdyn::EffectiveOperator quasi_sigma_z(double t, const CoherentState& alpha, const JcmParams& p);

/// 2x2 matrix of sigma~_z from its dressing coefficients.
ComplexMatrix sigma_z_matrix(const SpinDressing& d);

}  // namespace jcsub::jcm
