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

// subdyn.hpp - generic photon-atom sub-dynamics by brute force: full
// unitary evolution, partial traces, Kraus families extracted from U, and
// effective (sub-dynamic Heisenberg) operators.
//
// Everything here works from a numerically exponentiated Hamiltonian and
// never uses closed-form JCM results, so it doubles as the reference that
// the jcm module is checked against.

#pragma once

#include "jcsub/hilbert.hpp"
#include "jcsub/numerics.hpp"

#include <optional>
#include <string>
#include <vector>

namespace jcsub::subdyn {

/// H = H_photon (x) I + I (x) H_atom + H_int.
struct BipartiteHamiltonian {
    FockSpace space;
    ComplexMatrix photon_part;  // embedded
    ComplexMatrix atom_part;    // embedded
    ComplexMatrix interaction;
    ComplexMatrix total;

    Hermitian hermitian() const { return Hermitian(total); }
};

BipartiteHamiltonian assemble_hamiltonian(const FockSpace& space, const ComplexMatrix& h_photon,
                                          const ComplexMatrix& h_atom,
                                          const ComplexMatrix& h_interaction);

struct ReducedEvolution {
    ComplexMatrix rho;         // composite rho(t)
    ComplexMatrix rho_atom;    // Tr_photon rho(t)
    ComplexMatrix rho_photon;  // Tr_atom rho(t)
};

/// rho(t) = U rho(0) U^dagger for rho(0) = rho_photon0 (x) rho_atom0, plus
/// both marginals. rho_photon0 must have unit trace within trace_tol.
ReducedEvolution evolve_and_reduce(const BipartiteHamiltonian& h, const ComplexMatrix& rho_photon0,
                                   const AtomDensity& rho_atom0, double t,
                                   double trace_tol = 1e-10);
ReducedEvolution evolve_and_reduce(const Propagator& prop, const FockSpace& space,
                                   const ComplexMatrix& rho_photon0, const AtomDensity& rho_atom0,
                                   double t, double trace_tol = 1e-10);

/// Composite-state entry point. Correlated (non-product) initial states are
/// rejected: the Kraus construction needs rho(0) = rho_photon (x) rho_atom.
ReducedEvolution evolve_and_reduce(const BipartiteHamiltonian& h, const ComplexMatrix& rho0,
                                   double t, double trace_tol = 1e-10);

/// max |rho - Tr_A(rho) (x) Tr_R(rho)|.
double product_defect(const ComplexMatrix& rho, const FockSpace& space);

struct KrausSet {
    Subsystem side = Subsystem::Atom;
    std::vector<ComplexMatrix> members;
    std::vector<std::string> labels;
    double completeness_residual = 0.0;
};

/// Atom-side family W_k = <k|U|phi> (2x2 each) for a pure photon start.
KrausSet kraus_extract_atom(const ComplexMatrix& u, const FockSpace& space,
                            const ComplexVector& photon_state, double unitarity_tol = 1e-9);
/// Same for a mixed photon start: W_{k,j} = sqrt(q_j) <k|U|phi_j>.
KrausSet kraus_extract_atom(const ComplexMatrix& u, const FockSpace& space,
                            const ComplexMatrix& photon_density, double unitarity_tol = 1e-9);

/// Photon-side operators V_{s s'} = <s|U|s'>, stored in the order
/// (Up,Up), (Up,Down), (Down,Up), (Down,Down). The completeness residual is
/// max over s' of |sum_s V_{s s'}^dagger V_{s s'} - I|.
KrausSet kraus_extract_photon(const ComplexMatrix& u, const FockSpace& space,
                              double unitarity_tol = 1e-9);

/// Index of V_{s s'} inside a photon-side KrausSet.
constexpr std::size_t photon_kraus_index(Spin s, Spin s_prime) noexcept {
    return static_cast<std::size_t>(2 * static_cast<int>(s) + static_cast<int>(s_prime));
}

double kraus_completeness_residual(const KrausSet& set);

/// rho_atom(t) = sum_k W_k rho_atom0 W_k^dagger.
ComplexMatrix apply_atom_channel(const KrausSet& set, const AtomDensity& rho_atom0);
/// rho_photon(t) = sum (rho_atom0)_{s2 s1} V_{s s2} rho_photon0 V_{s s1}^dagger.
ComplexMatrix apply_photon_channel(const KrausSet& set, const ComplexMatrix& rho_photon0,
                                   const AtomDensity& rho_atom0);

struct EffectiveOperator {
    Subsystem side = Subsystem::Photon;
    double t = 0.0;
    ComplexMatrix matrix;
    ComplexMatrix weighting_state;  // initial density of the complementary side
};

inline constexpr double kRouteAgreementTol = 1e-9;

/// O~(t) on `side`, weighted by the other side's initial density. Computed
/// both by direct contraction of U^dagger (O (x) I) U and by the Kraus sum;
/// the two must agree to kRouteAgreementTol or CrossCheckError is thrown.
EffectiveOperator effective_operator(const ComplexMatrix& u, const FockSpace& space,
                                     const ComplexMatrix& op, Subsystem side,
                                     const ComplexMatrix& other_initial, double t);

/// Kraus-sum route alone, for an already extracted family.
ComplexMatrix effective_photon_from_kraus(const KrausSet& v, const ComplexMatrix& op,
                                          const AtomDensity& rho_atom0);
ComplexMatrix effective_atom_from_kraus(const KrausSet& w, const ComplexMatrix& op);

/// |O1~ O2~ - (O1 O2)~|_max, optionally over the leading `block` rows and
/// columns only (photon-side truncation edge).
double algebra_deviation(const EffectiveOperator& o1, const EffectiveOperator& o2,
                         const EffectiveOperator& product,
                         std::optional<Eigen::Index> block = std::nullopt);

}  // namespace jcsub::subdyn
