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

#include "jcsub/subdyn.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace jcsub::subdyn {
namespace {

void require_composite(const ComplexMatrix& m, const FockSpace& space, const char* what) {
    if (m.rows() != space.composite_dim() || m.cols() != space.composite_dim()) {
        throw InputError(std::string(what) + ": matrix is not on the composite space");
    }
}

void require_unitary(const ComplexMatrix& u, const FockSpace& space, double tol) {
    require_composite(u, space, "kraus_extract");
    const double defect = num::unitarity_defect(u);
    if (defect > tol) {
        std::ostringstream os;
        os << "kraus_extract: U is not unitary (defect " << defect << ")";
        throw InputError(os.str());
    }
}

// <k| U |phi> on the photon factor: a 2x2 atomic block.
ComplexMatrix contract_photon(const ComplexMatrix& u, int k, const ComplexVector& phi) {
    ComplexMatrix w = ComplexMatrix::Zero(2, 2);
    for (Eigen::Index m = 0; m < phi.size(); ++m) {
        if (phi(m) == Complex{}) continue;
        w += phi(m) * u.block(2 * k, 2 * m, 2, 2);
    }
    return w;
}

const char* spin_tag(int s) { return s == 0 ? "u" : "d"; }

}  // namespace

BipartiteHamiltonian assemble_hamiltonian(const FockSpace& space, const ComplexMatrix& h_photon,
                                          const ComplexMatrix& h_atom,
                                          const ComplexMatrix& h_interaction) {
    if (!num::is_hermitian(h_photon)) throw InputError("assemble_hamiltonian: H_photon not Hermitian");
    if (!num::is_hermitian(h_atom)) throw InputError("assemble_hamiltonian: H_atom not Hermitian");
    require_composite(h_interaction, space, "assemble_hamiltonian");
    if (!num::is_hermitian(h_interaction)) {
        throw InputError("assemble_hamiltonian: H_int not Hermitian");
    }
    ComplexMatrix hp = embed_photon(h_photon, space);
    ComplexMatrix ha = embed_atom(h_atom, space);
    ComplexMatrix total = hp + ha + h_interaction;
    return {space, std::move(hp), std::move(ha), h_interaction, std::move(total)};
}

ReducedEvolution evolve_and_reduce(const Propagator& prop, const FockSpace& space,
                                   const ComplexMatrix& rho_photon0, const AtomDensity& rho_atom0,
                                   double t, double trace_tol) {
    if (rho_photon0.rows() != space.dim() || rho_photon0.cols() != space.dim()) {
        throw InputError("evolve_and_reduce: photon density has wrong dimension");
    }
    if (prop.dim() != space.composite_dim()) {
        throw InputError("evolve_and_reduce: propagator is not on the composite space");
    }
    require_density(rho_photon0, "evolve_and_reduce: photon density", trace_tol);
    const ComplexMatrix rho0 = tensor(rho_photon0, rho_atom0.matrix());
    ReducedEvolution out;
    if (t == 0.0) {
        out.rho = rho0;
    } else {
        const ComplexMatrix u = prop.unitary(t);
        out.rho = u * rho0 * u.adjoint();
    }
    out.rho_atom = partial_trace(out.rho, Subsystem::Photon, space);
    out.rho_photon = partial_trace(out.rho, Subsystem::Atom, space);
    return out;
}

ReducedEvolution evolve_and_reduce(const BipartiteHamiltonian& h, const ComplexMatrix& rho_photon0,
                                   const AtomDensity& rho_atom0, double t, double trace_tol) {
    return evolve_and_reduce(Propagator(h.hermitian()), h.space, rho_photon0, rho_atom0, t,
                             trace_tol);
}

double product_defect(const ComplexMatrix& rho, const FockSpace& space) {
    require_composite(rho, space, "product_defect");
    const ComplexMatrix ra = partial_trace(rho, Subsystem::Photon, space);
    const ComplexMatrix rr = partial_trace(rho, Subsystem::Atom, space);
    return num::max_abs(rho - tensor(rr, ra));
}

ReducedEvolution evolve_and_reduce(const BipartiteHamiltonian& h, const ComplexMatrix& rho0,
                                   double t, double trace_tol) {
    require_composite(rho0, h.space, "evolve_and_reduce");
    const double defect = product_defect(rho0, h.space);
    if (defect > 1e-10) {
        std::ostringstream os;
        os << "evolve_and_reduce: initial state is correlated (|rho - rho_R (x) rho_A| = "
           << defect << "); the sub-dynamics needs a product state";
        throw InputError(os.str());
    }
    const ComplexMatrix ra = partial_trace(rho0, Subsystem::Photon, h.space);
    const ComplexMatrix rr = partial_trace(rho0, Subsystem::Atom, h.space);
    return evolve_and_reduce(h, rr, AtomDensity::from_matrix(ra), t, trace_tol);
}

double kraus_completeness_residual(const KrausSet& set) {
    if (set.members.empty()) return 0.0;
    const Eigen::Index d = set.members.front().cols();
    const ComplexMatrix id = ComplexMatrix::Identity(d, d);
    if (set.side == Subsystem::Atom) {
        ComplexMatrix sum = ComplexMatrix::Zero(d, d);
        for (const auto& w : set.members) sum += w.adjoint() * w;
        return num::max_abs(sum - id);
    }
    double worst = 0.0;
    for (int sp = 0; sp < 2; ++sp) {
        ComplexMatrix sum = ComplexMatrix::Zero(d, d);
        for (int s = 0; s < 2; ++s) {
            const auto& v = set.members[photon_kraus_index(Spin(s), Spin(sp))];
            sum += v.adjoint() * v;
        }
        worst = std::max(worst, num::max_abs(sum - id));
    }
    return worst;
}

KrausSet kraus_extract_atom(const ComplexMatrix& u, const FockSpace& space,
                            const ComplexVector& photon_state, double unitarity_tol) {
    require_unitary(u, space, unitarity_tol);
    if (photon_state.size() != space.dim()) {
        throw InputError("kraus_extract_atom: photon state has wrong dimension");
    }
    KrausSet set;
    set.side = Subsystem::Atom;
    for (int k = 0; k <= space.n_max(); ++k) {
        set.members.push_back(contract_photon(u, k, photon_state));
        set.labels.push_back("W_" + std::to_string(k));
    }
    set.completeness_residual = kraus_completeness_residual(set);
    return set;
}

KrausSet kraus_extract_atom(const ComplexMatrix& u, const FockSpace& space,
                            const ComplexMatrix& photon_density, double unitarity_tol) {
    require_unitary(u, space, unitarity_tol);
    if (photon_density.rows() != space.dim() || photon_density.cols() != space.dim()) {
        throw InputError("kraus_extract_atom: photon density has wrong dimension");
    }
    const auto eig = eig_hermitian(Hermitian(photon_density, 1e-10));
    KrausSet set;
    set.side = Subsystem::Atom;
    for (Eigen::Index j = eig.values.size() - 1; j >= 0; --j) {
        const double q = eig.values(j);
        if (q <= 1e-15) continue;
        const ComplexVector phi = std::sqrt(q) * eig.vectors.col(j);
        for (int k = 0; k <= space.n_max(); ++k) {
            set.members.push_back(contract_photon(u, k, phi));
            set.labels.push_back("W_" + std::to_string(k) + "," + std::to_string(j));
        }
    }
    set.completeness_residual = kraus_completeness_residual(set);
    return set;
}

KrausSet kraus_extract_photon(const ComplexMatrix& u, const FockSpace& space, double unitarity_tol) {
    require_unitary(u, space, unitarity_tol);
    const Eigen::Index d = space.dim();
    KrausSet set;
    set.side = Subsystem::Photon;
    for (int s = 0; s < 2; ++s) {
        for (int sp = 0; sp < 2; ++sp) {
            ComplexMatrix v(d, d);
            for (Eigen::Index n = 0; n < d; ++n) {
                for (Eigen::Index m = 0; m < d; ++m) v(n, m) = u(2 * n + s, 2 * m + sp);
            }
            set.members.push_back(std::move(v));
            set.labels.push_back(std::string("V_") + spin_tag(s) + spin_tag(sp));
        }
    }
    set.completeness_residual = kraus_completeness_residual(set);
    return set;
}

ComplexMatrix apply_atom_channel(const KrausSet& set, const AtomDensity& rho_atom0) {
    if (set.side != Subsystem::Atom) throw InputError("apply_atom_channel: not an atom-side family");
    ComplexMatrix out = ComplexMatrix::Zero(2, 2);
    for (const auto& w : set.members) out += w * rho_atom0.matrix() * w.adjoint();
    return out;
}

ComplexMatrix apply_photon_channel(const KrausSet& set, const ComplexMatrix& rho_photon0,
                                   const AtomDensity& rho_atom0) {
    if (set.side != Subsystem::Photon || set.members.size() != 4) {
        throw InputError("apply_photon_channel: not a photon-side family");
    }
    const Eigen::Index d = set.members.front().rows();
    if (rho_photon0.rows() != d || rho_photon0.cols() != d) {
        throw InputError("apply_photon_channel: photon density has wrong dimension");
    }
    ComplexMatrix out = ComplexMatrix::Zero(d, d);
    for (int s = 0; s < 2; ++s) {
        for (int s1 = 0; s1 < 2; ++s1) {
            for (int s2 = 0; s2 < 2; ++s2) {
                const Complex weight = rho_atom0.at(Spin(s2), Spin(s1));
                if (weight == Complex{}) continue;
                const auto& v2 = set.members[photon_kraus_index(Spin(s), Spin(s2))];
                const auto& v1 = set.members[photon_kraus_index(Spin(s), Spin(s1))];
                out += weight * (v2 * rho_photon0 * v1.adjoint());
            }
        }
    }
    return out;
}

ComplexMatrix effective_photon_from_kraus(const KrausSet& v, const ComplexMatrix& op,
                                          const AtomDensity& rho_atom0) {
    if (v.side != Subsystem::Photon || v.members.size() != 4) {
        throw InputError("effective_photon_from_kraus: not a photon-side family");
    }
    const Eigen::Index d = v.members.front().rows();
    if (op.rows() != d || op.cols() != d) {
        throw InputError("effective_photon_from_kraus: operator has wrong dimension");
    }
    ComplexMatrix out = ComplexMatrix::Zero(d, d);
    for (int s = 0; s < 2; ++s) {
        for (int s1 = 0; s1 < 2; ++s1) {
            for (int s2 = 0; s2 < 2; ++s2) {
                const Complex weight = rho_atom0.at(Spin(s2), Spin(s1));
                if (weight == Complex{}) continue;
                const auto& v1 = v.members[photon_kraus_index(Spin(s), Spin(s1))];
                const auto& v2 = v.members[photon_kraus_index(Spin(s), Spin(s2))];
                out += weight * (v1.adjoint() * op * v2);
            }
        }
    }
    return out;
}

ComplexMatrix effective_atom_from_kraus(const KrausSet& w, const ComplexMatrix& op) {
    if (w.side != Subsystem::Atom) throw InputError("effective_atom_from_kraus: not an atom-side family");
    if (op.rows() != 2 || op.cols() != 2) throw InputError("effective_atom_from_kraus: operator is not 2x2");
    ComplexMatrix out = ComplexMatrix::Zero(2, 2);
    for (const auto& k : w.members) out += k.adjoint() * op * k;
    return out;
}

EffectiveOperator effective_operator(const ComplexMatrix& u, const FockSpace& space,
                                     const ComplexMatrix& op, Subsystem side,
                                     const ComplexMatrix& other_initial, double t) {
    require_composite(u, space, "effective_operator");
    const Eigen::Index d = space.dim();

    ComplexMatrix direct;
    ComplexMatrix via_kraus;
    if (side == Subsystem::Photon) {
        if (op.rows() != d || op.cols() != d) {
            throw InputError("effective_operator: photon operator has wrong dimension");
        }
        const AtomDensity rho_a = AtomDensity::from_matrix(other_initial);
        const ComplexMatrix x = u.adjoint() * embed_photon(op, space) * u;
        // Tr_atom[(I (x) rho_atom) X]
        direct = ComplexMatrix::Zero(d, d);
        for (Eigen::Index n = 0; n < d; ++n) {
            for (Eigen::Index m = 0; m < d; ++m) {
                Complex acc{};
                for (int s = 0; s < 2; ++s) {
                    for (int sp = 0; sp < 2; ++sp) {
                        acc += rho_a.matrix()(s, sp) * x(2 * n + sp, 2 * m + s);
                    }
                }
                direct(n, m) = acc;
            }
        }
        via_kraus = effective_photon_from_kraus(kraus_extract_photon(u, space), op, rho_a);
    } else {
        if (op.rows() != 2 || op.cols() != 2) {
            throw InputError("effective_operator: atom operator is not 2x2");
        }
        if (other_initial.rows() != d || other_initial.cols() != d) {
            throw InputError("effective_operator: photon density has wrong dimension");
        }
        const ComplexMatrix x = u.adjoint() * embed_atom(op, space) * u;
        // Tr_photon[(rho_photon (x) I) X]
        direct = ComplexMatrix::Zero(2, 2);
        for (Eigen::Index n = 0; n < d; ++n) {
            for (Eigen::Index np = 0; np < d; ++np) {
                const Complex r = other_initial(n, np);
                if (r == Complex{}) continue;
                direct += r * x.block(2 * np, 2 * n, 2, 2);
            }
        }
        via_kraus = effective_atom_from_kraus(kraus_extract_atom(u, space, other_initial), op);
    }

    const double gap = num::max_abs(direct - via_kraus);
    if (gap > kRouteAgreementTol) {
        std::ostringstream os;
        os << "effective_operator: contraction and Kraus routes differ by " << gap;
        throw CrossCheckError(os.str());
    }
    return {side, t, std::move(direct), other_initial};
}

double algebra_deviation(const EffectiveOperator& o1, const EffectiveOperator& o2,
                         const EffectiveOperator& product, std::optional<Eigen::Index> block) {
    if (o1.t != o2.t || o1.t != product.t) {
        throw InputError("algebra_deviation: operators taken at different times");
    }
    if (o1.side != o2.side || o1.side != product.side) {
        throw InputError("algebra_deviation: operators live on different subsystems");
    }
    const ComplexMatrix lhs = num::matmul(o1.matrix, o2.matrix);
    num::require_same_shape(lhs, product.matrix, "algebra_deviation");
    const ComplexMatrix diff = lhs - product.matrix;
    if (block) {
        const Eigen::Index k = std::min(*block, diff.rows());
        return num::max_abs(diff.topLeftCorner(k, k));
    }
    return num::max_abs(diff);
}

}  // namespace jcsub::subdyn
