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

#include "jcsub/jcm.hpp"

#include <algorithm>
#include <cmath>

namespace jcsub::jcm {
namespace {

// e^{-i omega t k}, the free phase shared by a doublet whose constant of
// motion is k - 1/2 (zero-point term included).
Complex band_phase(double k, double t, const JcmParams& p) {
    return std::exp(-kI * (p.omega() * t * k));
}

// exp(-i t E) for the truncated top state |n_max, Up>.
Complex top_state_phase(double t, const JcmParams& p) {
    const double energy = p.omega() * (p.n_max() + 0.5) + 0.5 * p.omega0();
    return std::exp(-kI * (energy * t));
}

Complex convention_factor(double t, const JcmParams& p, PhaseConvention c) {
    return c == PhaseConvention::WithZeroPoint ? Complex{1.0, 0.0}
                                               : std::exp(kI * (0.5 * p.omega() * t));
}

void require_alpha_nonzero(const CoherentState& alpha, const char* what) {
    if (alpha.magnitude() == 0.0) {
        throw InputError(std::string(what) +
                         ": series divide by alpha; use the Kraus route for alpha = 0");
    }
}

void require_matching_space(const CoherentState& alpha, const JcmParams& p, const char* what) {
    if (alpha.n_max() != p.n_max()) {
        throw InputError(std::string(what) + ": coherent state truncation differs from n_max");
    }
}

// Tracks the ratio between the last retained term and the partial sum.
struct SeriesAccumulator {
    Complex sum{};
    Complex last{};
    void add(Complex term) {
        sum += term;
        last = term;
    }
    double ratio() const {
        const double s = std::abs(sum);
        if (s == 0.0) return std::abs(last) == 0.0 ? 0.0 : INFINITY;
        return std::abs(last) / s;
    }
};

}  // namespace

JcmParams::JcmParams(double omega, double omega0, double g, int n_max)
    : omega_(omega), omega0_(omega0), g_(g), n_max_(n_max) {
    if (!(omega > 0.0) || !std::isfinite(omega)) throw InputError("JcmParams: omega must be > 0");
    if (!std::isfinite(omega0)) throw InputError("JcmParams: omega0 must be finite");
    if (!(g >= 0.0) || !std::isfinite(g)) throw InputError("JcmParams: g must be >= 0");
    if (n_max < 1) throw InputError("JcmParams: n_max must be >= 1");
}

subdyn::BipartiteHamiltonian hamiltonian(const JcmParams& p) {
    const FockSpace space = p.space();
    const auto ladder = ladder_ops(space);
    const auto pauli = pauli_ops();
    const ComplexMatrix id = ComplexMatrix::Identity(space.dim(), space.dim());
    const ComplexMatrix h_photon = p.omega() * (ladder.number + 0.5 * id);
    const ComplexMatrix h_atom = 0.5 * p.omega0() * pauli.z;
    const ComplexMatrix h_int =
        p.g() * (tensor(ladder.a, pauli.plus) + tensor(ladder.a_dag, pauli.minus));
    return subdyn::assemble_hamiltonian(space, h_photon, h_atom, h_int);
}

ComplexMatrix quadrature_hamiltonian(const JcmParams& p) {
    const FockSpace space = p.space();
    const auto q = quadrature_ops(space, p.omega());
    const auto pauli = pauli_ops();
    const ComplexMatrix field = 0.5 * (q.e_y * q.e_y + q.h_x * q.h_x);
    const double coupling = p.g() / std::sqrt(2.0 * p.omega());
    return embed_photon(field, space) + embed_atom(0.5 * p.omega0() * pauli.z, space) +
           coupling * (tensor(q.h_x, pauli.x) + tensor(q.e_y, pauli.y));
}

ComplexMatrix constant_of_motion(const FockSpace& space) {
    return embed_photon(ladder_ops(space).number, space) + embed_atom(0.5 * pauli_ops().z, space);
}

CorrelationFactors correlation_factors(int n, double t, const JcmParams& p) {
    if (n < -1) throw InputError("correlation_factors: sector index must be >= -1");
    const double half_detuning = 0.5 * p.detuning();
    const double coupling = p.g() * std::sqrt(static_cast<double>(n + 1));
    CorrelationFactors f;
    f.n = n;
    f.lambda = std::hypot(half_detuning, coupling);
    // Half-angle form of tan(theta) = coupling / (dw/2 + lambda); stays on the
    // continuous branch when dw/2 + lambda vanishes (coupling = 0, dw < 0).
    f.theta = 0.5 * std::atan2(coupling, half_detuning);
    const double c = std::cos(f.lambda * t);
    const double s = std::sin(f.lambda * t);
    const double sin_sq = std::sin(f.theta) * std::sin(f.theta);
    const double cos_sq = std::cos(f.theta) * std::cos(f.theta);
    f.v = Complex{c, -s} * sin_sq + Complex{c, s} * cos_sq;
    f.w = std::sin(2.0 * f.theta) * s;
    return f;
}

CorrelationTable::CorrelationTable(double t, const JcmParams& p) : t_(t) {
    rows_.reserve(static_cast<std::size_t>(p.n_max()) + 3);
    for (int n = -1; n <= p.n_max() + 1; ++n) rows_.push_back(correlation_factors(n, t, p));
}

ComplexMatrix build_unitary_closed(double t, const JcmParams& p, PhaseConvention convention) {
    const FockSpace space = p.space();
    const int n_max = p.n_max();
    const CorrelationTable f(t, p);
    const Complex shift = convention_factor(t, p, convention);
    ComplexMatrix u = ComplexMatrix::Zero(space.composite_dim(), space.composite_dim());

    // |0, Down>: sector -1.
    u(composite_index(0, Spin::Down), composite_index(0, Spin::Down)) = shift * std::conj(f.v(-1));
    for (int n = 0; n < n_max; ++n) {
        const Complex phase = shift * band_phase(n + 1, t, p);
        const auto up = composite_index(n, Spin::Up);
        const auto down = composite_index(n + 1, Spin::Down);
        u(up, up) = phase * f.v(n);
        u(down, down) = phase * std::conj(f.v(n));
        u(down, up) = -kI * phase * f.w(n);
        u(up, down) = -kI * phase * f.w(n);
    }
    const auto top = composite_index(n_max, Spin::Up);
    u(top, top) = shift * top_state_phase(t, p);
    return u;
}

subdyn::KrausSet kraus_closed_atom(const CoherentState& alpha, double t, const JcmParams& p) {
    require_matching_space(alpha, p, "kraus_closed_atom");
    const int n_max = p.n_max();
    const CorrelationTable f(t, p);
    const auto& amp = alpha.amplitudes();
    subdyn::KrausSet set;
    set.side = Subsystem::Atom;
    for (int big_n = 0; big_n <= n_max; ++big_n) {
        ComplexMatrix w = ComplexMatrix::Zero(2, 2);
        const Complex up_phase = band_phase(big_n + 1, t, p);
        const Complex down_phase = band_phase(big_n, t, p);
        // Row Up: <N,Up| U |m,s'>.
        if (big_n < n_max) {
            w(0, 0) = up_phase * f.v(big_n) * amp(big_n);
            w(0, 1) = -kI * up_phase * f.w(big_n) * amp(big_n + 1);
        } else {
            w(0, 0) = top_state_phase(t, p) * amp(big_n);
        }
        // Row Down: <N,Down| U |m,s'>.
        if (big_n >= 1) w(1, 0) = -kI * down_phase * f.w(big_n - 1) * amp(big_n - 1);
        w(1, 1) = down_phase * std::conj(f.v(big_n - 1)) * amp(big_n);
        set.members.push_back(std::move(w));
        set.labels.push_back("W_" + std::to_string(big_n));
    }
    set.completeness_residual = subdyn::kraus_completeness_residual(set);
    return set;
}

subdyn::KrausSet kraus_closed_photon(double t, const JcmParams& p) {
    const int n_max = p.n_max();
    const Eigen::Index d = n_max + 1;
    const CorrelationTable f(t, p);
    ComplexMatrix v_uu = ComplexMatrix::Zero(d, d);
    ComplexMatrix v_ud = ComplexMatrix::Zero(d, d);
    ComplexMatrix v_du = ComplexMatrix::Zero(d, d);
    ComplexMatrix v_dd = ComplexMatrix::Zero(d, d);
    for (int n = 0; n <= n_max; ++n) {
        v_dd(n, n) = band_phase(n, t, p) * std::conj(f.v(n - 1));
        if (n == n_max) {
            v_uu(n, n) = top_state_phase(t, p);
            continue;
        }
        const Complex phase = band_phase(n + 1, t, p);
        v_uu(n, n) = phase * f.v(n);
        v_du(n + 1, n) = -kI * phase * f.w(n);
        v_ud(n, n + 1) = -kI * phase * f.w(n);
    }
    subdyn::KrausSet set;
    set.side = Subsystem::Photon;
    set.members = {v_uu, v_ud, v_du, v_dd};
    set.labels = {"V_uu", "V_ud", "V_du", "V_dd"};
    set.completeness_residual = subdyn::kraus_completeness_residual(set);
    return set;
}

ComplexMatrix marginal_closed_atom(const AtomDensity& rho_atom0, const CoherentState& alpha,
                                   double t, const JcmParams& p) {
    return subdyn::apply_atom_channel(kraus_closed_atom(alpha, t, p), rho_atom0);
}

ComplexMatrix marginal_closed_photon(const AtomDensity& rho_atom0, const CoherentState& alpha,
                                     double t, const JcmParams& p) {
    require_matching_space(alpha, p, "marginal_closed_photon");
    return subdyn::apply_photon_channel(kraus_closed_photon(t, p), alpha.density(), rho_atom0);
}

PhotonDressing photon_dressing(int n, const CorrelationTable& f, const AtomDensity& rho) {
    if (n < 0) throw InputError("photon_dressing: n must be >= 0");
    if (n + 1 > f.max_sector()) throw InputError("photon_dressing: n beyond the correlation table");
    const double nn = static_cast<double>(n);
    const Complex v_n = f.v(n);
    const Complex v_up = f.v(n + 1);
    const Complex v_lo = f.v(n - 1);
    const double w_n = f.w(n);
    const double w_up = f.w(n + 1);
    const double w_lo = f.w(n - 1);

    PhotonDressing out;
    out.a = rho.uu() * (std::conj(v_n) * v_up + w_n * w_up * std::sqrt((nn + 2.0) / (nn + 1.0))) +
            rho.dd() * (std::conj(v_n) * v_lo + w_n * w_lo * std::sqrt(nn / (nn + 1.0)));
    out.c = kI * rho.du() *
            (w_lo * std::conj(v_n) * std::sqrt(nn + 1.0) - w_n * std::conj(v_lo) * std::sqrt(nn));
    out.d = kI * rho.ud() * (w_lo * v_n * std::sqrt(nn) - w_n * v_lo * std::sqrt(nn + 1.0));
    return out;
}

PhotonDressing photon_dressing(int n, double t, const AtomDensity& rho_atom0, const JcmParams& p) {
    const JcmParams wide = n + 1 > p.n_max() + 1 ? p.with_n_max(n + 1) : p;
    return photon_dressing(n, CorrelationTable(t, wide), rho_atom0);
}

subdyn::EffectiveOperator quasi_annihilation(double t, const AtomDensity& rho_atom0,
                                             const JcmParams& p) {
    const int n_max = p.n_max();
    const CorrelationTable f(t, p);
    const Complex prefactor = std::exp(-kI * (p.omega() * t));
    ComplexMatrix a = ComplexMatrix::Zero(n_max + 1, n_max + 1);
    for (int n = 0; n <= n_max; ++n) {
        const PhotonDressing c = photon_dressing(n, f, rho_atom0);
        if (n + 1 <= n_max) a(n, n + 1) = prefactor * std::sqrt(n + 1.0) * c.a;
        if (n >= 1 && n + 1 <= n_max) a(n - 1, n + 1) = prefactor * c.c;
        a(n, n) = prefactor * c.d;
    }
    return {Subsystem::Photon, t, std::move(a), rho_atom0.matrix()};
}

subdyn::EffectiveOperator quasi_number(double t, const AtomDensity& rho, const JcmParams& p) {
    const int n_max = p.n_max();
    const CorrelationTable f(t, p);
    ComplexMatrix num = ComplexMatrix::Zero(n_max + 1, n_max + 1);
    for (int n = 0; n <= n_max; ++n) {
        const double w_n = f.w(n);
        const double w_lo = f.w(n - 1);
        num(n, n) = static_cast<double>(n) + rho.uu() * (w_n * w_n) - rho.dd() * (w_lo * w_lo);
        if (n + 1 <= n_max) {
            num(n + 1, n) = -kI * rho.ud() * w_n * f.v(n);
            num(n, n + 1) = kI * rho.du() * w_n * std::conj(f.v(n));
        }
    }
    return {Subsystem::Photon, t, std::move(num), rho.matrix()};
}

SpinDressing spin_plus_dressing(double t, const CoherentState& alpha, const JcmParams& p) {
    require_alpha_nonzero(alpha, "spin_plus_dressing");
    require_matching_space(alpha, p, "spin_plus_dressing");
    const CorrelationTable f(t, p);
    const Complex al = alpha.alpha();
    const Complex al_c = std::conj(al);
    std::array<SeriesAccumulator, 4> acc;
    for (int n = 0; n <= p.n_max(); ++n) {
        const double pn = alpha.poisson(n);
        const double nn = static_cast<double>(n);
        acc[0].add(pn * std::conj(f.v(n)) * std::conj(f.v(n - 1)));
        acc[1].add(pn * f.w(n) * f.w(n - 1) * (al_c / al) * std::sqrt(nn / (nn + 1.0)));
        acc[2].add(-kI * pn * std::conj(f.v(n)) * f.w(n - 1) * std::sqrt(nn) / al);
        acc[3].add(kI * pn * std::conj(f.v(n - 1)) * f.w(n) * al_c / std::sqrt(nn + 1.0));
    }
    SpinDressing out;
    for (std::size_t k = 0; k < 4; ++k) {
        out.plus[k] = acc[k].sum;
        // Series that vanish identically (e.g. at t = 0) carry no tail signal.
        if (std::abs(acc[k].sum) > 1e-300) {
            out.last_term_ratio = std::max(out.last_term_ratio, acc[k].ratio());
        }
    }
    out.truncation_ok = out.last_term_ratio <= kSeriesTailRatio;
    return out;
}

SpinDressing spin_z_dressing(double t, const CoherentState& alpha, const JcmParams& p) {
    require_matching_space(alpha, p, "spin_z_dressing");
    const CorrelationTable f(t, p);
    const Complex al = alpha.alpha();
    SeriesAccumulator up_weight;
    SeriesAccumulator down_weight;
    SeriesAccumulator coherence;
    for (int n = 0; n <= p.n_max(); ++n) {
        const double w_n = f.w(n);
        up_weight.add(alpha.poisson(n) * w_n * w_n);
        down_weight.add(alpha.poisson(n + 1) * w_n * w_n);
        coherence.add(alpha.poisson(n) * w_n * std::conj(f.v(n)) * al / std::sqrt(n + 1.0));
    }
    SpinDressing out;
    out.z[0] = 1.0 - 2.0 * up_weight.sum;
    out.z[1] = -(1.0 - 2.0 * down_weight.sum);
    out.z[2] = -2.0 * kI * coherence.sum;
    out.z[3] = std::conj(out.z[2]);
    for (const auto* a : {&up_weight, &down_weight, &coherence}) {
        if (std::abs(a->sum) > 1e-300) out.last_term_ratio = std::max(out.last_term_ratio, a->ratio());
    }
    out.truncation_ok = out.last_term_ratio <= kSeriesTailRatio;
    return out;
}

Complex s1_plus_unconjugated(double t, const CoherentState& alpha, const JcmParams& p) {
    require_matching_space(alpha, p, "s1_plus_unconjugated");
    const CorrelationTable f(t, p);
    Complex sum{};
    for (int n = 0; n <= p.n_max(); ++n) sum += alpha.poisson(n) * std::conj(f.v(n)) * f.v(n - 1);
    return sum;
}

subdyn::EffectiveOperator quasi_sigma_plus(double t, const CoherentState& alpha, const JcmParams& p) {
    const SpinDressing d = spin_plus_dressing(t, alpha, p);
    const Complex prefactor = std::exp(kI * (p.omega() * t));
    ComplexMatrix m(2, 2);
    m << d.plus[2], d.plus[0], d.plus[1], d.plus[3];
    return {Subsystem::Atom, t, prefactor * m, alpha.density()};
}

subdyn::EffectiveOperator quasi_sigma_minus(double t, const CoherentState& alpha, const JcmParams& p) {
    auto op = quasi_sigma_plus(t, alpha, p);
    op.matrix = op.matrix.adjoint().eval();
    return op;
}

ComplexMatrix sigma_z_matrix(const SpinDressing& d) {
    ComplexMatrix m(2, 2);
    m << d.z[0], d.z[2], d.z[3], d.z[1];
    return m;
}

subdyn::EffectiveOperator quasi_sigma_z(double t, const CoherentState& alpha, const JcmParams& p) {
    return {Subsystem::Atom, t, sigma_z_matrix(spin_z_dressing(t, alpha, p)), alpha.density()};
}

}  // namespace jcsub::jcm
