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

#include <doctest.h>

#include <cmath>

using namespace jcsub;

namespace {

// Independent Poisson weight via lgamma.
double poisson_ref(int n, double mean) {
    if (mean == 0.0) return n == 0 ? 1.0 : 0.0;
    return std::exp(n * std::log(mean) - mean - std::lgamma(n + 1.0));
}

double tail_ref(int n_max, double mean) {
    double s = 0.0;
    for (int n = n_max + 1; n < n_max + 400; ++n) s += poisson_ref(n, mean);
    return s;
}

ComplexVector basis(Eigen::Index dim, Eigen::Index k) {
    ComplexVector e = ComplexVector::Zero(dim);
    e(k) = 1.0;
    return e;
}

}  // namespace

TEST_CASE("FockSpace bounds") {
    CHECK_THROWS_AS(FockSpace(0), InputError);
    const FockSpace s(4);
    CHECK(s.dim() == 5);
    CHECK(s.composite_dim() == 10);
    CHECK(composite_index(3, Spin::Down) == 7);
}

TEST_CASE("ladder operators and the truncated commutator") {
    const FockSpace s(6);
    const auto l = ladder_ops(s);
    CHECK((l.a * basis(7, 1) - basis(7, 0)).norm() < 1e-15);
    const ComplexMatrix comm = num::commutator(l.a, l.a_dag);
    ComplexMatrix expect = ComplexMatrix::Identity(7, 7);
    expect(6, 6) = -6.0;
    CHECK(num::max_abs(comm - expect) < 1e-13);
    CHECK(num::max_abs(l.a_dag * l.a - l.number) < 1e-13);
}

TEST_CASE("Pauli conventions") {
    const auto p = pauli_ops();
    const ComplexVector up = basis(2, 0);
    CHECK((p.z * up - up).norm() == 0.0);
    CHECK(num::max_abs(p.plus * p.minus + p.minus * p.plus - ComplexMatrix::Identity(2, 2)) == 0.0);
    CHECK(num::max_abs(num::commutator(p.x, p.y) - 2.0 * kI * p.z) < 1e-15);
    CHECK(p.plus(0, 1) == Complex(1.0));
}

TEST_CASE("field quadratures rebuild the radiation Hamiltonian in the interior") {
    const FockSpace s(12);
    const double omega = 1.3;
    const auto q = quadrature_ops(s, omega);
    CHECK(num::is_hermitian(q.e_y));
    CHECK(num::is_hermitian(q.h_x));
    CHECK(std::abs(q.e_y(0, 0)) == 0.0);
    const ComplexMatrix h = (q.e_y * q.e_y + q.h_x * q.h_x) / 2.0;
    const auto l = ladder_ops(s);
    const ComplexMatrix expect = omega * (l.number + 0.5 * ComplexMatrix::Identity(13, 13));
    CHECK(num::max_abs(h.topLeftCorner(12, 12) - expect.topLeftCorner(12, 12)) < 1e-12);
    CHECK_THROWS_AS(quadrature_ops(s, 0.0), InputError);
}

TEST_CASE("coherent state weights, mean and tail") {
    const FockSpace s(60);
    const CoherentState c(std::sqrt(10.0), 0.4, s);
    double mean = 0.0;
    double mass = 0.0;
    for (int n = 0; n <= 60; ++n) {
        CHECK(c.poisson_weights()[n] == doctest::Approx(poisson_ref(n, 10.0)).epsilon(1e-12));
        CHECK(std::norm(c.amplitudes()(n)) == doctest::Approx(poisson_ref(n, 10.0)).epsilon(1e-12));
        mean += n * c.poisson_weights()[n];
        mass += c.poisson_weights()[n];
    }
    CHECK(std::abs(mean - 10.0) < 1e-9);
    CHECK(c.tail_mass() < 1e-12);
    CHECK(std::abs(mass + c.tail_mass() - 1.0) < 1e-14);
    const ComplexMatrix n_op = ladder_ops(s).number;
    CHECK(std::abs((c.amplitudes().adjoint() * n_op * c.amplitudes())(0, 0) - 10.0) < 1e-9);
    CHECK(std::arg(c.amplitudes()(1)) == doctest::Approx(0.4));
    CHECK(c.poisson(75) == doctest::Approx(poisson_ref(75, 10.0)).epsilon(1e-10));
    CHECK(c.poisson(-1) == 0.0);
}

TEST_CASE("vacuum coherent state") {
    const CoherentState c(0.0, 0.0, FockSpace(5));
    CHECK(c.amplitudes()(0) == Complex(1.0));
    CHECK(c.amplitudes().tail(5).norm() == 0.0);
    CHECK(c.poisson(0) == 1.0);
    CHECK(c.tail_mass() == 0.0);
}

TEST_CASE("large mean uses the log-domain path") {
    const CoherentState c(30.0, 0.0, FockSpace(1300));
    CHECK(c.poisson_weights()[900] == doctest::Approx(poisson_ref(900, 900.0)).epsilon(1e-9));
    double mass = 0.0;
    for (double p : c.poisson_weights()) mass += p;
    CHECK(std::abs(mass + c.tail_mass() - 1.0) < 1e-12);
}

TEST_CASE("tail rule agrees with a direct summation") {
    for (double mean : {0.5, 4.0, 10.0, 25.0}) {
        const int n = auto_n_max(mean, 1e-10);
        CHECK(tail_ref(n, mean) < 1e-10);
        CHECK(tail_ref(n - 1, mean) >= 1e-10);
        CHECK(poisson_tail(n, mean) == doctest::Approx(tail_ref(n, mean)).epsilon(1e-8));
    }
    CHECK_THROWS_AS(auto_n_max(-1.0), InputError);
    CHECK(log_poisson(3, 2.0) == doctest::Approx(std::log(poisson_ref(3, 2.0))));
}

TEST_CASE("AtomDensity validation") {
    CHECK_NOTHROW(AtomDensity::from_parts(0.5, Complex(0.3, 0.2), 0.5));
    CHECK_THROWS_AS(AtomDensity::from_parts(0.6, 0.0, 0.6), InputError);
    CHECK_THROWS_AS(AtomDensity::from_parts(0.5, 0.6, 0.5), InputError);
    CHECK_THROWS_AS(AtomDensity::from_parts(1.2, 0.0, -0.2), InputError);
    CHECK_THROWS_AS(AtomDensity(1.0, 0.1, 0.2, 0.0), InputError);
    const auto r = AtomDensity::from_parts(0.7, Complex(0.1, -0.2), 0.3);
    CHECK(r.du() == std::conj(r.ud()));
    CHECK(r.at(Spin::Down, Spin::Down) == Complex(0.3));
    CHECK_THROWS_AS(AtomDensity::from_matrix(ComplexMatrix::Identity(3, 3)), InputError);
}

TEST_CASE("require_density") {
    ComplexMatrix rho = ComplexMatrix::Zero(3, 3);
    rho(0, 0) = 0.5;
    rho(2, 2) = 0.5;
    CHECK_NOTHROW(require_density(rho, "rho"));
    rho(1, 1) = 0.1;
    CHECK_THROWS_AS(require_density(rho, "rho"), InputError);
    rho(1, 1) = 0.0;
    rho(0, 0) = 1.1;
    rho(2, 2) = -0.1;
    CHECK_THROWS_AS(require_density(rho, "rho"), InputError);
}

TEST_CASE("tensor bookkeeping") {
    const FockSpace s(4);
    const auto l = ladder_ops(s);
    const auto p = pauli_ops();
    const Eigen::Index d = s.composite_dim();
    CHECK(num::max_abs(tensor(ComplexMatrix::Identity(5, 5), ComplexMatrix::Identity(2, 2)) -
                       ComplexMatrix::Identity(d, d)) == 0.0);
    const ComplexMatrix n_i = embed_photon(l.number, s);
    const ComplexMatrix i_z = embed_atom(p.z, s);
    CHECK(num::max_abs(num::commutator(n_i, i_z)) == 0.0);
    CHECK(num::max_abs(n_i * i_z - tensor(l.number, p.z)) == 0.0);
    const ComplexMatrix az = tensor(l.a, p.z);
    for (int n = 0; n < 4; ++n) {
        CHECK(az(composite_index(n, Spin::Up), composite_index(n + 1, Spin::Up)).real() ==
              doctest::Approx(std::sqrt(n + 1.0)));
    }
    CHECK_THROWS_AS(embed_photon(ComplexMatrix::Identity(3, 3), s), InputError);
    CHECK_THROWS_AS(embed_atom(ComplexMatrix::Identity(3, 3), s), InputError);
}

TEST_CASE("partial traces") {
    const FockSpace s(3);
    const CoherentState c(1.1, 0.2, s);
    const ComplexMatrix rho_r = c.density() / c.density().trace();
    const auto rho_a = AtomDensity::from_parts(0.6, Complex(0.2, 0.1), 0.4);
    const ComplexMatrix rho = tensor(rho_r, rho_a.matrix());
    CHECK(num::max_abs(partial_trace(rho, Subsystem::Photon, s) - rho_a.matrix()) < 1e-15);
    CHECK(num::max_abs(partial_trace(rho, Subsystem::Atom, s) - rho_r) < 1e-15);
    CHECK(std::abs(num::trace(partial_trace(rho, Subsystem::Atom, s)) - num::trace(rho)) < 1e-15);

    ComplexVector bell = ComplexVector::Zero(s.composite_dim());
    bell(composite_index(0, Spin::Up)) = M_SQRT1_2;
    bell(composite_index(1, Spin::Down)) = M_SQRT1_2;
    const ComplexMatrix pb = bell * bell.adjoint();
    const ComplexMatrix ra = partial_trace(pb, Subsystem::Photon, s);
    CHECK(num::max_abs(ra - 0.5 * ComplexMatrix::Identity(2, 2)) < 1e-15);
    const ComplexMatrix rr = partial_trace(pb, Subsystem::Atom, s);
    CHECK(std::abs(rr(0, 0) - 0.5) < 1e-15);
    CHECK(std::abs(rr(1, 1) - 0.5) < 1e-15);
    CHECK(std::abs(rr(0, 1)) < 1e-15);
    CHECK_THROWS_AS(partial_trace(ComplexMatrix::Identity(5, 5), Subsystem::Atom, s), InputError);
}

TEST_CASE("validated subspace drops only the top Up state") {
    const FockSpace s(5);
    const auto idx = validated_indices(s);
    CHECK(idx.size() == 11u);
    CHECK(std::find(idx.begin(), idx.end(), composite_index(5, Spin::Up)) == idx.end());
    ComplexMatrix a = ComplexMatrix::Zero(12, 12);
    ComplexMatrix b = a;
    b(composite_index(5, Spin::Up), 0) = 1.0;
    CHECK(max_abs_diff_on(a, b, idx) == 0.0);
    b(1, 0) = 0.25;
    CHECK(max_abs_diff_on(a, b, idx) == 0.25);
}
