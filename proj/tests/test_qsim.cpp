#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <numbers>

#include "qiren/sim/dense.hpp"
#include "qiren/sim/state.hpp"

using namespace qiren;
constexpr double pi = std::numbers::pi;

static Gate random_gate(int num_qubits, Rng& rng) {
  const int pick = int(rng.uniform() * 9.0);
  const int q = int(rng.uniform() * num_qubits);
  const double a = rng.uniform(-pi, pi);
  switch (pick) {
    case 0: return Gate::h(q);
    case 1: return Gate::x(q);
    case 2: return Gate::y(q);
    case 3: return Gate::z(q);
    case 4: return Gate::rx(q, a);
    case 5: return Gate::ry(q, a);
    case 6: return Gate::rz(q, a);
    case 7:
      return Gate::rot(q, a, rng.uniform(-3.0, 3.0), rng.uniform(-3.0, 3.0));
    default: {
      if (num_qubits < 2) return Gate::x(q);
      int q2 = int(rng.uniform() * (num_qubits - 1));
      if (q2 >= q) ++q2;
      return rng.uniform() < 0.5 ? Gate::cnot(q, q2) : Gate::cz(q, q2);
    }
  }
}

TEST_CASE("hadamard puts |0> into an equal superposition") {
  StateVector psi(1);
  apply_gate(psi, Gate::h(0));
  const double r = 1.0 / std::sqrt(2.0);
  CHECK(std::abs(psi.amps[0] - cplx(r, 0)) < 1e-15);
  CHECK(std::abs(psi.amps[1] - cplx(r, 0)) < 1e-15);
}

TEST_CASE("cnot flips the target when the control is set") {
  StateVector psi(2);
  apply_gate(psi, Gate::x(0));  // |10>
  apply_gate(psi, Gate::cnot(0, 1));
  CHECK(std::abs(psi.amps[3] - cplx(1, 0)) < 1e-15);  // |11>
  CHECK(std::abs(psi.amps[2]) < 1e-15);
}

TEST_CASE("cz flips the sign of |11> only") {
  for (int basis = 0; basis < 4; ++basis) {
    StateVector psi(2);
    if (basis & 2) apply_gate(psi, Gate::x(0));
    if (basis & 1) apply_gate(psi, Gate::x(1));
    apply_gate(psi, Gate::cz(0, 1));
    const double want = basis == 3 ? -1.0 : 1.0;
    CHECK(std::abs(psi.amps[size_t(basis)] - cplx(want, 0)) < 1e-15);
  }
}

TEST_CASE("ry(pi/2) rz(h) ry(pi/2) reads out -cos(h)") {
  for (double h : {0.0, 0.3, 1.1, pi / 2, 2.7, -1.9}) {
    StateVector psi(1);
    apply_gate(psi, Gate::ry(0, pi / 2));
    apply_gate(psi, Gate::rz(0, h));
    apply_gate(psi, Gate::ry(0, pi / 2));
    CHECK(expectation(psi, Observable::z(0)) ==
          doctest::Approx(-std::cos(h)).epsilon(1e-12));
  }
}

TEST_CASE("bell pair has perfectly correlated z readouts") {
  StateVector psi(2);
  apply_gate(psi, Gate::h(0));
  apply_gate(psi, Gate::cnot(0, 1));
  Observable zz{{PauliTerm{1.0, {{0, Pauli::Z}, {1, Pauli::Z}}}}};
  CHECK(expectation(psi, zz) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(expectation(psi, Observable::z(0)) ==
        doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("rz convention: phase rotation up to a global phase") {
  // exp(-i t Z / 2) equals diag(1, exp(i t)) times exp(-i t / 2)
  Rng rng(5);
  for (int trial = 0; trial < 20; ++trial) {
    const double t = rng.uniform(-2.0 * pi, 2.0 * pi);
    StateVector a(1);
    apply_gate(a, Gate::h(0));
    StateVector b = a;
    apply_rz(a, 0, t);
    b.amps[1] *= std::polar(1.0, t);
    const cplx phase = std::polar(1.0, -t / 2.0);
    CHECK(std::abs(a.amps[0] - phase * b.amps[0]) < 1e-14);
    CHECK(std::abs(a.amps[1] - phase * b.amps[1]) < 1e-14);
  }
}

TEST_CASE("rot is the rz(phi) ry(theta) rz(omega) matrix product") {
  Rng rng(6);
  for (int trial = 0; trial < 20; ++trial) {
    const double phi = rng.uniform(-pi, pi);
    const double theta = rng.uniform(-pi, pi);
    const double omega = rng.uniform(-pi, pi);
    StateVector a(1);
    apply_gate(a, Gate::h(0));
    StateVector b = a;
    apply_gate(a, Gate::rot(0, phi, theta, omega));
    apply_rz(b, 0, omega);  // right factor acts first
    apply_ry(b, 0, theta);
    apply_rz(b, 0, phi);
    for (int i = 0; i < 2; ++i)
      CHECK(std::abs(a.amps[size_t(i)] - b.amps[size_t(i)]) < 1e-14);
  }
}

TEST_CASE("rotations are 2 pi periodic in every expectation value") {
  Rng rng(7);
  for (int trial = 0; trial < 10; ++trial) {
    const double t = rng.uniform(-pi, pi);
    for (auto make : {Gate::rx, Gate::ry, Gate::rz}) {
      StateVector a(2), b(2);
      apply_gate(a, Gate::h(0));
      apply_gate(b, Gate::h(0));
      apply_gate(a, Gate::cnot(0, 1));
      apply_gate(b, Gate::cnot(0, 1));
      apply_gate(a, make(1, t));
      apply_gate(b, make(1, t + 2.0 * pi));
      for (int q = 0; q < 2; ++q)
        CHECK(expectation(a, Observable::z(q)) ==
              doctest::Approx(expectation(b, Observable::z(q)))
                  .epsilon(1e-12));
    }
  }
}

TEST_CASE("gate matrices are unitary") {
  Rng rng(8);
  for (int trial = 0; trial < 50; ++trial) {
    const Gate g = random_gate(1, rng);
    if (g.kind == GateKind::CNOT || g.kind == GateKind::CZ) continue;
    const Mat2 m = gate_matrix(g);
    // U^dag U = I
    const cplx e00 = std::conj(m[0]) * m[0] + std::conj(m[2]) * m[2];
    const cplx e01 = std::conj(m[0]) * m[1] + std::conj(m[2]) * m[3];
    const cplx e11 = std::conj(m[1]) * m[1] + std::conj(m[3]) * m[3];
    CHECK(std::abs(e00 - cplx(1, 0)) < 1e-12);
    CHECK(std::abs(e01) < 1e-12);
    CHECK(std::abs(e11 - cplx(1, 0)) < 1e-12);
  }
}

TEST_CASE("random circuits conserve the norm") {
  Rng rng(9);
  for (int trial = 0; trial < 20; ++trial) {
    const int n = 1 + int(rng.uniform() * 8.0);
    StateVector psi(n);
    for (int g = 0; g < 50; ++g) apply_gate(psi, random_gate(n, rng));
    CHECK(std::abs(psi.norm_sq() - 1.0) < 1e-10);
  }
}

TEST_CASE("in-place kernels match the dense matrix reference") {
  Rng rng(10);
  double worst = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    const int n = 1 + int(rng.uniform() * 4.0);
    StateVector fast(n), slow(n);
    // start from a scrambled but shared state
    for (int g = 0; g < 6; ++g) {
      const Gate warm = random_gate(n, rng);
      apply_gate(fast, warm);
      slow = dense_apply_gate(warm, slow);
    }
    for (int g = 0; g < 12; ++g) {
      const Gate gate = random_gate(n, rng);
      apply_gate(fast, gate);
      slow = dense_apply_gate(gate, slow);
    }
    CHECK(std::abs(fast.norm_sq() - 1.0) < 1e-10);
    for (size_t i = 0; i < fast.amps.size(); ++i)
      worst = std::max(worst, std::abs(fast.amps[i] - slow.amps[i]));
  }
  CHECK(worst < 1e-12);
}

TEST_CASE("pauli application on basis states") {
  StateVector zero(1);
  StateVector out = apply_observable(Observable::pauli(Pauli::Y, 0), zero);
  CHECK(std::abs(out.amps[1] - cplx(0, 1)) < 1e-15);  // Y|0> = i|1>
  StateVector one(1);
  apply_gate(one, Gate::x(0));
  out = apply_observable(Observable::pauli(Pauli::Y, 0), one);
  CHECK(std::abs(out.amps[0] - cplx(0, -1)) < 1e-15);  // Y|1> = -i|0>
  out = apply_observable(Observable::pauli(Pauli::X, 0), zero);
  CHECK(std::abs(out.amps[1] - cplx(1, 0)) < 1e-15);
  out = apply_observable(Observable::pauli(Pauli::Z, 0), one);
  CHECK(std::abs(out.amps[1] - cplx(-1, 0)) < 1e-15);
}

TEST_CASE("expectations agree with the dense reference") {
  Rng rng(12);
  for (int trial = 0; trial < 40; ++trial) {
    const int n = 1 + int(rng.uniform() * 4.0);
    StateVector psi(n);
    for (int g = 0; g < 10; ++g) apply_gate(psi, random_gate(n, rng));
    for (int q = 0; q < n; ++q) {
      for (Pauli p : {Pauli::X, Pauli::Y, Pauli::Z}) {
        const Observable obs = Observable::pauli(p, q);
        CHECK(expectation(psi, obs) ==
              doctest::Approx(dense_expectation(psi, obs)).epsilon(1e-11));
      }
    }
    // mixed term with a weight
    if (n >= 2) {
      Observable obs{{PauliTerm{0.7, {{0, Pauli::Z}, {1, Pauli::X}}},
                      PauliTerm{-0.2, {{1, Pauli::Y}}}}};
      CHECK(expectation(psi, obs) ==
            doctest::Approx(dense_expectation(psi, obs)).epsilon(1e-11));
    }
  }
}

TEST_CASE("single-pass z readout matches per-wire expectations") {
  Rng rng(13);
  StateVector psi(5);
  for (int g = 0; g < 25; ++g) apply_gate(psi, random_gate(5, rng));
  std::vector<int> wires = {0, 1, 2, 3, 4};
  std::vector<double> fast(5);
  expectations_all_z(psi, wires, fast.data());
  for (int q = 0; q < 5; ++q)
    CHECK(fast[size_t(q)] ==
          doctest::Approx(expectation(psi, Observable::z(q))).epsilon(1e-12));
}

TEST_CASE("inner product is conjugate-linear in the first slot") {
  StateVector a(1), b(1);
  apply_gate(a, Gate::h(0));
  apply_gate(b, Gate::rx(0, 0.7));
  const cplx ab = inner(a, b);
  const cplx ba = inner(b, a);
  CHECK(std::abs(ab - std::conj(ba)) < 1e-14);
  CHECK(std::abs(inner(a, a).imag()) < 1e-14);
}

TEST_CASE("measurement noise is seed-deterministic and bounded") {
  StateVector psi(3);  // |000>, every <Z> = 1
  Rng r1(42), r2(42);
  StateVector a = psi, b = psi;
  inject_measurement_noise(a, 0.15, r1);
  inject_measurement_noise(b, 0.15, r2);
  for (size_t i = 0; i < a.amps.size(); ++i)
    CHECK(std::abs(a.amps[i] - b.amps[i]) < 1e-16);
  // RX by at most 0.15 tilts <Z> from 1 down to at worst cos(0.15)
  for (int q = 0; q < 3; ++q) {
    const double z = expectation(a, Observable::z(q));
    CHECK(z <= 1.0 + 1e-12);
    CHECK(z >= std::cos(0.15) - 1e-12);
  }
  // a different seed perturbs differently
  Rng r3(43);
  StateVector c = psi;
  inject_measurement_noise(c, 0.15, r3);
  double diff = 0.0;
  for (size_t i = 0; i < c.amps.size(); ++i)
    diff = std::max(diff, std::abs(c.amps[i] - a.amps[i]));
  CHECK(diff > 1e-6);
}

TEST_CASE("noise bound zero leaves the state untouched") {
  Rng rng(1);
  StateVector psi(2);
  apply_gate(psi, Gate::h(0));
  StateVector before = psi;
  inject_measurement_noise(psi, 0.0, rng);
  for (size_t i = 0; i < psi.amps.size(); ++i)
    CHECK(psi.amps[i] == before.amps[i]);
}

TEST_CASE("wire bounds are enforced") {
  StateVector psi(2);
  CHECK_THROWS(apply_gate(psi, Gate::h(2)));
  CHECK_THROWS(apply_gate(psi, Gate::cnot(0, 0)));
  CHECK_THROWS(apply_gate(psi, Gate::cnot(0, 2)));
}
