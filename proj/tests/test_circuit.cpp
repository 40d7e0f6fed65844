#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "urcc/oracle.hpp"
#include "urcc/statevector.hpp"

using namespace urcc;

namespace {

PauliString random_support_pauli(int n, int kmax, std::mt19937_64& rng) {
  PauliString p(n);
  std::uniform_int_distribution<int> dl(1, 3);
  int placed = 0;
  while (placed == 0) {
    for (int q = 0; q < n && placed < kmax; ++q) {
      if (rng() % 2) {
        p.set_letter(q, static_cast<PauliLetter>(dl(rng)));
        ++placed;
      }
    }
  }
  if (rng() % 2) p.mul_phase(2);  // random sign
  return p;
}

Eigen::MatrixXcd controlled(const Eigen::MatrixXcd& u, int value) {
  // ancilla (qubit 0, MSB) |value> branch gets u, the other branch identity
  const auto dim = u.rows();
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(2 * dim, 2 * dim);
  m.block(0, 0, dim, dim) = value == 0 ? u : Eigen::MatrixXcd::Identity(dim, dim);
  m.block(dim, dim, dim, dim) = value == 1 ? u : Eigen::MatrixXcd::Identity(dim, dim);
  return m;
}

}  // namespace

TEST_CASE("basis changes diagonalize their letters") {
  // W^dag Z W must equal the letter the wire is being rotated into.
  for (PauliLetter l : {PauliLetter::X, PauliLetter::Y}) {
    QuantumCircuit w{1, {}};
    w.basis_change(l, 0, false);
    QuantumCircuit wd{1, {}};
    wd.basis_change(l, 0, true);
    const Eigen::MatrixXcd W = circuit_matrix(w), Wd = circuit_matrix(wd);
    CHECK((Wd * W - Eigen::MatrixXcd::Identity(2, 2)).cwiseAbs().maxCoeff() < 1e-15);
    const Eigen::MatrixXcd got = Wd * PauliString::single(1, 0, PauliLetter::Z).to_matrix() * W;
    const Eigen::MatrixXcd want = PauliString::single(1, 0, l).to_matrix();
    CHECK((got - want).cwiseAbs().maxCoeff() < 1e-15);
  }
}

TEST_CASE("uncontrolled rotation lowering matches exp(-i phi sigma)") {
  std::mt19937_64 rng(41);
  std::uniform_real_distribution<double> ang(-3.0, 3.0);
  for (int trial = 0; trial < 100; ++trial) {
    const int n = 1 + static_cast<int>(rng() % 3);
    const PauliString sigma = random_support_pauli(n, 4, rng);
    const double phi = ang(rng);
    const QuantumCircuit c = lower_rotation(sigma, phi, n, 0, std::nullopt);
    // exp(-i phi sigma) with the sign folded into the effective angle
    PauliString base = sigma;
    base.set_phase_exp(0);
    const Eigen::MatrixXcd want = oracle::pauli_rotation_matrix(base, sigma.sign() * phi);
    CHECK((circuit_matrix(c) - want).cwiseAbs().maxCoeff() < 1e-12);
  }
}

TEST_CASE("controlled rotation lowering matches the branch matrix") {
  std::mt19937_64 rng(42);
  std::uniform_real_distribution<double> ang(-3.0, 3.0);
  for (int trial = 0; trial < 100; ++trial) {
    const int n = 1 + static_cast<int>(rng() % 3);
    const PauliString sigma = random_support_pauli(n, 4, rng);
    const double phi = ang(rng);
    const int value = static_cast<int>(rng() % 2);
    const QuantumCircuit c = lower_rotation(sigma, phi, n + 1, 1, Control{0, value});
    PauliString base = sigma;
    base.set_phase_exp(0);
    const Eigen::MatrixXcd want = controlled(oracle::pauli_rotation_matrix(base, sigma.sign() * phi), value);
    CHECK((circuit_matrix(c) - want).cwiseAbs().maxCoeff() < 1e-12);
  }
}

TEST_CASE("Pauli product lowering realizes i^k on the ancilla branch") {
  std::mt19937_64 rng(43);
  for (int trial = 0; trial < 100; ++trial) {
    const int n = 1 + static_cast<int>(rng() % 3);
    PauliString op = random_support_pauli(n, n, rng);
    op.set_phase_exp(static_cast<int>(rng() % 4));
    const int value = static_cast<int>(rng() % 2);
    const QuantumCircuit c = lower_pauli_product(op, n + 1, 1, Control{0, value});
    const Eigen::MatrixXcd want = controlled(op.to_matrix(), value);
    CHECK((circuit_matrix(c) - want).cwiseAbs().maxCoeff() < 1e-12);
  }
}

TEST_CASE("identity-branch phase lowering") {
  // exp(-i phi * (-I)) on the |0> branch of the ancilla.
  QuantumCircuit c{2, {}};
  lower_global_phase_into(c, -1, 0.7, Control{0, 0});
  const Eigen::MatrixXcd want = controlled(std::polar(1.0, 0.7) * Eigen::MatrixXcd::Identity(2, 2), 0);
  CHECK((circuit_matrix(c) - want).cwiseAbs().maxCoeff() < 1e-12);
  CHECK_THROWS_AS(lower_global_phase_into(c, 1, 0.3, std::nullopt), std::invalid_argument);
}

TEST_CASE("resource counting: controlled rotation on weight-k support") {
  // k=3 with one Z letter (its W is the identity and dropped): 4 basis
  // changes + 2 ancilla CNOTs + 2(k-1) ladder CNOTs + 2 phase gates.
  const PauliString sigma = PauliString::parse("XYZ");
  const QuantumCircuit c = lower_rotation(sigma, 0.3, 4, 1, Control{0, 1});
  const ResourceCount r = count_resources(c, 1e-6);
  CHECK(r.single_qubit == 4);
  CHECK(r.two_qubit == 6);
  CHECK(r.phase_gates == 2);
  CHECK(r.t_count_estimate == 2 * static_cast<long long>(std::ceil(4.0 * std::log2(1e6))));
}

TEST_CASE("W(Z) is dropped and never counted") {
  const QuantumCircuit c = lower_rotation(PauliString::parse("ZZ"), 0.3, 2, 0, std::nullopt);
  const ResourceCount r = count_resources(c, 1e-6);
  CHECK(r.single_qubit == 0);
  CHECK(r.two_qubit == 2);
  CHECK(r.phase_gates == 1);
}

TEST_CASE("quarter-turn branch phases are Clifford, not phase gates") {
  QuantumCircuit c{2, {}};
  c.branch_phase_quarter(0, 1, 3);
  const ResourceCount r = count_resources(c, 1e-6);
  CHECK(r.single_qubit == 1);
  CHECK(r.phase_gates == 0);
  CHECK(r.t_count_estimate == 0);
}

TEST_CASE("t_count_ratio formula") {
  CHECK(t_count_ratio(16, 4) == 1.0);
  CHECK(t_count_ratio(64, 4) == 4.0);
  CHECK_THROWS_AS(t_count_ratio(8, 0), std::invalid_argument);
}

TEST_CASE("dump is stable line-oriented text") {
  QuantumCircuit c{3, {}};
  c.basis_change(PauliLetter::X, 1, false);
  c.cnot(1, 2);
  c.ph(0.5, 2);
  c.branch_phase_quarter(0, 1, 2);
  CHECK(c.dump() == "W X 1\nCNOT 1 2\nPH 0.5 2\nBPH 0 1 2\n");
}
