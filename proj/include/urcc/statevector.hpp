#pragma once

#include <cmath>
#include <complex>
#include <random>
#include <stdexcept>
#include <vector>

#include "urcc/circuit.hpp"
#include "urcc/pauli.hpp"
#include "urcc/urcc.hpp"

namespace urcc {

/**
 * Dense (n+1)-qubit statevector. Qubit 0 is the ancilla and the most
 * significant index bit. No renormalization anywhere: norm drift past 1e-12
 * indicates a gate bug, and tests assert on it.
 */
class StateVector {
 public:
  StateVector() = default;
  explicit StateVector(int width, int max_width = 14) : width_(width) {
    if (width < 1 || width > max_width) throw std::invalid_argument("StateVector: width out of range");
    amps_.assign(std::size_t(1) << width, cx(0, 0));
    amps_[0] = cx(1, 0);
  }

  int width() const { return width_; }
  const std::vector<cx>& amplitudes() const { return amps_; }
  std::vector<cx>& amplitudes() { return amps_; }

  double norm() const {
    double s = 0;
    for (const cx& a : amps_) s += std::norm(a);
    return std::sqrt(s);
  }

  /// Index bit mask of qubit q (qubit 0 = MSB).
  std::size_t mask(int q) const { return std::size_t(1) << (width_ - 1 - q); }

  void apply_1q(int q, const cx u00, const cx u01, const cx u10, const cx u11) {
    const std::size_t m = mask(q);
    const std::size_t dim = amps_.size();
    for (std::size_t i = 0; i < dim; ++i) {
      if (i & m) continue;
      const cx a0 = amps_[i], a1 = amps_[i | m];
      amps_[i] = u00 * a0 + u01 * a1;
      amps_[i | m] = u10 * a0 + u11 * a1;
    }
  }

  void apply_letter(int q, PauliLetter l, std::size_t control_mask = 0) {
    const std::size_t m = mask(q);
    const std::size_t dim = amps_.size();
    switch (l) {
      case PauliLetter::I:
        return;
      case PauliLetter::X:
        for (std::size_t i = 0; i < dim; ++i)
          if (!(i & m) && (i & control_mask) == control_mask) std::swap(amps_[i], amps_[i | m]);
        return;
      case PauliLetter::Y:
        for (std::size_t i = 0; i < dim; ++i)
          if (!(i & m) && (i & control_mask) == control_mask) {
            const cx a0 = amps_[i], a1 = amps_[i | m];
            amps_[i] = cx(0, -1) * a1;   // Y|1> = -i|0>
            amps_[i | m] = cx(0, 1) * a0;  // Y|0> = i|1>
          }
        return;
      case PauliLetter::Z:
        for (std::size_t i = 0; i < dim; ++i)
          if ((i & m) && (i & control_mask) == control_mask) amps_[i] = -amps_[i];
        return;
    }
  }

  void apply_gate(const Gate& g) {
    static const double s2 = 1.0 / std::sqrt(2.0);
    switch (g.kind) {
      case Gate::Kind::BasisChange: {
        if (g.letter == PauliLetter::X) {
          apply_1q(g.qubit, s2, s2, s2, -s2);  // H, self-adjoint
        } else if (g.letter == PauliLetter::Y) {
          // W(Y) = exp(-i pi/4 X); W(Y)^dag Z W(Y) = Y
          const cx d = g.dagger ? cx(0, s2) : cx(0, -s2);
          apply_1q(g.qubit, cx(s2, 0), d, d, cx(s2, 0));
        }
        return;
      }
      case Gate::Kind::Cnot:
        apply_letter(g.qubit, PauliLetter::X, mask(g.control));
        return;
      case Gate::Kind::Ph: {
        const cx lo = std::polar(1.0, -g.theta), hi = std::polar(1.0, g.theta);
        apply_1q(g.qubit, lo, cx(0, 0), cx(0, 0), hi);
        return;
      }
      case Gate::Kind::ControlledLetter:
        apply_letter(g.qubit, g.letter, mask(g.control));
        return;
      case Gate::Kind::Pauli:
        apply_letter(g.qubit, g.letter);
        return;
      case Gate::Kind::BranchPhaseQuarter: {
        static const cx kPhase[4] = {cx(1, 0), cx(0, 1), cx(-1, 0), cx(0, -1)};
        branch_scale(g.qubit, g.control, kPhase[g.quarter_turns]);
        return;
      }
      case Gate::Kind::BranchPhase:
        branch_scale(g.qubit, g.control, std::polar(1.0, g.theta));
        return;
    }
  }

  void apply_circuit(const QuantumCircuit& c) {
    if (c.width != width_) throw std::invalid_argument("apply_circuit: width mismatch");
    for (const auto& g : c.gates) apply_gate(g);
  }

  /// In-place multiplication by a PauliString on qubits [offset, offset+n).
  void apply_pauli(const PauliString& p, int offset = 0) {
    static const cx kPhase[4] = {cx(1, 0), cx(0, 1), cx(-1, 0), cx(0, -1)};
    std::size_t flip = 0;
    std::vector<std::pair<std::size_t, int>> cond;  // (mask, i-power when bit set)
    int base = p.phase_exp();
    for (int q = 0; q < p.num_qubits(); ++q) {
      const std::size_t m = mask(q + offset);
      switch (p.letter(q)) {
        case PauliLetter::I: break;
        case PauliLetter::X: flip |= m; break;
        case PauliLetter::Y:
          flip |= m;
          base += 1;       // Y|0> = i|1>
          cond.push_back({m, 2});  // extra -1 when the input bit is 1
          break;
        case PauliLetter::Z:
          cond.push_back({m, 2});
          break;
      }
    }
    std::vector<cx> out(amps_.size());
    for (std::size_t i = 0; i < amps_.size(); ++i) {
      int pe = base;
      for (const auto& [m, e] : cond)
        if (i & m) pe += e;
      out[i ^ flip] = kPhase[((pe % 4) + 4) % 4] * amps_[i];
    }
    amps_.swap(out);
  }

  /// <psi| P |psi> for Hermitian P spanning the whole register.
  double expectation(const PauliString& p) const {
    if (!p.is_hermitian()) throw std::invalid_argument("expectation: non-Hermitian phase");
    if (p.num_qubits() != width_) throw std::invalid_argument("expectation: width mismatch");
    StateVector tmp = *this;
    tmp.apply_pauli(p);
    cx s(0, 0);
    for (std::size_t i = 0; i < amps_.size(); ++i) s += std::conj(amps_[i]) * tmp.amps_[i];
    if (std::abs(s.imag()) > 1e-10) throw std::runtime_error("expectation: imaginary residual");
    return s.real();
  }

  /// Sample a computational-basis index from |amplitude|^2.
  std::size_t sample_basis(std::mt19937_64& rng) const {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    double r = u(rng);
    for (std::size_t i = 0; i < amps_.size(); ++i) {
      r -= std::norm(amps_[i]);
      if (r <= 0) return i;
    }
    return amps_.size() - 1;
  }

 private:
  void branch_scale(int q, int value, cx factor) {
    const std::size_t m = mask(q);
    for (std::size_t i = 0; i < amps_.size(); ++i) {
      const bool one = (i & m) != 0;
      if (one == (value == 1)) amps_[i] *= factor;
    }
  }

  int width_ = 0;
  std::vector<cx> amps_;
};

/// Ancilla |+> on qubit 0, data register in the given basis state.
inline StateVector prepare_hadamard_test(std::size_t basis_label, int n) {
  StateVector s(n + 1);
  auto& a = s.amplitudes();
  if (basis_label >= (std::size_t(1) << n))
    throw std::invalid_argument("prepare_hadamard_test: basis label out of range");
  a[0] = cx(0, 0);
  const double v = 1.0 / std::sqrt(2.0);
  a[basis_label] = cx(v, 0);                          // ancilla 0 branch
  a[basis_label | s.mask(0)] = cx(v, 0);              // ancilla 1 branch
  return s;
}

inline StateVector prepare_hadamard_test(const std::vector<cx>& psi, int n) {
  if (psi.size() != (std::size_t(1) << n))
    throw std::invalid_argument("prepare_hadamard_test: amplitude list size mismatch");
  double nrm = 0;
  for (const cx& a : psi) nrm += std::norm(a);
  if (std::abs(nrm - 1.0) > 1e-10)
    throw std::invalid_argument("prepare_hadamard_test: state not normalized");
  StateVector s(n + 1);
  auto& a = s.amplitudes();
  const double v = 1.0 / std::sqrt(2.0);
  a[0] = cx(0, 0);
  for (std::size_t i = 0; i < psi.size(); ++i) {
    a[i] = v * psi[i];
    a[i | s.mask(0)] = v * psi[i];
  }
  return s;
}

/// Dense matrix of a circuit, column by column; test/oracle helper.
inline Eigen::MatrixXcd circuit_matrix(const QuantumCircuit& c) {
  const std::size_t dim = std::size_t(1) << c.width;
  Eigen::MatrixXcd m(dim, dim);
  for (std::size_t col = 0; col < dim; ++col) {
    StateVector s(c.width);
    s.amplitudes().assign(dim, cx(0, 0));
    s.amplitudes()[col] = cx(1, 0);
    s.apply_circuit(c);
    for (std::size_t row = 0; row < dim; ++row) m(row, col) = s.amplitudes()[row];
  }
  return m;
}

enum class MeasureMode { Exact, Shot };

/// X on the ancilla tensored with the signed data observable.
inline PauliString extend_observable(const PauliString& obs) {
  PauliString full(obs.num_qubits() + 1);
  full.set_letter(0, PauliLetter::X);
  for (int q = 0; q < obs.num_qubits(); ++q) full.set_letter(q + 1, obs.letter(q));
  full.set_phase_exp(obs.phase_exp());
  return full;
}

inline void apply_sampled_unitary(StateVector& state, const SampledUnitary& su, Control ctrl) {
  QuantumCircuit circ{state.width(), {}};
  switch (su.kind) {
    case SampledUnitary::Kind::Identity:
      return;
    case SampledUnitary::Kind::Rotation:
      if (su.op.weight() == 0)
        lower_global_phase_into(circ, su.op.sign(), su.angle, ctrl);
      else
        lower_rotation_into(circ, su.op, su.angle, 1, ctrl);
      break;
    case SampledUnitary::Kind::PauliProduct:
      lower_pauli_product_into(circ, su.op, 1, ctrl);
      break;
  }
  state.apply_circuit(circ);
}

/**
 * Measure every qubit simultaneously in the eigenbasis of the commuting pair
 * (X on the ancilla when present, the given data Pauli letters elsewhere).
 * Returns one ±1 outcome per data qubit, prefixed by the ancilla outcome
 * (fixed +1 for ancilla-free registers). Consumes the state.
 */
inline std::vector<int> measure_bits(StateVector state, const PauliString& data_letters,
                                     bool with_ancilla, std::mt19937_64& rng) {
  static const double s2 = 1.0 / std::sqrt(2.0);
  const int offset = with_ancilla ? 1 : 0;
  if (state.width() != data_letters.num_qubits() + offset)
    throw std::invalid_argument("measure_bits: width mismatch");
  if (with_ancilla) state.apply_1q(0, s2, s2, s2, -s2);
  for (int q : data_letters.support()) {
    const PauliLetter l = data_letters.letter(q);
    if (l == PauliLetter::X)
      state.apply_1q(q + offset, s2, s2, s2, -s2);
    else if (l == PauliLetter::Y)
      state.apply_1q(q + offset, cx(s2, 0), cx(0, -s2), cx(0, -s2), cx(s2, 0));
  }
  const std::size_t idx = state.sample_basis(rng);
  std::vector<int> r(data_letters.num_qubits() + 1, 1);
  if (with_ancilla) r[0] = (idx & state.mask(0)) ? -1 : 1;
  for (int q = 0; q < data_letters.num_qubits(); ++q)
    r[q + 1] = (idx & state.mask(q + offset)) ? -1 : 1;
  return r;
}

inline StateVector evolve_pair(const CompiledCircuitPair& pair, const StateVector& prepared) {
  StateVector state = prepared;
  for (const auto& su : pair.branch_s) apply_sampled_unitary(state, su, Control{0, 1});
  for (const auto& su : pair.branch_s_prime) apply_sampled_unitary(state, su, Control{0, 0});
  return state;
}

/**
 * Execute one Hadamard-test pair: branch_s controlled on ancilla=1, then
 * branch_s' on ancilla=0, then measure X (x) O. Exact mode returns the
 * expectation; shot mode returns a ±1 draw from the joint eigenbasis.
 */
inline double run_pair(const CompiledCircuitPair& pair, const StateVector& prepared,
                       const PauliString& obs, MeasureMode mode, std::mt19937_64& rng) {
  if (!obs.is_hermitian()) throw std::invalid_argument("run_pair: observable must be Hermitian");
  StateVector state = evolve_pair(pair, prepared);
  if (mode == MeasureMode::Exact) return state.expectation(extend_observable(obs));
  const std::vector<int> r = measure_bits(std::move(state), obs, true, rng);
  int v = r[0];
  for (int q : obs.support()) v *= r[q + 1];
  return obs.sign() * static_cast<double>(v);
}

/// Shot measurement of a full record of R_g outcomes after the pair circuit.
inline std::vector<int> run_pair_bits(const CompiledCircuitPair& pair, const StateVector& prepared,
                                      const PauliString& group_R, std::mt19937_64& rng) {
  return measure_bits(evolve_pair(pair, prepared), group_R, true, rng);
}

}  // namespace urcc
