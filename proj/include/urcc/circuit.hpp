#pragma once

#include <cmath>
#include <cstdio>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "urcc/pauli.hpp"

namespace urcc {

/// Control specification: gate acts when `qubit` is in state |value>.
struct Control {
  int qubit = 0;
  int value = 1;
};

struct Gate {
  enum class Kind {
    BasisChange,   // W(X)=H, W(Y)=exp(-i pi/4 X), W(Z)=I; dagger optional
    Cnot,          // CNOT(control, target)
    Ph,            // diag(e^{-i theta}, e^{i theta}) on `qubit`
    ControlledLetter,  // controlled-X/Y/Z from `control` onto `qubit`
    Pauli,             // plain X/Y/Z on `qubit`
    BranchPhaseQuarter,  // i^{quarter_turns} on the |value> branch of `qubit` (Clifford)
    BranchPhase,         // e^{i theta} on the |value> branch of `qubit`; counts as a phase gate
  };
  Kind kind;
  PauliLetter letter = PauliLetter::I;
  int qubit = 0;
  int control = 0;   // Cnot / ControlledLetter / branch value for BranchPhase*
  double theta = 0;
  int quarter_turns = 0;
  bool dagger = false;
};

struct QuantumCircuit {
  int width = 0;
  std::vector<Gate> gates;

  void check_index(int q) const {
    if (q < 0 || q >= width) throw std::out_of_range("QuantumCircuit: qubit index out of range");
  }

  void basis_change(PauliLetter axis, int q, bool dag) {
    check_index(q);
    if (axis == PauliLetter::Z) return;  // W(Z) = I
    Gate g{Gate::Kind::BasisChange, axis, q, 0, 0, 0, dag};
    gates.push_back(g);
  }
  void cnot(int c, int t) {
    check_index(c);
    check_index(t);
    gates.push_back(Gate{Gate::Kind::Cnot, PauliLetter::I, t, c, 0, 0, false});
  }
  void ph(double theta, int q) {
    check_index(q);
    if (!std::isfinite(theta)) throw std::invalid_argument("QuantumCircuit: non-finite angle");
    gates.push_back(Gate{Gate::Kind::Ph, PauliLetter::I, q, 0, theta, 0, false});
  }
  void controlled_letter(PauliLetter l, int c, int t) {
    check_index(c);
    check_index(t);
    gates.push_back(Gate{Gate::Kind::ControlledLetter, l, t, c, 0, 0, false});
  }
  void pauli(PauliLetter l, int q) {
    check_index(q);
    gates.push_back(Gate{Gate::Kind::Pauli, l, q, 0, 0, 0, false});
  }
  void branch_phase_quarter(int q, int value, int quarter_turns) {
    check_index(q);
    gates.push_back(
        Gate{Gate::Kind::BranchPhaseQuarter, PauliLetter::I, q, value, 0, ((quarter_turns % 4) + 4) % 4, false});
  }
  void branch_phase(int q, int value, double theta) {
    check_index(q);
    gates.push_back(Gate{Gate::Kind::BranchPhase, PauliLetter::I, q, value, theta, 0, false});
  }

  /// One gate per line; stable ordering for golden tests.
  std::string dump() const {
    std::string out;
    char buf[96];
    for (const auto& g : gates) {
      switch (g.kind) {
        case Gate::Kind::BasisChange:
          std::snprintf(buf, sizeof buf, "%s %c %d\n", g.dagger ? "WDG" : "W",
                        "IXYZ"[static_cast<int>(g.letter)], g.qubit);
          break;
        case Gate::Kind::Cnot:
          std::snprintf(buf, sizeof buf, "CNOT %d %d\n", g.control, g.qubit);
          break;
        case Gate::Kind::Ph:
          std::snprintf(buf, sizeof buf, "PH %.17g %d\n", g.theta, g.qubit);
          break;
        case Gate::Kind::ControlledLetter:
          std::snprintf(buf, sizeof buf, "C%c %d %d\n", "IXYZ"[static_cast<int>(g.letter)],
                        g.control, g.qubit);
          break;
        case Gate::Kind::Pauli:
          std::snprintf(buf, sizeof buf, "%c %d\n", "IXYZ"[static_cast<int>(g.letter)], g.qubit);
          break;
        case Gate::Kind::BranchPhaseQuarter:
          std::snprintf(buf, sizeof buf, "BPH %d %d %d\n", g.qubit, g.control, g.quarter_turns);
          break;
        case Gate::Kind::BranchPhase:
          std::snprintf(buf, sizeof buf, "CPH %.17g %d %d\n", g.theta, g.qubit, g.control);
          break;
      }
      out += buf;
    }
    return out;
  }
};

struct ResourceCount {
  long long single_qubit = 0;
  long long two_qubit = 0;
  long long phase_gates = 0;
  long long t_count_estimate = 0;
};

/**
 * Count gates; the T estimate charges ceil(c_rs * log2(1/eps_ph)) T gates per
 * phase gate (Ross-Selinger style synthesis is counted, not performed).
 * Clifford gates, including the quarter-turn branch phases, contribute none.
 */
inline ResourceCount count_resources(const QuantumCircuit& c, double eps_ph, double c_rs = 4.0) {
  if (!(eps_ph > 0 && eps_ph < 1)) throw std::invalid_argument("count_resources: eps_ph must be in (0,1)");
  ResourceCount r;
  for (const auto& g : c.gates) {
    switch (g.kind) {
      case Gate::Kind::BasisChange:
      case Gate::Kind::Pauli:
      case Gate::Kind::BranchPhaseQuarter:
        ++r.single_qubit;
        break;
      case Gate::Kind::Cnot:
      case Gate::Kind::ControlledLetter:
        ++r.two_qubit;
        break;
      case Gate::Kind::Ph:
      case Gate::Kind::BranchPhase:
        ++r.phase_gates;
        break;
    }
  }
  r.t_count_estimate = r.phase_gates * static_cast<long long>(std::ceil(c_rs * std::log2(1.0 / eps_ph)));
  return r;
}

inline double t_count_ratio(long long n_seg_qd, long long n_seg_urcc) {
  if (n_seg_urcc < 1) throw std::invalid_argument("t_count_ratio: N_seg_urcc must be >= 1");
  return static_cast<double>(n_seg_qd) / (4.0 * static_cast<double>(n_seg_urcc));
}

/**
 * Pauli rotation exp(-i phi sigma) lowered to basis changes, a CNOT ladder
 * down the support, one phase gate, and the mirrored ladder. A controlled
 * rotation splits the phase gate into Ph(phi/2), CNOT from the ancilla,
 * Ph(-phi/2), CNOT; control-on-0 conjugates the ancilla with X. The sign of a
 * negative sigma (phase_exp == 2) is absorbed by negating phi.
 *
 * `data_offset` maps data qubit j of sigma to circuit wire j + data_offset.
 */
inline void lower_rotation_into(QuantumCircuit& circ, const PauliString& sigma, double phi,
                                int data_offset, std::optional<Control> ctrl) {
  if (!sigma.is_hermitian())
    throw std::invalid_argument("lower_rotation: sigma must be Hermitian (phase ±1)");
  if (sigma.phase_exp() == 2) phi = -phi;
  const std::vector<int> supp = sigma.support();
  const int k = static_cast<int>(supp.size());
  if (k == 0) throw std::invalid_argument("lower_rotation: identity sigma; use lower_global_phase");
  for (int j : supp) circ.basis_change(sigma.letter(j), j + data_offset, false);
  for (int s = 0; s + 1 < k; ++s) circ.cnot(supp[s] + data_offset, supp[s + 1] + data_offset);
  const int last = supp.back() + data_offset;
  if (!ctrl) {
    circ.ph(phi, last);
  } else {
    const bool on_zero = ctrl->value == 0;
    if (on_zero) circ.pauli(PauliLetter::X, ctrl->qubit);
    circ.ph(phi / 2, last);
    circ.cnot(ctrl->qubit, last);
    circ.ph(-phi / 2, last);
    circ.cnot(ctrl->qubit, last);
    if (on_zero) circ.pauli(PauliLetter::X, ctrl->qubit);
  }
  for (int s = k - 2; s >= 0; --s) circ.cnot(supp[s] + data_offset, supp[s + 1] + data_offset);
  for (int j : supp) circ.basis_change(sigma.letter(j), j + data_offset, true);
}

/// exp(-i phi * (±I)): a pure phase, realized on the control branch.
inline void lower_global_phase_into(QuantumCircuit& circ, int sign, double phi,
                                    std::optional<Control> ctrl) {
  const double theta = -phi * sign;  // operator is e^{i theta} * I on the branch
  if (!ctrl) throw std::invalid_argument("lower_global_phase: uncontrolled global phase is unobservable");
  circ.branch_phase(ctrl->qubit, ctrl->value, theta);
}

/**
 * R-branch Pauli product: one controlled letter per support qubit, plus the
 * exact i^{phase_exp} realized on the ancilla branch. The product's phase is
 * a relative phase between the Hadamard-test branches and must be kept.
 */
inline void lower_pauli_product_into(QuantumCircuit& circ, const PauliString& op, int data_offset,
                                     Control ctrl) {
  const bool on_zero = ctrl.value == 0;
  if (on_zero && op.weight() > 0) circ.pauli(PauliLetter::X, ctrl.qubit);
  for (int j : op.support()) circ.controlled_letter(op.letter(j), ctrl.qubit, j + data_offset);
  if (on_zero && op.weight() > 0) circ.pauli(PauliLetter::X, ctrl.qubit);
  if (op.phase_exp() != 0) circ.branch_phase_quarter(ctrl.qubit, ctrl.value, op.phase_exp());
}

inline QuantumCircuit lower_rotation(const PauliString& sigma, double phi, int width,
                                     int data_offset, std::optional<Control> ctrl) {
  QuantumCircuit c{width, {}};
  lower_rotation_into(c, sigma, phi, data_offset, ctrl);
  return c;
}

inline QuantumCircuit lower_pauli_product(const PauliString& op, int width, int data_offset,
                                          Control ctrl) {
  QuantumCircuit c{width, {}};
  lower_pauli_product_into(c, op, data_offset, ctrl);
  return c;
}

}  // namespace urcc
