#pragma once

#include <vector>

#include "urcc/estimator.hpp"
#include "urcc/hamiltonian.hpp"

namespace urcc {

/**
 * Interaction-picture spin chain:
 *   H(t) = J/2 (cos(2 w t) G1 + sin(2 w t) G2),
 *   G1 = sum_k X_k X_{k+1} + Y_k Y_{k+1},
 *   G2 = sum_k (-1)^k (X_k Y_{k+1} - Y_k X_{k+1}),   k = 1..n-1 (1-based).
 */
inline TimeDependentHamiltonian spin_chain_hamiltonian(int n, double J, double omega) {
  std::vector<SignedTerm> terms;
  auto two = [&](int q, PauliLetter a, PauliLetter b) {
    PauliString p(n);
    p.set_letter(q, a);
    p.set_letter(q + 1, b);
    return p;
  };
  for (int q = 0; q + 1 < n; ++q) {
    const double sgn = (q + 1) % 2 == 0 ? 1.0 : -1.0;  // (-1)^k with k = q+1
    terms.push_back({two(q, PauliLetter::X, PauliLetter::X), CoeffWaveform::cosine(J / 2, 2 * omega)});
    terms.push_back({two(q, PauliLetter::Y, PauliLetter::Y), CoeffWaveform::cosine(J / 2, 2 * omega)});
    terms.push_back({two(q, PauliLetter::X, PauliLetter::Y), CoeffWaveform::sine(sgn * J / 2, 2 * omega)});
    terms.push_back({two(q, PauliLetter::Y, PauliLetter::X), CoeffWaveform::sine(-sgn * J / 2, 2 * omega)});
  }
  return TimeDependentHamiltonian(n, std::move(terms));
}

/// Constant terms interpolated as (1 - t/tau) * initial + (t/tau) * final.
inline TimeDependentHamiltonian adiabatic_hamiltonian(
    int n, const std::vector<std::pair<PauliString, double>>& initial,
    const std::vector<std::pair<PauliString, double>>& final_terms, double tau) {
  std::vector<SignedTerm> terms;
  for (const auto& [p, amp] : initial)
    terms.push_back({p, CoeffWaveform::linear_ramp(amp, -amp / tau)});
  for (const auto& [p, amp] : final_terms)
    terms.push_back({p, CoeffWaveform::linear_ramp(0.0, amp / tau)});
  return TimeDependentHamiltonian(n, std::move(terms));
}

/// 2-qubit toy: H_A = -X_1 - X_2, H_B = -Z_1 Z_2 - 0.5 Z_1.
inline TimeDependentHamiltonian adiabatic_toy_hamiltonian(double tau) {
  const int n = 2;
  std::vector<std::pair<PauliString, double>> ha = {
      {PauliString::single(n, 0, PauliLetter::X), -1.0},
      {PauliString::single(n, 1, PauliLetter::X), -1.0},
  };
  PauliString zz(n);
  zz.set_letter(0, PauliLetter::Z);
  zz.set_letter(1, PauliLetter::Z);
  std::vector<std::pair<PauliString, double>> hb = {
      {zz, -1.0},
      {PauliString::single(n, 0, PauliLetter::Z), -0.5},
  };
  return adiabatic_hamiltonian(n, ha, hb, tau);
}

/// The adiabatic toy's final Hamiltonian as an observable (energy readout).
inline ObservableDecomposition adiabatic_toy_observable() {
  const int n = 2;
  PauliString zz(n);
  zz.set_letter(0, PauliLetter::Z);
  zz.set_letter(1, PauliLetter::Z);
  ObservableDecomposition d;
  d.components.push_back({-1.0, zz});
  d.components.push_back({-0.5, PauliString::single(n, 0, PauliLetter::Z)});
  return d;
}

}  // namespace urcc
