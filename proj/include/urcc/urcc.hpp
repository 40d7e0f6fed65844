#pragma once

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>
#include <vector>

#include "urcc/hamiltonian.hpp"
#include "urcc/pauli.hpp"

namespace urcc {

/**
 * Normalization data of the leading-order-rotation LCU for one segment:
 *   I - i sum_p lambda_p sigma_p  ==  sum_p alpha_p exp(-i phi sigma_p)
 * with phi = arctan(lambda) and alpha_p = lambda_p / sin(phi).
 */
struct LcuDescriptor {
  double lambda = 0;
  double C_L = 1;      // sqrt(1 + lambda^2)
  double C_R = 0;      // e^lambda - 1 - lambda
  double phi = 0;      // arctan(lambda)
  std::vector<double> alpha_weights;  // proportional to lambda_p

  double C_lor() const { return C_L + C_R; }
  double prob_L() const { return C_L / (C_L + C_R); }

  static LcuDescriptor from_lambda_row(const std::vector<double>& lambda_p) {
    LcuDescriptor d;
    for (double lp : lambda_p) d.lambda += lp;
    d.C_L = std::sqrt(1.0 + d.lambda * d.lambda);
    d.C_R = std::expm1(d.lambda) - d.lambda;
    d.phi = std::atan(d.lambda);
    d.alpha_weights = lambda_p;  // categorical weights; alpha_p = lambda_p / sin(phi)
    return d;
  }
};

struct SampledUnitary {
  enum class Kind { Identity, Rotation, PauliProduct };
  Kind kind = Kind::Identity;
  PauliString op;     // Rotation: signed sigma_p; PauliProduct: phase-tracked product
  double angle = 0;   // Rotation only: phi of the owning segment
  int order = 0;      // PauliProduct only: l >= 2
  int segment_index = 0;
};

struct CompiledCircuitPair {
  std::vector<SampledUnitary> branch_s;        // applied controlled on ancilla = 1
  std::vector<SampledUnitary> branch_s_prime;  // applied controlled on ancilla = 0
  double C = 1;                                // C_lor ^ N_seg
};

/// l ~ Poisson(lambda), by exact inversion with the pmf recurrence.
inline int sample_order(double lambda, std::mt19937_64& rng) {
  if (lambda < 0) throw std::invalid_argument("sample_order: negative lambda");
  if (lambda == 0) return 0;
  std::uniform_real_distribution<double> uni(0.0, 1.0);
  const double u = uni(rng);
  double p = std::exp(-lambda), cum = p;
  int l = 0;
  while (u > cum && l < 10000) {
    ++l;
    p *= lambda / l;
    cum += p;
  }
  return l;
}

/**
 * Draw P(p) from Pdy(l; p): sample l time points with density h_tot, re-order
 * descending, draw a term index at each time with weights h_p(t), and fold the
 * signed Paulis with a (-i) prefactor per factor.
 */
inline PauliString sample_pdy(int l, const TimeDependentHamiltonian& H, const Segment& seg,
                              std::mt19937_64& rng) {
  if (l < 0) throw std::invalid_argument("sample_pdy: negative order");
  if (l == 0) return PauliString::identity(H.num_qubits());
  std::vector<double> times(l);
  for (int i = 0; i < l; ++i) times[i] = H.sample_time(seg.a, seg.b, rng);
  std::sort(times.begin(), times.end(), std::greater<double>());
  PauliString acc = PauliString::identity(H.num_qubits());
  for (double t : times) {
    int p = H.sample_term_at_time(t, rng);
    while (p < 0) {  // h_tot vanished exactly at the drawn time; redraw
      t = H.sample_time(seg.a, seg.b, rng);
      p = H.sample_term_at_time(t, rng);
    }
    PauliString f = H.terms()[p].pauli;
    f.mul_phase(3);  // -i
    acc = multiply(acc, f);
  }
  return acc;
}

/// One draw of the per-segment unitary: L-branch Pauli rotation with
/// probability C_L / (C_L + C_R), else the R-branch order-l >= 2 product.
inline SampledUnitary sample_segment_unitary(const LcuDescriptor& d,
                                             const TimeDependentHamiltonian& H, const Segment& seg,
                                             std::mt19937_64& rng) {
  SampledUnitary u;
  u.segment_index = seg.index;
  if (d.lambda == 0) {
    u.kind = SampledUnitary::Kind::Identity;
    u.op = PauliString::identity(H.num_qubits());
    return u;
  }
  std::uniform_real_distribution<double> uni(0.0, 1.0);
  if (uni(rng) < d.prob_L()) {
    double tot = 0;
    for (double w : d.alpha_weights) tot += w;
    double r = uni(rng) * tot;
    int p = static_cast<int>(d.alpha_weights.size()) - 1;
    for (std::size_t i = 0; i < d.alpha_weights.size(); ++i) {
      r -= d.alpha_weights[i];
      if (r <= 0) {
        p = static_cast<int>(i);
        break;
      }
    }
    u.kind = SampledUnitary::Kind::Rotation;
    u.op = H.terms()[p].pauli;
    u.angle = d.phi;
  } else {
    int l = sample_order(d.lambda, rng);
    while (l < 2) l = sample_order(d.lambda, rng);
    u.kind = SampledUnitary::Kind::PauliProduct;
    u.op = sample_pdy(l, H, seg, rng);
    u.order = l;
  }
  return u;
}

inline std::vector<LcuDescriptor> segment_descriptors(const SegmentPlan& plan) {
  std::vector<LcuDescriptor> descs;
  descs.reserve(plan.num_segments());
  for (const auto& row : plan.lambda_p) descs.push_back(LcuDescriptor::from_lambda_row(row));
  return descs;
}

/// 2 * N_seg independent segment draws forming one Hadamard-test circuit pair.
inline CompiledCircuitPair compile_pair(const SegmentPlan& plan,
                                        const std::vector<LcuDescriptor>& descs,
                                        const TimeDependentHamiltonian& H, std::mt19937_64& rng) {
  CompiledCircuitPair pair;
  const int nseg = plan.num_segments();
  pair.branch_s.reserve(nseg);
  pair.branch_s_prime.reserve(nseg);
  for (int j = 0; j < nseg; ++j) pair.C *= descs[j].C_lor();
  for (int j = 0; j < nseg; ++j)
    pair.branch_s.push_back(sample_segment_unitary(descs[j], H, plan.segment(j), rng));
  for (int j = 0; j < nseg; ++j)
    pair.branch_s_prime.push_back(sample_segment_unitary(descs[j], H, plan.segment(j), rng));
  return pair;
}

inline CompiledCircuitPair compile_pair(const SegmentPlan& plan, const TimeDependentHamiltonian& H,
                                        std::mt19937_64& rng) {
  return compile_pair(plan, segment_descriptors(plan), H, rng);
}

}  // namespace urcc
