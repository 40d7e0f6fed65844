#pragma once

#include <cmath>
#include <random>
#include <stdexcept>
#include <vector>

#include "urcc/hamiltonian.hpp"

namespace urcc {

/// One c-qDRIFT draw: the segment unitary exp(-i lambda * sign * sigma).
struct QdriftSample {
  PauliString sigma;  // unsigned
  int sign = 1;       // sgn of the coefficient at the drawn time
  double angle = 0;   // the segment's lambda
  int segment_index = 0;
};

/**
 * Sample the c-qDRIFT channel for one segment: draw t with density h_tot,
 * then a signed input term with weights |h_p^qd(t)|. Each signed input
 * waveform is one qDRIFT term; its sign at t sets the rotation direction.
 */
inline QdriftSample qdrift_sample_segment(const TimeDependentHamiltonian& H, const Segment& seg,
                                          double lambda, std::mt19937_64& rng) {
  if (lambda <= 0) throw std::invalid_argument("qdrift_sample_segment: lambda must be > 0");
  std::uniform_real_distribution<double> uni(0.0, 1.0);
  const auto& inputs = H.input_terms();
  for (;;) {
    const double t = H.sample_time(seg.a, seg.b, rng);
    double tot = 0;
    for (const auto& in : inputs) tot += std::abs(in.coeff.evaluate(t));
    if (tot <= 0) continue;  // zero-measure; redraw
    double r = uni(rng) * tot;
    int p = static_cast<int>(inputs.size()) - 1;
    for (std::size_t i = 0; i < inputs.size(); ++i) {
      r -= std::abs(inputs[i].coeff.evaluate(t));
      if (r <= 0) {
        p = static_cast<int>(i);
        break;
      }
    }
    QdriftSample s;
    s.sigma = inputs[p].pauli;
    s.sign = inputs[p].coeff.evaluate(t) >= 0 ? 1 : -1;
    s.angle = lambda;
    s.segment_index = seg.index;
    return s;
  }
}

/// One rotation per segment, time-ordered.
inline std::vector<QdriftSample> qdrift_compile(const SegmentPlan& plan,
                                                const TimeDependentHamiltonian& H,
                                                std::mt19937_64& rng) {
  std::vector<QdriftSample> out;
  out.reserve(plan.num_segments());
  for (int j = 0; j < plan.num_segments(); ++j)
    out.push_back(qdrift_sample_segment(H, plan.segment(j), plan.lambda, rng));
  return out;
}

}  // namespace urcc
