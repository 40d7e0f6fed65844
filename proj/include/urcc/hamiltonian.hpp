#pragma once

#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>
#include <vector>

#include "urcc/pauli.hpp"
#include "urcc/waveform.hpp"

namespace urcc {

/**
 * One canonical Hamiltonian term h_p(t) * sigma_p with h_p(t) >= 0.
 *
 * A signed input coefficient c(t) on an unsigned Pauli sigma is split at
 * construction into the two halves max(c,0)*sigma and max(-c,0)*(-sigma);
 * `part_sign` selects the half and the sign of the Pauli carries the term
 * sign, so h_p(t) = max(part_sign * c(t), 0) is nonnegative everywhere.
 */
struct HamiltonianTerm {
  PauliString pauli;    // phase_exp in {0, 2}: the signed sigma_p
  CoeffWaveform coeff;  // the signed base waveform c(t)
  int part_sign = 1;    // h_p(t) = max(part_sign * c(t), 0)

  double h(double t) const { return std::max(part_sign * coeff.evaluate(t), 0.0); }
  double lambda_p(double a, double b) const { return coeff.integrate_positive_part(a, b, part_sign); }
};

/// A signed input term, kept for the c-qDRIFT baseline (which allows h<0).
struct SignedTerm {
  PauliString pauli;  // unsigned (phase_exp == 0)
  CoeffWaveform coeff;
};

struct Segment {
  double a = 0, b = 0;
  int index = 0;
};

/// Per-segment plan: equal integrated strength lambda per segment, with the
/// per-term integrals cached for the L-branch categorical.
struct SegmentPlan {
  std::vector<double> boundaries;               // tau_0 = 0 < ... < tau_{N} = tau
  double lambda = 0;                            // per-segment integral of h_tot
  double Lambda = 0;                            // total integral over [0, tau]
  std::vector<std::vector<double>> lambda_p;    // [segment][canonical term]

  int num_segments() const { return static_cast<int>(boundaries.size()) - 1; }
  Segment segment(int j) const { return {boundaries[j], boundaries[j + 1], j}; }
};

class TimeDependentHamiltonian {
 public:
  TimeDependentHamiltonian(int n, std::vector<SignedTerm> input_terms)
      : n_(n), inputs_(std::move(input_terms)) {
    if (n < 1) throw std::invalid_argument("TimeDependentHamiltonian: need n >= 1");
    for (const auto& in : inputs_) {
      if (in.pauli.num_qubits() != n)
        throw std::invalid_argument("TimeDependentHamiltonian: term width mismatch");
      if (in.pauli.phase_exp() != 0)
        throw std::invalid_argument("TimeDependentHamiltonian: input Pauli must be unsigned");
      for (int s : {+1, -1}) {
        HamiltonianTerm t;
        t.pauli = in.pauli;
        if (s < 0) t.pauli.mul_phase(2);
        t.coeff = in.coeff;
        t.part_sign = s;
        terms_.push_back(std::move(t));
      }
    }
    if (terms_.empty()) throw std::invalid_argument("TimeDependentHamiltonian: no terms");
  }

  int num_qubits() const { return n_; }
  const std::vector<HamiltonianTerm>& terms() const { return terms_; }
  const std::vector<SignedTerm>& input_terms() const { return inputs_; }
  int num_canonical_terms() const { return static_cast<int>(terms_.size()); }

  double h_p(int p, double t) const { return terms_[p].h(t); }

  double h_tot(double t) const {
    double s = 0;
    // The two canonical halves of one input sum to |c(t)|.
    for (const auto& in : inputs_) s += std::abs(in.coeff.evaluate(t));
    return s;
  }

  /// Integral of h_tot over [a, b] (== sum of all canonical lambda_p).
  double strength_integral(double a, double b) const {
    double s = 0;
    for (const auto& in : inputs_) s += in.coeff.integrate_abs(a, b);
    return s;
  }

  double Lambda(double tau) const { return strength_integral(0, tau); }

  /// Bound on sup h_tot over [a, b]; paired halves share one |c| bound.
  double h_tot_upper_bound(double a, double b) const {
    double s = 0;
    for (const auto& in : inputs_) s += in.coeff.upper_bound(a, b);
    return s;
  }

  std::vector<double> lambda_p_row(double a, double b) const {
    std::vector<double> row(terms_.size());
    for (std::size_t p = 0; p < terms_.size(); ++p) row[p] = terms_[p].lambda_p(a, b);
    return row;
  }

  /**
   * Split [0, tau] into N_seg = ceil(Lambda / lambda_target) segments of equal
   * integrated strength. Boundaries are solved on the cumulative integral by
   * bisection with Newton polish; Lambda == 0 yields one empty segment.
   */
  SegmentPlan plan_segments(double tau, double lambda_target) const {
    if (lambda_target <= 0) throw std::invalid_argument("plan_segments: lambda_target must be > 0");
    if (tau <= 0) throw std::invalid_argument("plan_segments: tau must be > 0");
    SegmentPlan plan;
    plan.Lambda = Lambda(tau);
    if (!std::isfinite(plan.Lambda)) throw std::runtime_error("plan_segments: non-finite Lambda");
    if (plan.Lambda == 0) {
      plan.boundaries = {0.0, tau};
      plan.lambda = 0;
      plan.lambda_p = {std::vector<double>(terms_.size(), 0.0)};
      return plan;
    }
    const int nseg = static_cast<int>(std::ceil(plan.Lambda / lambda_target));
    plan.lambda = plan.Lambda / nseg;
    plan.boundaries.resize(nseg + 1);
    plan.boundaries[0] = 0;
    plan.boundaries[nseg] = tau;
    for (int j = 1; j < nseg; ++j)
      plan.boundaries[j] = solve_cumulative(j * plan.lambda, plan.boundaries[j - 1], tau);
    for (int j = 0; j < nseg; ++j)
      plan.lambda_p.push_back(lambda_p_row(plan.boundaries[j], plan.boundaries[j + 1]));
    return plan;
  }

  /**
   * Draw t in [a, b] with density proportional to h_tot via rejection against
   * the analytic sup bound. Exact: no discretization of the density.
   */
  double sample_time(double a, double b, std::mt19937_64& rng) const {
    const double bound = h_tot_upper_bound(a, b);
    if (bound <= 0) throw std::runtime_error("sample_time: zero upper bound on a segment with mass");
    std::uniform_real_distribution<double> ut(a, b), uu(0.0, 1.0);
    for (;;) {
      const double t = ut(rng);
      if (uu(rng) * bound <= h_tot(t)) return t;
    }
  }

  /// Categorical draw of a canonical term index with weights h_p(t).
  /// Returns -1 when h_tot(t) == 0 (caller resamples the time).
  int sample_term_at_time(double t, std::mt19937_64& rng) const {
    double tot = 0;
    for (const auto& term : terms_) tot += term.h(t);
    if (tot <= 0) return -1;
    std::uniform_real_distribution<double> u(0.0, tot);
    double r = u(rng);
    for (std::size_t p = 0; p < terms_.size(); ++p) {
      r -= terms_[p].h(t);
      if (r <= 0) return static_cast<int>(p);
    }
    return static_cast<int>(terms_.size()) - 1;
  }

 private:
  double solve_cumulative(double target, double lo_hint, double tau) const {
    double lo = lo_hint, hi = tau;
    auto F = [&](double x) { return strength_integral(0, x); };
    // Bisection to locate, then Newton (derivative h_tot) to polish.
    for (int it = 0; it < 80; ++it) {
      const double mid = 0.5 * (lo + hi);
      if (F(mid) < target)
        lo = mid;
      else
        hi = mid;
    }
    double x = 0.5 * (lo + hi);
    for (int it = 0; it < 4; ++it) {
      const double d = h_tot(x);
      if (d <= 0) break;
      const double step = (F(x) - target) / d;
      const double nx = x - step;
      if (nx <= lo_hint || nx >= tau) break;
      x = nx;
    }
    return x;
  }

  int n_;
  std::vector<SignedTerm> inputs_;
  std::vector<HamiltonianTerm> terms_;
};

}  // namespace urcc
