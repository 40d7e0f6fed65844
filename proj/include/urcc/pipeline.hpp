#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <thread>
#include <vector>

#include "urcc/estimator.hpp"
#include "urcc/qdrift.hpp"
#include "urcc/rng.hpp"
#include "urcc/statevector.hpp"
#include "urcc/urcc.hpp"

namespace urcc {

/**
 * Run M independent trials. Each trial's RNG is keyed by (seed, trial index),
 * and results land in a trial-indexed buffer, so the outcome vector (and every
 * aggregate derived from it) is identical for any worker count.
 */
template <typename F>
inline std::vector<double> run_trials(std::int64_t M, std::uint64_t seed, int workers, F&& fn) {
  if (M < 1) throw std::invalid_argument("run_trials: M must be >= 1");
  if (workers < 1) workers = 1;
  std::vector<double> out(static_cast<std::size_t>(M));
  auto work = [&](std::int64_t lo, std::int64_t hi) {
    for (std::int64_t t = lo; t < hi; ++t) {
      std::mt19937_64 rng = trial_rng(seed, static_cast<std::uint64_t>(t));
      out[static_cast<std::size_t>(t)] = fn(t, rng);
    }
  };
  if (workers == 1 || M < 2 * workers) {
    work(0, M);
  } else {
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w) {
      const std::int64_t lo = M * w / workers, hi = M * (w + 1) / workers;
      pool.emplace_back(work, lo, hi);
    }
    for (auto& th : pool) th.join();
  }
  return out;
}

struct RunReport {
  double O_est = 0;
  double C = 1;
  double eps_samp = 0;
  std::int64_t M = 0;
  double delta = 0;
  double mean_outcome = 0;    // mean of raw o_m
  double stddev_est = 0;      // sample std of C^2 o_m
  int groups = 1;
};

/// URCC estimate of a single Pauli observable.
inline RunReport run_urcc(const TimeDependentHamiltonian& H, const SegmentPlan& plan,
                          const StateVector& prepared, const PauliString& obs, MeasureMode mode,
                          std::int64_t M, double delta, std::uint64_t seed, int workers) {
  const auto descs = segment_descriptors(plan);
  double C = 1;
  for (const auto& d : descs) C *= d.C_lor();
  std::vector<double> outcomes = run_trials(M, seed, workers, [&](std::int64_t, std::mt19937_64& rng) {
    const CompiledCircuitPair pair = compile_pair(plan, descs, H, rng);
    return run_pair(pair, prepared, obs, mode, rng);
  });
  RunReport r;
  r.M = M;
  r.delta = delta;
  r.C = C;
  r.mean_outcome = pairwise_sum(outcomes) / static_cast<double>(M);
  r.O_est = C * C * r.mean_outcome;
  r.eps_samp = hoeffding_eps(C, 1.0, M, delta);
  double ss = 0;
  for (double o : outcomes) {
    const double d2 = C * C * o - r.O_est;
    ss += d2 * d2;
  }
  r.stddev_est = M > 1 ? std::sqrt(ss / static_cast<double>(M - 1)) : 0.0;
  return r;
}

/// URCC estimate of a Pauli-sum observable via non-overlapped grouped
/// measurement; trials are allocated to groups in contiguous index ranges.
inline RunReport run_urcc_grouped(const TimeDependentHamiltonian& H, const SegmentPlan& plan,
                                  const StateVector& prepared, const ObservableDecomposition& decomp,
                                  std::vector<MeasurementGroup> groups, std::int64_t M, double delta,
                                  std::uint64_t seed, int workers) {
  allocate_shots(groups, M);
  const auto descs = segment_descriptors(plan);
  double C = 1;
  for (const auto& d : descs) C *= d.C_lor();
  std::vector<std::int64_t> starts(groups.size() + 1, 0);
  for (std::size_t g = 0; g < groups.size(); ++g) starts[g + 1] = starts[g] + groups[g].shots;
  std::vector<double> outcomes = run_trials(M, seed, workers, [&](std::int64_t t, std::mt19937_64& rng) {
    std::size_t g = 0;
    while (t >= starts[g + 1]) ++g;
    const CompiledCircuitPair pair = compile_pair(plan, descs, H, rng);
    const std::vector<int> bits = run_pair_bits(pair, prepared, groups[g].R, rng);
    return group_outcome(groups[g], decomp, M, bits);
  });
  std::vector<double> ranges(groups.size());
  for (std::size_t g = 0; g < groups.size(); ++g) ranges[g] = group_range(groups[g], decomp, M);
  RunReport r;
  r.M = M;
  r.delta = delta;
  r.C = C;
  r.groups = static_cast<int>(groups.size());
  r.mean_outcome = pairwise_sum(outcomes) / static_cast<double>(M);
  r.O_est = C * C * r.mean_outcome;
  r.eps_samp = grouped_hoeffding_eps(groups, ranges, C, M, delta);
  double ss = 0;
  for (double o : outcomes) {
    const double d2 = C * C * o - r.O_est;
    ss += d2 * d2;
  }
  r.stddev_est = M > 1 ? std::sqrt(ss / static_cast<double>(M - 1)) : 0.0;
  return r;
}

/// Apply one compiled c-qDRIFT trajectory to a data-register state.
inline void apply_qdrift_samples(StateVector& state, const std::vector<QdriftSample>& samples) {
  for (const auto& s : samples) {
    if (s.sigma.weight() == 0) continue;  // identity term: global phase only
    PauliString sigma = s.sigma;
    if (s.sign < 0) sigma.mul_phase(2);
    QuantumCircuit circ{state.width(), {}};
    lower_rotation_into(circ, sigma, s.angle, 0, std::nullopt);
    state.apply_circuit(circ);
  }
}

/// c-qDRIFT estimate of a single Pauli observable (C == 1, no ancilla).
inline RunReport run_qdrift(const TimeDependentHamiltonian& H, const SegmentPlan& plan,
                            const StateVector& psi_data, const PauliString& obs, MeasureMode mode,
                            std::int64_t M, double delta, std::uint64_t seed, int workers) {
  std::vector<double> outcomes = run_trials(M, seed, workers, [&](std::int64_t, std::mt19937_64& rng) {
    StateVector state = psi_data;
    apply_qdrift_samples(state, qdrift_compile(plan, H, rng));
    if (mode == MeasureMode::Exact) {
      PauliString p = obs;
      return state.expectation(p);
    }
    const std::vector<int> r = measure_bits(std::move(state), obs, false, rng);
    int v = 1;
    for (int q : obs.support()) v *= r[q + 1];
    return obs.sign() * static_cast<double>(v);
  });
  RunReport r;
  r.M = M;
  r.delta = delta;
  r.C = 1;
  r.mean_outcome = pairwise_sum(outcomes) / static_cast<double>(M);
  r.O_est = r.mean_outcome;
  r.eps_samp = hoeffding_eps(1.0, 1.0, M, delta);
  double ss = 0;
  for (double o : outcomes) {
    const double d2 = o - r.O_est;
    ss += d2 * d2;
  }
  r.stddev_est = M > 1 ? std::sqrt(ss / static_cast<double>(M - 1)) : 0.0;
  return r;
}

/// Grouped c-qDRIFT energy estimate (C == 1).
inline RunReport run_qdrift_grouped(const TimeDependentHamiltonian& H, const SegmentPlan& plan,
                                    const StateVector& psi_data, const ObservableDecomposition& decomp,
                                    std::vector<MeasurementGroup> groups, std::int64_t M,
                                    double delta, std::uint64_t seed, int workers) {
  allocate_shots(groups, M);
  std::vector<std::int64_t> starts(groups.size() + 1, 0);
  for (std::size_t g = 0; g < groups.size(); ++g) starts[g + 1] = starts[g] + groups[g].shots;
  std::vector<double> outcomes = run_trials(M, seed, workers, [&](std::int64_t t, std::mt19937_64& rng) {
    std::size_t g = 0;
    while (t >= starts[g + 1]) ++g;
    StateVector state = psi_data;
    apply_qdrift_samples(state, qdrift_compile(plan, H, rng));
    const std::vector<int> bits = measure_bits(std::move(state), groups[g].R, false, rng);
    return group_outcome(groups[g], decomp, M, bits);
  });
  std::vector<double> ranges(groups.size());
  for (std::size_t g = 0; g < groups.size(); ++g) ranges[g] = group_range(groups[g], decomp, M);
  RunReport r;
  r.M = M;
  r.delta = delta;
  r.C = 1;
  r.groups = static_cast<int>(groups.size());
  r.mean_outcome = pairwise_sum(outcomes) / static_cast<double>(M);
  r.O_est = r.mean_outcome;
  r.eps_samp = grouped_hoeffding_eps(groups, ranges, 1.0, M, delta);
  return r;
}

}  // namespace urcc
