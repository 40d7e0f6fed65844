#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <vector>

#include "urcc/pauli.hpp"

namespace urcc {

/// Deterministic pairwise sum; the result depends only on element order, so
/// parallel runs that fill a trial-indexed buffer aggregate identically.
inline double pairwise_sum(const double* v, std::size_t n) {
  if (n <= 8) {
    double s = 0;
    for (std::size_t i = 0; i < n; ++i) s += v[i];
    return s;
  }
  const std::size_t half = n / 2;
  return pairwise_sum(v, half) + pairwise_sum(v + half, n - half);
}

inline double pairwise_sum(const std::vector<double>& v) { return pairwise_sum(v.data(), v.size()); }

/// O_est = (C^2 / M) * sum of outcomes.
inline double estimate(const std::vector<double>& outcomes, double C) {
  if (outcomes.empty()) throw std::invalid_argument("estimate: no outcomes");
  return C * C * pairwise_sum(outcomes) / static_cast<double>(outcomes.size());
}

/// eps = ||O|| C^2 sqrt(2 ln(2/delta) / M).
inline double hoeffding_eps(double C, double norm_O, std::int64_t M, double delta) {
  if (M < 1) throw std::invalid_argument("hoeffding_eps: M must be >= 1");
  if (!(delta > 0 && delta < 1)) throw std::invalid_argument("hoeffding_eps: delta must be in (0,1)");
  return norm_O * C * C * std::sqrt(2.0 * std::log(2.0 / delta) / static_cast<double>(M));
}

struct ObservableComponent {
  double alpha = 0;
  PauliString pauli;  // unsigned Hermitian Pauli
};

struct ObservableDecomposition {
  std::vector<ObservableComponent> components;

  int num_qubits() const {
    return components.empty() ? 0 : components[0].pauli.num_qubits();
  }
  /// Certified spectral norm bound sum |alpha_k|.
  double norm_bound() const {
    double s = 0;
    for (const auto& c : components) s += std::abs(c.alpha);
    return s;
  }
  void validate() const {
    if (components.empty()) throw std::invalid_argument("ObservableDecomposition: empty");
    for (const auto& c : components) {
      if (c.pauli.phase_exp() != 0)
        throw std::invalid_argument("ObservableDecomposition: components must be unsigned");
      if (c.pauli.num_qubits() != num_qubits())
        throw std::invalid_argument("ObservableDecomposition: width mismatch");
    }
  }
};

struct MeasurementGroup {
  std::vector<int> members;  // indices into the decomposition
  PauliString R;             // letterwise join; every member q satisfies q |> R
  std::int64_t shots = 0;    // M_g
  double l1 = 0;             // sum of |alpha| over members
};

/**
 * Largest-degree-first greedy grouping: vertices are components, edges join
 * pairs with conflicting letters; each component goes to the first group it is
 * qubitwise-compatible with. R_g is the letterwise join of members.
 */
inline std::vector<MeasurementGroup> group_ldf(const ObservableDecomposition& decomp) {
  decomp.validate();
  const int K = static_cast<int>(decomp.components.size());
  const int n = decomp.num_qubits();
  std::vector<int> degree(K, 0);
  for (int i = 0; i < K; ++i)
    for (int j = i + 1; j < K; ++j) {
      // conflict: some qubit where both act non-trivially with different letters
      bool conflict = false;
      for (int q = 0; q < n && !conflict; ++q) {
        const PauliLetter a = decomp.components[i].pauli.letter(q);
        const PauliLetter b = decomp.components[j].pauli.letter(q);
        conflict = a != PauliLetter::I && b != PauliLetter::I && a != b;
      }
      if (conflict) ++degree[i], ++degree[j];
    }
  std::vector<int> order(K);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return degree[a] > degree[b]; });

  // Placement uses the symmetric no-conflict relation (either letter may be I);
  // the one-sided |> relation then holds for every member against the final R_g.
  auto no_conflict = [&](const PauliString& q, const PauliString& r) {
    for (int qq = 0; qq < n; ++qq) {
      const PauliLetter a = q.letter(qq), b = r.letter(qq);
      if (a != PauliLetter::I && b != PauliLetter::I && a != b) return false;
    }
    return true;
  };
  std::vector<MeasurementGroup> groups;
  for (int k : order) {
    const PauliString& q = decomp.components[k].pauli;
    bool placed = false;
    for (auto& g : groups) {
      if (no_conflict(q, g.R)) {
        g.members.push_back(k);
        g.l1 += std::abs(decomp.components[k].alpha);
        for (int qq = 0; qq < n; ++qq)
          if (q.letter(qq) != PauliLetter::I) g.R.set_letter(qq, q.letter(qq));
        placed = true;
        break;
      }
    }
    if (!placed) {
      MeasurementGroup g;
      g.members = {k};
      g.R = q;
      g.l1 = std::abs(decomp.components[k].alpha);
      groups.push_back(std::move(g));
    }
  }
  return groups;
}

/// Shot allocation proportional to group l1 norms, largest-remainder rounding;
/// sums to M exactly, and every group gets at least one shot when M >= G.
inline void allocate_shots(std::vector<MeasurementGroup>& groups, std::int64_t M) {
  const int G = static_cast<int>(groups.size());
  if (M < G) throw std::invalid_argument("allocate_shots: fewer shots than groups");
  double tot = 0;
  for (const auto& g : groups) tot += g.l1;
  if (tot <= 0) throw std::invalid_argument("allocate_shots: zero total weight");
  std::vector<double> frac(G);
  std::int64_t assigned = 0;
  for (int g = 0; g < G; ++g) {
    const double exact = static_cast<double>(M) * groups[g].l1 / tot;
    groups[g].shots = std::max<std::int64_t>(1, static_cast<std::int64_t>(std::floor(exact)));
    frac[g] = exact - std::floor(exact);
    assigned += groups[g].shots;
  }
  std::vector<int> order(G);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return frac[a] > frac[b]; });
  int i = 0;
  while (assigned < M) {
    ++groups[order[i % G]].shots;
    ++assigned;
    ++i;
  }
  while (assigned > M) {  // possible only via the >=1 floor on tiny groups
    auto& g = *std::max_element(groups.begin(), groups.end(),
                                [](const auto& a, const auto& b) { return a.shots < b.shots; });
    --g.shots;
    --assigned;
  }
}

/**
 * Outcome range ||R_g||_r: spread of sum_k alpha_k (M/M_g) prod_{j in supp} z_j
 * over all ±1 assignments to the support of R_g.
 */
inline double group_range(const MeasurementGroup& g, const ObservableDecomposition& decomp,
                          std::int64_t M) {
  const std::vector<int> supp = g.R.support();
  if (supp.size() > 20) throw std::invalid_argument("group_range: support too large to enumerate");
  const double scale = static_cast<double>(M) / static_cast<double>(g.shots);
  double lo = 0, hi = 0;
  const std::size_t count = std::size_t(1) << supp.size();
  for (std::size_t assign = 0; assign < count; ++assign) {
    double val = 0;
    for (int k : g.members) {
      double prod = 1;
      for (std::size_t s = 0; s < supp.size(); ++s) {
        if (decomp.components[k].pauli.letter(supp[s]) != PauliLetter::I && (assign >> s) & 1)
          prod = -prod;
      }
      val += decomp.components[k].alpha * scale * prod;
    }
    if (assign == 0) {
      lo = hi = val;
    } else {
      lo = std::min(lo, val);
      hi = std::max(hi, val);
    }
  }
  return hi - lo;
}

/// o_{g,m} from one measured ±1 record r (index 0 = ancilla X outcome).
inline double group_outcome(const MeasurementGroup& g, const ObservableDecomposition& decomp,
                            std::int64_t M, const std::vector<int>& r) {
  const double scale = static_cast<double>(M) / static_cast<double>(g.shots);
  double o = 0;
  for (int k : g.members) {
    double mu = static_cast<double>(r[0]);  // ancilla X is in every support
    for (int q : decomp.components[k].pauli.support()) mu *= r[q + 1];
    o += decomp.components[k].alpha * scale * mu;
  }
  return o;
}

/// Grouped Hoeffding bound: (C^2/M) sqrt(0.5 ln(2/delta) sum_g M_g ||R_g||_r^2).
inline double grouped_hoeffding_eps(const std::vector<MeasurementGroup>& groups,
                                    const std::vector<double>& ranges, double C, std::int64_t M,
                                    double delta) {
  if (!(delta > 0 && delta < 1))
    throw std::invalid_argument("grouped_hoeffding_eps: delta must be in (0,1)");
  double s = 0;
  for (std::size_t g = 0; g < groups.size(); ++g)
    s += static_cast<double>(groups[g].shots) * ranges[g] * ranges[g];
  return C * C / static_cast<double>(M) * std::sqrt(0.5 * std::log(2.0 / delta) * s);
}

/**
 * Smallest total error eps >= |eps_alg| such that
 *   exp(-M (eps-eps_alg)^2 / 2||O||^2) + exp(-M (eps+eps_alg)^2 / 2||O||^2) <= delta,
 * found by bisection.
 */
inline double qdrift_total_error(std::int64_t M, double delta, double eps_alg, double norm_O) {
  if (M < 1) throw std::invalid_argument("qdrift_total_error: M must be >= 1");
  if (!(delta > 0 && delta < 1)) throw std::invalid_argument("qdrift_total_error: bad delta");
  const double ea = std::abs(eps_alg);
  auto rhs = [&](double eps) {
    const double a = eps - ea, b = eps + ea;
    const double inv = static_cast<double>(M) / (2.0 * norm_O * norm_O);
    return std::exp(-inv * a * a) + std::exp(-inv * b * b);
  };
  double lo = ea, hi = ea + norm_O * std::sqrt(2.0 * std::log(2.0 / delta) / M) + 1e-18;
  while (rhs(hi) > delta) hi = ea + 2.0 * (hi - ea);
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (rhs(mid) > delta)
      lo = mid;
    else
      hi = mid;
    if (hi - lo <= 1e-12 * std::max(1.0, hi)) break;
  }
  return hi;
}

}  // namespace urcc
