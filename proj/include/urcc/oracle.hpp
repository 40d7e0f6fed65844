#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "urcc/estimator.hpp"
#include "urcc/hamiltonian.hpp"
#include "urcc/pauli.hpp"
#include "urcc/urcc.hpp"

namespace urcc::oracle {

/// Dense Hamiltonian matrix at time t, built from the signed input terms.
inline Eigen::MatrixXcd hamiltonian_matrix(const TimeDependentHamiltonian& H, double t,
                                           int max_qubits = 12) {
  const std::int64_t dim = std::int64_t(1) << H.num_qubits();
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(dim, dim);
  for (const auto& in : H.input_terms())
    m += in.coeff.evaluate(t) * in.pauli.to_matrix(max_qubits);
  return m;
}

struct DensePropagator {
  Eigen::MatrixXcd matrix;
  double a = 0, b = 0;
  double tolerance_achieved = 0;
};

/**
 * Time-ordered propagator over [a, b] by midpoint exponentials (second-order
 * Magnus), Richardson-extrapolated across step halvings until two successive
 * extrapolants agree to tol. The raw scheme is O(h^2); extrapolation removes
 * the leading term, so convergence is reached long before rounding
 * accumulation over the ~1e6 matrix products of a fine ladder matters.
 */
inline DensePropagator exact_propagator(const TimeDependentHamiltonian& H, double a, double b,
                                        double tol = 1e-12, int max_qubits = 12) {
  if (tol < 1e-13) throw std::invalid_argument("exact_propagator: tol below supported floor");
  if (H.num_qubits() > max_qubits) throw std::invalid_argument("exact_propagator: size limit");
  const std::int64_t dim = std::int64_t(1) << H.num_qubits();
  auto propagate = [&](int steps) {
    Eigen::MatrixXcd u = Eigen::MatrixXcd::Identity(dim, dim);
    const double h = (b - a) / steps;
    for (int s = 0; s < steps; ++s) {
      const double tmid = a + (s + 0.5) * h;
      Eigen::MatrixXcd hm = hamiltonian_matrix(H, tmid, max_qubits);
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(hm);
      Eigen::VectorXcd phases(dim);
      for (std::int64_t i = 0; i < dim; ++i)
        phases(i) = std::polar(1.0, -h * es.eigenvalues()(i));
      u = es.eigenvectors() * phases.asDiagonal() * es.eigenvectors().adjoint() * u;
    }
    return u;
  };
  int steps = 16;
  Eigen::MatrixXcd prev_u = propagate(steps);
  Eigen::MatrixXcd r_prev;
  bool have_r = false;
  while (steps <= (1 << 18)) {
    steps *= 2;
    const Eigen::MatrixXcd cur_u = propagate(steps);
    const Eigen::MatrixXcd r = (4.0 * cur_u - prev_u) / 3.0;
    if (have_r) {
      const double diff = (r - r_prev).cwiseAbs().maxCoeff();
      if (diff <= tol) return DensePropagator{r, a, b, diff};
    }
    r_prev = r;
    have_r = true;
    prev_u = cur_u;
  }
  throw std::runtime_error("exact_propagator: no convergence at minimum step");
}

inline Eigen::VectorXcd basis_state(std::size_t label, int n) {
  Eigen::VectorXcd v = Eigen::VectorXcd::Zero(std::int64_t(1) << n);
  v(label) = 1.0;
  return v;
}

inline double exact_expectation(const Eigen::VectorXcd& psi0, const ObservableDecomposition& obs,
                                const Eigen::MatrixXcd& U) {
  const Eigen::VectorXcd psi = U * psi0;
  double val = 0;
  for (const auto& c : obs.components) {
    const Eigen::VectorXcd op = c.pauli.to_matrix() * psi;
    val += c.alpha * (psi.adjoint() * op)(0).real();
  }
  return val;
}

inline double exact_expectation(const Eigen::VectorXcd& psi0, const PauliString& obs,
                                const Eigen::MatrixXcd& U) {
  ObservableDecomposition d;
  PauliString unsigned_obs = obs;
  unsigned_obs.set_phase_exp(0);
  d.components.push_back({static_cast<double>(obs.sign()), unsigned_obs});
  return exact_expectation(psi0, d, U);
}

/// exp(-i theta sigma) for Hermitian Pauli sigma: cos(theta) I - i sin(theta) sigma.
inline Eigen::MatrixXcd pauli_rotation_matrix(const PauliString& sigma, double theta) {
  const std::int64_t dim = std::int64_t(1) << sigma.num_qubits();
  return std::cos(theta) * Eigen::MatrixXcd::Identity(dim, dim) +
         cx(0, -std::sin(theta)) * sigma.to_matrix();
}

namespace detail {

/// Adaptive Simpson on a matrix-valued integrand, max-norm error control.
template <typename F>
inline Eigen::MatrixXcd adaptive_simpson(const F& f, double a, double b, const Eigen::MatrixXcd& fa,
                                         const Eigen::MatrixXcd& fm, const Eigen::MatrixXcd& fb,
                                         double tol, int depth) {
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
  const Eigen::MatrixXcd flm = f(lm), frm = f(rm);
  const Eigen::MatrixXcd whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  const Eigen::MatrixXcd left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  const Eigen::MatrixXcd right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  const double err = (left + right - whole).cwiseAbs().maxCoeff();
  if (depth <= 0) throw std::runtime_error("qdrift_exact_state: quadrature non-convergence");
  if (err < 15.0 * tol) return left + right + (left + right - whole) / 15.0;
  return adaptive_simpson(f, a, m, fa, flm, fm, tol / 2, depth - 1) +
         adaptive_simpson(f, m, b, fm, frm, fb, tol / 2, depth - 1);
}

template <typename F>
inline Eigen::MatrixXcd integrate_matrix(const F& f, double a, double b, double tol) {
  const Eigen::MatrixXcd fa = f(a), fm = f(0.5 * (a + b)), fb = f(b);
  return adaptive_simpson(f, a, b, fa, fm, fb, tol, 48);
}

}  // namespace detail

/**
 * Exact c-qDRIFT output state: the per-segment channel
 *   rho -> sum_p  (1/lambda) ∫ |h_p(t)| e^{-i lambda sgn(h_p(t)) sigma_p} rho e^{+...} dt
 * integrated by adaptive quadrature split at the coefficient sign changes,
 * applied segment by segment.
 */
inline Eigen::MatrixXcd qdrift_exact_state(const TimeDependentHamiltonian& H,
                                           const SegmentPlan& plan, const Eigen::MatrixXcd& rho0,
                                           double tol = 1e-10) {
  if (H.num_qubits() > 8) throw std::invalid_argument("qdrift_exact_state: size limit");
  Eigen::MatrixXcd rho = rho0;
  const double lambda = plan.lambda;
  if (lambda == 0) return rho;
  for (int j = 0; j < plan.num_segments(); ++j) {
    const Segment seg = plan.segment(j);
    Eigen::MatrixXcd next = Eigen::MatrixXcd::Zero(rho.rows(), rho.cols());
    for (const auto& in : H.input_terms()) {
      auto conj_at = [&](double t) -> Eigen::MatrixXcd {
        const double h = in.coeff.evaluate(t);
        const double theta = h >= 0 ? lambda : -lambda;
        const Eigen::MatrixXcd u = pauli_rotation_matrix(in.pauli, theta);
        return (std::abs(h) / lambda) * (u * rho * u.adjoint());
      };
      // integrate piecewise between sign changes of the coefficient
      std::vector<double> cuts = in.coeff.zeros(seg.a, seg.b);
      double prev = seg.a;
      auto piece = [&](double u, double v) {
        if (v > u) next += detail::integrate_matrix(conj_at, u, v, tol);
      };
      for (double c : cuts) {
        piece(prev, c);
        prev = c;
      }
      piece(prev, seg.b);
    }
    rho = next;
  }
  return rho;
}

inline double trace_expectation(const ObservableDecomposition& obs, const Eigen::MatrixXcd& rho) {
  double val = 0;
  for (const auto& c : obs.components)
    val += c.alpha * (c.pauli.to_matrix() * rho).trace().real();
  return val;
}

/// Signed algorithmic error tr(O rho_qd) - <O>_exact.
inline double algorithmic_error(const TimeDependentHamiltonian& H, const SegmentPlan& plan,
                                const Eigen::VectorXcd& psi0, const ObservableDecomposition& obs,
                                double prop_tol = 1e-12, double quad_tol = 1e-10) {
  const double tau = plan.boundaries.back();
  const DensePropagator U = exact_propagator(H, 0, tau, prop_tol);
  const double exact = exact_expectation(psi0, obs, U.matrix);
  const Eigen::MatrixXcd rho0 = psi0 * psi0.adjoint();
  const Eigen::MatrixXcd rho_qd = qdrift_exact_state(H, plan, rho0, quad_tol);
  return trace_expectation(obs, rho_qd) - exact;
}

/**
 * For constant coefficients the ordered time integral collapses to tau^l / l!,
 * so Pdy factorizes into the product law with per-factor weights h_p / h_tot.
 * Returns those weights; the reference law for index sequences is their product.
 */
inline std::vector<double> constant_pdy_law(const TimeDependentHamiltonian& H) {
  for (const auto& in : H.input_terms())
    if (in.coeff.trig() != CoeffWaveform::Trig::None || in.coeff.slope() != 0)
      throw std::invalid_argument("constant_pdy_law: coefficients must be constant");
  const double tot = H.h_tot(0);
  std::vector<double> w;
  for (const auto& term : H.terms()) w.push_back(term.h(0) / tot);
  return w;
}

/**
 * Max elementwise deviation of the leading-order Euler identity
 *   (I - i sum_p lambda_p sigma_p) - sum_p alpha_p exp(-i phi sigma_p),
 * computed with dense matrices. Must vanish to ~1e-12.
 */
inline double leading_order_identity_deviation(const TimeDependentHamiltonian& H,
                                               const std::vector<double>& lambda_p, double phi) {
  const std::int64_t dim = std::int64_t(1) << H.num_qubits();
  Eigen::MatrixXcd lhs = Eigen::MatrixXcd::Identity(dim, dim);
  for (std::size_t p = 0; p < lambda_p.size(); ++p)
    lhs -= cx(0, 1) * lambda_p[p] * H.terms()[p].pauli.to_matrix();
  Eigen::MatrixXcd rhs = Eigen::MatrixXcd::Zero(dim, dim);
  const double sphi = std::sin(phi);
  if (sphi == 0) {
    rhs = Eigen::MatrixXcd::Identity(dim, dim);
  } else {
    for (std::size_t p = 0; p < lambda_p.size(); ++p)
      rhs += lambda_p[p] / sphi * pauli_rotation_matrix(H.terms()[p].pauli, phi);
  }
  return (lhs - rhs).cwiseAbs().maxCoeff();
}

}  // namespace urcc::oracle
