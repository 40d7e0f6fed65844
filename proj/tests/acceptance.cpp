// Acceptance gate: ten end-to-end checks, one pass/fail line each.
// Usage: acceptance [path-to-cli-binary]   (the CLI is needed for check 10)

#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "../tests/support/stats.hpp"
#include "urcc/bench.hpp"

using namespace urcc;

namespace {

int g_failures = 0;

void report(int idx, bool ok, const std::string& label, const std::string& detail) {
  std::printf("%s criterion %2d: %s (%s)\n", ok ? "PASS" : "FAIL", idx, label.c_str(),
              detail.c_str());
  if (!ok) ++g_failures;
}

std::string fmt(const char* f, ...) {
  char buf[256];
  va_list ap;
  va_start(ap, f);
  std::vsnprintf(buf, sizeof buf, f, ap);
  va_end(ap);
  return buf;
}

PauliString random_pauli_nontrivial(int n, std::mt19937_64& rng) {
  std::uniform_int_distribution<int> dl(0, 3);
  for (;;) {
    PauliString p(n);
    for (int q = 0; q < n; ++q) p.set_letter(q, static_cast<PauliLetter>(dl(rng)));
    if (p.weight() > 0) return p;
  }
}

// --- 1: leading-order rotation identity -------------------------------------

void check_identity() {
  std::mt19937_64 rng(101);
  std::uniform_real_distribution<double> uw(0.0, 1.0);
  double worst_dev = 0, worst_cl = 0, worst_cr = 0;
  for (int inst = 0; inst < 100; ++inst) {
    const int n = 1 + static_cast<int>(rng() % 3);
    const int P = 1 + static_cast<int>(rng() % 6);
    std::vector<SignedTerm> in;
    for (int p = 0; p < P; ++p)
      in.push_back({random_pauli_nontrivial(n, rng), CoeffWaveform::constant(uw(rng))});
    TimeDependentHamiltonian H(n, std::move(in));
    std::vector<double> lambda_p(H.num_canonical_terms());
    double lambda = 0;
    for (int p = 0; p < H.num_canonical_terms(); ++p) {
      lambda_p[p] = uw(rng) / H.num_canonical_terms();
      lambda += lambda_p[p];
    }
    const LcuDescriptor d = LcuDescriptor::from_lambda_row(lambda_p);
    worst_dev = std::max(worst_dev,
                         oracle::leading_order_identity_deviation(H, lambda_p, d.phi));
    worst_cl = std::max(worst_cl, std::abs(d.C_L / std::sqrt(1.0 + lambda * lambda) - 1.0));
    worst_cr = std::max(worst_cr,
                        std::abs(d.C_R / (std::exp(lambda) - 1.0 - lambda) - 1.0));
  }
  report(1, worst_dev <= 1e-12 && worst_cl <= 1e-12 && worst_cr <= 1e-12,
         "leading-order rotation identity",
         fmt("max dev %.2e, C_L rel %.2e, C_R rel %.2e", worst_dev, worst_cl, worst_cr));
}

// --- 2: unbiasedness in exact-expectation mode ------------------------------

void check_unbiasedness() {
  // n=2 cosine/constant mix scaled to Lambda ~= 0.8 over tau = 1.
  std::vector<SignedTerm> in;
  in.push_back({PauliString::parse("XY"), CoeffWaveform::cosine(0.42, 3.0)});
  in.push_back({PauliString::parse("ZI"), CoeffWaveform::constant(0.30)});
  in.push_back({PauliString::parse("YZ"), CoeffWaveform::cosine(-0.36, 1.5)});
  TimeDependentHamiltonian H(2, std::move(in));
  const double tau = 1.0;
  const double Lambda = H.Lambda(tau);
  const SegmentPlan plan = H.plan_segments(tau, Lambda / 4 * (1 + 1e-9));
  const PauliString obs = PauliString::parse("ZI");
  const auto U = oracle::exact_propagator(H, 0, tau);
  const double want = oracle::exact_expectation(oracle::basis_state(0, 2), obs, U.matrix);

  const StateVector prepared = prepare_hadamard_test(std::size_t{0}, 2);
  const RunReport r =
      run_urcc(H, plan, prepared, obs, MeasureMode::Exact, 1000000, 0.05, 2025, 8);
  const double se = r.stddev_est / std::sqrt(static_cast<double>(r.M));
  const double dev = std::abs(r.O_est - want);
  report(2, plan.num_segments() == 4 && dev <= 5.0 * se, "unbiasedness at M=1e6 (exact mode)",
         fmt("Lambda %.3f, |bias| %.2e <= 5SE %.2e", Lambda, dev, 5.0 * se));
}

// --- 3: sampler distribution suite ------------------------------------------

void check_samplers() {
  std::mt19937_64 rng(103);
  const int N = 100000;

  // (a) order l vs Poisson
  const double lambda = 0.8;
  double pa;
  {
    const int kmax = 12;
    std::vector<double> counts(kmax + 1, 0.0), probs(kmax + 1, 0.0);
    for (int i = 0; i < N; ++i) counts[std::min(sample_order(lambda, rng), kmax)] += 1.0;
    double p = std::exp(-lambda), cum = 0;
    for (int l = 0; l < kmax; ++l) {
      probs[l] = p;
      cum += p;
      p *= lambda / (l + 1);
    }
    probs[kmax] = 1.0 - cum;
    pa = stats::chi_square_p(counts, probs, N);
  }

  // (b,d) R-branch truncated orders + constant-H product law, via the
  // segment-unitary sampler on a constant two-term model
  std::vector<SignedTerm> in;
  in.push_back({PauliString::parse("X"), CoeffWaveform::constant(0.25)});
  in.push_back({PauliString::parse("Z"), CoeffWaveform::constant(0.75)});
  TimeDependentHamiltonian Hc(1, std::move(in));
  const SegmentPlan cplan = Hc.plan_segments(0.8, 0.8);
  const LcuDescriptor d = LcuDescriptor::from_lambda_row(cplan.lambda_p[0]);
  double pb;
  {
    const int kmax = 10;
    std::vector<double> counts(kmax + 1, 0.0);
    double nR = 0;
    for (int i = 0; i < N; ++i) {
      const SampledUnitary u = sample_segment_unitary(d, Hc, cplan.segment(0), rng);
      if (u.kind == SampledUnitary::Kind::PauliProduct) {
        counts[std::min(u.order, kmax)] += 1.0;
        nR += 1.0;
      }
    }
    std::vector<double> probs(kmax + 1, 0.0);
    const double tail = 1.0 - std::exp(-d.lambda) * (1.0 + d.lambda);
    double p = std::exp(-d.lambda) * d.lambda * d.lambda / 2.0, cum = 0;
    for (int l = 2; l < kmax; ++l) {
      probs[l] = p / tail;
      cum += probs[l];
      p *= d.lambda / (l + 1);
    }
    probs[kmax] = 1.0 - cum;
    pb = stats::chi_square_p(counts, probs, nR);
  }

  // (c) time draws vs |cos 2t| density on [0, pi/4]
  double pc;
  {
    std::vector<SignedTerm> ic;
    ic.push_back({PauliString::parse("X"), CoeffWaveform::cosine(1.0, 2.0)});
    TimeDependentHamiltonian Ht(1, std::move(ic));
    std::vector<double> draws(N);
    for (int i = 0; i < N; ++i) draws[i] = Ht.sample_time(0.0, M_PI / 4, rng);
    pc = stats::ks_p(std::move(draws), [](double t) { return std::sin(2 * t); });
  }

  // (d) l=2 index sequences vs the product law, distinguished by order-sensitive
  // folded products (-XX=-I, -XZ=iY, -ZX=-iY, -ZZ=-I)
  double pd;
  {
    std::map<std::string, double> counts;
    for (int i = 0; i < N; ++i) counts[sample_pdy(2, Hc, cplan.segment(0), rng).to_string()] += 1.0;
    const std::vector<double> w = oracle::constant_pdy_law(Hc);
    const double wx = w[0] + w[1], wz = w[2] + w[3];
    std::vector<double> obs = {counts["-I"], counts["iY"], counts["-iY"]};
    std::vector<double> probs = {wx * wx + wz * wz, wx * wz, wx * wz};
    pd = stats::chi_square_p(obs, probs, N);
  }

  const bool ok = pa > 0.001 && pb > 0.001 && pc > 0.001 && pd > 0.001;
  report(3, ok, "sampler distribution suite",
         fmt("p: order %.3f, trunc %.3f, time %.3f, product %.3f", pa, pb, pc, pd));
}

// --- shared spin-model fixture ----------------------------------------------

struct SpinFixture {
  TimeDependentHamiltonian H;
  SegmentPlan plan;              // lambda_target = 0.2 -> N_seg = 4
  PauliString obs;               // parity-even Z on the first spin
  StateVector prepared;          // ancilla + |101>
  StateVector psi_data;          // |101>
  double oracle_value;

  static SpinFixture make() {
    TimeDependentHamiltonian H = spin_chain_hamiltonian(3, 0.1, 1.0);
    SegmentPlan plan = H.plan_segments(M_PI, 0.2);
    const auto U = oracle::exact_propagator(H, 0, M_PI);
    const PauliString obs = PauliString::parse("ZII");
    const double val = oracle::exact_expectation(oracle::basis_state(5, 3), obs, U.matrix);
    StateVector psi(3);
    psi.amplitudes().assign(8, cx(0, 0));
    psi.amplitudes()[5] = cx(1, 0);
    return {std::move(H), std::move(plan), obs, prepare_hadamard_test(std::size_t{5}, 3),
            std::move(psi), val};
  }
};

// --- 4: Hoeffding coverage ---------------------------------------------------

void check_coverage(const SpinFixture& fx) {
  int covered = 0;
  const int reps = 200;
  const std::int64_t M = 10000;
  double eps = 0;
  for (int rep = 0; rep < reps; ++rep) {
    const RunReport r = run_urcc(fx.H, fx.plan, fx.prepared, fx.obs, MeasureMode::Shot, M, 0.05,
                                 40000 + rep, 8);
    eps = r.eps_samp;
    if (std::abs(r.O_est - fx.oracle_value) <= r.eps_samp) ++covered;
  }
  report(4, covered >= 190, "Hoeffding bound coverage",
         fmt("%d/200 covered at eps %.3f", covered, eps));
}

// --- 5: Fig. 2(a) signature --------------------------------------------------

void check_fig2a(const SpinFixture& fx) {
  const std::vector<std::int64_t> Ms = {1000, 10000, 100000, 1000000};
  const std::vector<int> reps = {64, 32, 16, 8};
  std::vector<double> lx, ly;
  double urcc_err_at_max = 0;
  std::uint64_t seed = 50000;
  for (std::size_t i = 0; i < Ms.size(); ++i) {
    double ss = 0;
    for (int rep = 0; rep < reps[i]; ++rep) {
      const RunReport r = run_urcc(fx.H, fx.plan, fx.prepared, fx.obs, MeasureMode::Shot, Ms[i],
                                   0.05, seed++, 8);
      const double e = r.O_est - fx.oracle_value;
      ss += e * e;
    }
    const double rms = std::sqrt(ss / reps[i]);
    lx.push_back(std::log10(static_cast<double>(Ms[i])));
    ly.push_back(std::log10(rms));
    if (i + 1 == Ms.size()) urcc_err_at_max = rms;
  }
  const double slope = stats::fit_slope(lx, ly);

  // c-qDRIFT at the 2-qubit-gate-count-matched segment count
  const int nseg_qd = matched_qdrift_nseg(fx.H, fx.plan, 1e-6, 4.0);
  const SegmentPlan qplan =
      fx.H.plan_segments(M_PI, fx.H.Lambda(M_PI) / nseg_qd * (1 + 1e-9));
  ObservableDecomposition dec;
  dec.components.push_back({1.0, fx.obs});
  const double eps_alg =
      oracle::algorithmic_error(fx.H, qplan, oracle::basis_state(5, 3), dec);
  double qd_err = 0;
  const int qreps = 3;
  for (int rep = 0; rep < qreps; ++rep) {
    const RunReport r = run_qdrift(fx.H, qplan, fx.psi_data, fx.obs, MeasureMode::Shot, 1000000,
                                   0.05, 60000 + rep, 8);
    qd_err += std::abs(r.O_est - fx.oracle_value);
  }
  qd_err /= qreps;

  const bool slope_ok = std::abs(slope + 0.5) <= 0.1;
  const bool plateau_ok = std::abs(qd_err - std::abs(eps_alg)) <= 0.2 * std::abs(eps_alg);
  const bool sep_ok = qd_err >= 3.0 * urcc_err_at_max;
  report(5, slope_ok && plateau_ok && sep_ok, "Fig. 2(a) signature",
         fmt("slope %.3f, plateau %.4f vs eps_alg %.4f (N_seg,qd=%d), ratio %.1f", slope, qd_err,
             std::abs(eps_alg), qplan.num_segments(), qd_err / urcc_err_at_max));
}

// --- 6: c-qDRIFT error scaling ----------------------------------------------

void check_qdrift_scaling() {
  TimeDependentHamiltonian H = spin_chain_hamiltonian(2, 0.5, 1.0);
  const double tau = M_PI;
  const double Lambda = H.Lambda(tau);
  const Eigen::VectorXcd psi = oracle::basis_state(2, 2);
  const Eigen::MatrixXcd rho0 = psi * psi.adjoint();
  const auto U = oracle::exact_propagator(H, 0, tau);
  const Eigen::MatrixXcd rho_exact = U.matrix * rho0 * U.matrix.adjoint();
  std::vector<double> lx, ly;
  for (int nseg : {8, 16, 32, 64}) {
    const SegmentPlan plan = H.plan_segments(tau, Lambda / nseg * (1 + 1e-9));
    const Eigen::MatrixXcd rho = oracle::qdrift_exact_state(H, plan, rho0);
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(rho - rho_exact);
    const double td = 0.5 * svd.singularValues().sum();
    lx.push_back(std::log2(static_cast<double>(nseg)));
    ly.push_back(std::log2(td));
  }
  const double slope = stats::fit_slope(lx, ly);
  report(6, std::abs(slope + 1.0) <= 0.15, "c-qDRIFT trace-distance scaling",
         fmt("log-log slope %.3f", slope));
}

// --- 7: circuit lowering exactness ------------------------------------------

void check_lowering() {
  std::mt19937_64 rng(107);
  std::uniform_real_distribution<double> ang(-3.0, 3.0);
  std::uniform_int_distribution<int> dl(1, 3);
  double worst = 0;
  for (int trial = 0; trial < 200; ++trial) {
    const int n = 1 + static_cast<int>(rng() % 3);
    PauliString sigma(n);
    const int k = 1 + static_cast<int>(rng() % std::min(n, 4));
    while (sigma.weight() < k) sigma.set_letter(static_cast<int>(rng() % n), static_cast<PauliLetter>(dl(rng)));
    if (rng() % 2) sigma.mul_phase(2);
    const double phi = ang(rng);
    const std::int64_t dim = std::int64_t(1) << n;
    PauliString base = sigma;
    base.set_phase_exp(0);
    const Eigen::MatrixXcd rot = oracle::pauli_rotation_matrix(base, sigma.sign() * phi);
    if (rng() % 2) {
      const QuantumCircuit c = lower_rotation(sigma, phi, n, 0, std::nullopt);
      worst = std::max(worst, (circuit_matrix(c) - rot).cwiseAbs().maxCoeff());
    } else {
      const int value = static_cast<int>(rng() % 2);
      const QuantumCircuit c = lower_rotation(sigma, phi, n + 1, 1, Control{0, value});
      Eigen::MatrixXcd want = Eigen::MatrixXcd::Identity(2 * dim, 2 * dim);
      const std::int64_t off = value == 1 ? dim : 0;
      want.block(off, off, dim, dim) = rot;
      worst = std::max(worst, (circuit_matrix(c) - want).cwiseAbs().maxCoeff());
    }
    // R-branch product with the (-i)^l ancilla phase
    PauliString op = sigma;
    op.set_phase_exp(static_cast<int>(rng() % 4));
    const int value = static_cast<int>(rng() % 2);
    const QuantumCircuit c = lower_pauli_product(op, n + 1, 1, Control{0, value});
    Eigen::MatrixXcd want = Eigen::MatrixXcd::Identity(2 * dim, 2 * dim);
    const std::int64_t off = value == 1 ? dim : 0;
    want.block(off, off, dim, dim) = op.to_matrix();
    worst = std::max(worst, (circuit_matrix(c) - want).cwiseAbs().maxCoeff());
  }
  report(7, worst <= 1e-12, "circuit lowering exactness", fmt("max deviation %.2e", worst));
}

// --- 8: resource accounting --------------------------------------------------

void check_resources(const SpinFixture& fx) {
  const int nseg = fx.plan.num_segments();
  const ResourceCount rc = urcc_pair_worst_case_resources(fx.H, fx.plan, 1e-6, 4.0);
  const int nseg_qd = 16;
  const ResourceCount rq = qdrift_resources(fx.H, nseg_qd, 1e-6, 4.0);
  const double ratio = t_count_ratio(nseg_qd, nseg);
  const LcuDescriptor d = LcuDescriptor::from_lambda_row(fx.plan.lambda_p[0]);
  double c_long = 1;
  for (const auto& row : fx.plan.lambda_p) c_long *= LcuDescriptor::from_lambda_row(row).C_lor();
  const double c_ref = std::pow(d.C_lor(), nseg);
  const bool ok = rc.phase_gates == 4LL * nseg && rq.phase_gates == nseg_qd &&
                  ratio == static_cast<double>(nseg_qd) / (4.0 * nseg) &&
                  std::abs(c_long / c_ref - 1.0) <= 1e-12;
  report(8, ok, "resource accounting",
         fmt("phase gates %lld vs %d, qd %lld vs %d, ratio %.3f, C rel dev %.1e",
             rc.phase_gates, 4 * nseg, rq.phase_gates, nseg_qd, ratio,
             std::abs(c_long / c_ref - 1.0)));
}

// --- 9: grouped measurement --------------------------------------------------

void check_grouping(const SpinFixture& fx) {
  // {ZI, IZ} join into a single group with R = ZZ
  ObservableDecomposition zz;
  zz.components.push_back({1.0, PauliString::parse("ZI")});
  zz.components.push_back({1.0, PauliString::parse("IZ")});
  const auto zz_groups = group_ldf(zz);
  const bool join_ok = zz_groups.size() == 1 && zz_groups[0].R == PauliString::parse("ZZ");

  // grouped vs ungrouped on the spin model: O = Z1 + 0.5 Z2 (one group) plus
  // an XX probe forming a second group
  ObservableDecomposition dec;
  dec.components.push_back({1.0, PauliString::parse("ZII")});
  dec.components.push_back({0.5, PauliString::parse("IZI")});
  dec.components.push_back({0.4, PauliString::parse("XXI")});
  const auto groups = group_ldf(dec);
  const auto U = oracle::exact_propagator(fx.H, 0, M_PI);
  const double want = oracle::exact_expectation(oracle::basis_state(5, 3), dec, U.matrix);

  const RunReport g = run_urcc_grouped(fx.H, fx.plan, fx.prepared, dec, groups, 100000, 0.05,
                                       90001, 8);
  // ungrouped reference: sum of per-component single-Pauli runs
  double ung = 0, var = 0;
  std::uint64_t seed = 91000;
  for (const auto& cpt : dec.components) {
    const RunReport r = run_urcc(fx.H, fx.plan, fx.prepared, cpt.pauli, MeasureMode::Shot, 100000,
                                 0.05, seed++, 8);
    ung += cpt.alpha * r.O_est;
    var += cpt.alpha * cpt.alpha * r.stddev_est * r.stddev_est / 100000.0;
  }
  const double se = std::sqrt(var + g.stddev_est * g.stddev_est / 100000.0);
  const bool agree_ok = std::abs(g.O_est - ung) <= 5.0 * se;

  int covered = 0;
  for (int rep = 0; rep < 200; ++rep) {
    const RunReport r = run_urcc_grouped(fx.H, fx.plan, fx.prepared, dec, groups, 10000, 0.05,
                                         92000 + rep, 8);
    if (std::abs(r.O_est - want) <= r.eps_samp) ++covered;
  }
  report(9, join_ok && agree_ok && covered >= 190, "grouped measurement",
         fmt("groups %zu, |grouped-ungrouped| %.4f <= %.4f, coverage %d/200",
             groups.size(), std::abs(g.O_est - ung), 5.0 * se, covered));
}

// --- 10: byte-identical CSV across worker counts -----------------------------

std::string slurp(const char* path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void check_determinism(const char* cli) {
  if (!cli) {
    report(10, false, "CSV determinism", "no CLI binary path given");
    return;
  }
  const std::string cfg = "/tmp/urcc_acc_cfg.json";
  {
    std::ofstream f(cfg);
    f << R"({"M": [2000, 5000], "qdrift_nseg": [8]})";
  }
  const std::string base = std::string(cli) + " spin --seed 31415 --config " + cfg;
  const int rc1 = std::system((base + " --workers 1 --out /tmp/urcc_acc_w1.csv").c_str());
  const int rc8 = std::system((base + " --workers 8 --out /tmp/urcc_acc_w8.csv").c_str());
  const std::string a = slurp("/tmp/urcc_acc_w1.csv"), b = slurp("/tmp/urcc_acc_w8.csv");
  const bool ok = rc1 == 0 && rc8 == 0 && !a.empty() && a == b;
  report(10, ok, "CSV determinism across worker counts",
         fmt("%zu bytes, identical: %s", a.size(), a == b ? "yes" : "no"));
}

}  // namespace

int main(int argc, char** argv) {
  const SpinFixture fx = SpinFixture::make();
  check_identity();
  check_unbiasedness();
  check_samplers();
  check_coverage(fx);
  check_fig2a(fx);
  check_qdrift_scaling();
  check_lowering();
  check_resources(fx);
  check_grouping(fx);
  check_determinism(argc > 1 ? argv[1] : nullptr);
  std::printf("%s: %d/10 criteria passed\n", g_failures == 0 ? "ACCEPTED" : "REJECTED",
              10 - g_failures);
  return g_failures == 0 ? 0 : 1;
}
