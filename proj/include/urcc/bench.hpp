#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "urcc/io.hpp"
#include "urcc/models.hpp"
#include "urcc/oracle.hpp"
#include "urcc/pipeline.hpp"

namespace urcc {

struct ExperimentConfig {
  std::string hamiltonian = "spin";  // builtin name or JSON file path
  double tau = M_PI;
  int n = 3;
  double J = 0.1;
  double omega = 1.0;
  double lambda_target = 0.2;
  std::vector<std::int64_t> M_list = {1000, 10000, 100000};
  double delta = 0.05;
  MeasureMode mode = MeasureMode::Shot;
  bool run_urcc_method = true;
  bool run_cqdrift_method = true;
  std::uint64_t seed = 1;
  int workers = 1;
  std::vector<int> qdrift_nseg_list;  // empty: match URCC two-qubit gate count
  std::string psi_init = "101";       // basis bitstring, or "plus"
  std::string observable;             // path; empty: experiment default
  std::string out;
  std::int64_t num_pairs = 4;  // compile subcommand
  double eps_ph = 9.5367431640625e-07;  // 2^-20, T-count accounting knob
  double c_rs = 4.0;

  void validate() const {
    if (M_list.empty()) throw std::invalid_argument("config: M sweep must be non-empty");
    for (auto m : M_list)
      if (m < 1) throw std::invalid_argument("config: M values must be positive");
    if (!(delta > 0 && delta < 1)) throw std::invalid_argument("config: delta must be in (0,1)");
    if (lambda_target <= 0) throw std::invalid_argument("config: lambda_target must be > 0");
    if (tau <= 0) throw std::invalid_argument("config: tau must be > 0");
    if (workers < 1) throw std::invalid_argument("config: workers must be >= 1");
  }
};

inline ExperimentConfig config_from_json(const nlohmann::json& j) {
  ExperimentConfig c;
  c.hamiltonian = j.value("hamiltonian", c.hamiltonian);
  c.tau = j.value("tau", c.tau);
  c.n = j.value("n", c.n);
  c.J = j.value("J", c.J);
  c.omega = j.value("omega", c.omega);
  c.lambda_target = j.value("lambda_target", c.lambda_target);
  if (j.contains("M")) c.M_list = j.at("M").get<std::vector<std::int64_t>>();
  c.delta = j.value("delta", c.delta);
  if (j.contains("mode")) {
    const std::string m = j.at("mode").get<std::string>();
    if (m == "exact")
      c.mode = MeasureMode::Exact;
    else if (m == "shot")
      c.mode = MeasureMode::Shot;
    else
      throw std::invalid_argument("config: mode must be exact or shot");
  }
  if (j.contains("methods")) {
    c.run_urcc_method = false;
    c.run_cqdrift_method = false;
    for (const auto& m : j.at("methods")) {
      if (m == "urcc")
        c.run_urcc_method = true;
      else if (m == "cqdrift")
        c.run_cqdrift_method = true;
      else
        throw std::invalid_argument("config: unknown method");
    }
  }
  if (j.contains("seed")) c.seed = j.at("seed").get<std::uint64_t>();
  c.workers = j.value("workers", c.workers);
  if (j.contains("qdrift_nseg")) c.qdrift_nseg_list = j.at("qdrift_nseg").get<std::vector<int>>();
  c.psi_init = j.value("psi_init", c.psi_init);
  c.observable = j.value("observable", c.observable);
  c.out = j.value("out", c.out);
  c.num_pairs = j.value("num_pairs", c.num_pairs);
  c.eps_ph = j.value("eps_ph", c.eps_ph);
  c.c_rs = j.value("c_rs", c.c_rs);
  c.validate();
  return c;
}

inline std::size_t parse_basis_label(const std::string& s, int n) {
  if (static_cast<int>(s.size()) != n) throw std::invalid_argument("psi_init: length mismatch");
  std::size_t label = 0;
  for (char ch : s) {
    if (ch != '0' && ch != '1') throw std::invalid_argument("psi_init: expected a bitstring");
    label = (label << 1) | (ch == '1' ? 1 : 0);
  }
  return label;
}

inline StateVector data_state(const ExperimentConfig& cfg, int n) {
  StateVector s(n);
  auto& a = s.amplitudes();
  if (cfg.psi_init == "plus") {
    const double v = 1.0 / std::sqrt(static_cast<double>(a.size()));
    for (auto& amp : a) amp = cx(v, 0);
    return s;
  }
  a.assign(a.size(), cx(0, 0));
  a[parse_basis_label(cfg.psi_init, n)] = cx(1, 0);
  return s;
}

/// Worst-case (all-rotations) resource count for one URCC Hadamard-test pair.
inline ResourceCount urcc_pair_worst_case_resources(const TimeDependentHamiltonian& H,
                                                    const SegmentPlan& plan, double eps_ph,
                                                    double c_rs) {
  int kmax = 1;
  const TimeDependentHamiltonian* h = &H;
  for (const auto& in : h->input_terms()) kmax = std::max(kmax, in.pauli.weight());
  PauliString sigma(H.num_qubits());
  for (const auto& in : H.input_terms())
    if (in.pauli.weight() == kmax) {
      sigma = in.pauli;
      break;
    }
  QuantumCircuit circ{H.num_qubits() + 1, {}};
  for (int j = 0; j < plan.num_segments(); ++j) {
    lower_rotation_into(circ, sigma, 0.1, 1, Control{0, 1});
    lower_rotation_into(circ, sigma, 0.1, 1, Control{0, 0});
  }
  return count_resources(circ, eps_ph, c_rs);
}

/// Per-pair c-qDRIFT resources: one uncontrolled rotation per segment.
inline ResourceCount qdrift_resources(const TimeDependentHamiltonian& H, int n_seg, double eps_ph,
                                      double c_rs) {
  int kmax = 1;
  PauliString sigma(H.num_qubits());
  for (const auto& in : H.input_terms())
    if (in.pauli.weight() >= kmax) {
      kmax = in.pauli.weight();
      sigma = in.pauli;
    }
  QuantumCircuit circ{H.num_qubits(), {}};
  for (int j = 0; j < n_seg; ++j) lower_rotation_into(circ, sigma, 0.1, 0, std::nullopt);
  return count_resources(circ, eps_ph, c_rs);
}

/// N_seg for c-qDRIFT with (approximately) the URCC pair's two-qubit count.
inline int matched_qdrift_nseg(const TimeDependentHamiltonian& H, const SegmentPlan& plan,
                               double eps_ph, double c_rs) {
  const ResourceCount urcc_rc = urcc_pair_worst_case_resources(H, plan, eps_ph, c_rs);
  const ResourceCount per_seg = qdrift_resources(H, 1, eps_ph, c_rs);
  if (per_seg.two_qubit == 0) return static_cast<int>(urcc_rc.single_qubit / std::max<long long>(1, per_seg.single_qubit));
  return std::max(1, static_cast<int>(urcc_rc.two_qubit / per_seg.two_qubit));
}

struct ExperimentInstance {
  TimeDependentHamiltonian H;
  StateVector psi;  // data register
  ObservableDecomposition obs;
  double tau;
};

inline ExperimentInstance build_instance(const ExperimentConfig& cfg) {
  if (cfg.hamiltonian == "spin") {
    TimeDependentHamiltonian H = spin_chain_hamiltonian(cfg.n, cfg.J, cfg.omega);
    ObservableDecomposition obs;
    if (!cfg.observable.empty()) {
      obs = load_observable(cfg.observable);
    } else {
      obs.components.push_back({1.0, PauliString::single(cfg.n, 0, PauliLetter::X)});
    }
    return {std::move(H), data_state(cfg, cfg.n), std::move(obs), cfg.tau};
  }
  if (cfg.hamiltonian == "adiabatic-toy") {
    TimeDependentHamiltonian H = adiabatic_toy_hamiltonian(cfg.tau);
    ExperimentConfig c2 = cfg;
    if (c2.psi_init != "plus" && static_cast<int>(c2.psi_init.size()) != 2) c2.psi_init = "plus";
    ObservableDecomposition obs =
        cfg.observable.empty() ? adiabatic_toy_observable() : load_observable(cfg.observable);
    return {std::move(H), data_state(c2, 2), std::move(obs), cfg.tau};
  }
  TimeDependentHamiltonian H = load_hamiltonian(cfg.hamiltonian);
  if (cfg.observable.empty())
    throw std::invalid_argument("config: file-based Hamiltonian needs an observable file");
  ObservableDecomposition obs = load_observable(cfg.observable);
  ExperimentConfig c2 = cfg;
  return {std::move(H), data_state(c2, H.num_qubits()), std::move(obs), cfg.tau};
}

inline Eigen::VectorXcd to_eigen(const StateVector& s) {
  Eigen::VectorXcd v(s.amplitudes().size());
  for (std::size_t i = 0; i < s.amplitudes().size(); ++i) v(i) = s.amplitudes()[i];
  return v;
}

inline const std::vector<std::string> kCsvHeader = {
    "method", "M",        "N_seg",       "O_est",   "eps_tot",      "C",
    "gates_1q", "gates_2q", "phase_gates", "t_ratio", "oracle_value", "abs_error"};

/**
 * Fig. 2(a/c/e)-style sweep: URCC over the M list at fixed N_seg, c-qDRIFT
 * over the M list for each of its segment counts, one CSV row per run.
 */
inline std::string run_spin_experiment(const ExperimentConfig& cfg) {
  const ExperimentInstance inst = build_instance(cfg);
  if (inst.obs.components.size() != 1)
    throw std::invalid_argument("spin experiment: expected a single-Pauli observable");
  const PauliString obs = inst.obs.components[0].pauli;
  const TimeDependentHamiltonian& H = inst.H;

  const SegmentPlan plan = H.plan_segments(inst.tau, cfg.lambda_target);
  const oracle::DensePropagator U = oracle::exact_propagator(H, 0, inst.tau);
  const double oracle_value = oracle::exact_expectation(to_eigen(inst.psi), obs, U.matrix);
  const Eigen::VectorXcd psi0 = to_eigen(inst.psi);

  std::vector<int> qd_nsegs = cfg.qdrift_nseg_list;
  if (qd_nsegs.empty() && cfg.run_cqdrift_method)
    qd_nsegs.push_back(matched_qdrift_nseg(H, plan, cfg.eps_ph, cfg.c_rs));

  CsvWriter csv(kCsvHeader);
  const StateVector prepared = prepare_hadamard_test(
      [&] {
        std::vector<cx> amps(inst.psi.amplitudes());
        return amps;
      }(),
      H.num_qubits());

  if (cfg.run_urcc_method) {
    const ResourceCount rc = urcc_pair_worst_case_resources(H, plan, cfg.eps_ph, cfg.c_rs);
    const double tr = qd_nsegs.empty() ? 0.0 : t_count_ratio(qd_nsegs.front(), plan.num_segments());
    for (std::int64_t M : cfg.M_list) {
      const RunReport r =
          run_urcc(H, plan, prepared, obs, cfg.mode, M, cfg.delta, mix64(cfg.seed) ^ 0x11, cfg.workers);
      csv.row({"urcc", CsvWriter::num(static_cast<long long>(M)),
               CsvWriter::num(static_cast<long long>(plan.num_segments())), CsvWriter::num(r.O_est),
               CsvWriter::num(r.eps_samp), CsvWriter::num(r.C),
               CsvWriter::num(rc.single_qubit), CsvWriter::num(rc.two_qubit),
               CsvWriter::num(rc.phase_gates), CsvWriter::num(tr), CsvWriter::num(oracle_value),
               CsvWriter::num(std::abs(r.O_est - oracle_value))});
    }
  }
  if (cfg.run_cqdrift_method) {
    ObservableDecomposition single;
    single.components.push_back({1.0, obs});
    for (int nseg : qd_nsegs) {
      const SegmentPlan qplan = H.plan_segments(inst.tau, H.Lambda(inst.tau) / nseg * (1.0 + 1e-9));
      const double eps_alg = oracle::algorithmic_error(H, qplan, psi0, single);
      const ResourceCount rc = qdrift_resources(H, qplan.num_segments(), cfg.eps_ph, cfg.c_rs);
      const double tr = t_count_ratio(qplan.num_segments(), plan.num_segments());
      for (std::int64_t M : cfg.M_list) {
        const RunReport r = run_qdrift(H, qplan, inst.psi, obs, cfg.mode, M, cfg.delta,
                                       mix64(cfg.seed) ^ 0x22, cfg.workers);
        const double eps_tot = qdrift_total_error(M, cfg.delta, eps_alg, 1.0);
        csv.row({"cqdrift", CsvWriter::num(static_cast<long long>(M)),
                 CsvWriter::num(static_cast<long long>(qplan.num_segments())),
                 CsvWriter::num(r.O_est), CsvWriter::num(eps_tot), CsvWriter::num(1.0),
                 CsvWriter::num(rc.single_qubit), CsvWriter::num(rc.two_qubit),
                 CsvWriter::num(rc.phase_gates), CsvWriter::num(tr), CsvWriter::num(oracle_value),
                 CsvWriter::num(std::abs(r.O_est - oracle_value))});
      }
    }
  }
  return csv.str();
}

inline const std::vector<std::string> kAdiabaticHeader = {
    "method", "M",        "N_seg",       "O_est",   "eps_tot",      "C",
    "gates_1q", "gates_2q", "phase_gates", "t_ratio", "oracle_value", "abs_error",
    "groups",  "nonadiabatic_err"};

/// Adiabatic energy estimation with LDF-grouped measurement.
inline std::string run_adiabatic_experiment(const ExperimentConfig& cfg) {
  ExperimentConfig c = cfg;
  if (c.hamiltonian == "spin") c.hamiltonian = "adiabatic-toy";
  if (c.psi_init == "101") c.psi_init = "plus";
  const ExperimentInstance inst = build_instance(c);
  const TimeDependentHamiltonian& H = inst.H;
  const int n = H.num_qubits();

  const SegmentPlan plan = H.plan_segments(inst.tau, c.lambda_target);
  const Eigen::VectorXcd psi0 = to_eigen(inst.psi);
  const oracle::DensePropagator U = oracle::exact_propagator(H, 0, inst.tau);
  const double oracle_value = oracle::exact_expectation(psi0, inst.obs, U.matrix);

  // Non-adiabaticity: distance of the evolved energy from the final ground energy.
  Eigen::MatrixXcd hb = Eigen::MatrixXcd::Zero(psi0.size(), psi0.size());
  for (const auto& comp : inst.obs.components) hb += comp.alpha * comp.pauli.to_matrix();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(hb);
  const double ground = es.eigenvalues().minCoeff();
  const double nonadiabatic = std::abs(oracle_value - ground);

  std::vector<MeasurementGroup> groups = group_ldf(inst.obs);
  std::vector<int> qd_nsegs = c.qdrift_nseg_list;
  if (qd_nsegs.empty() && c.run_cqdrift_method)
    qd_nsegs.push_back(matched_qdrift_nseg(H, plan, c.eps_ph, c.c_rs));

  CsvWriter csv(kAdiabaticHeader);
  const StateVector prepared = prepare_hadamard_test(inst.psi.amplitudes(), n);
  const double norm_O = inst.obs.norm_bound();

  if (c.run_urcc_method) {
    const ResourceCount rc = urcc_pair_worst_case_resources(H, plan, c.eps_ph, c.c_rs);
    const double tr = qd_nsegs.empty() ? 0.0 : t_count_ratio(qd_nsegs.front(), plan.num_segments());
    for (std::int64_t M : c.M_list) {
      const RunReport r = run_urcc_grouped(H, plan, prepared, inst.obs, groups, M, c.delta,
                                           mix64(c.seed) ^ 0x11, c.workers);
      csv.row({"urcc", CsvWriter::num(static_cast<long long>(M)),
               CsvWriter::num(static_cast<long long>(plan.num_segments())), CsvWriter::num(r.O_est),
               CsvWriter::num(r.eps_samp), CsvWriter::num(r.C), CsvWriter::num(rc.single_qubit),
               CsvWriter::num(rc.two_qubit), CsvWriter::num(rc.phase_gates), CsvWriter::num(tr),
               CsvWriter::num(oracle_value), CsvWriter::num(std::abs(r.O_est - oracle_value)),
               CsvWriter::num(static_cast<long long>(r.groups)), CsvWriter::num(nonadiabatic)});
    }
  }
  if (c.run_cqdrift_method) {
    for (int nseg : qd_nsegs) {
      const SegmentPlan qplan = H.plan_segments(inst.tau, H.Lambda(inst.tau) / nseg * (1.0 + 1e-9));
      const double eps_alg = oracle::algorithmic_error(H, qplan, psi0, inst.obs);
      const ResourceCount rc = qdrift_resources(H, qplan.num_segments(), c.eps_ph, c.c_rs);
      const double tr = t_count_ratio(qplan.num_segments(), plan.num_segments());
      for (std::int64_t M : c.M_list) {
        const RunReport r = run_qdrift_grouped(H, qplan, inst.psi, inst.obs, groups, M, c.delta,
                                               mix64(c.seed) ^ 0x22, c.workers);
        const double eps_tot = qdrift_total_error(M, c.delta, eps_alg, norm_O);
        csv.row({"cqdrift", CsvWriter::num(static_cast<long long>(M)),
                 CsvWriter::num(static_cast<long long>(qplan.num_segments())),
                 CsvWriter::num(r.O_est), CsvWriter::num(eps_tot), CsvWriter::num(1.0),
                 CsvWriter::num(rc.single_qubit), CsvWriter::num(rc.two_qubit),
                 CsvWriter::num(rc.phase_gates), CsvWriter::num(tr), CsvWriter::num(oracle_value),
                 CsvWriter::num(std::abs(r.O_est - oracle_value)),
                 CsvWriter::num(static_cast<long long>(groups.size())),
                 CsvWriter::num(nonadiabatic)});
      }
    }
  }
  return csv.str();
}

inline void append_lowered(QuantumCircuit& circ, const SampledUnitary& su, Control ctrl) {
  switch (su.kind) {
    case SampledUnitary::Kind::Identity:
      return;
    case SampledUnitary::Kind::Rotation:
      if (su.op.weight() == 0)
        lower_global_phase_into(circ, su.op.sign(), su.angle, ctrl);
      else
        lower_rotation_into(circ, su.op, su.angle, 1, ctrl);
      return;
    case SampledUnitary::Kind::PauliProduct:
      lower_pauli_product_into(circ, su.op, 1, ctrl);
      return;
  }
}

inline std::string dump_sampled_unitary(const SampledUnitary& su) {
  char buf[160];
  switch (su.kind) {
    case SampledUnitary::Kind::Identity:
      std::snprintf(buf, sizeof buf, "seg %d | L id\n", su.segment_index);
      break;
    case SampledUnitary::Kind::Rotation:
      std::snprintf(buf, sizeof buf, "seg %d | L rot(%s, phi=%.12g)\n", su.segment_index,
                    su.op.to_string().c_str(), su.angle);
      break;
    case SampledUnitary::Kind::PauliProduct:
      std::snprintf(buf, sizeof buf, "seg %d | R prod(%s, l=%d)\n", su.segment_index,
                    su.op.to_string().c_str(), su.order);
      break;
  }
  return buf;
}

struct CompileOnlyOutput {
  std::string dump;  // line-oriented circuit-pair / qDRIFT dump
  std::string csv;   // resource counts
};

/// Emit sampled circuit pairs and resource counts without simulation.
inline CompileOnlyOutput run_compile_only(const ExperimentConfig& cfg) {
  const ExperimentInstance inst = build_instance(cfg);
  const TimeDependentHamiltonian& H = inst.H;
  const SegmentPlan plan = H.plan_segments(inst.tau, cfg.lambda_target);
  const auto descs = segment_descriptors(plan);

  CompileOnlyOutput out;
  CsvWriter csv({"method", "pair", "N_seg", "gates_1q", "gates_2q", "phase_gates", "t_count"});
  for (std::int64_t i = 0; i < cfg.num_pairs; ++i) {
    std::mt19937_64 rng = trial_rng(cfg.seed, static_cast<std::uint64_t>(i));
    if (cfg.run_urcc_method) {
      const CompiledCircuitPair pair = compile_pair(plan, descs, H, rng);
      out.dump += "pair " + std::to_string(i) + " urcc C=" + CsvWriter::num(pair.C) + "\n";
      QuantumCircuit circ{H.num_qubits() + 1, {}};
      for (const auto& su : pair.branch_s) {
        out.dump += dump_sampled_unitary(su);
        append_lowered(circ, su, Control{0, 1});
      }
      for (const auto& su : pair.branch_s_prime) {
        out.dump += dump_sampled_unitary(su);
        append_lowered(circ, su, Control{0, 0});
      }
      const ResourceCount rc = count_resources(circ, cfg.eps_ph, cfg.c_rs);
      csv.row({"urcc", CsvWriter::num(static_cast<long long>(i)),
               CsvWriter::num(static_cast<long long>(plan.num_segments())),
               CsvWriter::num(rc.single_qubit), CsvWriter::num(rc.two_qubit),
               CsvWriter::num(rc.phase_gates), CsvWriter::num(rc.t_count_estimate)});
    }
    if (cfg.run_cqdrift_method) {
      const std::vector<QdriftSample> samples = qdrift_compile(plan, H, rng);
      QuantumCircuit circ{H.num_qubits(), {}};
      for (const auto& s : samples) {
        char buf[160];
        std::snprintf(buf, sizeof buf, "seg %d | QD rot(%s, sign=%d, lambda=%.12g)\n",
                      s.segment_index, s.sigma.to_string().c_str(), s.sign, s.angle);
        out.dump += buf;
        if (s.sigma.weight() > 0) {
          PauliString sigma = s.sigma;
          if (s.sign < 0) sigma.mul_phase(2);
          lower_rotation_into(circ, sigma, s.angle, 0, std::nullopt);
        }
      }
      const ResourceCount rc = count_resources(circ, cfg.eps_ph, cfg.c_rs);
      csv.row({"cqdrift", CsvWriter::num(static_cast<long long>(i)),
               CsvWriter::num(static_cast<long long>(plan.num_segments())),
               CsvWriter::num(rc.single_qubit), CsvWriter::num(rc.two_qubit),
               CsvWriter::num(rc.phase_gates), CsvWriter::num(rc.t_count_estimate)});
    }
  }
  out.csv = csv.str();
  return out;
}

/// `estimate` subcommand: one URCC run on a user Hamiltonian + observable.
inline std::string run_estimate(const ExperimentConfig& cfg) {
  const ExperimentInstance inst = build_instance(cfg);
  const TimeDependentHamiltonian& H = inst.H;
  const SegmentPlan plan = H.plan_segments(inst.tau, cfg.lambda_target);
  const StateVector prepared = prepare_hadamard_test(inst.psi.amplitudes(), H.num_qubits());
  const oracle::DensePropagator U = oracle::exact_propagator(H, 0, inst.tau);
  const double oracle_value = oracle::exact_expectation(to_eigen(inst.psi), inst.obs, U.matrix);
  const ResourceCount rc = urcc_pair_worst_case_resources(H, plan, cfg.eps_ph, cfg.c_rs);

  CsvWriter csv(kAdiabaticHeader);
  std::vector<MeasurementGroup> groups = group_ldf(inst.obs);
  for (std::int64_t M : cfg.M_list) {
    const RunReport r = run_urcc_grouped(H, plan, prepared, inst.obs, groups, M, cfg.delta,
                                         mix64(cfg.seed) ^ 0x11, cfg.workers);
    csv.row({"urcc", CsvWriter::num(static_cast<long long>(M)),
             CsvWriter::num(static_cast<long long>(plan.num_segments())), CsvWriter::num(r.O_est),
             CsvWriter::num(r.eps_samp), CsvWriter::num(r.C), CsvWriter::num(rc.single_qubit),
             CsvWriter::num(rc.two_qubit), CsvWriter::num(rc.phase_gates), CsvWriter::num(0.0),
             CsvWriter::num(oracle_value), CsvWriter::num(std::abs(r.O_est - oracle_value)),
             CsvWriter::num(static_cast<long long>(r.groups)), CsvWriter::num(0.0)});
  }
  return csv.str();
}

}  // namespace urcc
