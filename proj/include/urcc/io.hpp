#pragma once

#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "urcc/estimator.hpp"
#include "urcc/hamiltonian.hpp"
#include "urcc/models.hpp"

namespace urcc {

inline CoeffWaveform waveform_from_json(const nlohmann::json& j) {
  const std::string kind = j.at("kind").get<std::string>();
  if (kind == "constant") return CoeffWaveform::constant(j.at("amplitude").get<double>());
  if (kind == "cosine")
    return CoeffWaveform::cosine(j.at("amplitude").get<double>(), j.at("frequency").get<double>());
  if (kind == "sine")
    return CoeffWaveform::sine(j.at("amplitude").get<double>(), j.at("frequency").get<double>());
  if (kind == "linear_ramp")
    return CoeffWaveform::linear_ramp(j.at("amplitude").get<double>(),
                                      j.value("slope", 0.0));
  if (kind == "ramp_product") {
    const std::string base = j.at("base").get<std::string>();
    const auto trig = base == "cosine" ? CoeffWaveform::Trig::Cos : CoeffWaveform::Trig::Sin;
    if (base != "cosine" && base != "sine")
      throw std::invalid_argument("waveform_from_json: ramp_product base must be cosine or sine");
    return CoeffWaveform::ramp_product(j.at("amplitude").get<double>(), j.value("slope", 0.0), trig,
                                       j.at("frequency").get<double>());
  }
  throw std::invalid_argument("waveform_from_json: unknown kind '" + kind + "'");
}

inline std::vector<SignedTerm> terms_from_json(const nlohmann::json& arr, int n) {
  std::vector<SignedTerm> terms;
  for (const auto& jt : arr) {
    SignedTerm t;
    t.pauli = PauliString::parse(jt.at("pauli").get<std::string>());
    if (t.pauli.num_qubits() != n)
      throw std::invalid_argument("hamiltonian json: pauli width does not match n");
    if (t.pauli.phase_exp() != 0)
      throw std::invalid_argument("hamiltonian json: pauli must be unsigned; put signs in amplitudes");
    t.coeff = waveform_from_json(jt.at("coeff"));
    terms.push_back(std::move(t));
  }
  return terms;
}

/**
 * Hamiltonian document:
 *   {"n": 3, "terms": [{"pauli": "XXI", "coeff": {"kind": "cosine", ...}}, ...]}
 * or with an adiabatic schedule:
 *   {"n": 2, "schedule": {"kind": "adiabatic", "tau": 50,
 *    "initial_terms": [{"pauli": "XI", "amplitude": -1}, ...],
 *    "final_terms": [...]}}
 * Amplitudes may be signed; canonical splitting happens on construction.
 */
inline TimeDependentHamiltonian hamiltonian_from_json(const nlohmann::json& j) {
  const int n = j.at("n").get<int>();
  if (j.contains("schedule")) {
    const auto& sch = j.at("schedule");
    if (sch.at("kind").get<std::string>() != "adiabatic")
      throw std::invalid_argument("hamiltonian json: unknown schedule kind");
    const double tau = sch.at("tau").get<double>();
    auto read_const_terms = [&](const nlohmann::json& arr) {
      std::vector<std::pair<PauliString, double>> out;
      for (const auto& jt : arr) {
        PauliString p = PauliString::parse(jt.at("pauli").get<std::string>());
        if (p.num_qubits() != n)
          throw std::invalid_argument("hamiltonian json: pauli width does not match n");
        out.emplace_back(p, jt.at("amplitude").get<double>());
      }
      return out;
    };
    return adiabatic_hamiltonian(n, read_const_terms(sch.at("initial_terms")),
                                 read_const_terms(sch.at("final_terms")), tau);
  }
  return TimeDependentHamiltonian(n, terms_from_json(j.at("terms"), n));
}

inline TimeDependentHamiltonian load_hamiltonian(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open hamiltonian file: " + path);
  nlohmann::json j;
  in >> j;
  return hamiltonian_from_json(j);
}

/// {"components": [{"alpha": -1.0, "pauli": "ZZ"}, ...]}
inline ObservableDecomposition observable_from_json(const nlohmann::json& j) {
  ObservableDecomposition d;
  for (const auto& jc : j.at("components"))
    d.components.push_back(
        {jc.at("alpha").get<double>(), PauliString::parse(jc.at("pauli").get<std::string>())});
  d.validate();
  return d;
}

inline ObservableDecomposition load_observable(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open observable file: " + path);
  nlohmann::json j;
  in >> j;
  return observable_from_json(j);
}

/// Minimal CSV assembly with stable formatting (shared by all subcommands).
class CsvWriter {
 public:
  explicit CsvWriter(std::vector<std::string> header) : columns_(std::move(header)) {
    for (std::size_t i = 0; i < columns_.size(); ++i)
      body_ += columns_[i] + (i + 1 < columns_.size() ? "," : "\n");
  }

  void row(const std::vector<std::string>& cells) {
    if (cells.size() != columns_.size()) throw std::invalid_argument("CsvWriter: column mismatch");
    for (std::size_t i = 0; i < cells.size(); ++i)
      body_ += cells[i] + (i + 1 < cells.size() ? "," : "\n");
  }

  static std::string num(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
  }
  static std::string num(long long v) { return std::to_string(v); }

  const std::string& str() const { return body_; }

  void write(const std::string& path) const {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open output file: " + path);
    out << body_;
  }

 private:
  std::vector<std::string> columns_;
  std::string body_;
};

}  // namespace urcc
