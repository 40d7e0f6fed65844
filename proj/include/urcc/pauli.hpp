#pragma once

#include <Eigen/Dense>
#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace urcc {

using cx = std::complex<double>;

/// Single-qubit Pauli letter.
enum class PauliLetter : std::uint8_t { I = 0, X = 1, Y = 2, Z = 3 };

/**
 * A signed/phased Pauli string: the operator i^{phase_exp} * (L_0 ⊗ L_1 ⊗ ... ⊗ L_{n-1}).
 *
 * Letters are stored symplectically as packed x/z bit words (letter j lives in
 * bit j%64 of word j/64), so products of long strings cost O(n/64). The phase
 * exponent is an integer mod 4 and is tracked exactly; no floating point ever
 * touches the phase.
 */
class PauliString {
 public:
  PauliString() : n_(0), phase_exp_(0) {}

  /// Identity on n qubits.
  explicit PauliString(int n) : n_(n), phase_exp_(0), x_(words(n), 0), z_(words(n), 0) {
    if (n < 0) throw std::invalid_argument("PauliString: negative qubit count");
  }

  static PauliString identity(int n) { return PauliString(n); }

  /// Single non-identity letter at qubit q on an otherwise-identity string.
  static PauliString single(int n, int q, PauliLetter l, int phase_exp = 0) {
    PauliString p(n);
    p.set_letter(q, l);
    p.phase_exp_ = mod4(phase_exp);
    return p;
  }

  int num_qubits() const { return n_; }
  int phase_exp() const { return phase_exp_; }

  void set_phase_exp(int e) { phase_exp_ = mod4(e); }

  /// Multiplies the represented operator by i^e.
  PauliString& mul_phase(int e) {
    phase_exp_ = mod4(phase_exp_ + e);
    return *this;
  }

  PauliLetter letter(int q) const {
    check_index(q);
    const int x = bit(x_, q), z = bit(z_, q);
    if (x && z) return PauliLetter::Y;
    if (x) return PauliLetter::X;
    if (z) return PauliLetter::Z;
    return PauliLetter::I;
  }

  void set_letter(int q, PauliLetter l) {
    check_index(q);
    set_bit(x_, q, l == PauliLetter::X || l == PauliLetter::Y);
    set_bit(z_, q, l == PauliLetter::Z || l == PauliLetter::Y);
  }

  /// Number of Y letters; used internally for phase bookkeeping in products.
  int count_y() const {
    int c = 0;
    for (std::size_t w = 0; w < x_.size(); ++w) c += popcount(x_[w] & z_[w]);
    return c;
  }

  /// Indices (0-based) of qubits where the letter is not I.
  std::vector<int> support() const {
    std::vector<int> s;
    for (int q = 0; q < n_; ++q)
      if (bit(x_, q) | bit(z_, q)) s.push_back(q);
    return s;
  }

  int weight() const {
    int c = 0;
    for (std::size_t w = 0; w < x_.size(); ++w) c += popcount(x_[w] | z_[w]);
    return c;
  }

  bool is_identity_letters() const {
    for (std::size_t w = 0; w < x_.size(); ++w)
      if (x_[w] | z_[w]) return false;
    return true;
  }

  /// Hermitian iff the global factor is ±1.
  bool is_hermitian() const { return phase_exp_ == 0 || phase_exp_ == 2; }

  /// +1 or -1 for Hermitian strings.
  int sign() const {
    if (!is_hermitian()) throw std::logic_error("PauliString::sign: phase is not ±1");
    return phase_exp_ == 0 ? 1 : -1;
  }

  friend bool operator==(const PauliString& a, const PauliString& b) {
    return a.n_ == b.n_ && a.phase_exp_ == b.phase_exp_ && a.x_ == b.x_ && a.z_ == b.z_;
  }

  /**
   * Exact product of the represented operators. Phases are combined through
   * the symplectic form: writing each letter as i^{y} X^x Z^z, the letterwise
   * anticommutation contributes (-1)^{popcount(z_a & x_b)}.
   */
  friend PauliString multiply(const PauliString& a, const PauliString& b) {
    if (a.n_ != b.n_) throw std::invalid_argument("PauliString multiply: dimension mismatch");
    PauliString r(a.n_);
    int anti = 0;
    for (std::size_t w = 0; w < a.x_.size(); ++w) {
      anti += popcount(a.z_[w] & b.x_[w]);
      r.x_[w] = a.x_[w] ^ b.x_[w];
      r.z_[w] = a.z_[w] ^ b.z_[w];
    }
    // i^{pa+ya} X^{xa}Z^{za} * i^{pb+yb} X^{xb}Z^{zb}
    //   = i^{pa+pb+ya+yb+2*anti} X^{xr}Z^{zr}
    //   = i^{pa+pb+ya+yb+2*anti-yr} * (letters of r)
    r.phase_exp_ = mod4(a.phase_exp_ + b.phase_exp_ + a.count_y() + b.count_y() + 2 * anti - r.count_y());
    return r;
  }

  /// True iff every letter of q equals the letter of r or is I. Phases ignored.
  friend bool qubitwise_compatible(const PauliString& q, const PauliString& r) {
    if (q.n_ != r.n_) throw std::invalid_argument("qubitwise_compatible: dimension mismatch");
    for (std::size_t w = 0; w < q.x_.size(); ++w) {
      const std::uint64_t mism = (q.x_[w] ^ r.x_[w]) | (q.z_[w] ^ r.z_[w]);
      if (mism & (q.x_[w] | q.z_[w])) return false;
    }
    return true;
  }

  /// Dense 2^n x 2^n matrix including the i^{phase_exp} factor. Qubit 0 is the
  /// most significant index bit.
  Eigen::MatrixXcd to_matrix(int max_qubits = 12) const {
    if (n_ > max_qubits) throw std::invalid_argument("PauliString::to_matrix: size limit exceeded");
    const std::int64_t dim = std::int64_t(1) << n_;
    Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(dim, dim);
    static const cx kPhase[4] = {cx(1, 0), cx(0, 1), cx(-1, 0), cx(0, -1)};
    for (std::int64_t col = 0; col < dim; ++col) {
      std::int64_t row = col;
      int pe = phase_exp_;
      for (int q = 0; q < n_; ++q) {
        const std::int64_t qb = std::int64_t(1) << (n_ - 1 - q);
        const bool one = col & qb;
        switch (letter(q)) {
          case PauliLetter::I:
            break;
          case PauliLetter::X:
            row ^= qb;
            break;
          case PauliLetter::Y:
            row ^= qb;
            pe += one ? 3 : 1;  // Y|0> = i|1>, Y|1> = -i|0>
            break;
          case PauliLetter::Z:
            if (one) pe += 2;
            break;
        }
      }
      m(row, col) = kPhase[mod4(pe)];
    }
    return m;
  }

  /// "XYZI", "-iXZ", ... Leading token is one of "", "+", "-", "i", "-i".
  std::string to_string() const {
    static const char* kTok[4] = {"", "i", "-", "-i"};
    std::string s = kTok[phase_exp_];
    for (int q = 0; q < n_; ++q) s += "IXYZ"[static_cast<int>(letter(q))];
    return s;
  }

  static PauliString parse(std::string_view s) {
    int pe = 0;
    if (s.starts_with("-i")) {
      pe = 3;
      s.remove_prefix(2);
    } else if (s.starts_with("-")) {
      pe = 2;
      s.remove_prefix(1);
    } else if (s.starts_with("i")) {
      pe = 1;
      s.remove_prefix(1);
    } else if (s.starts_with("+")) {
      s.remove_prefix(1);
    }
    PauliString p(static_cast<int>(s.size()));
    p.phase_exp_ = pe;
    for (int q = 0; q < p.n_; ++q) {
      switch (s[q]) {
        case 'I': break;
        case 'X': p.set_letter(q, PauliLetter::X); break;
        case 'Y': p.set_letter(q, PauliLetter::Y); break;
        case 'Z': p.set_letter(q, PauliLetter::Z); break;
        default: throw std::invalid_argument("PauliString::parse: bad letter");
      }
    }
    return p;
  }

 private:
  static std::size_t words(int n) { return (static_cast<std::size_t>(n) + 63) / 64; }
  static int mod4(int e) { return ((e % 4) + 4) % 4; }
  static int popcount(std::uint64_t w) { return __builtin_popcountll(w); }
  static int bit(const std::vector<std::uint64_t>& v, int q) {
    return (v[q / 64] >> (q % 64)) & 1;
  }
  static void set_bit(std::vector<std::uint64_t>& v, int q, bool on) {
    if (on)
      v[q / 64] |= std::uint64_t(1) << (q % 64);
    else
      v[q / 64] &= ~(std::uint64_t(1) << (q % 64));
  }
  void check_index(int q) const {
    if (q < 0 || q >= n_) throw std::out_of_range("PauliString: qubit index out of range");
  }

  int n_;
  int phase_exp_;
  std::vector<std::uint64_t> x_, z_;
};

/**
 * Left-to-right fold of multiply with a per-factor i-power absorbed into the
 * phase. An empty chain is the identity; the caller supplies n for that case.
 */
inline PauliString product_chain(const std::vector<PauliString>& factors,
                                 const std::vector<int>& prefactor_exp, int n_if_empty) {
  if (factors.size() != prefactor_exp.size())
    throw std::invalid_argument("product_chain: factor/prefactor length mismatch");
  if (factors.empty()) return PauliString::identity(n_if_empty);
  PauliString acc = factors[0];
  acc.mul_phase(prefactor_exp[0]);
  for (std::size_t i = 1; i < factors.size(); ++i) {
    PauliString f = factors[i];
    f.mul_phase(prefactor_exp[i]);
    acc = multiply(acc, f);
  }
  return acc;
}

}  // namespace urcc
