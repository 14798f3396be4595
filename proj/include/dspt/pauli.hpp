// Copyright 2026 The dspt Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef DSPT_PAULI_HPP_
#define DSPT_PAULI_HPP_

#include <bit>
#include <complex>
#include <cstdint>
#include <functional>
#include <initializer_list>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace dspt {

using cplx = std::complex<double>;

enum class Letter : std::uint8_t { I = 0, X = 1, Y = 2, Z = 3 };

char letter_char(Letter l);

/// An N-site Pauli word times i^phase_exp, stored as two bit masks.
///
/// Bit l of x_mask (z_mask) is set when site l carries X or Y (Z or Y).
/// The letters themselves are the Hermitian single-site Paulis, so the
/// string is Hermitian exactly when phase_exp is even. Sites are numbered
/// from 0; the text form lists site 0 first.
class PauliString {
 public:
  static constexpr int kMaxSites = 64;

  PauliString() = default;
  explicit PauliString(int num_sites);
  PauliString(int num_sites, std::uint64_t x_mask, std::uint64_t z_mask, int phase_exp = 0);

  static PauliString single(int num_sites, int site, Letter letter);
  /// Letters "XYZI" read site 0 first, times +1 or -1.
  static PauliString from_letters(std::string_view letters, int sign = +1);
  /// Parses "[+|-|+i|-i|i]?[XYZI]+".
  static PauliString parse(std::string_view text);

  int num_sites() const { return n_; }
  std::uint64_t x_mask() const { return x_; }
  std::uint64_t z_mask() const { return z_; }
  int phase_exp() const { return phase_; }
  cplx phase() const;

  Letter letter(int site) const;
  bool is_identity_up_to_phase() const { return (x_ | z_) == 0; }
  bool is_hermitian() const { return (phase_ & 1) == 0; }
  int weight() const { return std::popcount(x_ | z_); }
  int y_count() const { return std::popcount(x_ & z_); }

  PauliString adjoint() const;
  PauliString with_phase(int phase_exp) const;
  /// Same letters with phase_exp = 0.
  PauliString stripped() const { return with_phase(0); }
  /// Multiply by i^k.
  PauliString times_i(int k) const { return with_phase(phase_ + k); }
  PauliString operator-() const { return times_i(2); }

  std::string str() const;
  std::string letters() const;

  friend bool operator==(const PauliString&, const PauliString&) = default;
  /// Orders by (num_sites, x_mask, z_mask, phase).
  friend auto operator<=>(const PauliString& a, const PauliString& b) {
    if (auto c = a.n_ <=> b.n_; c != 0) return c;
    if (auto c = a.x_ <=> b.x_; c != 0) return c;
    if (auto c = a.z_ <=> b.z_; c != 0) return c;
    return a.phase_ <=> b.phase_;
  }

 private:
  int n_ = 0;
  std::uint64_t x_ = 0;
  std::uint64_t z_ = 0;
  int phase_ = 0;
};

PauliString multiply(const PauliString& a, const PauliString& b);
inline PauliString operator*(const PauliString& a, const PauliString& b) { return multiply(a, b); }
bool commutes(const PauliString& a, const PauliString& b);
inline int weight(const PauliString& p) { return p.weight(); }

/// Rewrites p in the tilde letters Z~_l = K_l, X~_l = Z_l (bulk Y~_l =
/// -Z_{l-1} Y_l Z_{l+1}; edges Z~_0 = X_0 Z_1, Z~_{N-1} = Z_{N-2} X_{N-1}).
/// The result is returned as an ordinary PauliString whose letters are
/// read as tilde letters. Requires N >= 2.
PauliString to_cluster_basis(const PauliString& p);
/// Inverse of to_cluster_basis.
PauliString from_cluster_basis(const PauliString& p);

/// Mask-only key used for hashing strings regardless of phase.
struct PauliKey {
  std::uint64_t x = 0;
  std::uint64_t z = 0;
  friend bool operator==(const PauliKey&, const PauliKey&) = default;
};

struct PauliKeyHash {
  std::size_t operator()(const PauliKey& k) const noexcept {
    std::uint64_t h = k.x * 0x9E3779B97F4A7C15ULL ^ (k.z + 0x632BE59BD9B4E019ULL + (k.x << 6) + (k.x >> 2));
    h ^= h >> 31;
    h *= 0xBF58476D1CE4E5B9ULL;
    h ^= h >> 29;
    return static_cast<std::size_t>(h);
  }
};

inline PauliKey key_of(const PauliString& p) { return {p.x_mask(), p.z_mask()}; }

/// A linear combination of phase-free Pauli strings.
///
/// Terms are kept sorted by (x_mask, z_mask) with duplicates merged and
/// exact zeros dropped, so operator== is a structural comparison.
class PauliSum {
 public:
  struct Term {
    cplx coeff;
    PauliString op;  // phase_exp == 0
  };

  PauliSum() = default;
  explicit PauliSum(int num_sites) : n_(num_sites) {}
  PauliSum(const PauliString& p, cplx coeff = 1.0);
  PauliSum(int num_sites, std::initializer_list<std::pair<cplx, PauliString>> terms);

  int num_sites() const { return n_; }
  const std::vector<Term>& terms() const { return terms_; }
  std::size_t size() const { return terms_.size(); }
  bool empty() const { return terms_.empty(); }

  /// Adds c * p, folding p's phase into the coefficient.
  PauliSum& add(cplx c, const PauliString& p);
  PauliSum& operator+=(const PauliSum& o);
  PauliSum& operator-=(const PauliSum& o);
  PauliSum& operator*=(cplx c);

  PauliSum adjoint() const;
  bool is_hermitian(double tol = 1e-12) const;
  /// Coefficient of the phase-free string p (0 if absent).
  cplx coefficient(const PauliString& p) const;
  /// Single term with unit-modulus coefficient, returned as a phased string.
  bool as_single_string(PauliString* out, double tol = 1e-12) const;
  /// Sum of |coeff|^2 (Hilbert-Schmidt norm squared divided by 2^N).
  double norm_sq() const;
  /// Removes terms with |coeff| <= tol.
  PauliSum pruned(double tol) const;
  bool approx_equal(const PauliSum& o, double tol) const;
  std::string str() const;

  friend PauliSum operator+(PauliSum a, const PauliSum& b) { return a += b; }
  friend PauliSum operator-(PauliSum a, const PauliSum& b) { return a -= b; }
  friend PauliSum operator*(PauliSum a, cplx c) { return a *= c; }
  friend PauliSum operator*(cplx c, PauliSum a) { return a *= c; }
  friend PauliSum operator*(const PauliSum& a, const PauliSum& b);
  friend bool operator==(const PauliSum& a, const PauliSum& b);

 private:
  void canonicalize();

  int n_ = 0;
  std::vector<Term> terms_;
};

/// [a, b] = ab - ba.
PauliSum commutator(const PauliSum& a, const PauliSum& b);

}  // namespace dspt

template <>
struct std::hash<dspt::PauliString> {
  std::size_t operator()(const dspt::PauliString& p) const noexcept {
    return dspt::PauliKeyHash{}(dspt::key_of(p)) ^ static_cast<std::size_t>(p.phase_exp());
  }
};

#endif  // DSPT_PAULI_HPP_
