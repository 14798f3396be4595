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

#include "dspt/pauli.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "dspt/errors.hpp"

namespace dspt {

namespace {

constexpr int mod4(int k) { return ((k % 4) + 4) % 4; }

std::uint64_t site_mask(int n) { return n >= 64 ? ~0ULL : ((1ULL << n) - 1); }

const cplx kIPow[4] = {cplx(1, 0), cplx(0, 1), cplx(-1, 0), cplx(0, -1)};

void check_same_n(const PauliString& a, const PauliString& b) {
  if (a.num_sites() != b.num_sites()) {
    throw DimensionError("Pauli strings on " + std::to_string(a.num_sites()) + " and " +
                         std::to_string(b.num_sites()) + " sites");
  }
}

bool key_less(const PauliString& a, const PauliString& b) {
  if (a.x_mask() != b.x_mask()) return a.x_mask() < b.x_mask();
  return a.z_mask() < b.z_mask();
}

}  // namespace

char letter_char(Letter l) {
  switch (l) {
    case Letter::I: return 'I';
    case Letter::X: return 'X';
    case Letter::Y: return 'Y';
    case Letter::Z: return 'Z';
  }
  return '?';
}

PauliString::PauliString(int num_sites) : PauliString(num_sites, 0, 0, 0) {}

PauliString::PauliString(int num_sites, std::uint64_t x_mask, std::uint64_t z_mask, int phase_exp)
    : n_(num_sites), x_(x_mask), z_(z_mask), phase_(mod4(phase_exp)) {
  if (num_sites < 0 || num_sites > kMaxSites) {
    throw DimensionError("PauliString supports 0.." + std::to_string(kMaxSites) + " sites");
  }
  std::uint64_t m = site_mask(num_sites);
  if ((x_mask & ~m) || (z_mask & ~m)) throw DimensionError("Pauli mask has bits beyond N");
}

PauliString PauliString::single(int num_sites, int site, Letter letter) {
  if (site < 0 || site >= num_sites) throw std::out_of_range("site index out of range");
  std::uint64_t b = 1ULL << site;
  bool x = letter == Letter::X || letter == Letter::Y;
  bool z = letter == Letter::Z || letter == Letter::Y;
  return PauliString(num_sites, x ? b : 0, z ? b : 0, 0);
}

PauliString PauliString::from_letters(std::string_view letters, int sign) {
  if (sign != 1 && sign != -1) throw std::invalid_argument("sign must be +1 or -1");
  int n = static_cast<int>(letters.size());
  std::uint64_t x = 0, z = 0;
  for (int l = 0; l < n; ++l) {
    std::uint64_t b = 1ULL << l;
    switch (letters[l]) {
      case 'I': break;
      case 'X': x |= b; break;
      case 'Y': x |= b; z |= b; break;
      case 'Z': z |= b; break;
      default:
        throw std::invalid_argument(std::string("invalid Pauli letter '") + letters[l] + "'");
    }
  }
  return PauliString(n, x, z, sign == 1 ? 0 : 2);
}

PauliString PauliString::parse(std::string_view text) {
  int phase = 0;
  std::size_t pos = 0;
  if (pos < text.size() && (text[pos] == '+' || text[pos] == '-')) {
    if (text[pos] == '-') phase = 2;
    ++pos;
  }
  if (pos < text.size() && text[pos] == 'i') {
    phase += 1;
    ++pos;
  }
  if (pos == text.size()) throw std::invalid_argument("empty Pauli string");
  return from_letters(text.substr(pos)).times_i(phase);
}

cplx PauliString::phase() const { return kIPow[phase_]; }

Letter PauliString::letter(int site) const {
  if (site < 0 || site >= n_) throw std::out_of_range("site index out of range");
  bool x = (x_ >> site) & 1, z = (z_ >> site) & 1;
  if (x && z) return Letter::Y;
  if (x) return Letter::X;
  if (z) return Letter::Z;
  return Letter::I;
}

PauliString PauliString::adjoint() const { return PauliString(n_, x_, z_, -phase_); }

PauliString PauliString::with_phase(int phase_exp) const { return PauliString(n_, x_, z_, phase_exp); }

std::string PauliString::letters() const {
  std::string s(static_cast<std::size_t>(n_), 'I');
  for (int l = 0; l < n_; ++l) s[l] = letter_char(letter(l));
  return s;
}

std::string PauliString::str() const {
  static const char* kPrefix[4] = {"+", "+i", "-", "-i"};
  return kPrefix[phase_] + letters();
}

PauliString multiply(const PauliString& a, const PauliString& b) {
  check_same_n(a, b);
  std::uint64_t x = a.x_mask() ^ b.x_mask();
  std::uint64_t z = a.z_mask() ^ b.z_mask();
  // Write each string as i^{k+y} X^x Z^z; moving Z^{z_a} past X^{x_b} costs (-1)^{|z_a & x_b|}.
  int k = a.phase_exp() + b.phase_exp() + a.y_count() + b.y_count() +
          2 * std::popcount(a.z_mask() & b.x_mask()) - std::popcount(x & z);
  return PauliString(a.num_sites(), x, z, k);
}

bool commutes(const PauliString& a, const PauliString& b) {
  check_same_n(a, b);
  int s = std::popcount(a.x_mask() & b.z_mask()) + std::popcount(a.z_mask() & b.x_mask());
  return (s & 1) == 0;
}

namespace {

// Applies a homomorphism defined by the images of X_l and Z_l.
template <typename ImageX, typename ImageZ>
PauliString map_letters(const PauliString& p, ImageX image_x, ImageZ image_z) {
  int n = p.num_sites();
  PauliString out(n);
  out = out.times_i(p.phase_exp());
  for (int l = 0; l < n; ++l) {
    switch (p.letter(l)) {
      case Letter::I: break;
      case Letter::X: out = out * image_x(l); break;
      case Letter::Z: out = out * image_z(l); break;
      case Letter::Y: out = out * (image_x(l) * image_z(l)).times_i(1); break;
    }
  }
  return out;
}

// Z_{l-1} A_l Z_{l+1} with out-of-range neighbours dropped.
PauliString dressed(int n, int l, Letter centre, Letter neighbour) {
  PauliString s = PauliString::single(n, l, centre);
  if (l > 0) s = s * PauliString::single(n, l - 1, neighbour);
  if (l + 1 < n) s = s * PauliString::single(n, l + 1, neighbour);
  return s;
}

}  // namespace

PauliString to_cluster_basis(const PauliString& p) {
  int n = p.num_sites();
  if (n < 2) throw DimensionError("cluster basis needs at least 2 sites");
  // Z_l = X~_l and X_l = X~_{l-1} Z~_l X~_{l+1}.
  return map_letters(
      p, [n](int l) { return dressed(n, l, Letter::Z, Letter::X); },
      [n](int l) { return PauliString::single(n, l, Letter::X); });
}

PauliString from_cluster_basis(const PauliString& p) {
  int n = p.num_sites();
  if (n < 2) throw DimensionError("cluster basis needs at least 2 sites");
  // X~_l = Z_l and Z~_l = K_l.
  return map_letters(
      p, [n](int l) { return PauliString::single(n, l, Letter::Z); },
      [n](int l) { return dressed(n, l, Letter::X, Letter::Z); });
}

// ---------------------------------------------------------------------------
// PauliSum

PauliSum::PauliSum(const PauliString& p, cplx coeff) : n_(p.num_sites()) { add(coeff, p); }

PauliSum::PauliSum(int num_sites, std::initializer_list<std::pair<cplx, PauliString>> terms)
    : n_(num_sites) {
  for (const auto& [c, p] : terms) add(c, p);
}

PauliSum& PauliSum::add(cplx c, const PauliString& p) {
  if (p.num_sites() != n_) throw DimensionError("PauliSum term has wrong site count");
  c *= p.phase();
  if (c == cplx(0.0)) return *this;
  PauliString s = p.stripped();
  auto it = std::lower_bound(terms_.begin(), terms_.end(), s,
                             [](const Term& t, const PauliString& q) { return key_less(t.op, q); });
  if (it != terms_.end() && it->op == s) {
    it->coeff += c;
    if (it->coeff == cplx(0.0)) terms_.erase(it);
  } else {
    terms_.insert(it, Term{c, s});
  }
  return *this;
}

void PauliSum::canonicalize() {
  std::sort(terms_.begin(), terms_.end(), [](const Term& a, const Term& b) { return key_less(a.op, b.op); });
  std::vector<Term> merged;
  merged.reserve(terms_.size());
  for (auto& t : terms_) {
    if (!merged.empty() && merged.back().op == t.op) {
      merged.back().coeff += t.coeff;
    } else {
      merged.push_back(t);
    }
  }
  merged.erase(std::remove_if(merged.begin(), merged.end(), [](const Term& t) { return t.coeff == cplx(0.0); }),
               merged.end());
  terms_ = std::move(merged);
}

PauliSum& PauliSum::operator+=(const PauliSum& o) {
  if (o.n_ != n_) throw DimensionError("PauliSum site counts differ");
  terms_.insert(terms_.end(), o.terms_.begin(), o.terms_.end());
  canonicalize();
  return *this;
}

PauliSum& PauliSum::operator-=(const PauliSum& o) { return *this += o * cplx(-1.0); }

PauliSum& PauliSum::operator*=(cplx c) {
  for (auto& t : terms_) t.coeff *= c;
  canonicalize();
  return *this;
}

PauliSum operator*(const PauliSum& a, const PauliSum& b) {
  if (a.n_ != b.n_) throw DimensionError("PauliSum site counts differ");
  PauliSum out(a.n_);
  out.terms_.reserve(a.size() * b.size());
  for (const auto& ta : a.terms_) {
    for (const auto& tb : b.terms_) {
      PauliString p = ta.op * tb.op;
      out.terms_.push_back({ta.coeff * tb.coeff * p.phase(), p.stripped()});
    }
  }
  out.canonicalize();
  return out;
}

bool operator==(const PauliSum& a, const PauliSum& b) {
  if (a.n_ != b.n_ || a.terms_.size() != b.terms_.size()) return false;
  for (std::size_t i = 0; i < a.terms_.size(); ++i) {
    if (a.terms_[i].op != b.terms_[i].op || a.terms_[i].coeff != b.terms_[i].coeff) return false;
  }
  return true;
}

PauliSum PauliSum::adjoint() const {
  PauliSum out = *this;
  for (auto& t : out.terms_) t.coeff = std::conj(t.coeff);
  return out;
}

bool PauliSum::is_hermitian(double tol) const {
  return std::all_of(terms_.begin(), terms_.end(), [tol](const Term& t) { return std::abs(t.coeff.imag()) <= tol; });
}

cplx PauliSum::coefficient(const PauliString& p) const {
  PauliString s = p.stripped();
  auto it = std::lower_bound(terms_.begin(), terms_.end(), s,
                             [](const Term& t, const PauliString& q) { return key_less(t.op, q); });
  if (it != terms_.end() && it->op == s) return it->coeff;
  return 0.0;
}

bool PauliSum::as_single_string(PauliString* out, double tol) const {
  if (terms_.size() != 1) return false;
  cplx c = terms_[0].coeff;
  for (int k = 0; k < 4; ++k) {
    if (std::abs(c - kIPow[k]) <= tol) {
      if (out) *out = terms_[0].op.with_phase(k);
      return true;
    }
  }
  return false;
}

double PauliSum::norm_sq() const {
  double s = 0;
  for (const auto& t : terms_) s += std::norm(t.coeff);
  return s;
}

PauliSum PauliSum::pruned(double tol) const {
  PauliSum out(n_);
  for (const auto& t : terms_) {
    if (std::abs(t.coeff) > tol) out.terms_.push_back(t);
  }
  return out;
}

bool PauliSum::approx_equal(const PauliSum& o, double tol) const {
  return (*this - o).pruned(tol).empty();
}

std::string PauliSum::str() const {
  if (terms_.empty()) return "0";
  std::ostringstream os;
  os.precision(12);
  for (std::size_t i = 0; i < terms_.size(); ++i) {
    if (i) os << " + ";
    os << "(" << terms_[i].coeff.real() << (terms_[i].coeff.imag() < 0 ? "" : "+") << terms_[i].coeff.imag()
       << "j)" << terms_[i].op.letters();
  }
  return os.str();
}

PauliSum commutator(const PauliSum& a, const PauliSum& b) { return a * b - b * a; }

}  // namespace dspt
