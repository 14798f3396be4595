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

#include "dspt/spectral.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <map>
#include <stdexcept>
#include <string>
#include <unordered_map>

#include "dspt/errors.hpp"
#include "dspt/opspace.hpp"

namespace dspt {

namespace {

void require_ziz_unperturbed(const ChainModel& m) {
  if (m.jump_kind() != JumpKind::ZIZ) throw UnsupportedModelError("fragmentation needs ZIZ jumps");
  if (!m.is_unperturbed()) throw UnsupportedModelError("fragmentation needs V = 0");
}

std::uint64_t low_mask(int n) { return n >= 64 ? ~0ULL : (1ULL << n) - 1; }

// Bits 1..n-2: interior sites carrying a cluster operator or a jump centre.
std::uint64_t interior_mask(int n) { return low_mask(n) & ~1ULL & ~(1ULL << (n - 1)); }

std::uint64_t active_bits(std::uint64_t x, std::uint64_t z, int n) {
  return (z ^ (x << 1) ^ (x >> 1)) & interior_mask(n);
}

int jump_count_bits(std::uint64_t x, int n) {
  // Jump centred on l anticommutes iff x_{l-1} xor x_{l+1}.
  return std::popcount((x ^ (x >> 2)) & low_mask(n - 2));
}

}  // namespace

std::uint64_t active_mask(const PauliString& s) { return active_bits(s.x_mask(), s.z_mask(), s.num_sites()); }

int anticommuting_jumps(const PauliString& s) { return jump_count_bits(s.x_mask(), s.num_sites()); }

Fragment fragment_of(const ChainModel& m, const PauliString& seed) {
  require_ziz_unperturbed(m);
  const int n = m.num_sites();
  if (seed.num_sites() != n) throw DimensionError("seed has the wrong site count");
  Fragment f;
  std::uint64_t act = active_mask(seed);
  for (int p = 0; p < n; ++p) {
    if (act >> p & 1) f.active_sites.push_back(p);
  }
  const std::size_t dim = std::size_t{1} << f.active_sites.size();
  f.basis.reserve(dim);
  for (std::size_t s = 0; s < dim; ++s) {
    PauliString b = seed;
    for (std::size_t k = 0; k < f.active_sites.size(); ++k) {
      if (s >> k & 1) b = ops::cluster(n, f.active_sites[k]).times_i(3) * b;
    }
    f.basis.push_back(b);
  }
  std::unordered_map<PauliKey, int, PauliKeyHash> index;
  for (std::size_t i = 0; i < dim; ++i) index.emplace(key_of(f.basis[i]), static_cast<int>(i));
  PauliLiouvillian L = PauliLiouvillian::from_model(m);
  f.action = Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
  std::vector<PauliSum::Term> buf;
  for (std::size_t j = 0; j < dim; ++j) {
    buf.clear();
    L.apply(f.basis[j].stripped(), Picture::Schrodinger, buf);
    for (const auto& t : buf) {
      auto it = index.find(key_of(t.op));
      if (it == index.end()) throw NumericalError("fragment is not closed under the generator");
      const auto i = static_cast<std::size_t>(it->second);
      f.action(it->second, static_cast<Eigen::Index>(j)) += t.coeff * f.basis[j].phase() / f.basis[i].phase();
    }
  }
  return f;
}

cplx lambda1(int alpha, double kappa, double J) {
  if (alpha != 1 && alpha != 2) throw std::invalid_argument("alpha must be 1 or 2");
  const double ak = alpha * kappa;
  return -2.0 * ak + 2.0 * std::sqrt(cplx(ak * ak - J * J));
}

cplx lambda2(double kappa, double J) {
  const double j2 = J * J, k2 = kappa * kappa;
  const double inner = std::sqrt(j2 * j2 - j2 * k2 + k2 * k2) - j2 + k2;
  return -4.0 * kappa + 2.0 * std::sqrt(2.0) * std::sqrt(cplx(inner));
}

PauliSum eigenmode_Wp(const ChainModel& m, int p, int alpha) {
  if (m.jump_kind() != JumpKind::ZIZ) throw UnsupportedModelError("eigenmodes are defined for ZIZ jumps");
  const int n = m.num_sites();
  if (p < 1 || p > n - 2) throw std::invalid_argument("active site must be interior");
  const int expected = (p == 1 || p == n - 2) ? 1 : 2;
  if (alpha != expected) {
    throw std::invalid_argument("alpha " + std::to_string(alpha) + " does not match site " + std::to_string(p));
  }
  const PauliString a = PauliString::single(n, p, Letter::Z);
  const cplx lam = lambda1(alpha, m.kappa(), m.J());
  PauliSum w(a);
  w.add(cplx(0, 1) * lam / (2.0 * m.J()), ops::cluster(n, p) * a);
  return w;
}

PauliSum eigenmode_Wpq(const ChainModel& m, int p, int q) {
  if (m.jump_kind() != JumpKind::ZIZ) throw UnsupportedModelError("eigenmodes are defined for ZIZ jumps");
  const int n = m.num_sites();
  if (n < 6) throw std::invalid_argument("two-site eigenmodes need N >= 6");
  int pb, qb;
  if (std::min(p, q) == 1 && std::max(p, q) == 3) {
    pb = 1, qb = 3;
  } else if (std::min(p, q) == n - 4 && std::max(p, q) == n - 2) {
    pb = n - 2, qb = n - 4;
  } else {
    throw std::invalid_argument("active sites must be {1, 3} or {N-4, N-2}");
  }
  const double k = m.kappa(), J = m.J();
  const double lam = lambda2(k, J).real();
  const cplx u = cplx(0, 1) * (8 * k + lam) * lam / (4 * J * (6 * k + lam));
  const cplx v = cplx(0, 1) * (4 * k + lam) * lam / (4 * J * (6 * k + lam));
  const cplx w = lam / (4 * k + lam);
  const PauliString a = PauliString::single(n, pb, Letter::Z) * PauliString::single(n, qb, Letter::Z);
  const PauliString kp = ops::cluster(n, pb), kq = ops::cluster(n, qb);
  PauliSum out(a);
  out.add(u, kp * a);
  out.add(v, kq * a);
  out.add(w, kp * kq * a);
  return out;
}

Eigen::MatrixXd fragment_matrix(int num_active, std::span<const int> jump_counts, double kappa, double J) {
  const auto dim = static_cast<Eigen::Index>(jump_counts.size());
  if (dim != (Eigen::Index{1} << num_active)) throw DimensionError("fragment needs 2^n jump counts");
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(dim, dim);
  for (Eigen::Index s = 0; s < dim; ++s) {
    a(s, s) = -4.0 * kappa * jump_counts[static_cast<std::size_t>(s)];
    for (int k = 0; k < num_active; ++k) {
      Eigen::Index t = s ^ (Eigen::Index{1} << k);
      a(t, s) = (s >> k & 1) ? -2.0 * J : 2.0 * J;
    }
  }
  return a;
}

std::vector<FragmentClass> enumerate_fragment_classes(int num_sites) {
  const int n = num_sites;
  if (n < 3) throw std::invalid_argument("enumeration needs N >= 3");
  if (n > kEnumerationCap) {
    throw CapacityError("exhaustive enumeration is capped at N = " + std::to_string(kEnumerationCap));
  }
  const std::uint64_t total = 1ULL << (2 * n);
  std::vector<bool> seen(total, false);
  std::map<std::pair<int, std::vector<int>>, std::size_t> lookup;
  std::vector<FragmentClass> out;
  std::vector<int> sites;
  std::vector<int> counts;
  for (std::uint64_t idx = 0; idx < total; ++idx) {
    if (seen[idx]) continue;
    const std::uint64_t x0 = idx & low_mask(n), z0 = idx >> n;
    const std::uint64_t act = active_bits(x0, z0, n);
    sites.clear();
    for (int p = 0; p < n; ++p) {
      if (act >> p & 1) sites.push_back(p);
    }
    const std::size_t dim = std::size_t{1} << sites.size();
    counts.assign(dim, 0);
    for (std::size_t s = 0; s < dim; ++s) {
      std::uint64_t x = x0, z = z0;
      for (std::size_t k = 0; k < sites.size(); ++k) {
        if (!(s >> k & 1)) continue;
        const int p = sites[k];
        x ^= 1ULL << p;
        z ^= (1ULL << (p - 1)) | (1ULL << (p + 1));
      }
      seen[x | (z << n)] = true;
      counts[s] = jump_count_bits(x, n);
    }
    auto key = std::make_pair(static_cast<int>(sites.size()), counts);
    auto [it, inserted] = lookup.try_emplace(std::move(key), out.size());
    if (inserted) {
      FragmentClass c;
      c.num_active = static_cast<int>(sites.size());
      c.jump_counts = counts;
      c.representative = PauliString(n, x0, z0);
      out.push_back(std::move(c));
    }
    ++out[it->second].multiplicity;
  }
  return out;
}

double slowest_decay(const Eigen::MatrixXd& a, double zero_tol) {
  Eigen::VectorXcd ev;
  Eigen::EigenSolver<Eigen::MatrixXd> es;
  es.setMaxIterations(static_cast<Eigen::Index>(100 * std::max<Eigen::Index>(a.rows(), 1)));
  es.compute(a, false);
  if (es.info() == Eigen::Success) {
    ev = es.eigenvalues();
  } else {
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> ces(a.cast<cplx>(), false);
    if (ces.info() != Eigen::Success) throw NumericalError("fragment eigensolve did not converge");
    ev = ces.eigenvalues();
  }
  double best = std::numeric_limits<double>::infinity();
  for (Eigen::Index i = 0; i < ev.size(); ++i) {
    if (std::abs(ev[i]) < zero_tol) continue;
    best = std::min(best, std::abs(ev[i].real()));
  }
  return best;
}

std::string_view gap_branch_name(GapBranch b) {
  return b == GapBranch::Lambda1Alpha2 ? "lambda1_alpha2" : "lambda2";
}

GapResult analytic_gap(double kappa, double J) {
  GapResult r;
  r.kappa_over_J = kappa / J;
  const double g1 = std::abs(lambda1(2, kappa, J).real());
  const double g2 = std::abs(lambda2(kappa, J).real());
  r.analytic_gap = std::min(g1, g2);
  r.dominant_branch = g1 <= g2 ? GapBranch::Lambda1Alpha2 : GapBranch::Lambda2;
  return r;
}

double SubsectorGaps::global() const {
  double g = std::numeric_limits<double>::infinity();
  for (double v : gap) g = std::min(g, v);
  return g;
}

SubsectorGaps subsector_gaps(const ChainModel& m, std::span<const FragmentClass> classes) {
  require_ziz_unperturbed(m);
  const double zero_tol = 1e-10 * (m.kappa() > 0 ? m.kappa() : m.J());
  SubsectorGaps out;
  out.gap.assign(static_cast<std::size_t>(std::max(m.num_sites() - 1, 1)), std::numeric_limits<double>::infinity());
  for (const auto& c : classes) {
    const double g = slowest_decay(fragment_matrix(c.num_active, c.jump_counts, m.kappa(), m.J()), zero_tol);
    auto& slot = out.gap.at(static_cast<std::size_t>(c.num_active));
    slot = std::min(slot, g);
  }
  return out;
}

double verify_gap_numeric(const ChainModel& m) {
  require_ziz_unperturbed(m);
  auto classes = enumerate_fragment_classes(m.num_sites());
  return subsector_gaps(m, classes).global();
}

std::vector<GapResult> dissipative_gap(const ChainModel& m, std::span<const double> kappa_over_J,
                                       bool with_numeric) {
  require_ziz_unperturbed(m);
  std::vector<FragmentClass> classes;
  if (with_numeric) classes = enumerate_fragment_classes(m.num_sites());
  std::vector<GapResult> out;
  out.reserve(kappa_over_J.size());
  for (double x : kappa_over_J) {
    GapResult r = analytic_gap(x * m.J(), m.J());
    if (with_numeric) r.numeric_gap = subsector_gaps(m.with_kappa(x * m.J()), classes).global();
    out.push_back(r);
  }
  return out;
}

double gap_branch_crossing(double lo, double hi, double tol) {
  auto f = [](double x) { return std::abs(lambda1(2, x, 1.0).real()) - std::abs(lambda2(x, 1.0).real()); };
  double flo = f(lo);
  if (flo * f(hi) > 0) throw std::invalid_argument("bracket does not contain the branch crossing");
  while (hi - lo > tol) {
    double mid = 0.5 * (lo + hi);
    double fm = f(mid);
    if ((fm > 0) == (flo > 0)) {
      lo = mid, flo = fm;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

DegeneracyReport detect_exceptional_point(const Eigen::MatrixXcd& a, double collision_tol, double gram_tol) {
  DegeneracyReport r;
  const Eigen::Index d = a.rows();
  if (d < 2) {
    r.min_separation = std::numeric_limits<double>::infinity();
    r.geometric_multiplicity = 1;
    return r;
  }
  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(a);
  if (es.info() != Eigen::Success) throw NumericalError("eigensolve did not converge");
  const auto& ev = es.eigenvalues();
  double scale = 1.0;
  for (Eigen::Index i = 0; i < d; ++i) scale = std::max(scale, std::abs(ev[i]));
  Eigen::Index bi = 0, bj = 1;
  r.min_separation = std::numeric_limits<double>::infinity();
  for (Eigen::Index i = 0; i < d; ++i) {
    for (Eigen::Index j = i + 1; j < d; ++j) {
      double s = std::abs(ev[i] - ev[j]);
      if (s < r.min_separation) r.min_separation = s, bi = i, bj = j;
    }
  }
  Eigen::VectorXcd vi = es.eigenvectors().col(bi).normalized();
  Eigen::VectorXcd vj = es.eigenvectors().col(bj).normalized();
  r.gram_det = std::max(0.0, 1.0 - std::norm(vi.dot(vj)));
  const cplx mean = 0.5 * (ev[bi] + ev[bj]);
  Eigen::MatrixXcd shifted = a - mean * Eigen::MatrixXcd::Identity(d, d);
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(shifted);
  const auto& sv = svd.singularValues();
  for (Eigen::Index i = 0; i < sv.size(); ++i) {
    if (sv[i] < 1e-6 * scale) ++r.geometric_multiplicity;
  }
  r.exceptional = r.min_separation <= collision_tol * scale && r.gram_det < gram_tol;
  return r;
}

}  // namespace dspt
