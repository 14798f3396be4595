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


#include "dspt/qubits.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <string>

#include <Eigen/Eigenvalues>

#include "dspt/errors.hpp"

namespace dspt {

namespace {

// Pi rotations as (anticommutes with Sigma^x, anticommutes with Sigma^z).
int axis_bits(Axis a) {
  switch (a) {
    case Axis::None: return 0;
    case Axis::X: return 1;  // flips z only
    case Axis::Z: return 2;  // flips x only
    case Axis::Y: return 3;
  }
  return 0;
}

Axis axis_from_bits(int b) {
  static constexpr Axis table[4] = {Axis::None, Axis::X, Axis::Z, Axis::Y};
  return table[b & 3];
}

int flip_bits(const PauliString& p, Side side) {
  auto t = edge_triple(p.num_sites(), side);
  int anti_x = commutes(p, t[0]) ? 0 : 1;
  int anti_z = commutes(p, t[2]) ? 0 : 1;
  // Anticommuting with z only is a pi rotation about x, and vice versa.
  return (anti_x << 1) | anti_z;
}

const Eigen::Matrix2cd& sigma(int i) {
  static const std::array<Eigen::Matrix2cd, 4> s = [] {
    std::array<Eigen::Matrix2cd, 4> m;
    m[0] << 1, 0, 0, 1;
    m[1] << 0, 1, 1, 0;
    m[2] << 0, cplx(0, -1), cplx(0, 1), 0;
    m[3] << 1, 0, 0, -1;
    return m;
  }();
  return s[static_cast<std::size_t>(i)];
}

// Kronecker product with a as the first (high) factor.
Eigen::Matrix4cd kron2(const Eigen::Matrix2cd& a, const Eigen::Matrix2cd& b) {
  Eigen::Matrix4cd out;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) out.block<2, 2>(2 * i, 2 * j) = a(i, j) * b;
  return out;
}

CMat psd_sqrt(const CMat& m) {
  Eigen::SelfAdjointEigenSolver<CMat> es(m);
  Eigen::VectorXd ev = es.eigenvalues().cwiseMax(0.0).cwiseSqrt();
  return es.eigenvectors() * ev.asDiagonal() * es.eigenvectors().adjoint();
}

void check_density(const CMat& m, double tol, const char* name) {
  if (m.rows() != m.cols()) throw DimensionError(std::string(name) + " is not square");
  if ((m - m.adjoint()).norm() > tol * std::max(1.0, m.norm())) {
    throw std::invalid_argument(std::string(name) + " is not Hermitian");
  }
  if (std::abs(m.trace() - cplx(1.0)) > tol) throw std::invalid_argument(std::string(name) + " does not have unit trace");
  Eigen::SelfAdjointEigenSolver<CMat> es(0.5 * (m + m.adjoint()), Eigen::EigenvaluesOnly);
  if (es.eigenvalues().minCoeff() < -tol) throw std::invalid_argument(std::string(name) + " is not positive semidefinite");
}

}  // namespace

std::string_view axis_name(Axis a) {
  switch (a) {
    case Axis::None: return "none";
    case Axis::X: return "x";
    case Axis::Y: return "y";
    case Axis::Z: return "z";
  }
  return "?";
}

double BlochVector::norm() const { return std::sqrt(x * x + y * y + z * z); }

std::array<PauliString, 3> edge_triple(int n, Side side) {
  if (side == Side::Left) return {ops::edge_left(n, 0), ops::edge_left(n, 1), ops::edge_left(n, 2)};
  return {ops::edge_right(n, 0), ops::edge_right(n, 1), ops::edge_right(n, 2)};
}

BlochVector weak_qubit_bloch(const CVec& psi, Side side) {
  int n = std::countr_zero(static_cast<std::uint64_t>(psi.size()));
  auto t = edge_triple(n, side);
  double nrm = psi.squaredNorm();
  return {expectation(t[0], psi).real() / nrm, expectation(t[1], psi).real() / nrm,
          expectation(t[2], psi).real() / nrm};
}

BlochVector weak_qubit_bloch(const StateVector& psi, Side side) { return weak_qubit_bloch(psi.amplitudes(), side); }

std::vector<NamedObservable> edge_observables(int n) {
  std::vector<NamedObservable> out;
  const char* axes[3] = {"Sx", "Sy", "Sz"};
  for (Side s : {Side::Left, Side::Right}) {
    auto t = edge_triple(n, s);
    for (int a = 0; a < 3; ++a) {
      out.push_back({std::string(axes[a]) + (s == Side::Left ? "L" : "R"), PauliSum(t[static_cast<std::size_t>(a)])});
    }
  }
  return out;
}

Axis jump_flip_rule(const PauliString& jump, Side side) { return axis_from_bits(flip_bits(jump, side)); }

Axis compose(Axis a, Axis b) { return axis_from_bits(axis_bits(a) ^ axis_bits(b)); }

BlochVector rotate_pi(const BlochVector& v, Axis axis) {
  switch (axis) {
    case Axis::None: return v;
    case Axis::X: return {v.x, -v.y, -v.z};
    case Axis::Y: return {-v.x, v.y, -v.z};
    case Axis::Z: return {-v.x, -v.y, v.z};
  }
  return v;
}

RestorationLog::RestorationLog(std::span<const PauliString> jump_strings, Side side) {
  for (const auto& p : jump_strings) flips_.push_back(jump_flip_rule(p, side));
}

Axis RestorationLog::net_until(const TrajectoryRecord& rec, double t) const {
  Axis net = Axis::None;
  for (const auto& e : rec.jump_events) {
    if (e.time > t) break;
    if (e.channel < 0 || static_cast<std::size_t>(e.channel) >= flips_.size()) {
      throw std::out_of_range("jump channel outside the monitored jump list");
    }
    net = compose(net, flips_[static_cast<std::size_t>(e.channel)]);
  }
  return net;
}

std::vector<BlochVector> bloch_series(const TrajectoryRecord& rec, std::array<int, 3> idx) {
  std::vector<BlochVector> out;
  out.reserve(rec.values.size());
  for (const auto& row : rec.values) {
    out.push_back({row.at(static_cast<std::size_t>(idx[0])), row.at(static_cast<std::size_t>(idx[1])),
                   row.at(static_cast<std::size_t>(idx[2]))});
  }
  return out;
}

std::vector<BlochVector> restore(const TrajectoryRecord& rec, std::span<const PauliString> jump_strings, Side side,
                                 std::array<int, 3> idx) {
  RestorationLog log(jump_strings, side);
  auto raw = bloch_series(rec, idx);
  // Walk the jump log once alongside the sample grid.
  Axis net = Axis::None;
  std::size_t next = 0;
  for (std::size_t k = 0; k < raw.size(); ++k) {
    double t = rec.sample_times[k];
    while (next < rec.jump_events.size() && rec.jump_events[next].time <= t) {
      int ch = rec.jump_events[next].channel;
      if (ch < 0 || static_cast<std::size_t>(ch) >= log.channel_flips().size()) {
        throw std::out_of_range("jump channel outside the monitored jump list");
      }
      net = compose(net, log.channel_flips()[static_cast<std::size_t>(ch)]);
      ++next;
    }
    raw[k] = rotate_pi(raw[k], net);
  }
  return raw;
}

std::vector<PauliString> jump_strings(const ChainModel& m) {
  std::vector<PauliString> out;
  for (const auto& f : build_jumps(m)) {
    if (f.size() != 1) throw UnsupportedModelError("restoration is defined for Pauli-string jumps only");
    out.push_back(f.terms()[0].op.with_phase(0));
  }
  return out;
}

Eigen::Matrix2cd qubit_density(const BlochVector& v) {
  return 0.5 * (sigma(0) + v.x * sigma(1) + v.y * sigma(2) + v.z * sigma(3));
}

Eigen::Matrix4cd edge_pair_density(const CVec& psi) {
  int n = std::countr_zero(static_cast<std::uint64_t>(psi.size()));
  auto l = edge_triple(n, Side::Left);
  auto r = edge_triple(n, Side::Right);
  double nrm = psi.squaredNorm();
  Eigen::Matrix4cd rho = Eigen::Matrix4cd::Zero();
  for (int i = 0; i < 4; ++i) {
    for (int j = 0; j < 4; ++j) {
      PauliString p(n);
      if (i > 0) p = p * l[static_cast<std::size_t>(i - 1)];
      if (j > 0) p = p * r[static_cast<std::size_t>(j - 1)];
      double d = expectation(p, psi).real() / nrm;
      rho += d * kron2(sigma(i), sigma(j));
    }
  }
  return 0.25 * rho;
}

double fidelity(const CMat& rho, const CMat& sigma_m, double tol) {
  if (rho.rows() != sigma_m.rows()) throw DimensionError("fidelity operands differ in dimension");
  check_density(rho, tol, "rho");
  check_density(sigma_m, tol, "sigma");
  CMat sr = psd_sqrt(0.5 * (rho + rho.adjoint()));
  CMat m = sr * sigma_m * sr;
  Eigen::SelfAdjointEigenSolver<CMat> es(0.5 * (m + m.adjoint()), Eigen::EigenvaluesOnly);
  double s = es.eigenvalues().cwiseMax(0.0).cwiseSqrt().sum();
  return std::clamp(s * s, 0.0, 1.0);
}

PauliString strong_pair_operator(int n, int i, int j) {
  PauliString p(n);
  if (i > 0) p = p * ops::strong_odd(n, i - 1);
  if (j > 0) p = p * ops::strong_even(n, j - 1);
  return p;
}

Eigen::Matrix4cd StrongQubitState::density() const {
  Eigen::Matrix4cd rho = Eigen::Matrix4cd::Zero();
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) rho += d(i, j) * kron2(sigma(i), sigma(j));
  return 0.25 * rho;
}

StrongQubitState strong_qubit_readout(const CMat& rho, int n) {
  StrongQubitState s;
  for (int i = 0; i < 4; ++i) {
    for (int j = 0; j < 4; ++j) s.d(i, j) = trace_product(strong_pair_operator(n, i, j), rho).real();
  }
  return s;
}

StrongQubitState strong_qubit_readout(const DensityMatrix& rho) {
  return strong_qubit_readout(rho.matrix(), rho.num_sites());
}

std::vector<Gate> logical_basis_transform(int n) {
  if (n < 4 || n % 2 != 0) throw std::invalid_argument("logical basis transform needs even N >= 4");
  std::vector<Gate> g;
  for (int t = 1; t <= n - 3; t += 2) g.push_back({Gate::Kind::CX, n - 1, t});
  g.push_back({Gate::Kind::Swap, n - 1, 1});
  for (int t = 2; t <= n - 2; t += 2) g.push_back({Gate::Kind::CX, 0, t});
  return g;
}

PauliString conjugate(std::span<const Gate> gates, const PauliString& p) {
  // A string with phase k and y letters Y equals i^(k+y) prod_s X_s^x Z_s^z;
  // its image is the same ordered product of the letter images.
  PauliString out = p;
  for (const auto& g : gates) {
    const std::uint64_t a = 1ULL << g.a, b = 1ULL << g.b;
    if (g.kind == Gate::Kind::Swap) {
      auto swap_bits = [&](std::uint64_t v) {
        bool va = v & a, vb = v & b;
        v &= ~(a | b);
        if (va) v |= b;
        if (vb) v |= a;
        return v;
      };
      out = PauliString(p.num_sites(), swap_bits(out.x_mask()), swap_bits(out.z_mask()), out.phase_exp());
      continue;
    }
    // CX: X_c -> X_c X_t, Z_t -> Z_c Z_t. Conjugate letter by letter.
    PauliString res(p.num_sites());
    res = res.with_phase(out.phase_exp() + out.y_count());
    for (int s = 0; s < p.num_sites(); ++s) {
      std::uint64_t bit = 1ULL << s;
      if (out.x_mask() & bit) {
        PauliString xs = PauliString::single(p.num_sites(), s, Letter::X);
        if (bit == a) xs = xs * PauliString::single(p.num_sites(), g.b, Letter::X);
        res = res * xs;
      }
      if (out.z_mask() & bit) {
        PauliString zs = PauliString::single(p.num_sites(), s, Letter::Z);
        if (bit == b) zs = PauliString::single(p.num_sites(), g.a, Letter::Z) * zs;
        res = res * zs;
      }
    }
    out = res;
  }
  return out;
}

CMat circuit_unitary(int n, std::span<const Gate> gates) {
  if (n > kDenseOperatorCap) throw CapacityError("dense circuit limited to N <= " + std::to_string(kDenseOperatorCap));
  const std::size_t dim = std::size_t{1} << n;
  CMat u = CMat::Identity(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
  for (const auto& g : gates) {
    const std::size_t a = std::size_t{1} << g.a, b = std::size_t{1} << g.b;
    CMat next = CMat::Zero(u.rows(), u.cols());
    for (std::size_t s = 0; s < dim; ++s) {
      std::size_t t = s;
      if (g.kind == Gate::Kind::CX) {
        if (s & a) t ^= b;
      } else if (((s & a) != 0) != ((s & b) != 0)) {
        t ^= a | b;
      }
      next.row(static_cast<Eigen::Index>(t)) = u.row(static_cast<Eigen::Index>(s));
    }
    u = std::move(next);
  }
  return u;
}

SyndromeDecoder::SyndromeDecoder(int n, std::span<const PauliString> jumps, Side side, int max_weight)
    : n_(n), side_(side) {
  const std::size_t L = jumps.size();
  if (L == 0 || L > 64) throw std::invalid_argument("syndrome decoder needs between 1 and 64 jump strings");
  if (max_weight < 1) throw std::invalid_argument("max_weight must be at least 1");
  std::vector<std::uint64_t> syn(L);
  std::vector<int> eff(L);
  for (std::size_t l = 0; l < L; ++l) {
    if (jumps[l].num_sites() != n) throw DimensionError("jump string has the wrong site count");
    syn[l] = syndrome_of(jumps[l]);
    eff[l] = flip_bits(jumps[l], side);
  }
  // Row spaces over GF(2): effect rows must lie in the span of syndrome rows.
  auto rank = [](std::vector<std::uint64_t> rows) {
    int r = 0;
    for (int bit = 63; bit >= 0; --bit) {
      auto it = std::find_if(rows.begin() + r, rows.end(), [bit](std::uint64_t v) { return (v >> bit) & 1; });
      if (it == rows.end()) continue;
      std::iter_swap(rows.begin() + r, it);
      for (std::size_t i = 0; i < rows.size(); ++i) {
        if (static_cast<int>(i) != r && ((rows[i] >> bit) & 1)) rows[i] ^= rows[static_cast<std::size_t>(r)];
      }
      ++r;
    }
    return r;
  };
  std::vector<std::uint64_t> srows, arows;
  for (int k = 0; k + 2 < n; ++k) {
    std::uint64_t row = 0;
    for (std::size_t l = 0; l < L; ++l)
      if ((syn[l] >> k) & 1) row |= 1ULL << l;
    srows.push_back(row);
  }
  arows = srows;
  for (int b = 0; b < 2; ++b) {
    std::uint64_t row = 0;
    for (std::size_t l = 0; l < L; ++l)
      if ((eff[l] >> b) & 1) row |= 1ULL << l;
    arows.push_back(row);
  }
  global_ok_ = rank(srows) == rank(arows);

  // Minimal-weight table.
  std::unordered_map<std::uint64_t, int> best_weight;
  std::unordered_map<std::uint64_t, bool> ambiguous;
  table_[0] = Axis::None;
  best_weight[0] = 0;
  std::vector<std::size_t> combo;
  auto visit = [&](auto&& self, std::size_t start, int w, std::uint64_t s, int e) -> void {
    if (w > 0) {
      auto it = best_weight.find(s);
      if (it == best_weight.end() || w < it->second) {
        best_weight[s] = w;
        table_[s] = axis_from_bits(e);
        ambiguous[s] = false;
      } else if (w == it->second && table_[s] != axis_from_bits(e)) {
        ambiguous[s] = true;
      }
    }
    if (w == max_weight) return;
    for (std::size_t l = start; l < L; ++l) self(self, l + 1, w + 1, s ^ syn[l], e ^ eff[l]);
  };
  visit(visit, 0, 0, 0, 0);
  for (const auto& [s, amb] : ambiguous) {
    if (amb) {
      throw AmbiguousSyndromeError("syndrome " + std::to_string(s) + " is produced by jump sets of weight " +
                                   std::to_string(best_weight[s]) + " needing different corrections");
    }
  }
}

std::uint64_t SyndromeDecoder::syndrome_of(const PauliString& p) const {
  std::uint64_t s = 0;
  for (int l = 1; l + 1 < n_; ++l) {
    if (!commutes(p, ops::cluster(n_, l))) s |= 1ULL << (l - 1);
  }
  return s;
}

std::uint64_t SyndromeDecoder::measure(const CVec& reference, const CVec& psi) const {
  std::uint64_t s = 0;
  for (int l = 1; l + 1 < n_; ++l) {
    auto k = ops::cluster(n_, l);
    double a = expectation(k, reference).real(), b = expectation(k, psi).real();
    if (a * b < 0) s |= 1ULL << (l - 1);
  }
  return s;
}

Axis SyndromeDecoder::decode(std::uint64_t syndrome) const {
  auto it = table_.find(syndrome);
  if (it == table_.end()) {
    throw AmbiguousSyndromeError("syndrome " + std::to_string(syndrome) + " is not produced by any tabulated jump set");
  }
  return it->second;
}

namespace {

int axis_sign(Axis a, int component) {
  // component 1, 2, 3 = x, y, z; a pi rotation keeps its own axis.
  if (a == Axis::None || component == 0) return 1;
  return static_cast<int>(a) == component ? 1 : -1;
}

PauliString edge_pair_operator(int n, int i, int j) {
  auto l = edge_triple(n, Side::Left);
  auto r = edge_triple(n, Side::Right);
  PauliString p(n);
  if (i > 0) p = p * l[static_cast<std::size_t>(i - 1)];
  if (j > 0) p = p * r[static_cast<std::size_t>(j - 1)];
  return p;
}

}  // namespace

FidelityProtocolResult run_fidelity_protocol(const ChainModel& m, const StateVector& psi0, double t_max,
                                             std::span<const double> sample_times, std::size_t n_traj,
                                             std::uint64_t base_seed, const FidelityProtocolOptions& opts) {
  const int n = m.num_sites();
  if (psi0.num_sites() != n) throw DimensionError("initial state has the wrong site count");
  const auto strings = jump_strings(m);
  const RestorationLog log_l(strings, Side::Left), log_r(strings, Side::Right);

  std::vector<NamedObservable> obs;
  CMat rho0;
  if (opts.two_qubit) {
    for (int i = 0; i < 4; ++i) {
      for (int j = 0; j < 4; ++j) {
        if (i == 0 && j == 0) continue;
        obs.push_back({"P" + std::to_string(i) + std::to_string(j), PauliSum(edge_pair_operator(n, i, j))});
      }
    }
    rho0 = edge_pair_density(psi0.amplitudes());
  } else {
    auto tri = edge_triple(n, opts.side);
    const char* names[3] = {"Sx", "Sy", "Sz"};
    for (int a = 0; a < 3; ++a) obs.push_back({names[a], PauliSum(tri[static_cast<std::size_t>(a)])});
    rho0 = qubit_density(weak_qubit_bloch(psi0, opts.side));
  }
  const TrajectorySimulator sim(m, obs, opts.trajectory);
  const RestorationLog& log_single = opts.side == Side::Left ? log_l : log_r;

  // Fidelity of one sample; nets are the accumulated flips (None when uncorrected).
  auto sample_fidelity = [&](const std::vector<double>& v, Axis net_l, Axis net_r, Axis net_single) {
    if (opts.two_qubit) {
      Eigen::Matrix4cd rho = 0.25 * kron2(sigma(0), sigma(0));
      for (int i = 0; i < 4; ++i) {
        for (int j = 0; j < 4; ++j) {
          if (i == 0 && j == 0) continue;
          const double d = v[static_cast<std::size_t>(4 * i + j - 1)] * axis_sign(net_l, i) * axis_sign(net_r, j);
          rho += 0.25 * d * kron2(sigma(i), sigma(j));
        }
      }
      return fidelity(rho0, rho);
    }
    BlochVector b{v[0], v[1], v[2]};
    return fidelity(rho0, qubit_density(rotate_pi(b, net_single)));
  };
  auto corrected_at = [&](const TrajectoryRecord& rec, std::size_t k) {
    const double t = rec.sample_times[k];
    Axis nl = Axis::None, nr = Axis::None, ns = Axis::None;
    if (opts.two_qubit) {
      nl = log_l.net_until(rec, t);
      nr = log_r.net_until(rec, t);
    } else {
      ns = log_single.net_until(rec, t);
    }
    return sample_fidelity(rec.values[k], nl, nr, ns);
  };

  std::vector<std::vector<double>> corr(n_traj), raw(n_traj);
  std::vector<std::string> errors(n_traj);
  TrajectorySimulator::StopFn stop;
  if (opts.stop_at_crossing) {
    stop = [&](const TrajectoryRecord& rec) { return corrected_at(rec, rec.values.size() - 1) < opts.threshold; };
  }
#ifdef DSPT_HAVE_OPENMP
#pragma omp parallel for schedule(dynamic)
#endif
  for (long long k = 0; k < static_cast<long long>(n_traj); ++k) {
    const auto ku = static_cast<std::size_t>(k);
    try {
      TrajectoryRecord rec = sim.run(psi0, t_max, sample_times, base_seed + ku, stop);
      for (std::size_t s = 0; s < rec.values.size(); ++s) {
        corr[ku].push_back(corrected_at(rec, s));
        raw[ku].push_back(sample_fidelity(rec.values[s], Axis::None, Axis::None, Axis::None));
      }
    } catch (const std::exception& e) {
      errors[ku] = e.what();
    }
  }
  for (std::size_t k = 0; k < n_traj; ++k) {
    if (!errors[k].empty()) {
      throw NumericalError("trajectory " + std::to_string(k) + " (seed " + std::to_string(base_seed + k) +
                           ") failed: " + errors[k]);
    }
  }

  FidelityProtocolResult r;
  r.times.assign(sample_times.begin(), sample_times.end());
  r.n_traj = n_traj;
  r.crossings = collect_first_passages(sample_times, corr, opts.threshold);
  if (!opts.stop_at_crossing && n_traj > 0) {
    mean_and_stderr(corr, r.corrected_mean, r.corrected_stderr);
    mean_and_stderr(raw, r.uncorrected_mean, r.uncorrected_stderr);
  }
  return r;
}

}  // namespace dspt
