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


#include "dspt/entanglement.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <functional>
#include <map>
#include <string>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include "dspt/errors.hpp"
#include "dspt/rng.hpp"
#include "dspt/trajectories.hpp"

namespace dspt {

namespace {

void check_cut(int n, int M) {
  if (M < 1 || M >= n) {
    throw std::invalid_argument("cut M must satisfy 1 <= M < N (got M=" + std::to_string(M) + ", N=" +
                                std::to_string(n) + ")");
  }
}

}  // namespace

std::vector<double> schmidt_values(const CVec& psi, int num_sites, int M) {
  check_cut(num_sites, M);
  const Eigen::Index rows = Eigen::Index{1} << M;
  const Eigen::Index cols = Eigen::Index{1} << (num_sites - M);
  if (psi.size() != rows * cols) throw DimensionError("state length does not match the site count");
  // Left sites occupy the low bits, so column-major reshaping puts them on rows.
  Eigen::Map<const CMat> mat(psi.data(), rows, cols);
  // Eigen 3.4.0 BDCSVD can return a wrong singular value on exactly
  // degenerate spectra, so small blocks use JacobiSVD and large ones are
  // checked against the Frobenius norm.
  Eigen::VectorXd sv;
  if (std::min(rows, cols) <= 64) {
    sv = Eigen::JacobiSVD<CMat>(mat).singularValues();
  } else {
    sv = Eigen::BDCSVD<CMat>(mat).singularValues();
    if (std::abs(sv.squaredNorm() - psi.squaredNorm()) > 1e-12 * psi.squaredNorm()) {
      sv = Eigen::JacobiSVD<CMat>(mat).singularValues();
    }
  }
  double total = sv.squaredNorm();
  std::vector<double> out(static_cast<std::size_t>(sv.size()));
  for (Eigen::Index i = 0; i < sv.size(); ++i) out[static_cast<std::size_t>(i)] = sv[i] * sv[i] / total;
  std::sort(out.begin(), out.end(), std::greater<>());
  return out;
}

SchmidtSpectrum schmidt_spectrum(const StateVector& psi, int M) {
  return {schmidt_values(psi.amplitudes(), psi.num_sites(), M), M};
}

SchmidtSpectrum schmidt_spectrum(const DensityMatrix& rho, int M) {
  const int n = rho.num_sites();
  check_cut(n, M);
  std::vector<int> keep;
  for (int s = M; s < n; ++s) keep.push_back(s);
  DensityMatrix red = partial_trace(rho, keep);
  Eigen::SelfAdjointEigenSolver<CMat> es(red.matrix(), Eigen::EigenvaluesOnly);
  std::vector<double> vals(es.eigenvalues().data(), es.eigenvalues().data() + es.eigenvalues().size());
  for (auto& v : vals) v = std::max(v, 0.0);
  std::sort(vals.begin(), vals.end(), std::greater<>());
  return {vals, M};
}

DegeneracyMetric degeneracy_metric(std::span<const double> values) {
  if (values.size() < 4) throw std::invalid_argument("degeneracy metric needs at least four levels");
  std::vector<double> mu(values.begin(), values.end());
  std::sort(mu.begin(), mu.end(), std::greater<>());
  auto lg = [](double v) { return std::log(std::max(v, 1e-300)); };
  DegeneracyMetric d;
  double mu5 = mu.size() >= 5 ? mu[4] : 0.0;
  d.short_spectrum = !(mu5 > 0.0);
  double num = lg(mu[0]) - lg(mu[3]);
  d.gap = lg(mu[3]) - lg(mu5);
  double den = d.gap;
  if (den < kDegeneracyFloor) {
    den = kDegeneracyFloor;
    d.clamped = true;
  }
  d.value = num / den;
  return d;
}

SurvivingGroup surviving_group(BasisKind kind, int num_sites, int M) {
  check_cut(num_sites, M);
  if (num_sites > 64) throw CapacityError("surviving_group limited to N <= 64");
  auto gens = cluster_stabilizers(ClusterStateSpec::uniform(kind, num_sites, +1));
  const std::uint64_t left = M >= 64 ? ~0ULL : ((1ULL << M) - 1);
  using Bits = unsigned __int128;
  struct Row {
    Bits left_bits;
    std::uint64_t combo;
  };
  std::vector<Row> pivots;
  SurvivingGroup g;
  g.num_sites = num_sites;
  g.cut = M;
  auto top_bit = [](Bits b) {
    int k = 127;
    while (!((b >> k) & 1)) --k;
    return k;
  };
  for (int i = 0; i < num_sites; ++i) {
    const auto& p = gens[static_cast<std::size_t>(i)];
    Row r{(static_cast<Bits>(p.x_mask() & left) << 64) | (p.z_mask() & left), 1ULL << i};
    bool reduced = true;
    while (r.left_bits != 0 && reduced) {
      reduced = false;
      int tb = top_bit(r.left_bits);
      for (const auto& pv : pivots) {
        if (top_bit(pv.left_bits) == tb) {
          r.left_bits ^= pv.left_bits;
          r.combo ^= pv.combo;
          reduced = true;
          break;
        }
      }
    }
    if (r.left_bits != 0) {
      pivots.push_back(r);
      continue;
    }
    std::vector<int> idx;
    PauliString prod(num_sites);
    for (int k = 0; k < num_sites; ++k) {
      if ((r.combo >> k) & 1) {
        idx.push_back(k);
        prod = prod * gens[static_cast<std::size_t>(k)].with_phase(0);
      }
    }
    g.basis.push_back(prod.with_phase(0));
    g.combos.push_back(std::move(idx));
  }
  return g;
}

std::vector<double> mixture_spectrum_analytic(std::span<const std::pair<double, ClusterStateSpec>> mixture, int M) {
  if (mixture.empty()) throw std::invalid_argument("mixture must not be empty");
  const int n = mixture.front().second.num_sites();
  const BasisKind kind = mixture.front().second.kind;
  double total = 0;
  for (const auto& [p, spec] : mixture) {
    if (spec.num_sites() != n) throw DimensionError("mixture members have inconsistent N");
    if (spec.kind != kind) throw std::invalid_argument("mixture members must share the stabilizer convention");
    if (p < 0) throw std::invalid_argument("mixture probabilities must be non-negative");
    total += p;
  }
  if (std::abs(total - 1.0) > 1e-12) throw std::invalid_argument("mixture probabilities must sum to 1");
  SurvivingGroup g = surviving_group(kind, n, M);
  const int rest = n - M;
  const double unit = std::ldexp(1.0, static_cast<int>(g.basis.size()) - rest);
  const std::size_t mult = std::size_t{1} << (rest - static_cast<int>(g.basis.size()));
  std::map<std::vector<int>, double> weight;
  for (const auto& [p, spec] : mixture) {
    std::vector<int> sig;
    for (const auto& combo : g.combos) {
      int s = 1;
      for (int k : combo) s *= spec.signs[static_cast<std::size_t>(k)];
      sig.push_back(s);
    }
    weight[sig] += p;
  }
  std::vector<double> out;
  out.reserve(std::size_t{1} << rest);
  for (const auto& [sig, w] : weight) {
    for (std::size_t k = 0; k < mult; ++k) out.push_back(w * unit);
  }
  out.resize(std::size_t{1} << rest, 0.0);
  std::sort(out.begin(), out.end(), std::greater<>());
  return out;
}

ClusterStateSpec random_cluster_spec(BasisKind kind, int num_sites, std::uint64_t seed) {
  Philox4x64 rng = make_stream(seed, StreamTag::InitialState);
  ClusterStateSpec spec{kind, std::vector<int>(static_cast<std::size_t>(num_sites))};
  for (auto& s : spec.signs) s = (rng() >> 63) ? -1 : 1;
  return spec;
}

DegeneracySeries track_degeneracy_ensemble(const ChainModel& m, double t_max, std::span<const double> sample_times,
                                           std::size_t n_traj, std::uint64_t base_seed,
                                           const DegeneracyOptions& opts) {
  if (n_traj < 1) throw std::invalid_argument("n_traj must be at least 1");
  const int n = m.num_sites();
  TrajectoryOptions topts;
  topts.record_schmidt = true;
  topts.schmidt_cut = opts.cut > 0 ? opts.cut : n / 2;
  TrajectorySimulator sim(m, {}, topts);
  const std::size_t ns = sample_times.size();
  std::vector<std::vector<double>> dvals(n_traj, std::vector<double>(ns));
  std::vector<std::vector<double>> gvals(n_traj, std::vector<double>(ns));
  std::vector<std::vector<double>> flags(n_traj, std::vector<double>(ns));
  std::vector<std::string> errors(n_traj);
  const auto count = static_cast<long>(n_traj);
#ifdef DSPT_HAVE_OPENMP
#pragma omp parallel for schedule(dynamic)
#endif
  for (long k = 0; k < count; ++k) {
    auto i = static_cast<std::size_t>(k);
    try {
      std::uint64_t seed = base_seed + static_cast<std::uint64_t>(k);
      StateVector psi0 = prepare_cluster_state(random_cluster_spec(opts.kind, n, seed));
      TrajectoryRecord rec = sim.run(psi0, t_max, sample_times, seed);
      for (std::size_t s = 0; s < ns; ++s) {
        DegeneracyMetric d = degeneracy_metric(rec.schmidt[s]);
        dvals[i][s] = d.value;
        gvals[i][s] = d.gap;
        flags[i][s] = d.flagged() ? 1.0 : 0.0;
      }
    } catch (const std::exception& e) {
      errors[i] = e.what();
    }
  }
  for (std::size_t k = 0; k < n_traj; ++k) {
    if (!errors[k].empty()) throw NumericalError("trajectory " + std::to_string(k) + " failed: " + errors[k]);
  }
  DegeneracySeries out;
  out.times.assign(sample_times.begin(), sample_times.end());
  out.n_traj = n_traj;
  mean_and_stderr(dvals, out.d_mean, out.d_stderr);
  mean_and_stderr(gvals, out.gap_mean, out.gap_stderr);
  std::vector<double> unused;
  mean_and_stderr(flags, out.flagged_fraction, unused);
  return out;
}

}  // namespace dspt
