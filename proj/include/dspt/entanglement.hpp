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


#ifndef DSPT_ENTANGLEMENT_HPP_
#define DSPT_ENTANGLEMENT_HPP_

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "dspt/dense.hpp"
#include "dspt/model.hpp"

namespace dspt {

/// Reduced-density eigenvalues (squared Schmidt coefficients), descending.
struct SchmidtSpectrum {
  std::vector<double> values;
  /// Number of left sites traced out.
  int cut = 0;
};

/// Spectrum of Tr_{0..M-1} |psi><psi|; min(2^M, 2^{N-M}) values.
SchmidtSpectrum schmidt_spectrum(const StateVector& psi, int M);
/// Spectrum of Tr_{0..M-1} rho; 2^{N-M} values.
SchmidtSpectrum schmidt_spectrum(const DensityMatrix& rho, int M);
/// Raw form used inside trajectories (psi need not be normalized).
std::vector<double> schmidt_values(const CVec& psi, int num_sites, int M);

struct DegeneracyMetric {
  double value = 0.0;
  /// log mu_4 - log mu_5 before clamping.
  double gap = 0.0;
  /// The denominator fell below the floor and was clamped.
  bool clamped = false;
  /// Fewer than five strictly positive levels.
  bool short_spectrum = false;
  bool flagged() const { return clamped || short_spectrum; }
};

inline constexpr double kDegeneracyFloor = 1e-14;

/// D = (log mu_1 - log mu_4) / (log mu_4 - log mu_5). Levels at or below
/// zero are replaced by 1e-300 before taking logarithms.
DegeneracyMetric degeneracy_metric(std::span<const double> values);
inline DegeneracyMetric degeneracy_metric(const SchmidtSpectrum& s) { return degeneracy_metric(s.values); }

/// Surviving stabilizer subgroup of a cluster state after tracing out the
/// left M sites.
struct SurvivingGroup {
  int num_sites = 0;
  int cut = 0;
  /// GF(2) basis of the subgroup as phase-free strings.
  std::vector<PauliString> basis;
  /// Generator index sets that produce each basis element.
  std::vector<std::vector<int>> combos;
  std::size_t order() const { return std::size_t{1} << basis.size(); }
};

SurvivingGroup surviving_group(BasisKind kind, int num_sites, int M);

/// Spectrum of Tr_{0..M-1} sum_k p_k |C_k><C_k| for cluster states C_k, from
/// the stabilizer structure alone: each distinct signature on the surviving
/// group contributes (sum of its p_k) |G| / 2^{N-M} with multiplicity
/// 2^{N-M} / |G|. Returns 2^{N-M} values, descending, zero padded.
std::vector<double> mixture_spectrum_analytic(std::span<const std::pair<double, ClusterStateSpec>> mixture, int M);

struct DegeneracySeries {
  std::vector<double> times;
  std::vector<double> d_mean;
  std::vector<double> d_stderr;
  std::vector<double> gap_mean;
  std::vector<double> gap_stderr;
  /// Fraction of samples flagged by degeneracy_metric, per time.
  std::vector<double> flagged_fraction;
  std::size_t n_traj = 0;
};

struct DegeneracyOptions {
  BasisKind kind = BasisKind::FlipSymmetry;
  /// 0 means N/2.
  int cut = 0;
};

/// Trajectory ensemble of D(t), each trajectory starting from a cluster
/// state with uniformly random stabilizer signs drawn from its own stream.
DegeneracySeries track_degeneracy_ensemble(const ChainModel& m, double t_max, std::span<const double> sample_times,
                                           std::size_t n_traj, std::uint64_t base_seed,
                                           const DegeneracyOptions& opts = {});

/// Uniformly random stabilizer signs for trajectory seed.
ClusterStateSpec random_cluster_spec(BasisKind kind, int num_sites, std::uint64_t seed);

}  // namespace dspt

#endif  // DSPT_ENTANGLEMENT_HPP_
