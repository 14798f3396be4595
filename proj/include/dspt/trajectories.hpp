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


#ifndef DSPT_TRAJECTORIES_HPP_
#define DSPT_TRAJECTORIES_HPP_

#include <cstdint>
#include <functional>
#include <limits>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "dspt/dense.hpp"
#include "dspt/model.hpp"

namespace dspt {

/// H_eff = H - i kappa sum_l F_l^dag F_l.
PauliSum effective_hamiltonian(const PauliSum& h, std::span<const PauliSum> jumps, double kappa);
PauliSum effective_hamiltonian(const ChainModel& m);

struct NamedObservable {
  std::string name;
  PauliSum op;
};

struct JumpEvent {
  double time = 0.0;
  int channel = 0;
};

struct TrajectoryRecord {
  std::uint64_t seed = 0;
  std::vector<JumpEvent> jump_events;
  std::vector<double> sample_times;
  /// values[k][j] = <observable j> at sample_times[k].
  std::vector<std::vector<double>> values;
  /// Descending reduced-density eigenvalues per sample (if requested).
  std::vector<std::vector<double>> schmidt;
  /// Normalized states per sample (if requested).
  std::vector<CVec> states;
  /// Time at which every channel had zero rate; NaN if never.
  double dark_state_time = std::numeric_limits<double>::quiet_NaN();
};

struct TrajectoryOptions {
  double rtol = 1e-10;
  double atol = 1e-13;
  /// Jump times are located to this relative accuracy.
  double time_tol = 1e-10;
  bool record_schmidt = false;
  /// Left block size for Schmidt sampling; 0 means N/2.
  int schmidt_cut = 0;
  bool record_states = false;
  /// Largest ||H|| dt per Taylor substep of the closed drift.
  double taylor_step = 0.5;
};

/// Monte Carlo wave-function unravelling of one model.
///
/// With Pauli-string jumps F_l = c_l P_l the non-Hermitian part of H_eff is
/// a multiple of the identity, so the waiting time is exponential with rate
/// 2 kappa sum |c_l|^2, every channel is equally likely in proportion to
/// |c_l|^2 and the drift is the closed evolution under H. Other jumps are
/// integrated with adaptive Dormand-Prince steps and the jump time is found
/// by bisection on the dense output.
class TrajectorySimulator {
 public:
  TrajectorySimulator(const ChainModel& m, std::vector<NamedObservable> observables, TrajectoryOptions opts = {});

  const ChainModel& model() const { return model_; }
  const std::vector<NamedObservable>& observables() const { return obs_; }
  const std::vector<PauliSum>& jumps() const { return jumps_; }

  /// Called after every sample; returning true ends the trajectory early.
  using StopFn = std::function<bool(const TrajectoryRecord&)>;

  TrajectoryRecord run(const StateVector& psi0, double t_max, std::span<const double> sample_times,
                       std::uint64_t seed, const StopFn& stop = {}) const;

 private:
  void sample(TrajectoryRecord& rec, double t, const CVec& psi) const;
  /// psi <- exp(-i H dt) psi by scaled Taylor series.
  void propagate(CVec& psi, double dt) const;
  TrajectoryRecord run_pauli(const StateVector& psi0, double t_max, std::span<const double> sample_times,
                             std::uint64_t seed, const StopFn& stop) const;
  TrajectoryRecord run_general(const StateVector& psi0, double t_max, std::span<const double> sample_times,
                               std::uint64_t seed, const StopFn& stop) const;

  ChainModel model_;
  std::vector<NamedObservable> obs_;
  TrajectoryOptions opts_;
  std::vector<PauliSum> jumps_;
  bool pauli_jumps_ = false;
  // Pauli-jump path.
  std::vector<PauliString> jump_strings_;
  std::vector<double> jump_cdf_;
  double total_rate_ = 0.0;
  Eigen::SparseMatrix<cplx, Eigen::RowMajor> h_;
  double h_norm_ = 0.0;
  // General path.
  SpCMat heff_;
  std::vector<SpCMat> jump_mats_;
};

TrajectoryRecord run_trajectory(const ChainModel& m, const StateVector& psi0, double t_max,
                                std::span<const double> sample_times, std::uint64_t seed,
                                std::vector<NamedObservable> observables, const TrajectoryOptions& opts = {});

struct EnsembleResult {
  std::vector<double> times;
  std::vector<std::string> names;
  /// mean[j][k], stderr[j][k] for observable j at times[k].
  std::vector<std::vector<double>> mean;
  std::vector<std::vector<double>> stderr;
  std::size_t n_traj = 0;
  /// Filled when keep_records is set.
  std::vector<TrajectoryRecord> records;
};

/// Trajectory k uses seed base_seed + k. A failing trajectory is reported
/// with its index.
EnsembleResult ensemble(const TrajectorySimulator& sim, const StateVector& psi0, double t_max,
                        std::span<const double> sample_times, std::size_t n_traj, std::uint64_t base_seed,
                        bool keep_records = false);

/// Mean and standard error (sample stddev / sqrt(n)) of each column of
/// per-trajectory values[traj][k].
void mean_and_stderr(const std::vector<std::vector<double>>& values, std::vector<double>& mean,
                     std::vector<double>& stderr);

}  // namespace dspt

#endif  // DSPT_TRAJECTORIES_HPP_
