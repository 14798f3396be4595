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


#ifndef DSPT_QUBITS_HPP_
#define DSPT_QUBITS_HPP_

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include <Eigen/Dense>

#include "dspt/dense.hpp"
#include "dspt/first_passage.hpp"
#include "dspt/model.hpp"
#include "dspt/trajectories.hpp"

namespace dspt {

enum class Side { Left, Right };
enum class Axis { None, X, Y, Z };

std::string_view axis_name(Axis a);

struct BlochVector {
  double x = 0.0, y = 0.0, z = 0.0;
  double norm() const;
};

/// (Sigma^x, Sigma^y, Sigma^z) of the left (X0 Z1, Y0 Z1, Z0) or right
/// (Z_{N-2} X_{N-1}, Z_{N-2} Y_{N-1}, Z_{N-1}) edge qubit.
std::array<PauliString, 3> edge_triple(int n, Side side);
BlochVector weak_qubit_bloch(const CVec& psi, Side side);
BlochVector weak_qubit_bloch(const StateVector& psi, Side side);
/// Named edge observables "SxL", "SyL", "SzL", "SxR", "SyR", "SzR".
std::vector<NamedObservable> edge_observables(int n);

/// Net pi rotation a jump applies to an edge qubit, from its commutation
/// with Sigma^x and Sigma^z.
Axis jump_flip_rule(const PauliString& jump, Side side);
/// Product of two pi rotations up to phase.
Axis compose(Axis a, Axis b);
/// Image of v under a pi rotation about axis.
BlochVector rotate_pi(const BlochVector& v, Axis axis);

/// Net flip accumulated from the monitored jumps of one trajectory.
class RestorationLog {
 public:
  RestorationLog(std::span<const PauliString> jump_strings, Side side);
  /// Net rotation from every jump with time <= t.
  Axis net_until(const TrajectoryRecord& rec, double t) const;
  /// Per-channel flip, None for unmonitored channels.
  const std::vector<Axis>& channel_flips() const { return flips_; }

 private:
  std::vector<Axis> flips_;
};

/// Bloch series read from record columns idx = (x, y, z).
std::vector<BlochVector> bloch_series(const TrajectoryRecord& rec, std::array<int, 3> idx);
/// Bloch series with the accumulated flips undone at every sample.
std::vector<BlochVector> restore(const TrajectoryRecord& rec, std::span<const PauliString> jump_strings, Side side,
                                 std::array<int, 3> idx);

/// Jump operators of a model as phase-free strings; throws
/// UnsupportedModelError for non-string jumps.
std::vector<PauliString> jump_strings(const ChainModel& m);

/// One-qubit density (I + v.sigma)/2.
Eigen::Matrix2cd qubit_density(const BlochVector& v);
/// Two-qubit density from the 15 joint expectations of the left and right
/// edge triples in psi (left qubit is the first factor).
Eigen::Matrix4cd edge_pair_density(const CVec& psi);

/// Uhlmann fidelity (Tr sqrt(sqrt(rho) sigma sqrt(rho)))^2.
double fidelity(const CMat& rho, const CMat& sigma, double tol = 1e-8);

/// d_ij = Tr[rho Sigma^i_o Sigma^j_e], i, j in {I, x, y, z}.
struct StrongQubitState {
  Eigen::Matrix4d d = Eigen::Matrix4d::Zero();
  /// (1/4) sum d_ij sigma_i (x) sigma_j.
  Eigen::Matrix4cd density() const;
};

/// Sigma^i_o Sigma^j_e as a string (i, j in 0..3, 0 the identity).
PauliString strong_pair_operator(int n, int i, int j);
StrongQubitState strong_qubit_readout(const DensityMatrix& rho);
StrongQubitState strong_qubit_readout(const CMat& rho, int n);

struct Gate {
  enum class Kind { CX, Swap } kind = Kind::CX;
  int a = 0;  // control for CX
  int b = 0;  // target for CX
};

/// Gates in application order mapping G_o to X on site 0 and G_e to X on
/// site 1 (the logical qubits).
std::vector<Gate> logical_basis_transform(int n);
/// U p U^dag for the circuit U given in application order.
PauliString conjugate(std::span<const Gate> gates, const PauliString& p);
/// Dense unitary of a circuit (N <= kDenseOperatorCap).
CMat circuit_unitary(int n, std::span<const Gate> gates);

/// K_l eigenvalue readout and decoding of edge flips from syndrome changes.
class SyndromeDecoder {
 public:
  /// Builds a table over jump combinations up to max_weight. Throws
  /// AmbiguousSyndromeError if two minimal-weight combinations share a
  /// syndrome but need different corrections.
  SyndromeDecoder(int n, std::span<const PauliString> jump_strings, Side side, int max_weight = 1);

  /// True when every undetectable jump combination leaves the edge qubit
  /// alone, so any syndrome decodes uniquely at any weight.
  bool globally_unambiguous() const { return global_ok_; }
  /// Bit l-1 set when K_l anticommutes with p (bulk sites 1..N-2).
  std::uint64_t syndrome_of(const PauliString& p) const;
  /// Bit l-1 set when <K_l> changed sign between reference and psi.
  std::uint64_t measure(const CVec& reference, const CVec& psi) const;
  /// Correction for a syndrome; throws AmbiguousSyndromeError for a
  /// syndrome outside the table.
  Axis decode(std::uint64_t syndrome) const;

 private:
  int n_;
  Side side_;
  bool global_ok_ = true;
  std::unordered_map<std::uint64_t, Axis> table_;
};

struct FidelityProtocolOptions {
  /// One edge qubit (side) or both edge qubits together.
  bool two_qubit = false;
  Side side = Side::Left;
  /// Level for first-passage times of the corrected fidelity.
  double threshold = 0.75;
  /// End each trajectory once its corrected fidelity has crossed the
  /// threshold. Mean curves are then not reported.
  bool stop_at_crossing = false;
  TrajectoryOptions trajectory;
};

struct FidelityProtocolResult {
  std::vector<double> times;
  std::vector<double> corrected_mean, corrected_stderr;
  std::vector<double> uncorrected_mean, uncorrected_stderr;
  /// First passages of the corrected fidelity below the threshold.
  FirstPassageSamples crossings;
  std::size_t n_traj = 0;
};

/// Uhlmann fidelity of the edge qubit(s) to their initial state along
/// trajectories, with and without undoing the monitored jump flips.
/// Trajectory k uses seed base_seed + k.
FidelityProtocolResult run_fidelity_protocol(const ChainModel& m, const StateVector& psi0, double t_max,
                                             std::span<const double> sample_times, std::size_t n_traj,
                                             std::uint64_t base_seed, const FidelityProtocolOptions& opts = {});

}  // namespace dspt

#endif  // DSPT_QUBITS_HPP_
