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

#ifndef DSPT_LINDBLAD_HPP_
#define DSPT_LINDBLAD_HPP_

#include <span>
#include <vector>

#include "dspt/dense.hpp"
#include "dspt/model.hpp"
#include "dspt/opspace.hpp"

namespace dspt {

/// Largest N for the full 4^N vectorized generator.
inline constexpr int kSuperoperatorCap = 8;

/// Column-stacked Lindblad generator
///   L = -i(I (x) H - H^T (x) I)
///       + kappa sum_l [2 conj(F_l) (x) F_l - I (x) F_l^dag F_l - (F_l^dag F_l)^T (x) I].
class Superoperator {
 public:
  Superoperator(PauliSum h, std::vector<PauliSum> jumps, double kappa, int cap = kSuperoperatorCap);
  static Superoperator from_model(const ChainModel& m, int cap = kSuperoperatorCap);

  int num_sites() const { return n_; }
  const SpCMat& matrix() const { return l_; }
  const PauliSum& hamiltonian() const { return h_; }
  const std::vector<PauliSum>& jumps() const { return jumps_; }
  double kappa() const { return kappa_; }
  PauliLiouvillian pauli_form() const { return PauliLiouvillian(h_, jumps_, kappa_); }

  static CVec vectorize(const CMat& m);
  static CMat unvectorize(const CVec& v, Eigen::Index dim);

 private:
  int n_;
  PauliSum h_;
  std::vector<PauliSum> jumps_;
  double kappa_;
  SpCMat l_;
};

struct EvolveOptions {
  double rtol = 1e-9;
  double atol = 1e-12;
  double krylov_tol = 1e-12;
  /// Explicit adaptive stepping up to this N, Krylov actions above.
  int explicit_max_sites = 6;
};

/// e^{Lt} x0 at each of the ascending times (x0 need not be a state).
std::vector<CMat> evolve_operator(const Superoperator& L, const CMat& x0, std::span<const double> times,
                                  const EvolveOptions& opts = {});
std::vector<DensityMatrix> evolve(const Superoperator& L, const DensityMatrix& rho0, std::span<const double> times,
                                  const EvolveOptions& opts = {});

struct SteadyOptions {
  /// Eigenvalues with |lambda| below rel_tol * kappa count as zero.
  double rel_tol = 1e-10;
  /// Blocks up to this size are solved densely.
  int dense_max = 700;
  /// Subspace width for shift-invert iteration on larger blocks.
  int block_width = 16;
  int max_iterations = 200;
};

struct SteadySpace {
  /// Hilbert-Schmidt orthonormal Hermitian operators (Pauli coefficients
  /// normalized so that sum |c|^2 = 1).
  std::vector<PauliSum> basis;
  /// Eigenvalues of the generator with the smallest moduli found, per block.
  std::vector<cplx> slow_eigenvalues;
  double tolerance = 0.0;
  std::size_t num_blocks = 0;
  std::size_t largest_block = 0;

  std::size_t dimension() const { return basis.size(); }
};

/// Nullspace of the generator, split into connected Pauli-string blocks.
SteadySpace steady_space(const PauliLiouvillian& L, const SteadyOptions& opts = {});
SteadySpace steady_space(const Superoperator& L, const SteadyOptions& opts = {});

struct AutocorrResult {
  std::vector<double> times;
  std::vector<double> values;
};

struct AutocorrOptions {
  double krylov_tol = 1e-11;
  /// Largest Heisenberg block allowed.
  std::size_t max_block = 1u << 20;
};

/// A(t) = Tr[O e^{Lt}(rho~)], rho~ = sum_i nu_i P_i |psi0><psi0| P_i, with
/// (nu_i, P_i) the spectral decomposition of O. Evaluated as
/// Tr[(e^{L^dag t} O) rho~] inside the Heisenberg block of O.
AutocorrResult autocorrelation(const ChainModel& m, const PauliSum& O, const StateVector& psi0,
                               std::span<const double> times, const AutocorrOptions& opts = {});
/// Same quantity through the vectorized generator (N <= 8); a cross-check.
AutocorrResult autocorrelation_superoperator(const ChainModel& m, const PauliSum& O, const StateVector& psi0,
                                             std::span<const double> times, const EvolveOptions& opts = {});
/// The unnormalized rho~ of the measurement decomposition.
CMat measurement_weighted_state(const PauliSum& O, const StateVector& psi0);

/// First time A(t) falls to level * A(0) (linear interpolation); NaN if never.
double decay_time(const AutocorrResult& a, double level);

}  // namespace dspt

#endif  // DSPT_LINDBLAD_HPP_
