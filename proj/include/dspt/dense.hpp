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

#ifndef DSPT_DENSE_HPP_
#define DSPT_DENSE_HPP_

#include <array>
#include <cstdint>
#include <span>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include "dspt/pauli.hpp"

namespace dspt {

using CVec = Eigen::VectorXcd;
using CMat = Eigen::MatrixXcd;
using SpCMat = Eigen::SparseMatrix<cplx>;

/// Largest N for dense operator and density-matrix work.
inline constexpr int kDenseOperatorCap = 14;
/// Largest N for pure-state work.
inline constexpr int kStateVectorCap = 20;

/// Basis index b has bit l equal to 1 when site l is down (Z = -1).
class StateVector {
 public:
  StateVector() = default;
  /// Normalizes amp; throws DegenerateInputError on a zero vector.
  StateVector(int num_sites, CVec amp);
  static StateVector basis(int num_sites, std::uint64_t index);

  int num_sites() const { return n_; }
  Eigen::Index dim() const { return amp_.size(); }
  const CVec& amplitudes() const { return amp_; }

 private:
  int n_ = 0;
  CVec amp_;
};

class DensityMatrix {
 public:
  DensityMatrix() = default;
  /// Validates Hermiticity and unit trace within tol, then symmetrizes.
  DensityMatrix(int num_sites, CMat m, double tol = 1e-10);
  static DensityMatrix from_pure(const StateVector& psi);
  static DensityMatrix maximally_mixed(int num_sites);

  int num_sites() const { return n_; }
  Eigen::Index dim() const { return m_.rows(); }
  const CMat& matrix() const { return m_; }
  double min_eigenvalue() const;

 private:
  int n_ = 0;
  CMat m_;
};

/// out = p * in on 2^N amplitudes.
void apply_pauli(const PauliString& p, const cplx* in, cplx* out, std::size_t dim);
CVec apply(const PauliString& p, const CVec& v);
CVec apply(const PauliSum& op, const CVec& v);

cplx expectation(const PauliString& p, const CVec& v);
cplx expectation(const PauliSum& op, const CVec& v);
double expectation(const PauliString& p, const StateVector& psi);
double expectation(const PauliSum& op, const StateVector& psi);
/// Tr(rho p) in O(2^N).
cplx trace_product(const PauliString& p, const CMat& rho);
double expectation(const PauliString& p, const DensityMatrix& rho);
double expectation(const PauliSum& op, const DensityMatrix& rho);

/// Sparse 2^N x 2^N matrix of op. Throws CapacityError above kDenseOperatorCap.
SpCMat materialize(const PauliSum& op);
SpCMat materialize(const PauliString& p);
CMat materialize_dense(const PauliSum& op);

enum class BasisKind { EdgeMode, FlipSymmetry };

/// Eigenvalues of the N commuting stabilizers of a cluster state.
///
/// signs[0] belongs to X0 Z1 (EdgeMode) or G_o (FlipSymmetry), signs[l]
/// for 1 <= l <= N-2 to K_l, and signs[N-1] to Z_{N-2} X_{N-1} or G_e.
struct ClusterStateSpec {
  BasisKind kind = BasisKind::EdgeMode;
  std::vector<int> signs;

  int num_sites() const { return static_cast<int>(signs.size()); }
  static ClusterStateSpec uniform(BasisKind kind, int n, int sign = +1);
};

/// The signed stabilizer generators s_l O_l of spec.
std::vector<PauliString> cluster_stabilizers(const ClusterStateSpec& spec);
StateVector prepare_cluster_state(const ClusterStateSpec& spec);

/// Applies prod_k (1 + O_k)/2 to a computational seed and normalizes. Each
/// O_k must square to the identity. Seeds |0...0>, |0...01>, ... are tried
/// until one survives with squared norm above min_norm_sq.
StateVector prepare_projected_state(int num_sites, std::span<const PauliSum> observables,
                                    double min_norm_sq = 1e-3, int max_seeds = 64);

/// Bulk K_l = bulk_sign, Z_{N-1} = +1 and the left edge triple pointing
/// along dir (normalized internally).
StateVector prepare_edge_direction_state(int num_sites, std::array<double, 3> dir, int bulk_sign = -1);

/// <O_L at site 0, u_i on sites 1..k-2, O_R at site k-1>. Here k counts
/// sites, so 2 <= k <= N; u_letters has one entry per site (only sites
/// 1..k-2 are read).
double string_order(const DensityMatrix& rho, std::span<const Letter> u_letters, Letter o_left, Letter o_right,
                    int k);
/// S* = S(G_o G_e, Y, Y) at k = N.
double string_order_star(const DensityMatrix& rho);
PauliString string_order_operator(int n, std::span<const Letter> u_letters, Letter o_left, Letter o_right, int k);

/// Reduced state on keep_sites (ascending, bit order preserved).
DensityMatrix partial_trace(const DensityMatrix& rho, std::span<const int> keep_sites);

}  // namespace dspt

#endif  // DSPT_DENSE_HPP_
