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

#ifndef DSPT_OPSPACE_HPP_
#define DSPT_OPSPACE_HPP_

#include <cstddef>
#include <span>
#include <unordered_map>
#include <vector>

#include <Eigen/Sparse>

#include "dspt/model.hpp"
#include "dspt/pauli.hpp"

namespace dspt {

/// Schrodinger: L(O) = -i[H,O] + D(O). Heisenberg: the adjoint generator
/// L^dag(O) = i[H,O] + kappa sum (2 F^dag O F - {F^dag F, O}).
enum class Picture { Schrodinger, Heisenberg };

/// The Lindbladian acting on operators written in the Pauli-string basis.
///
/// Pauli-string terms of H and Pauli-string jumps are handled through
/// (anti)commutation alone; other jumps fall back to PauliSum products.
class PauliLiouvillian {
 public:
  PauliLiouvillian(PauliSum h, std::vector<PauliSum> jumps, double kappa);
  static PauliLiouvillian from_model(const ChainModel& m);
  /// Same model with V_xx = V_y = 0.
  static PauliLiouvillian unperturbed(const ChainModel& m);

  int num_sites() const { return n_; }
  double kappa() const { return kappa_; }
  const PauliSum& hamiltonian() const { return h_; }
  const std::vector<PauliSum>& jumps() const { return jumps_; }
  bool pauli_jumps() const { return pauli_jumps_; }

  /// Appends L(p) for a phase-free string p; output strings are phase-free
  /// and may repeat.
  void apply(const PauliString& p, Picture pic, std::vector<PauliSum::Term>& out) const;
  PauliSum apply(const PauliSum& op, Picture pic) const;
  /// Crude upper bound on the operator norm, for step-size heuristics.
  double norm_bound() const;

 private:
  int n_;
  PauliSum h_;
  std::vector<PauliSum> jumps_;
  double kappa_;
  bool pauli_jumps_ = true;
  std::vector<PauliString> jump_strings_;
  std::vector<double> jump_weights_;
  std::vector<PauliSum> jumps_dag_;
  std::vector<PauliSum> fdf_;
};

/// A closed set of Pauli strings together with the generator restricted to
/// it: matrix(i, j) is the coefficient of basis[i] in L(basis[j]).
struct OperatorBlock {
  std::vector<PauliString> basis;
  Eigen::SparseMatrix<cplx> matrix;
  std::unordered_map<PauliKey, int, PauliKeyHash> index;

  int find(const PauliString& p) const;
  std::size_t size() const { return basis.size(); }
};

/// Breadth-first closure of seeds under L. Throws CapacityError when the
/// closure would exceed max_size strings.
OperatorBlock closure(const PauliLiouvillian& L, std::span<const PauliString> seeds, Picture pic,
                      std::size_t max_size = 1u << 22);

/// Converts a block matrix to real entries, checking that the discarded
/// imaginary parts are below tol.
Eigen::SparseMatrix<double> real_part_checked(const Eigen::SparseMatrix<cplx>& m, double tol = 1e-12);

}  // namespace dspt

#endif  // DSPT_OPSPACE_HPP_
