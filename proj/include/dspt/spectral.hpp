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

#ifndef DSPT_SPECTRAL_HPP_
#define DSPT_SPECTRAL_HPP_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "dspt/model.hpp"
#include "dspt/pauli.hpp"

namespace dspt {

/// Invariant subspace of the unperturbed ZIZ generator spanned by
/// b_S = prod_{p in S} (-i K_p) A over subsets S of the active sites, with
/// subset bit k standing for active_sites[k].
struct Fragment {
  std::vector<PauliString> basis;
  /// action(i, j) is the coefficient of basis[i] in L0(basis[j]).
  Eigen::MatrixXcd action;
  std::vector<int> active_sites;
};

/// Sites p with K_p anticommuting with s (bitmask).
std::uint64_t active_mask(const PauliString& s);
/// Number of ZIZ jumps anticommuting with s.
int anticommuting_jumps(const PauliString& s);

/// Closure of seed under L0. Throws UnsupportedModelError unless the model
/// has ZIZ jumps and no perturbation.
Fragment fragment_of(const ChainModel& m, const PauliString& seed);

/// lambda1(alpha) = -2 alpha kappa + 2 sqrt(alpha^2 kappa^2 - J^2), principal branch.
cplx lambda1(int alpha, double kappa, double J);
/// Least negative eigenvalue of the two-active-site boundary fragment.
cplx lambda2(double kappa, double J);

/// [1 + i lambda1/(2J) K_p] Z_p, p = 1 or n-2 for alpha = 1 and 2 <= p <= n-3
/// for alpha = 2 (0-based).
PauliSum eigenmode_Wp(const ChainModel& m, int p, int alpha);
/// A + u K_p A + v K_q A + w K_p K_q A with A = Z_p Z_q, {p, q} = {1, 3} or
/// {n-4, n-2}. u pairs with the boundary-adjacent site whichever order the
/// sites are passed in.
PauliSum eigenmode_Wpq(const ChainModel& m, int p, int q);

/// Fragment matrix from its active count and per-basis jump counts:
/// hypercube coupling +-2J plus diagonal -4 kappa count.
Eigen::MatrixXd fragment_matrix(int num_active, std::span<const int> jump_counts, double kappa, double J);

/// All fragments of one shape. Shapes are independent of kappa and J.
struct FragmentClass {
  int num_active = 0;
  std::vector<int> jump_counts;
  std::size_t multiplicity = 0;
  PauliString representative;
  std::size_t size() const { return jump_counts.size(); }
};

/// Largest N for exhaustive enumeration of the 4^N strings.
inline constexpr int kEnumerationCap = 12;

/// Partitions all 4^N Pauli strings into fragments and groups them by shape.
std::vector<FragmentClass> enumerate_fragment_classes(int num_sites);

/// Smallest nonzero |Re lambda| of a real matrix, eigenvalues with
/// |lambda| < zero_tol counted as zero. Infinity when all are zero.
double slowest_decay(const Eigen::MatrixXd& a, double zero_tol);

enum class GapBranch { Lambda1Alpha2, Lambda2 };
std::string_view gap_branch_name(GapBranch b);

struct GapResult {
  double kappa_over_J = 0;
  double analytic_gap = 0;
  std::optional<double> numeric_gap;
  GapBranch dominant_branch = GapBranch::Lambda1Alpha2;
};

/// min(|Re lambda1(2)|, |Re lambda2|) and the branch attaining it.
GapResult analytic_gap(double kappa, double J);

struct SubsectorGaps {
  /// gap[n] for fragments of 2^n strings; infinity if none decay.
  std::vector<double> gap;
  double global() const;
};

/// Gaps per active-site count at the model's kappa, from precomputed classes.
SubsectorGaps subsector_gaps(const ChainModel& m, std::span<const FragmentClass> classes);
/// Global numeric gap by exhaustive enumeration (N <= kEnumerationCap).
double verify_gap_numeric(const ChainModel& m);

/// Analytic gaps at kappa/J values, with numeric gaps when requested.
std::vector<GapResult> dissipative_gap(const ChainModel& m, std::span<const double> kappa_over_J,
                                       bool with_numeric = false);

/// kappa/J where |Re lambda1(2)| = |Re lambda2|, by bisection on [lo, hi].
double gap_branch_crossing(double lo = 0.55, double hi = 0.7, double tol = 1e-13);

struct DegeneracyReport {
  /// Closest pair of eigenvalues.
  double min_separation = 0;
  /// Gram determinant of that pair's unit eigenvectors.
  double gram_det = 1;
  /// Rank deficiency of (A - lambda I) at the pair's mean eigenvalue.
  int geometric_multiplicity = 0;
  bool exceptional = false;
};

/// Flags a non-diagonalizable matrix: an eigenvalue collision within
/// collision_tol (relative to the spectral radius) together with a Gram
/// determinant below gram_tol.
DegeneracyReport detect_exceptional_point(const Eigen::MatrixXcd& a, double collision_tol = 1e-8,
                                          double gram_tol = 1e-8);

}  // namespace dspt

#endif  // DSPT_SPECTRAL_HPP_
