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

#ifndef DSPT_PERTURBATION_HPP_
#define DSPT_PERTURBATION_HPP_

#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "dspt/model.hpp"
#include "dspt/pauli.hpp"

namespace dspt {

enum class PerturbationKind { XX, Y };
std::string_view perturbation_name(PerturbationKind k);
PerturbationKind parse_perturbation(std::string_view name);

/// Unit-strength perturbation: sum X_l X_{l+1} or sum Y_l.
PauliSum perturbation_operator(int num_sites, PerturbationKind k);

/// The 16 Hermitian strings spanning the ZIZ steady space, as products
/// a * b with a in {I, G_o, i G_o Z_0, Z_0} and b in {I, G_e, i G_e Z_{N-1}, Z_{N-1}}.
std::vector<PauliString> steady_strings(int num_sites);
/// (+1 or -1) according as s commutes with G_o, G_e.
std::pair<int, int> flip_sector(const PauliString& s);

struct EffectiveGenerator {
  std::vector<PauliString> basis;
  /// -P V Q L0^{-1} Q V P on the steady strings, in units of J (V/J)^2
  /// for a unit-strength V.
  Eigen::MatrixXcd l2;
  std::vector<double> l2_diag;
  /// Q strings reached from each basis element (union of whole fragments).
  std::vector<std::vector<PauliString>> reached;
  /// Largest |P V P| coefficient; zero when the first order vanishes.
  double first_order = 0;
  double max_imag = 0;
  double max_offdiag = 0;
  /// Largest condition number among the fragment solves.
  double max_condition = 0;
};

/// Second-order effective generator for the perturbation V added to the
/// unperturbed ZIZ model m. Fragments are solved densely one at a time.
EffectiveGenerator effective_L2(const ChainModel& m, const PauliSum& v);
EffectiveGenerator effective_L2(const ChainModel& m, PerturbationKind k);

/// max diag(-L2).
double spread_delta(const EffectiveGenerator& g);

/// -L2/J for Z_0 under XX, per (V/J)^2: (8x^3 + 3x)/(16x^4 + 9x^2 + 1), x = kappa/J.
double closed_form_L2_Z1(double kappa, double J);
/// Spread under sum Y_l per (V/J)^2:
/// 16x/(8x^2+1) + 2/(3x) + (N-4) 8x (64x^2+3)/(1536x^4+152x^2+3).
double closed_form_spread_Hy(double kappa, double J, int num_sites);

}  // namespace dspt

#endif  // DSPT_PERTURBATION_HPP_
