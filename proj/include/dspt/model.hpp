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

#ifndef DSPT_MODEL_HPP_
#define DSPT_MODEL_HPP_

#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "dspt/pauli.hpp"

namespace dspt {

/// Jump-operator families. ZIZ: Z_{l-1} Z_{l+1} on every interior site;
/// Y: Y_l on every site; SxMinus: (Z_l + i Y_l)/2 on every site.
enum class JumpKind { ZIZ, Y, SxMinus, Custom };

std::string_view jump_kind_name(JumpKind k);
JumpKind parse_jump_kind(std::string_view name);

/// Immutable definition of the dissipative cluster chain.
///
/// H = J sum_l K_l + V_xx sum_l X_l X_{l+1} + V_y sum_l Y_l with open
/// boundaries, and jump operators F_l entering with rate kappa.
class ChainModel {
 public:
  struct Params {
    int num_sites = 8;
    double J = 1.0;
    double kappa = 0.0;
    double v_xx = 0.0;
    double v_y = 0.0;
    JumpKind jumps = JumpKind::ZIZ;
    std::vector<PauliSum> custom_jumps;
  };

  explicit ChainModel(Params params);

  int num_sites() const { return p_.num_sites; }
  double J() const { return p_.J; }
  double kappa() const { return p_.kappa; }
  double v_xx() const { return p_.v_xx; }
  double v_y() const { return p_.v_y; }
  JumpKind jump_kind() const { return p_.jumps; }
  const Params& params() const { return p_; }
  bool is_unperturbed() const { return p_.v_xx == 0.0 && p_.v_y == 0.0; }

  ChainModel with_kappa(double kappa) const;
  ChainModel with_perturbation(double v_xx, double v_y) const;
  ChainModel with_num_sites(int n) const;

 private:
  Params p_;
};

PauliSum build_hamiltonian(const ChainModel& m);
std::vector<PauliSum> build_jumps(const ChainModel& m);
/// True when every jump is a single Pauli string (possibly scaled).
bool has_pauli_jumps(const ChainModel& m);

/// Named operators. Site arguments are 0-based; "odd" and "even" refer to
/// the 1-based site labels, so the odd sublattice is indices 0, 2, 4, ...
namespace ops {
PauliString cluster(int n, int site);  // K = Z X Z centred on 1 <= site <= n-2
PauliString flip_odd(int n);           // G_o
PauliString flip_even(int n);          // G_e
/// Left edge triple (X0 Z1, Y0 Z1, Z0), axis in {0,1,2} for x,y,z.
PauliString edge_left(int n, int axis);
/// Right edge triple (Z_{n-2} X_{n-1}, Z_{n-2} Y_{n-1}, Z_{n-1}).
PauliString edge_right(int n, int axis);
/// Strong (decoherence-free) qubit triples, axis in {0,1,2}; each triple
/// obeys S1 S2 = i S3.
PauliString strong_odd(int n, int axis);   // (G_o, i G_o Z_0, Z_0)
PauliString strong_even(int n, int axis);  // (G_e, i G_e Z_{n-1}, Z_{n-1})
}  // namespace ops

enum class SymmetryClass { Strong, Weak, Broken };
std::string_view symmetry_class_name(SymmetryClass c);

struct SymmetryReport {
  PauliSum op;
  SymmetryClass classification = SymmetryClass::Broken;
  /// For Weak: phase phi_l with u F_l u^dag = exp(i phi_l) F_l.
  std::vector<double> phases;
  bool commutes_with_h = false;
};

SymmetryReport classify_symmetry(const ChainModel& m, const PauliSum& u, double tol = 1e-12);

/// The candidates tracked throughout: G_o, G_e, Z_0, Z_{n-1}, the x/y edge
/// operators of both ends and every K_l.
std::vector<std::pair<std::string, PauliString>> canonical_symmetries(int n);

}  // namespace dspt

#endif  // DSPT_MODEL_HPP_
