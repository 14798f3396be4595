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

#include "dspt/model.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "dspt/errors.hpp"

namespace dspt {

std::string_view jump_kind_name(JumpKind k) {
  switch (k) {
    case JumpKind::ZIZ: return "ZIZ";
    case JumpKind::Y: return "Y";
    case JumpKind::SxMinus: return "SxMinus";
    case JumpKind::Custom: return "Custom";
  }
  return "?";
}

JumpKind parse_jump_kind(std::string_view name) {
  if (name == "ZIZ") return JumpKind::ZIZ;
  if (name == "Y") return JumpKind::Y;
  if (name == "SxMinus") return JumpKind::SxMinus;
  if (name == "Custom") return JumpKind::Custom;
  throw std::invalid_argument("unknown jump kind '" + std::string(name) + "'");
}

ChainModel::ChainModel(Params params) : p_(std::move(params)) {
  int n = p_.num_sites;
  if (n < 4 || n % 2 != 0) throw std::invalid_argument("chain length must be even and >= 4");
  if (n > PauliString::kMaxSites) throw CapacityError("chain length exceeds 64 sites");
  if (!(p_.J > 0)) throw std::invalid_argument("J must be positive");
  if (!(p_.kappa >= 0)) throw std::invalid_argument("kappa must be non-negative");
  if (!std::isfinite(p_.v_xx) || !std::isfinite(p_.v_y)) throw std::invalid_argument("non-finite perturbation");
  if (p_.jumps == JumpKind::Custom) {
    for (const auto& f : p_.custom_jumps) {
      if (f.num_sites() != n) throw DimensionError("custom jump operator has the wrong site count");
    }
  } else if (!p_.custom_jumps.empty()) {
    throw std::invalid_argument("custom jump list given for a built-in jump kind");
  }
}

ChainModel ChainModel::with_kappa(double kappa) const {
  Params p = p_;
  p.kappa = kappa;
  return ChainModel(std::move(p));
}

ChainModel ChainModel::with_perturbation(double v_xx, double v_y) const {
  Params p = p_;
  p.v_xx = v_xx;
  p.v_y = v_y;
  return ChainModel(std::move(p));
}

ChainModel ChainModel::with_num_sites(int n) const {
  Params p = p_;
  p.num_sites = n;
  return ChainModel(std::move(p));
}

PauliSum build_hamiltonian(const ChainModel& m) {
  int n = m.num_sites();
  PauliSum h(n);
  for (int l = 1; l + 1 < n; ++l) h.add(m.J(), ops::cluster(n, l));
  if (m.v_xx() != 0.0) {
    for (int l = 0; l + 1 < n; ++l) {
      h.add(m.v_xx(), PauliString::single(n, l, Letter::X) * PauliString::single(n, l + 1, Letter::X));
    }
  }
  if (m.v_y() != 0.0) {
    for (int l = 0; l < n; ++l) h.add(m.v_y(), PauliString::single(n, l, Letter::Y));
  }
  return h;
}

std::vector<PauliSum> build_jumps(const ChainModel& m) {
  int n = m.num_sites();
  std::vector<PauliSum> out;
  switch (m.jump_kind()) {
    case JumpKind::ZIZ:
      for (int l = 1; l + 1 < n; ++l) {
        out.emplace_back(PauliString::single(n, l - 1, Letter::Z) * PauliString::single(n, l + 1, Letter::Z));
      }
      break;
    case JumpKind::Y:
      for (int l = 0; l < n; ++l) out.emplace_back(PauliString::single(n, l, Letter::Y));
      break;
    case JumpKind::SxMinus:
      for (int l = 0; l < n; ++l) {
        PauliSum f(n);
        f.add(0.5, PauliString::single(n, l, Letter::Z));
        f.add(cplx(0, 0.5), PauliString::single(n, l, Letter::Y));
        out.push_back(std::move(f));
      }
      break;
    case JumpKind::Custom:
      out = m.params().custom_jumps;
      break;
  }
  return out;
}

bool has_pauli_jumps(const ChainModel& m) {
  for (const auto& f : build_jumps(m)) {
    if (f.size() != 1) return false;
  }
  return true;
}

namespace ops {

PauliString cluster(int n, int site) {
  if (site < 1 || site > n - 2) throw std::out_of_range("cluster operator needs an interior site");
  return PauliString::single(n, site - 1, Letter::Z) * PauliString::single(n, site, Letter::X) *
         PauliString::single(n, site + 1, Letter::Z);
}

namespace {
PauliString sublattice_x(int n, int first) {
  std::uint64_t x = 0;
  for (int l = first; l < n; l += 2) x |= 1ULL << l;
  return PauliString(n, x, 0, 0);
}
void check_axis(int axis) {
  if (axis < 0 || axis > 2) throw std::out_of_range("axis must be 0, 1 or 2");
}
}  // namespace

PauliString flip_odd(int n) { return sublattice_x(n, 0); }
PauliString flip_even(int n) { return sublattice_x(n, 1); }

PauliString edge_left(int n, int axis) {
  check_axis(axis);
  if (axis == 2) return PauliString::single(n, 0, Letter::Z);
  Letter l = axis == 0 ? Letter::X : Letter::Y;
  return PauliString::single(n, 0, l) * PauliString::single(n, 1, Letter::Z);
}

PauliString edge_right(int n, int axis) {
  check_axis(axis);
  if (axis == 2) return PauliString::single(n, n - 1, Letter::Z);
  Letter l = axis == 0 ? Letter::X : Letter::Y;
  return PauliString::single(n, n - 2, Letter::Z) * PauliString::single(n, n - 1, l);
}

PauliString strong_odd(int n, int axis) {
  check_axis(axis);
  PauliString g = flip_odd(n), z = PauliString::single(n, 0, Letter::Z);
  if (axis == 0) return g;
  if (axis == 2) return z;
  return (g * z).times_i(1);
}

PauliString strong_even(int n, int axis) {
  check_axis(axis);
  PauliString g = flip_even(n), z = PauliString::single(n, n - 1, Letter::Z);
  if (axis == 0) return g;
  if (axis == 2) return z;
  return (g * z).times_i(1);
}

}  // namespace ops

std::string_view symmetry_class_name(SymmetryClass c) {
  switch (c) {
    case SymmetryClass::Strong: return "Strong";
    case SymmetryClass::Weak: return "Weak";
    case SymmetryClass::Broken: return "Broken";
  }
  return "?";
}

SymmetryReport classify_symmetry(const ChainModel& m, const PauliSum& u, double tol) {
  int n = m.num_sites();
  if (u.num_sites() != n) throw DimensionError("candidate symmetry has the wrong site count");
  PauliSum ident{PauliString(n)};
  if (!(u * u.adjoint()).approx_equal(ident, tol)) throw std::invalid_argument("candidate symmetry is not unitary");

  SymmetryReport rep;
  rep.op = u;
  rep.commutes_with_h = commutator(build_hamiltonian(m), u).pruned(tol).empty();
  auto jumps = build_jumps(m);

  bool strong = rep.commutes_with_h;
  bool weak = rep.commutes_with_h;
  std::vector<double> phases;
  for (const auto& f : jumps) {
    PauliSum g = u * f * u.adjoint();
    if (!commutator(f, u).pruned(tol).empty()) strong = false;
    // g must equal c f with |c| = 1 on an identical term list.
    bool same = g.size() == f.size() && !f.empty();
    cplx c = 0;
    for (std::size_t i = 0; same && i < f.size(); ++i) {
      if (g.terms()[i].op != f.terms()[i].op) {
        same = false;
        break;
      }
      cplx ci = g.terms()[i].coeff / f.terms()[i].coeff;
      if (i == 0) c = ci;
      else if (std::abs(ci - c) > tol) same = false;
    }
    if (!same || std::abs(std::abs(c) - 1.0) > tol) {
      weak = false;
      phases.push_back(std::numeric_limits<double>::quiet_NaN());
    } else {
      double phi = std::arg(c);
      if (std::abs(phi) < tol) phi = 0.0;
      if (phi < 0) phi += 2 * std::numbers::pi;
      phases.push_back(phi);
    }
  }
  if (strong) {
    rep.classification = SymmetryClass::Strong;
    rep.phases.assign(jumps.size(), 0.0);
  } else if (weak) {
    rep.classification = SymmetryClass::Weak;
    rep.phases = std::move(phases);
  } else {
    rep.classification = SymmetryClass::Broken;
  }
  return rep;
}

std::vector<std::pair<std::string, PauliString>> canonical_symmetries(int n) {
  std::vector<std::pair<std::string, PauliString>> out = {
      {"G_o", ops::flip_odd(n)},          {"G_e", ops::flip_even(n)},
      {"Sz_L", ops::edge_left(n, 2)},     {"Sz_R", ops::edge_right(n, 2)},
      {"Sx_L", ops::edge_left(n, 0)},     {"Sy_L", ops::edge_left(n, 1)},
      {"Sx_R", ops::edge_right(n, 0)},    {"Sy_R", ops::edge_right(n, 1)},
  };
  for (int l = 1; l + 1 < n; ++l) out.emplace_back("K_" + std::to_string(l + 1), ops::cluster(n, l));
  return out;
}

}  // namespace dspt
