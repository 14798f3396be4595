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

#include "dspt/perturbation.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <unordered_set>

#include "dspt/errors.hpp"
#include "dspt/opspace.hpp"

namespace dspt {

std::string_view perturbation_name(PerturbationKind k) { return k == PerturbationKind::XX ? "XX" : "Y"; }

PerturbationKind parse_perturbation(std::string_view name) {
  if (name == "XX") return PerturbationKind::XX;
  if (name == "Y") return PerturbationKind::Y;
  throw std::invalid_argument("unknown perturbation '" + std::string(name) + "'");
}

PauliSum perturbation_operator(int n, PerturbationKind k) {
  PauliSum v(n);
  if (k == PerturbationKind::XX) {
    for (int l = 0; l + 1 < n; ++l) {
      v.add(1.0, PauliString::single(n, l, Letter::X) * PauliString::single(n, l + 1, Letter::X));
    }
  } else {
    for (int l = 0; l < n; ++l) v.add(1.0, PauliString::single(n, l, Letter::Y));
  }
  return v;
}

std::vector<PauliString> steady_strings(int n) {
  std::vector<PauliString> a{PauliString(n)}, b{PauliString(n)};
  for (int axis = 0; axis < 3; ++axis) {
    a.push_back(ops::strong_odd(n, axis));
    b.push_back(ops::strong_even(n, axis));
  }
  std::vector<PauliString> out;
  for (const auto& s : a) {
    for (const auto& t : b) out.push_back(s * t);
  }
  return out;
}

std::pair<int, int> flip_sector(const PauliString& s) {
  const int n = s.num_sites();
  return {commutes(s, ops::flip_odd(n)) ? 1 : -1, commutes(s, ops::flip_even(n)) ? 1 : -1};
}

namespace {

struct FragmentSolve {
  OperatorBlock block;
  Eigen::PartialPivLU<Eigen::MatrixXcd> lu;
  double condition = 0;
};

}  // namespace

EffectiveGenerator effective_L2(const ChainModel& m, const PauliSum& v) {
  if (m.jump_kind() != JumpKind::ZIZ) throw UnsupportedModelError("effective generator needs ZIZ jumps");
  const int n = m.num_sites();
  if (n < 4) throw std::invalid_argument("effective generator needs N >= 4");
  if (v.num_sites() != n) throw DimensionError("perturbation has the wrong site count");
  if (!v.is_hermitian()) throw std::invalid_argument("perturbation must be Hermitian");
  const PauliLiouvillian l0 = PauliLiouvillian::unperturbed(m);
  const PauliLiouvillian vs(v, {}, 0.0);

  EffectiveGenerator g;
  g.basis = steady_strings(n);
  const auto nb = static_cast<Eigen::Index>(g.basis.size());
  std::unordered_map<PauliKey, int, PauliKeyHash> steady_index;
  for (Eigen::Index i = 0; i < nb; ++i) steady_index.emplace(key_of(g.basis[static_cast<std::size_t>(i)]), i);

  // Each Q fragment is built and factorized once, whichever element reaches it.
  std::vector<FragmentSolve> frags;
  std::unordered_map<PauliKey, int, PauliKeyHash> frag_of;
  auto fragment_for = [&](const PauliString& s) -> int {
    auto it = frag_of.find(key_of(s));
    if (it != frag_of.end()) return it->second;
    FragmentSolve f;
    PauliString seed = s.stripped();
    f.block = closure(l0, std::span<const PauliString>(&seed, 1), Picture::Schrodinger, 1u << 14);
    for (const auto& b : f.block.basis) {
      if (steady_index.count(key_of(b))) throw NumericalError("perturbation reaches a fragment holding a steady string");
    }
    Eigen::MatrixXcd a = Eigen::MatrixXcd(f.block.matrix);
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(a);
    const auto& sv = svd.singularValues();
    f.condition = sv[sv.size() - 1] > 0 ? sv[0] / sv[sv.size() - 1] : std::numeric_limits<double>::infinity();
    if (f.condition > 1e12) {
      throw NumericalError("fragment restriction is singular (condition " + std::to_string(f.condition) + ")");
    }
    f.lu.compute(a);
    const int id = static_cast<int>(frags.size());
    for (const auto& b : f.block.basis) frag_of.emplace(key_of(b), id);
    frags.push_back(std::move(f));
    return id;
  };

  g.l2 = Eigen::MatrixXcd::Zero(nb, nb);
  g.reached.resize(g.basis.size());
  for (Eigen::Index j = 0; j < nb; ++j) {
    const PauliSum r = vs.apply(PauliSum(g.basis[static_cast<std::size_t>(j)]), Picture::Schrodinger);
    std::unordered_map<int, Eigen::VectorXcd> rhs;
    for (const auto& t : r.terms()) {
      if (steady_index.count(key_of(t.op))) {
        g.first_order = std::max(g.first_order, std::abs(t.coeff));
        continue;
      }
      const int id = fragment_for(t.op);
      auto& b = rhs[id];
      if (b.size() == 0) b = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(frags[id].block.size()));
      b[frags[id].block.find(t.op)] += t.coeff;
    }
    PauliSum x(n);
    std::vector<int> ids;
    for (auto& [id, b] : rhs) ids.push_back(id);
    std::sort(ids.begin(), ids.end());
    for (int id : ids) {
      const auto& f = frags[static_cast<std::size_t>(id)];
      g.max_condition = std::max(g.max_condition, f.condition);
      Eigen::VectorXcd sol = f.lu.solve(rhs[id]);
      for (Eigen::Index k = 0; k < sol.size(); ++k) {
        if (sol[k] != cplx(0.0)) x.add(sol[k], f.block.basis[static_cast<std::size_t>(k)]);
        g.reached[static_cast<std::size_t>(j)].push_back(f.block.basis[static_cast<std::size_t>(k)]);
      }
    }
    const PauliSum y = vs.apply(x, Picture::Schrodinger);
    for (const auto& t : y.terms()) {
      auto it = steady_index.find(key_of(t.op));
      if (it != steady_index.end()) g.l2(it->second, j) -= t.coeff * m.J();
    }
  }
  g.l2_diag.resize(g.basis.size());
  for (Eigen::Index i = 0; i < nb; ++i) {
    g.l2_diag[static_cast<std::size_t>(i)] = g.l2(i, i).real();
    for (Eigen::Index j = 0; j < nb; ++j) {
      g.max_imag = std::max(g.max_imag, std::abs(g.l2(i, j).imag()));
      if (i != j) g.max_offdiag = std::max(g.max_offdiag, std::abs(g.l2(i, j)));
    }
  }
  return g;
}

EffectiveGenerator effective_L2(const ChainModel& m, PerturbationKind k) {
  return effective_L2(m, perturbation_operator(m.num_sites(), k));
}

double spread_delta(const EffectiveGenerator& g) {
  double d = 0;
  for (double v : g.l2_diag) d = std::max(d, -v);
  return d;
}

double closed_form_L2_Z1(double kappa, double J) {
  if (!(kappa > 0) || !(J > 0)) throw std::invalid_argument("kappa and J must be positive");
  const double x = kappa / J, x2 = x * x;
  return (8 * x2 * x + 3 * x) / (16 * x2 * x2 + 9 * x2 + 1);
}

double closed_form_spread_Hy(double kappa, double J, int num_sites) {
  if (!(kappa > 0) || !(J > 0)) throw std::invalid_argument("kappa and J must be positive");
  if (num_sites < 4) throw std::invalid_argument("closed form needs N >= 4");
  const double x = kappa / J, x2 = x * x;
  return 16 * x / (8 * x2 + 1) + 2 / (3 * x) +
         (num_sites - 4) * 8 * x * (64 * x2 + 3) / (1536 * x2 * x2 + 152 * x2 + 3);
}

}  // namespace dspt
