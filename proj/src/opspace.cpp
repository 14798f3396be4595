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

#include "dspt/opspace.hpp"

#include <cmath>
#include <string>

#include "dspt/errors.hpp"

namespace dspt {

PauliLiouvillian::PauliLiouvillian(PauliSum h, std::vector<PauliSum> jumps, double kappa)
    : n_(h.num_sites()), h_(std::move(h)), jumps_(std::move(jumps)), kappa_(kappa) {
  if (!h_.is_hermitian()) throw std::invalid_argument("Hamiltonian must be Hermitian");
  for (const auto& f : jumps_) {
    if (f.num_sites() != n_) throw DimensionError("jump operator has the wrong site count");
    if (f.size() != 1) pauli_jumps_ = false;
  }
  for (const auto& f : jumps_) {
    if (pauli_jumps_ && f.size() == 1) {
      jump_strings_.push_back(f.terms()[0].op);
      jump_weights_.push_back(std::norm(f.terms()[0].coeff));
    }
    jumps_dag_.push_back(f.adjoint());
    fdf_.push_back(f.adjoint() * f);
  }
}

PauliLiouvillian PauliLiouvillian::from_model(const ChainModel& m) {
  return PauliLiouvillian(build_hamiltonian(m), build_jumps(m), m.kappa());
}

PauliLiouvillian PauliLiouvillian::unperturbed(const ChainModel& m) {
  return from_model(m.with_perturbation(0.0, 0.0));
}

void PauliLiouvillian::apply(const PauliString& p, Picture pic, std::vector<PauliSum::Term>& out) const {
  const double s = pic == Picture::Schrodinger ? -1.0 : 1.0;
  // -i[cT, P] = -2i c T P when T and P anticommute, zero otherwise.
  for (const auto& t : h_.terms()) {
    if (commutes(t.op, p)) continue;
    PauliString tp = t.op * p;
    out.push_back({cplx(0, 2 * s) * t.coeff.real() * tp.phase(), tp.stripped()});
  }
  if (kappa_ == 0.0) return;
  if (pauli_jumps_) {
    // 2 F P F^dag - 2 |c|^2 P = -4 |c|^2 P for anticommuting F.
    double diag = 0;
    for (std::size_t l = 0; l < jump_strings_.size(); ++l) {
      if (!commutes(jump_strings_[l], p)) diag -= 4 * kappa_ * jump_weights_[l];
    }
    if (diag != 0) out.push_back({diag, p});
    return;
  }
  PauliSum ps(p);
  for (std::size_t l = 0; l < jumps_.size(); ++l) {
    const PauliSum& a = pic == Picture::Schrodinger ? jumps_[l] : jumps_dag_[l];
    const PauliSum& b = pic == Picture::Schrodinger ? jumps_dag_[l] : jumps_[l];
    PauliSum d = a * ps * b * cplx(2.0) - fdf_[l] * ps - ps * fdf_[l];
    for (const auto& t : d.terms()) out.push_back({kappa_ * t.coeff, t.op});
  }
}

PauliSum PauliLiouvillian::apply(const PauliSum& op, Picture pic) const {
  if (op.num_sites() != n_) throw DimensionError("operator has the wrong site count");
  std::vector<PauliSum::Term> buf;
  PauliSum out(n_);
  for (const auto& t : op.terms()) {
    buf.clear();
    apply(t.op, pic, buf);
    for (const auto& u : buf) out.add(t.coeff * u.coeff, u.op);
  }
  return out;
}

double PauliLiouvillian::norm_bound() const {
  double b = 0;
  for (const auto& t : h_.terms()) b += 2 * std::abs(t.coeff);
  for (const auto& f : jumps_) {
    double c = 0;
    for (const auto& t : f.terms()) c += std::abs(t.coeff);
    b += 4 * kappa_ * c * c;
  }
  return b;
}

int OperatorBlock::find(const PauliString& p) const {
  auto it = index.find(key_of(p));
  return it == index.end() ? -1 : it->second;
}

OperatorBlock closure(const PauliLiouvillian& L, std::span<const PauliString> seeds, Picture pic,
                      std::size_t max_size) {
  OperatorBlock blk;
  std::vector<Eigen::Triplet<cplx>> trip;
  auto intern = [&](const PauliString& p) {
    auto [it, inserted] = blk.index.try_emplace(key_of(p), static_cast<int>(blk.basis.size()));
    if (inserted) {
      if (blk.basis.size() >= max_size) {
        throw CapacityError("operator closure exceeds " + std::to_string(max_size) + " Pauli strings");
      }
      blk.basis.push_back(p.stripped());
    }
    return it->second;
  };
  for (const auto& s : seeds) intern(s);
  std::vector<PauliSum::Term> buf;
  for (std::size_t j = 0; j < blk.basis.size(); ++j) {
    buf.clear();
    PauliString pj = blk.basis[j];
    L.apply(pj, pic, buf);
    for (const auto& t : buf) {
      int i = intern(t.op);
      trip.emplace_back(i, static_cast<int>(j), t.coeff);
    }
  }
  auto n = static_cast<Eigen::Index>(blk.basis.size());
  blk.matrix.resize(n, n);
  blk.matrix.setFromTriplets(trip.begin(), trip.end());
  blk.matrix.prune(cplx(0.0));
  return blk;
}

Eigen::SparseMatrix<double> real_part_checked(const Eigen::SparseMatrix<cplx>& m, double tol) {
  Eigen::SparseMatrix<double> r(m.rows(), m.cols());
  std::vector<Eigen::Triplet<double>> trip;
  trip.reserve(static_cast<std::size_t>(m.nonZeros()));
  for (int k = 0; k < m.outerSize(); ++k) {
    for (Eigen::SparseMatrix<cplx>::InnerIterator it(m, k); it; ++it) {
      if (std::abs(it.value().imag()) > tol) {
        throw NumericalError("operator-space generator has an unexpected imaginary entry");
      }
      trip.emplace_back(static_cast<int>(it.row()), static_cast<int>(it.col()), it.value().real());
    }
  }
  r.setFromTriplets(trip.begin(), trip.end());
  return r;
}

}  // namespace dspt
