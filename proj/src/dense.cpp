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

#include "dspt/dense.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "dspt/errors.hpp"
#include "dspt/model.hpp"

namespace dspt {

namespace {

const cplx kIPow[4] = {cplx(1, 0), cplx(0, 1), cplx(-1, 0), cplx(0, -1)};

std::size_t dim_of(int n) { return std::size_t{1} << n; }

void check_state_cap(int n) {
  if (n < 1 || n > kStateVectorCap) {
    throw CapacityError("state vectors support 1.." + std::to_string(kStateVectorCap) + " sites, got " +
                        std::to_string(n));
  }
}

void check_operator_cap(int n) {
  if (n < 1 || n > kDenseOperatorCap) {
    throw CapacityError("dense operators support 1.." + std::to_string(kDenseOperatorCap) + " sites, got " +
                        std::to_string(n));
  }
}

// P|b> = i^{k+y} (-1)^{|z & b|} |b ^ x>.
inline cplx base_phase(const PauliString& p) { return kIPow[(p.phase_exp() + p.y_count()) & 3]; }

inline bool odd_parity(std::uint64_t v) { return std::popcount(v) & 1; }

}  // namespace

StateVector::StateVector(int num_sites, CVec amp) : n_(num_sites), amp_(std::move(amp)) {
  check_state_cap(num_sites);
  if (static_cast<std::size_t>(amp_.size()) != dim_of(num_sites)) throw DimensionError("state vector has wrong length");
  double nrm = amp_.norm();
  if (!(nrm > 0) || !std::isfinite(nrm)) throw DegenerateInputError("state vector has zero or non-finite norm");
  amp_ /= nrm;
}

StateVector StateVector::basis(int num_sites, std::uint64_t index) {
  check_state_cap(num_sites);
  if (index >= dim_of(num_sites)) throw std::out_of_range("basis index out of range");
  CVec v = CVec::Zero(static_cast<Eigen::Index>(dim_of(num_sites)));
  v[static_cast<Eigen::Index>(index)] = 1.0;
  return StateVector(num_sites, std::move(v));
}

DensityMatrix::DensityMatrix(int num_sites, CMat m, double tol) : n_(num_sites), m_(std::move(m)) {
  check_operator_cap(num_sites);
  auto d = static_cast<Eigen::Index>(dim_of(num_sites));
  if (m_.rows() != d || m_.cols() != d) throw DimensionError("density matrix has wrong shape");
  double herm = (m_ - m_.adjoint()).cwiseAbs().maxCoeff();
  if (herm > tol) throw std::invalid_argument("density matrix is not Hermitian (deviation " + std::to_string(herm) + ")");
  cplx tr = m_.trace();
  if (std::abs(tr - 1.0) > tol) throw std::invalid_argument("density matrix trace " + std::to_string(tr.real()) + " != 1");
  m_ = 0.5 * (m_ + m_.adjoint()).eval();
}

DensityMatrix DensityMatrix::from_pure(const StateVector& psi) {
  return DensityMatrix(psi.num_sites(), psi.amplitudes() * psi.amplitudes().adjoint());
}

DensityMatrix DensityMatrix::maximally_mixed(int num_sites) {
  check_operator_cap(num_sites);
  auto d = static_cast<Eigen::Index>(dim_of(num_sites));
  return DensityMatrix(num_sites, CMat::Identity(d, d) / static_cast<double>(d));
}

double DensityMatrix::min_eigenvalue() const {
  Eigen::SelfAdjointEigenSolver<CMat> es(m_, Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}

void apply_pauli(const PauliString& p, const cplx* in, cplx* out, std::size_t dim) {
  const std::uint64_t x = p.x_mask(), z = p.z_mask();
  const cplx ph = base_phase(p);
  for (std::size_t b = 0; b < dim; ++b) {
    out[b ^ x] = odd_parity(z & b) ? -ph * in[b] : ph * in[b];
  }
}

CVec apply(const PauliString& p, const CVec& v) {
  if (static_cast<std::size_t>(v.size()) != dim_of(p.num_sites())) throw DimensionError("vector length mismatch");
  CVec out(v.size());
  apply_pauli(p, v.data(), out.data(), static_cast<std::size_t>(v.size()));
  return out;
}

CVec apply(const PauliSum& op, const CVec& v) {
  if (static_cast<std::size_t>(v.size()) != dim_of(op.num_sites())) throw DimensionError("vector length mismatch");
  CVec out = CVec::Zero(v.size());
  CVec tmp(v.size());
  for (const auto& t : op.terms()) {
    apply_pauli(t.op, v.data(), tmp.data(), static_cast<std::size_t>(v.size()));
    out += t.coeff * tmp;
  }
  return out;
}

cplx expectation(const PauliString& p, const CVec& v) {
  if (static_cast<std::size_t>(v.size()) != dim_of(p.num_sites())) throw DimensionError("vector length mismatch");
  const std::uint64_t x = p.x_mask(), z = p.z_mask();
  cplx acc = 0;
  for (std::size_t b = 0; b < static_cast<std::size_t>(v.size()); ++b) {
    cplx term = std::conj(v[static_cast<Eigen::Index>(b ^ x)]) * v[static_cast<Eigen::Index>(b)];
    acc += odd_parity(z & b) ? -term : term;
  }
  return base_phase(p) * acc;
}

cplx expectation(const PauliSum& op, const CVec& v) {
  cplx acc = 0;
  for (const auto& t : op.terms()) acc += t.coeff * expectation(t.op, v);
  return acc;
}

double expectation(const PauliString& p, const StateVector& psi) { return expectation(p, psi.amplitudes()).real(); }
double expectation(const PauliSum& op, const StateVector& psi) { return expectation(op, psi.amplitudes()).real(); }

cplx trace_product(const PauliString& p, const CMat& rho) {
  if (static_cast<std::size_t>(rho.rows()) != dim_of(p.num_sites())) throw DimensionError("matrix size mismatch");
  const std::uint64_t x = p.x_mask(), z = p.z_mask();
  // Tr(rho P) = sum_b rho(b, b^x) <b^x|P|b>.
  cplx acc = 0;
  for (std::size_t b = 0; b < static_cast<std::size_t>(rho.rows()); ++b) {
    cplx term = rho(static_cast<Eigen::Index>(b), static_cast<Eigen::Index>(b ^ x));
    acc += odd_parity(z & b) ? -term : term;
  }
  return base_phase(p) * acc;
}

double expectation(const PauliString& p, const DensityMatrix& rho) { return trace_product(p, rho.matrix()).real(); }

double expectation(const PauliSum& op, const DensityMatrix& rho) {
  cplx acc = 0;
  for (const auto& t : op.terms()) acc += t.coeff * trace_product(t.op, rho.matrix());
  return acc.real();
}

SpCMat materialize(const PauliSum& op) {
  check_operator_cap(op.num_sites());
  auto d = dim_of(op.num_sites());
  std::vector<Eigen::Triplet<cplx>> trip;
  trip.reserve(op.size() * d);
  for (const auto& t : op.terms()) {
    const std::uint64_t x = t.op.x_mask(), z = t.op.z_mask();
    cplx ph = t.coeff * base_phase(t.op);
    for (std::size_t b = 0; b < d; ++b) {
      trip.emplace_back(static_cast<int>(b ^ x), static_cast<int>(b), odd_parity(z & b) ? -ph : ph);
    }
  }
  SpCMat m(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(d));
  m.setFromTriplets(trip.begin(), trip.end());
  m.prune(cplx(0.0));
  return m;
}

SpCMat materialize(const PauliString& p) { return materialize(PauliSum(p)); }

CMat materialize_dense(const PauliSum& op) { return CMat(materialize(op)); }

ClusterStateSpec ClusterStateSpec::uniform(BasisKind kind, int n, int sign) {
  return ClusterStateSpec{kind, std::vector<int>(static_cast<std::size_t>(n), sign)};
}

std::vector<PauliString> cluster_stabilizers(const ClusterStateSpec& spec) {
  int n = spec.num_sites();
  if (n < 4 || n % 2 != 0) throw std::invalid_argument("cluster state needs an even chain with N >= 4");
  for (int s : spec.signs) {
    if (s != 1 && s != -1) throw std::invalid_argument("stabilizer signs must be +1 or -1");
  }
  std::vector<PauliString> out;
  out.reserve(static_cast<std::size_t>(n));
  auto signed_op = [&](const PauliString& p, int s) { return s > 0 ? p : -p; };
  bool edge = spec.kind == BasisKind::EdgeMode;
  out.push_back(signed_op(edge ? ops::edge_left(n, 0) : ops::flip_odd(n), spec.signs[0]));
  for (int l = 1; l + 1 < n; ++l) out.push_back(signed_op(ops::cluster(n, l), spec.signs[static_cast<std::size_t>(l)]));
  out.push_back(signed_op(edge ? ops::edge_right(n, 0) : ops::flip_even(n), spec.signs.back()));
  return out;
}

StateVector prepare_cluster_state(const ClusterStateSpec& spec) {
  std::vector<PauliSum> obs;
  for (const auto& s : cluster_stabilizers(spec)) obs.emplace_back(s);
  // Every non-identity stabilizer product carries an X, so |0...0> always
  // overlaps the target; a vanishing projection signals inconsistent input.
  return prepare_projected_state(spec.num_sites(), obs, 1e-12, 1);
}

StateVector prepare_projected_state(int num_sites, std::span<const PauliSum> observables, double min_norm_sq,
                                    int max_seeds) {
  check_state_cap(num_sites);
  auto d = static_cast<Eigen::Index>(dim_of(num_sites));
  for (int seed = 0; seed < max_seeds && seed < d; ++seed) {
    CVec v = CVec::Zero(d);
    v[seed] = 1.0;
    for (const auto& o : observables) v = 0.5 * (v + dspt::apply(o, v));
    if (v.squaredNorm() > min_norm_sq) return StateVector(num_sites, std::move(v));
  }
  throw DegenerateInputError("stabilizer projectors annihilate every tried seed state");
}

StateVector prepare_edge_direction_state(int num_sites, std::array<double, 3> dir, int bulk_sign) {
  int n = num_sites;
  double nrm = std::sqrt(dir[0] * dir[0] + dir[1] * dir[1] + dir[2] * dir[2]);
  if (!(nrm > 0)) throw std::invalid_argument("edge direction must be non-zero");
  std::vector<PauliSum> obs;
  for (int l = 1; l + 1 < n; ++l) obs.emplace_back(ops::cluster(n, l), static_cast<double>(bulk_sign));
  obs.emplace_back(ops::edge_right(n, 2));
  PauliSum edge(n);
  for (int a = 0; a < 3; ++a) edge.add(dir[static_cast<std::size_t>(a)] / nrm, ops::edge_left(n, a));
  obs.push_back(edge);
  return prepare_projected_state(n, obs);
}

PauliString string_order_operator(int n, std::span<const Letter> u_letters, Letter o_left, Letter o_right, int k) {
  if (k < 2 || k > n) throw std::out_of_range("string order length k must satisfy 2 <= k <= N");
  if (static_cast<int>(u_letters.size()) < k - 1) throw std::invalid_argument("too few string letters");
  PauliString p(n);
  if (o_left != Letter::I) p = p * PauliString::single(n, 0, o_left);
  for (int i = 1; i <= k - 2; ++i) {
    Letter u = u_letters[static_cast<std::size_t>(i)];
    if (u != Letter::I) p = p * PauliString::single(n, i, u);
  }
  if (o_right != Letter::I) p = p * PauliString::single(n, k - 1, o_right);
  return p;
}

double string_order(const DensityMatrix& rho, std::span<const Letter> u_letters, Letter o_left, Letter o_right,
                    int k) {
  return expectation(string_order_operator(rho.num_sites(), u_letters, o_left, o_right, k), rho);
}

double string_order_star(const DensityMatrix& rho) {
  std::vector<Letter> u(static_cast<std::size_t>(rho.num_sites()), Letter::X);
  return string_order(rho, u, Letter::Y, Letter::Y, rho.num_sites());
}

DensityMatrix partial_trace(const DensityMatrix& rho, std::span<const int> keep_sites) {
  int n = rho.num_sites();
  if (keep_sites.empty()) throw std::invalid_argument("partial trace needs at least one kept site");
  std::vector<int> keep(keep_sites.begin(), keep_sites.end());
  std::sort(keep.begin(), keep.end());
  if (std::adjacent_find(keep.begin(), keep.end()) != keep.end()) throw std::invalid_argument("duplicate kept site");
  if (keep.front() < 0 || keep.back() >= n) throw std::out_of_range("kept site out of range");
  std::vector<int> traced;
  for (int l = 0, j = 0; l < n; ++l) {
    if (j < static_cast<int>(keep.size()) && keep[static_cast<std::size_t>(j)] == l) ++j;
    else traced.push_back(l);
  }
  auto spread = [](std::uint64_t v, const std::vector<int>& sites) {
    std::uint64_t out = 0;
    for (std::size_t i = 0; i < sites.size(); ++i) {
      if ((v >> i) & 1) out |= 1ULL << sites[i];
    }
    return out;
  };
  std::size_t dk = std::size_t{1} << keep.size(), dt = std::size_t{1} << traced.size();
  std::vector<std::uint64_t> kidx(dk), tidx(dt);
  for (std::size_t i = 0; i < dk; ++i) kidx[i] = spread(i, keep);
  for (std::size_t t = 0; t < dt; ++t) tidx[t] = spread(t, traced);
  const CMat& m = rho.matrix();
  CMat red = CMat::Zero(static_cast<Eigen::Index>(dk), static_cast<Eigen::Index>(dk));
  for (std::size_t j = 0; j < dk; ++j) {
    for (std::size_t i = 0; i < dk; ++i) {
      cplx acc = 0;
      for (std::size_t t = 0; t < dt; ++t) {
        acc += m(static_cast<Eigen::Index>(kidx[i] | tidx[t]), static_cast<Eigen::Index>(kidx[j] | tidx[t]));
      }
      red(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = acc;
    }
  }
  return DensityMatrix(static_cast<int>(keep.size()), std::move(red), 1e-8);
}

}  // namespace dspt
