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

#include "dspt/lindblad.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <string>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>
#include <Eigen/SparseLU>
#include <unsupported/Eigen/KroneckerProduct>

#include "dspt/errors.hpp"
#include "dspt/integrators.hpp"

namespace dspt {

using RMat = Eigen::MatrixXd;
using RVec = Eigen::VectorXd;
using SpRMat = Eigen::SparseMatrix<double>;

// ---------------------------------------------------------------------------
// Vectorized generator

Superoperator::Superoperator(PauliSum h, std::vector<PauliSum> jumps, double kappa, int cap)
    : n_(h.num_sites()), h_(std::move(h)), jumps_(std::move(jumps)), kappa_(kappa) {
  if (n_ > cap || n_ > kSuperoperatorCap) {
    throw CapacityError("vectorized Lindbladian limited to N <= " + std::to_string(std::min(cap, kSuperoperatorCap)) +
                        " (4^N x 4^N), got N=" + std::to_string(n_));
  }
  if (!h_.is_hermitian()) throw std::invalid_argument("Hamiltonian must be Hermitian");
  for (const auto& f : jumps_) {
    if (f.num_sites() != n_) throw DimensionError("jump operator has the wrong site count");
  }
  const Eigen::Index d = Eigen::Index{1} << n_;
  SpCMat id(d, d);
  id.setIdentity();
  SpCMat H = materialize(h_);
  SpCMat Ht = SpCMat(H.transpose());
  SpCMat l = cplx(0, -1) * (SpCMat(Eigen::kroneckerProduct(id, H)) - SpCMat(Eigen::kroneckerProduct(Ht, id)));
  for (const auto& fs : jumps_) {
    SpCMat F = materialize(fs);
    SpCMat Fc = F.conjugate();
    SpCMat FdF = SpCMat(F.adjoint()) * F;
    SpCMat FdFt = SpCMat(FdF.transpose());
    SpCMat d1 = SpCMat(Eigen::kroneckerProduct(Fc, F)) * cplx(2.0);
    SpCMat d2 = Eigen::kroneckerProduct(id, FdF);
    SpCMat d3 = Eigen::kroneckerProduct(FdFt, id);
    l += cplx(kappa_) * (d1 - d2 - d3);
  }
  l.prune(cplx(0.0));
  l.makeCompressed();
  l_ = std::move(l);
}

Superoperator Superoperator::from_model(const ChainModel& m, int cap) {
  return Superoperator(build_hamiltonian(m), build_jumps(m), m.kappa(), cap);
}

CVec Superoperator::vectorize(const CMat& m) { return Eigen::Map<const CVec>(m.data(), m.size()); }

CMat Superoperator::unvectorize(const CVec& v, Eigen::Index dim) { return Eigen::Map<const CMat>(v.data(), dim, dim); }

namespace {

double one_norm(const SpCMat& m) {
  double best = 0;
  for (int k = 0; k < m.outerSize(); ++k) {
    double s = 0;
    for (SpCMat::InnerIterator it(m, k); it; ++it) s += std::abs(it.value());
    best = std::max(best, s);
  }
  return best;
}

void check_times(std::span<const double> times) {
  for (std::size_t i = 0; i < times.size(); ++i) {
    if (!(times[i] >= 0) || (i > 0 && times[i] < times[i - 1])) {
      throw std::invalid_argument("sample times must be non-negative and ascending");
    }
  }
}

}  // namespace

std::vector<CMat> evolve_operator(const Superoperator& L, const CMat& x0, std::span<const double> times,
                                  const EvolveOptions& opts) {
  check_times(times);
  const Eigen::Index d = Eigen::Index{1} << L.num_sites();
  if (x0.rows() != d || x0.cols() != d) throw DimensionError("initial operator has the wrong shape");
  const SpCMat& A = L.matrix();
  CVec y = Superoperator::vectorize(x0);
  std::vector<CMat> out;
  out.reserve(times.size());
  double t = 0.0;
  if (L.num_sites() <= opts.explicit_max_sites) {
    Dopri5Options o;
    o.rtol = opts.rtol;
    o.atol = opts.atol;
    Dopri5 stepper([&A](double, const CVec& v, CVec& dv) { dv.noalias() = A * v; }, o);
    for (double ts : times) {
      stepper.advance(t, y, ts);
      out.push_back(Superoperator::unvectorize(y, d));
    }
  } else {
    double anorm = one_norm(A);
    auto apply = [&A](const CVec& v, CVec& w) { w.noalias() = A * v; };
    for (double ts : times) {
      if (ts > t) y = expv<cplx>(ts - t, apply, y, anorm, opts.krylov_tol);
      t = ts;
      out.push_back(Superoperator::unvectorize(y, d));
    }
  }
  return out;
}

std::vector<DensityMatrix> evolve(const Superoperator& L, const DensityMatrix& rho0, std::span<const double> times,
                                  const EvolveOptions& opts) {
  auto mats = evolve_operator(L, rho0.matrix(), times, opts);
  std::vector<DensityMatrix> out;
  out.reserve(mats.size());
  for (std::size_t i = 0; i < mats.size(); ++i) {
    try {
      out.emplace_back(L.num_sites(), std::move(mats[i]), 1e-8);
    } catch (const std::invalid_argument& e) {
      throw NumericalError("evolved state left the density-matrix manifold at t=" + std::to_string(times[i]) + ": " +
                           e.what());
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Steady space

namespace {

struct Dsu {
  std::vector<std::uint32_t> parent;
  explicit Dsu(std::size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), 0u); }
  std::uint32_t find(std::uint32_t a) {
    while (parent[a] != a) {
      parent[a] = parent[parent[a]];
      a = parent[a];
    }
    return a;
  }
  void unite(std::uint32_t a, std::uint32_t b) {
    a = find(a);
    b = find(b);
    if (a != b) parent[std::max(a, b)] = std::min(a, b);
  }
};

struct BlockResult {
  std::vector<RVec> null_vectors;
  std::vector<cplx> slow;
};

// Columns of X orthonormalized in place (modified Gram-Schmidt, two passes).
void orthonormalize(RMat& X) {
  Eigen::HouseholderQR<RMat> qr(X);
  X = qr.householderQ() * RMat::Identity(X.rows(), X.cols());
}

BlockResult solve_block_dense(const SpRMat& Ms, double tol, double slow_cut) {
  BlockResult r;
  RMat M(Ms);
  Eigen::VectorXcd evals;
  {
    Eigen::EigenSolver<RMat> es;
    // Highly degenerate blocks need more QR sweeps than the default budget.
    es.setMaxIterations(100 * M.rows());
    es.compute(M, false);
    if (es.info() == Eigen::Success) {
      evals = es.eigenvalues();
    } else {
      Eigen::ComplexEigenSolver<Eigen::MatrixXcd> ces;
      ces.setMaxIterations(100 * M.rows());
      ces.compute(M.cast<cplx>(), false);
      if (ces.info() != Eigen::Success) {
        throw NumericalError("dense eigensolver failed on a generator block of size " + std::to_string(M.rows()));
      }
      evals = ces.eigenvalues();
    }
  }
  int zeros = 0;
  for (Eigen::Index i = 0; i < evals.size(); ++i) {
    cplx lam = evals[i];
    if (std::abs(lam) < tol) ++zeros;
    if (std::abs(lam) < slow_cut) r.slow.push_back(lam);
  }
  if (zeros == 0) return r;
  const Eigen::Index n = M.cols();
  // Eigen 3.4.0 BDCSVD can misplace singular vectors on degenerate spectra,
  // so its null vectors are checked and JacobiSVD is used if any is off.
  auto extract = [&](const auto& svd) {
    const auto& sv = svd.singularValues();
    if (n > zeros && sv[n - zeros - 1] < 1e3 * tol) {
      throw NumericalError("nullspace not separated from the rest of the spectrum (singular values " +
                           std::to_string(sv[n - zeros - 1]) + ", " + std::to_string(sv[n - zeros]) + ")");
    }
    std::vector<RVec> v;
    for (int k = 0; k < zeros; ++k) v.push_back(svd.matrixV().col(n - 1 - k));
    return v;
  };
  auto residual_ok = [&](const std::vector<RVec>& v) {
    for (const auto& x : v) {
      if ((M * x).norm() > 1e3 * tol) return false;
    }
    return true;
  };
  std::vector<RVec> v;
  if (n > 64) {
    v = extract(Eigen::BDCSVD<RMat>(M, Eigen::ComputeFullV));
  }
  if (v.empty() || !residual_ok(v)) v = extract(Eigen::JacobiSVD<RMat>(M, Eigen::ComputeFullV));
  for (auto& x : v) r.null_vectors.push_back(std::move(x));
  return r;
}

BlockResult solve_block_sparse(const SpRMat& M, double tol, double slow_cut, double shift, int width, int max_iter) {
  const Eigen::Index n = M.rows();
  SpRMat S = M;
  for (Eigen::Index i = 0; i < n; ++i) S.coeffRef(i, i) -= shift;
  S.makeCompressed();
  Eigen::SparseLU<SpRMat, Eigen::COLAMDOrdering<int>> lu;
  lu.compute(S);
  if (lu.info() != Eigen::Success) throw NumericalError("sparse LU of shifted generator block failed");

  std::mt19937_64 gen(0x5eedULL + static_cast<std::uint64_t>(n));
  std::normal_distribution<double> nd;
  while (true) {
    int p = static_cast<int>(std::min<Eigen::Index>(width, n));
    RMat X(n, p);
    for (Eigen::Index i = 0; i < X.size(); ++i) X.data()[i] = nd(gen);
    orthonormalize(X);
    Eigen::VectorXcd theta;
    Eigen::MatrixXcd Y;
    bool converged = false;
    double worst = 0;
    for (int it = 0; it < max_iter; ++it) {
      X = lu.solve(X);
      orthonormalize(X);
      RMat MX = M * X;
      RMat B = X.transpose() * MX;
      Eigen::EigenSolver<RMat> es(B);
      theta = es.eigenvalues();
      Y = es.eigenvectors();
      // Residuals of the Ritz pairs nearest zero.
      worst = 0;
      for (int k = 0; k < p; ++k) {
        if (std::abs(theta[k]) > slow_cut) continue;
        Eigen::VectorXcd v = X.cast<cplx>() * Y.col(k);
        Eigen::VectorXcd res = MX.cast<cplx>() * Y.col(k) - theta[k] * v;
        worst = std::max(worst, res.norm() / v.norm());
      }
      if (it > 2 && worst < 1e-11) {
        converged = true;
        break;
      }
    }
    if (!converged) {
      throw NumericalError("shift-invert iteration did not converge (residual " + std::to_string(worst) + ")");
    }
    double largest = 0;
    for (int k = 0; k < p; ++k) largest = std::max(largest, std::abs(theta[k]));
    if (largest < 1e3 * tol && p < n) {
      width *= 2;  // every Ritz value is zero: the block may hide more
      continue;
    }
    BlockResult r;
    RMat Z(n, 0);
    for (int k = 0; k < p; ++k) {
      if (std::abs(theta[k]) < slow_cut) r.slow.push_back(theta[k]);
      if (std::abs(theta[k]) < tol) {
        Eigen::VectorXcd v = X.cast<cplx>() * Y.col(k);
        // A real eigenvalue has a real eigenvector up to phase.
        Eigen::Index imax;
        v.cwiseAbs().maxCoeff(&imax);
        v *= std::conj(v[imax]) / std::abs(v[imax]);
        Z.conservativeResize(n, Z.cols() + 1);
        Z.col(Z.cols() - 1) = v.real();
      }
    }
    if (Z.cols() > 0) {
      orthonormalize(Z);
      for (Eigen::Index k = 0; k < Z.cols(); ++k) r.null_vectors.push_back(Z.col(k));
    }
    return r;
  }
}

}  // namespace

SteadySpace steady_space(const PauliLiouvillian& L, const SteadyOptions& opts) {
  const int n = L.num_sites();
  if (n > 10) throw CapacityError("steady-space enumeration limited to N <= 10 (4^N Pauli strings)");
  const std::uint64_t side = 1ULL << n;
  const std::size_t total = static_cast<std::size_t>(side * side);
  auto id_of = [side](const PauliString& p) { return static_cast<std::uint32_t>(p.x_mask() * side + p.z_mask()); };

  // Adjacency in CSR form.
  std::vector<std::uint32_t> offs(total + 1, 0);
  std::vector<std::uint32_t> tgt;
  std::vector<double> val;
  Dsu dsu(total);
  std::vector<PauliSum::Term> buf;
  for (std::size_t id = 0; id < total; ++id) {
    PauliString p(n, id / side, id % side, 0);
    buf.clear();
    L.apply(p, Picture::Schrodinger, buf);
    for (const auto& t : buf) {
      if (std::abs(t.coeff.imag()) > 1e-12) throw NumericalError("generator is not real in the Pauli basis");
      std::uint32_t j = id_of(t.op);
      tgt.push_back(j);
      val.push_back(t.coeff.real());
      dsu.unite(static_cast<std::uint32_t>(id), j);
    }
    offs[id + 1] = static_cast<std::uint32_t>(tgt.size());
  }

  std::vector<std::vector<std::uint32_t>> blocks;
  {
    std::vector<std::int64_t> root_to_block(total, -1);
    for (std::size_t id = 0; id < total; ++id) {
      std::uint32_t r = dsu.find(static_cast<std::uint32_t>(id));
      if (root_to_block[r] < 0) {
        root_to_block[r] = static_cast<std::int64_t>(blocks.size());
        blocks.emplace_back();
      }
      blocks[static_cast<std::size_t>(root_to_block[r])].push_back(static_cast<std::uint32_t>(id));
    }
  }

  SteadySpace out;
  double scale = L.kappa() > 0 ? L.kappa() : std::max(1.0, L.norm_bound());
  out.tolerance = opts.rel_tol * scale;
  out.num_blocks = blocks.size();
  const double slow_cut = 0.05 * scale;
  std::vector<std::int32_t> local(total, -1);
  for (const auto& blk : blocks) {
    out.largest_block = std::max(out.largest_block, blk.size());
    for (std::size_t i = 0; i < blk.size(); ++i) local[blk[i]] = static_cast<std::int32_t>(i);
    auto bn = static_cast<Eigen::Index>(blk.size());
    std::vector<Eigen::Triplet<double>> trip;
    for (std::size_t j = 0; j < blk.size(); ++j) {
      for (std::uint32_t e = offs[blk[j]]; e < offs[blk[j] + 1]; ++e) {
        trip.emplace_back(local[tgt[e]], static_cast<int>(j), val[e]);
      }
    }
    SpRMat M(bn, bn);
    M.setFromTriplets(trip.begin(), trip.end());
    BlockResult r;
    if (bn == 1) {
      double lam = M.nonZeros() ? M.coeff(0, 0) : 0.0;
      if (std::abs(lam) < slow_cut) r.slow.push_back(lam);
      if (std::abs(lam) < out.tolerance) r.null_vectors.push_back(RVec::Ones(1));
    } else if (bn <= opts.dense_max) {
      r = solve_block_dense(M, out.tolerance, slow_cut);
    } else {
      r = solve_block_sparse(M, out.tolerance, slow_cut, 0.01 * scale, opts.block_width, opts.max_iterations);
    }
    out.slow_eigenvalues.insert(out.slow_eigenvalues.end(), r.slow.begin(), r.slow.end());
    for (const auto& v : r.null_vectors) {
      PauliSum op(n);
      double nrm = v.norm();
      for (Eigen::Index i = 0; i < bn; ++i) {
        if (std::abs(v[i]) > 1e-14) {
          std::uint32_t id = blk[static_cast<std::size_t>(i)];
          op.add(v[i] / nrm, PauliString(n, id / side, id % side, 0));
        }
      }
      out.basis.push_back(std::move(op));
    }
    for (auto id : blk) local[id] = -1;
  }
  return out;
}

SteadySpace steady_space(const Superoperator& L, const SteadyOptions& opts) {
  return steady_space(L.pauli_form(), opts);
}

// ---------------------------------------------------------------------------
// Autocorrelation

namespace {

struct Decomposition {
  std::vector<double> nu;
  std::vector<CVec> branches;  // P_i |psi0>
};

Decomposition decompose(const PauliSum& O, const StateVector& psi0) {
  if (O.num_sites() != psi0.num_sites()) throw DimensionError("observable and state sizes differ");
  if (!O.is_hermitian()) throw std::invalid_argument("autocorrelation needs a Hermitian observable");
  Decomposition d;
  const CVec& psi = psi0.amplitudes();
  if (O.size() == 1) {
    double c = O.terms()[0].coeff.real();
    CVec op = dspt::apply(O.terms()[0].op, psi);
    d.nu = {c, -c};
    d.branches = {0.5 * (psi + op), 0.5 * (psi - op)};
    return d;
  }
  CMat dense = materialize_dense(O);
  Eigen::SelfAdjointEigenSolver<CMat> es(dense);
  const auto& ev = es.eigenvalues();
  const auto& U = es.eigenvectors();
  Eigen::Index i = 0;
  while (i < ev.size()) {
    Eigen::Index j = i;
    while (j + 1 < ev.size() && std::abs(ev[j + 1] - ev[i]) < 1e-9 * std::max(1.0, std::abs(ev[i]))) ++j;
    auto block = U.middleCols(i, j - i + 1);
    d.nu.push_back(ev.segment(i, j - i + 1).mean());
    d.branches.push_back(block * (block.adjoint() * psi));
    i = j + 1;
  }
  return d;
}

}  // namespace

CMat measurement_weighted_state(const PauliSum& O, const StateVector& psi0) {
  Decomposition d = decompose(O, psi0);
  CMat rho = CMat::Zero(psi0.dim(), psi0.dim());
  for (std::size_t i = 0; i < d.nu.size(); ++i) rho += d.nu[i] * d.branches[i] * d.branches[i].adjoint();
  return rho;
}

AutocorrResult autocorrelation(const ChainModel& m, const PauliSum& O, const StateVector& psi0,
                               std::span<const double> times, const AutocorrOptions& opts) {
  check_times(times);
  if (O.num_sites() != m.num_sites()) throw DimensionError("observable and model sizes differ");
  Decomposition d = decompose(O, psi0);
  PauliLiouvillian L = PauliLiouvillian::from_model(m);
  std::vector<PauliString> seeds;
  for (const auto& t : O.terms()) seeds.push_back(t.op);
  OperatorBlock blk = closure(L, seeds, Picture::Heisenberg, opts.max_block);
  SpRMat M = real_part_checked(blk.matrix);

  auto bn = static_cast<Eigen::Index>(blk.size());
  RVec w(bn);
  for (Eigen::Index q = 0; q < bn; ++q) {
    double acc = 0;
    for (std::size_t i = 0; i < d.nu.size(); ++i) {
      acc += d.nu[i] * expectation(blk.basis[static_cast<std::size_t>(q)], d.branches[i]).real();
    }
    w[q] = acc;
  }
  RVec c = RVec::Zero(bn);
  for (const auto& t : O.terms()) c[blk.find(t.op)] = t.coeff.real();

  double anorm = 0;
  for (int k = 0; k < M.outerSize(); ++k) {
    double s = 0;
    for (SpRMat::InnerIterator it(M, k); it; ++it) s += std::abs(it.value());
    anorm = std::max(anorm, s);
  }
  auto apply_m = [&M](const RVec& v, RVec& out) { out.noalias() = M * v; };

  AutocorrResult res;
  double t = 0;
  for (double ts : times) {
    if (ts > t) c = expv<double>(ts - t, apply_m, c, anorm, opts.krylov_tol);
    t = ts;
    res.times.push_back(ts);
    res.values.push_back(w.dot(c));
  }
  return res;
}

AutocorrResult autocorrelation_superoperator(const ChainModel& m, const PauliSum& O, const StateVector& psi0,
                                             std::span<const double> times, const EvolveOptions& opts) {
  Superoperator L = Superoperator::from_model(m);
  CMat rho = measurement_weighted_state(O, psi0);
  auto states = evolve_operator(L, rho, times, opts);
  CMat Od = materialize_dense(O);
  AutocorrResult res;
  for (std::size_t i = 0; i < states.size(); ++i) {
    res.times.push_back(times[i]);
    res.values.push_back((Od * states[i]).trace().real());
  }
  return res;
}

double decay_time(const AutocorrResult& a, double level) {
  if (a.values.empty()) return std::numeric_limits<double>::quiet_NaN();
  double target = level * a.values.front();
  for (std::size_t i = 1; i < a.values.size(); ++i) {
    if (a.values[i] <= target) {
      double v0 = a.values[i - 1], v1 = a.values[i];
      double f = v0 == v1 ? 0.0 : (v0 - target) / (v0 - v1);
      return a.times[i - 1] + f * (a.times[i] - a.times[i - 1]);
    }
  }
  return std::numeric_limits<double>::quiet_NaN();
}

}  // namespace dspt
