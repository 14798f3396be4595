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

#include <gtest/gtest.h>

#include <cmath>
#include <string>
#include <vector>

#include "dspt/dense.hpp"
#include "dspt/errors.hpp"
#include "dspt/lindblad.hpp"
#include "dspt/model.hpp"
#include "dspt/qubits.hpp"
#include "dspt/trajectories.hpp"

using namespace dspt;
using cplx = std::complex<double>;

namespace {

void expect_bloch_near(const BlochVector& a, const BlochVector& b, double tol, const std::string& what = "") {
  EXPECT_NEAR(a.x, b.x, tol) << what;
  EXPECT_NEAR(a.y, b.y, tol) << what;
  EXPECT_NEAR(a.z, b.z, tol) << what;
}

CVec random_state(int n, int seed) {
  std::srand(static_cast<unsigned>(seed));
  CVec v = CVec::Random(Eigen::Index{1} << n);
  return v / v.norm();
}

Eigen::Matrix2cd pure(int bit) {
  Eigen::Matrix2cd m = Eigen::Matrix2cd::Zero();
  m(bit, bit) = 1.0;
  return m;
}

}  // namespace

TEST(Qubits, EdgeTriplesAreTheEdgeOperators) {
  auto l = edge_triple(6, Side::Left);
  auto r = edge_triple(6, Side::Right);
  EXPECT_EQ(l[0], PauliString::from_letters("XZIIII"));
  EXPECT_EQ(l[1], PauliString::from_letters("YZIIII"));
  EXPECT_EQ(l[2], PauliString::from_letters("ZIIIII"));
  EXPECT_EQ(r[0], PauliString::from_letters("IIIIZX"));
  EXPECT_EQ(r[1], PauliString::from_letters("IIIIZY"));
  EXPECT_EQ(r[2], PauliString::from_letters("IIIIIZ"));
  auto obs = edge_observables(6);
  ASSERT_EQ(obs.size(), 6u);
  EXPECT_EQ(obs[0].name, "SxL");
  EXPECT_EQ(obs[5].name, "SzR");
}

TEST(Qubits, BlochVectorsOfReferenceStates) {
  auto up = prepare_cluster_state(ClusterStateSpec::uniform(BasisKind::EdgeMode, 6));
  // EdgeMode fixes X0 Z1 = +1 on the left and Z4 X5 = +1 on the right.
  expect_bloch_near(weak_qubit_bloch(up, Side::Left), {1, 0, 0}, 1e-12);
  expect_bloch_near(weak_qubit_bloch(up, Side::Right), {1, 0, 0}, 1e-12);

  auto diag = prepare_edge_direction_state(8, {1, 1, 1});
  const double c = 1 / std::sqrt(3.0);
  expect_bloch_near(weak_qubit_bloch(diag, Side::Left), {c, c, c}, 1e-10);
  expect_bloch_near(weak_qubit_bloch(diag, Side::Right), {0, 0, 1}, 1e-10);

  auto zstate = prepare_edge_direction_state(6, {0, 0, 1});
  expect_bloch_near(weak_qubit_bloch(zstate, Side::Left), {0, 0, 1}, 1e-12);

  // Equal mixture of the two left-edge z eigenstates.
  auto zdown = prepare_edge_direction_state(6, {0, 0, -1});
  CMat rho = 0.5 * (zstate.amplitudes() * zstate.amplitudes().adjoint() +
                    zdown.amplitudes() * zdown.amplitudes().adjoint());
  auto t = edge_triple(6, Side::Left);
  for (const auto& p : t) EXPECT_NEAR(trace_product(p, rho).real(), 0.0, 1e-12);
}

TEST(Qubits, FlipRulesForYJumps) {
  const int n = 8;
  auto y = [n](int site) { return PauliString::single(n, site, Letter::Y); };
  EXPECT_EQ(jump_flip_rule(y(0), Side::Left), Axis::Y);
  EXPECT_EQ(jump_flip_rule(y(1), Side::Left), Axis::Z);
  for (int s = 2; s < n; ++s) EXPECT_EQ(jump_flip_rule(y(s), Side::Left), Axis::None) << s;
  EXPECT_EQ(jump_flip_rule(y(n - 1), Side::Right), Axis::Y);
  EXPECT_EQ(jump_flip_rule(y(n - 2), Side::Right), Axis::Z);
  EXPECT_EQ(jump_flip_rule(y(4), Side::Right), Axis::None);
}

TEST(Qubits, ComposeIsTheKleinGroup) {
  const Axis all[4] = {Axis::None, Axis::X, Axis::Y, Axis::Z};
  for (Axis a : all) {
    EXPECT_EQ(compose(a, a), Axis::None);
    EXPECT_EQ(compose(a, Axis::None), a);
  }
  EXPECT_EQ(compose(Axis::X, Axis::Z), Axis::Y);
  EXPECT_EQ(compose(Axis::Y, Axis::Z), Axis::X);
  BlochVector v{0.1, 0.2, 0.3};
  for (Axis a : all) {
    for (Axis b : all) expect_bloch_near(rotate_pi(rotate_pi(v, a), b), rotate_pi(v, compose(a, b)), 0.0);
  }
}

TEST(Qubits, FlipRuleMatchesBruteForce) {
  // Every one- and two-site Pauli string on N = 5, applied to a generic state.
  const int n = 5;
  CVec psi = random_state(n, 3);
  BlochVector before[2] = {weak_qubit_bloch(psi, Side::Left), weak_qubit_bloch(psi, Side::Right)};
  int checked = 0;
  for (int a = 0; a < n; ++a) {
    for (int b = a; b < n; ++b) {
      for (int la = 1; la < 4; ++la) {
        for (int lb = (a == b ? 0 : 1); lb < (a == b ? 1 : 4); ++lb) {
          std::string s(n, 'I');
          const char* names = "IXYZ";
          s[a] = names[la];
          if (a != b) s[b] = names[lb];
          auto p = PauliString::from_letters(s);
          CVec out = dspt::apply(p, psi);
          for (Side side : {Side::Left, Side::Right}) {
            int k = side == Side::Left ? 0 : 1;
            expect_bloch_near(weak_qubit_bloch(out, side), rotate_pi(before[k], jump_flip_rule(p, side)), 1e-12, s);
          }
          ++checked;
        }
      }
    }
  }
  EXPECT_EQ(checked, 3 * n + 9 * n * (n - 1) / 2);
}

TEST(Qubits, RestorationLogAccumulatesParity) {
  ChainModel m({.num_sites = 6, .J = 1.0, .kappa = 1.0, .jumps = JumpKind::Y});
  auto strings = jump_strings(m);
  RestorationLog log(strings, Side::Left);
  ASSERT_EQ(log.channel_flips().size(), 6u);
  EXPECT_EQ(log.channel_flips()[0], Axis::Y);
  EXPECT_EQ(log.channel_flips()[1], Axis::Z);
  EXPECT_EQ(log.channel_flips()[4], Axis::None);

  TrajectoryRecord rec;
  rec.jump_events = {{1.0, 0}, {1.5, 4}, {2.0, 0}, {3.0, 1}};
  EXPECT_EQ(log.net_until(rec, 0.5), Axis::None);
  EXPECT_EQ(log.net_until(rec, 1.0), Axis::Y);
  EXPECT_EQ(log.net_until(rec, 1.7), Axis::Y);
  EXPECT_EQ(log.net_until(rec, 2.5), Axis::None);
  EXPECT_EQ(log.net_until(rec, 3.5), Axis::Z);
}

TEST(Qubits, JumpStringsRejectNonPauliJumps) {
  ChainModel m({.num_sites = 4, .J = 1.0, .kappa = 1.0, .jumps = JumpKind::SxMinus});
  EXPECT_THROW(jump_strings(m), UnsupportedModelError);
}

TEST(Qubits, RestoreUndoesEveryJumpAtZeroPerturbation) {
  ChainModel m({.num_sites = 6, .J = 1.0, .kappa = 2.5, .jumps = JumpKind::Y});
  auto psi0 = prepare_edge_direction_state(6, {1, 1, 1});
  std::vector<double> times;
  for (int k = 0; k <= 40; ++k) times.push_back(0.25 * k);
  auto strings = jump_strings(m);
  auto v0 = weak_qubit_bloch(psi0, Side::Left);
  int flipped = 0;
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    auto rec = run_trajectory(m, psi0, times.back(), times, seed, edge_observables(6));
    ASSERT_FALSE(rec.jump_events.empty());
    auto raw = bloch_series(rec, {0, 1, 2});
    auto fixed = restore(rec, strings, Side::Left, {0, 1, 2});
    ASSERT_EQ(fixed.size(), times.size());
    for (std::size_t k = 0; k < fixed.size(); ++k) {
      expect_bloch_near(fixed[k], v0, 1e-9, "t=" + std::to_string(times[k]));
      if (std::abs(raw[k].x - v0.x) > 0.5) ++flipped;
    }
  }
  EXPECT_GT(flipped, 0);
}

TEST(Qubits, FidelityBasicCases) {
  CMat zero = pure(0), one = pure(1);
  CMat mixed = CMat::Identity(2, 2) / 2.0;
  EXPECT_NEAR(fidelity(zero, zero), 1.0, 1e-12);
  EXPECT_NEAR(fidelity(zero, one), 0.0, 1e-12);
  EXPECT_NEAR(fidelity(zero, mixed), 0.5, 1e-12);
  EXPECT_NEAR(fidelity(mixed, mixed), 1.0, 1e-12);
  std::srand(5);
  for (int trial = 0; trial < 20; ++trial) {
    CMat a = CMat::Random(4, 4), b = CMat::Random(4, 4);
    CMat ra = a * a.adjoint(), rb = b * b.adjoint();
    ra /= ra.trace().real();
    rb /= rb.trace().real();
    double f = fidelity(ra, rb);
    EXPECT_LE(f, 1.0 + 1e-10);
    EXPECT_GE(f, 0.0);
    EXPECT_NEAR(f, fidelity(rb, ra), 1e-10);
    EXPECT_NEAR(fidelity(ra, ra), 1.0, 1e-10);
  }
  EXPECT_ANY_THROW(fidelity(zero, CMat::Identity(4, 4) / 4.0));
  CMat bad = zero;
  bad(1, 1) = -0.5;
  EXPECT_ANY_THROW(fidelity(bad, zero));
}

TEST(Qubits, QubitDensityFromBloch) {
  auto rho = qubit_density({0, 0, 1});
  EXPECT_LT((rho - pure(0)).norm(), 1e-15);
  auto half = qubit_density({0, 0, 0});
  EXPECT_LT((half - Eigen::Matrix2cd::Identity() / 2.0).norm(), 1e-15);
}

TEST(Qubits, EdgePairDensityOfProductEdges) {
  auto psi = prepare_edge_direction_state(6, {0.3, -0.5, 0.8});
  auto l = weak_qubit_bloch(psi, Side::Left);
  auto r = weak_qubit_bloch(psi, Side::Right);
  Eigen::Matrix2cd a = qubit_density(l), b = qubit_density(r);
  Eigen::Matrix4cd expected;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      for (int k = 0; k < 2; ++k)
        for (int m = 0; m < 2; ++m) expected(2 * i + k, 2 * j + m) = a(i, j) * b(k, m);
  auto rho = edge_pair_density(psi.amplitudes());
  EXPECT_LT((rho - expected).norm(), 1e-12);
  EXPECT_NEAR(rho.trace().real(), 1.0, 1e-12);
}

TEST(Qubits, StrongReadoutOfMaximallyMixedState) {
  auto s = strong_qubit_readout(DensityMatrix::maximally_mixed(6));
  Eigen::Matrix4d expected = Eigen::Matrix4d::Zero();
  expected(0, 0) = 1.0;
  EXPECT_LT((s.d - expected).norm(), 1e-14);
}

TEST(Qubits, StrongReadoutIsAValidTwoQubitState) {
  for (int seed = 0; seed < 5; ++seed) {
    CVec psi = random_state(6, 40 + seed);
    auto s = strong_qubit_readout(DensityMatrix::from_pure(StateVector(6, psi)));
    EXPECT_DOUBLE_EQ(s.d(0, 0), 1.0);
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix4cd> es(s.density());
    EXPECT_GE(es.eigenvalues().minCoeff(), -1e-8);
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j)
        EXPECT_NEAR(s.d(i, j), expectation(strong_pair_operator(6, i, j), StateVector(6, psi)), 1e-12);
  }
}

TEST(Qubits, StrongQubitsAreConservedUnderDissipation) {
  const int n = 6;
  ChainModel m({.num_sites = n, .J = 1.0, .kappa = 2.5, .jumps = JumpKind::ZIZ});
  std::srand(17);
  CMat a = CMat::Random(1 << n, 1 << n);
  CMat rho = a * a.adjoint();
  rho /= rho.trace().real();
  DensityMatrix rho0(n, rho);
  std::vector<double> ts = {0.0, 1.0, 10.0, 100.0};
  auto out = evolve(Superoperator::from_model(m), rho0, ts);
  auto d0 = strong_qubit_readout(rho0).d;
  for (std::size_t k = 0; k < ts.size(); ++k) {
    EXPECT_LT((strong_qubit_readout(out[k]).d - d0).cwiseAbs().maxCoeff(), 1e-8) << ts[k];
  }
}

TEST(Qubits, LogicalBasisTransformAtFourSites) {
  const int n = 4;
  auto gates = logical_basis_transform(n);
  ASSERT_FALSE(gates.empty());
  CMat u = circuit_unitary(n, gates);
  EXPECT_LT((u * u.adjoint() - CMat::Identity(16, 16)).norm(), 1e-12);
  auto check = [&](const PauliString& in, const PauliString& out) {
    EXPECT_EQ(conjugate(gates, in), out) << in.str();
    CMat lhs = u * CMat(materialize(in)) * u.adjoint();
    EXPECT_LT((lhs - CMat(materialize(out))).norm(), 1e-12) << in.str();
  };
  check(ops::flip_odd(n), PauliString::single(n, 0, Letter::X));
  check(ops::flip_even(n), PauliString::single(n, 1, Letter::X));
  check(PauliString::single(n, 0, Letter::Z), PauliString::single(n, 0, Letter::Z));
  EXPECT_EQ(ops::flip_odd(n), PauliString::from_letters("XIXI"));
}

TEST(Qubits, LogicalBasisTransformLargerChains) {
  for (int n : {6, 8}) {
    auto gates = logical_basis_transform(n);
    EXPECT_EQ(conjugate(gates, ops::flip_odd(n)), PauliString::single(n, 0, Letter::X));
    EXPECT_EQ(conjugate(gates, ops::flip_even(n)), PauliString::single(n, 1, Letter::X));
  }
  EXPECT_ANY_THROW(logical_basis_transform(5));
  EXPECT_ANY_THROW(logical_basis_transform(2));
}

TEST(Qubits, SyndromeDecoderForYJumps) {
  const int n = 6;
  ChainModel m({.num_sites = n, .J = 1.0, .kappa = 1.0, .jumps = JumpKind::Y});
  auto strings = jump_strings(m);
  SyndromeDecoder dec(n, strings, Side::Left, 1);
  EXPECT_FALSE(dec.globally_unambiguous());
  auto psi = prepare_edge_direction_state(n, {1, 1, 1}).amplitudes();
  for (std::size_t l = 0; l < strings.size(); ++l) {
    auto syn = dec.syndrome_of(strings[l]);
    EXPECT_NE(syn, 0u);
    EXPECT_EQ(dec.measure(psi, dspt::apply(strings[l], psi)), syn);
    EXPECT_EQ(dec.decode(syn), jump_flip_rule(strings[l], Side::Left)) << l;
  }
  EXPECT_EQ(dec.decode(0), Axis::None);
  // Pairs such as Y1 Y2 are undetectable yet flip the edge.
  EXPECT_THROW(SyndromeDecoder(n, strings, Side::Left, 2), AmbiguousSyndromeError);
}

TEST(Qubits, SyndromeDecoderForZizJumps) {
  const int n = 6;
  ChainModel m({.num_sites = n, .J = 1.0, .kappa = 1.0, .jumps = JumpKind::ZIZ});
  auto strings = jump_strings(m);
  SyndromeDecoder dec(n, strings, Side::Left, 3);
  EXPECT_TRUE(dec.globally_unambiguous());
  auto p = strings[0] * strings[1];
  EXPECT_EQ(dec.decode(dec.syndrome_of(p)), jump_flip_rule(p, Side::Left));
}

TEST(Qubits, CorrectedFidelityStaysOneWithoutPerturbation) {
  ChainModel m({.num_sites = 6, .J = 1.0, .kappa = 2.5, .jumps = JumpKind::Y});
  auto psi0 = prepare_edge_direction_state(6, {1, 1, 1});
  std::vector<double> times;
  for (int k = 0; k <= 20; ++k) times.push_back(0.5 * k);
  for (bool two : {false, true}) {
    FidelityProtocolOptions opts;
    opts.two_qubit = two;
    auto r = run_fidelity_protocol(m, psi0, times.back(), times, 50, 3, opts);
    for (std::size_t k = 0; k < times.size(); ++k) EXPECT_NEAR(r.corrected_mean[k], 1.0, 1e-9) << k;
    EXPECT_LT(r.uncorrected_mean.back(), 0.8);
    EXPECT_TRUE(r.crossings.samples.empty());
    EXPECT_EQ(r.crossings.n_censored, r.n_traj);
  }
}

TEST(Qubits, CorrectionExtendsLifetimeUnderPerturbation) {
  ChainModel m({.num_sites = 6, .J = 1.0, .kappa = 2.5, .v_xx = 0.2, .jumps = JumpKind::Y});
  auto psi0 = prepare_edge_direction_state(6, {1, 1, 1});
  std::vector<double> times;
  for (int k = 0; k <= 20; ++k) times.push_back(1.0 * k);
  auto r = run_fidelity_protocol(m, psi0, times.back(), times, 100, 7);
  for (std::size_t k = 4; k < times.size(); ++k) {
    EXPECT_GT(r.corrected_mean[k], r.uncorrected_mean[k]) << k;
  }
  EXPECT_LT(r.corrected_mean.back(), 1.0 - 1e-6);
}
