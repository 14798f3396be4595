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

#include <cmath>

#include <gtest/gtest.h>

#include "dspt/errors.hpp"
#include "dspt/lindblad.hpp"
#include "dspt/perturbation.hpp"

using namespace dspt;

namespace {

ChainModel ziz(int n, double kappa) {
  return ChainModel({.num_sites = n, .J = 1.0, .kappa = kappa, .jumps = JumpKind::ZIZ});
}

// Closed forms derived symbolically from the fragment matrices, x = kappa/J.
double xx_z1(double x) { return (8 * x * x + 3) / (x * (16 * x * x + 9)); }
double y_two(double x) { return 8 * x / (8 * x * x + 1); }
double y_four(double x) { return 1 / (3 * x); }
double y_near_boundary(double x) {
  const double x2 = x * x, x4 = x2 * x2, x6 = x4 * x2;
  return 4 * x * (1728 * x4 + 312 * x2 + 11) / (18432 * x6 + 5312 * x4 + 400 * x2 + 9);
}
double y_bulk(double x) {
  const double x2 = x * x;
  return 64 * x * (16 * x2 + 1) / (3072 * x2 * x2 + 352 * x2 + 9);
}
double y_spread(double x, int n) {
  return 2 * y_two(x) + 2 * y_four(x) + 2 * y_near_boundary(x) + (n - 6) * y_bulk(x);
}

// -P V Q L0^{-1} Q V P from the dense vectorized generators.
Eigen::MatrixXcd dense_second_order(const ChainModel& m, const PauliSum& v, const std::vector<PauliString>& basis) {
  const int n = m.num_sites();
  const Eigen::Index d = Eigen::Index{1} << n;
  CMat l0 = CMat(Superoperator::from_model(m).matrix());
  CMat vs = CMat(Superoperator(v, {}, 0.0).matrix());
  CMat vecs(d * d, static_cast<Eigen::Index>(basis.size()));
  for (std::size_t i = 0; i < basis.size(); ++i) {
    vecs.col(static_cast<Eigen::Index>(i)) =
        Superoperator::vectorize(materialize_dense(PauliSum(basis[i]))) / std::sqrt(static_cast<double>(d));
  }
  CMat p = vecs * vecs.adjoint();
  CMat q = CMat::Identity(d * d, d * d) - p;
  // L0 maps the steady space to zero, so L0 + P is invertible and agrees with L0 on Q.
  Eigen::PartialPivLU<CMat> lu(l0 + p);
  CMat qvp = q * vs * vecs;
  return -(vecs.adjoint() * vs * q * lu.solve(qvp));
}

}  // namespace

TEST(Perturbation, OperatorsAndNames) {
  EXPECT_EQ(perturbation_operator(6, PerturbationKind::XX).size(), 5u);
  EXPECT_EQ(perturbation_operator(6, PerturbationKind::Y).size(), 6u);
  EXPECT_EQ(parse_perturbation("Y"), PerturbationKind::Y);
  EXPECT_EQ(perturbation_name(PerturbationKind::XX), "XX");
  EXPECT_THROW(parse_perturbation("ZZ"), std::invalid_argument);
}

TEST(Perturbation, SteadyStringsAndSectors) {
  auto s = steady_strings(8);
  ASSERT_EQ(s.size(), 16u);
  for (const auto& p : s) EXPECT_TRUE(p.is_hermitian());
  EXPECT_EQ(flip_sector(PauliString(8)), std::make_pair(1, 1));
  EXPECT_EQ(flip_sector(PauliString::single(8, 0, Letter::Z)), std::make_pair(-1, 1));
  EXPECT_EQ(flip_sector(PauliString::single(8, 0, Letter::Z) * PauliString::single(8, 7, Letter::Z)),
            std::make_pair(-1, -1));
}

TEST(Perturbation, FragmentSolverMatchesDenseResolventAtFourSites) {
  for (auto kind : {PerturbationKind::XX, PerturbationKind::Y}) {
    for (double kappa : {0.7, 2.5}) {
      auto m = ziz(4, kappa);
      auto g = effective_L2(m, kind);
      auto want = dense_second_order(m, perturbation_operator(4, kind), g.basis);
      EXPECT_LT((g.l2 - want).norm(), 1e-11) << perturbation_name(kind) << " " << kappa;
    }
  }
}

TEST(Perturbation, XxZ1EntryMatchesDerivedClosedForm) {
  for (double x : {0.3, 1.0, 2.5, 4.0}) {
    auto g = effective_L2(ziz(8, x), PerturbationKind::XX);
    for (std::size_t i = 0; i < g.basis.size(); ++i) {
      if (g.basis[i] == PauliString::single(8, 0, Letter::Z)) EXPECT_NEAR(-g.l2_diag[i], xx_z1(x), 1e-12) << x;
    }
  }
  EXPECT_NEAR(xx_z1(2.5), 0.194495412844, 1e-12);
}

TEST(Perturbation, XxSectorStructure) {
  auto g = effective_L2(ziz(8, 2.5), PerturbationKind::XX);
  EXPECT_LT(g.max_imag, 1e-10);
  EXPECT_LT(g.max_offdiag, 1e-10);
  EXPECT_LT(g.first_order, 1e-15);
  const double z1 = xx_z1(2.5);
  for (std::size_t i = 0; i < g.basis.size(); ++i) {
    auto [so, se] = flip_sector(g.basis[i]);
    const double want = so > 0 && se > 0 ? 0.0 : (so < 0 && se < 0 ? 2 * z1 : z1);
    EXPECT_NEAR(-g.l2_diag[i], want, 1e-10) << g.basis[i].str();
  }
}

TEST(Perturbation, XxSpreadIsSizeIndependent) {
  const double d6 = spread_delta(effective_L2(ziz(6, 2.5), PerturbationKind::XX));
  for (int n : {8, 10}) EXPECT_NEAR(spread_delta(effective_L2(ziz(n, 2.5), PerturbationKind::XX)), d6, 1e-10);
  EXPECT_NEAR(d6, 2 * xx_z1(2.5), 1e-12);
}

TEST(Perturbation, YSpreadMatchesDerivedClosedForm) {
  for (int n : {6, 8, 10}) {
    for (double x : {0.5, 2.5}) {
      EXPECT_NEAR(spread_delta(effective_L2(ziz(n, x), PerturbationKind::Y)), y_spread(x, n), 1e-10) << n << " " << x;
    }
  }
  EXPECT_NEAR(y_spread(2.5, 8), 1.61039597022, 1e-10);
}

TEST(Perturbation, YEdgeTermsAgreeWithPrintedFormula) {
  // The printed formula shares the two edge terms and is linear in N.
  const double x = 2.5;
  const double edge = 16 * x / (8 * x * x + 1) + 2 / (3 * x);
  EXPECT_NEAR(edge, 2 * y_two(x) + 2 * y_four(x), 1e-14);
  EXPECT_NEAR(closed_form_spread_Hy(1.0, 1.0, 4), 16.0 / 9.0 + 2.0 / 3.0, 1e-14);
  EXPECT_NEAR(closed_form_spread_Hy(x, 1.0, 8), 0.784313725 + 0.266666667 + 4 * 0.13223303, 1e-7);
  const double step = closed_form_spread_Hy(x, 1.0, 10) - closed_form_spread_Hy(x, 1.0, 8);
  EXPECT_NEAR(step, 2 * 8 * x * (64 * x * x + 3) / (1536 * std::pow(x, 4) + 152 * x * x + 3), 1e-13);
  // Its bulk coefficient is close to, but not equal to, the derived bulk term.
  EXPECT_NEAR(step / 2 - y_bulk(x), 5.45e-7, 1e-9);
}

TEST(Perturbation, PrintedXxFormula) {
  EXPECT_NEAR(closed_form_L2_Z1(2.5, 1.0), 132.5 / 682.25, 1e-15);
  // Zeno suppression: x * value -> 1/2 at large x.
  EXPECT_NEAR(1e4 * closed_form_L2_Z1(1e4, 1.0), 0.5, 1e-6);
}

TEST(Perturbation, RequiresTheUnperturbedZizModel) {
  EXPECT_THROW(effective_L2(ChainModel({.num_sites = 6, .kappa = 1.0, .jumps = JumpKind::Y}), PerturbationKind::XX),
               UnsupportedModelError);
}
