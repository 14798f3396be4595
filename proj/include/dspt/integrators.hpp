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

#ifndef DSPT_INTEGRATORS_HPP_
#define DSPT_INTEGRATORS_HPP_

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numbers>
#include <string>

#include <Eigen/Dense>
#include <unsupported/Eigen/MatrixFunctions>

#include "dspt/errors.hpp"

namespace dspt {

struct Dopri5Options {
  double rtol = 1e-9;
  double atol = 1e-12;
  double h_min = 1e-14;
  long max_steps = 50'000'000;
};

/// Dormand-Prince 5(4) with Hairer's continuous extension, on complex
/// vectors. The right-hand side writes dy = f(t, y).
class Dopri5 {
 public:
  using Vec = Eigen::VectorXcd;
  using Rhs = std::function<void(double t, const Vec& y, Vec& dy)>;

  Dopri5(Rhs f, Dopri5Options opts = {});

  /// Takes one accepted step from (t, y) towards t_end, updating both and
  /// recording the dense-output polynomial of that step.
  void step(double& t, Vec& y, double t_end);
  /// Integrates to exactly t_end.
  void advance(double& t, Vec& y, double t_end);
  /// Interpolated state inside the last accepted step.
  Vec dense_output(double t) const;
  double last_step_start() const { return t_old_; }
  double last_step_end() const { return t_old_ + h_old_; }
  /// Forgets the FSAL derivative (call after modifying y externally).
  void reset() { have_k1_ = false; }

 private:
  Rhs f_;
  Dopri5Options o_;
  double h_ = 0.0;
  bool have_k1_ = false;
  Vec k1_, k2_, k3_, k4_, k5_, k6_, k7_, ytmp_, ynew_, err_;
  Vec r1_, r2_, r3_, r4_, r5_;
  double t_old_ = 0.0, h_old_ = 0.0;
  long steps_ = 0;
};

/// Statistics of a Krylov exponential action.
struct ExpvStats {
  int steps = 0;
  int rejections = 0;
  double error_estimate = 0.0;
};

/// w = exp(t A) v for a matrix-free operator A, by adaptive Krylov steps
/// with Sidje's local error control. apply(in, out) must write out = A in.
/// anorm is an estimate of ||A|| used for the initial step size.
template <typename Scalar, typename Apply>
Eigen::Matrix<Scalar, Eigen::Dynamic, 1> expv(double t, const Apply& apply,
                                              const Eigen::Matrix<Scalar, Eigen::Dynamic, 1>& v, double anorm,
                                              double tol = 1e-12, int m = 30, ExpvStats* stats = nullptr) {
  using Vec = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
  using Mat = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  const Eigen::Index n = v.size();
  Vec w = v;
  if (t == 0.0 || n == 0) return w;
  m = static_cast<int>(std::min<Eigen::Index>(m, n));
  anorm = std::max(anorm, 1e-300);
  const double btol = 1e-7;
  const double gamma = 0.9;
  const double delta = 1.2;
  const int max_reject = 50;
  const double t_out = std::abs(t);
  const double sgn = t < 0 ? -1.0 : 1.0;
  const double rndoff = anorm * std::numeric_limits<double>::epsilon();

  double beta = w.norm();
  if (beta == 0.0) return w;
  double xm = 1.0 / m;
  double fact = std::pow((m + 1) / std::numbers::e, m + 1) * std::sqrt(2 * std::numbers::pi * (m + 1));
  double t_new = (1.0 / anorm) * std::pow((fact * tol) / (4.0 * beta * anorm), xm);
  auto round_step = [](double s) {
    double p = std::pow(10.0, std::floor(std::log10(s)) - 1);
    return std::ceil(s / p) * p;
  };
  t_new = round_step(t_new);

  Mat V(n, m + 1);
  Mat H(m + 2, m + 2);
  Vec p(n);
  Vec q(n);
  double t_now = 0.0;
  ExpvStats st;
  while (t_now < t_out) {
    ++st.steps;
    double t_step = std::min(t_out - t_now, t_new);
    V.col(0) = w / beta;
    H.setZero();
    int mb = m;
    int k1 = 2;
    for (int j = 0; j < m; ++j) {
      q = V.col(j);
      apply(q, p);
      for (int i = 0; i <= j; ++i) {
        H(i, j) = V.col(i).dot(p);
        p.noalias() -= H(i, j) * V.col(i);
      }
      double s = p.norm();
      if (s < btol) {
        k1 = 0;
        mb = j + 1;
        t_step = t_out - t_now;
        break;
      }
      H(j + 1, j) = s;
      V.col(j + 1) = p / s;
    }
    double avnorm = 0.0;
    if (k1 != 0) {
      H(m + 1, m) = 1.0;
      q = V.col(m);
      apply(q, p);
      avnorm = p.norm();
    }
    int ireject = 0;
    double err_loc = 0.0;
    Mat F;
    while (true) {
      int mx = mb + k1;
      Mat Hs = (sgn * t_step) * H.topLeftCorner(mx, mx);
      F = Hs.exp();
      if (k1 == 0) {
        err_loc = btol;
        break;
      }
      double phi1 = std::abs(beta * F(m, 0));
      double phi2 = std::abs(beta * F(m + 1, 0) * avnorm);
      if (phi1 > 10 * phi2) {
        err_loc = phi2;
        xm = 1.0 / m;
      } else if (phi1 > phi2) {
        err_loc = (phi1 * phi2) / (phi1 - phi2);
        xm = 1.0 / m;
      } else {
        err_loc = phi1;
        xm = 1.0 / (m - 1);
      }
      if (err_loc <= delta * t_step * tol) break;
      t_step = round_step(gamma * t_step * std::pow(t_step * tol / err_loc, xm));
      if (++ireject > max_reject) {
        throw NumericalError("Krylov exponential: requested tolerance too high (stalled at t=" +
                             std::to_string(t_now) + ")");
      }
    }
    st.rejections += ireject;
    int mx = mb + std::max(0, k1 - 1);
    w = V.leftCols(mx) * (beta * F.col(0).head(mx));
    beta = w.norm();
    t_now += t_step;
    t_new = round_step(gamma * t_step * std::pow(t_step * tol / err_loc, xm));
    st.error_estimate += std::max(err_loc, rndoff);
    if (beta == 0.0) break;
  }
  if (stats) *stats = st;
  return w;
}

}  // namespace dspt

#endif  // DSPT_INTEGRATORS_HPP_
