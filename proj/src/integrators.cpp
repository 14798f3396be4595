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

#include "dspt/integrators.hpp"

namespace dspt {

namespace {

// Dormand-Prince tableau.
constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561, a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                 a65 = -5103.0 / 18656;
constexpr double a71 = 35.0 / 384, a73 = 500.0 / 1113, a74 = 125.0 / 192, a75 = -2187.0 / 6784, a76 = 11.0 / 84;
constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920, e5 = -17253.0 / 339200, e6 = 22.0 / 525,
                 e7 = -1.0 / 40;
// Continuous extension.
constexpr double d1 = -12715105075.0 / 11282082432.0, d3 = 87487479700.0 / 32700410799.0,
                 d4 = -10690763975.0 / 1880347072.0, d5 = 701980252875.0 / 199316789632.0,
                 d6 = -1453857185.0 / 822651844.0, d7 = 69997945.0 / 29380423.0;

}  // namespace

Dopri5::Dopri5(Rhs f, Dopri5Options opts) : f_(std::move(f)), o_(opts) {}

void Dopri5::step(double& t, Vec& y, double t_end) {
  const Eigen::Index n = y.size();
  if (!have_k1_) {
    k1_.resize(n);
    f_(t, y, k1_);
    have_k1_ = true;
  }
  if (h_ <= 0.0) {
    // Hairer's starting-step heuristic, simplified.
    double d0 = 0, dd1 = 0;
    for (Eigen::Index i = 0; i < n; ++i) {
      double sk = o_.atol + o_.rtol * std::abs(y[i]);
      d0 += std::norm(y[i]) / (sk * sk);
      dd1 += std::norm(k1_[i]) / (sk * sk);
    }
    d0 = std::sqrt(d0 / n);
    dd1 = std::sqrt(dd1 / n);
    h_ = (d0 < 1e-5 || dd1 < 1e-5) ? 1e-6 : 0.01 * d0 / dd1;
  }
  while (true) {
    if (++steps_ > o_.max_steps) {
      throw NumericalError("integrator exceeded the step budget; last good time t=" + std::to_string(t));
    }
    bool last = h_ >= t_end - t;
    double h = last ? t_end - t : h_;
    ytmp_ = y + h * a21 * k1_;
    f_(t + c2 * h, ytmp_, k2_);
    ytmp_ = y + h * (a31 * k1_ + a32 * k2_);
    f_(t + c3 * h, ytmp_, k3_);
    ytmp_ = y + h * (a41 * k1_ + a42 * k2_ + a43 * k3_);
    f_(t + c4 * h, ytmp_, k4_);
    ytmp_ = y + h * (a51 * k1_ + a52 * k2_ + a53 * k3_ + a54 * k4_);
    f_(t + c5 * h, ytmp_, k5_);
    ytmp_ = y + h * (a61 * k1_ + a62 * k2_ + a63 * k3_ + a64 * k4_ + a65 * k5_);
    f_(t + h, ytmp_, k6_);
    ynew_ = y + h * (a71 * k1_ + a73 * k3_ + a74 * k4_ + a75 * k5_ + a76 * k6_);
    f_(t + h, ynew_, k7_);
    err_ = h * (e1 * k1_ + e3 * k3_ + e4 * k4_ + e5 * k5_ + e6 * k6_ + e7 * k7_);
    double err = 0;
    for (Eigen::Index i = 0; i < n; ++i) {
      double sk = o_.atol + o_.rtol * std::max(std::abs(y[i]), std::abs(ynew_[i]));
      err += std::norm(err_[i]) / (sk * sk);
    }
    err = std::sqrt(err / n);
    if (!std::isfinite(err)) {
      throw NumericalError("integrator produced non-finite values; last good time t=" + std::to_string(t));
    }
    if (err <= 1.0) {
      r1_ = y;
      r2_ = ynew_ - y;
      r3_ = h * k1_ - r2_;
      r4_ = r2_ - h * k7_ - r3_;
      r5_ = h * (d1 * k1_ + d3 * k3_ + d4 * k4_ + d5 * k5_ + d6 * k6_ + d7 * k7_);
      t_old_ = t;
      h_old_ = h;
      t = last ? t_end : t + h;
      y.swap(ynew_);
      k1_.swap(k7_);
      double fac = err == 0 ? 5.0 : std::clamp(0.9 * std::pow(err, -0.2), 0.2, 5.0);
      // A step shortened to hit t_end says little about the natural size.
      if (!(last && h < h_)) h_ = h * fac;
      return;
    }
    h_ = h * std::clamp(0.9 * std::pow(err, -0.2), 0.1, 1.0);
    if (h_ < o_.h_min * std::max(1.0, std::abs(t))) {
      throw NumericalError("integrator step size underflow; last good time t=" + std::to_string(t));
    }
  }
}

void Dopri5::advance(double& t, Vec& y, double t_end) {
  while (t < t_end) step(t, y, t_end);
}

Dopri5::Vec Dopri5::dense_output(double t) const {
  double theta = h_old_ > 0 ? (t - t_old_) / h_old_ : 0.0;
  double theta1 = 1.0 - theta;
  return r1_ + theta * (r2_ + theta1 * (r3_ + theta * (r4_ + theta1 * r5_)));
}

}  // namespace dspt
