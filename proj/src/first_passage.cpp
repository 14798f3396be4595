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


#include "dspt/first_passage.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include <boost/math/distributions/inverse_gaussian.hpp>

#include "dspt/errors.hpp"
#include "dspt/rng.hpp"

namespace dspt {

std::optional<double> first_crossing(std::span<const double> times, std::span<const double> values,
                                     double threshold) {
  if (times.size() != values.size()) throw std::invalid_argument("times and values differ in length");
  for (std::size_t k = 0; k < values.size(); ++k) {
    if (values[k] < threshold) {
      if (k == 0) return times[0];
      double v0 = values[k - 1], v1 = values[k];
      double f = (v0 - threshold) / (v0 - v1);
      return times[k - 1] + f * (times[k] - times[k - 1]);
    }
  }
  return std::nullopt;
}

FirstPassageSamples collect_first_passages(std::span<const double> times,
                                           const std::vector<std::vector<double>>& traces, double threshold) {
  FirstPassageSamples out;
  out.n_total = traces.size();
  for (const auto& tr : traces) {
    // Traces that ended early cover a prefix of the grid.
    if (tr.size() > times.size()) throw std::invalid_argument("trace is longer than the time grid");
    auto c = first_crossing(times.first(tr.size()), tr, threshold);
    if (c) {
      out.samples.push_back(*c);
    } else {
      ++out.n_censored;
    }
  }
  if (out.n_censored > 0) {
    out.warning = std::to_string(out.n_censored) + " of " + std::to_string(out.n_total) +
                  " traces never crossed the threshold (crossing fraction " +
                  std::to_string(out.crossing_fraction()) + "); the fit is conditioned on crossing";
  }
  return out;
}

double inverse_gaussian_cdf(double t, double mu, double lambda) {
  if (t <= 0) return 0.0;
  return boost::math::cdf(boost::math::inverse_gaussian_distribution<double>(mu, lambda), t);
}

double inverse_gaussian_pdf(double t, double mu, double lambda) {
  if (t <= 0) return 0.0;
  return std::sqrt(lambda / (2 * std::numbers::pi * t * t * t)) *
         std::exp(-lambda * (t - mu) * (t - mu) / (2 * mu * mu * t));
}

double ks_distance(std::span<const double> samples, double mu, double lambda) {
  std::vector<double> s(samples.begin(), samples.end());
  std::sort(s.begin(), s.end());
  const double n = static_cast<double>(s.size());
  double d = 0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    double f = inverse_gaussian_cdf(s[i], mu, lambda);
    d = std::max({d, static_cast<double>(i + 1) / n - f, f - static_cast<double>(i) / n});
  }
  return d;
}

namespace {

struct MleResult {
  double mu, lambda;
  bool degenerate;
};

MleResult mle(std::span<const double> samples) {
  const double n = static_cast<double>(samples.size());
  double sum = 0;
  for (double t : samples) {
    if (!(t > 0)) throw std::invalid_argument("inverse-Gaussian samples must be positive");
    sum += t;
  }
  double mu = sum / n;
  double acc = 0;
  for (double t : samples) acc += 1.0 / t - 1.0 / mu;
  if (acc <= 1e-14 * n / mu) return {mu, std::numeric_limits<double>::infinity(), true};
  return {mu, n / acc, false};
}

}  // namespace

InverseGaussianFit fit_inverse_gaussian(std::span<const double> samples, int bootstrap_reps,
                                        std::uint64_t bootstrap_seed) {
  if (samples.empty()) throw DegenerateInputError("no samples to fit");
  InverseGaussianFit fit;
  auto m = mle(samples);
  fit.mu = m.mu;
  fit.lambda = m.lambda;
  fit.degenerate = m.degenerate;
  fit.n = samples.size();
  double sn = std::sqrt(static_cast<double>(fit.n));
  fit.ks_critical_1pct = 1.628 / (sn + 0.12 + 0.11 / sn);
  fit.bootstrap_pvalue = std::numeric_limits<double>::quiet_NaN();
  if (fit.degenerate) {
    fit.ks_distance = std::numeric_limits<double>::quiet_NaN();
    return fit;
  }
  fit.ks_distance = ks_distance(samples, fit.mu, fit.lambda);
  if (bootstrap_reps > 0) {
    int exceed = 0;
    for (int r = 0; r < bootstrap_reps; ++r) {
      auto syn = sample_inverse_gaussian(fit.mu, fit.lambda, fit.n, bootstrap_seed + static_cast<std::uint64_t>(r));
      auto mr = mle(syn);
      if (ks_distance(syn, mr.mu, mr.lambda) >= fit.ks_distance) ++exceed;
    }
    fit.bootstrap_pvalue = (exceed + 1.0) / (bootstrap_reps + 1.0);
  }
  return fit;
}

std::vector<double> sample_inverse_gaussian(double mu, double lambda, std::size_t n, std::uint64_t seed) {
  if (!(mu > 0) || !(lambda > 0)) throw std::invalid_argument("inverse-Gaussian parameters must be positive");
  Philox4x64 rng = make_stream(seed, StreamTag::Synthetic);
  std::vector<double> out;
  out.reserve(n);
  bool have_spare = false;
  double spare = 0;
  auto normal = [&]() {
    if (have_spare) {
      have_spare = false;
      return spare;
    }
    double u1 = rng.uniform(), u2 = rng.uniform();
    double r = std::sqrt(-2.0 * std::log(u1));
    spare = r * std::sin(2 * std::numbers::pi * u2);
    have_spare = true;
    return r * std::cos(2 * std::numbers::pi * u2);
  };
  for (std::size_t i = 0; i < n; ++i) {
    double nu = normal();
    double y = nu * nu;
    double x = mu + mu * mu * y / (2 * lambda) - mu / (2 * lambda) * std::sqrt(4 * mu * lambda * y + mu * mu * y * y);
    out.push_back(rng.uniform() <= mu / (mu + x) ? x : mu * mu / x);
  }
  return out;
}

}  // namespace dspt
