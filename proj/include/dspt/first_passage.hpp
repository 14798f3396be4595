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


#ifndef DSPT_FIRST_PASSAGE_HPP_
#define DSPT_FIRST_PASSAGE_HPP_

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace dspt {

/// First time values drop below threshold, linearly interpolated between
/// samples; nullopt if never.
std::optional<double> first_crossing(std::span<const double> times, std::span<const double> values,
                                     double threshold);

struct FirstPassageSamples {
  std::vector<double> samples;
  std::size_t n_total = 0;
  std::size_t n_censored = 0;
  double crossing_fraction() const {
    return n_total ? static_cast<double>(samples.size()) / static_cast<double>(n_total) : 0.0;
  }
  /// Non-empty when some traces never crossed.
  std::string warning;
};

/// Collects first crossings from per-trajectory traces on a shared grid;
/// a trace may stop early and then covers a prefix of the grid.
FirstPassageSamples collect_first_passages(std::span<const double> times,
                                           const std::vector<std::vector<double>>& traces, double threshold = 0.75);

struct InverseGaussianFit {
  double mu = 0.0;
  double lambda = 0.0;
  std::size_t n = 0;
  /// Every sample equal: lambda is infinite.
  bool degenerate = false;
  /// Kolmogorov-Smirnov distance to the fitted law.
  double ks_distance = 0.0;
  /// Asymptotic 1% critical value with the finite-n correction
  /// 1.628 / (sqrt(n) + 0.12 + 0.11 / sqrt(n)).
  double ks_critical_1pct = 0.0;
  /// Parametric-bootstrap p-value accounting for the fitted parameters
  /// (NaN unless requested).
  double bootstrap_pvalue = 0.0;
  bool passes_ks_1pct() const { return ks_distance < ks_critical_1pct; }
};

double inverse_gaussian_cdf(double t, double mu, double lambda);
double inverse_gaussian_pdf(double t, double mu, double lambda);

/// Maximum-likelihood fit: mu = mean, lambda = n / sum(1/t - 1/mu).
/// bootstrap_reps > 0 adds a parametric-bootstrap KS p-value.
InverseGaussianFit fit_inverse_gaussian(std::span<const double> samples, int bootstrap_reps = 0,
                                        std::uint64_t bootstrap_seed = 0);

double ks_distance(std::span<const double> samples, double mu, double lambda);

/// Michael-Schucany-Haas sampler on a counter-based stream.
std::vector<double> sample_inverse_gaussian(double mu, double lambda, std::size_t n, std::uint64_t seed);

}  // namespace dspt

#endif  // DSPT_FIRST_PASSAGE_HPP_
