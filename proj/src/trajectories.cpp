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


#include "dspt/trajectories.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <string>

#include "dspt/entanglement.hpp"
#include "dspt/errors.hpp"
#include "dspt/integrators.hpp"
#include "dspt/rng.hpp"

namespace dspt {

PauliSum effective_hamiltonian(const PauliSum& h, std::span<const PauliSum> jumps, double kappa) {
  PauliSum out = h;
  for (const auto& f : jumps) {
    if (f.num_sites() != h.num_sites()) throw DimensionError("jump operator has the wrong site count");
    PauliSum fdf = f.adjoint() * f;
    fdf *= cplx(0, -kappa);
    out += fdf;
  }
  return out;
}

PauliSum effective_hamiltonian(const ChainModel& m) {
  auto jumps = build_jumps(m);
  return effective_hamiltonian(build_hamiltonian(m), jumps, m.kappa());
}

TrajectorySimulator::TrajectorySimulator(const ChainModel& m, std::vector<NamedObservable> observables,
                                         TrajectoryOptions opts)
    : model_(m), obs_(std::move(observables)), opts_(opts), jumps_(build_jumps(m)) {
  const int n = m.num_sites();
  if (n > kStateVectorCap) throw CapacityError("trajectories limited to N <= " + std::to_string(kStateVectorCap));
  for (const auto& o : obs_) {
    if (o.op.num_sites() != n) throw DimensionError("observable '" + o.name + "' has the wrong site count");
  }
  pauli_jumps_ = true;
  for (const auto& f : jumps_) {
    if (f.size() != 1) pauli_jumps_ = false;
  }
  if (pauli_jumps_) {
    double acc = 0;
    for (const auto& f : jumps_) {
      jump_strings_.push_back(f.terms()[0].op.with_phase(0));
      acc += std::norm(f.terms()[0].coeff);
      jump_cdf_.push_back(acc);
    }
    total_rate_ = 2.0 * m.kappa() * acc;
    PauliSum h = build_hamiltonian(m);
    h_ = materialize(h);
    for (const auto& t : h.terms()) h_norm_ += std::abs(t.coeff);
  } else {
    heff_ = materialize(effective_hamiltonian(m));
    for (const auto& f : jumps_) jump_mats_.push_back(materialize(f));
  }
}

void TrajectorySimulator::sample(TrajectoryRecord& rec, double t, const CVec& psi) const {
  CVec v = psi / psi.norm();
  std::vector<double> row;
  row.reserve(obs_.size());
  for (const auto& o : obs_) row.push_back(expectation(o.op, v).real());
  rec.sample_times.push_back(t);
  rec.values.push_back(std::move(row));
  if (opts_.record_schmidt) {
    int cut = opts_.schmidt_cut > 0 ? opts_.schmidt_cut : model_.num_sites() / 2;
    rec.schmidt.push_back(schmidt_values(v, model_.num_sites(), cut));
  }
  if (opts_.record_states) rec.states.push_back(std::move(v));
}

namespace {

void check_schedule(double t_max, std::span<const double> sample_times) {
  if (!(t_max >= 0)) throw std::invalid_argument("t_max must be non-negative");
  for (std::size_t i = 0; i < sample_times.size(); ++i) {
    if (sample_times[i] < 0 || sample_times[i] > t_max || (i > 0 && sample_times[i] < sample_times[i - 1])) {
      throw std::invalid_argument("sample times must be ascending inside [0, t_max]");
    }
  }
}

int pick_channel(const std::vector<double>& cdf, double u) {
  double target = u * cdf.back();
  for (std::size_t l = 0; l < cdf.size(); ++l) {
    if (target < cdf[l]) return static_cast<int>(l);
  }
  return static_cast<int>(cdf.size()) - 1;
}

}  // namespace

void TrajectorySimulator::propagate(CVec& psi, double dt) const {
  if (dt <= 0.0 || h_norm_ == 0.0) return;
  const int nsub = std::max(1, static_cast<int>(std::ceil(h_norm_ * dt / opts_.taylor_step)));
  const double h = dt / nsub;
  CVec term(psi.size()), next(psi.size());
  for (int s = 0; s < nsub; ++s) {
    term = psi;
    for (int k = 1; k < 64; ++k) {
      next.noalias() = h_ * term;
      term = next * cplx(0, -h / k);
      psi += term;
      if (term.norm() < 1e-17 * psi.norm()) break;
    }
  }
}

TrajectoryRecord TrajectorySimulator::run(const StateVector& psi0, double t_max, std::span<const double> sample_times,
                                          std::uint64_t seed, const StopFn& stop) const {
  if (psi0.num_sites() != model_.num_sites()) throw DimensionError("initial state has the wrong site count");
  check_schedule(t_max, sample_times);
  return pauli_jumps_ ? run_pauli(psi0, t_max, sample_times, seed, stop)
                      : run_general(psi0, t_max, sample_times, seed, stop);
}

TrajectoryRecord TrajectorySimulator::run_pauli(const StateVector& psi0, double t_max,
                                                std::span<const double> sample_times, std::uint64_t seed,
                                                const StopFn& stop) const {
  TrajectoryRecord rec;
  rec.seed = seed;
  Philox4x64 rng = make_stream(seed, StreamTag::Trajectory);
  CVec psi = psi0.amplitudes();
  double t_cur = 0.0;
  std::size_t next_sample = 0;
  bool stopped = false;
  auto flush_samples = [&](double upto) {
    while (!stopped && next_sample < sample_times.size() && sample_times[next_sample] <= upto) {
      propagate(psi, sample_times[next_sample] - t_cur);
      t_cur = sample_times[next_sample];
      sample(rec, t_cur, psi);
      ++next_sample;
      if (stop && stop(rec)) stopped = true;
    }
  };
  double t_jump = total_rate_ > 0 ? -std::log(rng.uniform()) / total_rate_ : t_max + 1.0;
  CVec out(psi.size());
  while (t_jump <= t_max) {
    // Samples exactly at the jump time see the pre-jump state.
    flush_samples(t_jump);
    if (stopped) return rec;
    int l = pick_channel(jump_cdf_, rng.uniform());
    propagate(psi, t_jump - t_cur);
    t_cur = t_jump;
    apply_pauli(jump_strings_[static_cast<std::size_t>(l)], psi.data(), out.data(),
                static_cast<std::size_t>(psi.size()));
    psi = out / out.norm();
    rec.jump_events.push_back({t_jump, l});
    t_jump += -std::log(rng.uniform()) / total_rate_;
  }
  flush_samples(t_max);
  return rec;
}

TrajectoryRecord TrajectorySimulator::run_general(const StateVector& psi0, double t_max,
                                                  std::span<const double> sample_times, std::uint64_t seed,
                                                const StopFn& stop) const {
  TrajectoryRecord rec;
  rec.seed = seed;
  Philox4x64 rng = make_stream(seed, StreamTag::Trajectory);
  const SpCMat& A = heff_;
  Dopri5Options o;
  o.rtol = opts_.rtol;
  o.atol = opts_.atol;
  Dopri5 stepper([&A](double, const CVec& y, CVec& dy) { dy.noalias() = cplx(0, -1) * (A * y); }, o);
  CVec y = psi0.amplitudes();
  double t = 0.0;
  double r = rng.uniform();
  bool dark = false;
  std::size_t next_sample = 0;
  auto take = [&](double ts, const CVec& v) {
    sample(rec, ts, v);
    return stop && stop(rec);
  };
  while (next_sample < sample_times.size() && sample_times[next_sample] <= 0.0) {
    if (take(sample_times[next_sample++], y)) return rec;
  }
  while (t < t_max) {
    double t0 = t;
    stepper.step(t, y, t_max);
    if (!dark && y.squaredNorm() <= r) {
      // Bisection on the monotone squared norm inside the last step.
      double lo = t0, hi = t;
      while (hi - lo > opts_.time_tol * std::max(1.0, hi)) {
        double mid = 0.5 * (lo + hi);
        if (stepper.dense_output(mid).squaredNorm() <= r) {
          hi = mid;
        } else {
          lo = mid;
        }
      }
      double tj = hi;
      while (next_sample < sample_times.size() && sample_times[next_sample] <= tj) {
        double ts = sample_times[next_sample++];
        if (take(ts, stepper.dense_output(ts))) return rec;
      }
      CVec psi = stepper.dense_output(tj);
      std::vector<double> cdf;
      double acc = 0;
      std::vector<CVec> outs;
      for (const auto& F : jump_mats_) {
        outs.push_back(F * psi);
        acc += outs.back().squaredNorm();
        cdf.push_back(acc);
      }
      double u = rng.uniform();
      if (acc <= 0.0) {
        dark = true;
        rec.dark_state_time = tj;
        y = psi / psi.norm();
      } else {
        int l = pick_channel(cdf, u);
        y = outs[static_cast<std::size_t>(l)] / outs[static_cast<std::size_t>(l)].norm();
        rec.jump_events.push_back({tj, l});
        r = rng.uniform();
      }
      t = tj;
      stepper.reset();
      continue;
    }
    while (next_sample < sample_times.size() && sample_times[next_sample] <= t) {
      double ts = sample_times[next_sample++];
      if (take(ts, ts == t ? y : stepper.dense_output(ts))) return rec;
    }
  }
  return rec;
}

TrajectoryRecord run_trajectory(const ChainModel& m, const StateVector& psi0, double t_max,
                                std::span<const double> sample_times, std::uint64_t seed,
                                std::vector<NamedObservable> observables, const TrajectoryOptions& opts) {
  TrajectorySimulator sim(m, std::move(observables), opts);
  return sim.run(psi0, t_max, sample_times, seed);
}

void mean_and_stderr(const std::vector<std::vector<double>>& values, std::vector<double>& mean,
                     std::vector<double>& stderr) {
  mean.clear();
  stderr.clear();
  if (values.empty()) return;
  const std::size_t n = values.size(), k = values.front().size();
  mean.assign(k, 0.0);
  stderr.assign(k, 0.0);
  for (const auto& row : values) {
    for (std::size_t i = 0; i < k; ++i) mean[i] += row[i];
  }
  for (auto& v : mean) v /= static_cast<double>(n);
  if (n < 2) return;
  for (const auto& row : values) {
    for (std::size_t i = 0; i < k; ++i) stderr[i] += (row[i] - mean[i]) * (row[i] - mean[i]);
  }
  for (auto& v : stderr) v = std::sqrt(v / static_cast<double>(n - 1) / static_cast<double>(n));
}

EnsembleResult ensemble(const TrajectorySimulator& sim, const StateVector& psi0, double t_max,
                        std::span<const double> sample_times, std::size_t n_traj, std::uint64_t base_seed,
                        bool keep_records) {
  if (n_traj < 1) throw std::invalid_argument("n_traj must be at least 1");
  const std::size_t nobs = sim.observables().size();
  std::vector<TrajectoryRecord> recs(n_traj);
  std::vector<std::string> errors(n_traj);
  const auto count = static_cast<long>(n_traj);
#ifdef DSPT_HAVE_OPENMP
#pragma omp parallel for schedule(dynamic)
#endif
  for (long k = 0; k < count; ++k) {
    try {
      recs[static_cast<std::size_t>(k)] = sim.run(psi0, t_max, sample_times, base_seed + static_cast<std::uint64_t>(k));
    } catch (const std::exception& e) {
      errors[static_cast<std::size_t>(k)] = e.what();
    }
  }
  for (std::size_t k = 0; k < n_traj; ++k) {
    if (!errors[k].empty()) {
      throw NumericalError("trajectory " + std::to_string(k) + " failed: " + errors[k]);
    }
  }
  EnsembleResult res;
  res.times.assign(sample_times.begin(), sample_times.end());
  res.n_traj = n_traj;
  for (const auto& o : sim.observables()) res.names.push_back(o.name);
  res.mean.resize(nobs);
  res.stderr.resize(nobs);
  for (std::size_t j = 0; j < nobs; ++j) {
    std::vector<std::vector<double>> cols(n_traj, std::vector<double>(sample_times.size()));
    for (std::size_t k = 0; k < n_traj; ++k) {
      for (std::size_t s = 0; s < sample_times.size(); ++s) cols[k][s] = recs[k].values[s][j];
    }
    mean_and_stderr(cols, res.mean[j], res.stderr[j]);
  }
  if (keep_records) res.records = std::move(recs);
  return res;
}

}  // namespace dspt
