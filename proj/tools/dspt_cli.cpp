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

// Config-driven experiment runner: dspt run <config> [overrides].

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#ifdef DSPT_HAVE_OPENMP
#include <omp.h>
#endif

#include "config.hpp"
#include "dspt/dense.hpp"
#include "dspt/entanglement.hpp"
#include "dspt/errors.hpp"
#include "dspt/first_passage.hpp"
#include "dspt/lindblad.hpp"
#include "dspt/model.hpp"
#include "dspt/perturbation.hpp"
#include "dspt/qubits.hpp"
#include "dspt/spectral.hpp"
#include "dspt/trajectories.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace dspt::cli {
namespace {

constexpr int kSchemaVersion = 1;

struct Overrides {
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> n_traj;
  std::string out_dir = ".";
  int threads = 0;
};

/// CSV with a schema comment line and a header row; doubles in round-trip form.
class CsvWriter {
 public:
  CsvWriter(const fs::path& path, const std::string& experiment, const std::vector<std::string>& columns)
      : path_(path), out_(path) {
    if (!out_) throw std::runtime_error("cannot open " + path.string() + " for writing");
    out_ << "# dspt " << experiment << " schema_version=" << kSchemaVersion << "\n";
    for (std::size_t i = 0; i < columns.size(); ++i) out_ << (i ? "," : "") << columns[i];
    out_ << "\n";
  }
  CsvWriter& cell(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return put(buf);
  }
  CsvWriter& cell(const std::string& s) { return put(s); }
  CsvWriter& cell(long long v) { return put(std::to_string(v)); }
  void end_row() {
    out_ << "\n";
    first_ = true;
  }
  const fs::path& path() const { return path_; }

 private:
  CsvWriter& put(const std::string& s) {
    out_ << (first_ ? "" : ",") << s;
    first_ = false;
    return *this;
  }
  fs::path path_;
  std::ofstream out_;
  bool first_ = true;
};

struct Context {
  std::string experiment;
  Section root;
  ChainModel model;
  json results = json::object();
  std::vector<std::string> files;
  fs::path stem;
  Overrides ov;
};

ChainModel read_model(const Section& s) {
  s.check_keys({"N", "J", "kappa", "V_xx", "V_y", "jumps", "custom_jumps", "units"});
  ChainModel::Params p;
  p.num_sites = static_cast<int>(s.get_int("N", 8));
  const double J = s.get_double("J", 1.0);
  if (!(J > 0)) throw ConfigError(s.where("J") + ": J must be positive");
  // Energies are stored in units of J; times are then in units of 1/J.
  p.J = 1.0;
  p.kappa = s.get_double("kappa", 2.5) / J;
  p.v_xx = s.get_double("V_xx", 0.0) / J;
  p.v_y = s.get_double("V_y", 0.0) / J;
  try {
    p.jumps = parse_jump_kind(s.get_string("jumps", "ZIZ"));
  } catch (const std::exception& e) {
    throw ConfigError(s.where("jumps") + ": " + e.what());
  }
  if (p.jumps == JumpKind::Custom) {
    for (const auto& text : s.get_strings("custom_jumps", {})) {
      try {
        p.custom_jumps.emplace_back(PauliString::parse(text));
      } catch (const std::exception& e) {
        throw ConfigError(s.where("custom_jumps") + ": " + e.what());
      }
    }
  }
  s.record("units", "energies in J, times in 1/J");
  try {
    return ChainModel(p);
  } catch (const CapacityError&) {
    throw;
  } catch (const std::exception& e) {
    throw ConfigError("model: " + std::string(e.what()));
  }
}

StateVector read_initial_state(const Section& s, int n) {
  s.check_keys({"preset", "kind", "signs", "sign", "basis_index"});
  const std::string preset = s.get_string("preset", s.has("kind") || s.has("basis_index") ? "" : "fig3_left_xyz");
  if (preset == "fig3_left_xyz") {
    const double c = 1.0 / std::sqrt(3.0);
    return prepare_edge_direction_state(n, {c, c, c}, -1);
  }
  if (!preset.empty()) throw ConfigError(s.where("preset") + ": unknown preset '" + preset + "'");
  if (s.has("basis_index")) {
    return StateVector::basis(n, static_cast<std::uint64_t>(s.get_int("basis_index", 0)));
  }
  const std::string kind = s.get_string("kind", "EdgeMode");
  ClusterStateSpec spec;
  if (kind == "EdgeMode") {
    spec.kind = BasisKind::EdgeMode;
  } else if (kind == "FlipSymmetry") {
    spec.kind = BasisKind::FlipSymmetry;
  } else {
    throw ConfigError(s.where("kind") + ": expected EdgeMode or FlipSymmetry");
  }
  if (s.has("signs")) {
    spec.signs = s.get_ints("signs", {});
    if (static_cast<int>(spec.signs.size()) != n) {
      throw ConfigError(s.where("signs") + ": need one sign per site");
    }
  } else {
    spec = ClusterStateSpec::uniform(spec.kind, n, static_cast<int>(s.get_int("sign", -1)));
  }
  try {
    return prepare_cluster_state(spec);
  } catch (const CapacityError&) {
    throw;
  } catch (const std::exception& e) {
    throw ConfigError("initial_state: " + std::string(e.what()));
  }
}

std::vector<NamedObservable> read_observables(const Section& s, int n, const std::vector<std::string>& def) {
  std::vector<NamedObservable> out;
  for (const auto& text : s.get_strings("observables", def)) {
    try {
      out.push_back({text, PauliSum(PauliString::parse(text))});
    } catch (const std::exception& e) {
      throw ConfigError(s.where("observables") + ": '" + text + "': " + e.what());
    }
    if (out.back().op.num_sites() != n) throw ConfigError(s.where("observables") + ": '" + text + "' has wrong length");
  }
  return out;
}

std::string single_letter(int n, int site, char c) {
  std::string s(static_cast<std::size_t>(n), 'I');
  s[static_cast<std::size_t>(site)] = c;
  return "+" + s;
}

std::vector<std::string> default_observables(int n) {
  std::string xz(static_cast<std::size_t>(n), 'I');
  xz[0] = 'X';
  xz[1] = 'Z';
  return {single_letter(n, 0, 'Z'), "+" + xz, single_letter(n, n / 2 - 1, 'Z')};
}

struct Schedule {
  double t_max = 0;
  std::vector<double> times;
  std::size_t n_traj = 0;
  std::uint64_t base_seed = 0;
};

Schedule read_schedule(const Section& s, const Overrides& ov, double t_max_def, int samples_def,
                       long long n_traj_def) {
  s.check_keys({"t_max", "n_samples", "n_traj", "base_seed", "times"});
  Schedule sc;
  sc.t_max = s.get_double("t_max", t_max_def);
  if (!(sc.t_max > 0)) throw ConfigError(s.where("t_max") + ": must be positive");
  if (s.has("times")) {
    sc.times = s.get_grid("times", {});
  } else {
    const long long ns = s.get_int("n_samples", samples_def);
    if (ns < 2) throw ConfigError(s.where("n_samples") + ": need at least 2 samples");
    for (long long k = 0; k < ns; ++k) sc.times.push_back(sc.t_max * static_cast<double>(k) / (ns - 1));
    s.record("times", sc.times);
  }
  long long nt = ov.n_traj ? static_cast<long long>(*ov.n_traj) : s.get_int("n_traj", n_traj_def);
  if (nt < 1) throw ConfigError(s.where("n_traj") + ": must be positive");
  s.record("n_traj", nt);
  sc.n_traj = static_cast<std::size_t>(nt);
  long long seed = ov.seed ? static_cast<long long>(*ov.seed) : s.get_int("base_seed", 1);
  s.record("base_seed", seed);
  sc.base_seed = static_cast<std::uint64_t>(seed);
  return sc;
}

TrajectoryOptions read_trajectory_options(const Section& s) {
  TrajectoryOptions o;
  o.rtol = s.get_double("rtol", o.rtol);
  o.atol = s.get_double("atol", o.atol);
  o.time_tol = s.get_double("time_tol", o.time_tol);
  o.taylor_step = s.get_double("taylor_step", o.taylor_step);
  return o;
}

fs::path output_file(Context& c, const std::string& suffix) {
  fs::path p = c.stem;
  p += suffix;
  c.files.push_back(p.filename().string());
  return p;
}

void run_autocorr(Context& c) {
  Section p = c.root.child("params");
  p.check_keys({"observable", "krylov_tol", "level"});
  const int n = c.model.num_sites();
  StateVector psi0 = read_initial_state(c.root.child("initial_state"), n);
  Schedule sc = read_schedule(c.root.child("schedule"), c.ov, 1000.0, 201, 1);
  std::string obs = p.get_string("observable", single_letter(n, 0, 'Z'));
  PauliSum o;
  try {
    o = PauliSum(PauliString::parse(obs));
  } catch (const std::exception& e) {
    throw ConfigError(p.where("observable") + ": " + e.what());
  }
  AutocorrOptions ao;
  ao.krylov_tol = p.get_double("krylov_tol", ao.krylov_tol);
  const double level = p.get_double("level", std::exp(-1.0));
  AutocorrResult a = autocorrelation(c.model, o, psi0, sc.times, ao);
  CsvWriter w(output_file(c, ".csv"), c.experiment, {"time", "value"});
  for (std::size_t k = 0; k < a.times.size(); ++k) w.cell(a.times[k]).cell(a.values[k]).end_row();
  const double td = decay_time(a, level);
  c.results["decay_time"] = std::isnan(td) ? json(nullptr) : json(td);
  c.results["level"] = level;
}

void run_lindblad_evolve(Context& c) {
  Section p = c.root.child("params");
  p.check_keys({"observables", "rtol", "atol", "krylov_tol"});
  const int n = c.model.num_sites();
  if (n > kSuperoperatorCap) {
    throw CapacityError("lindblad_evolve needs N <= " + std::to_string(kSuperoperatorCap) + " (got " +
                        std::to_string(n) + ")");
  }
  StateVector psi0 = read_initial_state(c.root.child("initial_state"), n);
  Schedule sc = read_schedule(c.root.child("schedule"), c.ov, 10.0, 101, 1);
  auto obs = read_observables(p, n, default_observables(n));
  EvolveOptions eo;
  eo.rtol = p.get_double("rtol", eo.rtol);
  eo.atol = p.get_double("atol", eo.atol);
  eo.krylov_tol = p.get_double("krylov_tol", eo.krylov_tol);
  auto L = Superoperator::from_model(c.model);
  auto rhos = evolve(L, DensityMatrix::from_pure(psi0), sc.times, eo);
  std::vector<std::string> cols{"time"};
  for (const auto& o : obs) cols.push_back(o.name);
  CsvWriter w(output_file(c, ".csv"), c.experiment, cols);
  for (std::size_t k = 0; k < sc.times.size(); ++k) {
    w.cell(sc.times[k]);
    for (const auto& o : obs) w.cell(expectation(o.op, rhos[k]));
    w.end_row();
  }
}

void run_trajectories(Context& c) {
  Section p = c.root.child("params");
  p.check_keys({"observables", "tolerances", "jump_log"});
  const int n = c.model.num_sites();
  StateVector psi0 = read_initial_state(c.root.child("initial_state"), n);
  Schedule sc = read_schedule(c.root.child("schedule"), c.ov, 10.0, 101, 1000);
  auto obs = read_observables(p, n, default_observables(n));
  TrajectoryOptions to = read_trajectory_options(p.child("tolerances"));
  const bool jump_log = p.get_bool("jump_log", true);
  TrajectorySimulator sim(c.model, obs, to);
  EnsembleResult e = ensemble(sim, psi0, sc.t_max, sc.times, sc.n_traj, sc.base_seed);
  std::vector<std::string> cols{"time"};
  for (const auto& o : obs) {
    cols.push_back(o.name + "_mean");
    cols.push_back(o.name + "_stderr");
  }
  CsvWriter w(output_file(c, ".csv"), c.experiment, cols);
  for (std::size_t k = 0; k < e.times.size(); ++k) {
    w.cell(e.times[k]);
    for (std::size_t j = 0; j < obs.size(); ++j) w.cell(e.mean[j][k]).cell(e.stderr[j][k]);
    w.end_row();
  }
  if (jump_log) {
    // The first trajectory of the ensemble, replayed from its seed.
    TrajectoryRecord rec = sim.run(psi0, sc.t_max, sc.times, sc.base_seed);
    CsvWriter jl(output_file(c, "_jumps.csv"), c.experiment + "_jumps", {"time", "channel"});
    for (const auto& ev : rec.jump_events) jl.cell(ev.time).cell(static_cast<long long>(ev.channel)).end_row();
    c.results["jump_log_seed"] = sc.base_seed;
  }
  c.results["n_traj"] = e.n_traj;
}

void run_gap_scan(Context& c) {
  Section p = c.root.child("params");
  p.check_keys({"kappa_grid", "numeric", "subsectors"});
  std::vector<double> grid = p.get_grid("kappa_grid", {});
  if (grid.empty()) {
    for (int k = 0; k < 100; ++k) grid.push_back(0.05 * std::pow(100.0, k / 99.0));
    p.record("kappa_grid", grid);
  }
  const bool numeric = p.get_bool("numeric", c.model.num_sites() <= kEnumerationCap);
  const bool subsectors = p.get_bool("subsectors", false);
  std::vector<FragmentClass> classes;
  if (numeric || subsectors) classes = enumerate_fragment_classes(c.model.num_sites());
  std::vector<std::string> cols{"kappa_over_J", "analytic_gap", "numeric_gap", "branch"};
  const int nsub = c.model.num_sites() - 1;
  if (subsectors) {
    for (int s = 0; s < nsub; ++s) cols.push_back("gap_n" + std::to_string(s));
  }
  CsvWriter w(output_file(c, ".csv"), c.experiment, cols);
  for (double x : grid) {
    GapResult g = analytic_gap(x, 1.0);
    w.cell(x).cell(g.analytic_gap);
    std::optional<SubsectorGaps> sg;
    if (numeric || subsectors) sg = subsector_gaps(c.model.with_kappa(x), classes);
    if (numeric) {
      w.cell(sg->global());
    } else {
      w.cell(std::string("nan"));
    }
    w.cell(std::string(gap_branch_name(g.dominant_branch)));
    if (subsectors) {
      for (int s = 0; s < nsub; ++s) w.cell(sg->gap[static_cast<std::size_t>(s)]);
    }
    w.end_row();
  }
  c.results["branch_crossing"] = gap_branch_crossing();
}

void run_pt_scan(Context& c) {
  Section p = c.root.child("params");
  p.check_keys({"kappa_grid", "perturbation"});
  std::vector<double> grid = p.get_grid("kappa_grid", {});
  if (grid.empty()) {
    for (int k = 0; k < 60; ++k) grid.push_back(0.05 * std::pow(100.0, k / 59.0));
    p.record("kappa_grid", grid);
  }
  PerturbationKind kind;
  try {
    kind = parse_perturbation(p.get_string("perturbation", "XX"));
  } catch (const std::exception& e) {
    throw ConfigError(p.where("perturbation") + ": " + e.what());
  }
  const int n = c.model.num_sites();
  CsvWriter w(output_file(c, ".csv"), c.experiment,
              {"kappa_over_J", "delta_over_V2", "perturbation", "N", "closed_form"});
  for (double x : grid) {
    EffectiveGenerator g = effective_L2(c.model.with_perturbation(0, 0).with_kappa(x), kind);
    const double cf = kind == PerturbationKind::XX ? 2 * closed_form_L2_Z1(x, 1.0) : closed_form_spread_Hy(x, 1.0, n);
    w.cell(x).cell(spread_delta(g)).cell(std::string(perturbation_name(kind))).cell(static_cast<long long>(n));
    w.cell(cf).end_row();
  }
}

void run_degeneracy_scan(Context& c) {
  Section p = c.root.child("params");
  p.check_keys({"basis", "cut"});
  Schedule sc = read_schedule(c.root.child("schedule"), c.ov, 50.0, 51, 200);
  DegeneracyOptions o;
  const std::string basis = p.get_string("basis", "FlipSymmetry");
  if (basis == "FlipSymmetry") {
    o.kind = BasisKind::FlipSymmetry;
  } else if (basis == "EdgeMode") {
    o.kind = BasisKind::EdgeMode;
  } else {
    throw ConfigError(p.where("basis") + ": expected EdgeMode or FlipSymmetry");
  }
  o.cut = static_cast<int>(p.get_int("cut", 0));
  DegeneracySeries d = track_degeneracy_ensemble(c.model, sc.t_max, sc.times, sc.n_traj, sc.base_seed, o);
  CsvWriter w(output_file(c, ".csv"), c.experiment,
              {"time", "D_mean", "D_stderr", "gap_mean", "gap_stderr", "flagged_fraction"});
  for (std::size_t k = 0; k < d.times.size(); ++k) {
    w.cell(d.times[k]).cell(d.d_mean[k]).cell(d.d_stderr[k]).cell(d.gap_mean[k]).cell(d.gap_stderr[k]);
    w.cell(d.flagged_fraction[k]).end_row();
  }
}

void run_fidelity_protocol_experiment(Context& c) {
  Section p = c.root.child("params");
  p.check_keys({"two_qubit", "side", "threshold", "stop_at_crossing", "bootstrap_reps", "histogram_bins",
                "tolerances"});
  const int n = c.model.num_sites();
  StateVector psi0 = read_initial_state(c.root.child("initial_state"), n);
  Schedule sc = read_schedule(c.root.child("schedule"), c.ov, 50.0, 101, 1000);
  FidelityProtocolOptions o;
  o.two_qubit = p.get_bool("two_qubit", false);
  const std::string side = p.get_string("side", "L");
  if (side != "L" && side != "R") throw ConfigError(p.where("side") + ": expected L or R");
  o.side = side == "L" ? Side::Left : Side::Right;
  o.threshold = p.get_double("threshold", 0.75);
  o.stop_at_crossing = p.get_bool("stop_at_crossing", false);
  o.trajectory = read_trajectory_options(p.child("tolerances"));
  const int reps = static_cast<int>(p.get_int("bootstrap_reps", 0));
  const int bins = static_cast<int>(p.get_int("histogram_bins", 40));
  if (bins < 1) throw ConfigError(p.where("histogram_bins") + ": must be positive");
  FidelityProtocolResult r = run_fidelity_protocol(c.model, psi0, sc.t_max, sc.times, sc.n_traj, sc.base_seed, o);

  if (!o.stop_at_crossing) {
    CsvWriter w(output_file(c, ".csv"), c.experiment, {"time", "fidelity_mean", "fidelity_stderr", "corrected"});
    for (int corrected = 1; corrected >= 0; --corrected) {
      const auto& mean = corrected ? r.corrected_mean : r.uncorrected_mean;
      const auto& se = corrected ? r.corrected_stderr : r.uncorrected_stderr;
      for (std::size_t k = 0; k < r.times.size(); ++k) {
        w.cell(r.times[k]).cell(mean[k]).cell(se[k]).cell(static_cast<long long>(corrected)).end_row();
      }
    }
  }
  const auto& s = r.crossings.samples;
  {
    CsvWriter w(output_file(c, "_t075.csv"), c.experiment + "_t075", {"trajectory_sample"});
    for (double t : s) w.cell(t).end_row();
  }
  json fit_json = json::object();
  fit_json["n_crossings"] = s.size();
  fit_json["n_censored"] = r.crossings.n_censored;
  fit_json["crossing_fraction"] = r.crossings.crossing_fraction();
  if (!r.crossings.warning.empty()) {
    fit_json["warning"] = r.crossings.warning;
    std::cerr << "warning: " << r.crossings.warning << "\n";
  }
  if (s.size() >= 2) {
    InverseGaussianFit f = fit_inverse_gaussian(s, reps, sc.base_seed);
    fit_json["mu"] = f.mu;
    fit_json["lambda"] = f.degenerate ? json(nullptr) : json(f.lambda);
    fit_json["degenerate"] = f.degenerate;
    fit_json["ks_distance"] = f.ks_distance;
    fit_json["ks_critical_1pct"] = f.ks_critical_1pct;
    fit_json["passes_ks_1pct"] = f.passes_ks_1pct();
    if (reps > 0) fit_json["bootstrap_pvalue"] = f.bootstrap_pvalue;
    if (s.size() < 100) fit_json["note"] = "fewer than 100 crossings; fit is indicative only";
    // Binned density next to the fitted law.
    const double hi = *std::max_element(s.begin(), s.end());
    const double width = hi / bins;
    std::vector<long long> counts(static_cast<std::size_t>(bins), 0);
    for (double t : s) {
      auto b = static_cast<std::size_t>(std::min<double>(bins - 1, std::floor(t / width)));
      ++counts[b];
    }
    CsvWriter h(output_file(c, "_t075_hist.csv"), c.experiment + "_t075_hist",
                {"bin_lo", "bin_hi", "count", "density", "ig_pdf"});
    for (int b = 0; b < bins; ++b) {
      const double lo = b * width, mid = lo + 0.5 * width;
      const double dens = static_cast<double>(counts[static_cast<std::size_t>(b)]) / (s.size() * width);
      h.cell(lo).cell(lo + width).cell(counts[static_cast<std::size_t>(b)]).cell(dens);
      h.cell(f.degenerate ? 0.0 : inverse_gaussian_pdf(mid, f.mu, f.lambda)).end_row();
    }
  }
  c.results["first_passage_fit"] = fit_json;
}

void run_steady_space(Context& c) {
  Section p = c.root.child("params");
  p.check_keys({"rel_tol", "dense_max"});
  SteadyOptions so;
  so.rel_tol = p.get_double("rel_tol", so.rel_tol);
  so.dense_max = static_cast<int>(p.get_int("dense_max", so.dense_max));
  SteadySpace ss = steady_space(PauliLiouvillian::from_model(c.model), so);
  CsvWriter w(output_file(c, ".csv"), c.experiment, {"index", "pauli", "coeff_re", "coeff_im"});
  for (std::size_t i = 0; i < ss.basis.size(); ++i) {
    for (const auto& t : ss.basis[i].terms()) {
      w.cell(static_cast<long long>(i)).cell(t.op.str()).cell(t.coeff.real()).cell(t.coeff.imag()).end_row();
    }
  }
  c.results["dimension"] = ss.dimension();
  c.results["num_blocks"] = ss.num_blocks;
  c.results["largest_block"] = ss.largest_block;
  c.results["tolerance"] = ss.tolerance;
  json slow = json::array();
  for (const auto& z : ss.slow_eigenvalues) slow.push_back({z.real(), z.imag()});
  c.results["slow_eigenvalues"] = slow;
}

const std::map<std::string, std::function<void(Context&)>>& experiments() {
  static const std::map<std::string, std::function<void(Context&)>> table{
      {"autocorr", run_autocorr},
      {"lindblad_evolve", run_lindblad_evolve},
      {"trajectories", run_trajectories},
      {"gap_scan", run_gap_scan},
      {"pt_scan", run_pt_scan},
      {"degeneracy_scan", run_degeneracy_scan},
      {"fidelity_protocol", run_fidelity_protocol_experiment},
      {"steady_space", run_steady_space},
  };
  return table;
}

int run(const std::string& config_path, const Overrides& ov) {
  YAML::Node doc;
  try {
    doc = YAML::LoadFile(config_path);
  } catch (const YAML::BadFile&) {
    std::cerr << "error: cannot read config '" << config_path << "'\n";
    return 1;
  } catch (const YAML::Exception& e) {
    std::cerr << "error: " << config_path << ": line " << e.mark.line + 1 << ": " << e.msg << "\n";
    return 1;
  }
  json resolved = json::object();
  try {
    Section root(doc, &resolved, "");
    root.check_keys({"experiment", "model", "initial_state", "schedule", "params", "output", "schema_version",
                     "results", "files"});
    Context c{"", root, ChainModel(ChainModel::Params{}), json::object(), {}, {}, ov};
    c.experiment = root.get_string("experiment", "");
    auto it = experiments().find(c.experiment);
    if (it == experiments().end()) {
      std::string names;
      for (const auto& [k, v] : experiments()) names += (names.empty() ? "" : ", ") + k;
      throw ConfigError(root.where("experiment") + ": expected one of " + names);
    }
    c.model = read_model(root.child("model"));
    Section out = root.child("output");
    out.check_keys({"path"});
    const std::string stem = out.get_string("path", c.experiment);
    c.stem = fs::path(ov.out_dir) / stem;
    if (c.stem.has_parent_path()) fs::create_directories(c.stem.parent_path());
#ifdef DSPT_HAVE_OPENMP
    if (ov.threads > 0) omp_set_num_threads(ov.threads);
#endif
    it->second(c);
    resolved["schema_version"] = kSchemaVersion;
    resolved["results"] = c.results;
    resolved["files"] = c.files;
    fs::path side = c.stem;
    side += ".json";
    std::ofstream js(side);
    js << resolved.dump(2) << "\n";
    std::cout << "wrote";
    for (const auto& f : c.files) std::cout << " " << f;
    std::cout << " " << side.filename().string() << "\n";
    return 0;
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 1;
  } catch (const CapacityError& e) {
    std::cerr << "size cap exceeded: " << e.what() << "\n";
    return 1;
  } catch (const UnsupportedModelError& e) {
    std::cerr << "config error: unsupported model for this experiment: " << e.what() << "\n";
    return 1;
  } catch (const NumericalError& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return 2;
  }
}

}  // namespace
}  // namespace dspt::cli

int main(int argc, char** argv) {
  CLI::App app{"Dissipative SPT chain experiments"};
  app.require_subcommand(1);
  dspt::cli::Overrides ov;
  std::string config;
  std::uint64_t seed = 0;
  std::size_t n_traj = 0;
  auto* run = app.add_subcommand("run", "Run the experiment described by a YAML config (or a JSON sidecar)");
  run->add_option("config", config, "Config path")->required();
  auto* seed_opt = run->add_option("--seed", seed, "Override schedule.base_seed");
  auto* ntraj_opt = run->add_option("--n-traj", n_traj, "Override schedule.n_traj")->check(CLI::PositiveNumber);
  run->add_option("--out-dir", ov.out_dir, "Directory for output files");
  run->add_option("--threads", ov.threads, "OpenMP threads (0 keeps the default)")->check(CLI::NonNegativeNumber);
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : 1;
  }
  if (*seed_opt) ov.seed = seed;
  if (*ntraj_opt) ov.n_traj = n_traj;
  return dspt::cli::run(config, ov);
}
