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


#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <string>
#include <vector>

#include "dspt/dense.hpp"
#include "dspt/entanglement.hpp"
#include "dspt/errors.hpp"
#include "dspt/first_passage.hpp"
#include "dspt/lindblad.hpp"
#include "dspt/model.hpp"
#include "dspt/pauli.hpp"
#include "dspt/perturbation.hpp"
#include "dspt/qubits.hpp"
#include "dspt/spectral.hpp"
#include "dspt/trajectories.hpp"

namespace py = pybind11;
using namespace dspt;

namespace {

std::vector<NamedObservable> to_observables(const std::vector<std::pair<std::string, PauliSum>>& obs) {
  std::vector<NamedObservable> out;
  for (const auto& [name, op] : obs) out.push_back({name, op});
  return out;
}

ChainModel make_model(int n, double kappa, const std::string& jumps, double J, double v_xx, double v_y) {
  ChainModel::Params p;
  p.num_sites = n;
  p.kappa = kappa;
  p.J = J;
  p.v_xx = v_xx;
  p.v_y = v_y;
  p.jumps = parse_jump_kind(jumps);
  return ChainModel(p);
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Cluster-chain Lindblad dynamics, spectra and edge-qubit protocols";
  m.attr("__version__") = "0.1.0";

  py::register_exception<CapacityError>(m, "CapacityError", PyExc_ValueError);
  py::register_exception<DimensionError>(m, "DimensionError", PyExc_ValueError);
  py::register_exception<NumericalError>(m, "NumericalError", PyExc_RuntimeError);

  // Pauli algebra
  py::class_<PauliString>(m, "PauliString")
      .def(py::init(&PauliString::parse), py::arg("text"))
      .def_static("from_letters", &PauliString::from_letters, py::arg("letters"), py::arg("sign") = 1)
      .def_property_readonly("num_sites", &PauliString::num_sites)
      .def_property_readonly("x_mask", &PauliString::x_mask)
      .def_property_readonly("z_mask", &PauliString::z_mask)
      .def_property_readonly("phase", &PauliString::phase)
      .def_property_readonly("weight", &PauliString::weight)
      .def("letters", &PauliString::letters)
      .def("adjoint", &PauliString::adjoint)
      .def("is_hermitian", &PauliString::is_hermitian)
      .def("__mul__", [](const PauliString& a, const PauliString& b) { return a * b; })
      .def("__eq__", [](const PauliString& a, const PauliString& b) { return a == b; })
      .def("__hash__", [](const PauliString& p) { return std::hash<PauliString>{}(p); })
      .def("__str__", &PauliString::str)
      .def("__repr__", [](const PauliString& p) { return "PauliString('" + p.str() + "')"; });
  m.def("commutes", &commutes, py::arg("a"), py::arg("b"));
  m.def("to_cluster_basis", &to_cluster_basis);
  m.def("from_cluster_basis", &from_cluster_basis);

  py::class_<PauliSum>(m, "PauliSum")
      .def(py::init<int>(), py::arg("num_sites"))
      .def(py::init<const PauliString&, cplx>(), py::arg("op"), py::arg("coeff") = cplx(1.0))
      .def_property_readonly("num_sites", &PauliSum::num_sites)
      .def("add", [](PauliSum& s, cplx c, const PauliString& p) -> PauliSum& { return s.add(c, p); },
           py::arg("coeff"), py::arg("op"), py::return_value_policy::reference_internal)
      .def("terms",
           [](const PauliSum& s) {
             std::vector<std::pair<cplx, PauliString>> out;
             for (const auto& t : s.terms()) out.emplace_back(t.coeff, t.op);
             return out;
           })
      .def("coefficient", &PauliSum::coefficient)
      .def("adjoint", &PauliSum::adjoint)
      .def("is_hermitian", &PauliSum::is_hermitian, py::arg("tol") = 1e-12)
      .def("__len__", &PauliSum::size)
      .def("__add__", [](const PauliSum& a, const PauliSum& b) { return a + b; })
      .def("__sub__", [](const PauliSum& a, const PauliSum& b) { return a - b; })
      .def("__mul__", [](const PauliSum& a, const PauliSum& b) { return a * b; })
      .def("__mul__", [](const PauliSum& a, cplx c) { return a * c; })
      .def("__rmul__", [](const PauliSum& a, cplx c) { return c * a; })
      .def("__eq__", [](const PauliSum& a, const PauliSum& b) { return a == b; })
      .def("__str__", &PauliSum::str);
  py::implicitly_convertible<PauliString, PauliSum>();
  m.def("commutator", &commutator);
  m.def("to_matrix", &materialize_dense, py::arg("op"), "Dense matrix of an operator (site l is bit l).");

  // Model
  py::class_<ChainModel>(m, "ChainModel")
      .def(py::init(&make_model), py::arg("num_sites"), py::arg("kappa"), py::arg("jumps") = "ZIZ",
           py::arg("J") = 1.0, py::arg("v_xx") = 0.0, py::arg("v_y") = 0.0)
      .def_property_readonly("num_sites", &ChainModel::num_sites)
      .def_property_readonly("kappa", &ChainModel::kappa)
      .def_property_readonly("J", &ChainModel::J)
      .def_property_readonly("v_xx", &ChainModel::v_xx)
      .def_property_readonly("v_y", &ChainModel::v_y)
      .def_property_readonly("jumps", [](const ChainModel& c) { return std::string(jump_kind_name(c.jump_kind())); })
      .def("with_kappa", &ChainModel::with_kappa)
      .def("with_perturbation", &ChainModel::with_perturbation)
      .def("hamiltonian", &build_hamiltonian)
      .def("jump_operators", &build_jumps);
  m.def("canonical_symmetries", &canonical_symmetries, py::arg("num_sites"));
  m.def(
      "classify_symmetry",
      [](const ChainModel& c, const PauliSum& u) {
        auto r = classify_symmetry(c, u);
        return std::string(symmetry_class_name(r.classification));
      },
      py::arg("model"), py::arg("op"), "Returns 'Strong', 'Weak' or 'Broken'.");

  // States
  py::enum_<BasisKind>(m, "BasisKind")
      .value("EdgeMode", BasisKind::EdgeMode)
      .value("FlipSymmetry", BasisKind::FlipSymmetry);
  py::class_<StateVector>(m, "StateVector")
      .def(py::init<int, CVec>(), py::arg("num_sites"), py::arg("amplitudes"))
      .def_property_readonly("num_sites", &StateVector::num_sites)
      .def_property_readonly("amplitudes", &StateVector::amplitudes);
  m.def(
      "cluster_state",
      [](BasisKind kind, std::vector<int> signs) {
        ClusterStateSpec s;
        s.kind = kind;
        s.signs = std::move(signs);
        return prepare_cluster_state(s);
      },
      py::arg("kind"), py::arg("signs"));
  m.def("edge_direction_state", &prepare_edge_direction_state, py::arg("num_sites"), py::arg("direction"),
        py::arg("bulk_sign") = -1);
  m.def(
      "expectation", [](const PauliSum& op, const StateVector& psi) { return expectation(op, psi); },
      py::arg("op"), py::arg("state"));

  // Lindblad
  m.def(
      "steady_space_dimension",
      [](const ChainModel& c) { return steady_space(PauliLiouvillian::from_model(c)).dimension(); },
      py::arg("model"));
  m.def(
      "autocorrelation",
      [](const ChainModel& c, const PauliSum& op, const StateVector& psi, const std::vector<double>& times) {
        return autocorrelation(c, op, psi, times).values;
      },
      py::arg("model"), py::arg("op"), py::arg("state"), py::arg("times"));

  // Spectra
  m.def("lambda1", &lambda1, py::arg("alpha"), py::arg("kappa"), py::arg("J") = 1.0);
  m.def("lambda2", &lambda2, py::arg("kappa"), py::arg("J") = 1.0);
  m.def(
      "analytic_gap", [](double kappa, double J) { return analytic_gap(kappa, J).analytic_gap; }, py::arg("kappa"),
      py::arg("J") = 1.0);
  m.def("numeric_gap", &verify_gap_numeric, py::arg("model"));
  m.def("gap_branch_crossing", [] { return gap_branch_crossing(); });

  // Perturbation theory
  m.def(
      "effective_l2_diagonal",
      [](const ChainModel& c, const std::string& kind) {
        auto g = effective_L2(c, parse_perturbation(kind));
        std::vector<std::pair<PauliString, double>> out;
        for (std::size_t i = 0; i < g.basis.size(); ++i) out.emplace_back(g.basis[i], g.l2_diag[i]);
        return out;
      },
      py::arg("model"), py::arg("kind"));
  m.def(
      "spread_delta", [](const ChainModel& c, const std::string& kind) {
        return spread_delta(effective_L2(c, parse_perturbation(kind)));
      },
      py::arg("model"), py::arg("kind"));

  // Trajectories
  m.def(
      "ensemble",
      [](const ChainModel& c, const StateVector& psi, const std::vector<std::pair<std::string, PauliSum>>& obs,
         const std::vector<double>& times, std::size_t n_traj, std::uint64_t seed) {
        TrajectorySimulator sim(c, to_observables(obs));
        EnsembleResult r;
        {
          py::gil_scoped_release release;
          r = ensemble(sim, psi, times.empty() ? 0.0 : times.back(), times, n_traj, seed);
        }
        py::dict d;
        d["times"] = r.times;
        d["names"] = r.names;
        d["mean"] = r.mean;
        d["stderr"] = r.stderr;
        return d;
      },
      py::arg("model"), py::arg("state"), py::arg("observables"), py::arg("times"), py::arg("n_traj"),
      py::arg("seed") = 0);

  // Entanglement
  m.def(
      "schmidt_spectrum", [](const StateVector& psi, int cut) { return schmidt_spectrum(psi, cut).values; },
      py::arg("state"), py::arg("cut"));
  m.def(
      "degeneracy_metric", [](const std::vector<double>& v) { return degeneracy_metric(v).value; },
      py::arg("values"));
  m.def(
      "degeneracy_series",
      [](const ChainModel& c, const std::vector<double>& times, std::size_t n_traj, std::uint64_t seed,
         BasisKind kind, int cut) {
        DegeneracyOptions o;
        o.kind = kind;
        o.cut = cut;
        DegeneracySeries s;
        {
          py::gil_scoped_release release;
          s = track_degeneracy_ensemble(c, times.empty() ? 0.0 : times.back(), times, n_traj, seed, o);
        }
        py::dict d;
        d["times"] = s.times;
        d["d_mean"] = s.d_mean;
        d["d_stderr"] = s.d_stderr;
        return d;
      },
      py::arg("model"), py::arg("times"), py::arg("n_traj"), py::arg("seed") = 0,
      py::arg("kind") = BasisKind::FlipSymmetry, py::arg("cut") = 0);

  // Edge qubits
  m.def(
      "weak_qubit_bloch",
      [](const StateVector& psi, const std::string& side) {
        auto b = weak_qubit_bloch(psi, side == "right" ? Side::Right : Side::Left);
        return std::array<double, 3>{b.x, b.y, b.z};
      },
      py::arg("state"), py::arg("side") = "left");
  m.def(
      "fidelity_protocol",
      [](const ChainModel& c, const StateVector& psi, const std::vector<double>& times, std::size_t n_traj,
         std::uint64_t seed, bool two_qubit) {
        FidelityProtocolOptions o;
        o.two_qubit = two_qubit;
        FidelityProtocolResult r;
        {
          py::gil_scoped_release release;
          r = run_fidelity_protocol(c, psi, times.empty() ? 0.0 : times.back(), times, n_traj, seed, o);
        }
        py::dict d;
        d["times"] = r.times;
        d["corrected_mean"] = r.corrected_mean;
        d["uncorrected_mean"] = r.uncorrected_mean;
        d["first_passages"] = r.crossings.samples;
        return d;
      },
      py::arg("model"), py::arg("state"), py::arg("times"), py::arg("n_traj"), py::arg("seed") = 0,
      py::arg("two_qubit") = false);

  // First passage statistics
  m.def(
      "fit_inverse_gaussian",
      [](const std::vector<double>& s, int reps, std::uint64_t seed) {
        auto f = fit_inverse_gaussian(s, reps, seed);
        py::dict d;
        d["mu"] = f.mu;
        d["lambda"] = f.lambda;
        d["ks_distance"] = f.ks_distance;
        d["ks_critical_1pct"] = f.ks_critical_1pct;
        d["bootstrap_pvalue"] = f.bootstrap_pvalue;
        return d;
      },
      py::arg("samples"), py::arg("bootstrap_reps") = 0, py::arg("seed") = 0);
  m.def("sample_inverse_gaussian", &sample_inverse_gaussian, py::arg("mu"), py::arg("lambda"), py::arg("n"),
        py::arg("seed") = 0);
  m.def("inverse_gaussian_cdf", &inverse_gaussian_cdf, py::arg("t"), py::arg("mu"), py::arg("lambda"));
}
