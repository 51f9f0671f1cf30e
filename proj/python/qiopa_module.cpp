// Copyright 2026 The qiopa Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <pybind11/complex.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "qiopa/config.hpp"
#include "qiopa/detection.hpp"
#include "qiopa/machines.hpp"

namespace py = pybind11;
using namespace qiopa;

namespace {

py::dict fidelity_dict(const FidelityTriple& f) {
    py::dict d;
    d["entangler"] = f.entangler;
    d["clone"] = f.clone;
    d["unot"] = f.unot;
    return d;
}

std::map<std::string, Complex> state_terms(const FockState& s) {
    std::map<std::string, Complex> out;
    for (const auto& [n, c] : s.terms()) out[format_occupation(n)] = c;
    return out;
}

}  // namespace

PYBIND11_MODULE(_qiopa, m) {
    m.doc() = "Quantum-injected optical parametric amplifier simulator";

    py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);

    py::class_<QubitSpec>(m, "Qubit")
        .def(py::init<Complex, Complex>(), py::arg("alpha"), py::arg("beta"))
        .def_static("from_bloch", &QubitSpec::from_bloch, py::arg("theta"), py::arg("phi"))
        .def_property_readonly("alpha", &QubitSpec::alpha)
        .def_property_readonly("beta", &QubitSpec::beta)
        .def_property_readonly("theta", &QubitSpec::theta)
        .def_property_readonly("phi", &QubitSpec::phi)
        .def("orthogonal", &QubitSpec::orthogonal)
        .def("__repr__", [](const QubitSpec& q) {
            return "Qubit(theta=" + std::to_string(q.theta()) + ", phi=" + std::to_string(q.phi()) + ")";
        });

    m.def(
        "basis_size",
        [](int n_modes, int photon_cap) {
            std::vector<Mode> modes;
            for (int i = 0; i < n_modes; ++i) modes.push_back({"m" + std::to_string(i), "H"});
            return enumerate_basis(ModeRegistry(modes, photon_cap)).size();
        },
        py::arg("n_modes"), py::arg("photon_cap"), "Number of Fock states with at most photon_cap photons.");

    m.def(
        "amplify",
        [](const QubitSpec& psi, double gain, const std::string& method, int photon_cap) {
            return state_terms(amplifier_output(psi, Gain(gain), parse_method(method), photon_cap));
        },
        py::arg("psi"), py::arg("gain") = 0.1, py::arg("method") = "first_order",
        py::arg("photon_cap") = kDefaultPhotonCap,
        "Amplifier output as {occupation: amplitude}; modes k1H k1V k2H k2V aH aV bH bV.");

    m.def(
        "fidelities",
        [](const QubitSpec& psi, double gain, const std::string& method, int photon_cap) {
            return fidelity_dict(evaluate_machines(psi, Gain(gain), parse_method(method), photon_cap).fidelities);
        },
        py::arg("psi"), py::arg("gain") = 0.1, py::arg("method") = "first_order",
        py::arg("photon_cap") = kDefaultPhotonCap);

    m.def(
        "universality",
        [](int n, double gain, const std::string& method, int parallel) {
            py::gil_scoped_release release;
            const SweepResult sweep = universality_sweep(n, Gain(gain), parse_method(method), kDefaultPhotonCap, parallel);
            py::gil_scoped_acquire acquire;
            return fidelity_dict(sweep.spread);
        },
        py::arg("n") = 50, py::arg("gain") = 0.1, py::arg("method") = "first_order", py::arg("parallel") = 1,
        "max - min of each fidelity over n Fibonacci points on the Bloch sphere.");

    m.def(
        "threefold",
        [](const QubitSpec& psi, double gain, const std::string& method) {
            const PostSelection post = threefold_pipeline(psi, Gain(gain), parse_method(method));
            py::dict d;
            d["probability"] = post.probability;
            if (post.conditional) {
                d["state"] = state_terms(*post.conditional);
                d["histogram"] = histogram_xyz(*post.conditional);
            } else {
                d["state"] = py::none();
                d["histogram"] = py::none();
            }
            return d;
        },
        py::arg("psi") = QubitSpec::horizontal(), py::arg("gain") = 0.1, py::arg("method") = "first_order",
        "Post-selected one-photon-per-detector-pair state after the beamsplitter.");

    m.def(
        "rotated_correlation",
        [](double overlap, double analyzer_angle, double gain) {
            const PostSelection post = threefold_pipeline(QubitSpec::horizontal(), Gain(gain), EvolutionMethod::kFirstOrder);
            if (!post.conditional) throw std::domain_error("empty post-selection");
            const Correlation c = rotated_basis_correlation(*post.conditional, analyzer_angle, overlap);
            return std::make_pair(c.same, c.different);
        },
        py::arg("overlap") = 1.0, py::arg("analyzer_angle") = 0.39269908169872414, py::arg("gain") = 0.1,
        "(P(same), P(different)) of the a/b polarizations given k2 = H.");

    m.def(
        "overlap_scan",
        [](const std::vector<double>& z, double v_max, double sigma_z, double gain, double eta) {
            const PostSelection post = threefold_pipeline(QubitSpec::horizontal(), Gain(gain), EvolutionMethod::kFirstOrder);
            const ScanResult scan = overlap_scan(post, OverlapModel(sigma_z, v_max), z, eta);
            std::vector<std::tuple<double, double, double>> rows;
            for (const auto& r : scan.rows) rows.emplace_back(r.z, r.ratio, r.coincidence_probability);
            return rows;
        },
        py::arg("z"), py::arg("v_max") = 1.0, py::arg("sigma_z") = 20.0, py::arg("gain") = 0.1, py::arg("eta") = 1.0,
        "Rows (z, R, fourfold probability).");

    m.def(
        "monte_carlo_counts",
        [](const std::map<std::string, double>& probabilities, std::int64_t total_events, std::uint64_t seed) {
            std::map<std::string, std::int64_t> out;
            for (const auto& r : monte_carlo_counts(probabilities, total_events, seed)) out[r.label] = r.simulated_counts;
            return out;
        },
        py::arg("probabilities"), py::arg("total_events"), py::arg("seed"));

    m.def(
        "load_config", [](const std::string& path) { return config_to_json(load_config(path)).dump(); },
        py::arg("path"), "Validated config with defaults filled in, as a JSON string.");
}
