// Copyright 2026 The Chainwatch Authors
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

#include <optional>

#include "chainwatch/chain.hpp"
#include "chainwatch/experiments.hpp"
#include "chainwatch/qstate.hpp"
#include "chainwatch/report.hpp"

namespace py = pybind11;
namespace cw = chainwatch;

namespace {

using ComplexGrid = std::vector<std::vector<cw::numerics::Complex>>;

cw::numerics::ComplexMatrix to_matrix(const ComplexGrid& rows) {
  const std::size_t n = rows.size();
  std::vector<cw::numerics::Complex> entries;
  entries.reserve(n * n);
  for (const auto& row : rows) {
    if (row.size() != n) {
      throw cw::Error("matrix rows must all have length N");
    }
    entries.insert(entries.end(), row.begin(), row.end());
  }
  return cw::numerics::ComplexMatrix(n, n, std::move(entries));
}

ComplexGrid from_matrix(const cw::numerics::ComplexMatrix& m) {
  ComplexGrid rows(m.rows(), std::vector<cw::numerics::Complex>(m.cols()));
  for (std::size_t i = 0; i < m.rows(); ++i) {
    for (std::size_t j = 0; j < m.cols(); ++j) rows[i][j] = m(i, j);
  }
  return rows;
}

/// Measurement chain with a lazily built joint pure state.
class Chain {
 public:
  Chain(std::vector<cw::numerics::Complex> amplitudes,
        std::vector<ComplexGrid> unitaries) {
    std::vector<cw::chain::BasisChange> steps;
    steps.reserve(unitaries.size());
    for (const auto& u : unitaries) {
      steps.emplace_back(to_matrix(u));
    }
    chain_.emplace(cw::chain::Preparation(std::move(amplitudes)),
                   std::move(steps));
  }

  static Chain qubit(double p, const std::vector<double>& angles) {
    Chain out;
    out.chain_.emplace(cw::experiments::qubit_chain(p, angles));
    return out;
  }

  const cw::chain::MeasurementChain& chain() const { return *chain_; }

  std::size_t dimension() const { return chain_->dimension(); }
  std::size_t steps() const { return chain_->step_count(); }

  std::vector<double> marginal(std::size_t k) const {
    return cw::chain::marginal_after(*chain_, k).probabilities;
  }
  std::vector<std::vector<double>> marginals() const {
    std::vector<std::vector<double>> out;
    for (const auto& d : cw::chain::marginal_trajectory(*chain_)) {
      out.push_back(d.probabilities);
    }
    return out;
  }
  double detector_entropy(std::size_t k) const {
    return cw::chain::detector_entropy(*chain_, k);
  }
  std::vector<double> detector_entropies() const {
    std::vector<double> out;
    for (const auto& d : cw::chain::marginal_trajectory(*chain_)) {
      out.push_back(cw::chain::shannon_entropy(d));
    }
    return out;
  }
  double joint_entropy_closed_form(const std::vector<std::size_t>& s) const {
    return cw::chain::joint_entropy_closed_form(*chain_, s);
  }
  double conditional_entropy_closed_form(std::size_t j, std::size_t k) const {
    return cw::chain::conditional_entropy_closed_form(*chain_, j, k);
  }
  double mutual_information_closed_form(std::size_t n, std::size_t k) const {
    return cw::chain::mutual_information_closed_form(*chain_, n, k);
  }
  double outcome_probability(const std::vector<std::size_t>& outcomes) const {
    return cw::chain::outcome_chain_probability(*chain_, outcomes);
  }

  std::vector<std::vector<double>> transition(std::size_t step) const {
    if (step >= chain_->step_count()) {
      throw cw::IndexOutOfRangeError("transition: no such step");
    }
    const auto t = cw::chain::transition_of(chain_->steps()[step]);
    std::vector<std::vector<double>> rows(t.n, std::vector<double>(t.n));
    for (std::size_t i = 0; i < t.n; ++i) {
      for (std::size_t j = 0; j < t.n; ++j) rows[i][j] = t(i, j);
    }
    return rows;
  }

  std::vector<std::string> labels() const {
    std::vector<std::string> out{cw::qstate::kSystemLabel};
    for (std::size_t k = 0; k <= chain_->step_count(); ++k) {
      out.push_back(cw::qstate::detector_label(k));
    }
    return out;
  }

  double subsystem_entropy(const std::vector<std::string>& subset,
                           std::size_t cap) {
    return cw::qstate::subsystem_entropy(state(cap), subset);
  }

  ComplexGrid density_matrix(const std::vector<std::string>& keep,
                             std::size_t cap) {
    return from_matrix(cw::qstate::partial_trace(state(cap), keep).matrix);
  }

  py::dict venn(const std::vector<std::vector<std::string>>& parties,
                std::size_t cap) {
    const auto rep = cw::qstate::venn_report(state(cap), parties);
    py::dict out;
    py::list regions;
    for (std::size_t mask = 1; mask < rep.region_values.size(); ++mask) {
      py::list names;
      for (std::size_t b = 0; b < rep.party_count(); ++b) {
        if (mask & (std::size_t{1} << b)) names.append(rep.party_names[b]);
      }
      py::dict region;
      region["parties"] = names;
      region["subset_entropy"] = rep.subset_entropies[mask];
      region["region_value"] = rep.region_values[mask];
      regions.append(region);
    }
    out["parties"] = rep.party_names;
    out["regions"] = regions;
    out["region_sum"] = rep.region_sum();
    return out;
  }

  py::dict state_amplitudes(std::size_t cap) {
    py::dict out;
    for (const auto& [tuple, amp] : state(cap).amplitudes()) {
      py::tuple key(tuple.size());
      for (std::size_t i = 0; i < tuple.size(); ++i) key[i] = tuple[i];
      out[key] = amp;
    }
    return out;
  }

  std::string run_report_json(bool oracle, bool venn_regions,
                              bool reproducible, std::size_t cap) const {
    cw::report::RunOptions options;
    options.oracle = oracle;
    options.venn = venn_regions;
    options.reproducible = reproducible;
    options.dimension_cap = cap;
    return cw::report::to_json(cw::report::run_chain_report(*chain_, options));
  }

 private:
  Chain() = default;

  const cw::qstate::SparsePureState& state(std::size_t cap) {
    if (!state_ || state_cap_ != cap) {
      state_ = cw::qstate::build_joint_state(*chain_, cap);
      state_cap_ = cap;
    }
    return *state_;
  }

  std::optional<cw::chain::MeasurementChain> chain_;
  std::optional<cw::qstate::SparsePureState> state_;
  std::size_t state_cap_ = 0;
};

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Consecutive projective measurement chains: classical Markov "
            "closed forms cross-checked against an exact pure-state engine";
  m.attr("__version__") = cw::report::kVersion;
  m.attr("DEFAULT_DIMENSION_CAP") = cw::qstate::kDefaultDimensionCap;

  // translators run newest-first: register the base before the deriveds
  py::register_exception<cw::Error>(m, "ChainwatchError", PyExc_RuntimeError);
  py::register_exception<cw::IndexOutOfRangeError>(m, "IndexOutOfRangeError",
                                                   PyExc_IndexError);
  py::register_exception<cw::UnknownLabelError>(m, "UnknownLabelError",
                                                PyExc_KeyError);

  m.def("shannon_entropy",
        [](const std::vector<double>& p) {
          return cw::chain::shannon_entropy(cw::chain::Distribution(p));
        },
        py::arg("probabilities"),
        "Shannon entropy in bits, with 0 log 0 = 0");

  m.def("check_unitary",
        [](const ComplexGrid& u) {
          const auto check = cw::numerics::check_unitary(to_matrix(u));
          return py::make_tuple(check.ok, check.max_deviation);
        },
        py::arg("matrix"), "Returns (ok, max_deviation)");

  m.def("hermitian_eigenvalues",
        [](const ComplexGrid& mat) {
          return cw::numerics::hermitian_eigenvalues(to_matrix(mat));
        },
        py::arg("matrix"), "Eigenvalues of a Hermitian matrix, descending");

  m.def("random_unitary",
        [](std::size_t n, std::uint64_t seed) {
          cw::numerics::SplitMix64 rng(seed);
          return from_matrix(cw::numerics::random_unitary(n, rng));
        },
        py::arg("n"), py::arg("seed"),
        "Seeded Haar-style random unitary as nested lists");

  m.def("von_neumann_unitary",
        [](std::size_t n) { return from_matrix(cw::qstate::von_neumann_unitary(n)); },
        py::arg("n"), "The n^2 x n^2 measurement unitary");

  py::class_<Chain>(m, "Chain")
      .def(py::init<std::vector<cw::numerics::Complex>,
                    std::vector<ComplexGrid>>(),
           py::arg("amplitudes"), py::arg("unitaries") = std::vector<ComplexGrid>{})
      .def_static("qubit", &Chain::qubit, py::arg("p"),
                  py::arg("angles") = std::vector<double>{},
                  "Qubit chain from p and per-step rotation angles")
      .def_property_readonly("dimension", &Chain::dimension)
      .def_property_readonly("steps", &Chain::steps)
      .def("marginal", &Chain::marginal, py::arg("k"))
      .def("marginals", &Chain::marginals)
      .def("detector_entropy", &Chain::detector_entropy, py::arg("k"))
      .def("detector_entropies", &Chain::detector_entropies)
      .def("transition", &Chain::transition, py::arg("step"))
      .def("joint_entropy_closed_form", &Chain::joint_entropy_closed_form,
           py::arg("subset"))
      .def("conditional_entropy_closed_form",
           &Chain::conditional_entropy_closed_form, py::arg("j"), py::arg("k"))
      .def("mutual_information_closed_form",
           &Chain::mutual_information_closed_form, py::arg("n"), py::arg("k"))
      .def("outcome_probability", &Chain::outcome_probability,
           py::arg("outcomes"))
      .def("labels", &Chain::labels)
      .def("subsystem_entropy", &Chain::subsystem_entropy, py::arg("subset"),
           py::arg("dimension_cap") = cw::qstate::kDefaultDimensionCap)
      .def("density_matrix", &Chain::density_matrix, py::arg("keep"),
           py::arg("dimension_cap") = cw::qstate::kDefaultDimensionCap)
      .def("venn", &Chain::venn, py::arg("parties"),
           py::arg("dimension_cap") = cw::qstate::kDefaultDimensionCap)
      .def("state_amplitudes", &Chain::state_amplitudes,
           py::arg("dimension_cap") = cw::qstate::kDefaultDimensionCap)
      .def("run_report_json", &Chain::run_report_json, py::arg("oracle") = true,
           py::arg("venn") = true, py::arg("reproducible") = false,
           py::arg("dimension_cap") = cw::qstate::kDefaultDimensionCap);

  m.def("zeno_closed_form",
        [](std::size_t n, double p) {
          return cw::experiments::zeno_closed_form({n, p});
        },
        py::arg("n"), py::arg("p"));

  m.def("zeno_simulate",
        [](std::size_t n, double p) {
          const auto run = cw::experiments::zeno_simulate({n, p});
          py::dict out;
          std::vector<std::vector<double>> marginals;
          for (const auto& d : run.marginals) marginals.push_back(d.probabilities);
          out["marginals"] = marginals;
          out["entropies"] = run.entropies;
          out["q_simulated"] = run.q_simulated;
          out["q_closed_form"] = run.q_closed_form;
          return out;
        },
        py::arg("n"), py::arg("p"));

  m.def("anti_zeno_trial",
        [](double p, const std::vector<double>& angles) {
          const auto trial =
              cw::experiments::anti_zeno_trial_with_angles(p, angles);
          py::dict out;
          out["cos_product"] = trial.cos_product;
          out["q_formula"] = trial.q_formula;
          out["q_chain"] = trial.q_chain;
          return out;
        },
        py::arg("p"), py::arg("angles"),
        "Evaluate one explicit angle sequence along both paths");

  m.def("anti_zeno_expectation",
        [](std::size_t n, double p, std::size_t trials, std::uint64_t seed,
           unsigned threads) {
          cw::experiments::AntiZenoConfig cfg;
          cfg.n = n;
          cfg.p = p;
          cfg.trials = trials;
          cfg.seed = seed;
          cfg.threads = threads;
          const auto est = cw::experiments::anti_zeno_expectation(cfg);
          py::dict out;
          out["n"] = est.n;
          out["trials"] = est.trials;
          out["seed"] = est.seed;
          out["sample_mean"] = est.sample_mean;
          out["std_error"] = est.std_error;
          out["theory"] = est.theory;
          out["sigmas"] = est.sigmas;
          return out;
        },
        py::arg("n"), py::arg("p") = 1.0, py::arg("trials") = 100000,
        py::arg("seed") = 0, py::arg("threads") = 1);

  m.def("figure_sweep",
        [](double theta, std::size_t steps, std::size_t grid) {
          cw::experiments::SweepConfig cfg;
          cfg.theta = theta;
          cfg.steps = steps;
          cfg.grid = grid;
          const auto table = cw::experiments::figure_sweep(cfg);
          py::dict out;
          out["p"] = table.p_grid;
          out["entropies"] = table.entropies;
          return out;
        },
        py::arg("theta"), py::arg("steps") = 2, py::arg("grid") = 101);
}
