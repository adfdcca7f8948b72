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

#include "chainwatch/report.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <sstream>

#include <json.hpp>

namespace chainwatch::report {

using ordered_json = nlohmann::ordered_json;

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string utc_timestamp() {
  const auto now = std::chrono::system_clock::now();
  const std::time_t t = std::chrono::system_clock::to_time_t(now);
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

namespace {

struct DiffTracker {
  double max_abs_diff = 0.0;
  std::optional<WorstOffender> worst;

  void observe(const std::string& quantity, std::size_t j, std::size_t k,
               double diff) {
    if (diff >= max_abs_diff) {
      max_abs_diff = diff;
      worst = WorstOffender{quantity, j, k, diff};
    }
  }
};

PairedValue paired(double closed_form, double oracle) {
  return PairedValue{closed_form, oracle, std::abs(closed_form - oracle)};
}

}  // namespace

RunReport run_chain_report(const chain::MeasurementChain& chn,
                           const RunOptions& options) {
  options.tolerances.validate();
  const std::size_t m = chn.step_count();

  RunReport rep;
  rep.dimension = chn.dimension();
  rep.steps = m;
  rep.tolerances = options.tolerances;
  rep.seed = options.seed;
  if (!options.reproducible) rep.timestamp = utc_timestamp();

  const auto marginals = chain::marginal_trajectory(chn);
  std::vector<double> closed_entropies(m + 1);
  for (std::size_t k = 0; k <= m; ++k) {
    closed_entropies[k] = chain::shannon_entropy(marginals[k]);
  }

  DiffTracker tracker;

  std::optional<qstate::SparsePureState> state;
  if (options.oracle || options.venn) {
    state = qstate::build_joint_state(chn, options.dimension_cap);
  }

  std::vector<double> oracle_entropies;
  if (options.oracle) {
    oracle_entropies.resize(m + 1);
    for (std::size_t k = 0; k <= m; ++k) {
      oracle_entropies[k] = qstate::subsystem_entropy(
          *state, {qstate::detector_label(k)}, options.tolerances);
    }
  }

  for (std::size_t k = 0; k <= m; ++k) {
    DetectorReport det;
    det.k = k;
    det.marginal = marginals[k].probabilities;
    det.entropy_closed_form = closed_entropies[k];
    if (options.oracle) {
      det.entropy_oracle = oracle_entropies[k];
      det.abs_diff = std::abs(closed_entropies[k] - oracle_entropies[k]);
      tracker.observe("detector_entropy", k, k, *det.abs_diff);
    }
    rep.detectors.push_back(std::move(det));
  }

  if (options.oracle) {
    // entropies of pair subsets, then the paired identities
    for (std::size_t k = 0; k < m; ++k) {
      for (std::size_t j = k + 1; j <= m; ++j) {
        const double joint = qstate::subsystem_entropy(
            *state, {qstate::detector_label(k), qstate::detector_label(j)},
            options.tolerances);
        PairReport pair;
        pair.j = j;
        pair.k = k;
        pair.conditional_entropy =
            paired(chain::conditional_entropy_closed_form(chn, j, k),
                   joint - oracle_entropies[k]);
        pair.reverse_conditional_entropy =
            paired(chain::conditional_entropy_closed_form(chn, k, j),
                   joint - oracle_entropies[j]);
        pair.mutual_information =
            paired(chain::mutual_information_closed_form(chn, j, k),
                   oracle_entropies[j] + oracle_entropies[k] - joint);
        tracker.observe("conditional_entropy", j, k,
                        pair.conditional_entropy.abs_diff);
        tracker.observe("reverse_conditional_entropy", k, j,
                        pair.reverse_conditional_entropy.abs_diff);
        tracker.observe("mutual_information", j, k,
                        pair.mutual_information.abs_diff);
        rep.pairs.push_back(std::move(pair));
      }
    }

    std::vector<std::string> all_detectors;
    for (std::size_t k = 0; k <= m; ++k) {
      all_detectors.push_back(qstate::detector_label(k));
    }
    JointReport joint;
    joint.last_detector_entropy = closed_entropies[m];
    joint.all_detectors_entropy_oracle =
        qstate::subsystem_entropy(*state, all_detectors, options.tolerances);
    joint.system_entropy_oracle = qstate::subsystem_entropy(
        *state, {qstate::kSystemLabel}, options.tolerances);
    joint.abs_diff_all_detectors =
        std::abs(joint.all_detectors_entropy_oracle - closed_entropies[m]);
    joint.abs_diff_system =
        std::abs(joint.system_entropy_oracle - closed_entropies[m]);
    tracker.observe("joint_entropy_all_detectors", m, 0,
                    joint.abs_diff_all_detectors);
    tracker.observe("system_entropy", m, 0, joint.abs_diff_system);
    rep.joint = joint;
  }

  if (options.venn) {
    std::vector<std::vector<std::string>> parties;
    parties.push_back({qstate::kSystemLabel});
    for (std::size_t k = 0; k <= m; ++k) {
      parties.push_back({qstate::detector_label(k)});
    }
    const auto venn = qstate::venn_report(*state, parties, options.tolerances);
    const std::size_t subsets = venn.region_values.size();
    for (std::size_t mask = 1; mask < subsets; ++mask) {
      VennRegion region;
      for (std::size_t b = 0; b < venn.party_count(); ++b) {
        if (mask & (std::size_t{1} << b)) {
          region.parties.push_back(venn.party_names[b]);
        }
      }
      region.subset_entropy = venn.subset_entropies[mask];
      region.region_value = venn.region_values[mask];
      rep.venn.push_back(std::move(region));
    }
    rep.venn_region_sum = venn.region_sum();
  }

  rep.max_abs_diff = tracker.max_abs_diff;
  rep.worst = tracker.worst;
  rep.within_tolerance =
      !options.oracle || tracker.max_abs_diff <= options.tolerances.entropy_tol;
  return rep;
}

std::string to_json(const RunReport& rep) {
  ordered_json root;
  ordered_json metadata;
  metadata["generator"] = "chainwatch";
  metadata["version"] = kVersion;
  if (rep.seed) {
    metadata["seed"] = *rep.seed;
  } else {
    metadata["seed"] = nullptr;
  }
  metadata["tolerances"] = {{"unitarity_tol", rep.tolerances.unitarity_tol},
                            {"psd_tol", rep.tolerances.psd_tol},
                            {"entropy_tol", rep.tolerances.entropy_tol}};
  if (rep.timestamp) metadata["timestamp"] = *rep.timestamp;
  root["metadata"] = metadata;

  root["chain"] = {{"dimension", rep.dimension}, {"steps", rep.steps}};

  ordered_json detectors = ordered_json::array();
  for (const auto& det : rep.detectors) {
    ordered_json d;
    d["k"] = det.k;
    d["marginal"] = det.marginal;
    d["entropy_closed_form"] = det.entropy_closed_form;
    if (det.entropy_oracle) {
      d["entropy_oracle"] = *det.entropy_oracle;
      d["abs_diff"] = *det.abs_diff;
    }
    detectors.push_back(std::move(d));
  }
  root["detectors"] = detectors;

  if (rep.joint) {
    root["joint"] = {
        {"last_detector_entropy", rep.joint->last_detector_entropy},
        {"all_detectors_entropy_oracle",
         rep.joint->all_detectors_entropy_oracle},
        {"system_entropy_oracle", rep.joint->system_entropy_oracle},
        {"abs_diff_all_detectors", rep.joint->abs_diff_all_detectors},
        {"abs_diff_system", rep.joint->abs_diff_system}};
  }

  if (!rep.pairs.empty()) {
    ordered_json pairs = ordered_json::array();
    for (const auto& pair : rep.pairs) {
      auto paired_json = [](const PairedValue& v) {
        return ordered_json{{"closed_form", v.closed_form},
                            {"oracle", v.oracle},
                            {"abs_diff", v.abs_diff}};
      };
      ordered_json p;
      p["j"] = pair.j;
      p["k"] = pair.k;
      p["conditional_entropy"] = paired_json(pair.conditional_entropy);
      p["reverse_conditional_entropy"] =
          paired_json(pair.reverse_conditional_entropy);
      p["mutual_information"] = paired_json(pair.mutual_information);
      pairs.push_back(std::move(p));
    }
    root["pairs"] = pairs;
  }

  if (!rep.venn.empty()) {
    ordered_json venn;
    ordered_json regions = ordered_json::array();
    for (const auto& region : rep.venn) {
      regions.push_back({{"parties", region.parties},
                         {"subset_entropy", region.subset_entropy},
                         {"region_value", region.region_value}});
    }
    venn["regions"] = regions;
    venn["region_sum"] = rep.venn_region_sum;
    root["venn"] = venn;
  }

  ordered_json summary;
  summary["max_abs_diff"] = rep.max_abs_diff;
  summary["within_tolerance"] = rep.within_tolerance;
  if (rep.worst) {
    summary["worst"] = {{"quantity", rep.worst->quantity},
                        {"j", rep.worst->j},
                        {"k", rep.worst->k},
                        {"abs_diff", rep.worst->abs_diff}};
  }
  root["summary"] = summary;

  return root.dump(2) + "\n";
}

std::string to_csv(const RunReport& rep) {
  std::ostringstream out;
  const bool oracle = !rep.detectors.empty() &&
                      rep.detectors.front().entropy_oracle.has_value();
  out << "k,entropy_closed_form";
  if (oracle) out << ",entropy_oracle,abs_diff";
  for (std::size_t i = 0; i < rep.dimension; ++i) out << ",p" << i;
  out << "\n";
  for (const auto& det : rep.detectors) {
    out << det.k << "," << format_double(det.entropy_closed_form);
    if (oracle) {
      out << "," << format_double(*det.entropy_oracle) << ","
          << format_double(*det.abs_diff);
    }
    for (double p : det.marginal) out << "," << format_double(p);
    out << "\n";
  }
  return out.str();
}

}  // namespace chainwatch::report
