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

#pragma once

#include <optional>
#include <string>
#include <vector>

#include "chainwatch/chain.hpp"
#include "chainwatch/qstate.hpp"

// Self-validating run reports: every closed-form quantity is paired with
// its quantum-engine value and the absolute difference, so a report can
// be judged without re-running anything.
namespace chainwatch::report {

inline constexpr const char* kVersion = "0.1.0";

struct PairedValue {
  double closed_form = 0.0;
  double oracle = 0.0;
  double abs_diff = 0.0;
};

struct DetectorReport {
  std::size_t k = 0;
  std::vector<double> marginal;
  double entropy_closed_form = 0.0;
  std::optional<double> entropy_oracle;
  std::optional<double> abs_diff;
};

struct PairReport {
  std::size_t j = 0;  // later detector
  std::size_t k = 0;  // earlier detector
  PairedValue conditional_entropy;          // S(X_j | X_k), closed form H_j - H_k
  PairedValue reverse_conditional_entropy;  // S(X_k | X_j), closed form 0
  PairedValue mutual_information;           // I(X_j : X_k), closed form H_k
};

struct JointReport {
  double last_detector_entropy = 0.0;       // closed form H(X_m)
  double all_detectors_entropy_oracle = 0.0;  // S(X_0..X_m)
  double system_entropy_oracle = 0.0;         // S(Q)
  double abs_diff_all_detectors = 0.0;
  double abs_diff_system = 0.0;
};

struct VennRegion {
  std::vector<std::string> parties;
  double subset_entropy = 0.0;
  double region_value = 0.0;
};

struct WorstOffender {
  std::string quantity;
  std::size_t j = 0;
  std::size_t k = 0;
  double abs_diff = 0.0;
};

struct RunReport {
  std::size_t dimension = 0;
  std::size_t steps = 0;
  numerics::Tolerances tolerances;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> timestamp;  // absent under --reproducible

  std::vector<DetectorReport> detectors;
  std::vector<PairReport> pairs;          // only when the oracle ran
  std::optional<JointReport> joint;       // only when the oracle ran
  std::vector<VennRegion> venn;           // only when requested
  double venn_region_sum = 0.0;

  double max_abs_diff = 0.0;
  bool within_tolerance = true;
  std::optional<WorstOffender> worst;
};

struct RunOptions {
  bool oracle = true;
  bool venn = true;
  bool reproducible = false;
  std::size_t dimension_cap = qstate::kDefaultDimensionCap;
  numerics::Tolerances tolerances;
  std::optional<std::uint64_t> seed;
};

/// Runs both computation paths over `chain` and assembles the report.
RunReport run_chain_report(const chain::MeasurementChain& chain,
                           const RunOptions& options);

std::string to_json(const RunReport& report);
std::string to_csv(const RunReport& report);

/// Formats a double with 17 significant digits (round-trip exact).
std::string format_double(double v);

/// Current UTC time, ISO-8601.
std::string utc_timestamp();

}  // namespace chainwatch::report
