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

#include <algorithm>
#include <cmath>
#include <numbers>

#include <doctest.h>
#include <json.hpp>

#include "chainwatch/experiments.hpp"
#include "chainwatch/report.hpp"

using namespace chainwatch;
using experiments::qubit_chain;

namespace {

constexpr double kPi = std::numbers::pi;

chain::MeasurementChain deterministic_random_chain(std::size_t n,
                                                   std::size_t m,
                                                   std::uint64_t seed) {
  numerics::SplitMix64 rng(seed);
  std::vector<numerics::Complex> alpha(n, numerics::Complex{});
  alpha[0] = 1.0;
  std::vector<chain::BasisChange> steps;
  for (std::size_t t = 0; t < m; ++t) {
    steps.emplace_back(numerics::random_unitary(n, rng));
  }
  return {chain::Preparation(std::move(alpha)), std::move(steps)};
}

}  // namespace

TEST_SUITE("report") {

TEST_CASE("oracle agrees with closed forms on a preparation-anchored chain") {
  const auto chn = deterministic_random_chain(3, 2, 12345);
  report::RunOptions options;
  options.reproducible = true;
  const auto rep = report::run_chain_report(chn, options);

  CHECK(rep.within_tolerance);
  CHECK(rep.max_abs_diff <= 1e-9);
  REQUIRE(rep.detectors.size() == 3);
  REQUIRE(rep.pairs.size() == 3);
  for (const auto& pair : rep.pairs) {
    CHECK(pair.conditional_entropy.abs_diff <= 1e-9);
    CHECK(pair.reverse_conditional_entropy.abs_diff <= 1e-9);
    CHECK(pair.mutual_information.abs_diff <= 1e-9);
  }
  REQUIRE(rep.joint.has_value());
  CHECK(rep.joint->abs_diff_all_detectors <= 1e-9);
  CHECK(rep.joint->abs_diff_system <= 1e-9);
  CHECK(std::abs(rep.venn_region_sum) <= 1e-8);
}

TEST_CASE("entropic preparations surface pairwise deviations instead of "
          "hiding them") {
  const auto chn = qubit_chain(0.5, {kPi / 8.0, kPi / 8.0});
  report::RunOptions options;
  options.reproducible = true;
  const auto rep = report::run_chain_report(chn, options);

  CHECK_FALSE(rep.within_tolerance);
  REQUIRE(rep.worst.has_value());
  // the (X2 | X1) record pair carries Hb(sin^2 pi/8) of extra entropy
  CHECK(rep.max_abs_diff ==
        doctest::Approx(0.60087603669285616).epsilon(1e-9));

  // detector marginals themselves still agree
  for (const auto& det : rep.detectors) {
    CHECK(*det.abs_diff <= 1e-9);
  }
}

TEST_CASE("JSON round-trips bit-exactly under --reproducible") {
  const auto chn = qubit_chain(0.3, {kPi / 8.0});
  report::RunOptions options;
  options.reproducible = true;
  const auto rep = report::run_chain_report(chn, options);

  const std::string once = report::to_json(rep);
  const std::string twice =
      report::to_json(report::run_chain_report(chn, options));
  CHECK(once == twice);

  // parse and re-serialize: numeric values survive exactly
  const auto parsed = nlohmann::ordered_json::parse(once);
  CHECK(parsed.dump(2) + "\n" == once);
  CHECK(parsed["detectors"][1]["entropy_closed_form"].get<double>() ==
        rep.detectors[1].entropy_closed_form);
  CHECK(parsed["metadata"].contains("timestamp") == false);
}

TEST_CASE("CSV carries one row per detector") {
  const auto chn = qubit_chain(0.0, {kPi / 8.0, kPi / 8.0});
  report::RunOptions options;
  options.reproducible = true;
  options.venn = false;
  const auto rep = report::run_chain_report(chn, options);
  const std::string csv = report::to_csv(rep);

  CHECK(csv.rfind("k,entropy_closed_form,entropy_oracle,abs_diff,p0,p1\n", 0) ==
        0);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 4);  // header + 3 rows
}

TEST_CASE("oracle can be disabled") {
  const auto chn = qubit_chain(0.5, {kPi / 8.0, kPi / 8.0});
  report::RunOptions options;
  options.oracle = false;
  options.venn = false;
  options.reproducible = true;
  const auto rep = report::run_chain_report(chn, options);
  CHECK(rep.within_tolerance);  // nothing compared
  CHECK(rep.pairs.empty());
  CHECK_FALSE(rep.joint.has_value());
  CHECK_FALSE(rep.detectors[0].entropy_oracle.has_value());
  const std::string csv = report::to_csv(rep);
  CHECK(csv.rfind("k,entropy_closed_form,p0,p1\n", 0) == 0);
}

TEST_CASE("formatting uses 17 significant digits") {
  CHECK(report::format_double(0.1) == "0.10000000000000001");
  CHECK(report::format_double(1.0) == "1");
  const double value = 0.60087603669285616;
  CHECK(std::stod(report::format_double(value)) == value);
}

}  // TEST_SUITE
