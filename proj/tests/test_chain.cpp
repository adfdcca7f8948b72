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

#include <cmath>
#include <numbers>

#include <doctest.h>

#include "chainwatch/chain.hpp"
#include "chainwatch/experiments.hpp"
#include "oracles.hpp"

using namespace chainwatch;
using numerics::Complex;
using numerics::ComplexMatrix;
using experiments::qubit_chain;

namespace {

constexpr double kPi = std::numbers::pi;

// frozen oracle values (binary entropies evaluated directly)
constexpr double kSinSqPi8 = 0.14644660940672624;      // sin^2(pi/8)
constexpr double kCosSqPi8 = 0.85355339059327373;      // cos^2(pi/8)
constexpr double kHbSinSqPi8 = 0.60087603669285616;    // Hb(sin^2(pi/8))
constexpr double kHbQuarter = 0.81127812445913283;     // Hb(1/4)

chain::MeasurementChain random_chain(std::size_t n, std::size_t m,
                                     numerics::SplitMix64& rng) {
  std::vector<Complex> alpha(n);
  double norm = 0.0;
  for (auto& a : alpha) {
    a = {rng.next_gaussian(), rng.next_gaussian()};
    norm += std::norm(a);
  }
  for (auto& a : alpha) a /= std::sqrt(norm);
  std::vector<chain::BasisChange> steps;
  for (std::size_t t = 0; t < m; ++t) {
    steps.emplace_back(numerics::random_unitary(n, rng));
  }
  return {chain::Preparation(std::move(alpha)), std::move(steps)};
}

}  // namespace

TEST_SUITE("chain") {

TEST_CASE("transition matrices are |U|^2 and doubly stochastic") {
  const auto identity = chain::BasisChange(ComplexMatrix::identity(3));
  const auto t_id = chain::transition_of(identity);
  for (std::size_t i = 0; i < 3; ++i) {
    for (std::size_t j = 0; j < 3; ++j) {
      CHECK(t_id(i, j) == (i == j ? 1.0 : 0.0));
    }
  }

  const auto rot = experiments::qubit_rotation(kPi / 8.0);
  const auto t = chain::transition_of(rot);
  CHECK(t(0, 0) == doctest::Approx(kCosSqPi8).epsilon(1e-12));
  CHECK(t(0, 1) == doctest::Approx(kSinSqPi8).epsilon(1e-12));
  CHECK(t(1, 0) == doctest::Approx(kSinSqPi8).epsilon(1e-12));
  CHECK(t(1, 1) == doctest::Approx(kCosSqPi8).epsilon(1e-12));

  numerics::SplitMix64 rng(11);
  for (std::size_t n : {2, 3, 4}) {
    const chain::BasisChange step(numerics::random_unitary(n, rng));
    const auto tr = chain::transition_of(step);
    for (std::size_t i = 0; i < n; ++i) {
      double row = 0.0, col = 0.0;
      for (std::size_t j = 0; j < n; ++j) {
        row += tr(i, j);
        col += tr(j, i);
        CHECK(tr(i, j) >= 0.0);
        CHECK(tr(i, j) <= 1.0);
      }
      CHECK(std::abs(row - 1.0) <= 1e-12);
      CHECK(std::abs(col - 1.0) <= 1e-12);
    }
  }
}

TEST_CASE("marginals compose the preparation through the transitions") {
  const chain::Preparation prep({std::sqrt(Complex(0.3)), std::sqrt(Complex(0.7))});
  const chain::MeasurementChain bare(prep, {});
  const auto p0 = chain::marginal_after(bare, 0);
  CHECK(p0[0] == doctest::Approx(0.3).epsilon(1e-12));
  CHECK(p0[1] == doctest::Approx(0.7).epsilon(1e-12));

  const auto one_step = qubit_chain(1.0, {kPi / 8.0});
  const auto p1 = chain::marginal_after(one_step, 1);
  CHECK(p1[0] == doctest::Approx(kCosSqPi8).epsilon(1e-12));
  CHECK(p1[1] == doctest::Approx(kSinSqPi8).epsilon(1e-12));

  // two pi/8 steps from p=0 land exactly on (1/4, 3/4)
  const auto two_steps = qubit_chain(0.0, {kPi / 8.0, kPi / 8.0});
  const auto p2 = chain::marginal_after(two_steps, 2);
  CHECK(p2[0] == doctest::Approx(0.25).epsilon(1e-14));
  CHECK(p2[1] == doctest::Approx(0.75).epsilon(1e-14));

  CHECK_THROWS_AS((void)chain::marginal_after(two_steps, 3),
                  IndexOutOfRangeError);
}

TEST_CASE("shannon entropy") {
  CHECK(chain::shannon_entropy(chain::Distribution({0.5, 0.5})) ==
        doctest::Approx(1.0).epsilon(1e-14));
  CHECK(chain::shannon_entropy(chain::Distribution({1.0, 0.0})) == 0.0);
  CHECK(chain::shannon_entropy(chain::Distribution({0.25, 0.75})) ==
        doctest::Approx(kHbQuarter).epsilon(1e-14));
}

TEST_CASE("detector entropies along the pi/8 chain") {
  const auto chn = qubit_chain(0.0, {kPi / 8.0, kPi / 8.0});
  CHECK(chain::detector_entropy(chn, 0) == 0.0);
  CHECK(chain::detector_entropy(chn, 1) ==
        doctest::Approx(kHbSinSqPi8).epsilon(1e-12));
  CHECK(chain::detector_entropy(chn, 2) ==
        doctest::Approx(kHbQuarter).epsilon(1e-12));

  const auto uniform = qubit_chain(0.5, {kPi / 8.0});
  CHECK(chain::detector_entropy(uniform, 0) == doctest::Approx(1.0));
  CHECK(chain::detector_entropy(uniform, 1) == doctest::Approx(1.0));
}

TEST_CASE("closed-form joint entropy picks the latest detector") {
  numerics::SplitMix64 rng(3);
  const auto chn = random_chain(3, 3, rng);
  const double h3 = chain::detector_entropy(chn, 3);
  const double h2 = chain::detector_entropy(chn, 2);
  CHECK(chain::joint_entropy_closed_form(chn, {0, 1, 2, 3}) == h3);
  CHECK(chain::joint_entropy_closed_form(chn, {2}) == h2);
  CHECK(chain::joint_entropy_closed_form(chn, {0, 2}) == h2);
  CHECK_THROWS_AS((void)chain::joint_entropy_closed_form(chn, {}),
                  EmptySubsetError);
}

TEST_CASE("closed-form conditional entropy") {
  // repeated measurement in the same basis is noiseless
  const auto repeated = qubit_chain(0.3, {0.0, 0.0});
  CHECK(chain::conditional_entropy_closed_form(repeated, 2, 1) ==
        doctest::Approx(0.0).epsilon(1e-12));

  const auto chn = qubit_chain(0.0, {kPi / 8.0, kPi / 8.0});
  CHECK(chain::conditional_entropy_closed_form(chn, 1, 2) == 0.0);
  CHECK(chain::conditional_entropy_closed_form(chn, 2, 1) ==
        doctest::Approx(kHbQuarter - kHbSinSqPi8).epsilon(1e-12));
  CHECK_THROWS_AS(
      (void)chain::conditional_entropy_closed_form(chn, 1, 1),
      SameIndexError);
}

TEST_CASE("closed-form mutual information") {
  const auto chn = qubit_chain(0.0, {kPi / 8.0, kPi / 8.0});
  CHECK(chain::mutual_information_closed_form(chn, 2, 0) ==
        chain::detector_entropy(chn, 0));
  CHECK(chain::mutual_information_closed_form(chn, 2, 1) ==
        doctest::Approx(kHbSinSqPi8).epsilon(1e-12));

  const auto deterministic = qubit_chain(1.0, {kPi / 8.0});
  CHECK(chain::mutual_information_closed_form(deterministic, 1, 0) == 0.0);

  CHECK_THROWS_AS((void)chain::mutual_information_closed_form(chn, 1, 1),
                  OrderViolationError);
  CHECK_THROWS_AS((void)chain::mutual_information_closed_form(chn, 0, 2),
                  OrderViolationError);
}

TEST_CASE("outcome chain probabilities") {
  const auto noiseless = qubit_chain(1.0, {0.0, 0.0});
  CHECK(chain::outcome_chain_probability(noiseless, {0, 0, 0}) ==
        doctest::Approx(1.0));
  CHECK(chain::outcome_chain_probability(noiseless, {0, 1, 0}) == 0.0);

  const auto chn = qubit_chain(0.5, {kPi / 8.0});
  CHECK(chain::outcome_chain_probability(chn, {0, 1}) ==
        doctest::Approx(0.073223304703363121).epsilon(1e-12));

  CHECK_THROWS_AS((void)chain::outcome_chain_probability(chn, {0}),
                  IndexOutOfRangeError);
  CHECK_THROWS_AS((void)chain::outcome_chain_probability(chn, {0, 2}),
                  IndexOutOfRangeError);
}

TEST_CASE("exhaustive outcome probabilities sum to one and to marginals") {
  numerics::SplitMix64 rng(17);
  for (const auto& [n, m] : {std::pair<std::size_t, std::size_t>{2, 4},
                             {3, 3}, {3, 4}}) {
    const auto chn = random_chain(n, m, rng);
    std::vector<std::size_t> tuple(m + 1, 0);
    std::vector<double> last_marginal(n, 0.0);
    double total = 0.0;
    bool done = false;
    while (!done) {
      const double p = chain::outcome_chain_probability(chn, tuple);
      total += p;
      last_marginal[tuple[m]] += p;
      done = true;
      for (std::size_t digit = m + 1; digit-- > 0;) {
        if (++tuple[digit] < n) {
          done = false;
          break;
        }
        tuple[digit] = 0;
      }
    }
    CHECK(std::abs(total - 1.0) <= 1e-9);
    const auto marginal = chain::marginal_after(chn, m);
    for (std::size_t i = 0; i < n; ++i) {
      CHECK(std::abs(last_marginal[i] - marginal[i]) <= 1e-9);
    }
  }
}

TEST_CASE("detector entropy never decreases along a chain") {
  numerics::SplitMix64 rng(23);
  for (int c = 0; c < 20; ++c) {
    const std::size_t n = 2 + (rng() % 3);
    const std::size_t m = 1 + (rng() % 5);
    const auto chn = random_chain(n, m, rng);
    const auto marginals = chain::marginal_trajectory(chn);
    for (std::size_t k = 0; k + 1 < marginals.size(); ++k) {
      CHECK(chain::shannon_entropy(marginals[k + 1]) >=
            chain::shannon_entropy(marginals[k]) - 1e-12);
    }
  }
}

TEST_CASE("repeated rotations drive the detector entropy to log2 N") {
  const auto chn = qubit_chain(0.0, std::vector<double>(50, kPi / 8.0));
  const auto marginals = chain::marginal_trajectory(chn);
  double previous = 0.0;
  for (const auto& marginal : marginals) {
    const double h = chain::shannon_entropy(marginal);
    CHECK(h >= previous - 1e-12);
    previous = h;
  }
  CHECK(std::abs(chain::shannon_entropy(marginals.back()) - 1.0) <= 0.05);
}

TEST_CASE("degenerate chain with no steps") {
  const chain::MeasurementChain chn(
      chain::Preparation({std::sqrt(Complex(0.3)), std::sqrt(Complex(0.7))}),
      {});
  CHECK(chn.step_count() == 0);
  CHECK(chain::detector_entropy(chn, 0) ==
        doctest::Approx(oracles::binary_entropy(0.3)).epsilon(1e-12));
  CHECK(chain::joint_entropy_closed_form(chn, {0}) ==
        chain::detector_entropy(chn, 0));
  CHECK(chain::outcome_chain_probability(chn, {1}) ==
        doctest::Approx(0.7).epsilon(1e-12));
}

TEST_CASE("invariant violations are rejected") {
  CHECK_THROWS_AS(chain::Preparation({Complex(1.0)}), Error);  // N < 2
  CHECK_THROWS_AS(chain::Preparation({Complex(1.0), Complex(1.0)}), Error);
  CHECK_THROWS_AS(
      chain::BasisChange(ComplexMatrix(2, 2, {0.9, 0.0, 0.0, 1.0})),
      ToleranceViolationError);
  CHECK_THROWS_AS(chain::Distribution({0.5, 0.6}), Error);
  CHECK_THROWS_AS(chain::Distribution({-0.1, 1.1}), Error);

  // mismatched step dimension
  CHECK_THROWS_AS(
      chain::MeasurementChain(
          chain::Preparation({Complex(1.0), Complex(0.0)}),
          {chain::BasisChange(ComplexMatrix::identity(3))}),
      Error);
}

}  // TEST_SUITE
