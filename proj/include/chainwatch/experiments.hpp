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

#include <cstdint>
#include <vector>

#include "chainwatch/chain.hpp"

// Worked experiments on qubit chains: the Zeno staircase of small equal
// rotations, its Monte Carlo anti-Zeno counterpart at random angles, and
// the detector-entropy sweep over preparations.
namespace chainwatch::experiments {

/// Qubit preparation (sqrt(p), sqrt(1-p)).
chain::Preparation qubit_preparation(double p);

/// Real rotation by theta as a basis change between consecutive bases.
chain::BasisChange qubit_rotation(double theta);

/// Chain of `n` equal qubit rotations starting from probability p.
chain::MeasurementChain qubit_chain(double p, const std::vector<double>& angles);

struct ZenoConfig {
  std::size_t n = 1;  // step count >= 1
  double p = 1.0;     // initial probability of |0>, in [0,1]

  void validate() const;
};

/// q^(n) = 1/2 + (p - 1/2) cos^n(pi / 2n).
double zeno_closed_form(const ZenoConfig& cfg);

struct ZenoRun {
  std::vector<chain::Distribution> marginals;  // per detector 0..n
  std::vector<double> entropies;               // bits, per detector 0..n
  double q_simulated = 0.0;                    // final marginal of |0>
  double q_closed_form = 0.0;
};

/// Runs the n-step chain of rotations by pi/4n each and attaches the
/// entropy trajectory.
ZenoRun zeno_simulate(const ZenoConfig& cfg);

struct AntiZenoTrial {
  double cos_product = 0.0;  // prod_k cos(2 theta_k)
  double q_formula = 0.0;    // 1/2 + (p - 1/2) * cos_product
  double q_chain = 0.0;      // final marginal of the simulated chain
};

/// Evaluates one angle sequence along both paths (closed form and chain
/// simulation); the two q values agree to rounding by construction of
/// the rotation chain.
AntiZenoTrial anti_zeno_trial_with_angles(double p,
                                          const std::vector<double>& angles);

/// Draws n angles uniform on [0, pi/4] from `rng` and evaluates them.
AntiZenoTrial anti_zeno_trial(std::size_t n, double p,
                              numerics::SplitMix64& rng);

struct AntiZenoConfig {
  std::size_t n = 1;        // steps per trial
  double p = 1.0;           // initial probability
  std::size_t trials = 1;   // Monte Carlo count >= 1
  std::uint64_t seed = 0;   // substreams are split per trial
  unsigned threads = 1;     // deterministic for a fixed thread count

  void validate() const;
};

struct AntiZenoEstimate {
  std::size_t n = 0;
  std::size_t trials = 0;
  std::uint64_t seed = 0;
  double sample_mean = 0.0;  // of prod cos(2 theta_k)
  double std_error = 0.0;
  double theory = 0.0;       // (2/pi)^n
  double sigmas = 0.0;       // |mean - theory| / std_error
};

/// Monte Carlo estimate of E[prod cos(2 theta_k)] against (2/pi)^n.
/// Trial t always uses substream t of the seed, so results do not depend
/// on scheduling; aggregation uses compensated summation.
AntiZenoEstimate anti_zeno_expectation(const AntiZenoConfig& cfg);

struct SweepConfig {
  double theta = 0.0;     // relative rotation per step, radians
  std::size_t steps = 1;  // number of detectors after the preparer
  std::size_t grid = 2;   // p samples in [0,1], >= 2

  void validate() const;
};

struct SweepTable {
  std::vector<double> p_grid;
  std::vector<std::vector<double>> entropies;  // per row: H(X0..X_steps)
};

/// Detector entropies H(X0), H(X1), ... for each p on the grid.
SweepTable figure_sweep(const SweepConfig& cfg);

}  // namespace chainwatch::experiments
