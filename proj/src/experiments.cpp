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

#include "chainwatch/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <thread>

namespace chainwatch::experiments {

using numerics::Complex;
using numerics::ComplexMatrix;

chain::Preparation qubit_preparation(double p) {
  if (p < 0.0 || p > 1.0) throw Error("qubit_preparation: p must be in [0,1]");
  return chain::Preparation({Complex(std::sqrt(p), 0.0),
                             Complex(std::sqrt(1.0 - p), 0.0)});
}

chain::BasisChange qubit_rotation(double theta) {
  const double c = std::cos(theta);
  const double s = std::sin(theta);
  return chain::BasisChange(ComplexMatrix(2, 2, {c, -s, s, c}));
}

chain::MeasurementChain qubit_chain(double p,
                                    const std::vector<double>& angles) {
  std::vector<chain::BasisChange> steps;
  steps.reserve(angles.size());
  for (double theta : angles) steps.push_back(qubit_rotation(theta));
  return chain::MeasurementChain(qubit_preparation(p), std::move(steps));
}

void ZenoConfig::validate() const {
  if (n < 1) throw Error("ZenoConfig: n must be >= 1");
  if (p < 0.0 || p > 1.0) throw Error("ZenoConfig: p must be in [0,1]");
}

double zeno_closed_form(const ZenoConfig& cfg) {
  cfg.validate();
  const double per_step = std::numbers::pi / (2.0 * static_cast<double>(cfg.n));
  return 0.5 + (cfg.p - 0.5) *
                   std::pow(std::cos(per_step), static_cast<double>(cfg.n));
}

ZenoRun zeno_simulate(const ZenoConfig& cfg) {
  cfg.validate();
  const double theta = std::numbers::pi / (4.0 * static_cast<double>(cfg.n));
  const auto chain =
      qubit_chain(cfg.p, std::vector<double>(cfg.n, theta));

  ZenoRun run;
  run.marginals = chain::marginal_trajectory(chain);
  run.entropies.reserve(run.marginals.size());
  for (const auto& marginal : run.marginals) {
    run.entropies.push_back(chain::shannon_entropy(marginal));
  }
  run.q_simulated = run.marginals.back()[0];
  run.q_closed_form = zeno_closed_form(cfg);
  return run;
}

AntiZenoTrial anti_zeno_trial_with_angles(double p,
                                          const std::vector<double>& angles) {
  if (p < 0.0 || p > 1.0) throw Error("anti_zeno_trial: p must be in [0,1]");
  double product = 1.0;
  for (double theta : angles) product *= std::cos(2.0 * theta);

  AntiZenoTrial trial;
  trial.cos_product = product;
  trial.q_formula = 0.5 + (p - 0.5) * product;
  const auto chain = qubit_chain(p, angles);
  trial.q_chain = chain::marginal_trajectory(chain).back()[0];
  return trial;
}

AntiZenoTrial anti_zeno_trial(std::size_t n, double p,
                              numerics::SplitMix64& rng) {
  std::vector<double> angles(n);
  for (double& theta : angles) {
    theta = rng.next_double() * std::numbers::pi / 4.0;
  }
  return anti_zeno_trial_with_angles(p, angles);
}

void AntiZenoConfig::validate() const {
  if (n < 1) throw Error("AntiZenoConfig: n must be >= 1");
  if (p < 0.0 || p > 1.0) throw Error("AntiZenoConfig: p must be in [0,1]");
  if (trials < 1) throw Error("AntiZenoConfig: trials must be >= 1");
  if (threads < 1) throw Error("AntiZenoConfig: threads must be >= 1");
}

namespace {

struct Accumulator {
  double sum = 0.0;
  double sum_c = 0.0;  // Kahan compensation
  double sum_sq = 0.0;
  double sum_sq_c = 0.0;

  void add(double value) {
    add_to(sum, sum_c, value);
    add_to(sum_sq, sum_sq_c, value * value);
  }

  void merge(const Accumulator& other) {
    add_to(sum, sum_c, other.sum);
    add_to(sum_sq, sum_sq_c, other.sum_sq);
  }

 private:
  static void add_to(double& total, double& comp, double value) {
    const double y = value - comp;
    const double t = total + y;
    comp = (t - total) - y;
    total = t;
  }
};

// The cos product alone; drawing angles must match anti_zeno_trial's stream.
double trial_product(std::size_t n, numerics::SplitMix64 rng) {
  double product = 1.0;
  for (std::size_t k = 0; k < n; ++k) {
    product *= std::cos(2.0 * (rng.next_double() * std::numbers::pi / 4.0));
  }
  return product;
}

}  // namespace

AntiZenoEstimate anti_zeno_expectation(const AntiZenoConfig& cfg) {
  cfg.validate();
  const numerics::SplitMix64 root(cfg.seed);

  const unsigned thread_count =
      static_cast<unsigned>(std::min<std::size_t>(cfg.threads, cfg.trials));
  std::vector<Accumulator> partial(thread_count);
  if (thread_count == 1) {
    for (std::size_t t = 0; t < cfg.trials; ++t) {
      partial[0].add(trial_product(cfg.n, root.split(t)));
    }
  } else {
    std::vector<std::thread> workers;
    const std::size_t block = (cfg.trials + thread_count - 1) / thread_count;
    for (unsigned w = 0; w < thread_count; ++w) {
      workers.emplace_back([&, w] {
        const std::size_t begin = w * block;
        const std::size_t end = std::min(cfg.trials, begin + block);
        for (std::size_t t = begin; t < end; ++t) {
          partial[w].add(trial_product(cfg.n, root.split(t)));
        }
      });
    }
    for (auto& worker : workers) worker.join();
  }

  Accumulator total;
  for (const auto& acc : partial) total.merge(acc);

  AntiZenoEstimate est;
  est.n = cfg.n;
  est.trials = cfg.trials;
  est.seed = cfg.seed;
  const double count = static_cast<double>(cfg.trials);
  est.sample_mean = total.sum / count;
  if (cfg.trials > 1) {
    const double variance =
        std::max(0.0, (total.sum_sq - count * est.sample_mean *
                                          est.sample_mean) /
                          (count - 1.0));
    est.std_error = std::sqrt(variance / count);
  }
  est.theory = std::pow(2.0 / std::numbers::pi, static_cast<double>(cfg.n));
  const double diff = std::abs(est.sample_mean - est.theory);
  est.sigmas = est.std_error > 0.0
                   ? diff / est.std_error
                   : (diff == 0.0 ? 0.0
                                  : std::numeric_limits<double>::infinity());
  return est;
}

void SweepConfig::validate() const {
  if (steps < 1) throw Error("SweepConfig: steps must be >= 1");
  if (grid < 2) throw Error("SweepConfig: grid must be >= 2");
}

SweepTable figure_sweep(const SweepConfig& cfg) {
  cfg.validate();
  SweepTable table;
  table.p_grid.reserve(cfg.grid);
  table.entropies.reserve(cfg.grid);
  const std::vector<double> angles(cfg.steps, cfg.theta);
  for (std::size_t g = 0; g < cfg.grid; ++g) {
    const double p =
        static_cast<double>(g) / static_cast<double>(cfg.grid - 1);
    table.p_grid.push_back(p);
    const auto chain = qubit_chain(p, angles);
    std::vector<double> row;
    row.reserve(cfg.steps + 1);
    for (const auto& marginal : chain::marginal_trajectory(chain)) {
      row.push_back(chain::shannon_entropy(marginal));
    }
    table.entropies.push_back(std::move(row));
  }
  return table;
}

}  // namespace chainwatch::experiments
