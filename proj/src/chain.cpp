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

#include "chainwatch/chain.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace chainwatch::chain {

Distribution::Distribution(std::vector<double> p, const Tolerances& tol)
    : probabilities(std::move(p)) {
  tol.validate();
  double sum = 0.0;
  for (double v : probabilities) {
    if (v < 0.0 || !std::isfinite(v)) {
      throw Error("Distribution: entries must be finite and >= 0");
    }
    sum += v;
  }
  if (std::abs(sum - 1.0) > tol.entropy_tol) {
    std::ostringstream msg;
    msg << "Distribution: probabilities sum to " << sum;
    throw Error(msg.str());
  }
}

Preparation::Preparation(std::vector<Complex> amplitudes, const Tolerances& tol)
    : amplitudes_(std::move(amplitudes)) {
  tol.validate();
  if (amplitudes_.size() < 2) {
    throw Error("Preparation: at least two basis states required");
  }
  double norm = 0.0;
  for (const Complex& a : amplitudes_) norm += std::norm(a);
  if (std::abs(norm - 1.0) > tol.entropy_tol) {
    std::ostringstream msg;
    msg << "Preparation: squared norm is " << norm << ", expected 1";
    throw Error(msg.str());
  }
}

Distribution Preparation::probabilities() const {
  std::vector<double> p(amplitudes_.size());
  for (std::size_t i = 0; i < p.size(); ++i) p[i] = std::norm(amplitudes_[i]);
  return Distribution(std::move(p));
}

BasisChange::BasisChange(ComplexMatrix u, const Tolerances& tol)
    : u_(std::move(u)) {
  if (!u_.square()) throw Error("BasisChange: matrix must be square");
  const auto check = numerics::check_unitary(u_, tol);
  if (!check.ok) {
    std::ostringstream msg;
    msg << "BasisChange: matrix is not unitary, max deviation "
        << check.max_deviation;
    throw ToleranceViolationError(msg.str(), check.max_deviation);
  }
}

MeasurementChain::MeasurementChain(Preparation preparation,
                                   std::vector<BasisChange> steps)
    : preparation_(std::move(preparation)), steps_(std::move(steps)) {
  for (const BasisChange& s : steps_) {
    if (s.dimension() != preparation_.dimension()) {
      throw Error("MeasurementChain: step dimension does not match preparation");
    }
  }
}

TransitionMatrix transition_of(const BasisChange& step) {
  const auto& u = step.matrix();
  const std::size_t n = u.rows();
  TransitionMatrix t{n, std::vector<double>(n * n)};
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      t.entries[i * n + j] = std::norm(u(i, j));
    }
  }
  return t;
}

namespace {

std::vector<double> apply_transition(const std::vector<double>& p,
                                     const TransitionMatrix& t) {
  std::vector<double> out(p.size(), 0.0);
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (p[i] == 0.0) continue;
    for (std::size_t j = 0; j < p.size(); ++j) {
      out[j] += p[i] * t(i, j);
    }
  }
  return out;
}

}  // namespace

Distribution marginal_after(const MeasurementChain& chain, std::size_t k) {
  if (k > chain.step_count()) {
    std::ostringstream msg;
    msg << "marginal_after: index " << k << " exceeds step count "
        << chain.step_count();
    throw IndexOutOfRangeError(msg.str());
  }
  std::vector<double> p = chain.preparation().probabilities().probabilities;
  for (std::size_t t = 0; t < k; ++t) {
    p = apply_transition(p, transition_of(chain.steps()[t]));
  }
  return Distribution(std::move(p));
}

std::vector<Distribution> marginal_trajectory(const MeasurementChain& chain) {
  std::vector<Distribution> out;
  out.reserve(chain.step_count() + 1);
  std::vector<double> p = chain.preparation().probabilities().probabilities;
  out.emplace_back(p);
  for (const BasisChange& step : chain.steps()) {
    p = apply_transition(p, transition_of(step));
    out.emplace_back(p);
  }
  return out;
}

double shannon_entropy(const Distribution& d) {
  double h = 0.0;
  for (double p : d.probabilities) {
    if (p > 0.0) h -= p * std::log2(p);
  }
  return std::max(h, 0.0);
}

double detector_entropy(const MeasurementChain& chain, std::size_t k) {
  return shannon_entropy(marginal_after(chain, k));
}

double joint_entropy_closed_form(const MeasurementChain& chain,
                                 const std::vector<std::size_t>& subset) {
  if (subset.empty()) {
    throw EmptySubsetError("joint_entropy_closed_form: empty subset");
  }
  const std::size_t latest = *std::max_element(subset.begin(), subset.end());
  return detector_entropy(chain, latest);
}

double conditional_entropy_closed_form(const MeasurementChain& chain,
                                       std::size_t j, std::size_t k) {
  if (j == k) {
    throw SameIndexError("conditional_entropy_closed_form: indices equal");
  }
  if (j > chain.step_count() || k > chain.step_count()) {
    throw IndexOutOfRangeError("conditional_entropy_closed_form: index "
                               "exceeds step count");
  }
  if (j < k) return 0.0;
  return detector_entropy(chain, j) - detector_entropy(chain, k);
}

double mutual_information_closed_form(const MeasurementChain& chain,
                                      std::size_t n, std::size_t k) {
  if (n > chain.step_count() || k > chain.step_count()) {
    throw IndexOutOfRangeError("mutual_information_closed_form: index "
                               "exceeds step count");
  }
  if (n <= k) {
    throw OrderViolationError(
        "mutual_information_closed_form: first index must come after second");
  }
  return detector_entropy(chain, k);
}

double outcome_chain_probability(const MeasurementChain& chain,
                                 const std::vector<std::size_t>& outcomes) {
  const std::size_t n = chain.dimension();
  if (outcomes.size() != chain.step_count() + 1) {
    std::ostringstream msg;
    msg << "outcome_chain_probability: tuple length " << outcomes.size()
        << ", expected " << chain.step_count() + 1;
    throw IndexOutOfRangeError(msg.str());
  }
  for (std::size_t idx : outcomes) {
    if (idx >= n) {
      throw IndexOutOfRangeError("outcome_chain_probability: outcome index "
                                 "exceeds dimension");
    }
  }
  double prob = std::norm(chain.preparation().amplitudes()[outcomes[0]]);
  for (std::size_t t = 0; t < chain.step_count(); ++t) {
    prob *= std::norm(chain.steps()[t].matrix()(outcomes[t], outcomes[t + 1]));
  }
  return prob;
}

}  // namespace chainwatch::chain
