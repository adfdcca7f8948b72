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

#include <cstddef>
#include <vector>

#include "chainwatch/numerics.hpp"

// Classical computation path: detector marginals from the conditional
// probability chain, Shannon entropies, and the closed-form entropy and
// information identities. Never touches a quantum state.
namespace chainwatch::chain {

using numerics::Complex;
using numerics::ComplexMatrix;
using numerics::Tolerances;

/// Probability distribution over N outcomes.
struct Distribution {
  std::vector<double> probabilities;

  Distribution() = default;
  explicit Distribution(std::vector<double> p,
                        const Tolerances& tol = Tolerances{});

  std::size_t size() const { return probabilities.size(); }
  double operator[](std::size_t i) const { return probabilities[i]; }
};

/// The first measurement: amplitude vector over N >= 2 basis states.
class Preparation {
 public:
  explicit Preparation(std::vector<Complex> amplitudes,
                       const Tolerances& tol = Tolerances{});

  std::size_t dimension() const { return amplitudes_.size(); }
  const std::vector<Complex>& amplitudes() const { return amplitudes_; }

  /// p_i = |alpha_i|^2.
  Distribution probabilities() const;

 private:
  std::vector<Complex> amplitudes_;
};

/// Unitary overlap matrix between consecutive measurement bases;
/// row index = previous basis, column index = new basis.
class BasisChange {
 public:
  explicit BasisChange(ComplexMatrix u, const Tolerances& tol = Tolerances{});

  std::size_t dimension() const { return u_.rows(); }
  const ComplexMatrix& matrix() const { return u_; }

 private:
  ComplexMatrix u_;
};

/// A preparation plus an ordered list of basis changes. Single source of
/// truth for both the classical and the quantum computation paths.
class MeasurementChain {
 public:
  MeasurementChain(Preparation preparation, std::vector<BasisChange> steps);

  std::size_t dimension() const { return preparation_.dimension(); }
  /// Number of basis-change steps m; detectors are indexed 0..m with
  /// index 0 the preparer.
  std::size_t step_count() const { return steps_.size(); }

  const Preparation& preparation() const { return preparation_; }
  const std::vector<BasisChange>& steps() const { return steps_; }

 private:
  Preparation preparation_;
  std::vector<BasisChange> steps_;
};

/// Doubly stochastic matrix t_ij = q_{j|i} = |U_ij|^2.
struct TransitionMatrix {
  std::size_t n = 0;
  std::vector<double> entries;  // row-major

  double operator()(std::size_t i, std::size_t j) const {
    return entries[i * n + j];
  }
};

TransitionMatrix transition_of(const BasisChange& step);

/// Marginal distribution of detector k (k = 0 is the preparer).
Distribution marginal_after(const MeasurementChain& chain, std::size_t k);

/// All marginals 0..m in one forward pass.
std::vector<Distribution> marginal_trajectory(const MeasurementChain& chain);

/// -sum p_i log2 p_i with 0 log 0 = 0. Bits.
double shannon_entropy(const Distribution& d);

/// H of detector k's marginal. Bits.
double detector_entropy(const MeasurementChain& chain, std::size_t k);

/// Closed form for the joint entropy of a set of detectors: the entropy
/// of the latest member. Exact for prefix sets {0..k}; for general
/// subsets it is a conjecture checked against the quantum engine.
double joint_entropy_closed_form(const MeasurementChain& chain,
                                 const std::vector<std::size_t>& subset);

/// Closed form H(X_j | X_k): H(X_j) - H(X_k) when j comes after k,
/// otherwise 0. Checked against the quantum engine.
double conditional_entropy_closed_form(const MeasurementChain& chain,
                                       std::size_t j, std::size_t k);

/// Closed form I(X_n : X_k) = H(X_k) for n > k. Checked against the
/// quantum engine.
double mutual_information_closed_form(const MeasurementChain& chain,
                                      std::size_t n, std::size_t k);

/// p_i * prod_t q_{j_t | j_{t-1}} for the outcome tuple (i, j_1..j_m).
double outcome_chain_probability(const MeasurementChain& chain,
                                 const std::vector<std::size_t>& outcomes);

}  // namespace chainwatch::chain
