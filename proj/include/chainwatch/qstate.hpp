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
#include <map>
#include <string>
#include <vector>

#include "chainwatch/chain.hpp"
#include "chainwatch/numerics.hpp"

// Exact quantum computation path: joint pure state of the system and all
// detector ancillas, partial traces, von Neumann entropies, and Venn
// region accounting.
namespace chainwatch::qstate {

using numerics::Complex;
using numerics::ComplexMatrix;
using numerics::Tolerances;

/// Total Hilbert dimension guard for joint-state construction.
inline constexpr std::size_t kDefaultDimensionCap = std::size_t{1} << 20;

/// Amplitudes below this magnitude are dropped when sparsifying.
inline constexpr double kAmplitudeEps = 1e-14;

inline const std::string kSystemLabel = "Q";

/// Label of detector k: "X0" (the preparer), "X1", ...
std::string detector_label(std::size_t k);

using MultiIndex = std::vector<std::uint32_t>;

/// Joint pure state keyed by full index tuples (system index first, then
/// one index per detector). Only nonzero amplitudes are stored; the map's
/// lexicographic key order defines the global-phase convention (first
/// stored amplitude real positive).
class SparsePureState {
 public:
  SparsePureState(std::vector<std::string> labels, std::vector<std::size_t> dims,
                  std::map<MultiIndex, Complex> amplitudes,
                  const Tolerances& tol = Tolerances{});

  const std::vector<std::string>& labels() const { return labels_; }
  const std::vector<std::size_t>& dims() const { return dims_; }
  const std::map<MultiIndex, Complex>& amplitudes() const {
    return amplitudes_;
  }

  std::size_t subsystem_count() const { return dims_.size(); }
  std::size_t total_dimension() const;
  double squared_norm() const;

  /// Position of a subsystem label; throws UnknownLabelError.
  std::size_t label_position(const std::string& label) const;

  /// Rotates the global phase so the lexicographically first stored
  /// amplitude is real positive.
  void normalize_global_phase();

 private:
  std::vector<std::string> labels_;
  std::vector<std::size_t> dims_;
  std::map<MultiIndex, Complex> amplitudes_;
};

/// Reduced density matrix over an ordered list of subsystem labels.
struct DensityMatrix {
  std::vector<std::string> labels;
  std::vector<std::size_t> dims;
  ComplexMatrix matrix;

  DensityMatrix(std::vector<std::string> labels_, std::vector<std::size_t> dims_,
                ComplexMatrix matrix_, const Tolerances& tol = Tolerances{});

  std::size_t dimension() const { return matrix.rows(); }
};

/// Entropy Venn accounting over a partition of the subsystems into
/// parties. Subset vectors are indexed by party bitmask (entry 0 unused);
/// region values come from Moebius inclusion-exclusion and may be
/// negative.
struct VennReport {
  std::vector<std::string> party_names;
  std::vector<std::vector<std::string>> party_labels;
  std::vector<double> subset_entropies;  // size 1 << P
  std::vector<double> region_values;     // size 1 << P

  std::size_t party_count() const { return party_names.size(); }
  double region_sum() const;
};

/// The n^2 x n^2 measurement unitary sum_i P_i (x) L_i where L_i shifts
/// the ancilla by i mod n. Acting on |a_i>|0> yields |a_i>|i>.
ComplexMatrix von_neumann_unitary(std::size_t n);

/// Joint state of (Q, X0..Xm) via the product-amplitude construction:
/// amplitude at (j_m, i, j_1..j_m) is alpha_i U^1_{i j_1} ... U^m_{j_{m-1} j_m}.
SparsePureState build_joint_state(
    const chain::MeasurementChain& chain,
    std::size_t dimension_cap = kDefaultDimensionCap);

/// Same state built by sequentially applying von_neumann_unitary in the
/// rotated basis of each step; used to cross-check build_joint_state.
SparsePureState build_joint_state_sequential(
    const chain::MeasurementChain& chain,
    std::size_t dimension_cap = kDefaultDimensionCap);

/// Tr_rest |psi><psi| over the complement of `keep` (labels, any order;
/// the result is ordered by subsystem position).
DensityMatrix partial_trace(const SparsePureState& state,
                            const std::vector<std::string>& keep,
                            const Tolerances& tol = Tolerances{});

/// Partial trace of a density matrix down to a label subset.
DensityMatrix partial_trace(const DensityMatrix& rho,
                            const std::vector<std::string>& keep,
                            const Tolerances& tol = Tolerances{});

/// -sum lambda log2 lambda over the clamped spectrum. Bits.
double von_neumann_entropy(const DensityMatrix& rho,
                           const Tolerances& tol = Tolerances{});

/// Entropy of the reduced state over a label subset. Bits.
double subsystem_entropy(const SparsePureState& state,
                         const std::vector<std::string>& subset,
                         const Tolerances& tol = Tolerances{});

/// Subset entropies for every non-empty union of parties plus atomic
/// Venn regions via Moebius inclusion-exclusion. `parties` must
/// partition the state's labels.
VennReport venn_report(const SparsePureState& state,
                       const std::vector<std::vector<std::string>>& parties,
                       const Tolerances& tol = Tolerances{});

}  // namespace chainwatch::qstate
