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

#include "chainwatch/qstate.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>
#include <unordered_map>

namespace chainwatch::qstate {

std::string detector_label(std::size_t k) {
  return "X" + std::to_string(k);
}

SparsePureState::SparsePureState(std::vector<std::string> labels,
                                 std::vector<std::size_t> dims,
                                 std::map<MultiIndex, Complex> amplitudes,
                                 const Tolerances& tol)
    : labels_(std::move(labels)),
      dims_(std::move(dims)),
      amplitudes_(std::move(amplitudes)) {
  tol.validate();
  if (labels_.size() != dims_.size() || dims_.empty()) {
    throw Error("SparsePureState: labels and dims must match and be non-empty");
  }
  std::set<std::string> seen(labels_.begin(), labels_.end());
  if (seen.size() != labels_.size()) {
    throw Error("SparsePureState: duplicate subsystem label");
  }
  for (const auto& [tuple, amp] : amplitudes_) {
    (void)amp;
    if (tuple.size() != dims_.size()) {
      throw Error("SparsePureState: tuple length does not match subsystems");
    }
    for (std::size_t s = 0; s < tuple.size(); ++s) {
      if (tuple[s] >= dims_[s]) {
        throw IndexOutOfRangeError("SparsePureState: tuple index out of range");
      }
    }
  }
  const double norm = squared_norm();
  if (std::abs(norm - 1.0) > tol.entropy_tol) {
    std::ostringstream msg;
    msg << "SparsePureState: squared norm is " << norm << ", expected 1";
    throw Error(msg.str());
  }
}

std::size_t SparsePureState::total_dimension() const {
  std::size_t d = 1;
  for (std::size_t s : dims_) d *= s;
  return d;
}

double SparsePureState::squared_norm() const {
  double norm = 0.0;
  for (const auto& [tuple, amp] : amplitudes_) {
    (void)tuple;
    norm += std::norm(amp);
  }
  return norm;
}

std::size_t SparsePureState::label_position(const std::string& label) const {
  for (std::size_t i = 0; i < labels_.size(); ++i) {
    if (labels_[i] == label) return i;
  }
  throw UnknownLabelError("unknown subsystem label: " + label);
}

void SparsePureState::normalize_global_phase() {
  if (amplitudes_.empty()) return;
  const Complex first = amplitudes_.begin()->second;
  const double mag = std::abs(first);
  if (mag == 0.0) return;
  const Complex rotation = std::conj(first) / mag;
  for (auto& [tuple, amp] : amplitudes_) {
    (void)tuple;
    amp *= rotation;
  }
}

DensityMatrix::DensityMatrix(std::vector<std::string> labels_in,
                             std::vector<std::size_t> dims_in,
                             ComplexMatrix matrix_in, const Tolerances& tol)
    : labels(std::move(labels_in)),
      dims(std::move(dims_in)),
      matrix(std::move(matrix_in)) {
  tol.validate();
  if (labels.size() != dims.size() || labels.empty()) {
    throw Error("DensityMatrix: labels and dims must match and be non-empty");
  }
  std::size_t d = 1;
  for (std::size_t s : dims) d *= s;
  if (!matrix.square() || matrix.rows() != d) {
    throw Error("DensityMatrix: matrix dimension does not match subsystems");
  }
  const double defect = numerics::hermiticity_defect(matrix);
  if (defect > tol.psd_tol) {
    std::ostringstream msg;
    msg << "DensityMatrix: Hermiticity defect " << defect;
    throw NonHermitianError(msg.str(), defect);
  }
  const Complex tr = matrix.trace();
  if (std::abs(tr - Complex{1.0}) > tol.psd_tol) {
    std::ostringstream msg;
    msg << "DensityMatrix: trace is " << tr.real() << "+" << tr.imag()
        << "i, expected 1";
    throw Error(msg.str());
  }
}

double VennReport::region_sum() const {
  double sum = 0.0;
  for (std::size_t mask = 1; mask < region_values.size(); ++mask) {
    sum += region_values[mask];
  }
  return sum;
}

ComplexMatrix von_neumann_unitary(std::size_t n) {
  if (n < 2) throw Error("von_neumann_unitary: dimension must be >= 2");
  ComplexMatrix u(n * n, n * n);
  // sum_i P_i (x) L_i with L_i |k> = |k + i mod n>
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t k = 0; k < n; ++k) {
      u(i * n + (k + i) % n, i * n + k) = 1.0;
    }
  }
  return u;
}

namespace {

std::size_t checked_total_dimension(const chain::MeasurementChain& chain,
                                    std::size_t cap) {
  const std::size_t n = chain.dimension();
  const std::size_t subsystems = chain.step_count() + 2;
  std::size_t total = 1;
  for (std::size_t s = 0; s < subsystems; ++s) {
    if (total > cap / n) {
      std::ostringstream msg;
      msg << "joint state dimension " << n << "^" << subsystems
          << " exceeds cap " << cap;
      throw DimensionCapExceededError(msg.str());
    }
    total *= n;
  }
  return total;
}

std::vector<std::string> chain_labels(const chain::MeasurementChain& chain) {
  std::vector<std::string> labels;
  labels.reserve(chain.step_count() + 2);
  labels.push_back(kSystemLabel);
  for (std::size_t k = 0; k <= chain.step_count(); ++k) {
    labels.push_back(detector_label(k));
  }
  return labels;
}

}  // namespace

SparsePureState build_joint_state(const chain::MeasurementChain& chain,
                                  std::size_t dimension_cap) {
  checked_total_dimension(chain, dimension_cap);
  const std::size_t n = chain.dimension();
  const std::size_t m = chain.step_count();
  const auto& alpha = chain.preparation().amplitudes();

  // depth-first over outcome paths (i, j_1..j_m), pruning zero branches;
  // the stored tuple is (j_m, i, j_1..j_m) -- the system index rides in
  // the basis of the latest measurement
  std::map<MultiIndex, Complex> amps;
  std::vector<std::uint32_t> indices(m + 1, 0);
  auto walk = [&](auto&& self, std::size_t depth, Complex amp) -> void {
    if (amp == Complex{}) return;
    if (depth == m) {
      MultiIndex tuple(m + 2);
      tuple[0] = indices[m];
      for (std::size_t t = 0; t <= m; ++t) tuple[t + 1] = indices[t];
      if (std::abs(amp) > kAmplitudeEps) amps[tuple] = amp;
      return;
    }
    const auto& u = chain.steps()[depth].matrix();
    for (std::uint32_t next = 0; next < n; ++next) {
      indices[depth + 1] = next;
      self(self, depth + 1, amp * u(indices[depth], next));
    }
  };
  for (std::uint32_t i = 0; i < n; ++i) {
    indices[0] = i;
    walk(walk, 0, alpha[i]);
  }

  SparsePureState state(chain_labels(chain),
                        std::vector<std::size_t>(m + 2, n), std::move(amps));
  state.normalize_global_phase();
  return state;
}

namespace {

// Dense joint-state vector with row-major strides over `dims`.
struct DenseState {
  std::vector<std::size_t> dims;
  std::vector<Complex> amp;

  static DenseState initial(const chain::Preparation& prep) {
    const std::size_t n = prep.dimension();
    DenseState s;
    s.dims = {n};
    s.amp.assign(n, Complex{});
    for (std::size_t i = 0; i < n; ++i) s.amp[i] = prep.amplitudes()[i];
    return s;
  }

  // rotate the system index (axis 0): new[j, rest] = sum_i U(i, j) old[i, rest]
  void rotate_system(const ComplexMatrix& u) {
    const std::size_t n = dims[0];
    const std::size_t rest = amp.size() / n;
    std::vector<Complex> next(amp.size(), Complex{});
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        const Complex factor = u(i, j);
        if (factor == Complex{}) continue;
        for (std::size_t r = 0; r < rest; ++r) {
          next[j * rest + r] += factor * amp[i * rest + r];
        }
      }
    }
    amp = std::move(next);
  }

  // append an ancilla axis of dimension n in state |0> at the end
  void append_ancilla(std::size_t n) {
    std::vector<Complex> next(amp.size() * n, Complex{});
    for (std::size_t r = 0; r < amp.size(); ++r) next[r * n] = amp[r];
    amp = std::move(next);
    dims.push_back(n);
  }

  // apply the measurement unitary to the (system, last-ancilla) pair
  void measure_with(const ComplexMatrix& w) {
    const std::size_t n = dims[0];
    const std::size_t last = dims.back();
    const std::size_t mid = amp.size() / (n * last);
    std::vector<Complex> vec(n * last);
    std::vector<Complex> out(n * last);
    for (std::size_t r = 0; r < mid; ++r) {
      for (std::size_t q = 0; q < n; ++q) {
        for (std::size_t c = 0; c < last; ++c) {
          vec[q * last + c] = amp[(q * mid + r) * last + c];
        }
      }
      for (std::size_t row = 0; row < n * last; ++row) {
        Complex acc{};
        for (std::size_t col = 0; col < n * last; ++col) {
          acc += w(row, col) * vec[col];
        }
        out[row] = acc;
      }
      for (std::size_t q = 0; q < n; ++q) {
        for (std::size_t c = 0; c < last; ++c) {
          amp[(q * mid + r) * last + c] = out[q * last + c];
        }
      }
    }
  }
};

}  // namespace

SparsePureState build_joint_state_sequential(
    const chain::MeasurementChain& chain, std::size_t dimension_cap) {
  checked_total_dimension(chain, dimension_cap);
  const std::size_t n = chain.dimension();
  const std::size_t m = chain.step_count();
  const ComplexMatrix w = von_neumann_unitary(n);

  DenseState dense = DenseState::initial(chain.preparation());
  dense.append_ancilla(n);
  dense.measure_with(w);  // the preparer X0 records the initial basis
  for (std::size_t t = 0; t < m; ++t) {
    dense.rotate_system(chain.steps()[t].matrix());
    dense.append_ancilla(n);
    dense.measure_with(w);
  }

  std::map<MultiIndex, Complex> amps;
  const std::size_t subsystems = m + 2;
  MultiIndex tuple(subsystems);
  for (std::size_t flat = 0; flat < dense.amp.size(); ++flat) {
    const Complex a = dense.amp[flat];
    if (std::abs(a) <= kAmplitudeEps) continue;
    std::size_t rem = flat;
    for (std::size_t s = subsystems; s-- > 0;) {
      tuple[s] = static_cast<std::uint32_t>(rem % n);
      rem /= n;
    }
    amps[tuple] = a;
  }

  SparsePureState state(chain_labels(chain),
                        std::vector<std::size_t>(subsystems, n),
                        std::move(amps));
  state.normalize_global_phase();
  return state;
}

namespace {

std::vector<std::size_t> resolve_positions(
    const std::vector<std::string>& labels,
    const std::vector<std::string>& available) {
  if (labels.empty()) throw EmptySubsetError("subsystem subset is empty");
  std::set<std::size_t> positions;
  for (const std::string& label : labels) {
    std::size_t pos = available.size();
    for (std::size_t i = 0; i < available.size(); ++i) {
      if (available[i] == label) {
        pos = i;
        break;
      }
    }
    if (pos == available.size()) {
      throw UnknownLabelError("unknown subsystem label: " + label);
    }
    positions.insert(pos);
  }
  return {positions.begin(), positions.end()};
}

}  // namespace

DensityMatrix partial_trace(const SparsePureState& state,
                            const std::vector<std::string>& keep,
                            const Tolerances& tol) {
  const auto kept = resolve_positions(keep, state.labels());
  std::vector<bool> is_kept(state.subsystem_count(), false);
  for (std::size_t p : kept) is_kept[p] = true;

  std::vector<std::size_t> kept_dims;
  std::vector<std::string> kept_labels;
  std::size_t kept_dim = 1;
  for (std::size_t p : kept) {
    kept_dims.push_back(state.dims()[p]);
    kept_labels.push_back(state.labels()[p]);
    kept_dim *= state.dims()[p];
  }

  // bucket amplitudes by the traced-out part of the tuple
  std::unordered_map<std::uint64_t,
                     std::vector<std::pair<std::size_t, Complex>>>
      buckets;
  for (const auto& [tuple, amp] : state.amplitudes()) {
    std::uint64_t rest_key = 0;
    std::size_t kept_index = 0;
    for (std::size_t s = 0; s < tuple.size(); ++s) {
      if (is_kept[s]) {
        kept_index = kept_index * state.dims()[s] + tuple[s];
      } else {
        rest_key = rest_key * state.dims()[s] + tuple[s];
      }
    }
    buckets[rest_key].emplace_back(kept_index, amp);
  }

  ComplexMatrix rho(kept_dim, kept_dim);
  for (const auto& [rest_key, entries] : buckets) {
    (void)rest_key;
    for (const auto& [row, a] : entries) {
      for (const auto& [col, b] : entries) {
        rho(row, col) += a * std::conj(b);
      }
    }
  }
  return DensityMatrix(std::move(kept_labels), std::move(kept_dims),
                       std::move(rho), tol);
}

DensityMatrix partial_trace(const DensityMatrix& rho,
                            const std::vector<std::string>& keep,
                            const Tolerances& tol) {
  const auto kept = resolve_positions(keep, rho.labels);
  std::vector<bool> is_kept(rho.labels.size(), false);
  for (std::size_t p : kept) is_kept[p] = true;

  std::vector<std::size_t> kept_dims;
  std::vector<std::string> kept_labels;
  std::size_t kept_dim = 1;
  for (std::size_t s = 0; s < rho.labels.size(); ++s) {
    if (is_kept[s]) {
      kept_dims.push_back(rho.dims[s]);
      kept_labels.push_back(rho.labels[s]);
      kept_dim *= rho.dims[s];
    }
  }

  const std::size_t total = rho.dimension();
  std::vector<std::size_t> strides(rho.dims.size());
  {
    std::size_t stride = total;
    for (std::size_t s = 0; s < rho.dims.size(); ++s) {
      stride /= rho.dims[s];
      strides[s] = stride;
    }
  }
  std::vector<std::size_t> kept_of(total), rest_of(total);
  for (std::size_t flat = 0; flat < total; ++flat) {
    std::size_t kept_index = 0;
    std::size_t rest_index = 0;
    for (std::size_t s = 0; s < rho.dims.size(); ++s) {
      const std::size_t digit = (flat / strides[s]) % rho.dims[s];
      if (is_kept[s]) {
        kept_index = kept_index * rho.dims[s] + digit;
      } else {
        rest_index = rest_index * rho.dims[s] + digit;
      }
    }
    kept_of[flat] = kept_index;
    rest_of[flat] = rest_index;
  }

  ComplexMatrix out(kept_dim, kept_dim);
  for (std::size_t r = 0; r < total; ++r) {
    for (std::size_t c = 0; c < total; ++c) {
      if (rest_of[r] != rest_of[c]) continue;
      out(kept_of[r], kept_of[c]) += rho.matrix(r, c);
    }
  }
  return DensityMatrix(std::move(kept_labels), std::move(kept_dims),
                       std::move(out), tol);
}

double von_neumann_entropy(const DensityMatrix& rho, const Tolerances& tol) {
  const auto spectrum = numerics::clamp_spectrum(
      numerics::hermitian_eigenvalues(rho.matrix, tol), tol.psd_tol);
  double h = 0.0;
  for (double lambda : spectrum) {
    if (lambda > 0.0) h -= lambda * std::log2(lambda);
  }
  return std::max(h, 0.0);
}

double subsystem_entropy(const SparsePureState& state,
                         const std::vector<std::string>& subset,
                         const Tolerances& tol) {
  return von_neumann_entropy(partial_trace(state, subset, tol), tol);
}

VennReport venn_report(const SparsePureState& state,
                       const std::vector<std::vector<std::string>>& parties,
                       const Tolerances& tol) {
  if (parties.empty()) throw NotAPartitionError("no parties given");
  std::set<std::string> seen;
  std::size_t covered = 0;
  for (const auto& party : parties) {
    if (party.empty()) throw NotAPartitionError("empty party");
    for (const std::string& label : party) {
      try {
        state.label_position(label);
      } catch (const UnknownLabelError&) {
        throw NotAPartitionError("party label is not a subsystem: " + label);
      }
      if (!seen.insert(label).second) {
        throw NotAPartitionError("label appears in more than one party: " +
                                 label);
      }
      ++covered;
    }
  }
  if (covered != state.subsystem_count()) {
    throw NotAPartitionError("parties do not cover all subsystem labels");
  }

  const std::size_t p = parties.size();
  if (p >= 8 * sizeof(std::size_t) - 1) {
    throw Error("venn_report: too many parties");
  }
  const std::size_t subsets = std::size_t{1} << p;

  VennReport rep;
  rep.party_labels = parties;
  for (const auto& party : parties) {
    std::string name = party[0];
    for (std::size_t i = 1; i < party.size(); ++i) name += "+" + party[i];
    rep.party_names.push_back(name);
  }
  rep.subset_entropies.assign(subsets, 0.0);
  rep.region_values.assign(subsets, 0.0);

  for (std::size_t mask = 1; mask < subsets; ++mask) {
    std::vector<std::string> labels;
    for (std::size_t b = 0; b < p; ++b) {
      if (mask & (std::size_t{1} << b)) {
        labels.insert(labels.end(), parties[b].begin(), parties[b].end());
      }
    }
    rep.subset_entropies[mask] = subsystem_entropy(state, labels, tol);
  }

  // Moebius inclusion-exclusion: the atomic region inside exactly the
  // parties of T is sum over S subseteq T of (-1)^(|S|+1) H(S u T^c).
  const std::size_t full = subsets - 1;
  for (std::size_t t = 1; t < subsets; ++t) {
    const std::size_t complement = full & ~t;
    double value = 0.0;
    std::size_t s = t;
    while (true) {
      const int bits = __builtin_popcountll(s);
      const double h = rep.subset_entropies[s | complement];  // H(0)=0
      value += ((bits % 2 == 1) ? 1.0 : -1.0) * h;
      if (s == 0) break;
      s = (s - 1) & t;
    }
    rep.region_values[t] = value;
  }
  return rep;
}

}  // namespace chainwatch::qstate
