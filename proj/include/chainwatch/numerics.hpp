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

#include <complex>
#include <cstdint>
#include <vector>

#include "chainwatch/errors.hpp"

namespace chainwatch::numerics {

using Complex = std::complex<double>;

/// Shared tolerance policy. All values are strictly positive.
struct Tolerances {
  double unitarity_tol = 1e-10;  // max-norm of U†U - I
  double psd_tol = 1e-8;         // Hermiticity / eigenvalue-clamp threshold
  double entropy_tol = 1e-9;     // bits; normalization and cross-checks

  void validate() const;
};

/// Dense complex matrix, row-major.
class ComplexMatrix {
 public:
  ComplexMatrix() = default;
  ComplexMatrix(std::size_t rows, std::size_t cols)
      : rows_(rows), cols_(cols), data_(rows * cols) {
    if (rows_ == 0 || cols_ == 0) {
      throw Error("ComplexMatrix: dimensions must be >= 1");
    }
  }
  ComplexMatrix(std::size_t rows, std::size_t cols, std::vector<Complex> data);

  static ComplexMatrix identity(std::size_t n);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool square() const { return rows_ == cols_; }

  Complex& operator()(std::size_t i, std::size_t j) {
    return data_[i * cols_ + j];
  }
  const Complex& operator()(std::size_t i, std::size_t j) const {
    return data_[i * cols_ + j];
  }

  const std::vector<Complex>& data() const { return data_; }
  std::vector<Complex>& data() { return data_; }

  ComplexMatrix adjoint() const;
  Complex trace() const;

  friend ComplexMatrix operator*(const ComplexMatrix& a,
                                 const ComplexMatrix& b);

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Complex> data_;
};

/// Entrywise max-norm of a - b.
double max_abs_diff(const ComplexMatrix& a, const ComplexMatrix& b);

/// Max-norm Hermiticity defect, max |m - m†|.
double hermiticity_defect(const ComplexMatrix& m);

struct UnitarityCheck {
  bool ok = false;
  double max_deviation = 0.0;  // worst of max|U†U - I| and row-norm defects
};

/// Verifies U†U = I in max-norm and that every row has unit 2-norm.
UnitarityCheck check_unitary(const ComplexMatrix& u,
                             const Tolerances& tol = Tolerances{});

/// All eigenvalues of a Hermitian matrix, descending.
/// Throws NonHermitianError if max|m - m†| exceeds tol.psd_tol.
std::vector<double> hermitian_eigenvalues(const ComplexMatrix& m,
                                          const Tolerances& tol = Tolerances{});

/// Eigenvalue clamp policy for density-matrix spectra: values in
/// [-psd_tol, 0) become 0; anything below -psd_tol is a hard error.
std::vector<double> clamp_spectrum(std::vector<double> eigenvalues,
                                   double psd_tol);

/// Deterministic 64-bit generator (splitmix64). Uniform and Gaussian
/// draws are derived in-library so streams reproduce across platforms.
class SplitMix64 {
 public:
  using result_type = std::uint64_t;

  explicit SplitMix64(std::uint64_t seed) : seed_(seed), state_(seed) {}

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return ~std::uint64_t{0}; }

  result_type operator()();

  /// Uniform double in [0, 1).
  double next_double();

  /// Standard normal via Box-Muller on the uniform stream.
  double next_gaussian();

  /// Independent substream for counter `stream`; depends only on the
  /// original seed, not on how much of this stream has been consumed.
  SplitMix64 split(std::uint64_t stream) const;

  std::uint64_t seed() const { return seed_; }

 private:
  std::uint64_t seed_;
  std::uint64_t state_;
  bool have_cached_gaussian_ = false;
  double cached_gaussian_ = 0.0;
};

/// Haar-ish random unitary: complex Gaussian matrix orthonormalized by
/// modified Gram-Schmidt, which leaves the triangular factor's diagonal
/// real positive. Deterministic for a fixed generator state.
ComplexMatrix random_unitary(std::size_t n, SplitMix64& rng);

}  // namespace chainwatch::numerics
