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

#include "chainwatch/numerics.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

namespace chainwatch::numerics {

void Tolerances::validate() const {
  if (unitarity_tol <= 0.0 || psd_tol <= 0.0 || entropy_tol <= 0.0) {
    throw Error("Tolerances must be strictly positive");
  }
}

ComplexMatrix::ComplexMatrix(std::size_t rows, std::size_t cols,
                             std::vector<Complex> data)
    : rows_(rows), cols_(cols), data_(std::move(data)) {
  if (rows_ == 0 || cols_ == 0) {
    throw Error("ComplexMatrix: dimensions must be >= 1");
  }
  if (data_.size() != rows_ * cols_) {
    std::ostringstream msg;
    msg << "ComplexMatrix: entry count " << data_.size() << " does not match "
        << rows_ << "x" << cols_;
    throw Error(msg.str());
  }
}

ComplexMatrix ComplexMatrix::identity(std::size_t n) {
  ComplexMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

ComplexMatrix ComplexMatrix::adjoint() const {
  ComplexMatrix out(cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i) {
    for (std::size_t j = 0; j < cols_; ++j) {
      out(j, i) = std::conj((*this)(i, j));
    }
  }
  return out;
}

Complex ComplexMatrix::trace() const {
  if (!square()) throw Error("trace: matrix not square");
  Complex t = 0.0;
  for (std::size_t i = 0; i < rows_; ++i) t += (*this)(i, i);
  return t;
}

ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.cols() != b.rows()) throw Error("matrix product: shape mismatch");
  ComplexMatrix out(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t k = 0; k < a.cols(); ++k) {
      const Complex aik = a(i, k);
      if (aik == Complex{}) continue;
      for (std::size_t j = 0; j < b.cols(); ++j) {
        out(i, j) += aik * b(k, j);
      }
    }
  }
  return out;
}

double max_abs_diff(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw Error("max_abs_diff: shape mismatch");
  }
  double worst = 0.0;
  for (std::size_t i = 0; i < a.data().size(); ++i) {
    worst = std::max(worst, std::abs(a.data()[i] - b.data()[i]));
  }
  return worst;
}

double hermiticity_defect(const ComplexMatrix& m) {
  if (!m.square()) throw Error("hermiticity_defect: matrix not square");
  double worst = 0.0;
  for (std::size_t i = 0; i < m.rows(); ++i) {
    for (std::size_t j = i; j < m.cols(); ++j) {
      worst = std::max(worst, std::abs(m(i, j) - std::conj(m(j, i))));
    }
  }
  return worst;
}

UnitarityCheck check_unitary(const ComplexMatrix& u, const Tolerances& tol) {
  tol.validate();
  if (!u.square()) throw Error("check_unitary: matrix not square");
  const std::size_t n = u.rows();

  double worst = 0.0;
  // max-norm of u†u - I
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i; j < n; ++j) {
      Complex e = 0.0;
      for (std::size_t k = 0; k < n; ++k) {
        e += std::conj(u(k, i)) * u(k, j);
      }
      if (i == j) e -= 1.0;
      worst = std::max(worst, std::abs(e));
    }
  }
  // per-row probability sums
  for (std::size_t i = 0; i < n; ++i) {
    double row = 0.0;
    for (std::size_t j = 0; j < n; ++j) row += std::norm(u(i, j));
    worst = std::max(worst, std::abs(row - 1.0));
  }
  return UnitarityCheck{worst <= tol.unitarity_tol, worst};
}

std::vector<double> hermitian_eigenvalues(const ComplexMatrix& m,
                                          const Tolerances& tol) {
  tol.validate();
  if (!m.square()) {
    throw NonHermitianError("hermitian_eigenvalues: matrix not square", 0.0);
  }
  const double defect = hermiticity_defect(m);
  if (defect > tol.psd_tol) {
    std::ostringstream msg;
    msg << "hermitian_eigenvalues: matrix deviates from Hermitian by "
        << defect << " (tolerance " << tol.psd_tol << ")";
    throw NonHermitianError(msg.str(), defect);
  }

  const auto n = static_cast<Eigen::Index>(m.rows());
  Eigen::MatrixXcd h(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      h(i, j) = m(static_cast<std::size_t>(i), static_cast<std::size_t>(j));
    }
  }
  // symmetrize away the sub-tolerance defect before solving
  h = (h + h.adjoint()).eval() * 0.5;

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(h,
                                                         Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) {
    throw Error("hermitian_eigenvalues: eigensolver failed to converge");
  }
  std::vector<double> values(solver.eigenvalues().data(),
                             solver.eigenvalues().data() + n);
  std::sort(values.begin(), values.end(), std::greater<>());
  return values;
}

std::vector<double> clamp_spectrum(std::vector<double> eigenvalues,
                                   double psd_tol) {
  for (double& v : eigenvalues) {
    if (v < -psd_tol) {
      std::ostringstream msg;
      msg << "spectrum eigenvalue " << v << " below -" << psd_tol;
      throw NotPositiveSemidefiniteError(msg.str());
    }
    if (v < 0.0) v = 0.0;
  }
  return eigenvalues;
}

namespace {

std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

}  // namespace

SplitMix64::result_type SplitMix64::operator()() {
  state_ += 0x9e3779b97f4a7c15ULL;
  return mix64(state_);
}

double SplitMix64::next_double() {
  return static_cast<double>((*this)() >> 11) * 0x1.0p-53;
}

double SplitMix64::next_gaussian() {
  if (have_cached_gaussian_) {
    have_cached_gaussian_ = false;
    return cached_gaussian_;
  }
  double u1 = next_double();
  while (u1 <= 0.0) u1 = next_double();
  const double u2 = next_double();
  const double r = std::sqrt(-2.0 * std::log(u1));
  const double a = 2.0 * std::numbers::pi * u2;
  cached_gaussian_ = r * std::sin(a);
  have_cached_gaussian_ = true;
  return r * std::cos(a);
}

SplitMix64 SplitMix64::split(std::uint64_t stream) const {
  return SplitMix64(mix64(seed_ ^ (0x9e3779b97f4a7c15ULL * (stream + 1))));
}

ComplexMatrix random_unitary(std::size_t n, SplitMix64& rng) {
  if (n == 0) throw Error("random_unitary: dimension must be >= 1");
  ComplexMatrix a(n, n);
  for (auto& entry : a.data()) {
    entry = Complex(rng.next_gaussian(), rng.next_gaussian());
  }

  // Modified Gram-Schmidt on columns, one re-orthogonalization pass. The
  // column norms used for scaling are the triangular factor's diagonal,
  // real positive by construction.
  ComplexMatrix q = a;
  for (std::size_t k = 0; k < n; ++k) {
    for (int pass = 0; pass < 2; ++pass) {
      for (std::size_t j = 0; j < k; ++j) {
        Complex proj = 0.0;
        for (std::size_t i = 0; i < n; ++i) proj += std::conj(q(i, j)) * q(i, k);
        for (std::size_t i = 0; i < n; ++i) q(i, k) -= proj * q(i, j);
      }
    }
    double norm = 0.0;
    for (std::size_t i = 0; i < n; ++i) norm += std::norm(q(i, k));
    norm = std::sqrt(norm);
    if (norm < 1e-12) {
      // astronomically unlikely for Gaussian input; redraw the column
      for (std::size_t i = 0; i < n; ++i) {
        q(i, k) = Complex(rng.next_gaussian(), rng.next_gaussian());
      }
      --k;
      continue;
    }
    for (std::size_t i = 0; i < n; ++i) q(i, k) /= norm;
  }
  return q;
}

}  // namespace chainwatch::numerics
