// Copyright 2026 The qfmap Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <complex>
#include <random>

#include "qfm/qcore.hpp"
#include "qfm/random.hpp"

namespace qfm {

/// ||U^dagger U - I||_F
inline double unitarity_error(const CMatrix& u) {
  if (u.rows() != u.cols()) return std::numeric_limits<double>::infinity();
  return (u.adjoint() * u - CMatrix::Identity(u.rows(), u.cols())).norm();
}

inline bool is_unitary(const CMatrix& u, double tol) { return unitarity_error(u) <= tol; }

/// Haar-distributed unitary: QR of a complex Ginibre matrix with the
/// phases of R's diagonal pushed into Q.
inline CMatrix haar_unitary(Eigen::Index dim, Rng& rng) {
  std::normal_distribution<double> n01(0.0, 1.0);
  CMatrix z(dim, dim);
  for (Eigen::Index i = 0; i < dim; ++i)
    for (Eigen::Index j = 0; j < dim; ++j) z(i, j) = Complex(n01(rng), n01(rng)) / std::sqrt(2.0);
  Eigen::HouseholderQR<CMatrix> qr(z);
  CMatrix q = qr.householderQ() * CMatrix::Identity(dim, dim);
  const CMatrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (Eigen::Index j = 0; j < dim; ++j) {
    const double mag = std::abs(r(j, j));
    if (mag > 0.0) q.col(j) *= r(j, j) / mag;
  }
  return q;
}

/// min over phi of ||e^{i phi} a - b||_F, with phi taken from the largest
/// magnitude entry of b.
inline double phase_aligned_distance(const CMatrix& a, const CMatrix& b) {
  Eigen::Index bi = 0, bj = 0;
  b.cwiseAbs().maxCoeff(&bi, &bj);
  Complex phase{1.0, 0.0};
  if (std::abs(a(bi, bj)) > 0.0) {
    phase = b(bi, bj) / a(bi, bj);
    phase /= std::abs(phase);
  }
  return (phase * a - b).norm();
}

}  // namespace qfm
