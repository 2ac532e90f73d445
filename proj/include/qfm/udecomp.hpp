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

/**
 * @file udecomp.hpp
 * @brief Unitary synthesis: cosine-sine decomposition, demultiplexing,
 *        ZYZ Euler angles, multiplexed rotations and the quantum Shannon
 *        decomposition.
 *
 * Block conventions follow the qubit ordering of qcore: for an n-qubit
 * matrix the top-left/bottom-right half blocks are the subspaces where
 * qubit n-1 (the most significant) is 0/1. Hence
 *  - a block-diagonal X1 (+) X2 is a unitary on qubits 0..n-2 multiplexed
 *    by qubit n-1, and
 *  - the cosine-sine core and D (+) D^dagger are rotations on qubit n-1
 *    multiplexed by qubits 0..n-2.
 */

#pragma once

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <string>
#include <vector>

#include "qfm/errors.hpp"
#include "qfm/linalg.hpp"
#include "qfm/qcore.hpp"

namespace qfm::udecomp {

/// M = (L1 (+) L2) [[C, -S], [S, C]] (R1 (+) R2)
struct CsdResult {
  CMatrix L1, L2, R1, R2;
  Eigen::VectorXd C, S;

  CMatrix reconstruct() const {
    const auto k = C.size();
    CMatrix left = CMatrix::Zero(2 * k, 2 * k), mid = CMatrix::Zero(2 * k, 2 * k),
            right = CMatrix::Zero(2 * k, 2 * k);
    left.topLeftCorner(k, k) = L1;
    left.bottomRightCorner(k, k) = L2;
    right.topLeftCorner(k, k) = R1;
    right.bottomRightCorner(k, k) = R2;
    mid.topLeftCorner(k, k) = C.asDiagonal();
    mid.topRightCorner(k, k) = -S.asDiagonal().toDenseMatrix().cast<Complex>();
    mid.bottomLeftCorner(k, k) = S.asDiagonal();
    mid.bottomRightCorner(k, k) = C.asDiagonal();
    return left * mid * right;
  }
};

/// X1 (+) X2 = (V (+) V)(D (+) D^dagger)(W (+) W)
struct DemuxResult {
  CMatrix V, W;
  Eigen::VectorXcd D;
};

/// U = e^{i phase} RotZ(alpha) RotY(beta) RotZ(gamma), beta in [0, pi].
struct ZyzAngles {
  double alpha = 0.0, beta = 0.0, gamma = 0.0, phase = 0.0;

  Eigen::Matrix2cd matrix() const {
    return std::exp(Complex(0.0, phase)) * single_qubit_matrix(GateKind::RotZ, alpha) *
           single_qubit_matrix(GateKind::RotY, beta) * single_qubit_matrix(GateKind::RotZ, gamma);
  }
};

namespace detail {
inline void require_unitary(const CMatrix& m, double tol, const char* what) {
  if (m.rows() != m.cols()) throw ValidationError(std::string(what) + ": matrix is not square");
  const double err = unitarity_error(m);
  if (!(err <= tol))
    throw ValidationError(std::string(what) + ": input is not unitary (||U^dag U - I|| = " + std::to_string(err) +
                          ")");
}
}  // namespace detail

/// Cosine-sine decomposition of an even-dimension unitary.
///
/// The top-left block is factored by SVD (cosines non-increasing). The
/// bottom-left block times R1^dagger has orthogonal columns of norm s_i; a
/// Householder QR taken in order of decreasing s_i yields L2 and S stably even
/// when some s_i vanish. R2 then follows without division as
/// C L2^dagger M22 - S L1^dagger M12.
inline CsdResult csd(const CMatrix& m) {
  if (m.rows() != m.cols() || m.rows() % 2 != 0 || m.rows() == 0)
    throw ValidationError("csd: need a square matrix of even dimension");
  detail::require_unitary(m, 1e-8, "csd");
  const Eigen::Index k = m.rows() / 2;
  const CMatrix m11 = m.topLeftCorner(k, k), m12 = m.topRightCorner(k, k);
  const CMatrix m21 = m.bottomLeftCorner(k, k), m22 = m.bottomRightCorner(k, k);

  Eigen::JacobiSVD<CMatrix> svd(m11, Eigen::ComputeFullU | Eigen::ComputeFullV);
  CsdResult r;
  r.L1 = svd.matrixU();
  r.R1 = svd.matrixV().adjoint();
  r.C = svd.singularValues().cwiseMin(1.0);

  // Columns of Y are L2's columns scaled by s_i; s is non-decreasing, so
  // factor the column-reversed matrix to orthogonalize large columns first.
  const CMatrix y = m21 * r.R1.adjoint();
  CMatrix yrev(k, k);
  for (Eigen::Index j = 0; j < k; ++j) yrev.col(j) = y.col(k - 1 - j);
  Eigen::HouseholderQR<CMatrix> qr(yrev);
  const CMatrix q = qr.householderQ() * CMatrix::Identity(k, k);
  const CMatrix t = qr.matrixQR();
  r.L2.resize(k, k);
  r.S.resize(k);
  for (Eigen::Index j = 0; j < k; ++j) {
    const Complex d = t(j, j);
    const double mag = std::abs(d);
    const Complex ph = mag > 0.0 ? d / mag : Complex(1.0, 0.0);
    r.L2.col(k - 1 - j) = q.col(j) * ph;
    r.S(k - 1 - j) = mag;
  }
  // Columns with s_i = 0 are fixed only up to a unitary on their span. Pick
  // the basis that brings the matching block of M22 closest to the identity.
  std::vector<Eigen::Index> flat;
  for (Eigen::Index j = 0; j < k; ++j)
    if (r.S(j) <= 1e-12) flat.push_back(j);
  if (!flat.empty()) {
    const auto m = static_cast<Eigen::Index>(flat.size());
    CMatrix basis(k, m), a(m, m);
    for (Eigen::Index i = 0; i < m; ++i) basis.col(i) = r.L2.col(flat[static_cast<std::size_t>(i)]);
    for (Eigen::Index i = 0; i < m; ++i)
      for (Eigen::Index j = 0; j < m; ++j)
        a(i, j) = basis.col(i).dot(m22.col(flat[static_cast<std::size_t>(j)]));
    Eigen::JacobiSVD<CMatrix> polar(a, Eigen::ComputeFullU | Eigen::ComputeFullV);
    const CMatrix rotated = basis * (polar.matrixU() * polar.matrixV().adjoint());
    for (Eigen::Index i = 0; i < m; ++i) r.L2.col(flat[static_cast<std::size_t>(i)]) = rotated.col(i);
  }
  r.R2 = r.C.asDiagonal() * (r.L2.adjoint() * m22) - r.S.asDiagonal() * (r.L1.adjoint() * m12);
  return r;
}

/// Demultiplexes X1 (+) X2 through the unitary Schur form of X1 X2^dagger
/// (normal, so the Schur factor is diagonal). D is the principal square
/// root of the eigenvalues and W = D^dagger V^dagger X1.
inline DemuxResult demultiplex(const CMatrix& x1, const CMatrix& x2) {
  if (x1.rows() != x2.rows() || x1.cols() != x2.cols()) throw ValidationError("demultiplex: size mismatch");
  detail::require_unitary(x1, 1e-8, "demultiplex");
  detail::require_unitary(x2, 1e-8, "demultiplex");
  const CMatrix prod = x1 * x2.adjoint();
  DemuxResult r;
  Eigen::ComplexSchur<CMatrix> schur(prod);
  r.V = schur.matrixU();
  const CMatrix t = schur.matrixT();
  r.D.resize(t.rows());
  for (Eigen::Index i = 0; i < t.rows(); ++i) {
    Complex lambda = t(i, i);
    lambda /= std::abs(lambda);
    if (lambda.imag() == 0.0) lambda = Complex(lambda.real(), 0.0);  // -0 -> +0 keeps the principal branch
    r.D(i) = std::sqrt(lambda);
  }
  r.W = r.D.conjugate().asDiagonal() * (r.V.adjoint() * x1);
  return r;
}

/// Euler angles with the exact phase: reconstruction equals U, not merely
/// up to a global phase.
inline ZyzAngles zyz(const Eigen::Matrix2cd& u) {
  detail::require_unitary(u, 1e-10, "zyz");
  ZyzAngles a;
  const Complex det = u.determinant();
  a.phase = std::arg(det) / 2.0;
  const Eigen::Matrix2cd v = std::exp(Complex(0.0, -a.phase)) * u;  // in SU(2)
  const double c = std::abs(v(1, 1)), s = std::abs(v(1, 0));
  a.beta = 2.0 * std::atan2(s, c);
  constexpr double tiny = 1e-14;
  if (s <= tiny) {
    a.alpha = 2.0 * std::arg(v(1, 1));
    a.gamma = 0.0;
  } else if (c <= tiny) {
    a.alpha = std::arg(v(1, 0));
    a.gamma = -a.alpha;
  } else {
    const double sum = 2.0 * std::arg(v(1, 1));  // alpha + gamma
    const double diff = 2.0 * std::arg(v(1, 0)); // alpha - gamma
    a.alpha = 0.5 * (sum + diff);
    a.gamma = 0.5 * (sum - diff);
  }
  return a;
}

/// Gates realizing  |s><s| (x) RotA(angles[s])  with select value s read
/// from `selects` (selects[0] least significant) and rotation on `target`.
/// One select qubit yields
///   RotA((t1 + t2)/2), CNOT(select, target), RotA((t1 - t2)/2), CNOT(select, target).
inline std::vector<Gate> compile_multiplexor(GateKind axis, const std::vector<AngleExpr>& angles,
                                             const std::vector<int>& selects, int target) {
  if (axis != GateKind::RotY && axis != GateKind::RotZ)
    throw ValidationError("multiplexed rotations are compiled for Y or Z axes only");
  if (angles.size() != (std::size_t{1} << selects.size()))
    throw ValidationError("multiplexor needs 2^selects angles");
  if (selects.empty()) return {Gate::rotation(axis, target, angles.front().normalized())};
  const std::size_t half = angles.size() / 2;
  std::vector<AngleExpr> sum(half), diff(half);
  for (std::size_t i = 0; i < half; ++i) {
    sum[i] = (angles[i] + angles[i + half]).scaled(0.5);
    diff[i] = (angles[i] - angles[i + half]).scaled(0.5);
  }
  const std::vector<int> rest(selects.begin(), selects.end() - 1);
  const int top = selects.back();
  auto gates = compile_multiplexor(axis, sum, rest, target);
  gates.push_back(Gate::cnot(top, target));
  auto second = compile_multiplexor(axis, diff, rest, target);
  gates.insert(gates.end(), second.begin(), second.end());
  gates.push_back(Gate::cnot(top, target));
  return gates;
}

/// Two-qubit multiplexed rotation: RotA(theta1) on `target` when `select`
/// is 0, RotA(theta2) when it is 1.
inline std::vector<Gate> compile_multiplexed_rotation(GateKind axis, const AngleExpr& theta1,
                                                      const AngleExpr& theta2, int select = 0, int target = 1) {
  return compile_multiplexor(axis, {theta1, theta2}, {select}, target);
}

inline std::vector<Gate> compile_multiplexed_rotation(GateKind axis, double theta1, double theta2, int select = 0,
                                                      int target = 1) {
  return compile_multiplexed_rotation(axis, AngleExpr::fixed(theta1), AngleExpr::fixed(theta2), select, target);
}

inline constexpr int kMaxQsdQubits = 4;

namespace detail {

inline std::vector<int> lower_qubits(int n) {
  std::vector<int> q(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) q[static_cast<std::size_t>(i)] = i;
  return q;
}

// Appends gates realizing u (up to global phase) on qubits 0..n-1.
inline void qsd_into(Circuit& out, const CMatrix& u, int n) {
  if (n == 1) {
    const auto a = zyz(u);
    out.add(Gate::rz(0, AngleExpr::fixed(a.gamma)));
    out.add(Gate::ry(0, AngleExpr::fixed(a.beta)));
    out.add(Gate::rz(0, AngleExpr::fixed(a.alpha)));
    return;
  }
  const auto selects = lower_qubits(n - 1);
  const int target = n - 1;
  auto demux_into = [&](const CMatrix& x1, const CMatrix& x2) {
    const auto dm = demultiplex(x1, x2);
    qsd_into(out, dm.W, n - 1);
    std::vector<AngleExpr> angles;
    for (Eigen::Index i = 0; i < dm.D.size(); ++i) angles.push_back(AngleExpr::fixed(-2.0 * std::arg(dm.D(i))));
    for (auto& g : compile_multiplexor(GateKind::RotZ, angles, selects, target)) out.add(std::move(g));
    qsd_into(out, dm.V, n - 1);
  };
  const auto cs = csd(u);
  demux_into(cs.R1, cs.R2);
  std::vector<AngleExpr> ry;
  for (Eigen::Index i = 0; i < cs.C.size(); ++i) ry.push_back(AngleExpr::fixed(2.0 * std::atan2(cs.S(i), cs.C(i))));
  for (auto& g : compile_multiplexor(GateKind::RotY, ry, selects, target)) out.add(std::move(g));
  demux_into(cs.L1, cs.L2);
}

}  // namespace detail

/// Quantum Shannon decomposition of a 2^n x 2^n unitary (n <= 4). The
/// result equals U up to a global phase.
inline Circuit qsd(const CMatrix& u) {
  if (u.rows() != u.cols() || u.rows() < 2) throw ValidationError("qsd: need a square matrix");
  int n = 0;
  while ((Eigen::Index{1} << n) < u.rows()) ++n;
  if ((Eigen::Index{1} << n) != u.rows()) throw ValidationError("qsd: dimension must be a power of two");
  if (n > kMaxQsdQubits) throw CapacityError("qsd supports at most " + std::to_string(kMaxQsdQubits) + " qubits");
  detail::require_unitary(u, 1e-8, "qsd");
  Circuit out(n);
  detail::qsd_into(out, u, n);
  return out;
}

}  // namespace qfm::udecomp
