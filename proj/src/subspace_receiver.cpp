// SPDX-License-Identifier: Apache-2.0
//
// Copyright 2026 The smimo Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#include "smimo/subspace_receiver.hpp"

#include <algorithm>
#include <limits>
#include <random>

namespace smimo {

namespace {

CMatrix thin_q(const CMatrix& z) {
  Eigen::HouseholderQR<CMatrix> qr(z);
  return qr.householderQ() * CMatrix::Identity(z.rows(), z.cols());
}

SubspaceBasis dense_subspace(const CMatrix& Y, int t_sel) {
  Eigen::BDCSVD<CMatrix> svd(Y, Eigen::ComputeThinU);
  SubspaceBasis out;
  out.S = svd.matrixU().leftCols(t_sel);
  out.singular_values = svd.singularValues().head(t_sel);
  out.iterations = 0;
  return out;
}

}  // namespace

SubspaceBasis signal_subspace(const CMatrix& Y, int t_sel, const PartialSvdOptions& opt) {
  const Eigen::Index n = std::min(Y.rows(), Y.cols());
  if (t_sel < 1 || t_sel > n) throw DomainError("signal_subspace: T_sel must lie in [1, min(R, C)]");

  const Eigen::Index k = std::min<Eigen::Index>(n, t_sel + std::max(opt.oversampling, t_sel));
  if (k >= n) return dense_subspace(Y, t_sel);

  std::mt19937_64 rng(0x5eedULL);
  CMatrix q = thin_q(complex_gaussian(rng, Y.rows(), k, 1.0));

  for (int it = 1; it <= opt.max_iter; ++it) {
    const CMatrix m = q.adjoint() * Y;  // k x C
    const CMatrix gram = m * m.adjoint();
    Eigen::SelfAdjointEigenSolver<CMatrix> es(gram);
    const CMatrix z = Y * m.adjoint();  // Y Y^H q

    // Ritz pairs, largest first.
    const CMatrix v = es.eigenvectors().rightCols(t_sel).rowwise().reverse();
    const RVector lam = es.eigenvalues().tail(t_sel).reverse().cwiseMax(0.0);
    const CMatrix u = q * v;
    const CMatrix resid = z * v - u * lam.asDiagonal();
    const double scale = std::max(lam(0), std::numeric_limits<double>::min());
    double worst = 0.0;
    for (int i = 0; i < t_sel; ++i) worst = std::max(worst, resid.col(i).norm() / scale);

    if (lam(0) == 0.0 || worst <= opt.tol) {
      SubspaceBasis out;
      out.S = u;
      out.singular_values = lam.cwiseSqrt();
      out.iterations = it;
      return out;
    }
    q = thin_q(z);
  }
  return dense_subspace(Y, t_sel);
}

CMatrix project(const SubspaceBasis& basis, const CMatrix& Y) {
  if (basis.S.rows() != Y.rows()) throw ConfigError("project: basis and Y are not conformable");
  return basis.S.adjoint() * Y;
}

CMatrix ls_channel_estimate(const CMatrix& Y, const PilotConfig& pilots) {
  const Eigen::Index np = pilots.length();
  if (Y.cols() < np) throw EstimationError("pilot columns missing from the received block");
  const CMatrix& xp = pilots.pilot_matrix;
  const CMatrix gram = xp * xp.adjoint();
  Eigen::FullPivLU<CMatrix> lu(gram);
  if (lu.rank() < gram.rows()) throw EstimationError("rank-deficient pilot block");
  // H = Y_p X_p^H (X_p X_p^H)^-1
  const CMatrix rhs = (Y.leftCols(np) * xp.adjoint()).adjoint();
  return lu.solve(rhs).adjoint();
}

ProjectedChannel estimate_projected_channel(const CMatrix& Y_tilde, const PilotConfig& pilots) {
  return {ls_channel_estimate(Y_tilde, pilots)};
}

CMatrix qpsk_slice(const CMatrix& soft, double P) {
  CMatrix out(soft.rows(), soft.cols());
  for (Eigen::Index j = 0; j < soft.cols(); ++j) {
    for (Eigen::Index i = 0; i < soft.rows(); ++i) {
      out(i, j) = qpsk_symbol(soft(i, j).real() < 0.0, soft(i, j).imag() < 0.0, P);
    }
  }
  return out;
}

CMatrix detect_subspace(const CMatrix& Y_tilde_data, const ProjectedChannel& h, double noise_var, double P) {
  const CMatrix& ht = h.H_tilde;
  if (ht.rows() != Y_tilde_data.rows()) throw ConfigError("detect_subspace: channel and data not conformable");
  const double reg = P > 0.0 ? noise_var / P : 0.0;
  CMatrix a = ht.adjoint() * ht;
  a.diagonal().array() += reg;
  Eigen::FullPivLU<CMatrix> lu(a);
  CMatrix soft;
  if (lu.isInvertible()) {
    soft = lu.solve(ht.adjoint() * Y_tilde_data);
  } else {
    Eigen::CompleteOrthogonalDecomposition<CMatrix> cod(ht);
    soft = cod.solve(Y_tilde_data);
  }
  return qpsk_slice(soft, P);
}

CMatrix conventional_receiver(const CMatrix& Y, const PilotConfig& pilots, double P) {
  const CMatrix h_hat = ls_channel_estimate(Y, pilots);
  const Eigen::Index np = pilots.length();
  const CMatrix soft = h_hat.adjoint() * Y.rightCols(Y.cols() - np);
  return qpsk_slice(soft, P);
}

CMatrix subspace_receiver(const CMatrix& Y, const PilotConfig& pilots, int t_sel, double noise_var, double P) {
  const SubspaceBasis basis = signal_subspace(Y, t_sel);
  const CMatrix yt = project(basis, Y);
  const ProjectedChannel h = estimate_projected_channel(yt, pilots);
  const Eigen::Index np = pilots.length();
  return detect_subspace(yt.rightCols(yt.cols() - np), h, noise_var, P);
}

BeamformerVector matched_filter_principal(const CMatrix& Y) {
  if (Y.size() == 0 || Y.norm() == 0.0) throw DomainError("matched_filter_principal: Y must be nonzero");
  const SubspaceBasis b = signal_subspace(Y, 1);
  BeamformerVector out;
  out.m = b.S.col(0).normalized();
  return out;
}

}  // namespace smimo
