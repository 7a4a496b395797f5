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

#pragma once

#include <Eigen/Dense>

#include "smimo/system_model.hpp"

namespace smimo {

using RVector = Eigen::VectorXd;
using CVector = Eigen::VectorXcd;

/// Orthonormal basis of the leading left-singular directions of Y.
struct SubspaceBasis {
  CMatrix S;                // R x T_sel, S^H S = I
  RVector singular_values;  // non-increasing
  int iterations = 0;       // subspace iterations spent (0 = dense fallback)
};

/// Compressed channel seen after projection.
struct ProjectedChannel {
  CMatrix H_tilde;  // T_sel x T
};

struct BeamformerVector {
  CVector m;  // unit norm
};

struct PartialSvdOptions {
  double tol = 1e-10;   // relative residual ||Y Y^H u - s^2 u|| / s_1^2
  int max_iter = 300;
  int oversampling = 10;
};

/// Leading `t_sel` left-singular vectors of Y by block subspace iteration
/// with Rayleigh-Ritz extraction. Falls back to a dense Gram
/// eigendecomposition if the iteration stalls. Throws DomainError when t_sel
/// is outside [1, min(R, C)].
SubspaceBasis signal_subspace(const CMatrix& Y, int t_sel, const PartialSvdOptions& opt = {});

/// Y_tilde = S^H Y.
CMatrix project(const SubspaceBasis& basis, const CMatrix& Y);

/// Least-squares estimate of the projected channel over the pilot columns,
/// H_tilde = Y_tilde[:, pilots] X_p^+. Throws EstimationError when the
/// pilot block is rank deficient.
ProjectedChannel estimate_projected_channel(const CMatrix& Y_tilde, const PilotConfig& pilots);

/// Least-squares channel estimate from the first tau*T columns of `Y`.
CMatrix ls_channel_estimate(const CMatrix& Y, const PilotConfig& pilots);

/// Hard QPSK decisions (power P) on every entry.
CMatrix qpsk_slice(const CMatrix& soft, double P);

/// Linear MMSE equalization of the data columns on the compound channel,
/// followed by QPSK slicing. `noise_var` is the per-entry noise variance in
/// the projected domain, `P` the symbol power.
CMatrix detect_subspace(const CMatrix& Y_tilde_data, const ProjectedChannel& h, double noise_var, double P);

/// Baseline: LS estimate of the full channel from the pilot columns, MRC,
/// QPSK slicing. Returns T x (C - tau T) decisions.
CMatrix conventional_receiver(const CMatrix& Y, const PilotConfig& pilots, double P);

/// Complete blind receiver: subspace, projection, projected LS estimate and
/// MMSE detection. Returns T x (C - tau T) decisions.
CMatrix subspace_receiver(const CMatrix& Y, const PilotConfig& pilots, int t_sel, double noise_var, double P);

/// Unit-norm maximizer of the Rayleigh quotient m^H Y Y^H m / m^H m.
/// Throws DomainError for a zero matrix.
BeamformerVector matched_filter_principal(const CMatrix& Y);

}  // namespace smimo
