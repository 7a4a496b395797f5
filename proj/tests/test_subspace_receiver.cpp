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

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "smimo/subspace_receiver.hpp"

using namespace smimo;

namespace {

CMatrix projector(const CMatrix& basis) { return basis * basis.adjoint(); }

// Orthonormal basis of span(A) from an independent QR.
CMatrix range_basis(const CMatrix& A) {
  Eigen::ColPivHouseholderQR<CMatrix> qr(A);
  const Eigen::Index rank = qr.rank();
  return (qr.householderQ() * CMatrix::Identity(A.rows(), A.cols())).leftCols(rank);
}

double op_norm(const CMatrix& A) { return Eigen::JacobiSVD<CMatrix>(A).singularValues()(0); }

SystemParams system(int R, int T, int C, int L, double P, double W, double I) {
  SystemParams s;
  s.R = R;
  s.T = T;
  s.C = C;
  s.L = L;
  s.P = P;
  s.W = W;
  s.interference_powers.assign(static_cast<std::size_t>(L * T), I);
  return s;
}

long long symbol_errors(const CMatrix& a, const CMatrix& b) {
  long long e = 0;
  for (Eigen::Index i = 0; i < a.size(); ++i) e += std::abs(a.data()[i] - b.data()[i]) > 1e-12;
  return e;
}

long long bit_errors(const CMatrix& decided, const CMatrix& sent) {
  long long e = 0;
  for (Eigen::Index i = 0; i < sent.size(); ++i) {
    e += (decided.data()[i].real() < 0) != (sent.data()[i].real() < 0);
    e += (decided.data()[i].imag() < 0) != (sent.data()[i].imag() < 0);
  }
  return e;
}

PilotConfig scaled_identity_pilots(int T, double P) {
  PilotConfig pc;
  pc.pilot_matrix = std::sqrt(P) * CMatrix::Identity(T, T);
  return pc;
}

}  // namespace

TEST_CASE("rank-one matrix gives its column direction") {
  auto rng = make_stream(1, 0);
  const CMatrix u = complex_gaussian(rng, 40, 1, 1.0);
  const CMatrix v = complex_gaussian(rng, 30, 1, 1.0);
  const CMatrix Y = u * v.adjoint();
  const SubspaceBasis b = signal_subspace(Y, 1);
  CHECK(std::abs((b.S.adjoint() * u)(0, 0)) / u.norm() == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(b.singular_values(0) == doctest::Approx(u.norm() * v.norm()).epsilon(1e-10));
}

TEST_CASE("noise-free single cell subspace equals the channel range") {
  auto rng = make_stream(2, 0);
  for (int trial = 0; trial < 5; ++trial) {
    const CMatrix H = complex_gaussian(rng, 120, 4, 1.0);
    const CMatrix X = complex_gaussian(rng, 4, 80, 0.3);
    const CMatrix Y = H * X;
    const SubspaceBasis b = signal_subspace(Y, 4);
    CHECK(op_norm(projector(b.S) - projector(range_basis(H))) <= 1e-8);
    const CMatrix Yt = project(b, Y);
    CHECK(Yt.norm() == doctest::Approx(Y.norm()).epsilon(1e-8));
  }
}

TEST_CASE("zero columns do not change the subspace") {
  auto rng = make_stream(3, 0);
  const CMatrix Y = complex_gaussian(rng, 60, 50, 1.0);
  CMatrix Yz = CMatrix::Zero(60, 70);
  Yz.leftCols(50) = Y;
  const SubspaceBasis a = signal_subspace(Y, 3);
  const SubspaceBasis b = signal_subspace(Yz, 3);
  CHECK(op_norm(projector(a.S) - projector(b.S)) <= 1e-8);
}

TEST_CASE("partial decomposition matches an independent SVD") {
  auto rng = make_stream(4, 0);
  const CMatrix Y = complex_gaussian(rng, 200, 150, 1.0) + 3.0 * complex_gaussian(rng, 200, 3, 1.0) *
                                                                complex_gaussian(rng, 3, 150, 1.0);
  const SubspaceBasis b = signal_subspace(Y, 3);
  CHECK(b.iterations > 0);
  Eigen::JacobiSVD<CMatrix> svd(Y, Eigen::ComputeThinU);
  for (int i = 0; i < 3; ++i) CHECK(b.singular_values(i) == doctest::Approx(svd.singularValues()(i)).epsilon(1e-9));
  CHECK(op_norm(projector(b.S) - projector(svd.matrixU().leftCols(3))) <= 1e-6);
  // ||S^H Y||_F^2 is the sum of the selected squared singular values.
  CHECK(project(b, Y).squaredNorm() == doctest::Approx(b.singular_values.squaredNorm()).epsilon(1e-9));
}

TEST_CASE("T_sel out of range") {
  const CMatrix Y = CMatrix::Ones(5, 3);
  CHECK_THROWS_AS(signal_subspace(Y, 0), DomainError);
  CHECK_THROWS_AS(signal_subspace(Y, 4), DomainError);
  CHECK_NOTHROW(signal_subspace(Y, 3));
}

TEST_CASE("basis invariants on 1000 random matrices") {
  std::mt19937_64 rng(99);
  std::uniform_int_distribution<int> dim(1, 40);
  for (int trial = 0; trial < 1000; ++trial) {
    const int R = dim(rng), C = dim(rng);
    const int t = std::uniform_int_distribution<int>(1, std::min(R, C))(rng);
    const CMatrix Y = complex_gaussian(rng, R, C, 1.0);
    const SubspaceBasis b = signal_subspace(Y, t);
    REQUIRE(b.S.cols() == t);
    CHECK((b.S.adjoint() * b.S - CMatrix::Identity(t, t)).norm() <= 1e-10);
    for (int i = 1; i < t; ++i) CHECK(b.singular_values(i) <= b.singular_values(i - 1));
    const CMatrix Yt = project(b, Y);
    CHECK(Yt.norm() <= Y.norm() * (1.0 + 1e-12));
    const double resid = (b.S * Yt - Y).norm();
    CHECK(resid <= Y.norm() * (1.0 + 1e-12));
    if (t == std::min(R, C) && R <= C) CHECK(resid <= 1e-10 * Y.norm());
  }
}

TEST_CASE("projected channel from noise-free pilots") {
  auto rng = make_stream(5, 0);
  const int R = 50, T = 3;
  const double P = 0.2;
  const CMatrix H = complex_gaussian(rng, R, T, 1.0);
  const PilotConfig pc = PilotConfig::orthogonal(T, P);
  CMatrix X(T, 40);
  X.leftCols(T) = pc.pilot_matrix;
  X.rightCols(40 - T) = complex_gaussian(rng, T, 40 - T, P);
  const CMatrix Y = H * X;
  const SubspaceBasis b = signal_subspace(Y, T);
  const ProjectedChannel h = estimate_projected_channel(project(b, Y), pc);
  CHECK((h.H_tilde - b.S.adjoint() * H).norm() <= 1e-8 * H.norm());

  const PilotConfig id = scaled_identity_pilots(T, P);
  CMatrix X2 = X;
  X2.leftCols(T) = id.pilot_matrix;
  const CMatrix Y2 = H * X2;
  const SubspaceBasis b2 = signal_subspace(Y2, T);
  const CMatrix Yt = project(b2, Y2);
  CHECK((estimate_projected_channel(Yt, id).H_tilde - Yt.leftCols(T) / std::sqrt(P)).norm() <= 1e-12 * Yt.norm());
}

TEST_CASE("rank-deficient pilots are an estimation error") {
  PilotConfig pc;
  pc.pilot_matrix = CMatrix::Zero(2, 2);
  pc.pilot_matrix(0, 0) = 1.0;
  CHECK_THROWS_AS(ls_channel_estimate(CMatrix::Ones(4, 5), pc), EstimationError);
  CHECK_THROWS_AS(estimate_projected_channel(CMatrix::Ones(2, 5), pc), EstimationError);
}

TEST_CASE("doubling pilot power halves the LS error variance") {
  auto rng = make_stream(6, 0);
  const int R = 8, T = 2, trials = 2000;
  const double W = 1.0;
  double err[2] = {0.0, 0.0};
  for (int k = 0; k < 2; ++k) {
    const double P = k == 0 ? 0.5 : 1.0;
    const PilotConfig pc = PilotConfig::orthogonal(T, P);
    for (int i = 0; i < trials; ++i) {
      const CMatrix H = complex_gaussian(rng, R, T, 1.0);
      const CMatrix Y = H * pc.pilot_matrix + complex_gaussian(rng, R, T, W);
      err[k] += (ls_channel_estimate(Y, pc) - H).squaredNorm();
    }
  }
  // Error variance per entry is W / (T P); relative sd of the estimate ~ 1/sqrt(R T trials).
  CHECK(err[1] / err[0] == doctest::Approx(0.5).epsilon(0.05));
  CHECK(err[0] / (trials * R * T) == doctest::Approx(W / (T * 0.5)).epsilon(0.05));
}

TEST_CASE("detection without impairments is error free") {
  auto rng = make_stream(7, 0);
  const double P = 0.1;
  CMatrix sent(3, 50);
  std::bernoulli_distribution bit(0.5);
  for (Eigen::Index i = 0; i < sent.size(); ++i) sent.data()[i] = qpsk_symbol(bit(rng), bit(rng), P);

  ProjectedChannel id{CMatrix::Identity(3, 3)};
  CHECK(symbol_errors(detect_subspace(sent, id, 0.0, P), sent) == 0);

  const CMatrix Ht = complex_gaussian(rng, 5, 3, 1.0);
  CHECK(symbol_errors(detect_subspace(Ht * sent, ProjectedChannel{Ht}, 0.0, P), sent) == 0);

  const CMatrix soft = detect_subspace(sent, id, 0.0, P);
  CHECK(soft.rows() == 3);
  CHECK(soft.cols() == 50);
}

TEST_CASE("singular compound channel falls back to the pseudo-inverse") {
  const double P = 1.0;
  CMatrix Ht = CMatrix::Zero(2, 2);
  Ht(0, 0) = 1.0;
  CMatrix sent(2, 1);
  sent << qpsk_symbol(false, true, P), qpsk_symbol(true, true, P);
  const CMatrix d = detect_subspace(Ht * sent, ProjectedChannel{Ht}, 0.0, P);
  CHECK(d.allFinite());
  CHECK(std::abs(d(0, 0) - sent(0, 0)) < 1e-12);
}

TEST_CASE("full receivers recover data without noise or interference") {
  const SystemParams s = system(40, 3, 60, 0, 0.1, 0.0, 0.0);
  const PilotConfig pc = PilotConfig::orthogonal(3, s.P);
  const ChannelRealization rz = sample_realization(s, pc, 11, DataLaw::qpsk);
  const CMatrix Y = assemble_received(rz);
  const CMatrix sent = rz.X.rightCols(rz.data_columns());
  const CMatrix svd = subspace_receiver(Y, pc, 3, 0.0, s.P);
  const CMatrix conv = conventional_receiver(Y, pc, s.P);
  CHECK(svd.rows() == 3);
  CHECK(svd.cols() == 57);
  CHECK(conv.rows() == 3);
  CHECK(conv.cols() == 57);
  CHECK(symbol_errors(svd, sent) == 0);
  CHECK(symbol_errors(conv, sent) == 0);
  CHECK((ls_channel_estimate(Y, pc) - rz.H).norm() <= 1e-10 * rz.H.norm());
}

TEST_CASE("reused pilots contaminate the LS estimate") {
  const SystemParams s = system(30, 2, 40, 3, 0.1, 0.0, 0.09);
  const PilotConfig pc = PilotConfig::orthogonal(2, s.P);
  const ChannelRealization rz = sample_realization(s, pc, 12, DataLaw::qpsk);
  CMatrix expected = rz.H;
  for (int c = 0; c < 3; ++c) expected += rz.H_I.middleCols(2 * c, 2);
  CHECK((ls_channel_estimate(assemble_received(rz), pc) - expected).norm() <= 1e-10 * expected.norm());
}

TEST_CASE("pilot contamination leaves a BER floor without noise") {
  const SystemParams s = system(50, 3, 100, 2, 0.1, 0.0, 0.09);
  const PilotConfig pc = PilotConfig::orthogonal(3, s.P);
  long long errors = 0, bits = 0;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const ChannelRealization rz = sample_realization(s, pc, seed, DataLaw::qpsk);
    const CMatrix sent = rz.X.rightCols(rz.data_columns());
    errors += bit_errors(conventional_receiver(assemble_received(rz), pc, s.P), sent);
    bits += 2 * sent.size();
  }
  CHECK(errors > 0);
  CHECK(static_cast<double>(errors) / bits > 0.01);
}

TEST_CASE("both receivers approach BER 1/2 at vanishing SNR") {
  const SystemParams s = system(20, 2, 200, 0, 1e-6, 1.0, 0.0);
  const PilotConfig pc = PilotConfig::orthogonal(2, s.P);
  long long e_svd = 0, e_conv = 0, bits = 0;
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    const ChannelRealization rz = sample_realization(s, pc, seed, DataLaw::qpsk);
    const CMatrix Y = assemble_received(rz);
    const CMatrix sent = rz.X.rightCols(rz.data_columns());
    e_svd += bit_errors(subspace_receiver(Y, pc, 2, s.W, s.P), sent);
    e_conv += bit_errors(conventional_receiver(Y, pc, s.P), sent);
    bits += 2 * sent.size();
  }
  const double band = 4.0 * std::sqrt(0.25 / static_cast<double>(bits));
  CHECK(std::abs(static_cast<double>(e_svd) / bits - 0.5) <= band);
  CHECK(std::abs(static_cast<double>(e_conv) / bits - 0.5) <= band);
}

TEST_CASE("principal direction of a rank-one matrix") {
  auto rng = make_stream(13, 0);
  const CMatrix h = complex_gaussian(rng, 25, 1, 1.0);
  const CMatrix x = complex_gaussian(rng, 1, 18, 1.0);
  const CMatrix Y = h * x;
  const BeamformerVector m = matched_filter_principal(Y);
  CHECK(m.m.norm() == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(std::abs(m.m.dot(h.col(0))) / h.norm() == doctest::Approx(1.0).epsilon(1e-10));
  CHECK_THROWS_AS(matched_filter_principal(CMatrix::Zero(4, 4)), DomainError);
}

TEST_CASE("principal direction ignores column order") {
  auto rng = make_stream(14, 0);
  const CMatrix Y = complex_gaussian(rng, 30, 20, 1.0);
  std::vector<int> perm(20);
  std::iota(perm.begin(), perm.end(), 0);
  std::shuffle(perm.begin(), perm.end(), rng);
  CMatrix Yp(30, 20);
  for (int j = 0; j < 20; ++j) Yp.col(j) = Y.col(perm[static_cast<std::size_t>(j)]);
  const CVector a = matched_filter_principal(Y).m;
  const CVector b = matched_filter_principal(Yp).m;
  CHECK(std::abs(a.dot(b)) == doctest::Approx(1.0).epsilon(1e-10));
}

namespace {

double alignment(int R, int C, double P, double W, std::uint64_t seed) {
  const SystemParams s = system(R, 1, C, 0, P, W, 0.0);
  PilotConfig none;
  none.pilot_matrix.resize(1, 0);
  const ChannelRealization rz = sample_realization(s, none, seed, DataLaw::gaussian);
  const CVector m = matched_filter_principal(assemble_received(rz)).m;
  return std::abs(m.dot(rz.H.col(0))) / rz.H.norm();
}

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  return v[v.size() / 2];
}

}  // namespace

TEST_CASE("single-user principal direction aligns with the channel") {
  // The spike P R C sits far above the noise edge W (sqrt(R) + sqrt(C))^2 here.
  std::vector<double> a;
  for (std::uint64_t seed = 0; seed < 50; ++seed) a.push_back(alignment(300, 100, 1.0, 1.0, seed));
  CHECK(std::accumulate(a.begin(), a.end(), 0.0) / a.size() >= 0.99);
}

TEST_CASE("median alignment does not decrease with R") {
  // Alignment is close to 1 at every R, so sampling noise of the median is tiny
  // compared with the growth with R at this SNR.
  double prev = 0.0;
  for (int R : {50, 100, 200, 400}) {
    std::vector<double> a;
    for (std::uint64_t seed = 0; seed < 41; ++seed) a.push_back(alignment(R, 100, 0.1, 1.0, seed));
    const double med = median(a);
    CHECK(med >= prev);
    prev = med;
  }
}
