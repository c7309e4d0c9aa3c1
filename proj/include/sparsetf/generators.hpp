// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The sparsetf Authors

#pragma once

#include "sparsetf/common.hpp"
#include "sparsetf/tfa.hpp"
#include "sparsetf/transforms.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace sparsetf {

struct SparseSignal {
  Kind kind = Kind::DFT;
  Index rows = 1;
  cvec coefficients;
  cvec x;
  IndexList support;
};

// x = inverse transform of a coefficient vector with the given amplitudes at
// the given positions. Random phases are drawn for DFT only when requested.
// DFT amplitudes are time-domain amplitudes (coefficient N * A).
SparseSignal sparse_signal(Kind kind, Index N, const rvec& amplitudes, const IndexList& positions,
                           bool random_phase = false, std::uint64_t seed = 0, Index rows = 1);

// K random positions, amplitudes uniform in [a_lo, a_hi].
SparseSignal random_sparse_signal(Kind kind, Index N, Index K, std::uint64_t seed, double a_lo = 0.5,
                                  double a_hi = 1.5, Index rows = 1);

// 3 sin(5 pi t) exp(-N^2 t^2 / (2 sigma0^2)) at t = m / N, m centered on zero.
Signal gaussian_sine_signal(Index N = 77, double sigma0 = 2.1);

struct MultivariateModel {
  std::string name;
  MultivariateSignal channels;
  std::vector<cvec> components;  // unit-phase waveforms
  rvec t;
};

// Real two-channel signal whose two conjugate chirp halves cross at t = 0.
MultivariateModel crossing_pair(std::uint64_t seed, double noise_sigma = 0.0);
// Two-channel signal with two nonlinear FM components.
MultivariateModel bivariate_two(std::uint64_t seed, double noise_sigma = 0.0);
// Three-channel signal with five components, three of them crossing.
MultivariateModel trivariate_five(std::uint64_t seed, double noise_sigma = 0.0);

MultivariateModel multivariate_model(const std::string& name, std::uint64_t seed, double noise_sigma = 0.0);

// Complex (or real when the input is real) white Gaussian noise scaled to the
// requested SNR in dB relative to the signal energy.
cvec add_awgn(const cvec& x, double snr_db, std::uint64_t seed, bool complex_noise = false);
// Per-component standard deviation sigma; complex noise has sigma on both parts.
cvec white_noise(Index N, double sigma, std::uint64_t seed, bool complex_noise);

double snr_db(const cvec& reference, const cvec& estimate);

struct BlockFrame {
  Index Nb = 500;
  rvec window;  // Hann, w(n) + w(n + Nb/2) = 1
};

BlockFrame block_frame(Index Nb);
std::vector<cvec> frame_blocks(const cvec& x, const BlockFrame& f);
cvec merge_blocks(const std::vector<cvec>& blocks, const BlockFrame& f, Index length);
// Samples covered by two overlapping blocks (plus any single full-weight region).
Index frame_interior_begin(const BlockFrame& f);
Index frame_interior_end(const BlockFrame& f, Index length);

}  // namespace sparsetf
