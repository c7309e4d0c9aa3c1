// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The sparsetf Authors

#pragma once

#include "sparsetf/common.hpp"

#include <string>
#include <vector>

namespace sparsetf {

enum class TfrKind { STFT, SPEC, PWD, SM };
enum class WindowType { Rectangular, Hann, Hamming };

std::string to_string(TfrKind kind);
TfrKind tfr_kind_from_string(const std::string& name);
std::string to_string(WindowType w);
WindowType window_from_string(const std::string& name);

// Samples w(m) for m = -Nw/2 .. Nw/2 - 1.
rvec window_values(WindowType type, Index Nw);

// values has one row per frequency bin and one column per time instant.
struct TFRMatrix {
  TfrKind kind = TfrKind::STFT;
  cmat values;
  WindowType window = WindowType::Rectangular;
  Index window_length = 0;
  Index hop = 1;
  Index L_d = 0;

  Index bins() const { return values.rows(); }
  Index frames() const { return values.cols(); }
  bool quadratic() const { return kind != TfrKind::STFT; }
  // Real part for quadratic kinds, magnitude for the STFT.
  rmat real_values() const;
};

// Column j is centered at n = j * hop; samples outside [0, N) are zero.
// Bin k corresponds to the normalized frequency 2*pi*k/Nw (wrapped).
TFRMatrix stft(const cvec& x, WindowType window, Index Nw, Index hop = 1);
TFRMatrix spectrogram(const cvec& x, WindowType window, Index Nw, Index hop = 1);

// Pseudo-Wigner distribution over lags |m| < M/2. Bin k corresponds to
// omega = pi*k/M wrapped into [-pi/2, pi/2); x should be oversampled by two.
TFRMatrix wigner(const cvec& x, Index M, WindowType window = WindowType::Rectangular);

TFRMatrix smethod(const TFRMatrix& stft_tfr, Index L_d);

double concentration_measure(const TFRMatrix& tfr);

struct IfEstimate {
  IndexList bin;
  bool degenerate = false;
};

IfEstimate estimate_if(const TFRMatrix& tfr);

using MultivariateSignal = std::vector<cvec>;

// R(n1, n2) = sum over channels of x(n1) conj(x(n2)).
cmat mv_autocorrelation(const MultivariateSignal& x);

// Autocorrelation obtained by inverting a multivariate S-method: the outer
// products are smoothed along the diagonal with a lowpass kernel of cutoff
// theta_c (radians) and half-length S. Cross-terms between components that
// are separated in frequency by more than about 2*theta_c are suppressed.
cmat mv_autocorrelation_smethod(const MultivariateSignal& x, double theta_c, Index S);

struct EigenPairs {
  rvec values;   // descending
  cmat vectors;  // columns match values
};

EigenPairs hermitian_eigen(const cmat& R);

Index count_components(const rvec& eigenvalues_desc, double rel_threshold = 1e-4);

enum class RSource { OuterProduct, SMethod };

struct DecomposeConfig {
  double delta = 0.1;
  double eps = 1e-8;
  TfrKind tfr = TfrKind::SPEC;
  WindowType window = WindowType::Hann;
  Index window_length = 0;  // 0 selects N/4 rounded to even
  Index L_d = 1;            // S-method width when tfr == SM
  Index P = 0;              // 0 counts components from the eigenvalues
  double rel_threshold = 1e-4;
  double beta_tol = 1e-4;
  int max_outer = 20;
  int max_inner = 2000;
  RSource r_source = RSource::OuterProduct;
  double sm_theta = kPi / 8.0;
  Index sm_half = 0;  // 0 selects N/4
};

struct ConcentrationMinResult {
  cvec beta;
  cvec y;  // unit-energy combination
  int iterations = 0;
  bool converged = false;
  std::vector<double> measure_trace;  // accepted measures
};

// Minimizes the concentration measure of the normalized combination of Q
// columns with beta_i fixed to one.
ConcentrationMinResult minimize_concentration(const cmat& Q, Index i, const DecomposeConfig& cfg);

// q_k <- (q_k - s q_i) / sqrt(1 - |s|^2), s = q_i^H q_k, for k > i.
void deflate(cmat& Q, Index i);

struct DecompositionResult {
  Index P = 0;
  cmat components;  // unit-energy columns
  rvec eigenvalues;
  int outer_iterations = 0;
  int updates = 0;
  bool converged = false;
};

DecompositionResult decompose(const MultivariateSignal& x, const DecomposeConfig& cfg = {});

// Largest |<q, x_true/|x_true|>| over components q, for each true component.
std::vector<double> match_components(const cmat& components, const std::vector<cvec>& truth);

}  // namespace sparsetf
