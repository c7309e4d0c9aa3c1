// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The sparsetf Authors

#pragma once

#include "sparsetf/common.hpp"
#include "sparsetf/transforms.hpp"

#include <vector>

namespace sparsetf {

struct ScaleOptConfig {
  double mu = 0.05;
  double eps = 1e-10;
  int max_iter = 0;  // 0 selects the signal length
};

struct ScaleOptResult {
  double lambda = 0.0;   // in units of the sampling step
  double measure = 0.0;  // l1 measure at lambda
  int iterations = 0;
  bool converged = false;
  bool clamped = false;
  std::vector<double> measure_trace;
  std::vector<double> lambda_trace;
};

// l1 norm of the DHT1 (sigma = 1) of x resampled at lambda * t_n, lambda in units of dt.
double scale_measure(const Signal& x_uniform, double lambda_dt);

// Largest admissible lambda (units of dt) from the 99%-energy bandwidth.
double scale_upper_bound(const Signal& x_uniform);

ScaleOptResult optimize_scale(const Signal& x_uniform, const ScaleOptConfig& cfg = {});

struct ShiftOptResult {
  Index shift = 0;
  ScaleOptResult scale;
  std::vector<double> per_shift_measure;  // ordered l = -l_max..l_max
};

// Integer roll with zero fill: out(n) = x(n - l).
cvec shift_zero_fill(const cvec& x, Index l);

ShiftOptResult optimize_shift(const Signal& x_uniform, Index l_max = 3, const ScaleOptConfig& cfg = {});

cvec denoise_hard_threshold(const cvec& x, double sigma_eps, double alpha, Kind domain);

struct CompressionResult {
  Index L = 0;
  IndexList kept;
  cvec approx;
  double E = 0.0;
  rvec E_curve;  // E(L) for L = 0..N
};

CompressionResult compress_keep_largest(const cvec& x, double target_E = 0.10, Kind domain = Kind::DHT1);

}  // namespace sparsetf
