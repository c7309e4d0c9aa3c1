// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The sparsetf Authors

#pragma once

#include "sparsetf/common.hpp"
#include "sparsetf/measurement.hpp"
#include "sparsetf/transforms.hpp"

#include <string>
#include <vector>

namespace sparsetf {

struct ReconConfig {
  double eps = 1e-10;        // residual norm tolerance
  int max_iter = 100;
  int r = 1;                 // atoms per OMP iteration
  Index K = 0;               // CoSaMP sparsity
  double P_NN = 0.99;
  double delta = 1e-20;      // squared-residual stop for iterative threshold
  double mu_step = 1.0;
  double delta_init = 0.0;   // 0 selects max |x0|
  double delta_shrink = 3.0;
  double T_stop_db = -100.0;
  double angle_deg = 170.0;
};

enum class ReconStatus { Converged, MaxIter, Underdetermined, NoDetection, EmptySupport, Stalled };

std::string to_string(ReconStatus s);

struct ReconResult {
  cvec coefficients;
  IndexList support;
  double residual_norm = 0.0;
  int iterations = 0;
  std::vector<double> thresholds;
  ReconStatus status = ReconStatus::Converged;
};

cvec ls_on_support(const PartialMatrix& A, const cvec& y, const IndexList& support);

ReconResult omp(const PartialMatrix& A, const cvec& y, const ReconConfig& cfg = {});
ReconResult cosamp(const PartialMatrix& A, const cvec& y, Index K, const ReconConfig& cfg = {});

// Noise variance of the initial estimate inferred from the data (or a residual).
double estimate_cs_noise_variance(const PartialMatrix& A, const cvec& y);
double reconstruction_threshold(const PartialMatrix& A, const cvec& y, double P_NN);

ReconResult threshold_single(const PartialMatrix& A, const cvec& y, double P_NN = 0.99);
ReconResult threshold_iterative(const PartialMatrix& A, const cvec& y, const ReconConfig& cfg = {});

struct GradientResult {
  cvec x;
  int iterations = 0;
  int epochs = 0;
  double Tr_db = 0.0;
  bool converged = false;
  std::vector<double> measure_trace;  // l1 measure at the end of each Delta epoch
};

GradientResult gradient_recon(const cvec& x_with_gaps, const IndexList& missing, const TransformOperator& op,
                              const ReconConfig& cfg = {}, int max_iter = 20000);

}  // namespace sparsetf
