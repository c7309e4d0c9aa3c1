// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The sparsetf Authors

#pragma once

#include "sparsetf/common.hpp"
#include "sparsetf/transforms.hpp"

#include <algorithm>
#include <cstdint>
#include <functional>
#include <string>
#include <thread>
#include <vector>

namespace sparsetf {

// Sparse model in one transform domain. For DCT2D, positions are flattened
// row-major (p * N + q) and rows holds M.
struct SparseModel {
  Kind kind = Kind::DFT;
  Index rows = 1;
  Index N = 0;
  rvec amplitudes;
  IndexList positions;

  Index size() const { return kind == Kind::DCT2D ? rows * N : N; }
  Index K() const { return static_cast<Index>(positions.size()); }
};

struct VarianceReport {
  double variance = 0.0;
  double mean = 0.0;
  bool at_component = false;
  bool realization_specific = false;
  std::string scale_convention;
};

VarianceReport missing_sample_variance(const SparseModel& model, Index N_A, Index at,
                                       const HermiteBasis* basis = nullptr, const IndexList* support = nullptr);

// Variance of sum_{n in random N_A-subset} w(n) for uniform sampling without replacement.
double finite_population_variance(const cvec& w, Index N_A);

// Exact variance of coefficient k of the zero-filled forward transform of x.
double exact_sampling_variance(const TransformOperator& op, const cvec& x, Index k, Index N_A);

// Mean of the 2D-DCT closed form over the non-component positions.
double dct2d_average_variance(const SparseModel& model, Index N_A);

// Exact mean over the non-component positions of the DHT1 missing-sample
// variance, including cross terms between components.
double dht1_noise_average_variance(const SparseModel& model, Index N_A, const HermiteBasis* basis = nullptr);

// Closed-form approximation using the (MN - 21/4) factor.
double dct2d_average_variance_approx(const SparseModel& model, Index N_A);

// Noise-position variance sigma^2_csN in the normalized convention.
double normalized_noise_variance(Index N, Index N_A, double sum_a2);

struct AwgnReport {
  rvec per_index;  // gamma(p,N) * sigma^2
  double mean = 0.0;  // xi(N) * sigma^2
};

AwgnReport awgn_dht1_variance(const HermiteBasis& basis, double sigma2);

enum class ThresholdForm { Log, Erf };

// Threshold T with P(all N - K noise magnitudes below T) = P_NN.
double detection_threshold(double sigma, Index N, Index K, double P_NN, ThresholdForm form);
// Same as the erf form but with erf^{-1} computed by bisection.
double detection_threshold_exact(double sigma, Index N, Index K, double P_NN);

enum class PeMethod { Exact, Approximation };

struct ProbabilityReport {
  rvec pe;
  PeMethod method = PeMethod::Exact;
};

ProbabilityReport detection_error_probability(const SparseModel& model, Index N_A, PeMethod method,
                                              const HermiteBasis* basis = nullptr);

double folded_normal_pdf(double x, double mean, double sigma);
double half_normal_pdf(double x, double sigma);

// Adaptive Gauss-Kronrod (7/15) quadrature on [a, b].
double integrate(const std::function<double(double)>& f, double a, double b, double abs_tol = 1e-10,
                 int max_depth = 40);

double nonsparse_error_energy(Index K, Index N_total, Index N_A, double unrec_energy, double sigma2_eps,
                              bool two_dimensional = false);

double snr_after_reconstruction(double snr_in_db, Index K, Index N_A);

struct SparsityBound {
  Index K = 0;
  double bound = 0.0;
  bool unbounded = false;
};

SparsityBound sparsity_bound(Index N, Index N_A, double c);

struct McStat {
  double mean = 0.0;
  double variance = 0.0;
  double std_error = 0.0;
};

struct McResult {
  Index trials = 0;
  std::vector<McStat> stats;
};

using McEstimator = std::function<rvec(std::uint64_t trial_seed, Index trial)>;

// Runs trials with seeds derive_seed(seed, t); per-trial outputs are reduced
// in trial order, so the result is independent of the thread count.
McResult mc_experiment(const McEstimator& estimator, Index trials, std::uint64_t seed, unsigned threads = 0);

// Same, returning the raw per-trial outputs.
std::vector<rvec> mc_collect(const McEstimator& estimator, Index trials, std::uint64_t seed, unsigned threads = 0);

}  // namespace sparsetf
