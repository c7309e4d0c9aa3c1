// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The sparsetf Authors

#pragma once

#include "sparsetf/common.hpp"
#include "sparsetf/transforms.hpp"

#include <cstdint>

namespace sparsetf {

struct MeasurementSet {
  Index total = 0;
  IndexList available;
  cvec values;

  IndexList missing() const;
};

// Rows of the inverse transform at the available positions, plus the matching
// forward-transform columns used as the correlation proxy.
struct PartialMatrix {
  Kind kind = Kind::DFT;
  Index N = 0;
  Index rows2d = 1;
  IndexList support;
  cmat A;      // N_A x N
  cmat proxy;  // N x N_A

  Index n_available() const { return A.rows(); }
};

IndexList sample_support(Index N, Index N_A, std::uint64_t seed);

// Permutation of 0..N-1 whose first `prefix` entries are uniformly shuffled.
IndexList random_permutation(Index N, std::uint64_t seed, Index prefix);

MeasurementSet measure(const cvec& x, const IndexList& support);

PartialMatrix build_partial_matrix(const TransformOperator& op, const IndexList& support);

// Forward transform of the zero-filled signal.
cvec initial_estimate(const PartialMatrix& A, const cvec& y);

double coherence_index(const PartialMatrix& A);
double welch_bound(Index N, Index N_A);
bool verify_recovery_condition(Index K, double mu);

}  // namespace sparsetf
