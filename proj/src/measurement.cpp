// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The sparsetf Authors

#include "sparsetf/measurement.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>

namespace sparsetf {

IndexList MeasurementSet::missing() const {
  IndexList out;
  std::size_t j = 0;
  for (Index n = 0; n < total; ++n) {
    if (j < available.size() && available[j] == n) {
      ++j;
      continue;
    }
    out.push_back(n);
  }
  return out;
}

IndexList random_permutation(Index N, std::uint64_t seed, Index prefix) {
  if (N < 0 || prefix < 0 || prefix > N) throw InvalidArgument("random_permutation: invalid sizes");
  IndexList idx(static_cast<std::size_t>(N));
  std::iota(idx.begin(), idx.end(), Index{0});
  std::mt19937_64 rng(seed);
  // Partial Fisher-Yates; std::shuffle's draw sequence is implementation-defined.
  for (Index i = 0; i < prefix; ++i) {
    const std::uint64_t span = static_cast<std::uint64_t>(N - i);
    const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() - std::numeric_limits<std::uint64_t>::max() % span;
    std::uint64_t r;
    do {
      r = rng();
    } while (r >= limit);
    std::swap(idx[static_cast<std::size_t>(i)], idx[static_cast<std::size_t>(i + static_cast<Index>(r % span))]);
  }
  return idx;
}

IndexList sample_support(Index N, Index N_A, std::uint64_t seed) {
  if (N_A < 1 || N_A > N)
    throw InvalidArgument("sample_support: need 1 <= N_A <= N (N=" + std::to_string(N) +
                          ", N_A=" + std::to_string(N_A) + ")");
  IndexList idx = random_permutation(N, seed, N_A);
  idx.resize(static_cast<std::size_t>(N_A));
  std::sort(idx.begin(), idx.end());
  return idx;
}

MeasurementSet measure(const cvec& x, const IndexList& support) {
  MeasurementSet m;
  m.total = x.size();
  m.available = support;
  m.values.resize(static_cast<Index>(support.size()));
  for (std::size_t i = 0; i < support.size(); ++i) {
    if (support[i] < 0 || support[i] >= x.size()) throw InvalidArgument("measure: support index out of range");
    m.values(static_cast<Index>(i)) = x(support[i]);
  }
  return m;
}

PartialMatrix build_partial_matrix(const TransformOperator& op, const IndexList& support) {
  if (support.empty()) throw InvalidArgument("build_partial_matrix: empty support");
  const Index N = op.size();
  PartialMatrix pm;
  pm.kind = op.kind;
  pm.N = N;
  pm.rows2d = op.rows;
  pm.support = support;
  pm.A.resize(static_cast<Index>(support.size()), N);
  pm.proxy.resize(N, static_cast<Index>(support.size()));
  for (std::size_t i = 0; i < support.size(); ++i) {
    const Index n = support[i];
    if (n < 0 || n >= N) throw InvalidArgument("build_partial_matrix: index " + std::to_string(n) + " out of range");
    pm.A.row(static_cast<Index>(i)) = op.inverse.row(n);
    pm.proxy.col(static_cast<Index>(i)) = op.forward.col(n);
  }
  return pm;
}

cvec initial_estimate(const PartialMatrix& A, const cvec& y) {
  if (y.size() != A.n_available()) throw InvalidArgument("initial_estimate: measurement length mismatch");
  return A.proxy * y;
}

double coherence_index(const PartialMatrix& A) {
  const Index N = A.A.cols();
  if (N < 2) throw InvalidArgument("coherence_index: need at least two columns");
  cmat B = A.A;
  for (Index k = 0; k < N; ++k) {
    const double nrm = B.col(k).norm();
    if (nrm == 0.0) throw NumericFailure("coherence_index: zero-norm column " + std::to_string(k));
    B.col(k) /= nrm;
  }
  const cmat G = B.adjoint() * B;
  double mu = 0.0;
  for (Index j = 0; j < N; ++j)
    for (Index k = 0; k < N; ++k)
      if (j != k) mu = std::max(mu, std::abs(G(j, k)));
  return mu;
}

double welch_bound(Index N, Index N_A) {
  if (N < 2 || N_A < 1) throw InvalidArgument("welch_bound: need N >= 2, N_A >= 1");
  return std::sqrt(static_cast<double>(N - N_A) / (static_cast<double>(N_A) * static_cast<double>(N - 1)));
}

bool verify_recovery_condition(Index K, double mu) {
  if (mu < 0.0) throw InvalidArgument("verify_recovery_condition: mu must be nonnegative");
  if (mu == 0.0) return true;
  return static_cast<double>(K) < 0.5 * (1.0 + 1.0 / mu);
}

}  // namespace sparsetf
