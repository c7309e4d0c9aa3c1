// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The sparsetf Authors

#include "sparsetf/measurement.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <set>

using namespace sparsetf;

TEST_CASE("sample_support is sorted, unique, in range and seeded") {
  const IndexList a = sample_support(100, 37, 9);
  CHECK(a.size() == 37);
  CHECK(std::is_sorted(a.begin(), a.end()));
  CHECK(std::set<Index>(a.begin(), a.end()).size() == 37);
  CHECK(a.front() >= 0);
  CHECK(a.back() < 100);
  CHECK(sample_support(100, 37, 9) == a);
  CHECK(sample_support(100, 37, 10) != a);
  CHECK(sample_support(5, 5, 1) == IndexList{0, 1, 2, 3, 4});
  CHECK_THROWS_AS(sample_support(10, 0, 1), InvalidArgument);
  CHECK_THROWS_AS(sample_support(10, 11, 1), InvalidArgument);
}

TEST_CASE("random_permutation is a permutation and its prefix is uniform") {
  const IndexList p = random_permutation(20, 4, 20);
  IndexList s = p;
  std::sort(s.begin(), s.end());
  for (Index i = 0; i < 20; ++i) CHECK(s[std::size_t(i)] == i);

  // Each index lands in the first slot with probability 1/N.
  const Index N = 6, trials = 60000;
  std::vector<double> count(N, 0.0);
  for (Index t = 0; t < trials; ++t) count[std::size_t(random_permutation(N, derive_seed(77, t), 1)[0])] += 1.0;
  for (double c : count) CHECK(std::abs(c / trials - 1.0 / N) < 0.01);
}

TEST_CASE("measure and missing partition the index set") {
  cvec x(6);
  x << 1, 2, 3, 4, 5, 6;
  const MeasurementSet m = measure(x, {0, 2, 5});
  CHECK(m.values(1) == cplx(3.0));
  CHECK(m.missing() == IndexList{1, 3, 4});
  CHECK_THROWS_AS(measure(x, {6}), InvalidArgument);
}

TEST_CASE("partial matrix rows reproduce the available samples") {
  const Index N = 32;
  const TransformOperator op = build_transform(Kind::DCT1D, N);
  const IndexList sup = sample_support(N, 12, 3);
  const PartialMatrix A = build_partial_matrix(op, sup);
  CHECK(A.n_available() == 12);
  cvec X = cvec::Zero(N);
  X(3) = 2.0;
  X(17) = -1.0;
  const cvec x = op.inverse * X;
  const MeasurementSet m = measure(x, sup);
  CHECK((A.A * X - m.values).norm() < 1e-12);
  // Zero-filled forward transform.
  cvec xz = cvec::Zero(N);
  for (std::size_t i = 0; i < sup.size(); ++i) xz(sup[i]) = x(sup[i]);
  CHECK((initial_estimate(A, m.values) - op.forward * xz).norm() < 1e-12);
  CHECK_THROWS_AS(initial_estimate(A, cvec::Zero(3)), InvalidArgument);
}

TEST_CASE("coherence respects the Welch bound") {
  for (Kind k : {Kind::DFT, Kind::DCT1D, Kind::DHT1}) {
    const Index N = 64, NA = 24;
    const PartialMatrix A = build_partial_matrix(build_transform(k, N), sample_support(N, NA, 5));
    const double mu = coherence_index(A);
    CAPTURE(to_string(k));
    CHECK(mu >= welch_bound(N, NA) - 1e-12);
    CHECK(mu <= 1.0 + 1e-12);
  }
  const PartialMatrix full = build_partial_matrix(build_transform(Kind::DFT, 16), sample_support(16, 16, 1));
  CHECK(coherence_index(full) < 1e-12);
  CHECK(welch_bound(16, 16) == 0.0);
}

TEST_CASE("recovery condition") {
  CHECK(verify_recovery_condition(2, 0.2));
  CHECK_FALSE(verify_recovery_condition(3, 0.2));
  CHECK(verify_recovery_condition(100, 0.0));
  CHECK_THROWS_AS(verify_recovery_condition(1, -0.1), InvalidArgument);
}
