// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The sparsetf Authors

#include "sparsetf/theory.hpp"

#include <doctest.h>

#include <cmath>

using namespace sparsetf;

namespace {

// Variance of coefficient k of the zero-filled forward transform, by enumerating
// every N_A-subset of the samples.
double brute_force_variance(const TransformOperator& op, const cvec& x, Index k, Index N_A) {
  const Index N = op.size();
  std::vector<cplx> values;
  for (std::uint32_t mask = 0; mask < (1u << N); ++mask) {
    if (__builtin_popcount(mask) != N_A) continue;
    cplx acc = 0.0;
    for (Index n = 0; n < N; ++n)
      if (mask & (1u << n)) acc += op.forward(k, n) * x(n);
    values.push_back(acc);
  }
  cplx mean = 0.0;
  for (cplx v : values) mean += v;
  mean /= double(values.size());
  double var = 0.0;
  for (cplx v : values) var += std::norm(v - mean);
  return var / double(values.size());
}

SparseModel model(Kind kind, Index N, std::vector<double> amps, IndexList pos, Index rows = 1) {
  SparseModel m{kind, rows, N, rvec::Map(amps.data(), Index(amps.size())), std::move(pos)};
  return m;
}

cvec signal_of(const SparseModel& m, const TransformOperator& op) {
  cvec X = cvec::Zero(op.size());
  for (Index l = 0; l < m.K(); ++l) X(m.positions[std::size_t(l)]) = m.amplitudes(l) * (m.kind == Kind::DFT ? double(m.N) : 1.0);
  return op.inverse * X;
}

}  // namespace

TEST_CASE("finite-population variance matches subset enumeration") {
  for (Kind kind : {Kind::DFT, Kind::DCT1D, Kind::DHT1, Kind::DHT2}) {
    const Index N = 10;
    const TransformOperator op = build_transform(kind, N);
    const SparseModel m = model(kind, N, {1.0, 0.6}, {2, 7});
    const cvec x = signal_of(m, op);
    for (Index NA : {1, 4, 9})
      for (Index k : {0, 2, 5}) {
        CAPTURE(to_string(kind));
        CAPTURE(NA);
        CAPTURE(k);
        CHECK(exact_sampling_variance(op, x, k, NA) ==
              doctest::Approx(brute_force_variance(op, x, k, NA)).epsilon(1e-10).scale(1.0));
      }
  }
  CHECK(finite_population_variance(cvec::Ones(5), 3) == 0.0);
  CHECK_THROWS_AS(finite_population_variance(cvec::Ones(5), 6), InvalidArgument);
}

// True when c_k^2 c_a c_b has a nonzero mean for some component pair, i.e. the
// DCT closed form misses a cross term at k.
bool dct_cross_term(Index k, const IndexList& pos, Index N) {
  if (k == 0) return false;
  for (std::size_t i = 0; i < pos.size(); ++i)
    for (std::size_t j = i + 1; j < pos.size(); ++j) {
      const Index s = pos[i] + pos[j], d = std::abs(pos[i] - pos[j]);
      for (Index v : {s, d, 2 * N - s, 2 * N - d})
        if (2 * k == v) return true;
    }
  return false;
}

TEST_CASE("DFT closed form is exact at every position") {
  const Index N = 32;
  const TransformOperator op = build_transform(Kind::DFT, N);
  const SparseModel m = model(Kind::DFT, N, {1.0, 0.7, 0.5, 0.3}, {0, 5, 20, 27});
  const cvec x = signal_of(m, op);
  for (Index NA : {8, 16, 30})
    for (Index k = 0; k < N; ++k) {
      CAPTURE(NA);
      CAPTURE(k);
      CHECK(missing_sample_variance(m, NA, k).variance ==
            doctest::Approx(exact_sampling_variance(op, x, k, NA)).epsilon(1e-9).scale(1e-12));
    }
}

TEST_CASE("DCT closed form is exact away from cross-term positions") {
  const Index N = 32;
  const TransformOperator op = build_transform(Kind::DCT1D, N);
  // Includes k = 0 and a pair with k + k_l = N.
  const IndexList pos{0, 5, 20, 27};
  const SparseModel m = model(Kind::DCT1D, N, {1.0, 0.7, 0.5, 0.3}, pos);
  const cvec x = signal_of(m, op);
  Index checked = 0;
  for (Index NA : {8, 16, 30})
    for (Index k = 0; k < N; ++k) {
      if (dct_cross_term(k, pos, N)) continue;
      CAPTURE(NA);
      CAPTURE(k);
      ++checked;
      CHECK(missing_sample_variance(m, NA, k).variance ==
            doctest::Approx(exact_sampling_variance(op, x, k, NA)).epsilon(1e-9).scale(1e-12));
    }
  CHECK(checked > 60);
  for (Index p : {0, 16, 31}) {
    const SparseModel one = model(Kind::DCT1D, N, {1.2}, {p});
    const cvec x1 = signal_of(one, op);
    for (Index k = 0; k < N; ++k)
      CHECK(missing_sample_variance(one, 12, k).variance ==
            doctest::Approx(exact_sampling_variance(op, x1, k, 12)).epsilon(1e-9).scale(1e-12));
  }
}

TEST_CASE("2D DCT closed form is exact for one component") {
  const Index M = 4, N = 6;
  const TransformOperator op = build_transform_2d(M, N);
  for (Index pos : {Index(0), Index(2 * N + 3), Index(3 * N + 1)}) {
    const SparseModel m = model(Kind::DCT2D, N, {0.8}, {pos}, M);
    const cvec x = signal_of(m, op);
    for (Index k = 0; k < M * N; ++k) {
      CAPTURE(pos);
      CAPTURE(k);
      CHECK(missing_sample_variance(m, 11, k).variance ==
            doctest::Approx(exact_sampling_variance(op, x, k, 11)).epsilon(1e-9).scale(1e-12));
    }
  }
}

TEST_CASE("2D DCT noise average tracks the exact average on a 16x20 block") {
  const Index M = 16, N = 20;
  const TransformOperator op = build_transform_2d(M, N);
  const SparseModel m = model(Kind::DCT2D, N, {1.0, 0.7, 0.5}, {5, 45, 130}, M);
  const cvec x = signal_of(m, op);
  double acc = 0.0;
  for (Index k = 0; k < M * N; ++k)
    if (k != 5 && k != 45 && k != 130) acc += exact_sampling_variance(op, x, k, 160);
  acc /= double(M * N - 3);
  CHECK(dct2d_average_variance(m, 160) == doctest::Approx(acc).epsilon(0.02));
  CHECK(dct2d_average_variance_approx(m, 160) == doctest::Approx(acc).epsilon(0.05));
}

TEST_CASE("DHT1 single component: closed form exact at the component") {
  const Index N = 48;
  const TransformOperator op = build_transform(Kind::DHT1, N);
  const HermiteBasis b = hermite_basis(N);
  for (Index p : {0, 3, 20, 47}) {
    const SparseModel m = model(Kind::DHT1, N, {1.3}, {p});
    const cvec x = signal_of(m, op);
    for (Index NA : {12, 30}) {
      CAPTURE(p);
      CAPTURE(NA);
      CHECK(missing_sample_variance(m, NA, p, &b).variance ==
            doctest::Approx(exact_sampling_variance(op, x, p, NA)).epsilon(1e-8));
    }
  }
}

TEST_CASE("DHT1 noise average equals the mean exact variance over noise positions") {
  const Index N = 40;
  const TransformOperator op = build_transform(Kind::DHT1, N);
  const SparseModel m = model(Kind::DHT1, N, {1.0, 0.7, 0.5}, {2, 11, 30});
  const cvec x = signal_of(m, op);
  for (Index NA : {10, 25}) {
    double acc = 0.0;
    for (Index k = 0; k < N; ++k)
      if (k != 2 && k != 11 && k != 30) acc += exact_sampling_variance(op, x, k, NA);
    CHECK(dht1_noise_average_variance(m, NA) == doctest::Approx(acc / double(N - 3)).epsilon(1e-9));
  }
}

TEST_CASE("DHT2 variance delegates to the exact finite-population form") {
  const SparseModel m = model(Kind::DHT2, 16, {1.0, 0.5}, {1, 6});
  const TransformOperator op = build_transform(Kind::DHT2, 16);
  CHECK(missing_sample_variance(m, 5, 9).variance == doctest::Approx(exact_sampling_variance(op, signal_of(m, op), 9, 5)));
}

TEST_CASE("noise variance and sparsity bounds for the standard example") {
  // N = 256, N_A = 128, squared amplitudes {1, .5, .25}.
  const double s2 = normalized_noise_variance(256, 128, 1.75);
  CHECK(s2 == doctest::Approx(0.25 * 1.75 / 255.0));
  CHECK(4.0 * std::sqrt(s2) == doctest::Approx(0.16568).epsilon(1e-4));
  const SparsityBound b4 = sparsity_bound(256, 128, 4.0);
  const SparsityBound b3 = sparsity_bound(256, 128, 3.0);
  CHECK(b4.K == 15);
  CHECK(b3.K == 28);
  CHECK(sparsity_bound(64, 64, 3.0).unbounded);
  CHECK_THROWS_AS(sparsity_bound(64, 65, 3.0), InvalidArgument);
}

TEST_CASE("detection thresholds satisfy their defining probability") {
  const double sigma = 0.3, P = 0.99;
  const Index N = 200, K = 5;
  const double tl = detection_threshold(sigma, N, K, P, ThresholdForm::Log);
  CHECK(std::pow(1.0 - std::exp(-tl * tl / (sigma * sigma)), double(N - K)) == doctest::Approx(P).epsilon(1e-12));
  const double te = detection_threshold_exact(sigma, N, K, P);
  CHECK(std::pow(std::erf(te / (std::sqrt(2.0) * sigma)), double(N - K)) == doctest::Approx(P).epsilon(1e-12));
  CHECK(detection_threshold(sigma, N, K, P, ThresholdForm::Erf) == doctest::Approx(te).epsilon(2e-3));
  CHECK(detection_threshold(0.0, N, K, P, ThresholdForm::Erf) == 0.0);
  CHECK_THROWS_AS(detection_threshold(sigma, N, K, 1.0, ThresholdForm::Log), InvalidArgument);
}

TEST_CASE("densities and quadrature") {
  CHECK(integrate([](double x) { return std::sin(x); }, 0.0, kPi) == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(integrate([](double x) { return std::exp(-x); }, 1.0, 0.0) == doctest::Approx(std::exp(-1.0) - 1.0));
  for (double mean : {0.0, 0.4, 3.0}) {
    const double mass = integrate([&](double x) { return folded_normal_pdf(x, mean, 0.7); }, 0.0, 20.0);
    CHECK(mass == doctest::Approx(1.0).epsilon(1e-9));
  }
  CHECK(half_normal_pdf(0.0, 2.0) == doctest::Approx(std::sqrt(2.0 / kPi) / 2.0));
  CHECK(folded_normal_pdf(-1.0, 0.0, 1.0) == 0.0);
}

TEST_CASE("detection-error probability properties") {
  const SparseModel m = model(Kind::DHT1, 200, {1.0, 0.7, 0.5, 0.3, 0.2}, {10, 40, 80, 120, 160});
  for (PeMethod method : {PeMethod::Exact, PeMethod::Approximation}) {
    rvec prev = rvec::Ones(5);
    for (Index NA : {56, 108, 176}) {
      const rvec pe = detection_error_probability(m, NA, method).pe;
      for (Index q = 0; q < 5; ++q) {
        CHECK(pe(q) >= 0.0);
        CHECK(pe(q) <= 1.0);
        CHECK(pe(q) <= prev(q) + 1e-12);
        if (q > 0) CHECK(pe(q) >= pe(q - 1) - 1e-12);
      }
      prev = pe;
    }
    CHECK(detection_error_probability(m, 200, method).pe.maxCoeff() == 0.0);
  }
}

TEST_CASE("DFT detection-error probability uses Rayleigh noise") {
  const SparseModel m = model(Kind::DFT, 64, {1.0, 0.2}, {3, 9});
  const rvec pe = detection_error_probability(m, 40, PeMethod::Exact).pe;
  CHECK(pe(0) < pe(1));
  CHECK(pe(1) > 0.0);
}

TEST_CASE("error and SNR laws") {
  CHECK(snr_after_reconstruction(7.82, 3, 60) == doctest::Approx(20.83).epsilon(1e-3));
  CHECK(snr_after_reconstruction(7.45, 3, 120) == doctest::Approx(23.47).epsilon(1e-3));
  CHECK_THROWS_AS(snr_after_reconstruction(0.0, 0, 10), InvalidArgument);
  CHECK(nonsparse_error_energy(4, 100, 60, 2.0, 0.0) == doctest::Approx(4.0 * 40.0 / (60.0 * 99.0) * 2.0));
  CHECK(nonsparse_error_energy(4, 100, 60, 0.0, 0.01) == doctest::Approx(4.0 / 60.0 * 0.01 * 100.0));
  CHECK(nonsparse_error_energy(4, 100, 60, 0.0, 0.01, true) == 0.0);
  CHECK(nonsparse_error_energy(4, 100, 100, 5.0, 0.0) == 0.0);
}

TEST_CASE("AWGN DHT1 variance profile averages to its mean") {
  const HermiteBasis b = hermite_basis(30);
  const AwgnReport r = awgn_dht1_variance(b, 2.0);
  CHECK(r.per_index.mean() == doctest::Approx(r.mean));
  // Oracle: forward matrix rows squared.
  const TransformOperator op = build_transform(Kind::DHT1, 30);
  for (Index p : {0, 14, 29}) CHECK(r.per_index(p) == doctest::Approx(2.0 * op.forward.row(p).squaredNorm()));
}

TEST_CASE("Monte Carlo harness is deterministic and thread independent") {
  const McEstimator est = [](std::uint64_t s, Index t) {
    rvec out(2);
    out(0) = double(s % 1000) / 1000.0;
    out(1) = double(t);
    return out;
  };
  const McResult a = mc_experiment(est, 101, 5, 1);
  const McResult b = mc_experiment(est, 101, 5, 4);
  CHECK(a.stats[0].mean == b.stats[0].mean);
  CHECK(a.stats[0].variance == b.stats[0].variance);
  CHECK(a.stats[1].mean == doctest::Approx(50.0));
  CHECK(a.stats[1].variance == doctest::Approx(101.0 * 102.0 / 12.0));
  CHECK(mc_collect(est, 3, 5, 2)[2](1) == 2.0);
  CHECK(mc_experiment(est, 50, 6, 1).stats[0].mean != a.stats[0].mean);

  const McEstimator bad = [](std::uint64_t, Index t) -> rvec {
    if (t == 7) throw NumericFailure("boom");
    return rvec::Zero(1);
  };
  CHECK_THROWS_AS(mc_experiment(bad, 20, 1, 3), NumericFailure);
  CHECK_THROWS_AS(mc_experiment(est, 0, 1, 1), InvalidArgument);
}
