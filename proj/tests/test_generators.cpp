// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The sparsetf Authors

#include "sparsetf/generators.hpp"

#include <doctest.h>

#include <cmath>

using namespace sparsetf;

TEST_CASE("sparse signals have the requested coefficients") {
  rvec a(2);
  a << 1.0, 0.5;
  const SparseSignal d = sparse_signal(Kind::DFT, 16, a, {9, 2}, false);
  CHECK(d.support == IndexList{2, 9});
  CHECK(d.coefficients(9) == cplx(16.0));
  // Time-domain amplitude of a DFT component equals A.
  CHECK(std::abs(d.x(0) - cplx(1.5)) < 1e-12);
  const SparseSignal c = sparse_signal(Kind::DCT2D, 18, a, {0, 13}, false, 0, 3);
  CHECK(c.x.size() == 18);
  CHECK((build_transform_2d(3, 6).forward * c.x - c.coefficients).norm() < 1e-12);
  const SparseSignal ph = sparse_signal(Kind::DFT, 16, a, {9, 2}, true, 5);
  CHECK(std::abs(ph.coefficients(2)) == doctest::Approx(8.0));
  CHECK(ph.coefficients(2) != cplx(8.0));
  CHECK(sparse_signal(Kind::DCT1D, 16, a, {9, 2}, true, 5).coefficients(2) == cplx(0.5));
  CHECK_THROWS_AS(sparse_signal(Kind::DCT1D, 8, a, {1}, false), InvalidArgument);
  CHECK_THROWS_AS(sparse_signal(Kind::DCT1D, 8, a, {1, 8}, false), InvalidArgument);
}

TEST_CASE("random sparse signals are seeded and in range") {
  const SparseSignal a = random_sparse_signal(Kind::DHT1, 32, 4, 11);
  const SparseSignal b = random_sparse_signal(Kind::DHT1, 32, 4, 11);
  CHECK(a.support == b.support);
  CHECK(a.x == b.x);
  CHECK(a.support.size() == 4);
  for (Index k : a.support) {
    CHECK(std::abs(a.coefficients(k)) >= 0.5);
    CHECK(std::abs(a.coefficients(k)) <= 1.5);
  }
  CHECK(random_sparse_signal(Kind::DHT1, 32, 4, 12).support != a.support);
  CHECK(random_sparse_signal(Kind::DCT1D, 8, 0, 1).x.norm() == 0.0);
}

TEST_CASE("Gaussian-windowed sine") {
  const Signal s = gaussian_sine_signal();
  CHECK(s.values.size() == 77);
  CHECK(s.grid.step == doctest::Approx(1.0 / 77.0));
  CHECK(s.values(38) == cplx(0.0));
  // Odd symmetry around the center sample.
  for (Index m = 1; m <= 38; ++m) CHECK(std::abs(s.values(38 + m) + s.values(38 - m)) < 1e-14);
  const double t = 3.0 / 77.0;
  CHECK(s.values(41).real() == doctest::Approx(3.0 * std::sin(5.0 * kPi * t) * std::exp(-9.0 / (2.0 * 2.1 * 2.1))));
}

TEST_CASE("multivariate models") {
  for (const char* name : {"crossing_pair", "bivariate_two", "trivariate_five"}) {
    const MultivariateModel m = multivariate_model(name, 4);
    CAPTURE(name);
    CHECK(m.name == name);
    CHECK(m.t.size() == 257);
    CHECK(m.t(0) == -128.0);
    for (const cvec& c : m.channels) CHECK(c.size() == 257);
    const MultivariateModel again = multivariate_model(name, 4);
    CHECK(again.channels[0] == m.channels[0]);
    const MultivariateModel noisy = multivariate_model(name, 4, 0.15);
    CHECK(noisy.components[0] == m.components[0]);
    const double err = (noisy.channels[0] - m.channels[0]).squaredNorm() / 257.0;
    CHECK(err == doctest::Approx(2.0 * 0.15 * 0.15).epsilon(0.25));
  }
  CHECK(crossing_pair(1).channels.size() == 2);
  CHECK(trivariate_five(1).channels.size() == 3);
  CHECK(trivariate_five(1).components.size() == 5);
  // The crossing pair channels are real.
  CHECK(crossing_pair(7).channels[1].imag().cwiseAbs().maxCoeff() < 1e-12);
  CHECK_THROWS_AS(multivariate_model("quad", 1), InvalidArgument);
}

TEST_CASE("noise helpers") {
  const cvec n = white_noise(20000, 0.5, 3, false);
  CHECK(n.imag().norm() == 0.0);
  CHECK(n.real().squaredNorm() / 20000.0 == doctest::Approx(0.25).epsilon(0.03));
  const cvec c = white_noise(20000, 0.5, 3, true);
  CHECK(c.imag().squaredNorm() / 20000.0 == doctest::Approx(0.25).epsilon(0.03));
  CHECK(white_noise(5, 0.0, 1, true).norm() == 0.0);
  CHECK_THROWS_AS(white_noise(5, -1.0, 1, true), InvalidArgument);

  const cvec x = cvec::Ones(50000);
  CHECK(snr_db(x, add_awgn(x, 6.0, 8)) == doctest::Approx(6.0).epsilon(0.01));
  CHECK(snr_db(x, add_awgn(x, 6.0, 8, true)) == doctest::Approx(6.0).epsilon(0.01));
  CHECK(snr_db(x, 0.9 * x) == doctest::Approx(20.0));
}

TEST_CASE("block framing reconstructs the covered interior") {
  const BlockFrame f = block_frame(8);
  for (Index n = 0; n < 4; ++n) CHECK(f.window(n) + f.window(n + 4) == doctest::Approx(1.0));
  cvec x(30);
  for (Index n = 0; n < 30; ++n) x(n) = double(n + 1);
  const std::vector<cvec> blocks = frame_blocks(x, f);
  CHECK(blocks.size() == 7);
  const cvec y = merge_blocks(blocks, f, 30);
  const Index b = frame_interior_begin(f), e = frame_interior_end(f, 30);
  CHECK(b == 4);
  CHECK(e == 28);
  for (Index n = b; n < e; ++n) CHECK(std::abs(y(n) - x(n)) < 1e-12);
  CHECK_THROWS_AS(block_frame(7), InvalidArgument);
  CHECK_THROWS_AS(frame_blocks(cvec::Zero(4), f), InvalidArgument);
}
