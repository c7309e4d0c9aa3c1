// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The sparsetf Authors

#include "sparsetf/generators.hpp"
#include "sparsetf/tfa.hpp"

#include <doctest.h>

#include <cmath>

using namespace sparsetf;

namespace {

cvec tone(Index N, double omega) {
  cvec x(N);
  for (Index n = 0; n < N; ++n) x(n) = std::polar(1.0, omega * double(n));
  return x;
}

cvec chirp(Index N, double w0, double rate) {
  cvec x(N);
  for (Index n = 0; n < N; ++n) {
    const double t = double(n);
    x(n) = std::polar(1.0, w0 * t + 0.5 * rate * t * t);
  }
  return x;
}

cvec gaussian_tone(Index N, double omega, double center, double width) {
  cvec x = tone(N, omega);
  for (Index n = 0; n < N; ++n) x(n) *= std::exp(-std::pow((double(n) - center) / width, 2));
  return x;
}

}  // namespace

TEST_CASE("names and windows") {
  for (TfrKind k : {TfrKind::STFT, TfrKind::SPEC, TfrKind::PWD, TfrKind::SM}) CHECK(tfr_kind_from_string(to_string(k)) == k);
  for (WindowType w : {WindowType::Rectangular, WindowType::Hann, WindowType::Hamming})
    CHECK(window_from_string(to_string(w)) == w);
  CHECK_THROWS_AS(tfr_kind_from_string("wvd"), InvalidArgument);
  const rvec h = window_values(WindowType::Hann, 8);
  CHECK(h(4) == 1.0);
  CHECK(h(0) == doctest::Approx(0.0));
  CHECK(h(1) == doctest::Approx(h(7)));
  CHECK(window_values(WindowType::Hamming, 8)(0) == doctest::Approx(0.08));
}

TEST_CASE("STFT matches the direct windowed sum") {
  const Index N = 40, Nw = 16;
  cvec x = chirp(N, 0.3, 0.01);
  const TFRMatrix s = stft(x, WindowType::Hann, Nw);
  CHECK(s.bins() == Nw);
  CHECK(s.frames() == N);
  const rvec w = window_values(WindowType::Hann, Nw);
  for (Index n : {0, 7, 39})
    for (Index k : {0, 3, 15}) {
      cplx acc = 0.0;
      for (Index m = -Nw / 2; m < Nw / 2; ++m)
        if (n + m >= 0 && n + m < N) acc += w(m + Nw / 2) * x(n + m) * std::polar(1.0, -2.0 * kPi * double(k * m) / double(Nw));
      CHECK(std::abs(s.values(k, n) - acc) < 1e-12);
    }
  const TFRMatrix sh = stft(x, WindowType::Hann, Nw, 3);
  CHECK(sh.frames() == 14);
  CHECK(sh.values.col(4) == s.values.col(12));
  CHECK_THROWS_AS(stft(x, WindowType::Hann, 15), InvalidArgument);
  CHECK_THROWS_AS(stft(x, WindowType::Hann, 64), InvalidArgument);
}

TEST_CASE("S-method with zero width is the spectrogram") {
  const cvec x = chirp(96, 0.2, 0.02) + tone(96, 2.0);
  const TFRMatrix s = stft(x, WindowType::Hamming, 32);
  const TFRMatrix sm = smethod(s, 0);
  const TFRMatrix sp = spectrogram(x, WindowType::Hamming, 32);
  CHECK(sm.values == sp.values);
  CHECK(smethod(s, 3).values.imag().cwiseAbs().maxCoeff() == 0.0);
  CHECK_THROWS_AS(smethod(sp, 1), InvalidArgument);
  CHECK_THROWS_AS(smethod(s, 32), InvalidArgument);
}

TEST_CASE("S-method sharpens a chirp relative to the spectrogram") {
  const cvec x = chirp(128, 0.2, 0.01);
  const TFRMatrix s = stft(x, WindowType::Hann, 32);
  const auto normalized = [](TFRMatrix t) {
    const double e = t.values.real().sum();
    t.values /= e;
    return concentration_measure(t);
  };
  CHECK(normalized(smethod(s, 3)) < normalized(smethod(s, 0)));
}

TEST_CASE("pseudo-Wigner is real and peaks on the tone frequency") {
  const Index N = 64, M = 32;
  const double omega = kPi / 4.0;
  const TFRMatrix w = wigner(tone(N, omega) + 0.3 * chirp(N, 0.1, 0.003), M);
  CHECK(w.values.imag().cwiseAbs().maxCoeff() < 1e-10);
  const TFRMatrix pure = wigner(tone(N, omega), M);
  const IfEstimate e = estimate_if(pure);
  // Bin k maps to omega = pi k / M.
  for (Index n = M / 2; n < N - M / 2; ++n) CHECK(e.bin[std::size_t(n)] == Index(omega * M / kPi + 0.5));
  CHECK_THROWS_AS(wigner(tone(N, omega), 5), InvalidArgument);
}

TEST_CASE("IF estimate follows a linear FM signal") {
  const Index N = 256, Nw = 64;
  const double w0 = 0.3, rate = 0.006;
  const TFRMatrix s = spectrogram(chirp(N, w0, rate), WindowType::Hann, Nw);
  const IfEstimate e = estimate_if(s);
  CHECK_FALSE(e.degenerate);
  for (Index n = N / 10; n < N - N / 10; ++n) {
    const double expected = (w0 + rate * double(n)) * Nw / (2.0 * kPi);
    CHECK(std::abs(double(e.bin[std::size_t(n)]) - expected) <= 1.0);
  }
  CHECK(estimate_if(spectrogram(cvec::Zero(N), WindowType::Hann, Nw)).degenerate);
}

TEST_CASE("concentration measure favors concentrated distributions") {
  const Index N = 128;
  const cvec t = tone(N, 1.0);
  cvec noise = white_noise(N, 1.0, 9, true);
  noise *= t.norm() / noise.norm();
  CHECK(concentration_measure(spectrogram(t, WindowType::Hann, 32)) <
        concentration_measure(spectrogram(noise, WindowType::Hann, 32)));
  const TFRMatrix s = stft(t, WindowType::Rectangular, 16);
  CHECK(concentration_measure(s) == doctest::Approx(s.values.cwiseAbs().sum()));
}

TEST_CASE("multivariate autocorrelation and eigen decomposition") {
  MultivariateSignal x{chirp(32, 0.1, 0.01), tone(32, 0.5), white_noise(32, 1.0, 3, true)};
  const cmat R = mv_autocorrelation(x);
  CHECK((R - R.adjoint()).cwiseAbs().maxCoeff() < 1e-12);
  double energy = 0.0;
  for (const cvec& c : x) energy += c.squaredNorm();
  CHECK(R.trace().real() == doctest::Approx(energy));
  const EigenPairs e = hermitian_eigen(R);
  for (Index i = 1; i < e.values.size(); ++i) CHECK(e.values(i) <= e.values(i - 1));
  const cmat back = e.vectors * e.values.cast<cplx>().asDiagonal() * e.vectors.adjoint();
  CHECK((back - R).cwiseAbs().maxCoeff() < 1e-9);
  CHECK(count_components(e.values) == 3);
  CHECK(count_components(rvec::Zero(4)) == 0);
  rvec ev(4);
  ev << 10.0, 1.0, 1e-3, 1e-6;
  CHECK(count_components(ev, 1e-4) == 3);
  CHECK_THROWS_AS(mv_autocorrelation({cvec::Ones(3), cvec::Ones(4)}), InvalidArgument);
  const cmat Rs = mv_autocorrelation_smethod(x, kPi / 8.0, 8);
  CHECK((Rs - Rs.adjoint()).cwiseAbs().maxCoeff() < 1e-9);
}

TEST_CASE("deflation orthogonalizes later columns") {
  cmat Q(6, 3);
  Q.col(0) = tone(6, 0.4).normalized();
  Q.col(1) = (tone(6, 0.4) + 0.5 * tone(6, 1.7)).normalized();
  Q.col(2) = chirp(6, 0.2, 0.3).normalized();
  deflate(Q, 0);
  for (Index k = 1; k < 3; ++k) {
    CHECK(std::abs(Q.col(0).dot(Q.col(k))) < 1e-12);
    CHECK(Q.col(k).norm() == doctest::Approx(1.0));
  }
  cmat bad(4, 2);
  bad.col(0) = tone(4, 0.3).normalized();
  bad.col(1) = bad.col(0);
  CHECK_THROWS_AS(deflate(bad, 0), NumericFailure);
}

TEST_CASE("decomposition separates two well separated components") {
  const Index N = 128;
  const cvec a = gaussian_tone(N, 0.6, 40.0, 25.0);
  const cvec b = gaussian_tone(N, 2.2, 90.0, 25.0);
  MultivariateSignal x{a * std::polar(1.0, 0.3) + b * std::polar(0.8, 2.0), a * std::polar(0.7, 1.1) + b * std::polar(1.0, -0.4)};
  DecomposeConfig cfg;
  cfg.window_length = 32;
  const DecompositionResult r = decompose(x, cfg);
  CHECK(r.P == 2);
  for (Index p = 0; p < r.P; ++p) CHECK(r.components.col(p).norm() == doctest::Approx(1.0));
  const std::vector<double> c = match_components(r.components, {a, b});
  CHECK(c[0] > 0.99);
  CHECK(c[1] > 0.99);
  CHECK(std::abs(r.components.col(0).dot(r.components.col(1))) < 0.05);
}

TEST_CASE("match_components takes the best normalized correlation") {
  cmat comps(4, 2);
  comps.col(0) = tone(4, 0.0) * 3.0;
  comps.col(1) = tone(4, kPi / 2.0);
  const auto c = match_components(comps, {tone(4, kPi / 2.0) * cplx(0.0, 2.0), tone(4, 0.0)});
  CHECK(c[0] == doctest::Approx(1.0));
  CHECK(c[1] == doctest::Approx(1.0));
  CHECK_THROWS_AS(match_components(comps, {tone(5, 0.0)}), InvalidArgument);
}
