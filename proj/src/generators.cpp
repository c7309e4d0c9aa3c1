// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The sparsetf Authors

#include "sparsetf/generators.hpp"

#include "sparsetf/measurement.hpp"

#include <algorithm>
#include <cmath>
#include <random>

namespace sparsetf {

namespace {

TransformOperator operator_for(Kind kind, Index N, Index rows) {
  if (kind == Kind::DCT2D) {
    if (rows < 1 || N % rows != 0) throw InvalidArgument("2D model: total size must be a multiple of rows");
    return build_transform_2d(rows, N / rows);
  }
  return build_transform(kind, N);
}

rvec centered_time(Index N) {
  rvec t(N);
  for (Index n = 0; n < N; ++n) t(n) = static_cast<double>(n - N / 2);
  return t;
}

struct ComponentSpec {
  double amp;
  double env_scale;
  double (*phase)(double);
};

MultivariateModel build_model(const std::string& name, const std::vector<ComponentSpec>& comps, int channels,
                              std::uint64_t seed, double noise_sigma) {
  const Index N = 257;
  MultivariateModel m;
  m.name = name;
  m.t = centered_time(N);
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> U(0.0, 2.0 * kPi);
  for (const ComponentSpec& c : comps) {
    cvec v(N);
    for (Index n = 0; n < N; ++n) {
      const double t = m.t(n);
      v(n) = c.amp * std::exp(-(t / c.env_scale) * (t / c.env_scale)) * std::polar(1.0, c.phase(t));
    }
    m.components.push_back(v);
  }
  m.channels.assign(static_cast<std::size_t>(channels), cvec::Zero(N));
  for (int i = 0; i < channels; ++i)
    for (const cvec& v : m.components) m.channels[static_cast<std::size_t>(i)] += std::polar(1.0, U(rng)) * v;
  if (noise_sigma > 0.0)
    for (int i = 0; i < channels; ++i)
      m.channels[static_cast<std::size_t>(i)] += white_noise(N, noise_sigma, derive_seed(seed, 1000 + i), true);
  return m;
}

double u16(double t) { return t / 16.0; }

}  // namespace

SparseSignal sparse_signal(Kind kind, Index N, const rvec& amplitudes, const IndexList& positions, bool random_phase,
                           std::uint64_t seed, Index rows) {
  if (static_cast<std::size_t>(amplitudes.size()) != positions.size())
    throw InvalidArgument("sparse_signal: amplitudes and positions differ in length");
  const TransformOperator op = operator_for(kind, N, rows);
  SparseSignal s;
  s.kind = kind;
  s.rows = rows;
  s.coefficients = cvec::Zero(N);
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> U(0.0, 2.0 * kPi);
  for (std::size_t i = 0; i < positions.size(); ++i) {
    const Index k = positions[i];
    if (k < 0 || k >= N) throw InvalidArgument("sparse_signal: position out of range");
    const double ph = (random_phase && kind == Kind::DFT) ? U(rng) : 0.0;
    const double scale = kind == Kind::DFT ? static_cast<double>(N) : 1.0;
    s.coefficients(k) = std::polar(scale * amplitudes(static_cast<Index>(i)), ph);
  }
  s.support = positions;
  std::sort(s.support.begin(), s.support.end());
  s.x = op.inverse * s.coefficients;
  return s;
}

SparseSignal random_sparse_signal(Kind kind, Index N, Index K, std::uint64_t seed, double a_lo, double a_hi,
                                  Index rows) {
  if (K < 0 || K > N) throw InvalidArgument("random_sparse_signal: need 0 <= K <= N");
  const IndexList pos = sample_support(N, std::max<Index>(K, 1), derive_seed(seed, 1));
  std::mt19937_64 rng(derive_seed(seed, 2));
  std::uniform_real_distribution<double> A(a_lo, a_hi);
  rvec amps(K);
  for (Index i = 0; i < K; ++i) amps(i) = A(rng);
  const IndexList use(pos.begin(), pos.begin() + K);
  return sparse_signal(kind, N, amps, use, true, derive_seed(seed, 3), rows);
}

Signal gaussian_sine_signal(Index N, double sigma0) {
  if (N < 3) throw InvalidArgument("gaussian_sine_signal: N must be >= 3");
  Signal s;
  s.grid = Grid::uniform(1.0 / static_cast<double>(N));
  s.values.resize(N);
  const Index origin = uniform_origin(N);
  const double n = static_cast<double>(N);
  for (Index i = 0; i < N; ++i) {
    const double t = static_cast<double>(origin + i) / n;
    s.values(i) = 3.0 * std::sin(5.0 * kPi * t) * std::exp(-n * n * t * t / (2.0 * sigma0 * sigma0));
  }
  return s;
}

MultivariateModel crossing_pair(std::uint64_t seed, double noise_sigma) {
  const Index N = 257;
  MultivariateModel m;
  m.name = "crossing_pair";
  m.t = centered_time(N);
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> U(0.0, 2.0 * kPi);
  cvec c1(N), c2(N);
  for (Index n = 0; n < N; ++n) {
    const double t = m.t(n);
    const double a = 0.5 * std::exp(-(t / 128.0) * (t / 128.0));
    const double th = std::pow(u16(t), 4) / 128.0 - 8.0 * kPi * u16(t) * u16(t) / 64.0;
    c1(n) = a * std::polar(1.0, th);
    c2(n) = a * std::polar(1.0, -th);
  }
  m.components = {c1, c2};
  for (int i = 0; i < 2; ++i) {
    const double phi = U(rng);
    cvec ch = std::polar(1.0, phi) * c1 + std::polar(1.0, -phi) * c2;
    if (noise_sigma > 0.0) ch += white_noise(N, noise_sigma, derive_seed(seed, 1000 + i), true);
    m.channels.push_back(ch);
  }
  return m;
}

MultivariateModel bivariate_two(std::uint64_t seed, double noise_sigma) {
  return build_model("bivariate_two",
                     {{1.2, 96.0, [](double t) { return -12.0 * kPi * u16(t) * u16(t) / 25.0 + t * t * t / 65536.0; }},
                      {0.9, 128.0, [](double t) { return -kPi * t / 8.0 + std::pow(u16(t), 4) / 100.0; }}},
                     2, seed, noise_sigma);
}

MultivariateModel trivariate_five(std::uint64_t seed, double noise_sigma) {
  return build_model(
      "trivariate_five",
      {{1.0, 96.0, [](double t) { return -kPi * u16(t) * u16(t) / 5.0; }},
       {1.2, 96.0, [](double t) { return kPi * std::pow(u16(t), 3) / 32.0 + 3.0 * kPi * u16(t) * u16(t) / 10.0; }},
       {0.9, 128.0, [](double t) { return kPi * std::pow(u16(t), 4) / 200.0 + kPi * t / 8.0; }},
       {1.0, 16.0, [](double t) { return 3.0 * kPi * t / 4.0; }},
       {1.0, 96.0, [](double t) { return -6.0 * kPi * u16(t) * u16(t) / 25.0 + kPi * t / 4.0; }}},
      3, seed, noise_sigma);
}

MultivariateModel multivariate_model(const std::string& name, std::uint64_t seed, double noise_sigma) {
  if (name == "crossing_pair") return crossing_pair(seed, noise_sigma);
  if (name == "bivariate_two") return bivariate_two(seed, noise_sigma);
  if (name == "trivariate_five") return trivariate_five(seed, noise_sigma);
  throw InvalidArgument("unknown multivariate model: " + name);
}

cvec white_noise(Index N, double sigma, std::uint64_t seed, bool complex_noise) {
  if (sigma < 0.0) throw InvalidArgument("white_noise: sigma must be >= 0");
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> G(0.0, sigma);
  cvec e(N);
  for (Index n = 0; n < N; ++n) {
    const double re = G(rng);
    const double im = complex_noise ? G(rng) : 0.0;
    e(n) = cplx(re, im);
  }
  return e;
}

cvec add_awgn(const cvec& x, double snr, std::uint64_t seed, bool complex_noise) {
  const Index N = x.size();
  if (N == 0) throw InvalidArgument("add_awgn: empty signal");
  const double power = x.squaredNorm() / static_cast<double>(N);
  const double var = power / std::pow(10.0, snr / 10.0);
  const double sigma = complex_noise ? std::sqrt(var / 2.0) : std::sqrt(var);
  return x + white_noise(N, sigma, seed, complex_noise);
}

double snr_db(const cvec& reference, const cvec& estimate) {
  if (reference.size() != estimate.size()) throw InvalidArgument("snr_db: length mismatch");
  return 10.0 * std::log10(reference.squaredNorm() / (reference - estimate).squaredNorm());
}

BlockFrame block_frame(Index Nb) {
  if (Nb < 2 || Nb % 2 != 0) throw InvalidArgument("block_frame: block length must be even and >= 2");
  BlockFrame f;
  f.Nb = Nb;
  f.window.resize(Nb);
  for (Index n = 0; n < Nb; ++n)
    f.window(n) = 0.5 * (1.0 - std::cos(2.0 * kPi * static_cast<double>(n) / static_cast<double>(Nb)));
  return f;
}

std::vector<cvec> frame_blocks(const cvec& x, const BlockFrame& f) {
  const Index L = x.size();
  const Index h = f.Nb / 2;
  if (f.Nb > L) throw InvalidArgument("frame_blocks: block length exceeds signal length");
  const Index count = (L - f.Nb + h - 1) / h + 1;
  std::vector<cvec> blocks;
  blocks.reserve(static_cast<std::size_t>(count));
  for (Index i = 0; i < count; ++i) {
    cvec b = cvec::Zero(f.Nb);
    for (Index n = 0; n < f.Nb && i * h + n < L; ++n) b(n) = x(i * h + n);
    blocks.push_back(b);
  }
  return blocks;
}

cvec merge_blocks(const std::vector<cvec>& blocks, const BlockFrame& f, Index length) {
  const Index h = f.Nb / 2;
  cvec out = cvec::Zero(length);
  for (std::size_t i = 0; i < blocks.size(); ++i) {
    if (blocks[i].size() != f.Nb) throw InvalidArgument("merge_blocks: block length mismatch");
    const Index start = static_cast<Index>(i) * h;
    for (Index n = 0; n < f.Nb && start + n < length; ++n) out(start + n) += f.window(n) * blocks[i](n);
  }
  return out;
}

Index frame_interior_begin(const BlockFrame& f) { return f.Nb / 2; }

Index frame_interior_end(const BlockFrame& f, Index length) {
  const Index h = f.Nb / 2;
  const Index count = (length - f.Nb + h - 1) / h + 1;
  return std::min(length, count * h);
}

}  // namespace sparsetf
