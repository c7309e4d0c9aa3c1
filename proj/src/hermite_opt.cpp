// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The sparsetf Authors

#include "sparsetf/hermite_opt.hpp"

#include "sparsetf/theory.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace sparsetf {

namespace {

struct HermiteCache {
  Index N = 0;
  rvec nodes;
  cmat forward;
};

const HermiteCache& cache_for(Index N) {
  thread_local HermiteCache c;
  if (c.N != N) {
    c.N = N;
    c.nodes = hermite_nodes(N);
    c.forward = build_transform(Kind::DHT1, N).forward;
  }
  return c;
}

void check_uniform(const Signal& x) {
  if (x.grid.type != Grid::Type::Uniform) throw InvalidArgument("hermite_opt: signal must be on a uniform grid");
  if (x.values.size() < 3) throw InvalidArgument("hermite_opt: need at least 3 samples");
}

}  // namespace

double scale_measure(const Signal& x_uniform, double lambda_dt) {
  const HermiteCache& c = cache_for(x_uniform.values.size());
  const Signal r = sinc_resample(x_uniform, lambda_dt * x_uniform.grid.step, c.nodes);
  return (c.forward * r.values).cwiseAbs().sum();
}

double scale_upper_bound(const Signal& x_uniform) {
  check_uniform(x_uniform);
  const Index N = x_uniform.values.size();
  const TransformOperator F = build_transform(Kind::DFT, N);
  const rvec P = (F.forward * x_uniform.values).cwiseAbs2();
  const double total = P.sum();
  if (total == 0.0) return std::numeric_limits<double>::infinity();
  // Accumulate symmetric frequency bands |k| <= b until 99% of the energy is reached.
  double acc = P(0);
  Index b = 0;
  while (acc < 0.99 * total && b < N / 2) {
    ++b;
    acc += P(b);
    if (N - b != b) acc += P(N - b);
  }
  const double dt = x_uniform.grid.step;
  const double W = std::max<double>(static_cast<double>(b), 0.5) / (static_cast<double>(N) * dt);
  const double bound = (std::sqrt(kPi * static_cast<double>(N) / 1.7) + 1.8) / (2.0 * kPi * W);
  return bound / dt;
}

ScaleOptResult optimize_scale(const Signal& x_uniform, const ScaleOptConfig& cfg) {
  check_uniform(x_uniform);
  const Index N = x_uniform.values.size();
  const double n = static_cast<double>(N);
  const int max_iter = cfg.max_iter > 0 ? cfg.max_iter : static_cast<int>(N);
  const HermiteCache& c = cache_for(N);
  const double upper = scale_upper_bound(x_uniform);

  ScaleOptResult res;
  double lam = n / (2.0 * (std::sqrt(kPi * (n - 1.0) / 1.7) + 1.8));
  const double lower = 1e-3 * lam;
  double delta = 2.0 / c.nodes(N - 1);
  double g_prev = 0.0;
  while (res.iterations < max_iter) {
    const double m0 = scale_measure(x_uniform, lam);
    res.lambda_trace.push_back(lam);
    res.measure_trace.push_back(m0);
    const double mp = scale_measure(x_uniform, lam + delta);
    const double mm = scale_measure(x_uniform, std::max(lam - delta, lower));
    const double g = m0 > 0.0 ? n * (mp - mm) / m0 : 0.0;
    lam -= cfg.mu * g;
    if (lam <= lower || lam >= upper) {
      lam = std::clamp(lam, lower, upper);
      res.clamped = true;
    }
    if (res.iterations > 0 && g * g_prev < 0.0) delta *= 0.5;
    g_prev = g;
    ++res.iterations;
    if (delta < cfg.eps || g == 0.0) {
      res.converged = true;
      break;
    }
  }
  res.lambda = lam;
  res.measure = scale_measure(x_uniform, lam);
  return res;
}

cvec shift_zero_fill(const cvec& x, Index l) {
  const Index N = x.size();
  cvec out = cvec::Zero(N);
  for (Index n = 0; n < N; ++n) {
    const Index src = n - l;
    if (src >= 0 && src < N) out(n) = x(src);
  }
  return out;
}

ShiftOptResult optimize_shift(const Signal& x_uniform, Index l_max, const ScaleOptConfig& cfg) {
  check_uniform(x_uniform);
  if (l_max < 0) throw InvalidArgument("optimize_shift: l_max must be >= 0");
  ShiftOptResult best;
  best.per_shift_measure.assign(static_cast<std::size_t>(2 * l_max + 1), 0.0);
  bool have = false;
  // Visit 0, -1, +1, -2, +2, ... so strict improvement implements the tie rule.
  for (Index a = 0; a <= l_max; ++a) {
    for (Index l : {-a, a}) {
      if (a == 0 && l != 0) continue;
      if (a == 0 && have) continue;
      Signal s = x_uniform;
      s.values = shift_zero_fill(x_uniform.values, l);
      const ScaleOptResult r = optimize_scale(s, cfg);
      best.per_shift_measure[static_cast<std::size_t>(l + l_max)] = r.measure;
      if (!have || r.measure < best.scale.measure) {
        best.shift = l;
        best.scale = r;
        have = true;
      }
      if (a == 0) break;
    }
  }
  return best;
}

cvec denoise_hard_threshold(const cvec& x, double sigma_eps, double alpha, Kind domain) {
  if (sigma_eps < 0.0 || !(alpha > 0.0)) throw InvalidArgument("denoise_hard_threshold: need sigma >= 0, alpha > 0");
  if (domain != Kind::DHT1 && domain != Kind::DHT2)
    throw InvalidArgument("denoise_hard_threshold: domain must be DHT1 or DHT2");
  if (sigma_eps == 0.0) return x;
  const Index N = x.size();
  const TransformOperator op = build_transform(domain, N);
  cvec C = op.forward * x;
  rvec T(N);
  if (domain == Kind::DHT1) {
    const AwgnReport rep = awgn_dht1_variance(hermite_basis(N), 1.0);
    T = alpha * sigma_eps * rep.per_index.cwiseSqrt();
  } else {
    T.setConstant(alpha * sigma_eps);
  }
  for (Index p = 0; p < N; ++p)
    if (std::abs(C(p)) <= T(p)) C(p) = 0.0;
  return op.inverse * C;
}

CompressionResult compress_keep_largest(const cvec& x, double target_E, Kind domain) {
  if (!(target_E > 0.0 && target_E <= 1.0)) throw InvalidArgument("compress_keep_largest: target_E must be in (0,1]");
  const double xn = x.norm();
  if (xn == 0.0) throw InvalidArgument("compress_keep_largest: zero-energy signal");
  const Index N = x.size();
  if (domain == Kind::DCT2D) throw InvalidArgument("compress_keep_largest: 1D domains only");
  const TransformOperator op = build_transform(domain, N);
  const cvec C = op.forward * x;
  IndexList order(static_cast<std::size_t>(N));
  std::iota(order.begin(), order.end(), Index{0});
  std::stable_sort(order.begin(), order.end(), [&](Index a, Index b) { return std::abs(C(a)) > std::abs(C(b)); });

  CompressionResult res;
  res.E_curve.resize(N + 1);
  cvec approx = cvec::Zero(N);
  res.E_curve(0) = 1.0;
  Index chosen = -1;
  for (Index L = 1; L <= N; ++L) {
    const Index k = order[static_cast<std::size_t>(L - 1)];
    approx += C(k) * op.inverse.col(k);
    res.E_curve(L) = (approx - x).norm() / xn;
  }
  for (Index L = 0; L <= N; ++L)
    if (res.E_curve(L) <= target_E) {
      chosen = L;
      break;
    }
  if (chosen < 0) chosen = N;
  res.L = chosen;
  res.kept.assign(order.begin(), order.begin() + chosen);
  std::sort(res.kept.begin(), res.kept.end());
  res.approx = cvec::Zero(N);
  for (Index k : res.kept) res.approx += C(k) * op.inverse.col(k);
  res.E = (res.approx - x).norm() / xn;
  return res;
}

}  // namespace sparsetf
