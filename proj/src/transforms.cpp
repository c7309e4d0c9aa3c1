// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The sparsetf Authors

#include "sparsetf/transforms.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cctype>
#include <cmath>

namespace sparsetf {

std::string to_string(Kind kind) {
  switch (kind) {
    case Kind::DFT: return "DFT";
    case Kind::DCT1D: return "DCT1D";
    case Kind::DCT2D: return "DCT2D";
    case Kind::DHT1: return "DHT1";
    case Kind::DHT2: return "DHT2";
  }
  return "?";
}

Kind kind_from_string(const std::string& name) {
  std::string s = name;
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::toupper(c); });
  if (s == "DFT") return Kind::DFT;
  if (s == "DCT" || s == "DCT1D") return Kind::DCT1D;
  if (s == "DCT2D") return Kind::DCT2D;
  if (s == "DHT1" || s == "DHT") return Kind::DHT1;
  if (s == "DHT2") return Kind::DHT2;
  throw InvalidArgument("unknown transform kind '" + name + "'");
}

Grid Grid::uniform(double step) {
  Grid g;
  g.type = Type::Uniform;
  g.step = step;
  return g;
}

Grid Grid::hermite(const rvec& nodes, double scale) {
  Grid g;
  g.type = Type::HermiteNodes;
  g.nodes = nodes;
  g.scale = scale;
  return g;
}

rvec hermite_nodes(Index N) {
  if (N < 1) throw InvalidArgument("hermite_nodes: N must be >= 1");
  rvec nodes(N);
  if (N == 1) {
    nodes(0) = 0.0;
    return nodes;
  }
  rvec diag = rvec::Zero(N);
  rvec sub(N - 1);
  for (Index k = 1; k < N; ++k) sub(k - 1) = std::sqrt(0.5 * static_cast<double>(k));
  Eigen::SelfAdjointEigenSolver<rmat> es;
  es.computeFromTridiagonal(diag, sub, Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) throw NumericFailure("hermite_nodes: Jacobi eigensolver failed");
  const rvec& ev = es.eigenvalues();
  for (Index n = 0; n < N; ++n) nodes(n) = 0.5 * (ev(n) - ev(N - 1 - n));
  if (N % 2 == 1) nodes(N / 2) = 0.0;
  return nodes;
}

rmat hermite_functions(Index N, double sigma, const rvec& grid) {
  if (N < 1) throw InvalidArgument("hermite_functions: N must be >= 1");
  if (!(sigma > 0.0)) throw InvalidArgument("hermite_functions: sigma must be positive");
  const Index G = grid.size();
  rmat psi(N, G);
  const double pref = std::pow(kPi, -0.25) / std::sqrt(sigma);
  for (Index j = 0; j < G; ++j) {
    const double t = grid(j);
    if (!std::isfinite(t)) throw InvalidArgument("hermite_functions: non-finite grid entry");
    const double u = t / sigma;
    // Recursion on rescaled values; log_scale tracks the factor pulled out.
    double log_scale = -0.5 * u * u;
    double prev2 = 0.0;
    double prev1 = pref;
    psi(0, j) = prev1 * std::exp(log_scale);
    if (N > 1) {
      double cur = std::sqrt(2.0) * u * prev1;
      prev2 = prev1;
      prev1 = cur;
      psi(1, j) = prev1 * std::exp(log_scale);
    }
    for (Index p = 2; p < N; ++p) {
      const double dp = static_cast<double>(p);
      double cur = std::sqrt(2.0 / dp) * u * prev1 - std::sqrt((dp - 1.0) / dp) * prev2;
      prev2 = prev1;
      prev1 = cur;
      const double mag = std::abs(prev1);
      if (mag > 1e150) {
        prev1 /= mag;
        prev2 /= mag;
        log_scale += std::log(mag);
      }
      psi(p, j) = prev1 * std::exp(log_scale);
    }
  }
  return psi;
}

HermiteBasis hermite_basis(Index N, double sigma) {
  HermiteBasis b;
  b.N = N;
  b.sigma = sigma;
  b.nodes = sigma * hermite_nodes(N);
  b.psi = hermite_functions(N, sigma, b.nodes);
  b.psi_last_sq = b.psi.row(N - 1).transpose().array().square();
  return b;
}

namespace {

cmat dft_forward(Index N) {
  cmat F(N, N);
  for (Index k = 0; k < N; ++k)
    for (Index n = 0; n < N; ++n) {
      const double arg = -2.0 * kPi * static_cast<double>((k * n) % N) / static_cast<double>(N);
      F(k, n) = cplx(std::cos(arg), std::sin(arg));
    }
  return F;
}

rmat dct_matrix(Index N) {
  rmat C(N, N);
  const double a0 = std::sqrt(1.0 / static_cast<double>(N));
  const double ak = std::sqrt(2.0 / static_cast<double>(N));
  for (Index k = 0; k < N; ++k)
    for (Index n = 0; n < N; ++n)
      C(k, n) = (k == 0 ? a0 : ak) *
                std::cos(kPi * static_cast<double>((2 * n + 1) * k) / (2.0 * static_cast<double>(N)));
  return C;
}

rmat dht2_matrix(Index N, double sigma) {
  if (N == 1) return rmat::Ones(1, 1);
  const double s2 = sigma * sigma;
  const double dN = static_cast<double>(N);
  rvec diag(N);
  rvec sub(N - 1);
  for (Index n = 0; n < N; ++n) {
    const double dn = static_cast<double>(n);
    diag(n) = -2.0 * std::cos(kPi / s2) * std::sin(kPi * dn / (dN * s2)) *
              std::sin(kPi * (dN - 1.0 - dn) / (dN * s2));
  }
  for (Index n = 1; n < N; ++n) {
    const double dn = static_cast<double>(n);
    sub(n - 1) = std::sin(kPi * dn / (dN * s2)) * std::sin(kPi * (dN - dn) / (dN * s2));
  }
  Eigen::SelfAdjointEigenSolver<rmat> es;
  es.computeFromTridiagonal(diag, sub, Eigen::ComputeEigenvectors);
  if (es.info() != Eigen::Success)
    throw NumericFailure("DHT2: tridiagonal eigensolver failed for N=" + std::to_string(N) +
                         ", sigma=" + std::to_string(sigma));
  // Eigen returns ascending eigenvalues; row p of the transform is the p-th largest.
  rmat G(N, N);
  for (Index p = 0; p < N; ++p) {
    rvec v = es.eigenvectors().col(N - 1 - p);
    for (Index n = 0; n < N; ++n) {
      if (std::abs(v(n)) > 1e-12) {
        if (v(n) < 0.0) v = -v;
        break;
      }
    }
    G.row(p) = v.transpose();
  }
  return G;
}

}  // namespace

TransformOperator build_transform(Kind kind, Index N, double sigma) {
  if (N < 1) throw InvalidArgument("build_transform: N must be >= 1");
  if (kind == Kind::DCT2D) throw InvalidArgument("build_transform: use build_transform_2d for DCT2D");
  if ((kind == Kind::DHT1 || kind == Kind::DHT2) && !(sigma > 0.0))
    throw InvalidArgument("build_transform: sigma must be positive");
  TransformOperator op;
  op.kind = kind;
  op.rows = 1;
  op.cols = N;
  op.sigma = sigma;
  switch (kind) {
    case Kind::DFT: {
      op.forward = dft_forward(N);
      op.inverse = op.forward.adjoint() / static_cast<double>(N);
      op.norm_convention = "forward unnormalized, inverse 1/N";
      break;
    }
    case Kind::DCT1D: {
      const rmat C = dct_matrix(N);
      op.forward = C.cast<cplx>();
      op.inverse = C.transpose().cast<cplx>();
      op.norm_convention = "orthonormal DCT-II";
      break;
    }
    case Kind::DHT1: {
      const HermiteBasis b = hermite_basis(N, sigma);
      rmat T(N, N);
      for (Index n = 0; n < N; ++n)
        T.col(n) = b.psi.col(n) / (static_cast<double>(N) * b.psi_last_sq(n));
      op.forward = T.cast<cplx>();
      op.inverse = b.psi.transpose().cast<cplx>();
      op.norm_convention = "Gauss-Hermite quadrature, 1/N in forward";
      break;
    }
    case Kind::DHT2: {
      const rmat G = dht2_matrix(N, sigma);
      op.forward = G.cast<cplx>();
      op.inverse = G.transpose().cast<cplx>();
      op.norm_convention = "orthonormal tridiagonal eigenbasis";
      break;
    }
    default: break;
  }
  return op;
}

TransformOperator build_transform_2d(Index M, Index N) {
  if (M < 1 || N < 1) throw InvalidArgument("build_transform_2d: sizes must be >= 1");
  const rmat CM = dct_matrix(M);
  const rmat CN = dct_matrix(N);
  rmat G(M * N, M * N);
  for (Index p = 0; p < M; ++p)
    for (Index q = 0; q < N; ++q)
      for (Index m = 0; m < M; ++m)
        for (Index n = 0; n < N; ++n) G(p * N + q, m * N + n) = CM(p, m) * CN(q, n);
  TransformOperator op;
  op.kind = Kind::DCT2D;
  op.rows = M;
  op.cols = N;
  op.forward = G.cast<cplx>();
  op.inverse = G.transpose().cast<cplx>();
  op.norm_convention = "orthonormal separable DCT-II, row-major flattening";
  return op;
}

cvec transform(const TransformOperator& op, const cvec& x, Direction dir) {
  if (x.size() != op.size())
    throw InvalidArgument("transform: length " + std::to_string(x.size()) + " does not match operator size " +
                          std::to_string(op.size()));
  return dir == Direction::Forward ? cvec(op.forward * x) : cvec(op.inverse * x);
}

Signal transform(const TransformOperator& op, const Signal& s, Direction dir) {
  Signal out;
  if (op.kind == Kind::DHT1) {
    const rvec nodes = op.sigma * hermite_nodes(op.cols);
    if (dir == Direction::Forward) {
      if (s.grid.type != Grid::Type::HermiteNodes || s.grid.nodes.size() != nodes.size() ||
          (s.grid.nodes - nodes).cwiseAbs().maxCoeff() > 1e-9 * (1.0 + nodes.cwiseAbs().maxCoeff()))
        throw InvalidArgument("transform: DHT1 forward requires a matching Hermite-node grid");
      out.grid = Grid::uniform(1.0);
    } else {
      out.grid = Grid::hermite(nodes, op.sigma);
    }
  } else {
    out.grid = Grid::uniform(1.0);
    if (dir == Direction::Inverse) out.grid = s.grid;
  }
  out.values = transform(op, s.values, dir);
  return out;
}

Index uniform_origin(Index N) { return -(N / 2); }

namespace {
double sinc(double x) {
  if (x == 0.0) return 1.0;
  const double px = kPi * x;
  return std::sin(px) / px;
}
}  // namespace

Signal sinc_resample(const Signal& x_uniform, double lambda, const rvec& nodes) {
  if (!(lambda > 0.0)) throw InvalidArgument("sinc_resample: lambda must be positive");
  if (x_uniform.grid.type != Grid::Type::Uniform)
    throw InvalidArgument("sinc_resample: input must be on a uniform grid");
  const double dt = x_uniform.grid.step;
  const Index N = x_uniform.values.size();
  const Index m0 = uniform_origin(N);
  Signal out;
  out.values = cvec::Zero(nodes.size());
  for (Index i = 0; i < nodes.size(); ++i) {
    const double pos = lambda * nodes(i) / dt;
    const double r = std::round(pos);
    if (std::abs(pos - r) < 1e-12) {
      const Index m = static_cast<Index>(r) - m0;
      if (m >= 0 && m < N) {
        out.values(i) = x_uniform.values(m);
        continue;
      }
    }
    cplx acc = 0.0;
    for (Index j = 0; j < N; ++j) acc += x_uniform.values(j) * sinc(pos - static_cast<double>(m0 + j));
    out.values(i) = acc;
  }
  out.grid = Grid::hermite(nodes, lambda);
  return out;
}

}  // namespace sparsetf
