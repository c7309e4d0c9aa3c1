// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The sparsetf Authors

#pragma once

#include "sparsetf/common.hpp"

#include <string>

namespace sparsetf {

enum class Kind { DFT, DCT1D, DCT2D, DHT1, DHT2 };

std::string to_string(Kind kind);
Kind kind_from_string(const std::string& name);

struct Grid {
  enum class Type { Uniform, HermiteNodes };
  Type type = Type::Uniform;
  double step = 1.0;
  rvec nodes;
  double scale = 1.0;

  static Grid uniform(double step);
  static Grid hermite(const rvec& nodes, double scale);
};

struct Signal {
  cvec values;
  Grid grid;
};

struct TransformOperator {
  Kind kind = Kind::DFT;
  Index rows = 0;  // M for DCT2D, 1 otherwise
  Index cols = 0;  // N
  double sigma = 1.0;
  cmat forward;
  cmat inverse;
  std::string norm_convention;

  Index size() const { return forward.rows(); }
  bool is_real() const { return kind != Kind::DFT; }
};

struct HermiteBasis {
  Index N = 0;
  double sigma = 1.0;
  rvec nodes;
  rmat psi;  // psi(p, n) = psi_p(t_n)
  rvec psi_last_sq;
};

enum class Direction { Forward, Inverse };

// Roots of H_N in increasing order, exactly sign-symmetric.
rvec hermite_nodes(Index N);

// Table psi_p(t) for p = 0..N-1 (rows) over the given grid (columns).
rmat hermite_functions(Index N, double sigma, const rvec& grid);

HermiteBasis hermite_basis(Index N, double sigma = 1.0);

TransformOperator build_transform(Kind kind, Index N, double sigma = 1.0);
TransformOperator build_transform_2d(Index M, Index N);

cvec transform(const TransformOperator& op, const cvec& x, Direction dir);
Signal transform(const TransformOperator& op, const Signal& s, Direction dir);

// Truncated-sinc interpolation of uniformly sampled x (step dt, sample m at m*dt
// with m centered on zero) evaluated at lambda * nodes.
Signal sinc_resample(const Signal& x_uniform, double lambda, const rvec& nodes);

// Integer sample offset of the first uniform sample, -floor(N/2).
Index uniform_origin(Index N);

}  // namespace sparsetf
