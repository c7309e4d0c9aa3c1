// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The sparsetf Authors

#include "sparsetf/recon.hpp"

#include "sparsetf/theory.hpp"

#include <Eigen/QR>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>
#include <sstream>

namespace sparsetf {

std::string to_string(ReconStatus s) {
  switch (s) {
    case ReconStatus::Converged: return "converged";
    case ReconStatus::MaxIter: return "max_iter";
    case ReconStatus::Underdetermined: return "underdetermined";
    case ReconStatus::NoDetection: return "no_detection";
    case ReconStatus::EmptySupport: return "empty_support";
    case ReconStatus::Stalled: return "stalled";
  }
  return "?";
}

namespace {

cmat columns(const cmat& A, const IndexList& support) {
  cmat out(A.rows(), static_cast<Index>(support.size()));
  for (std::size_t j = 0; j < support.size(); ++j) out.col(static_cast<Index>(j)) = A.col(support[j]);
  return out;
}

std::string describe(const IndexList& support) {
  std::ostringstream os;
  os << "{";
  for (std::size_t i = 0; i < support.size(); ++i) os << (i ? "," : "") << support[i];
  os << "}";
  return os.str();
}

// Indices sorted by decreasing magnitude, lowest index first on ties.
IndexList ranked(const rvec& mag) {
  IndexList idx(static_cast<std::size_t>(mag.size()));
  std::iota(idx.begin(), idx.end(), Index{0});
  std::stable_sort(idx.begin(), idx.end(), [&](Index a, Index b) { return mag(a) > mag(b); });
  return idx;
}

cvec residual(const PartialMatrix& A, const cvec& y, const cvec& X) { return y - A.A * X; }

void finish(ReconResult& r, const PartialMatrix& A, const cvec& y) {
  std::sort(r.support.begin(), r.support.end());
  r.residual_norm = residual(A, y, r.coefficients).norm();
}

}  // namespace

cvec ls_on_support(const PartialMatrix& A, const cvec& y, const IndexList& support) {
  if (y.size() != A.n_available()) throw InvalidArgument("ls_on_support: measurement length mismatch");
  cvec X = cvec::Zero(A.N);
  if (support.empty()) return X;
  if (static_cast<Index>(support.size()) > A.n_available())
    throw NumericFailure("ls_on_support: support " + describe(support) + " larger than the measurement count");
  const cmat AK = columns(A.A, support);
  Eigen::ColPivHouseholderQR<cmat> qr(AK);
  if (qr.rank() < AK.cols()) throw NumericFailure("ls_on_support: rank-deficient submatrix on support " + describe(support));
  const cvec XK = qr.solve(y);
  for (std::size_t j = 0; j < support.size(); ++j) X(support[j]) = XK(static_cast<Index>(j));
  return X;
}

ReconResult omp(const PartialMatrix& A, const cvec& y, const ReconConfig& cfg) {
  if (cfg.max_iter < 1 || cfg.r < 1 || cfg.eps < 0.0) throw InvalidArgument("omp: invalid configuration");
  ReconResult res;
  res.coefficients = cvec::Zero(A.N);
  cvec e = y;
  if (e.norm() <= cfg.eps) {
    res.residual_norm = e.norm();
    return res;
  }
  std::vector<bool> in(static_cast<std::size_t>(A.N), false);
  res.status = ReconStatus::MaxIter;
  while (res.iterations < cfg.max_iter) {
    const rvec mag = (A.proxy * e).cwiseAbs();
    int added = 0;
    const IndexList order = ranked(mag);
    if (static_cast<Index>(res.support.size()) + cfg.r > A.n_available()) {
      res.status = ReconStatus::Underdetermined;
      break;
    }
    for (Index k : order) {
      if (added == cfg.r) break;
      if (in[static_cast<std::size_t>(k)]) continue;
      in[static_cast<std::size_t>(k)] = true;
      res.support.push_back(k);
      ++added;
    }
    res.coefficients = ls_on_support(A, y, res.support);
    e = residual(A, y, res.coefficients);
    ++res.iterations;
    if (e.norm() <= cfg.eps) {
      res.status = ReconStatus::Converged;
      break;
    }
  }
  finish(res, A, y);
  return res;
}

ReconResult cosamp(const PartialMatrix& A, const cvec& y, Index K, const ReconConfig& cfg) {
  if (K < 1 || 2 * K > A.n_available()) throw InvalidArgument("cosamp: need 1 <= K and 2K <= N_A");
  ReconResult res;
  res.coefficients = cvec::Zero(A.N);
  cvec e = y;
  if (e.norm() <= cfg.eps) {
    res.residual_norm = e.norm();
    return res;
  }
  res.status = ReconStatus::MaxIter;
  while (res.iterations < cfg.max_iter) {
    const IndexList order = ranked((A.proxy * e).cwiseAbs());
    std::set<Index> merged(res.support.begin(), res.support.end());
    for (Index j = 0; j < 2 * K; ++j) merged.insert(order[static_cast<std::size_t>(j)]);
    if (static_cast<Index>(merged.size()) > A.n_available()) {
      res.status = ReconStatus::Underdetermined;
      break;
    }
    const IndexList T(merged.begin(), merged.end());
    const cmat AT = columns(A.A, T);
    const cvec b = Eigen::CompleteOrthogonalDecomposition<cmat>(AT).solve(y);
    const IndexList keep_order = ranked(b.cwiseAbs());
    IndexList next;
    for (Index j = 0; j < std::min<Index>(K, static_cast<Index>(T.size())); ++j)
      next.push_back(T[static_cast<std::size_t>(keep_order[static_cast<std::size_t>(j)])]);
    std::sort(next.begin(), next.end());
    const bool same = next == res.support;
    res.support = next;
    res.coefficients = ls_on_support(A, y, res.support);
    e = residual(A, y, res.coefficients);
    ++res.iterations;
    if (e.norm() <= cfg.eps) {
      res.status = ReconStatus::Converged;
      break;
    }
    if (same) {
      res.status = ReconStatus::Stalled;
      break;
    }
  }
  finish(res, A, y);
  return res;
}

double estimate_cs_noise_variance(const PartialMatrix& A, const cvec& y) {
  const double n = static_cast<double>(A.N);
  const double na = static_cast<double>(A.n_available());
  if (A.N < 2) return 0.0;
  if (A.kind == Kind::DFT) return y.squaredNorm() * (n - na) / (n - 1.0);
  const double energy = initial_estimate(A, y).squaredNorm();
  return na * (n - na) / (n * n * (n - 1.0)) * (n / na) * energy;
}

double reconstruction_threshold(const PartialMatrix& A, const cvec& y, double P_NN) {
  const double sigma = std::sqrt(estimate_cs_noise_variance(A, y));
  const ThresholdForm form = A.kind == Kind::DFT ? ThresholdForm::Log : ThresholdForm::Erf;
  return detection_threshold(sigma, A.N, 0, P_NN, form);
}

namespace {

// Detections above T, ignoring round-off level entries when T vanishes.
IndexList detect(const cvec& X0, double T, const std::vector<bool>* exclude) {
  const rvec mag = X0.cwiseAbs();
  const double floor = 1e-10 * mag.maxCoeff();
  const double thr = std::max(T, floor);
  IndexList out;
  for (Index k = 0; k < mag.size(); ++k) {
    if (exclude && (*exclude)[static_cast<std::size_t>(k)]) continue;
    if (mag(k) > thr) out.push_back(k);
  }
  return out;
}

}  // namespace

ReconResult threshold_single(const PartialMatrix& A, const cvec& y, double P_NN) {
  ReconResult res;
  res.coefficients = cvec::Zero(A.N);
  const cvec X0 = initial_estimate(A, y);
  const double T = reconstruction_threshold(A, y, P_NN);
  res.thresholds.push_back(T);
  res.iterations = 1;
  if (y.norm() == 0.0) {
    res.status = ReconStatus::EmptySupport;
    return res;
  }
  IndexList support = detect(X0, T, nullptr);
  if (support.empty()) {
    res.status = ReconStatus::EmptySupport;
    res.residual_norm = y.norm();
    return res;
  }
  if (static_cast<Index>(support.size()) > A.n_available()) {
    const rvec mag = X0.cwiseAbs();
    std::stable_sort(support.begin(), support.end(), [&](Index a, Index b) { return mag(a) > mag(b); });
    support.resize(static_cast<std::size_t>(A.n_available()));
    res.status = ReconStatus::Underdetermined;
  }
  std::sort(support.begin(), support.end());
  res.support = support;
  res.coefficients = ls_on_support(A, y, res.support);
  finish(res, A, y);
  return res;
}

ReconResult threshold_iterative(const PartialMatrix& A, const cvec& y, const ReconConfig& cfg) {
  ReconResult res;
  res.coefficients = cvec::Zero(A.N);
  std::vector<bool> in(static_cast<std::size_t>(A.N), false);
  cvec e = y;
  res.status = ReconStatus::MaxIter;
  while (res.iterations < cfg.max_iter) {
    if (e.squaredNorm() <= cfg.delta) {
      res.status = ReconStatus::Converged;
      break;
    }
    const cvec X0 = initial_estimate(A, e);
    const double T = reconstruction_threshold(A, e, cfg.P_NN);
    res.thresholds.push_back(T);
    const IndexList fresh = detect(X0, T, &in);
    if (fresh.empty()) {
      res.status = ReconStatus::NoDetection;
      break;
    }
    if (static_cast<Index>(res.support.size() + fresh.size()) > A.n_available()) {
      res.status = ReconStatus::Underdetermined;
      break;
    }
    for (Index k : fresh) {
      in[static_cast<std::size_t>(k)] = true;
      res.support.push_back(k);
    }
    std::sort(res.support.begin(), res.support.end());
    res.coefficients = ls_on_support(A, y, res.support);
    e = residual(A, y, res.coefficients);
    ++res.iterations;
  }
  if (res.status == ReconStatus::MaxIter && e.squaredNorm() <= cfg.delta) res.status = ReconStatus::Converged;
  finish(res, A, y);
  return res;
}

GradientResult gradient_recon(const cvec& x_with_gaps, const IndexList& missing, const TransformOperator& op,
                              const ReconConfig& cfg, int max_iter) {
  const Index N = op.size();
  if (x_with_gaps.size() != N) throw InvalidArgument("gradient_recon: signal length does not match operator");
  for (Index n : missing)
    if (n < 0 || n >= N) throw InvalidArgument("gradient_recon: missing index out of range");
  GradientResult res;
  res.x = x_with_gaps;
  if (missing.empty()) {
    res.converged = true;
    res.Tr_db = -std::numeric_limits<double>::infinity();
    return res;
  }
  for (Index n : missing) res.x(n) = 0.0;
  const bool complex_signal = res.x.imag().cwiseAbs().maxCoeff() > 0.0;
  const cmat& Phi = op.forward;
  rvec col_l1(N);
  for (Index n = 0; n < N; ++n) col_l1(n) = Phi.col(n).cwiseAbs().sum();

  double delta = cfg.delta_init > 0.0 ? cfg.delta_init : res.x.cwiseAbs().maxCoeff();
  if (delta == 0.0) delta = 1.0;
  const double cos_limit = std::cos(cfg.angle_deg * kPi / 180.0);
  const Index Q = static_cast<Index>(missing.size());
  const cplx jay(0.0, 1.0);

  res.measure_trace.push_back((Phi * res.x).cwiseAbs().sum());
  cvec g(Q);
  cvec g_prev;
  while (res.iterations < max_iter) {
    cvec x_p(Q);
    for (Index i = 0; i < Q; ++i) x_p(i) = res.x(missing[static_cast<std::size_t>(i)]);
    g_prev.resize(0);
    while (res.iterations < max_iter) {
      const cvec X = Phi * res.x;
      for (Index i = 0; i < Q; ++i) {
        const Index n = missing[static_cast<std::size_t>(i)];
        const auto col = Phi.col(n);
        const double gr =
            ((X + delta * col).cwiseAbs().sum() - (X - delta * col).cwiseAbs().sum()) / col_l1(n);
        double gi = 0.0;
        if (complex_signal)
          gi = ((X + (jay * delta) * col).cwiseAbs().sum() - (X - (jay * delta) * col).cwiseAbs().sum()) /
               col_l1(n);
        g(i) = cplx(gr, gi);
      }
      for (Index i = 0; i < Q; ++i) res.x(missing[static_cast<std::size_t>(i)]) -= cfg.mu_step * g(i);
      ++res.iterations;
      bool oscillating = false;
      if (g_prev.size() == Q) {
        const double num = (g_prev.adjoint() * g)(0).real();
        const double den = g_prev.norm() * g.norm();
        oscillating = den == 0.0 || num / den < cos_limit;
      }
      g_prev = g;
      if (oscillating) break;
    }
    delta /= cfg.delta_shrink;
    ++res.epochs;
    double num = 0.0;
    double den = 0.0;
    for (Index i = 0; i < Q; ++i) {
      const cplx v = res.x(missing[static_cast<std::size_t>(i)]);
      num += std::norm(x_p(i) - v);
      den += std::norm(v);
    }
    res.Tr_db = den == 0.0 ? -std::numeric_limits<double>::infinity() : 10.0 * std::log10(num / den);
    res.measure_trace.push_back((Phi * res.x).cwiseAbs().sum());
    if (res.Tr_db < cfg.T_stop_db) {
      res.converged = true;
      break;
    }
  }
  return res;
}

}  // namespace sparsetf
