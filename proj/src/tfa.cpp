// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The sparsetf Authors

#include "sparsetf/tfa.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <limits>

namespace sparsetf {

namespace {

cmat dft_kernel(Index bins, Index lag_lo, Index lags, double scale) {
  cmat D(bins, lags);
  for (Index k = 0; k < bins; ++k)
    for (Index c = 0; c < lags; ++c) {
      const double m = static_cast<double>(lag_lo + c);
      D(k, c) = std::polar(1.0, -2.0 * kPi * scale * static_cast<double>(k) * m / static_cast<double>(bins));
    }
  return D;
}

void check_window(Index Nw, Index N) {
  if (Nw < 2 || Nw % 2 != 0) throw InvalidArgument("window length must be even and >= 2");
  if (Nw > N) throw InvalidArgument("window length exceeds signal length");
}

Index default_window(Index N) {
  Index w = N / 4;
  if (w % 2) ++w;
  return std::max<Index>(w, 2);
}

struct StftPlan {
  Index N = 0;
  Index Nw = 0;
  rvec w;
  cmat D;

  StftPlan(Index n, WindowType type, Index nw) : N(n), Nw(nw), w(window_values(type, nw)) {
    D = dft_kernel(Nw, -Nw / 2, Nw, 1.0);
  }

  cmat apply(const cvec& x) const {
    cmat F = cmat::Zero(Nw, N);
    for (Index n = 0; n < N; ++n)
      for (Index c = 0; c < Nw; ++c) {
        const Index src = n + c - Nw / 2;
        if (src >= 0 && src < N) F(c, n) = x(src) * w(c);
      }
    return D * F;
  }
};

cmat sm_from_stft(const cmat& S, Index L_d) {
  const Index K = S.rows();
  cmat out(K, S.cols());
  for (Index n = 0; n < S.cols(); ++n)
    for (Index k = 0; k < K; ++k) {
      double v = std::norm(S(k, n));
      for (Index i = 1; i <= L_d; ++i) {
        const Index kp = (k + i) % K;
        const Index km = ((k - i) % K + K) % K;
        v += 2.0 * std::real(S(kp, n) * std::conj(S(km, n)));
      }
      out(k, n) = v;
    }
  return out;
}

}  // namespace

std::string to_string(TfrKind kind) {
  switch (kind) {
    case TfrKind::STFT: return "stft";
    case TfrKind::SPEC: return "spec";
    case TfrKind::PWD: return "pwd";
    case TfrKind::SM: return "sm";
  }
  return "unknown";
}

TfrKind tfr_kind_from_string(const std::string& name) {
  if (name == "stft") return TfrKind::STFT;
  if (name == "spec") return TfrKind::SPEC;
  if (name == "pwd") return TfrKind::PWD;
  if (name == "sm") return TfrKind::SM;
  throw InvalidArgument("unknown TFR kind: " + name);
}

std::string to_string(WindowType w) {
  switch (w) {
    case WindowType::Rectangular: return "rect";
    case WindowType::Hann: return "hann";
    case WindowType::Hamming: return "hamming";
  }
  return "unknown";
}

WindowType window_from_string(const std::string& name) {
  if (name == "rect" || name == "rectangular") return WindowType::Rectangular;
  if (name == "hann") return WindowType::Hann;
  if (name == "hamming") return WindowType::Hamming;
  throw InvalidArgument("unknown window: " + name);
}

rvec window_values(WindowType type, Index Nw) {
  if (Nw < 1) throw InvalidArgument("window length must be positive");
  rvec w(Nw);
  for (Index c = 0; c < Nw; ++c) {
    const double arg = 2.0 * kPi * static_cast<double>(c - Nw / 2) / static_cast<double>(Nw);
    switch (type) {
      case WindowType::Rectangular: w(c) = 1.0; break;
      case WindowType::Hann: w(c) = 0.5 * (1.0 + std::cos(arg)); break;
      case WindowType::Hamming: w(c) = 0.54 + 0.46 * std::cos(arg); break;
    }
  }
  return w;
}

rmat TFRMatrix::real_values() const {
  if (kind == TfrKind::STFT) return values.cwiseAbs();
  return values.real();
}

TFRMatrix stft(const cvec& x, WindowType window, Index Nw, Index hop) {
  if (hop <= 0) throw InvalidArgument("stft: hop must be positive");
  const Index N = x.size();
  check_window(Nw, N);
  const StftPlan plan(N, window, Nw);
  TFRMatrix t;
  t.kind = TfrKind::STFT;
  t.window = window;
  t.window_length = Nw;
  t.hop = hop;
  if (hop == 1) {
    t.values = plan.apply(x);
  } else {
    const cmat full = plan.apply(x);
    const Index T = (N + hop - 1) / hop;
    t.values.resize(Nw, T);
    for (Index j = 0; j < T; ++j) t.values.col(j) = full.col(j * hop);
  }
  return t;
}

TFRMatrix spectrogram(const cvec& x, WindowType window, Index Nw, Index hop) {
  TFRMatrix t = stft(x, window, Nw, hop);
  t.kind = TfrKind::SPEC;
  t.values = t.values.cwiseAbs2().cast<cplx>();
  return t;
}

TFRMatrix wigner(const cvec& x, Index M, WindowType window) {
  const Index N = x.size();
  if (M < 4 || M % 2 != 0) throw InvalidArgument("wigner: M must be even and >= 4");
  const Index L = M / 2 - 1;
  const rvec w = window_values(window, M);
  const cmat D = dft_kernel(M, -L, 2 * L + 1, 1.0);
  cmat F = cmat::Zero(2 * L + 1, N);
  for (Index n = 0; n < N; ++n)
    for (Index m = -L; m <= L; ++m) {
      const Index a = n + m, b = n - m;
      if (a < 0 || a >= N || b < 0 || b >= N) continue;
      const double wm = w(m + M / 2) * w(-m + M / 2);
      F(m + L, n) = wm * x(a) * std::conj(x(b));
    }
  TFRMatrix t;
  t.kind = TfrKind::PWD;
  t.values = D * F;
  t.window = window;
  t.window_length = M;
  return t;
}

TFRMatrix smethod(const TFRMatrix& s, Index L_d) {
  if (s.kind != TfrKind::STFT) throw InvalidArgument("smethod: input must be an STFT");
  if (L_d < 0 || L_d >= s.bins()) throw InvalidArgument("smethod: L_d out of range");
  TFRMatrix t = s;
  t.kind = TfrKind::SM;
  t.L_d = L_d;
  t.values = sm_from_stft(s.values, L_d);
  return t;
}

double concentration_measure(const TFRMatrix& tfr) {
  if (!tfr.quadratic()) return tfr.values.cwiseAbs().sum();
  return tfr.values.cwiseAbs().cwiseSqrt().sum();
}

IfEstimate estimate_if(const TFRMatrix& tfr) {
  if (tfr.values.size() == 0) throw InvalidArgument("estimate_if: empty TFR");
  const rmat v = tfr.real_values();
  IfEstimate e;
  e.bin.resize(static_cast<std::size_t>(v.cols()));
  for (Index n = 0; n < v.cols(); ++n) {
    Index best = 0;
    for (Index k = 1; k < v.rows(); ++k)
      if (v(k, n) > v(best, n)) best = k;
    e.bin[static_cast<std::size_t>(n)] = best;
  }
  e.degenerate = v.cwiseAbs().maxCoeff() == 0.0;
  return e;
}

namespace {

Index channel_length(const MultivariateSignal& x) {
  if (x.empty()) throw InvalidArgument("multivariate signal needs at least one channel");
  const Index N = x.front().size();
  for (const cvec& c : x)
    if (c.size() != N) throw InvalidArgument("channels must have equal lengths");
  if (N == 0) throw InvalidArgument("empty channels");
  return N;
}

cmat channel_matrix(const MultivariateSignal& x) {
  const Index N = channel_length(x);
  cmat X(N, static_cast<Index>(x.size()));
  for (std::size_t i = 0; i < x.size(); ++i) X.col(static_cast<Index>(i)) = x[i];
  return X;
}

}  // namespace

cmat mv_autocorrelation(const MultivariateSignal& x) {
  const cmat X = channel_matrix(x);
  cmat R = X * X.adjoint();
  return 0.5 * (R + R.adjoint());
}

cmat mv_autocorrelation_smethod(const MultivariateSignal& x, double theta_c, Index S) {
  if (!(theta_c > 0.0 && theta_c <= kPi)) throw InvalidArgument("theta_c must be in (0, pi]");
  if (S < 0) throw InvalidArgument("kernel half-length must be >= 0");
  const cmat X = channel_matrix(x);
  const Index N = X.rows();
  rvec h(2 * S + 1);
  for (Index s = -S; s <= S; ++s) {
    const double sd = static_cast<double>(s);
    const double core = s == 0 ? theta_c / kPi : std::sin(theta_c * sd) / (kPi * sd);
    const double taper = 0.5 * (1.0 + std::cos(kPi * sd / static_cast<double>(S + 1)));
    h(s + S) = core * taper;
  }
  h /= h.sum();
  cmat R = cmat::Zero(N, N);
  cmat Xs(N, X.cols());
  for (Index s = -S; s <= S; ++s) {
    Xs.setZero();
    for (Index n = 0; n < N; ++n)
      if (n + s >= 0 && n + s < N) Xs.row(n) = X.row(n + s);
    R.noalias() += h(s + S) * (Xs * Xs.adjoint());
  }
  return 0.5 * (R + R.adjoint());
}

EigenPairs hermitian_eigen(const cmat& R) {
  if (R.rows() != R.cols()) throw InvalidArgument("hermitian_eigen: matrix must be square");
  Eigen::SelfAdjointEigenSolver<cmat> es(R);
  if (es.info() != Eigen::Success) throw NumericFailure("hermitian_eigen: eigensolver failed");
  EigenPairs e;
  e.values = es.eigenvalues().reverse();
  e.vectors = es.eigenvectors().rowwise().reverse();
  return e;
}

Index count_components(const rvec& ev, double rel_threshold) {
  if (ev.size() == 0 || !(ev(0) > 0.0)) return 0;
  Index P = 0;
  for (Index p = 0; p < ev.size(); ++p)
    if (ev(p) >= rel_threshold * ev(0)) P = p + 1;
  return P;
}

namespace {

class MeasureEngine {
 public:
  MeasureEngine(const cmat& Q, const DecomposeConfig& cfg)
      : cfg_(cfg), N_(Q.rows()), Nw_(cfg.window_length > 0 ? cfg.window_length : default_window(Q.rows())),
        plan_(Q.rows(), cfg.window, Nw_) {
    if (cfg.tfr == TfrKind::PWD) {
      if (Nw_ < 4) throw InvalidArgument("decompose: window too short");
    } else {
      check_window(Nw_, N_);
    }
    if (cfg.tfr == TfrKind::SM && (cfg.L_d < 0 || cfg.L_d >= Nw_)) throw InvalidArgument("decompose: L_d out of range");
    refresh(Q);
  }

  bool linear() const { return cfg_.tfr != TfrKind::PWD; }

  void refresh(const cmat& Q) {
    Q_ = Q;
    G_ = Q.adjoint() * Q;
    if (!linear()) return;
    S_.resize(static_cast<std::size_t>(Q.cols()));
    for (Index p = 0; p < Q.cols(); ++p) S_[static_cast<std::size_t>(p)] = plan_.apply(Q.col(p));
  }

  const cmat& stft_of(Index p) const { return S_[static_cast<std::size_t>(p)]; }

  // Measure of (y + c q_p) / |y + c q_p| where y = Q beta with stft Sy.
  double probe(const cvec& beta, const cmat& Sy, Index p, cplx c) const {
    const cvec Gb = G_ * beta;
    const double ny2 = std::real(beta.dot(Gb)) + 2.0 * std::real(std::conj(c) * Gb(p)) + std::norm(c) * std::real(G_(p, p));
    const double nrm = std::sqrt(std::max(ny2, 0.0));
    if (!linear()) return direct(Q_ * beta + c * Q_.col(p), nrm);
    const cmat& Sp = stft_of(p);
    if (cfg_.tfr == TfrKind::SPEC) {
      double acc = 0.0;
      const Index n = Sy.size();
      const cplx* a = Sy.data();
      const cplx* b = Sp.data();
      for (Index j = 0; j < n; ++j) acc += std::abs(a[j] + c * b[j]);
      return acc / nrm;
    }
    return sm_measure(Sy + c * Sp) / nrm;
  }

  double value(const cvec& beta, const cmat& Sy) const {
    const double nrm = std::sqrt(std::max(std::real(beta.dot(G_ * beta)), 0.0));
    if (!linear()) return direct(Q_ * beta, nrm);
    if (cfg_.tfr == TfrKind::SPEC) return Sy.cwiseAbs().sum() / nrm;
    return sm_measure(Sy) / nrm;
  }

  cmat combine(const cvec& beta) const {
    if (!linear()) return cmat();
    cmat Sy = cmat::Zero(Nw_, N_);
    for (Index p = 0; p < beta.size(); ++p)
      if (beta(p) != cplx(0.0)) Sy += beta(p) * stft_of(p);
    return Sy;
  }

 private:
  double sm_measure(const cmat& S) const { return sm_from_stft(S, cfg_.L_d).cwiseAbs().cwiseSqrt().sum(); }

  double direct(const cvec& y, double nrm) const {
    const TFRMatrix w = wigner(y / nrm, Nw_, cfg_.window);
    return concentration_measure(w);
  }

  const DecomposeConfig& cfg_;
  Index N_;
  Index Nw_;
  StftPlan plan_;
  cmat Q_;
  cmat G_;
  std::vector<cmat> S_;
};

ConcentrationMinResult run_minimizer(const MeasureEngine& eng, const cmat& Q, Index i, const DecomposeConfig& cfg) {
  const Index P = Q.cols();
  ConcentrationMinResult r;
  r.beta = cvec::Zero(P);
  r.beta(i) = 1.0;
  // With a real basis the measure is symmetric under beta -> conj(beta), so the
  // imaginary probes cancel exactly at beta = e_i. Start off that line.
  if (Q.imag().cwiseAbs().maxCoeff() <= 1e-12 * Q.cwiseAbs().maxCoeff())
    for (Index p = 0; p < P; ++p)
      if (p != i) r.beta(p) = cplx(0.0, cfg.delta);
  cvec gamma = cvec::Zero(P);
  double M_old = std::numeric_limits<double>::infinity();
  double delta = cfg.delta;
  if (P > 1) {
    cmat Sy = eng.combine(r.beta);
    while (r.iterations < cfg.max_inner) {
      ++r.iterations;
      double M_cur = eng.value(r.beta, Sy);
      if (M_cur > M_old) {
        delta *= 0.5;
        r.beta += gamma;
        Sy = eng.combine(r.beta);
        M_cur = M_old;
      } else {
        M_old = M_cur;
        r.measure_trace.push_back(M_cur);
      }
      for (Index p = 0; p < P; ++p) {
        if (p == i) {
          gamma(p) = 0.0;
          continue;
        }
        const double mrp = eng.probe(r.beta, Sy, p, cplx(delta, 0.0));
        const double mrm = eng.probe(r.beta, Sy, p, cplx(-delta, 0.0));
        const double mip = eng.probe(r.beta, Sy, p, cplx(0.0, delta));
        const double mim = eng.probe(r.beta, Sy, p, cplx(0.0, -delta));
        gamma(p) = cplx(8.0 * delta * (mrp - mrm) / M_cur, 8.0 * delta * (mip - mim) / M_cur);
      }
      r.beta -= gamma;
      if (eng.linear())
        for (Index p = 0; p < P; ++p)
          if (gamma(p) != cplx(0.0)) Sy -= gamma(p) * eng.stft_of(p);
      if (gamma.squaredNorm() < cfg.eps) {
        r.converged = true;
        break;
      }
      if (delta < 1e-14) break;
    }
  } else {
    r.converged = true;
  }
  r.y = Q * r.beta;
  const double n = r.y.norm();
  if (!(n > 0.0)) throw NumericFailure("minimize_concentration: zero combination");
  r.y /= n;
  return r;
}

}  // namespace

ConcentrationMinResult minimize_concentration(const cmat& Q, Index i, const DecomposeConfig& cfg) {
  if (i < 0 || i >= Q.cols()) throw InvalidArgument("minimize_concentration: index out of range");
  const MeasureEngine eng(Q, cfg);
  return run_minimizer(eng, Q, i, cfg);
}

void deflate(cmat& Q, Index i) {
  const cvec qi = Q.col(i);
  for (Index k = i + 1; k < Q.cols(); ++k) {
    const cplx s = qi.dot(Q.col(k));
    const double d = 1.0 - std::norm(s);
    if (!(d > 1e-14)) throw NumericFailure("deflate: eigenvector collinear with extracted component");
    Q.col(k) = (Q.col(k) - s * qi) / std::sqrt(d);
  }
}

DecompositionResult decompose(const MultivariateSignal& x, const DecomposeConfig& cfg) {
  const Index N = channel_length(x);
  const cmat R = cfg.r_source == RSource::OuterProduct
                     ? mv_autocorrelation(x)
                     : mv_autocorrelation_smethod(x, cfg.sm_theta, cfg.sm_half > 0 ? cfg.sm_half : N / 4);
  const EigenPairs e = hermitian_eigen(R);
  DecompositionResult res;
  res.eigenvalues = e.values;
  res.P = cfg.P > 0 ? std::min(cfg.P, N) : count_components(e.values, cfg.rel_threshold);
  if (res.P < 1) throw InvalidArgument("decompose: no detectable components");
  cmat Q = e.vectors.leftCols(res.P);
  if (res.P == 1) {
    res.components = Q;
    res.converged = true;
    return res;
  }
  MeasureEngine eng(Q, cfg);
  for (int pass = 0; pass < cfg.max_outer; ++pass) {
    ++res.outer_iterations;
    int NU = 0;
    for (Index i = 0; i < res.P; ++i) {
      const ConcentrationMinResult m = run_minimizer(eng, Q, i, cfg);
      double bmax = 0.0;
      for (Index p = 0; p < res.P; ++p)
        if (p != i) bmax = std::max(bmax, std::abs(m.beta(p)));
      if (bmax <= cfg.beta_tol) continue;
      Q.col(i) = m.y;
      deflate(Q, i);
      eng.refresh(Q);
      ++NU;
    }
    res.updates += NU;
    if (NU == 0) {
      res.converged = true;
      break;
    }
  }
  res.components = Q;
  return res;
}

std::vector<double> match_components(const cmat& components, const std::vector<cvec>& truth) {
  std::vector<double> out;
  out.reserve(truth.size());
  for (const cvec& t : truth) {
    if (t.size() != components.rows()) throw InvalidArgument("match_components: length mismatch");
    const cvec tn = t.normalized();
    double best = 0.0;
    for (Index p = 0; p < components.cols(); ++p)
      best = std::max(best, std::abs(components.col(p).normalized().dot(tn)));
    out.push_back(best);
  }
  return out;
}

}  // namespace sparsetf
