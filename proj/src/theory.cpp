// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The sparsetf Authors

#include "sparsetf/theory.hpp"

#include <array>
#include <atomic>
#include <cmath>
#include <exception>
#include <limits>
#include <mutex>

namespace sparsetf {

namespace {

// Mean square over n of N c_k(n) c_kl(n) for orthonormal DCT-II rows.
double dct_factor(Index k, Index kl, Index N) {
  if (k == 0 || kl == 0) return 1.0;
  double f = 1.0;
  if (k == kl) f += 0.5;
  if (k + kl == N) f -= 0.5;
  return f;
}

Index find_component(const SparseModel& model, Index at) {
  for (Index l = 0; l < model.K(); ++l)
    if (model.positions[static_cast<std::size_t>(l)] == at) return l;
  return -1;
}

void check_model(const SparseModel& model, Index N_A) {
  if (model.amplitudes.size() != model.K())
    throw InvalidArgument("SparseModel: amplitude count does not match position count");
  if (N_A < 1 || N_A > model.size())
    throw InvalidArgument("missing-sample statistics: need 1 <= N_A <= N");
  for (Index p : model.positions)
    if (p < 0 || p >= model.size()) throw InvalidArgument("SparseModel: position out of range");
}

cvec coefficients_of(const SparseModel& model) {
  cvec X = cvec::Zero(model.size());
  for (Index l = 0; l < model.K(); ++l)
    X(model.positions[static_cast<std::size_t>(l)]) += model.amplitudes(l);
  return X;
}

}  // namespace

double normalized_noise_variance(Index N, Index N_A, double sum_a2) {
  const double n = static_cast<double>(N);
  const double na = static_cast<double>(N_A);
  if (N < 2) return 0.0;
  return na * (n - na) / (n * n * (n - 1.0)) * sum_a2;
}

double finite_population_variance(const cvec& w, Index N_A) {
  const Index N = w.size();
  if (N_A < 0 || N_A > N) throw InvalidArgument("finite_population_variance: N_A out of range");
  if (N < 2) return 0.0;
  const cplx mean = w.mean();
  const double popvar = (w.array() - mean).abs2().sum() / static_cast<double>(N);
  return static_cast<double>(N_A) * static_cast<double>(N - N_A) / static_cast<double>(N - 1) * popvar;
}

double exact_sampling_variance(const TransformOperator& op, const cvec& x, Index k, Index N_A) {
  if (k < 0 || k >= op.size()) throw InvalidArgument("exact_sampling_variance: index out of range");
  const cvec w = op.forward.row(k).transpose().cwiseProduct(x);
  return finite_population_variance(w, N_A);
}

VarianceReport missing_sample_variance(const SparseModel& model, Index N_A, Index at, const HermiteBasis* basis,
                                       const IndexList* support) {
  check_model(model, N_A);
  if (at < 0 || at >= model.size()) throw InvalidArgument("missing_sample_variance: position out of range");
  VarianceReport r;
  const Index comp = find_component(model, at);
  r.at_component = comp >= 0;
  const double sum_a2 = model.amplitudes.squaredNorm();
  const double na = static_cast<double>(N_A);

  switch (model.kind) {
    case Kind::DFT: {
      const double n = static_cast<double>(model.N);
      double others = sum_a2;
      if (comp >= 0) others -= model.amplitudes(comp) * model.amplitudes(comp);
      r.variance = model.N < 2 ? 0.0 : others * na * (n - na) / (n - 1.0);
      r.mean = comp >= 0 ? na * model.amplitudes(comp) : 0.0;
      r.scale_convention = "unnormalized";
      break;
    }
    case Kind::DCT1D: {
      const Index N = model.N;
      const double c = normalized_noise_variance(N, N_A, 1.0);
      double acc = 0.0;
      for (Index l = 0; l < model.K(); ++l) {
        const Index kl = model.positions[static_cast<std::size_t>(l)];
        double m = dct_factor(at, kl, N);
        if (at == kl) m -= 1.0;
        acc += model.amplitudes(l) * model.amplitudes(l) * m;
      }
      r.variance = c * acc;
      r.mean = comp >= 0 ? na / static_cast<double>(N) * model.amplitudes(comp) : 0.0;
      r.scale_convention = "normalized";
      break;
    }
    case Kind::DCT2D: {
      const Index M = model.rows;
      const Index N = model.N;
      const double c = normalized_noise_variance(M * N, N_A, 1.0);
      const Index p = at / N;
      const Index q = at % N;
      double acc = 0.0;
      for (Index l = 0; l < model.K(); ++l) {
        const Index pos = model.positions[static_cast<std::size_t>(l)];
        double m = dct_factor(p, pos / N, M) * dct_factor(q, pos % N, N);
        if (at == pos) m -= 1.0;
        acc += model.amplitudes(l) * model.amplitudes(l) * m;
      }
      r.variance = c * acc;
      r.mean = comp >= 0 ? na / static_cast<double>(M * N) * model.amplitudes(comp) : 0.0;
      r.scale_convention = "normalized";
      break;
    }
    case Kind::DHT1: {
      const Index N = model.N;
      const double n = static_cast<double>(N);
      const double c = normalized_noise_variance(N, N_A, 1.0);
      if (comp < 0) {
        r.variance = c * sum_a2;
        r.mean = 0.0;
      } else {
        HermiteBasis local;
        if (basis == nullptr || basis->N != N) {
          local = hermite_basis(N);
          basis = &local;
        }
        const double aq2 = model.amplitudes(comp) * model.amplitudes(comp);
        const rvec ratio = (basis->psi.row(at).transpose().array().square() / basis->psi_last_sq.array()).matrix();
        if (support == nullptr) {
          const double P = ratio.squaredNorm();
          r.variance = c * (aq2 * (P / n - 1.0) + sum_a2 - aq2);
        } else {
          double Pt = 0.0;
          for (Index idx : *support) Pt += ratio(idx) * ratio(idx);
          r.variance = (n - na) / (n * (n - 1.0)) * aq2 * (Pt / n - 1.0) + c * (sum_a2 - aq2);
          r.realization_specific = true;
        }
        r.variance = std::max(r.variance, 0.0);
        r.mean = na / n * model.amplitudes(comp);
      }
      r.scale_convention = "normalized";
      break;
    }
    case Kind::DHT2: {
      const TransformOperator op = build_transform(Kind::DHT2, model.N);
      const cvec x = op.inverse * coefficients_of(model);
      r.variance = exact_sampling_variance(op, x, at, N_A);
      r.mean = comp >= 0 ? na / static_cast<double>(model.N) * model.amplitudes(comp) : 0.0;
      r.scale_convention = "normalized";
      break;
    }
  }
  return r;
}

double dct2d_average_variance(const SparseModel& model, Index N_A) {
  if (model.kind != Kind::DCT2D) throw InvalidArgument("dct2d_average_variance: model must be DCT2D");
  check_model(model, N_A);
  double acc = 0.0;
  Index count = 0;
  for (Index at = 0; at < model.size(); ++at) {
    if (find_component(model, at) >= 0) continue;
    acc += missing_sample_variance(model, N_A, at).variance;
    ++count;
  }
  return count == 0 ? 0.0 : acc / static_cast<double>(count);
}

double dht1_noise_average_variance(const SparseModel& model, Index N_A, const HermiteBasis* basis) {
  if (model.kind != Kind::DHT1) throw InvalidArgument("dht1_noise_average_variance: model must be DHT1");
  check_model(model, N_A);
  const Index N = model.N;
  if (model.K() >= N) return 0.0;
  HermiteBasis local;
  if (basis == nullptr || basis->N != N) {
    local = hermite_basis(N);
    basis = &local;
  }
  const double n = static_cast<double>(N);
  const double na = static_cast<double>(N_A);
  // Summed over every p, sum_n w_p(n)^2 equals sum A^2 (Christoffel-Darboux plus
  // quadrature exactness); the noise positions get what the components leave.
  rvec xs = rvec::Zero(N);
  for (Index l = 0; l < model.K(); ++l)
    xs += model.amplitudes(l) * basis->psi.row(model.positions[static_cast<std::size_t>(l)]).transpose();
  const rvec g = (xs.array() / basis->psi_last_sq.array()).matrix() / n;
  double at_components = 0.0;
  for (Index p : model.positions) at_components += (basis->psi.row(p).transpose().cwiseProduct(g)).squaredNorm();
  const double per_position = (model.amplitudes.squaredNorm() - at_components) / n / static_cast<double>(N - model.K());
  return na * (n - na) / (n - 1.0) * per_position;
}

double dct2d_average_variance_approx(const SparseModel& model, Index N_A) {
  if (model.kind != Kind::DCT2D) throw InvalidArgument("dct2d_average_variance_approx: model must be DCT2D");
  check_model(model, N_A);
  const double mn = static_cast<double>(model.size());
  return normalized_noise_variance(model.size(), N_A, model.amplitudes.squaredNorm()) * (mn - 21.0 / 4.0) /
         (mn - 1.0);
}

AwgnReport awgn_dht1_variance(const HermiteBasis& basis, double sigma2) {
  if (sigma2 < 0.0) throw InvalidArgument("awgn_dht1_variance: variance must be nonnegative");
  const double n2 = static_cast<double>(basis.N) * static_cast<double>(basis.N);
  const rvec inv4 = basis.psi_last_sq.array().square().inverse();
  AwgnReport r;
  r.per_index = (basis.psi.array().square().matrix() * inv4) / n2 * sigma2;
  r.mean = basis.psi_last_sq.array().inverse().sum() / n2 * sigma2;
  return r;
}

double detection_threshold(double sigma, Index N, Index K, double P_NN, ThresholdForm form) {
  if (!(P_NN > 0.0 && P_NN < 1.0)) throw InvalidArgument("detection_threshold: P_NN must lie in (0,1)");
  if (N - K < 1) throw InvalidArgument("detection_threshold: N - K must be positive");
  if (sigma <= 0.0) return 0.0;
  const double e = static_cast<double>(N - K);
  if (form == ThresholdForm::Log) return std::sqrt(-sigma * sigma * std::log1p(-std::pow(P_NN, 1.0 / e)));
  const double a = 0.147;
  const double L = std::log1p(-std::pow(P_NN, 2.0 / e));
  const double b = 4.0 / kPi + a * L;
  return sigma * std::sqrt((std::sqrt(b * b - 4.0 * a * L) - b) / a);
}

double detection_threshold_exact(double sigma, Index N, Index K, double P_NN) {
  if (!(P_NN > 0.0 && P_NN < 1.0)) throw InvalidArgument("detection_threshold_exact: P_NN must lie in (0,1)");
  if (sigma <= 0.0) return 0.0;
  const double z = std::pow(P_NN, 1.0 / static_cast<double>(N - K));
  double lo = 0.0;
  double hi = 1.0;
  while (std::erf(hi) < z) hi *= 2.0;
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    (std::erf(mid) < z ? lo : hi) = mid;
  }
  return std::sqrt(2.0) * sigma * 0.5 * (lo + hi);
}

double folded_normal_pdf(double x, double mean, double sigma) {
  if (x < 0.0) return 0.0;
  const double s = sigma * std::sqrt(2.0 * kPi);
  const double a = (x - mean) / sigma;
  const double b = (x + mean) / sigma;
  return (std::exp(-0.5 * a * a) + std::exp(-0.5 * b * b)) / s;
}

double half_normal_pdf(double x, double sigma) { return folded_normal_pdf(x, 0.0, sigma); }

namespace {

constexpr std::array<double, 8> kKronrodX = {0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
                                             0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
                                             0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
                                             0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr std::array<double, 8> kKronrodW = {0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
                                             0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
                                             0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
                                             0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr std::array<double, 4> kGaussW = {0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
                                           0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

double gk15(const std::function<double(double)>& f, double a, double b, double& err) {
  const double c = 0.5 * (a + b);
  const double h = 0.5 * (b - a);
  const double fc = f(c);
  double k = kKronrodW[7] * fc;
  double g = kGaussW[3] * fc;
  for (int i = 0; i < 7; ++i) {
    const double dx = h * kKronrodX[static_cast<std::size_t>(i)];
    const double s = f(c - dx) + f(c + dx);
    k += kKronrodW[static_cast<std::size_t>(i)] * s;
    if (i % 2 == 1) g += kGaussW[static_cast<std::size_t>(i / 2)] * s;
  }
  err = std::abs((k - g) * h);
  return k * h;
}

double adapt(const std::function<double(double)>& f, double a, double b, double tol, int depth) {
  double err = 0.0;
  const double v = gk15(f, a, b, err);
  if (err <= tol || b - a < 1e-14 * (1.0 + std::abs(a))) return v;
  if (depth <= 0) throw NumericFailure("integrate: adaptive quadrature did not converge");
  const double m = 0.5 * (a + b);
  return adapt(f, a, m, 0.5 * tol, depth - 1) + adapt(f, m, b, 0.5 * tol, depth - 1);
}

}  // namespace

double integrate(const std::function<double(double)>& f, double a, double b, double abs_tol, int max_depth) {
  if (b == a) return 0.0;
  if (b < a) return -integrate(f, b, a, abs_tol, max_depth);
  return adapt(f, a, b, abs_tol, max_depth);
}

ProbabilityReport detection_error_probability(const SparseModel& model, Index N_A, PeMethod method,
                                              const HermiteBasis* basis) {
  check_model(model, N_A);
  ProbabilityReport rep;
  rep.method = method;
  const Index K = model.K();
  rep.pe = rvec::Zero(K);
  const Index N = model.size();
  const double expo = static_cast<double>(N - K);
  const bool complex_noise = model.kind == Kind::DFT;

  HermiteBasis local;
  if (model.kind == Kind::DHT1 && (basis == nullptr || basis->N != model.N)) {
    local = hermite_basis(model.N);
    basis = &local;
  }

  // Noise-position variance: evaluate at a position that is neither a component nor a coupled index.
  double sigma_n2;
  if (model.kind == Kind::DFT) {
    const double n = static_cast<double>(N);
    sigma_n2 = model.amplitudes.squaredNorm() * static_cast<double>(N_A) * (n - N_A) / (n - 1.0);
  } else {
    sigma_n2 = normalized_noise_variance(N, N_A, model.amplitudes.squaredNorm());
  }
  const double sigma_n = std::sqrt(sigma_n2);

  auto noise_cdf = [&](double xi) {
    if (xi <= 0.0) return 0.0;
    if (complex_noise) return std::pow(-std::expm1(-xi * xi / sigma_n2), expo);
    return std::pow(std::erf(xi / (std::sqrt(2.0) * sigma_n)), expo);
  };

  for (Index q = 0; q < K; ++q) {
    if (sigma_n == 0.0) {
      rep.pe(q) = 0.0;
      continue;
    }
    const VarianceReport vr =
        missing_sample_variance(model, N_A, model.positions[static_cast<std::size_t>(q)], basis, nullptr);
    const double mu = std::abs(vr.mean);
    // Complex DFT coefficients: per-dimension spread of the component is half its variance.
    const double sc = std::sqrt(complex_noise ? 0.5 * vr.variance : vr.variance);
    double pe;
    if (method == PeMethod::Approximation) {
      pe = 1.0 - noise_cdf(std::max(mu - 1.5 * sc, 0.0));
    } else if (sc == 0.0) {
      pe = 1.0 - noise_cdf(mu);
    } else {
      auto integrand = [&](double xi) { return (1.0 - noise_cdf(xi)) * folded_normal_pdf(xi, mu, sc); };
      pe = integrate(integrand, 0.0, mu + 10.0 * sc, 1e-10);
    }
    rep.pe(q) = std::clamp(pe, 0.0, 1.0);
  }
  return rep;
}

double nonsparse_error_energy(Index K, Index N_total, Index N_A, double unrec_energy, double sigma2_eps,
                              bool two_dimensional) {
  if (K < 0 || N_A < 1 || N_total < 2 || unrec_energy < 0.0 || sigma2_eps < 0.0)
    throw InvalidArgument("nonsparse_error_energy: invalid inputs");
  const double k = static_cast<double>(K);
  const double n = static_cast<double>(N_total);
  const double na = static_cast<double>(N_A);
  double e = k * (n - na) / (na * (n - 1.0)) * unrec_energy;
  if (!two_dimensional) e += k / na * sigma2_eps * n;
  return e;
}

double snr_after_reconstruction(double snr_in_db, Index K, Index N_A) {
  if (K < 1 || K > N_A) throw InvalidArgument("snr_after_reconstruction: need 1 <= K <= N_A");
  return snr_in_db - 10.0 * std::log10(static_cast<double>(K) / static_cast<double>(N_A));
}

SparsityBound sparsity_bound(Index N, Index N_A, double c) {
  if (N_A < 1 || N_A > N || !(c > 0.0)) throw InvalidArgument("sparsity_bound: invalid inputs");
  SparsityBound b;
  if (N_A == N) {
    b.unbounded = true;
    b.bound = std::numeric_limits<double>::infinity();
    b.K = std::numeric_limits<Index>::max();
    return b;
  }
  b.bound = static_cast<double>(N_A) * static_cast<double>(N - 1) / (c * c * static_cast<double>(N - N_A));
  b.K = static_cast<Index>(std::floor(b.bound));
  return b;
}

std::vector<rvec> mc_collect(const McEstimator& estimator, Index trials, std::uint64_t seed, unsigned threads) {
  if (trials < 1) throw InvalidArgument("mc_experiment: trials must be >= 1");
  std::vector<rvec> out(static_cast<std::size_t>(trials));
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<Index>(threads, trials));

  std::atomic<Index> next{0};
  std::mutex err_mutex;
  Index failed_trial = -1;
  std::string failure;
  auto worker = [&]() {
    for (;;) {
      const Index t = next.fetch_add(1);
      if (t >= trials) return;
      try {
        out[static_cast<std::size_t>(t)] = estimator(derive_seed(seed, static_cast<std::uint64_t>(t)), t);
      } catch (const std::exception& e) {
        std::lock_guard<std::mutex> lock(err_mutex);
        if (failed_trial < 0 || t < failed_trial) {
          failed_trial = t;
          failure = e.what();
        }
        next.store(trials);
        return;
      }
    }
  };
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (unsigned i = 0; i < threads; ++i) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  if (failed_trial >= 0)
    throw NumericFailure("mc_experiment: trial " + std::to_string(failed_trial) + " failed: " + failure);
  return out;
}

McResult mc_experiment(const McEstimator& estimator, Index trials, std::uint64_t seed, unsigned threads) {
  const std::vector<rvec> samples = mc_collect(estimator, trials, seed, threads);
  const Index dims = samples.front().size();
  for (const auto& s : samples)
    if (s.size() != dims) throw NumericFailure("mc_experiment: estimator output size changed between trials");
  McResult r;
  r.trials = trials;
  r.stats.resize(static_cast<std::size_t>(dims));
  const double n = static_cast<double>(trials);
  for (Index d = 0; d < dims; ++d) {
    double sum = 0.0;
    for (const auto& s : samples) sum += s(d);
    const double mean = sum / n;
    double ss = 0.0;
    for (const auto& s : samples) ss += (s(d) - mean) * (s(d) - mean);
    McStat& st = r.stats[static_cast<std::size_t>(d)];
    st.mean = mean;
    st.variance = trials > 1 ? ss / (n - 1.0) : 0.0;
    st.std_error = std::sqrt(st.variance / n);
  }
  return r;
}

}  // namespace sparsetf
