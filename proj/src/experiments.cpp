// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The sparsetf Authors

#include "sparsetf/experiments.hpp"

#include "sparsetf/generators.hpp"
#include "sparsetf/measurement.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <random>

namespace sparsetf {

namespace {

TransformOperator model_operator(const SparseModel& m) {
  if (m.kind == Kind::DCT2D) return build_transform_2d(m.rows, m.N);
  return build_transform(m.kind, m.N);
}

cvec model_signal(const SparseModel& m, const TransformOperator& op) {
  const double scale = m.kind == Kind::DFT ? static_cast<double>(m.N) : 1.0;
  cvec X = cvec::Zero(m.size());
  for (Index l = 0; l < m.K(); ++l) X(m.positions[static_cast<std::size_t>(l)]) += scale * m.amplitudes(l);
  return op.inverse * X;
}

cvec zero_filled_estimate(const TransformOperator& op, const cvec& x, const IndexList& support) {
  cvec X0 = cvec::Zero(op.size());
  for (Index n : support) X0 += op.forward.col(n) * x(n);
  return X0;
}

std::vector<bool> component_mask(const SparseModel& m) {
  std::vector<bool> mask(static_cast<std::size_t>(m.size()), false);
  for (Index p : m.positions) mask[static_cast<std::size_t>(p)] = true;
  return mask;
}

double db(double v) { return 10.0 * std::log10(v); }

rvec as_rvec(const IndexList& v) {
  rvec r(static_cast<Index>(v.size()));
  for (std::size_t i = 0; i < v.size(); ++i) r(static_cast<Index>(i)) = static_cast<double>(v[i]);
  return r;
}

}  // namespace

std::vector<VariancePoint> variance_sweep(const SparseModel& model, const IndexList& N_A_values, Index trials,
                                          std::uint64_t seed, unsigned threads) {
  if (N_A_values.empty()) throw InvalidArgument("variance_sweep: empty sweep");
  const TransformOperator op = model_operator(model);
  const cvec x = model_signal(model, op);
  const Index N = model.size();
  const Index K = model.K();
  const std::vector<bool> comp = component_mask(model);
  HermiteBasis basis;
  if (model.kind == Kind::DHT1) basis = hermite_basis(model.N);
  const HermiteBasis* bp = model.kind == Kind::DHT1 ? &basis : nullptr;

  auto theory_at = [&](Index N_A, Index at) {
    if (model.kind == Kind::DHT2) return exact_sampling_variance(op, x, at, N_A);
    return missing_sample_variance(model, N_A, at, bp).variance;
  };

  std::vector<VariancePoint> out;
  for (std::size_t s = 0; s < N_A_values.size(); ++s) {
    const Index N_A = N_A_values[s];
    VariancePoint pt;
    pt.N_A = N_A;
    const bool realized = model.kind == Kind::DHT1;
    const McEstimator est = [&](std::uint64_t ts, Index) {
      const IndexList sup = sample_support(N, N_A, ts);
      const cvec X0 = zero_filled_estimate(op, x, sup);
      rvec o(2 * N + (realized ? K : 0));
      for (Index k = 0; k < N; ++k) {
        o(2 * k) = X0(k).real();
        o(2 * k + 1) = X0(k).imag();
      }
      if (realized)
        for (Index l = 0; l < K; ++l)
          o(2 * N + l) =
              missing_sample_variance(model, N_A, model.positions[static_cast<std::size_t>(l)], bp, &sup).variance;
      return o;
    };
    const McResult mc = mc_experiment(est, trials, derive_seed(seed, static_cast<std::uint64_t>(s)), threads);
    auto emp = [&](Index k) { return mc.stats[2 * k].variance + mc.stats[2 * k + 1].variance; };
    double th = 0.0, em = 0.0;
    Index count = 0;
    for (Index k = 0; k < N; ++k) {
      if (comp[static_cast<std::size_t>(k)]) continue;
      th += theory_at(N_A, k);
      em += emp(k);
      ++count;
    }
    pt.theory_noise = count ? th / static_cast<double>(count) : 0.0;
    pt.empirical_noise = count ? em / static_cast<double>(count) : 0.0;
    pt.theory_noise_exact =
        model.kind == Kind::DHT1 ? dht1_noise_average_variance(model, N_A, bp) : pt.theory_noise;
    pt.theory_component.resize(K);
    pt.empirical_component.resize(K);
    pt.theory_component_realized = rvec::Zero(realized ? K : 0);
    for (Index l = 0; l < K; ++l) {
      const Index at = model.positions[static_cast<std::size_t>(l)];
      pt.theory_component(l) = theory_at(N_A, at);
      pt.empirical_component(l) = emp(at);
      if (realized) pt.theory_component_realized(l) = mc.stats[2 * N + l].mean;
    }
    out.push_back(pt);
  }
  return out;
}

std::vector<PePoint> pe_sweep(const SparseModel& model, const IndexList& N_A_values, Index trials, std::uint64_t seed,
                              unsigned threads) {
  if (N_A_values.empty()) throw InvalidArgument("pe_sweep: empty sweep");
  const TransformOperator op = model_operator(model);
  const cvec x = model_signal(model, op);
  const Index N = model.size();
  const Index K = model.K();
  const std::vector<bool> comp = component_mask(model);
  HermiteBasis basis;
  if (model.kind == Kind::DHT1) basis = hermite_basis(model.N);
  const HermiteBasis* bp = model.kind == Kind::DHT1 ? &basis : nullptr;

  std::vector<PePoint> out;
  for (std::size_t s = 0; s < N_A_values.size(); ++s) {
    const Index N_A = N_A_values[s];
    PePoint pt;
    pt.N_A = N_A;
    pt.exact = detection_error_probability(model, N_A, PeMethod::Exact, bp).pe;
    pt.approx = detection_error_probability(model, N_A, PeMethod::Approximation, bp).pe;
    const McEstimator est = [&](std::uint64_t ts, Index) {
      const IndexList sup = sample_support(N, N_A, ts);
      const cvec X0 = zero_filled_estimate(op, x, sup);
      double noise_max = 0.0;
      for (Index k = 0; k < N; ++k)
        if (!comp[static_cast<std::size_t>(k)]) noise_max = std::max(noise_max, std::abs(X0(k)));
      rvec o(K);
      for (Index l = 0; l < K; ++l)
        o(l) = noise_max >= std::abs(X0(model.positions[static_cast<std::size_t>(l)])) ? 1.0 : 0.0;
      return o;
    };
    const McResult mc = mc_experiment(est, trials, derive_seed(seed, static_cast<std::uint64_t>(s)), threads);
    pt.empirical.resize(K);
    for (Index l = 0; l < K; ++l) pt.empirical(l) = mc.stats[static_cast<std::size_t>(l)].mean;
    out.push_back(pt);
  }
  return out;
}

std::vector<SnrPoint> snr_table(Index N, const rvec& amplitudes, double sigma2, double nominal_snr_db,
                                const IndexList& N_A_values, Index trials, std::uint64_t seed, unsigned threads) {
  if (N_A_values.empty()) throw InvalidArgument("snr_table: empty sweep");
  const Index K = amplitudes.size();
  if (K < 1 || K >= N) throw InvalidArgument("snr_table: need 1 <= K < N");
  const TransformOperator op = build_transform(Kind::DHT1, N);
  rvec unit(N);
  const double gain = std::sqrt(std::pow(10.0, nominal_snr_db / 10.0) * sigma2 / amplitudes.squaredNorm());
  for (Index p = 0; p < N; ++p) unit(p) = gain * std::sqrt(static_cast<double>(N)) / op.inverse.col(p).norm();
  const double sigma = std::sqrt(sigma2);

  std::vector<SnrPoint> out;
  for (std::size_t s = 0; s < N_A_values.size(); ++s) {
    const Index N_A = N_A_values[s];
    if (N_A < K || N_A > N) throw InvalidArgument("snr_table: need K <= N_A <= N");
    const McEstimator est = [&](std::uint64_t ts, Index) {
      const IndexList pos = random_permutation(N - 1, derive_seed(ts, 1), K);
      cvec C = cvec::Zero(N);
      for (Index l = 0; l < K; ++l) {
        const Index p = pos[static_cast<std::size_t>(l)] + 1;
        C(p) = amplitudes(l) * unit(p);
      }
      const cvec x = op.inverse * C;
      const cvec eps = white_noise(N, sigma, derive_seed(ts, 2), false);
      const IndexList sup = sample_support(N, N_A, derive_seed(ts, 3));
      const PartialMatrix pm = build_partial_matrix(op, sup);
      cvec y(N_A);
      double es = 0.0, en = 0.0;
      for (Index i = 0; i < N_A; ++i) {
        const Index n = sup[static_cast<std::size_t>(i)];
        y(i) = x(n) + eps(n);
        es += std::norm(x(n));
        en += std::norm(eps(n));
      }
      ReconConfig cfg;
      cfg.max_iter = static_cast<int>(K);
      cfg.eps = 0.0;
      const ReconResult r = omp(pm, y, cfg);
      const cvec xr = op.inverse * r.coefficients;
      IndexList found = r.support;
      std::sort(found.begin(), found.end());
      IndexList truth(pos.begin(), pos.begin() + K);
      for (Index& p : truth) ++p;
      std::sort(truth.begin(), truth.end());
      const double ok = found == truth ? 1.0 : 0.0;
      rvec o(5);
      o << es, en, ok * x.squaredNorm(), ok * (x - xr).squaredNorm(), ok;
      return o;
    };
    // Energies are averaged before the ratio: a per-trial dB average is biased
    // upward because the residual noise lives in only K coefficients. The law
    // presumes the support was found, so trials with a wrong support are
    // counted separately.
    const McResult mc = mc_experiment(est, trials, derive_seed(seed, static_cast<std::uint64_t>(s)), threads);
    SnrPoint pt;
    pt.N_A = N_A;
    pt.input_snr_db = db(mc.stats[0].mean / mc.stats[1].mean);
    pt.theory_db = snr_after_reconstruction(pt.input_snr_db, K, N_A);
    pt.empirical_db = db(mc.stats[2].mean / mc.stats[3].mean);
    pt.support_rate = mc.stats[4].mean;
    out.push_back(pt);
  }
  return out;
}

std::vector<NonsparsePoint> nonsparse_sweep(Index rows, Index cols, Index N_A, Index S, double sigma_eps,
                                            const IndexList& K_values, Index trials, std::uint64_t seed,
                                            unsigned threads) {
  if (K_values.empty()) throw InvalidArgument("nonsparse_sweep: empty sweep");
  const bool two_d = rows > 1;
  const TransformOperator op = two_d ? build_transform_2d(rows, cols) : build_transform(Kind::DCT1D, cols);
  const Index N = op.size();
  if (N_A < 1 || N_A > N) throw InvalidArgument("nonsparse_sweep: N_A out of range");
  rvec amps(N);
  for (Index l = 1; l <= N; ++l)
    amps(l - 1) = l <= S ? 1.0 : 0.5 * std::exp(-2.0 * static_cast<double>(l) / static_cast<double>(S + 1));
  const Index nk = static_cast<Index>(K_values.size());

  const McEstimator est = [&](std::uint64_t ts, Index) {
    const IndexList perm = random_permutation(N, derive_seed(ts, 1), N);
    cvec C(N);
    for (Index l = 0; l < N; ++l) C(perm[static_cast<std::size_t>(l)]) = amps(l);
    cvec x = op.inverse * C;
    if (sigma_eps > 0.0) x += white_noise(N, sigma_eps, derive_seed(ts, 2), false);
    const IndexList sup = sample_support(N, N_A, derive_seed(ts, 3));
    const PartialMatrix pm = build_partial_matrix(op, sup);
    const MeasurementSet ms = measure(x, sup);
    rvec o(3 * nk);
    for (Index j = 0; j < nk; ++j) {
      const Index K = K_values[static_cast<std::size_t>(j)];
      ReconConfig cfg;
      cfg.max_iter = static_cast<int>(K);
      cfg.eps = 0.0;
      const ReconResult r = omp(pm, ms.values, cfg);
      double err = 0.0, kept = 0.0;
      for (Index k : r.support) {
        err += std::norm(r.coefficients(k) - C(k));
        kept += std::norm(C(k));
      }
      const double unrec = C.squaredNorm() - kept;
      const Index Kr = static_cast<Index>(r.support.size());
      o(3 * j) = err / static_cast<double>(Kr);
      o(3 * j + 1) = nonsparse_error_energy(Kr, N, N_A, unrec, sigma_eps * sigma_eps, two_d) / static_cast<double>(Kr);
      o(3 * j + 2) = db(o(3 * j));
    }
    return o;
  };
  const McResult mc = mc_experiment(est, trials, seed, threads);
  std::vector<NonsparsePoint> out;
  for (Index j = 0; j < nk; ++j) {
    NonsparsePoint pt;
    pt.K = K_values[static_cast<std::size_t>(j)];
    pt.empirical_energy_db = db(mc.stats[static_cast<std::size_t>(3 * j)].mean);
    pt.theory_db = db(mc.stats[static_cast<std::size_t>(3 * j + 1)].mean);
    pt.empirical_db = mc.stats[static_cast<std::size_t>(3 * j + 2)].mean;
    out.push_back(pt);
  }
  return out;
}

ExperimentSpec default_experiment(const std::string& name) {
  ExperimentSpec s;
  s.name = name;
  if (name == "variance") {
    s.domain = Kind::DCT1D;
    s.N = 128;
    s.amplitudes = (rvec(3) << 1.0, 0.7, 0.5).finished();
    s.positions = {5, 20, 41};
    s.trials = 10000;
    s.sweep_variable = "N_A";
    s.sweep = {16, 32, 48, 64, 80, 96, 112};
  } else if (name == "pe") {
    s.domain = Kind::DHT1;
    s.N = 200;
    s.amplitudes = (rvec(5) << 1.0, 0.7, 0.5, 0.3, 0.2).finished();
    s.positions = {20, 54, 94, 162, 192};
    s.trials = 3000;
    s.sweep_variable = "N_A";
    s.sweep = {56, 78, 108, 154, 176};
  } else if (name == "snr") {
    s.domain = Kind::DHT1;
    s.N = 256;
    s.amplitudes = (rvec(3) << 1.0, 0.9, 0.6).finished();
    s.sigma = std::sqrt(0.1);
    s.snr_db = 7.67;
    s.trials = 500;
    s.sweep_variable = "N_A";
    s.sweep = {60, 120, 180, 240};
  } else if (name == "nonsparse") {
    s.domain = Kind::DCT1D;
    s.N = 256;
    s.N_A = 192;
    s.S = 10;
    s.sigma = 0.11 / 256.0;
    s.trials = 200;
    s.sweep_variable = "K";
    for (Index K = 3; K <= 32; ++K) s.sweep.push_back(K);
  } else if (name == "nonsparse2d") {
    s.domain = Kind::DCT2D;
    s.rows = 16;
    s.N = 16;
    s.N_A = 154;
    s.S = 10;
    s.trials = 100;
    s.sweep_variable = "K";
    for (Index K = 4; K <= 32; K += 4) s.sweep.push_back(K);
  } else {
    throw InvalidArgument("unknown experiment: " + name);
  }
  return s;
}

ExperimentSpec experiment_from_json(const io::json& j) {
  if (!j.contains("name")) throw InvalidArgument("experiment spec: missing name");
  ExperimentSpec s = default_experiment(j.at("name").get<std::string>());
  if (j.contains("domain")) s.domain = kind_from_string(j.at("domain").get<std::string>());
  if (j.contains("N")) s.N = j.at("N").get<Index>();
  if (j.contains("rows")) s.rows = j.at("rows").get<Index>();
  if (j.contains("amplitudes")) s.amplitudes = io::rvec_from_json(j.at("amplitudes"));
  if (j.contains("positions")) s.positions = j.at("positions").get<IndexList>();
  if (j.contains("sigma")) s.sigma = j.at("sigma").get<double>();
  if (j.contains("snr_db")) s.snr_db = j.at("snr_db").get<double>();
  if (j.contains("S")) s.S = j.at("S").get<Index>();
  if (j.contains("trials")) s.trials = j.at("trials").get<Index>();
  if (j.contains("seed")) s.seed = j.at("seed").get<std::uint64_t>();
  if (j.contains("sweep")) s.sweep = j.at("sweep").get<IndexList>();
  if (j.contains("N_A")) s.N_A = j.at("N_A").get<Index>();
  if (s.sweep.empty()) throw InvalidArgument("experiment spec: sweep range is empty");
  if (s.trials < 1) throw InvalidArgument("experiment spec: trials must be >= 1");
  if (static_cast<std::size_t>(s.amplitudes.size()) != s.positions.size() && (s.name == "variance" || s.name == "pe"))
    throw InvalidArgument("experiment spec: amplitudes and positions differ in length");
  return s;
}

io::json to_json(const ExperimentSpec& s) {
  return io::json{{"name", s.name},
                  {"domain", to_string(s.domain)},
                  {"N", s.N},
                  {"rows", s.rows},
                  {"amplitudes", io::to_json(s.amplitudes)},
                  {"positions", s.positions},
                  {"sigma", s.sigma},
                  {"snr_db", s.snr_db},
                  {"S", s.S},
                  {"trials", s.trials},
                  {"seed", s.seed},
                  {"sweep_variable", s.sweep_variable},
                  {"sweep", s.sweep},
                  {"N_A", s.N_A}};
}

ExperimentOutput run_experiment(const ExperimentSpec& s) {
  ExperimentOutput out;
  out.summary = io::json{{"experiment", to_json(s)}};
  const rvec xs = as_rvec(s.sweep);
  const Index P = static_cast<Index>(s.sweep.size());
  auto series = [&](const std::string& name, const rvec& v) { out.files.emplace_back(name, io::format_series(xs, v)); };

  if (s.name == "variance" || s.name == "pe") {
    SparseModel m;
    m.kind = s.domain;
    m.rows = s.rows;
    m.N = s.N;
    m.amplitudes = s.amplitudes;
    m.positions = s.positions;
    const Index K = m.K();
    io::json points = io::json::array();
    if (s.name == "variance") {
      const auto pts = variance_sweep(m, s.sweep, s.trials, s.seed, s.threads);
      rvec tn(P), en(P);
      rmat tc(P, K), ec(P, K);
      for (Index i = 0; i < P; ++i) {
        const VariancePoint& p = pts[static_cast<std::size_t>(i)];
        tn(i) = p.theory_noise;
        en(i) = p.empirical_noise;
        tc.row(i) = p.theory_component.transpose();
        ec.row(i) = p.empirical_component.transpose();
        io::json jp{{"N_A", p.N_A},
                    {"theory_noise", p.theory_noise},
                    {"theory_noise_exact", p.theory_noise_exact},
                    {"empirical_noise", p.empirical_noise},
                    {"theory_component", io::to_json(p.theory_component)},
                    {"empirical_component", io::to_json(p.empirical_component)}};
        if (p.theory_component_realized.size()) jp["theory_component_realized"] = io::to_json(p.theory_component_realized);
        points.push_back(jp);
      }
      series("noise_theory.csv", tn);
      series("noise_empirical.csv", en);
      for (Index l = 0; l < K; ++l) {
        series("component" + std::to_string(l + 1) + "_theory.csv", tc.col(l));
        series("component" + std::to_string(l + 1) + "_empirical.csv", ec.col(l));
      }
    } else {
      const auto pts = pe_sweep(m, s.sweep, s.trials, s.seed, s.threads);
      rmat ex(P, K), ap(P, K), em(P, K);
      for (Index i = 0; i < P; ++i) {
        const PePoint& p = pts[static_cast<std::size_t>(i)];
        ex.row(i) = p.exact.transpose();
        ap.row(i) = p.approx.transpose();
        em.row(i) = p.empirical.transpose();
        points.push_back(io::json{{"N_A", p.N_A},
                                  {"exact", io::to_json(p.exact)},
                                  {"approx", io::to_json(p.approx)},
                                  {"empirical", io::to_json(p.empirical)}});
      }
      for (Index l = 0; l < K; ++l) {
        const std::string b = "pe" + std::to_string(l + 1);
        series(b + "_exact.csv", ex.col(l));
        series(b + "_approx.csv", ap.col(l));
        series(b + "_empirical.csv", em.col(l));
      }
    }
    out.summary["points"] = points;
  } else if (s.name == "snr") {
    const auto pts = snr_table(s.N, s.amplitudes, s.sigma * s.sigma, s.snr_db, s.sweep, s.trials, s.seed, s.threads);
    rvec in(P), th(P), em(P);
    io::json points = io::json::array();
    for (Index i = 0; i < P; ++i) {
      const SnrPoint& p = pts[static_cast<std::size_t>(i)];
      in(i) = p.input_snr_db;
      th(i) = p.theory_db;
      em(i) = p.empirical_db;
      points.push_back(io::json{{"N_A", p.N_A},
                                {"input_snr_db", p.input_snr_db},
                                {"theory_db", p.theory_db},
                                {"empirical_db", p.empirical_db},
                                {"support_rate", p.support_rate}});
    }
    series("snr_input.csv", in);
    series("snr_theory.csv", th);
    series("snr_empirical.csv", em);
    out.summary["points"] = points;
  } else if (s.name == "nonsparse" || s.name == "nonsparse2d") {
    const Index rows = s.name == "nonsparse2d" ? s.rows : 1;
    const auto pts = nonsparse_sweep(rows, s.N, s.N_A, s.S, s.sigma, s.sweep, s.trials, s.seed, s.threads);
    rvec th(P), em(P);
    io::json points = io::json::array();
    for (Index i = 0; i < P; ++i) {
      const NonsparsePoint& p = pts[static_cast<std::size_t>(i)];
      th(i) = p.theory_db;
      em(i) = p.empirical_db;
      points.push_back(io::json{{"K", p.K},
                                {"theory_db", p.theory_db},
                                {"empirical_db", p.empirical_db},
                                {"empirical_energy_db", p.empirical_energy_db}});
    }
    series("error_theory.csv", th);
    series("error_empirical.csv", em);
    out.summary["points"] = points;
  } else {
    throw InvalidArgument("unknown experiment: " + s.name);
  }
  return out;
}

void write_experiment(const ExperimentOutput& out, const std::string& dir) {
  std::filesystem::create_directories(dir);
  const std::filesystem::path d(dir);
  io::write_file((d / "summary.json").string(), io::format_json(out.summary));
  for (const auto& [name, content] : out.files) io::write_file((d / name).string(), content);
}

}  // namespace sparsetf
