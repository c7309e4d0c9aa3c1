// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The sparsetf Authors

#include "sparsetf/experiments.hpp"
#include "sparsetf/generators.hpp"
#include "sparsetf/hermite_opt.hpp"
#include "sparsetf/io.hpp"
#include "sparsetf/measurement.hpp"
#include "sparsetf/recon.hpp"
#include "sparsetf/tfa.hpp"
#include "sparsetf/transforms.hpp"

#include <CLI11.hpp>

#include <cstdint>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

using namespace sparsetf;
using io::json;

namespace {

struct Common {
  std::uint64_t seed = 1;
  std::string out = "-";
  std::string format = "json";
};

void add_common(CLI::App* app, Common& c) {
  app->add_option("--seed", c.seed, "Random seed")->capture_default_str();
  app->add_option("--out", c.out, "Output path ('-' for stdout; a directory for mc)")->capture_default_str();
  app->add_option("--format", c.format, "Output format")->check(CLI::IsMember({"csv", "json"}))->capture_default_str();
}

void emit(const Common& c, const std::string& content) {
  if (c.out == "-" || c.out.empty())
    std::cout << content;
  else
    io::write_file(c.out, content);
}

// Writes doc as JSON, or the CSV rendering when --format csv is selected.
void emit(const Common& c, const json& doc, const std::string& csv) { emit(c, c.format == "csv" ? csv : io::format_json(doc)); }

cvec load_signal(const std::string& path) {
  const std::string text = io::read_file(path);
  if (text.rfind("RIFF", 0) == 0) {
    const io::WavData w = io::parse_wav(text);
    return w.samples.cast<cplx>();
  }
  std::size_t first = text.find_first_not_of(" \t\r\n");
  if (first != std::string::npos && text[first] == '{') {
    const json doc = io::parse_json(text);
    for (const char* key : {"x", "signal", "coefficients"})
      if (doc.contains(key)) return io::cvec_from_json(doc.at(key));
    throw InvalidArgument(path + ": JSON input needs an x, signal or coefficients field");
  }
  return io::parse_csv(text);
}

json index_list(const IndexList& v) {
  json a = json::array();
  for (Index i : v) a.push_back(i);
  return a;
}

TransformOperator make_operator(Kind kind, Index N, Index rows, double sigma) {
  if (kind == Kind::DCT2D) {
    if (rows < 1 || N % rows != 0) throw InvalidArgument("--rows must divide the signal length");
    return build_transform_2d(rows, N / rows);
  }
  return build_transform(kind, N, sigma);
}

MultivariateSignal load_channels(const std::vector<std::string>& paths) {
  MultivariateSignal x;
  for (const auto& p : paths) x.push_back(load_signal(p));
  return x;
}

std::string channel_path(const std::string& out, std::size_t c) {
  std::filesystem::path p(out);
  return (p.parent_path() / (p.stem().string() + ".ch" + std::to_string(c) + p.extension().string())).string();
}

int run(int argc, char** argv) {
  CLI::App app{"Sparse reconstruction and time-frequency decomposition toolkit"};
  app.require_subcommand(1);

  // gen
  Common gc;
  std::string g_model = "sparse", g_domain = "DCT1D";
  Index g_N = 128, g_K = 3, g_rows = 1;
  std::vector<double> g_amps;
  std::vector<Index> g_pos;
  double g_noise = 0.0, g_snr = 0.0, g_sigma0 = 2.1;
  auto* gen = app.add_subcommand("gen", "Generate a test signal");
  add_common(gen, gc);
  gen->add_option("--model", g_model, "sparse | random-sparse | gauss-sine | crossing_pair | bivariate_two | trivariate_five")
      ->capture_default_str();
  gen->add_option("--domain", g_domain, "DFT | DCT1D | DCT2D | DHT1 | DHT2")->capture_default_str();
  gen->add_option("--N", g_N, "Signal length (columns for DCT2D)")->capture_default_str();
  gen->add_option("--rows", g_rows, "Rows for DCT2D")->capture_default_str();
  gen->add_option("--K", g_K, "Sparsity for random-sparse")->capture_default_str();
  gen->add_option("--amplitudes", g_amps, "Component amplitudes");
  gen->add_option("--positions", g_pos, "Component positions");
  gen->add_option("--noise", g_noise, "Noise standard deviation (multivariate models)");
  gen->add_option("--snr", g_snr, "Add white noise at this SNR in dB (0 disables)");
  gen->add_option("--sigma0", g_sigma0, "Width parameter for gauss-sine")->capture_default_str();

  // transform
  Common tc;
  std::string t_in, t_domain = "DFT";
  bool t_inverse = false;
  double t_sigma = 1.0;
  Index t_rows = 1;
  auto* tr = app.add_subcommand("transform", "Apply a forward or inverse transform");
  add_common(tr, tc);
  tr->add_option("--in", t_in, "Input signal (CSV, JSON or WAV)")->required();
  tr->add_option("--domain", t_domain)->capture_default_str();
  tr->add_option("--rows", t_rows, "Rows for DCT2D")->capture_default_str();
  tr->add_option("--sigma", t_sigma, "Hermite scale")->capture_default_str();
  tr->add_flag("--inverse", t_inverse, "Inverse transform");

  // reconstruct
  Common rc;
  std::string r_in, r_domain = "DCT1D", r_algo = "omp";
  Index r_NA = 0, r_K = 0, r_rows = 1;
  double r_pnn = 0.99;
  auto* re = app.add_subcommand("reconstruct", "Reconstruct a signal from a random subset of its samples");
  add_common(re, rc);
  re->add_option("--in", r_in, "Full signal; samples are dropped at random")->required();
  re->add_option("--domain", r_domain)->capture_default_str();
  re->add_option("--rows", r_rows, "Rows for DCT2D")->capture_default_str();
  re->add_option("--NA", r_NA, "Number of available samples")->required();
  re->add_option("--algo", r_algo)->check(CLI::IsMember({"omp", "cosamp", "threshold", "iterative", "gradient"}))
      ->capture_default_str();
  re->add_option("--K", r_K, "Sparsity (OMP iterations, CoSaMP K)");
  re->add_option("--pnn", r_pnn, "Threshold probability")->capture_default_str();

  // denoise
  Common dc;
  std::string d_in, d_domain = "DHT1";
  double d_sigma = 0.0, d_alpha = 3.0;
  auto* dn = app.add_subcommand("denoise", "Hard-threshold denoising in a transform domain");
  add_common(dn, dc);
  dn->add_option("--in", d_in)->required();
  dn->add_option("--domain", d_domain)->capture_default_str();
  dn->add_option("--sigma-eps", d_sigma, "Noise standard deviation")->required();
  dn->add_option("--alpha", d_alpha, "Threshold multiplier")->capture_default_str();

  // optimize-hermite
  Common oc;
  std::string o_in;
  ScaleOptConfig o_cfg;
  Index o_lmax = 0;
  double o_targetE = 0.10;
  auto* oh = app.add_subcommand("optimize-hermite", "Optimize the Hermite scale and shift, then compress");
  add_common(oh, oc);
  oh->add_option("--in", o_in, "Uniformly sampled signal (defaults to the built-in Gaussian-windowed sine)");
  oh->add_option("--mu", o_cfg.mu, "Gradient step")->capture_default_str();
  oh->add_option("--lmax", o_lmax, "Largest integer shift tried")->capture_default_str();
  oh->add_option("--targetE", o_targetE, "Relative error budget for compression")->capture_default_str();

  // decompose
  Common xc;
  std::string x_model;
  std::vector<std::string> x_in;
  double x_noise = 0.0;
  std::string x_tfr = "spec", x_window = "hann", x_rsource = "outer";
  DecomposeConfig x_cfg;
  auto* de = app.add_subcommand("decompose", "Decompose a multivariate multicomponent signal");
  add_common(de, xc);
  de->add_option("--model", x_model, "Built-in model: crossing_pair | bivariate_two | trivariate_five");
  de->add_option("--in", x_in, "One input file per channel");
  de->add_option("--noise", x_noise, "Noise standard deviation for built-in models");
  de->add_option("--tfr", x_tfr, "spec | sm | pwd")->capture_default_str();
  de->add_option("--window", x_window)->capture_default_str();
  de->add_option("--Nw", x_cfg.window_length, "Window length (0 selects N/4)")->capture_default_str();
  de->add_option("--Ld", x_cfg.L_d, "S-method width")->capture_default_str();
  de->add_option("--P", x_cfg.P, "Number of components (0 counts eigenvalues)")->capture_default_str();
  de->add_option("--rsource", x_rsource)->check(CLI::IsMember({"outer", "smethod"}))->capture_default_str();

  // tfr
  Common fc;
  std::string f_in, f_kind = "spec", f_window = "hann", f_pgm;
  Index f_Nw = 64, f_hop = 1, f_Ld = 3;
  double f_range = 60.0;
  auto* tf = app.add_subcommand("tfr", "Compute a time-frequency representation");
  add_common(tf, fc);
  tf->add_option("--in", f_in)->required();
  tf->add_option("--kind", f_kind, "stft | spec | pwd | sm")->capture_default_str();
  tf->add_option("--window", f_window)->capture_default_str();
  tf->add_option("--Nw", f_Nw, "Window length (lags for PWD)")->capture_default_str();
  tf->add_option("--hop", f_hop)->capture_default_str();
  tf->add_option("--Ld", f_Ld, "S-method width")->capture_default_str();
  tf->add_option("--pgm", f_pgm, "Also write a log-scaled P5 image");
  tf->add_option("--range-db", f_range, "Image dynamic range")->capture_default_str();

  // mc
  Common mc;
  std::string m_name = "variance", m_spec;
  Index m_trials = 0;
  unsigned m_threads = 0;
  auto* mcc = app.add_subcommand("mc", "Run a Monte-Carlo experiment");
  add_common(mcc, mc);
  mcc->add_option("--experiment", m_name, "variance | pe | snr | nonsparse | nonsparse2d")->capture_default_str();
  mcc->add_option("--spec", m_spec, "JSON experiment spec (overrides --experiment)");
  mcc->add_option("--trials", m_trials, "Override the trial count");
  mcc->add_option("--threads", m_threads, "Worker threads (0 = hardware)");

  CLI11_PARSE(app, argc, argv);

  if (*gen) {
    const bool multivariate = g_model == "crossing_pair" || g_model == "bivariate_two" || g_model == "trivariate_five";
    if (multivariate) {
      const MultivariateModel m = multivariate_model(g_model, gc.seed, g_noise);
      json chans = json::array(), comps = json::array();
      for (const cvec& c : m.channels) chans.push_back(io::to_json(c));
      for (const cvec& c : m.components) comps.push_back(io::to_json(c));
      const json doc{{"model", m.name}, {"seed", gc.seed}, {"t", io::to_json(m.t)}, {"channels", chans},
                     {"components", comps}};
      if (gc.format == "csv") {
        if (gc.out == "-") throw InvalidArgument("multichannel CSV output needs --out");
        for (std::size_t c = 0; c < m.channels.size(); ++c)
          io::write_file(channel_path(gc.out, c), io::format_csv(m.channels[c]));
      } else {
        emit(gc, io::format_json(doc));
      }
      return 0;
    }
    cvec x;
    json doc{{"model", g_model}};
    if (g_model == "gauss-sine") {
      const Signal s = gaussian_sine_signal(g_N, g_sigma0);
      x = s.values;
    } else if (g_model == "sparse" || g_model == "random-sparse") {
      const Kind kind = kind_from_string(g_domain);
      SparseSignal s;
      if (g_model == "sparse") {
        if (g_amps.empty() || g_amps.size() != g_pos.size())
          throw InvalidArgument("--amplitudes and --positions must be non-empty and of equal length");
        s = sparse_signal(kind, g_N, Eigen::Map<const rvec>(g_amps.data(), static_cast<Index>(g_amps.size())), g_pos,
                          kind == Kind::DFT, gc.seed, g_rows);
      } else {
        s = random_sparse_signal(kind, g_N, g_K, gc.seed, 0.5, 1.5, g_rows);
      }
      x = s.x;
      doc["domain"] = to_string(kind);
      doc["support"] = index_list(s.support);
      doc["coefficients"] = io::to_json(s.coefficients);
    } else {
      throw InvalidArgument("unknown model: " + g_model);
    }
    if (g_snr != 0.0) x = add_awgn(x, g_snr, derive_seed(gc.seed, 7), !x.imag().isZero(0.0));
    doc["seed"] = gc.seed;
    doc["x"] = io::to_json(x);
    emit(gc, doc, io::format_csv(x));
    return 0;
  }

  if (*tr) {
    const cvec x = load_signal(t_in);
    const TransformOperator op = make_operator(kind_from_string(t_domain), x.size(), t_rows, t_sigma);
    const cvec y = transform(op, x, t_inverse ? Direction::Inverse : Direction::Forward);
    const json doc{{"domain", to_string(op.kind)}, {"direction", t_inverse ? "inverse" : "forward"},
                   {"convention", op.norm_convention}, {"x", io::to_json(y)}};
    emit(tc, doc, io::format_csv(y));
    return 0;
  }

  if (*re) {
    const cvec x = load_signal(r_in);
    const TransformOperator op = make_operator(kind_from_string(r_domain), x.size(), r_rows, 1.0);
    const Index N = x.size();
    const IndexList sup = sample_support(N, r_NA, rc.seed);
    json doc{{"domain", to_string(op.kind)}, {"algorithm", r_algo}, {"N", N}, {"N_A", r_NA},
             {"available", index_list(sup)}};
    cvec coef, xr;
    if (r_algo == "gradient") {
      const MeasurementSet ms = measure(x, sup);
      const IndexList miss = ms.missing();
      cvec gapped = x;
      for (Index n : miss) gapped(n) = 0.0;
      const GradientResult g = gradient_recon(gapped, miss, op);
      xr = g.x;
      coef = op.forward * xr;
      doc["iterations"] = g.iterations;
      doc["Tr_db"] = g.Tr_db;
      doc["converged"] = g.converged;
    } else {
      const PartialMatrix pm = build_partial_matrix(op, sup);
      const MeasurementSet ms = measure(x, sup);
      ReconConfig cfg;
      if (r_K > 0) cfg.max_iter = static_cast<int>(r_K);
      cfg.P_NN = r_pnn;
      ReconResult r;
      if (r_algo == "omp")
        r = omp(pm, ms.values, cfg);
      else if (r_algo == "cosamp")
        r = cosamp(pm, ms.values, r_K > 0 ? r_K : 1, cfg);
      else if (r_algo == "threshold")
        r = threshold_single(pm, ms.values, r_pnn);
      else
        r = threshold_iterative(pm, ms.values, cfg);
      coef = r.coefficients;
      xr = op.inverse * coef;
      doc["support"] = index_list(r.support);
      doc["iterations"] = r.iterations;
      doc["residual_norm"] = r.residual_norm;
      doc["status"] = to_string(r.status);
    }
    doc["coefficients"] = io::to_json(coef);
    doc["x"] = io::to_json(xr);
    emit(rc, doc, io::format_csv(xr));
    return 0;
  }

  if (*dn) {
    const cvec x = load_signal(d_in);
    const Kind kind = kind_from_string(d_domain);
    const cvec y = denoise_hard_threshold(x, d_sigma, d_alpha, kind);
    const json doc{{"domain", to_string(kind)}, {"sigma_eps", d_sigma}, {"alpha", d_alpha}, {"x", io::to_json(y)}};
    emit(dc, doc, io::format_csv(y));
    return 0;
  }

  if (*oh) {
    Signal s = o_in.empty() ? gaussian_sine_signal() : Signal{load_signal(o_in), Grid::uniform(1.0)};
    s.grid = Grid::uniform(1.0 / static_cast<double>(s.values.size()));
    const Index N = s.values.size();
    const ShiftOptResult sh = optimize_shift(s, o_lmax, o_cfg);
    const Signal shifted{shift_zero_fill(s.values, sh.shift), s.grid};
    const Signal resampled = sinc_resample(shifted, sh.scale.lambda * s.grid.step, hermite_nodes(N));
    const CompressionResult cr = compress_keep_largest(resampled.values, o_targetE, Kind::DHT1);
    json doc{{"N", N},
             {"shift", sh.shift},
             {"lambda_dt", sh.scale.lambda},
             {"lambda_N", sh.scale.lambda * s.grid.step * static_cast<double>(N)},
             {"measure", sh.scale.measure},
             {"iterations", sh.scale.iterations},
             {"converged", sh.scale.converged},
             {"per_shift_measure", sh.per_shift_measure},
             {"compression", {{"target_E", o_targetE}, {"L", cr.L}, {"E", cr.E}, {"kept", index_list(cr.kept)}}}};
    const rvec xs = rvec::LinSpaced(static_cast<Index>(sh.scale.measure_trace.size()), 0.0,
                                    static_cast<double>(sh.scale.measure_trace.size()) - 1.0);
    emit(oc, doc,
         io::format_series(xs, Eigen::Map<const rvec>(sh.scale.measure_trace.data(), xs.size())));
    return 0;
  }

  if (*de) {
    MultivariateSignal x;
    std::vector<cvec> truth;
    if (!x_model.empty()) {
      const MultivariateModel m = multivariate_model(x_model, xc.seed, x_noise);
      x = m.channels;
      truth = m.components;
    } else if (!x_in.empty()) {
      x = load_channels(x_in);
    } else {
      throw InvalidArgument("decompose needs --model or --in");
    }
    x_cfg.tfr = tfr_kind_from_string(x_tfr);
    x_cfg.window = window_from_string(x_window);
    x_cfg.r_source = x_rsource == "smethod" ? RSource::SMethod : RSource::OuterProduct;
    const DecompositionResult r = decompose(x, x_cfg);
    json comps = json::array();
    for (Index p = 0; p < r.components.cols(); ++p) comps.push_back(io::to_json(cvec(r.components.col(p))));
    json doc{{"P", r.P},
             {"eigenvalues", io::to_json(rvec(r.eigenvalues.head(std::min<Index>(r.eigenvalues.size(), 16))))},
             {"outer_iterations", r.outer_iterations},
             {"updates", r.updates},
             {"converged", r.converged},
             {"components", comps}};
    if (!truth.empty()) doc["correlation"] = match_components(r.components, truth);
    if (xc.format == "csv") {
      if (xc.out == "-") throw InvalidArgument("multicomponent CSV output needs --out");
      for (Index p = 0; p < r.components.cols(); ++p)
        io::write_file(channel_path(xc.out, static_cast<std::size_t>(p)), io::format_csv(r.components.col(p)));
    } else {
      emit(xc, io::format_json(doc));
    }
    return 0;
  }

  if (*tf) {
    const cvec x = load_signal(f_in);
    const TfrKind kind = tfr_kind_from_string(f_kind);
    const WindowType w = window_from_string(f_window);
    TFRMatrix t;
    if (kind == TfrKind::STFT)
      t = stft(x, w, f_Nw, f_hop);
    else if (kind == TfrKind::SPEC)
      t = spectrogram(x, w, f_Nw, f_hop);
    else if (kind == TfrKind::SM)
      t = smethod(stft(x, w, f_Nw, f_hop), f_Ld);
    else
      t = wigner(x, f_Nw, w);
    const rmat v = t.real_values();
    if (!f_pgm.empty()) io::write_file(f_pgm, io::format_pgm(v, f_range));
    json rows = json::array();
    for (Index k = 0; k < v.rows(); ++k) rows.push_back(io::to_json(rvec(v.row(k).transpose())));
    const json doc{{"kind", to_string(t.kind)}, {"window", to_string(t.window)}, {"window_length", t.window_length},
                   {"hop", t.hop}, {"L_d", t.L_d}, {"bins", t.bins()}, {"frames", t.frames()},
                   {"concentration", concentration_measure(t)}, {"values", rows}};
    emit(fc, doc, io::format_grid(v));
    return 0;
  }

  if (*mcc) {
    ExperimentSpec spec = m_spec.empty() ? default_experiment(m_name) : experiment_from_json(io::parse_json(io::read_file(m_spec)));
    if (m_spec.empty()) spec.seed = mc.seed;
    if (m_trials > 0) spec.trials = m_trials;
    spec.threads = m_threads;
    const ExperimentOutput out = run_experiment(spec);
    if (mc.out == "-") {
      std::cout << io::format_json(out.summary);
    } else {
      write_experiment(out, mc.out);
    }
    return 0;
  }
  return 0;
}

int fail(const std::string& type, const std::string& message, int code, std::size_t offset = std::string::npos) {
  json err{{"type", type}, {"message", message}};
  if (offset != std::string::npos) err["offset"] = offset;
  std::cerr << io::format_json(json{{"error", err}});
  return code;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const ParseError& e) {
    return fail("parse-error", e.what(), 3, e.offset());
  } catch (const InvalidArgument& e) {
    return fail("invalid-argument", e.what(), 2);
  } catch (const NumericFailure& e) {
    return fail("numeric-failure", e.what(), 4);
  } catch (const std::exception& e) {
    return fail("error", e.what(), 1);
  }
}
