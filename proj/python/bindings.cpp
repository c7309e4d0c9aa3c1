// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The sparsetf Authors

#include "sparsetf/experiments.hpp"
#include "sparsetf/generators.hpp"
#include "sparsetf/hermite_opt.hpp"
#include "sparsetf/tfa.hpp"

#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

namespace py = pybind11;
using namespace sparsetf;

namespace {

py::dict recon_dict(const ReconResult& r) {
  py::dict d;
  d["coefficients"] = r.coefficients;
  d["support"] = r.support;
  d["residual_norm"] = r.residual_norm;
  d["iterations"] = r.iterations;
  d["status"] = to_string(r.status);
  return d;
}

PartialMatrix partial(const std::string& domain, Index N, const IndexList& support, Index rows) {
  const Kind kind = kind_from_string(domain);
  const TransformOperator op = kind == Kind::DCT2D ? build_transform_2d(rows, N / rows) : build_transform(kind, N);
  return build_partial_matrix(op, support);
}

TransformOperator op_for(const std::string& domain, Index size, Index rows, double sigma) {
  const Kind kind = kind_from_string(domain);
  if (kind == Kind::DCT2D) {
    if (rows <= 0 || size % rows != 0) throw InvalidArgument("rows must divide the signal length");
    return build_transform_2d(rows, size / rows);
  }
  return build_transform(kind, size, sigma);
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Sparse reconstruction and time-frequency decomposition";

  py::register_exception<InvalidArgument>(m, "InvalidArgument", PyExc_ValueError);
  py::register_exception<NumericFailure>(m, "NumericFailure", PyExc_ArithmeticError);
  py::register_exception<ParseError>(m, "ParseError", PyExc_ValueError);

  m.def(
      "transform",
      [](const cvec& x, const std::string& domain, bool inverse, Index rows, double sigma) {
        return transform(op_for(domain, x.size(), rows, sigma), x, inverse ? Direction::Inverse : Direction::Forward);
      },
      py::arg("x"), py::arg("domain") = "DFT", py::arg("inverse") = false, py::arg("rows") = 1, py::arg("sigma") = 1.0);
  m.def("hermite_nodes", &hermite_nodes, py::arg("N"));
  m.def(
      "transform_matrix",
      [](const std::string& domain, Index size, Index rows, double sigma) { return op_for(domain, size, rows, sigma).forward; },
      py::arg("domain"), py::arg("N"), py::arg("rows") = 1, py::arg("sigma") = 1.0);

  m.def("sample_support", &sample_support, py::arg("N"), py::arg("N_A"), py::arg("seed"));
  m.def("welch_bound", &welch_bound, py::arg("N"), py::arg("N_A"));
  m.def(
      "coherence",
      [](const std::string& domain, Index N, const IndexList& support, Index rows) {
        return coherence_index(partial(domain, N, support, rows));
      },
      py::arg("domain"), py::arg("N"), py::arg("support"), py::arg("rows") = 1);

  m.def(
      "reconstruct",
      [](const cvec& y, const IndexList& support, Index N, const std::string& domain, const std::string& algo, Index K,
         double P_NN, Index rows) {
        const PartialMatrix A = partial(domain, N, support, rows);
        ReconConfig cfg;
        cfg.P_NN = P_NN;
        if (algo == "omp") {
          if (K > 0) cfg.max_iter = static_cast<int>(K);
          return recon_dict(omp(A, y, cfg));
        }
        if (algo == "cosamp") return recon_dict(cosamp(A, y, K, cfg));
        if (algo == "threshold") return recon_dict(threshold_single(A, y, P_NN));
        if (algo == "iterative") return recon_dict(threshold_iterative(A, y, cfg));
        throw InvalidArgument("unknown algorithm: " + algo);
      },
      py::arg("y"), py::arg("support"), py::arg("N"), py::arg("domain") = "DFT", py::arg("algo") = "omp",
      py::arg("K") = 0, py::arg("P_NN") = 0.99, py::arg("rows") = 1);
  m.def(
      "gradient_reconstruct",
      [](const cvec& x_with_gaps, const IndexList& missing, const std::string& domain, int max_iter) {
        const GradientResult g =
            gradient_recon(x_with_gaps, missing, op_for(domain, x_with_gaps.size(), 1, 1.0), {}, max_iter);
        py::dict d;
        d["x"] = g.x;
        d["iterations"] = g.iterations;
        d["Tr_db"] = g.Tr_db;
        d["converged"] = g.converged;
        return d;
      },
      py::arg("x_with_gaps"), py::arg("missing"), py::arg("domain") = "DFT", py::arg("max_iter") = 20000);

  m.def("normalized_noise_variance", &normalized_noise_variance, py::arg("N"), py::arg("N_A"), py::arg("sum_a2"));
  m.def(
      "sparsity_bound", [](Index N, Index N_A, double c) { return sparsity_bound(N, N_A, c).K; }, py::arg("N"),
      py::arg("N_A"), py::arg("c") = 4.0);
  m.def("snr_after_reconstruction", &snr_after_reconstruction, py::arg("snr_in_db"), py::arg("K"), py::arg("N_A"));
  m.def(
      "detection_error_probability",
      [](const std::string& domain, Index N, const rvec& amplitudes, const IndexList& positions, Index N_A,
         const std::string& method) {
        const SparseModel model{kind_from_string(domain), 1, N, amplitudes, positions};
        const PeMethod pm = method == "exact" ? PeMethod::Exact : PeMethod::Approximation;
        if (method != "exact" && method != "approx") throw InvalidArgument("method must be exact or approx");
        return detection_error_probability(model, N_A, pm).pe;
      },
      py::arg("domain"), py::arg("N"), py::arg("amplitudes"), py::arg("positions"), py::arg("N_A"),
      py::arg("method") = "exact");

  m.def(
      "optimize_scale",
      [](const cvec& x, double step) {
        const ScaleOptResult r = optimize_scale(Signal{x, Grid::uniform(step)});
        py::dict d;
        d["lambda"] = r.lambda;
        d["measure"] = r.measure;
        d["iterations"] = r.iterations;
        d["converged"] = r.converged;
        return d;
      },
      py::arg("x"), py::arg("step"));
  m.def("gaussian_sine", [] { return gaussian_sine_signal().values; });
  m.def(
      "denoise",
      [](const cvec& x, double sigma_eps, double alpha, const std::string& domain) {
        return denoise_hard_threshold(x, sigma_eps, alpha, kind_from_string(domain));
      },
      py::arg("x"), py::arg("sigma_eps"), py::arg("alpha") = 3.0, py::arg("domain") = "DHT1");

  m.def(
      "tfr",
      [](const cvec& x, const std::string& kind, Index Nw, const std::string& window, Index L_d) {
        const WindowType w = window_from_string(window);
        switch (tfr_kind_from_string(kind)) {
          case TfrKind::STFT:
            return stft(x, w, Nw).values;
          case TfrKind::SPEC:
            return spectrogram(x, w, Nw).values;
          case TfrKind::PWD:
            return wigner(x, Nw, w).values;
          case TfrKind::SM:
            return smethod(stft(x, w, Nw), L_d).values;
        }
        throw InvalidArgument("unknown representation");
      },
      py::arg("x"), py::arg("kind") = "spec", py::arg("Nw") = 64, py::arg("window") = "hann", py::arg("L_d") = 3);
  m.def(
      "decompose",
      [](const std::vector<cvec>& channels, Index P, Index window_length) {
        DecomposeConfig cfg;
        cfg.P = P;
        cfg.window_length = window_length;
        const DecompositionResult r = decompose(channels, cfg);
        py::dict d;
        d["P"] = r.P;
        d["components"] = r.components;
        d["eigenvalues"] = r.eigenvalues;
        d["converged"] = r.converged;
        return d;
      },
      py::arg("channels"), py::arg("P") = 0, py::arg("window_length") = 0);
  m.def(
      "multivariate_model",
      [](const std::string& name, std::uint64_t seed, double noise) {
        const MultivariateModel mm = multivariate_model(name, seed, noise);
        return py::make_tuple(mm.channels, mm.components);
      },
      py::arg("name"), py::arg("seed") = 1, py::arg("noise") = 0.0);
  m.def("match_components", &match_components, py::arg("components"), py::arg("truth"));

  m.def(
      "run_experiment",
      [](const std::string& name, Index trials, std::uint64_t seed, unsigned threads) {
        ExperimentSpec s = default_experiment(name);
        if (trials > 0) s.trials = trials;
        s.seed = seed;
        s.threads = threads;
        return io::format_json(run_experiment(s).summary);
      },
      py::arg("name"), py::arg("trials") = 0, py::arg("seed") = 1, py::arg("threads") = 0);
}
