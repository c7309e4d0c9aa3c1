// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The sparsetf Authors

#pragma once

#include "sparsetf/common.hpp"
#include "sparsetf/io.hpp"
#include "sparsetf/recon.hpp"
#include "sparsetf/theory.hpp"

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace sparsetf {

struct VariancePoint {
  Index N_A = 0;
  double theory_noise = 0.0;        // per-position closed form, mean over noise positions
  double theory_noise_exact = 0.0;  // exact noise-position mean (differs for DHT1)
  double empirical_noise = 0.0;     // mean over noise positions
  rvec theory_component;         // expectation form
  rvec theory_component_realized;  // mean of the support-specific form (DHT1 only)
  rvec empirical_component;
};

// Monte-Carlo variance of the zero-filled initial estimate versus the closed forms.
std::vector<VariancePoint> variance_sweep(const SparseModel& model, const IndexList& N_A_values, Index trials,
                                          std::uint64_t seed, unsigned threads = 0);

struct PePoint {
  Index N_A = 0;
  rvec exact;
  rvec approx;
  rvec empirical;
};

// Detection-error probabilities: a component is missed when some noise-position
// magnitude of the initial estimate reaches its own magnitude.
std::vector<PePoint> pe_sweep(const SparseModel& model, const IndexList& N_A_values, Index trials, std::uint64_t seed,
                              unsigned threads = 0);

struct SnrPoint {
  Index N_A = 0;
  double input_snr_db = 0.0;
  double theory_db = 0.0;
  double empirical_db = 0.0;  // over trials whose support was recovered
  double support_rate = 0.0;
};

// DHT1 K-sparse signals at random positions in 1..N-1, white noise of
// variance sigma2, OMP with K iterations. Every basis column is scaled to the
// same per-sample power, chosen so that the full-length input SNR equals
// nominal_snr_db. SNRs are ratios of trial-averaged energies.
std::vector<SnrPoint> snr_table(Index N, const rvec& amplitudes, double sigma2, double nominal_snr_db,
                                const IndexList& N_A_values, Index trials, std::uint64_t seed, unsigned threads = 0);

struct NonsparsePoint {
  Index K = 0;
  double theory_db = 0.0;
  double empirical_db = 0.0;         // mean of per-trial dB values
  double empirical_energy_db = 0.0;  // dB of the mean per-trial error energy
};

// Approximately S-sparse DCT signal (amplitude 1 for l <= S, then
// 0.5 exp(-2l/(S+1))) at random positions; OMP with K iterations. rows > 1
// selects the 2D DCT on rows x cols blocks.
std::vector<NonsparsePoint> nonsparse_sweep(Index rows, Index cols, Index N_A, Index S, double sigma_eps,
                                            const IndexList& K_values, Index trials, std::uint64_t seed,
                                            unsigned threads = 0);

struct ExperimentSpec {
  std::string name;  // variance | pe | snr | nonsparse | nonsparse2d
  Kind domain = Kind::DCT1D;
  Index N = 128;
  Index rows = 1;
  rvec amplitudes;
  IndexList positions;
  double sigma = 0.0;
  double snr_db = 0.0;  // nominal input SNR for the snr experiment
  Index S = 10;
  Index trials = 1000;
  std::uint64_t seed = 1;
  std::string sweep_variable;  // N_A or K
  IndexList sweep;
  Index N_A = 0;
  unsigned threads = 0;
};

ExperimentSpec default_experiment(const std::string& name);
ExperimentSpec experiment_from_json(const io::json& j);
io::json to_json(const ExperimentSpec& spec);

struct ExperimentOutput {
  io::json summary;
  std::vector<std::pair<std::string, std::string>> files;  // name, CSV content
};

ExperimentOutput run_experiment(const ExperimentSpec& spec);

// Writes summary.json and the CSV series into dir (created if missing).
void write_experiment(const ExperimentOutput& out, const std::string& dir);

}  // namespace sparsetf
