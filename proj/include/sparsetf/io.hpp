// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The sparsetf Authors

#pragma once

#include "sparsetf/common.hpp"

#include <json.hpp>

#include <cstdint>
#include <string>
#include <vector>

namespace sparsetf::io {

using json = nlohmann::ordered_json;

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& content);

// "index,re,im" rows with round-trip precision.
std::string format_csv(const cvec& x);
cvec parse_csv(const std::string& text);

// Header line followed by rows of the given columns.
std::string format_columns(const std::vector<std::string>& header, const std::vector<rvec>& columns);
std::string format_series(const rvec& x, const rvec& value);

// Real grid, one CSV line per matrix row.
std::string format_grid(const rmat& values);

struct WavData {
  std::uint32_t sample_rate = 8000;
  rvec samples;  // full scale is [-1, 1)
};

// 16-bit PCM mono little-endian; samples are clipped to full scale.
std::string format_wav(const WavData& w);
WavData parse_wav(const std::string& bytes);

struct PgmImage {
  Index width = 0;
  Index height = 0;
  std::vector<std::uint8_t> pixels;  // row-major
};

// P5 8-bit; row r of the image is row r of values, amplitude mapped to
// 20 log10(|v| / max) over the last dynamic_range_db decibels.
std::string format_pgm(const rmat& values, double dynamic_range_db = 60.0);
PgmImage parse_pgm(const std::string& bytes);

std::string format_json(json doc);
json parse_json(const std::string& text);

json to_json(const cvec& x);
cvec cvec_from_json(const json& j);
json to_json(const rvec& x);
rvec rvec_from_json(const json& j);

}  // namespace sparsetf::io
