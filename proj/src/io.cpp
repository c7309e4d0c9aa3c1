// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The sparsetf Authors

#include "sparsetf/io.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

namespace sparsetf::io {

namespace {

void append_number(std::string& out, double v) {
  char buf[64];
  const auto r = std::to_chars(buf, buf + sizeof(buf), v);
  out.append(buf, r.ptr);
}

double parse_double(const std::string& text, std::size_t begin, std::size_t end) {
  double v = 0.0;
  const char* first = text.data() + begin;
  const char* last = text.data() + end;
  while (first < last && *first == ' ') ++first;
  while (last > first && (last[-1] == ' ' || last[-1] == '\r')) --last;
  const auto r = std::from_chars(first, last, v);
  if (r.ec != std::errc() || r.ptr != last || first == last)
    throw ParseError("invalid number", static_cast<std::size_t>(first - text.data()));
  return v;
}

struct Line {
  std::size_t begin;
  std::size_t end;
};

std::vector<Line> split_lines(const std::string& text) {
  std::vector<Line> lines;
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t nl = text.find('\n', pos);
    if (nl == std::string::npos) nl = text.size();
    std::size_t e = nl;
    if (e > pos && text[e - 1] == '\r') --e;
    if (e > pos) lines.push_back({pos, e});
    pos = nl + 1;
  }
  return lines;
}

std::vector<Line> split_fields(const std::string& text, const Line& l) {
  std::vector<Line> f;
  std::size_t pos = l.begin;
  while (true) {
    std::size_t c = text.find(',', pos);
    if (c == std::string::npos || c > l.end) c = l.end;
    f.push_back({pos, c});
    if (c == l.end) break;
    pos = c + 1;
  }
  return f;
}

std::uint32_t get_u32(const std::string& b, std::size_t at) {
  if (at + 4 > b.size()) throw ParseError("unexpected end of data", b.size());
  return static_cast<std::uint32_t>(static_cast<unsigned char>(b[at])) |
         static_cast<std::uint32_t>(static_cast<unsigned char>(b[at + 1])) << 8 |
         static_cast<std::uint32_t>(static_cast<unsigned char>(b[at + 2])) << 16 |
         static_cast<std::uint32_t>(static_cast<unsigned char>(b[at + 3])) << 24;
}

std::uint16_t get_u16(const std::string& b, std::size_t at) {
  if (at + 2 > b.size()) throw ParseError("unexpected end of data", b.size());
  return static_cast<std::uint16_t>(static_cast<unsigned char>(b[at]) |
                                    static_cast<unsigned char>(b[at + 1]) << 8);
}

void put_u32(std::string& b, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) b.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}

void put_u16(std::string& b, std::uint16_t v) {
  b.push_back(static_cast<char>(v & 0xff));
  b.push_back(static_cast<char>((v >> 8) & 0xff));
}

}  // namespace

std::string read_file(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw InvalidArgument("cannot open " + path);
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw InvalidArgument("cannot write " + path);
  f.write(content.data(), static_cast<std::streamsize>(content.size()));
  if (!f) throw InvalidArgument("write failed for " + path);
}

std::string format_csv(const cvec& x) {
  std::string out = "index,re,im\n";
  for (Index n = 0; n < x.size(); ++n) {
    out += std::to_string(n);
    out += ',';
    append_number(out, x(n).real());
    out += ',';
    append_number(out, x(n).imag());
    out += '\n';
  }
  return out;
}

cvec parse_csv(const std::string& text) {
  const std::vector<Line> lines = split_lines(text);
  if (lines.empty()) throw ParseError("empty CSV", 0);
  if (text.compare(lines[0].begin, lines[0].end - lines[0].begin, "index,re,im") != 0)
    throw ParseError("expected header index,re,im", lines[0].begin);
  cvec x(static_cast<Index>(lines.size() - 1));
  for (std::size_t i = 1; i < lines.size(); ++i) {
    const std::vector<Line> f = split_fields(text, lines[i]);
    if (f.size() != 3) throw ParseError("expected 3 fields", lines[i].begin);
    const double idx = parse_double(text, f[0].begin, f[0].end);
    if (idx != static_cast<double>(i - 1)) throw ParseError("index out of sequence", f[0].begin);
    x(static_cast<Index>(i - 1)) = cplx(parse_double(text, f[1].begin, f[1].end), parse_double(text, f[2].begin, f[2].end));
  }
  return x;
}

std::string format_columns(const std::vector<std::string>& header, const std::vector<rvec>& columns) {
  if (header.size() != columns.size() || columns.empty()) throw InvalidArgument("format_columns: header/column mismatch");
  const Index rows = columns.front().size();
  for (const rvec& c : columns)
    if (c.size() != rows) throw InvalidArgument("format_columns: columns differ in length");
  std::string out;
  for (std::size_t j = 0; j < header.size(); ++j) {
    if (j) out += ',';
    out += header[j];
  }
  out += '\n';
  for (Index r = 0; r < rows; ++r) {
    for (std::size_t j = 0; j < columns.size(); ++j) {
      if (j) out += ',';
      append_number(out, columns[j](r));
    }
    out += '\n';
  }
  return out;
}

std::string format_series(const rvec& x, const rvec& value) { return format_columns({"x", "value"}, {x, value}); }

std::string format_grid(const rmat& values) {
  std::string out;
  for (Index r = 0; r < values.rows(); ++r) {
    for (Index c = 0; c < values.cols(); ++c) {
      if (c) out += ',';
      append_number(out, values(r, c));
    }
    out += '\n';
  }
  return out;
}

std::string format_wav(const WavData& w) {
  const std::uint32_t n = static_cast<std::uint32_t>(w.samples.size());
  std::string b;
  b += "RIFF";
  put_u32(b, 36 + 2 * n);
  b += "WAVEfmt ";
  put_u32(b, 16);
  put_u16(b, 1);
  put_u16(b, 1);
  put_u32(b, w.sample_rate);
  put_u32(b, w.sample_rate * 2);
  put_u16(b, 2);
  put_u16(b, 16);
  b += "data";
  put_u32(b, 2 * n);
  for (Index i = 0; i < w.samples.size(); ++i) {
    const double s = std::clamp(std::round(w.samples(i) * 32768.0), -32768.0, 32767.0);
    put_u16(b, static_cast<std::uint16_t>(static_cast<std::int16_t>(s)));
  }
  return b;
}

WavData parse_wav(const std::string& b) {
  if (b.size() < 12 || b.compare(0, 4, "RIFF") != 0) throw ParseError("missing RIFF tag", 0);
  if (b.compare(8, 4, "WAVE") != 0) throw ParseError("missing WAVE tag", 8);
  WavData w;
  bool have_fmt = false;
  std::size_t pos = 12;
  while (pos + 8 <= b.size()) {
    const std::string id = b.substr(pos, 4);
    const std::uint32_t len = get_u32(b, pos + 4);
    const std::size_t body = pos + 8;
    if (body + len > b.size()) throw ParseError("chunk " + id + " overruns file", pos + 4);
    if (id == "fmt ") {
      if (len < 16) throw ParseError("fmt chunk too short", pos + 4);
      if (get_u16(b, body) != 1) throw ParseError("not PCM", body);
      if (get_u16(b, body + 2) != 1) throw ParseError("not mono", body + 2);
      w.sample_rate = get_u32(b, body + 4);
      if (get_u16(b, body + 14) != 16) throw ParseError("not 16-bit", body + 14);
      have_fmt = true;
    } else if (id == "data") {
      if (!have_fmt) throw ParseError("data chunk before fmt chunk", pos);
      if (len % 2) throw ParseError("odd data length", pos + 4);
      w.samples.resize(len / 2);
      for (std::uint32_t i = 0; i < len / 2; ++i)
        w.samples(i) = static_cast<double>(static_cast<std::int16_t>(get_u16(b, body + 2 * i))) / 32768.0;
      return w;
    }
    pos = body + len + (len % 2);
  }
  throw ParseError("missing data chunk", b.size());
}

std::string format_pgm(const rmat& values, double dynamic_range_db) {
  if (values.size() == 0) throw InvalidArgument("format_pgm: empty grid");
  if (!(dynamic_range_db > 0.0)) throw InvalidArgument("format_pgm: dynamic range must be positive");
  const double peak = values.cwiseAbs().maxCoeff();
  std::string out = "P5\n" + std::to_string(values.cols()) + " " + std::to_string(values.rows()) + "\n255\n";
  for (Index r = 0; r < values.rows(); ++r)
    for (Index c = 0; c < values.cols(); ++c) {
      double level = 0.0;
      const double a = std::abs(values(r, c));
      if (peak > 0.0 && a > 0.0) level = std::clamp(1.0 + 20.0 * std::log10(a / peak) / dynamic_range_db, 0.0, 1.0);
      out.push_back(static_cast<char>(static_cast<std::uint8_t>(std::lround(255.0 * level))));
    }
  return out;
}

PgmImage parse_pgm(const std::string& b) {
  if (b.size() < 2 || b.compare(0, 2, "P5") != 0) throw ParseError("missing P5 magic", 0);
  std::size_t pos = 2;
  auto field = [&]() -> long {
    while (pos < b.size()) {
      if (b[pos] == '#') {
        while (pos < b.size() && b[pos] != '\n') ++pos;
      } else if (std::isspace(static_cast<unsigned char>(b[pos]))) {
        ++pos;
      } else {
        break;
      }
    }
    const std::size_t start = pos;
    long v = 0;
    const auto r = std::from_chars(b.data() + pos, b.data() + b.size(), v);
    if (r.ec != std::errc() || v <= 0) throw ParseError("invalid header field", start);
    pos = static_cast<std::size_t>(r.ptr - b.data());
    return v;
  };
  PgmImage img;
  img.width = field();
  img.height = field();
  const std::size_t maxval_at = pos;
  if (field() != 255) throw ParseError("only 8-bit maxval 255 supported", maxval_at);
  if (pos >= b.size() || !std::isspace(static_cast<unsigned char>(b[pos]))) throw ParseError("missing header terminator", pos);
  ++pos;
  const std::size_t need = static_cast<std::size_t>(img.width * img.height);
  if (b.size() - pos < need) throw ParseError("truncated pixel data", b.size());
  img.pixels.assign(b.begin() + static_cast<std::ptrdiff_t>(pos), b.begin() + static_cast<std::ptrdiff_t>(pos + need));
  return img;
}

std::string format_json(json doc) {
  if (!doc.is_object()) throw InvalidArgument("format_json: top level must be an object");
  json out = json::object();
  out["schema"] = 1;
  for (auto& [k, v] : doc.items())
    if (k != "schema") out[k] = v;
  return out.dump(2) + "\n";
}

json parse_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(e.what(), e.byte > 0 ? e.byte - 1 : 0);
  }
  if (!j.is_object() || !j.contains("schema")) throw ParseError("missing schema field", 0);
  if (j["schema"] != 1) throw ParseError("unsupported schema version", 0);
  return j;
}

json to_json(const cvec& x) {
  json re = json::array(), im = json::array();
  for (Index n = 0; n < x.size(); ++n) {
    re.push_back(x(n).real());
    im.push_back(x(n).imag());
  }
  return json{{"re", re}, {"im", im}};
}

cvec cvec_from_json(const json& j) {
  const json& re = j.at("re");
  const json& im = j.at("im");
  if (re.size() != im.size()) throw InvalidArgument("complex vector: re/im length mismatch");
  cvec x(static_cast<Index>(re.size()));
  for (std::size_t n = 0; n < re.size(); ++n) x(static_cast<Index>(n)) = cplx(re[n].get<double>(), im[n].get<double>());
  return x;
}

json to_json(const rvec& x) {
  json a = json::array();
  for (Index n = 0; n < x.size(); ++n) a.push_back(x(n));
  return a;
}

rvec rvec_from_json(const json& j) {
  rvec x(static_cast<Index>(j.size()));
  for (std::size_t n = 0; n < j.size(); ++n) x(static_cast<Index>(n)) = j[n].get<double>();
  return x;
}

}  // namespace sparsetf::io
