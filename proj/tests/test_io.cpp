// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The sparsetf Authors

#include "sparsetf/io.hpp"

#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <limits>

using namespace sparsetf;

namespace {

std::size_t offset_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const ParseError& e) {
    return e.offset();
  }
  FAIL("no ParseError thrown");
  return 0;
}

}  // namespace

TEST_CASE("CSV round trip is exact") {
  cvec x(4);
  x << cplx(0.1, -2.5), cplx(1e-300, 3.0), cplx(-std::numeric_limits<double>::max(), 0.0), cplx(1.0 / 3.0, 2.0 / 7.0);
  const std::string text = io::format_csv(x);
  CHECK(text.rfind("index,re,im\n0,0.1,-2.5\n", 0) == 0);
  CHECK(io::parse_csv(text) == x);
  CHECK(io::parse_csv("index,re,im\r\n0,1,2\r\n") == cvec::Constant(1, cplx(1.0, 2.0)));
  CHECK(io::parse_csv("index,re,im\n").size() == 0);
}

TEST_CASE("CSV parse errors carry byte offsets") {
  CHECK(offset_of([] { io::parse_csv(""); }) == 0);
  CHECK(offset_of([] { io::parse_csv("idx,re,im\n"); }) == 0);
  // "index,re,im\n" is 12 bytes; the bad field starts at 12 + 2.
  CHECK(offset_of([] { io::parse_csv("index,re,im\n0,x1,2\n"); }) == 14);
  CHECK(offset_of([] { io::parse_csv("index,re,im\n0,1,2\n1,1\n"); }) == 18);
  CHECK(offset_of([] { io::parse_csv("index,re,im\n0,1,2\n5,1,2\n"); }) == 18);
  const std::string msg = [] {
    try {
      io::parse_csv("index,re,im\n0,1,oops\n");
    } catch (const ParseError& e) {
      return std::string(e.what());
    }
    return std::string();
  }();
  CHECK(msg.find("at byte 16") != std::string::npos);
}

TEST_CASE("column and grid formats") {
  rvec a(2), b(2);
  a << 1, 2;
  b << 0.5, -1;
  CHECK(io::format_series(a, b) == "x,value\n1,0.5\n2,-1\n");
  CHECK(io::format_columns({"a", "b", "c"}, {a, b, a}) == "a,b,c\n1,0.5,1\n2,-1,2\n");
  CHECK_THROWS_AS(io::format_columns({"a"}, {a, b}), InvalidArgument);
  rmat g(2, 2);
  g << 1, 2, 3, 4;
  CHECK(io::format_grid(g) == "1,2\n3,4\n");
}

TEST_CASE("WAV round trip at 16-bit precision") {
  io::WavData w;
  w.sample_rate = 22050;
  w.samples.resize(5);
  w.samples << 0.0, 0.5, -0.5, 0.999, -1.0;
  const std::string bytes = io::format_wav(w);
  CHECK(bytes.size() == 44 + 10);
  CHECK(bytes.compare(0, 4, "RIFF") == 0);
  const io::WavData back = io::parse_wav(bytes);
  CHECK(back.sample_rate == 22050);
  CHECK((back.samples - w.samples).cwiseAbs().maxCoeff() <= 1.0 / 32768.0);
  CHECK(back.samples(4) == -1.0);

  io::WavData loud;
  loud.samples = rvec::Constant(2, 3.0);
  CHECK(io::parse_wav(io::format_wav(loud)).samples(0) == doctest::Approx(32767.0 / 32768.0));
}

TEST_CASE("WAV parse errors") {
  io::WavData w;
  w.samples = rvec::Zero(4);
  const std::string good = io::format_wav(w);
  CHECK(offset_of([] { io::parse_wav("RIFX0000WAVE"); }) == 0);
  std::string notwave = good;
  notwave[8] = 'X';
  CHECK(offset_of([&] { io::parse_wav(notwave); }) == 8);
  std::string stereo = good;
  stereo[22] = 2;
  CHECK(offset_of([&] { io::parse_wav(stereo); }) == 22);
  CHECK(offset_of([&] { io::parse_wav(good.substr(0, good.size() - 2)); }) == 40);
}

TEST_CASE("PGM format and parse") {
  rmat v(2, 3);
  v << 1.0, 0.1, 0.0, 0.01, 0.001, 1e-9;
  const std::string bytes = io::format_pgm(v, 60.0);
  const io::PgmImage img = io::parse_pgm(bytes);
  CHECK(img.width == 3);
  CHECK(img.height == 2);
  CHECK(img.pixels[0] == 255);
  CHECK(img.pixels[1] == std::lround(255.0 * (2.0 / 3.0)));
  CHECK(img.pixels[2] == 0);
  CHECK(img.pixels[3] == std::lround(255.0 / 3.0));
  CHECK(img.pixels[4] == 0);
  CHECK(io::parse_pgm("P5 # comment\n2 1\n255\nab").pixels[1] == 'b');
  CHECK(offset_of([] { io::parse_pgm("P6\n1 1\n255\na"); }) == 0);
  CHECK(offset_of([] { io::parse_pgm("P5\n1 x\n255\na"); }) == 5);
  CHECK(offset_of([] { io::parse_pgm("P5\n1 1\n65535\na"); }) == 6);
  CHECK(offset_of([] { io::parse_pgm("P5\n2 2\n255\nabc"); }) == 14);
  CHECK_THROWS_AS(io::format_pgm(rmat(0, 0)), InvalidArgument);
}

TEST_CASE("JSON documents carry the schema version") {
  const std::string text = io::format_json({{"b", 1}, {"schema", 7}, {"a", "x"}});
  CHECK(text.rfind("{\n  \"schema\": 1,\n  \"b\": 1", 0) == 0);
  const io::json j = io::parse_json(text);
  CHECK(j["a"] == "x");
  CHECK(offset_of([] { io::parse_json("{\"schema\": 1, \"a\": }"); }) == 19);
  CHECK_THROWS_AS(io::parse_json("{\"a\": 1}"), ParseError);
  CHECK_THROWS_AS(io::parse_json("{\"schema\": 2}"), ParseError);
  CHECK_THROWS_AS(io::format_json(io::json::array()), InvalidArgument);
}

TEST_CASE("vector JSON round trips") {
  cvec x(3);
  x << cplx(1, 2), cplx(-0.1, 0), cplx(1e-17, 5);
  CHECK(io::cvec_from_json(io::to_json(x)) == x);
  CHECK(io::cvec_from_json(io::parse_json(io::format_json({{"x", io::to_json(x)}}))["x"]) == x);
  rvec r(2);
  r << 0.3, -7;
  CHECK(io::rvec_from_json(io::to_json(r)) == r);
  CHECK_THROWS_AS(io::cvec_from_json(io::json{{"re", {1, 2}}, {"im", {1}}}), InvalidArgument);
}

TEST_CASE("file helpers") {
  const std::string path = "sparsetf_io_test.bin";
  const std::string content("a\0b\n", 4);
  io::write_file(path, content);
  CHECK(io::read_file(path) == content);
  std::remove(path.c_str());
  CHECK_THROWS(io::read_file("/nonexistent/dir/file"));
}
