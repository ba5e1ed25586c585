#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <random>
#include <string>
#include <unistd.h>
#include <vector>

#include "fpc/csv.hpp"
#include "fpc/errors.hpp"

using namespace fpc;

namespace {

struct TempDir {
  std::filesystem::path path;
  TempDir() {
    static int counter = 0;
    path = std::filesystem::temp_directory_path() /
           ("fpc_csv_test_" + std::to_string(::getpid()) + "_" +
            std::to_string(counter++));
    std::filesystem::create_directories(path);
  }
  ~TempDir() { std::filesystem::remove_all(path); }
  std::string file(const std::string& name) const {
    return (path / name).string();
  }
};

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  out << text;
}

bool message_contains(const std::function<void()>& fn, const std::string& needle) {
  try {
    fn();
  } catch (const Error& e) {
    return std::string(e.what()).find(needle) != std::string::npos;
  }
  return false;
}

}  // namespace

TEST_CASE("signal csv round trip is bit exact") {
  TempDir dir;
  std::mt19937_64 rng(7);
  std::vector<double> a(50), b(50);
  for (std::size_t i = 0; i < 50; ++i) {
    a[i] = (static_cast<double>(rng() >> 11) * 0x1.0p-53 - 0.5) * 1e6;
    b[i] = (static_cast<double>(rng() >> 11) * 0x1.0p-53 - 0.5) * 1e-6;
  }
  a[3] = 0.1 + 0.2;  // not exactly representable
  const std::vector<TimeSeries> cols{TimeSeries(a, 128.0, "first"),
                                     TimeSeries(b, 128.0, "second")};
  const std::string path = dir.file("roundtrip.csv");
  write_signal_csv(path, cols);

  const SignalTable table = read_signal_csv(path);
  REQUIRE(table.columns.size() == 2);
  CHECK(table.sample_rate_hz == doctest::Approx(128.0).epsilon(1e-9));
  CHECK(table.columns[0].name == "first");
  CHECK(table.columns[1].name == "second");
  for (std::size_t i = 0; i < 50; ++i) {
    CHECK(table.columns[0].samples[i] == a[i]);
    CHECK(table.columns[1].samples[i] == b[i]);
  }
}

TEST_CASE("SignalTable lookup") {
  TempDir dir;
  const std::string path = dir.file("lookup.csv");
  write_text(path, "t_sec,x\n0,1\n0.5,2\n1.0,3\n");
  const SignalTable table = read_signal_csv(path);
  CHECK(table.contains("x"));
  CHECK_FALSE(table.contains("y"));
  CHECK(table.at("x").samples == std::vector<double>{1.0, 2.0, 3.0});
  CHECK(table.at("x").sample_rate_hz == doctest::Approx(2.0));
  CHECK_THROWS_AS(table.at("y"), DataError);
}

TEST_CASE("read rejects malformed files and names the location") {
  TempDir dir;

  SUBCASE("missing file") {
    CHECK(message_contains([&] { read_signal_csv(dir.file("nope.csv")); },
                           "nope.csv"));
  }
  SUBCASE("wrong first header") {
    const auto p = dir.file("h.csv");
    write_text(p, "time,x\n0,1\n1,2\n");
    CHECK(message_contains([&] { read_signal_csv(p); }, "t_sec"));
  }
  SUBCASE("no data column") {
    const auto p = dir.file("nodata.csv");
    write_text(p, "t_sec\n0\n1\n");
    CHECK_THROWS_AS(read_signal_csv(p), DataError);
  }
  SUBCASE("single data row") {
    const auto p = dir.file("short.csv");
    write_text(p, "t_sec,x\n0,1\n");
    CHECK_THROWS_AS(read_signal_csv(p), DataError);
  }
  SUBCASE("ragged row names its line") {
    const auto p = dir.file("ragged.csv");
    write_text(p, "t_sec,x,y\n0,1,2\n0.1,3\n");
    CHECK(message_contains([&] { read_signal_csv(p); }, ":3"));
  }
  SUBCASE("unparsable cell names its line") {
    const auto p = dir.file("bad.csv");
    write_text(p, "t_sec,x\n0,1\n0.1,oops\n");
    CHECK(message_contains([&] { read_signal_csv(p); }, "oops"));
    CHECK(message_contains([&] { read_signal_csv(p); }, ":3"));
  }
  SUBCASE("non-uniform step") {
    const auto p = dir.file("step.csv");
    write_text(p, "t_sec,x\n0,1\n0.1,2\n0.35,3\n");
    CHECK(message_contains([&] { read_signal_csv(p); }, "non-uniform"));
  }
  SUBCASE("decreasing time") {
    const auto p = dir.file("dec.csv");
    write_text(p, "t_sec,x\n0.2,1\n0.1,2\n0,3\n");
    CHECK_THROWS_AS(read_signal_csv(p), DataError);
  }
  SUBCASE("non-finite value") {
    const auto p = dir.file("inf.csv");
    write_text(p, "t_sec,x\n0,1\n0.1,inf\n");
    CHECK_THROWS_AS(read_signal_csv(p), DataError);
  }
}

TEST_CASE("read tolerates CRLF line endings and blank trailing lines") {
  TempDir dir;
  const auto p = dir.file("crlf.csv");
  write_text(p, "t_sec,x\r\n0,1\r\n0.25,2\r\n\r\n");
  const SignalTable table = read_signal_csv(p);
  CHECK(table.columns[0].samples == std::vector<double>{1.0, 2.0});
  CHECK(table.sample_rate_hz == doctest::Approx(4.0));
}

TEST_CASE("write emits t_sec from the sample rate") {
  TempDir dir;
  const auto p = dir.file("t.csv");
  const std::vector<TimeSeries> cols{TimeSeries({1.0, 2.0, 3.0, 4.0}, 8.0, "x")};
  write_signal_csv(p, cols);
  std::ifstream in(p);
  std::string line;
  std::getline(in, line);
  CHECK(line == "t_sec,x");
  std::getline(in, line);
  CHECK(line.rfind("0,", 0) == 0);
  std::getline(in, line);
  CHECK(line.rfind("0.125,", 0) == 0);
}

TEST_CASE("write rejects misaligned or empty input") {
  TempDir dir;
  const auto p = dir.file("bad_out.csv");
  CHECK_THROWS_AS(write_signal_csv(p, std::vector<TimeSeries>{}), InvalidArgument);
  const std::vector<TimeSeries> mixed{TimeSeries({1.0, 2.0}, 8.0, "a"),
                                      TimeSeries({1.0, 2.0, 3.0}, 8.0, "b")};
  CHECK_THROWS_AS(write_signal_csv(p, mixed), DataError);
  const std::vector<TimeSeries> rates{TimeSeries({1.0, 2.0}, 8.0, "a"),
                                      TimeSeries({1.0, 2.0}, 4.0, "b")};
  CHECK_THROWS_AS(write_signal_csv(p, rates), DataError);
}
