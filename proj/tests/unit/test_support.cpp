#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <numbers>
#include <stdexcept>

#include "besovch/besov.hpp"
#include "besovch/config.hpp"
#include "besovch/error.hpp"
#include "besovch/field_io.hpp"
#include "besovch/parallel.hpp"
#include "besovch/report.hpp"

using namespace besovch;

namespace {

std::filesystem::path scratch_dir(const std::string& name) {
  auto p = std::filesystem::temp_directory_path() / ("besovch_test_" + name);
  std::filesystem::remove_all(p);
  std::filesystem::create_directories(p);
  return p;
}

std::string error_of(auto&& fn) {
  try {
    fn();
  } catch (const std::exception& e) {
    return e.what();
  }
  return {};
}

}  // namespace

TEST(Config, ParsesFlatKeyValues) {
  const Config c = Config::parse("# comment\n\ncfl = 0.3\nn-list=10,12, 14\nname = run one\nflag = true\n");
  EXPECT_DOUBLE_EQ(c.get_double("cfl", 0.0), 0.3);
  EXPECT_EQ(c.get_int_list("n-list", {}), (std::vector<int>{10, 12, 14}));
  EXPECT_EQ(c.get_string("name", ""), "run one");
  EXPECT_TRUE(c.get_bool("flag", false));
  EXPECT_EQ(c.get_int("missing", 7), 7);
}

TEST(Config, ErrorsNameTheKey) {
  const Config c = Config::parse("cfl = fast\nrecords = 1.5\n");
  EXPECT_NE(error_of([&] { c.get_double("cfl", 0.0); }).find("'cfl'"), std::string::npos);
  EXPECT_NE(error_of([&] { c.get_int("records", 0); }).find("'records'"), std::string::npos);
  EXPECT_NE(error_of([&] { c.require_known({"cfl"}); }).find("'records'"), std::string::npos);
  EXPECT_THROW(Config::parse("a = 1\na = 2\n"), ConfigError);
  EXPECT_THROW(Config::parse("= 1\n"), ConfigError);
  EXPECT_NE(error_of([] { Config::parse("just words\n"); }).find("just words"), std::string::npos);
}

TEST(Config, ListParsing) {
  EXPECT_EQ(parse_double_list("1e-4, 1e-3", "t"), (std::vector<double>{1e-4, 1e-3}));
  EXPECT_THROW(parse_int_list("1,,2", "n"), InvalidArgument);
  EXPECT_THROW(parse_double("1.0x", "v"), InvalidArgument);
}

TEST(Parallel, KeepsOrderAndRethrowsLowestIndex) {
  const std::vector<int> in{1, 2, 3, 4, 5, 6, 7};
  const auto out = parallel_map(in, [](int v) { return v * v; }, 4);
  EXPECT_EQ(out, (std::vector<int>{1, 4, 9, 16, 25, 36, 49}));
  const std::string msg = error_of([&] {
    parallel_map(in, [](int v) -> int {
      if (v % 3 == 0) throw std::runtime_error("bad " + std::to_string(v));
      return v;
    }, 3);
  });
  EXPECT_EQ(msg, "bad 3");
}

TEST(Parallel, ThreadCapFromEnvironment) {
  ::setenv("BESOVCH_THREADS", "1", 1);
  EXPECT_EQ(worker_count(), 1u);
  ::setenv("BESOVCH_THREADS", "zero", 1);
  EXPECT_THROW(worker_count(), ConfigError);
  ::unsetenv("BESOVCH_THREADS");
  EXPECT_GE(worker_count(), 1u);
}

TEST(FieldIo, BinaryAndCsvRoundTrip) {
  const auto dir = scratch_dir("io");
  const GridSpec g = make_grid(2.0, 64);
  const Field f = Field::sample(g, [](double x) { return std::exp(-x * x) + 0.1 * x; });
  write_field_binary(f, dir / "f.bin");
  write_field_csv(f, dir / "f.csv");
  const Field b = read_field(dir / "f.bin");
  const Field c = read_field(dir / "f.csv");
  EXPECT_EQ(b.grid(), g);
  EXPECT_EQ(c.grid(), g);
  for (std::size_t m = 0; m < g.n_points; ++m) {
    EXPECT_EQ(b[m], f[m]);
    EXPECT_EQ(c[m], f[m]);
  }
  EXPECT_NE(error_of([&] { read_field(dir / "absent.bin"); }).find("absent.bin"), std::string::npos);
}

TEST(Report, NumbersRoundTrip) {
  EXPECT_EQ(format_number(0.1), "0.1");
  EXPECT_EQ(format_number(-2.0), "-2");
  EXPECT_EQ(std::stod(format_number(std::numbers::pi)), std::numbers::pi);
  EXPECT_EQ(format_number(std::numeric_limits<double>::infinity()), "inf");
}

TEST(Report, Sha256KnownVector) {
  EXPECT_EQ(sha256_hex("abc"), "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}

TEST(Report, JsonIsDeterministic) {
  const GridSpec g = make_grid(std::numbers::pi, 256);
  const FilterBank bank(g);
  const Field f = Field::sample(g, [](double x) { return std::sin(3.0 * x) * std::exp(std::cos(x)); });
  const std::string a = to_json(besov_norm(f, BesovSpec::b1_inf_1(), bank));
  const std::string b = to_json(besov_norm(f, BesovSpec::b1_inf_1(), bank));
  EXPECT_EQ(a, b);
  EXPECT_NE(a.find("\"per_block\""), std::string::npos);
  EXPECT_NE(a.find("\"value\""), std::string::npos);
}

TEST(Report, WriteCreatesDirectoriesAndReadsBack) {
  const auto dir = scratch_dir("write");
  write_text_file(dir / "a" / "b.txt", "hello");
  EXPECT_EQ(read_text_file(dir / "a" / "b.txt"), "hello");
}
