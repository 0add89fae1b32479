#include <doctest.h>

#include <atomic>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <sstream>

#include "slly/report.hpp"

using namespace slly::report;

TEST_CASE("double formatting") {
  CHECK(format_double(0.1) == "0.10000000000000001");
  CHECK(format_double(1.0) == "1.0");
  CHECK(format_double(-2.5) == "-2.5");
  CHECK(format_double(1e300) == "1.0000000000000001e+300");
  CHECK(format_double(std::nan("")) == "null");
  CHECK(format_double(std::numeric_limits<double>::infinity()) == "null");
  for (double v : {M_PI, -1.0 / 3.0, 6.02214076e23, 5e-324}) CHECK(std::strtod(format_double(v).c_str(), nullptr) == v);
}

TEST_CASE("dumps are byte identical and parse back") {
  nlohmann::json j = {{"b", {1.0, 2.5, 0.1}}, {"a", "x"}, {"n", 3}, {"flag", true}, {"none", nullptr}};
  const std::string s1 = dump(j);
  const std::string s2 = dump(nlohmann::json::parse(s1));
  CHECK(s1 == dump(j));
  CHECK(nlohmann::json::parse(s1) == j);
  CHECK(s1.find("\"a\"") < s1.find("\"b\""));
  CHECK(s1.find("0.10000000000000001") != std::string::npos);
  CHECK(s2 == s1);
  CHECK(dump(nlohmann::json::object(), 2) == "{}");
  CHECK(dump(nlohmann::json::array(), 2) == "[]");
  CHECK(dump(nlohmann::json("q\"\n")) == "\"q\\\"\\n\"");
}

TEST_CASE("atomic write") {
  const auto dir = std::filesystem::temp_directory_path() / "slly_report_test";
  std::filesystem::create_directories(dir);
  const auto path = dir / "out.json";
  write_atomic(path, "first");
  write_atomic(path, "second");
  std::ifstream in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  CHECK(ss.str() == "second");
  CHECK(!std::filesystem::exists(path.string() + ".tmp"));
  std::filesystem::remove_all(dir);
  CHECK_THROWS(write_atomic("/nonexistent-dir/x/y.json", "z"));
}

TEST_CASE("parallel loop") {
  ::setenv("SLLY_THREADS", "3", 1);
  CHECK(thread_count() == 3);
  std::vector<double> out(1000);
  parallel_for(out.size(), [&](std::size_t i) { out[i] = std::sqrt(static_cast<double>(i)); });
  for (std::size_t i = 0; i < out.size(); ++i) CHECK(out[i] == std::sqrt(static_cast<double>(i)));
  std::atomic<int> calls{0};
  CHECK_THROWS_AS(parallel_for(50,
                               [&](std::size_t i) {
                                 ++calls;
                                 if (i == 7) throw std::runtime_error("boom");
                               }),
                  std::runtime_error);
  ::setenv("SLLY_THREADS", "0", 1);
  CHECK(thread_count() >= 1);
  ::unsetenv("SLLY_THREADS");
  CHECK(thread_count() >= 1);
  parallel_for(0, [](std::size_t) { FAIL("no calls expected"); });
}
