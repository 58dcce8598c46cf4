#include <doctest.h>

#include <cmath>
#include <random>
#include <sstream>

#include "balancer/csv.hpp"

using namespace balancer;

TEST_CASE("split handles quotes and empty fields") {
  CHECK(csv::split_line("a,b,c") == std::vector<std::string>{"a", "b", "c"});
  CHECK(csv::split_line("a,,c") == std::vector<std::string>{"a", "", "c"});
  CHECK(csv::split_line("\"x, y\",2") == std::vector<std::string>{"x, y", "2"});
  CHECK(csv::split_line("\"say \"\"hi\"\"\",1") == std::vector<std::string>{"say \"hi\"", "1"});
}

TEST_CASE("escape round trips through split") {
  for (std::string f : {"plain", "with,comma", "with\"quote", ""}) {
    CHECK(csv::split_line(csv::escape(f) + ",z") == std::vector<std::string>{f, "z"});
  }
}

TEST_CASE("read_lines strips BOM and carriage returns") {
  std::istringstream in("\xEF\xBB\xBFh1,h2\r\n1,2\r\n");
  const auto lines = csv::read_lines(in);
  REQUIRE(lines.size() == 2);
  CHECK(lines[0] == "h1,h2");
  CHECK(lines[1] == "1,2");
}

TEST_CASE("format_double is shortest round trip") {
  CHECK(csv::format_double(0.5) == "0.5");
  CHECK(csv::format_double(-3.0) == "-3");
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> d(-1e6, 1e6);
  for (int i = 0; i < 1000; ++i) {
    const double v = d(rng);
    CHECK(std::stod(csv::format_double(v)) == v);
  }
}
