#include "doctest.h"
#include "run_config.hpp"

using fwcli::ConfigError;
using fwcli::RunConfig;

TEST_CASE("parses dotted keys, comments and blanks") {
  const auto c = RunConfig::parse("# header\n\nprotocol.h0 = 1.5\n  grid.n_k=500  \ntask.n_list = 1, 10, inf\n");
  CHECK(c.number("protocol.h0") == 1.5);
  CHECK(c.integer("grid.n_k") == 500);
  CHECK(c.list("task.n_list") == std::vector<std::string>{"1", "10", "inf"});
  CHECK(c.number_or("protocol.phase", 0.25) == 0.25);
  CHECK(c.to_json() == R"({"grid.n_k":"500","protocol.h0":"1.5","task.n_list":"1, 10, inf"})");
}

TEST_CASE("rejects unknown, duplicate and malformed entries") {
  CHECK_THROWS_AS(RunConfig::parse("protocol.h1 = 2\n"), ConfigError);
  CHECK_THROWS_AS(RunConfig::parse("grid.n_k = 5\ngrid.n_k = 6\n"), ConfigError);
  CHECK_THROWS_AS(RunConfig::parse("grid.n_k\n"), ConfigError);
  CHECK_THROWS_AS(RunConfig::parse("grid.n_k = \n"), ConfigError);
  const auto c = RunConfig::parse("grid.n_k = 5x\nprotocol.h0 = nan\n");
  CHECK_THROWS_AS(c.integer("grid.n_k"), ConfigError);
  CHECK_THROWS_AS(c.number("protocol.h0"), ConfigError);
}

TEST_CASE("missing keys are named") {
  const auto c = RunConfig::parse("protocol.h0 = 1\n");
  try {
    c.number("protocol.omega");
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    CHECK(std::string(e.what()).find("protocol.omega") != std::string::npos);
  }
}
