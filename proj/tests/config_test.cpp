#include <doctest.h>

#include <string>

#include "franson/config.hpp"
#include "franson/errors.hpp"

using namespace franson;

TEST_CASE("empty object gives the defaults") {
  const RunConfig cfg = parse_config("{}");
  CHECK(cfg == RunConfig{});
  CHECK(cfg.seed == 1);
  CHECK(cfg.regime_a.critical_condition());
  CHECK(cfg.warnings.empty());
  CHECK(cfg.correlator_params().window == Picoseconds(10));
}

TEST_CASE("comments and overrides") {
  const RunConfig cfg = parse_config(R"({
    // ideal source
    "seed": 7,
    "source": {"delta": 2e12, "pump_linewidth": 1e6},
    "alice": {"t_sl": 50e-12, "phase": 0.5, "gamma": 0.9},
    "bob": {"t_sl": 50e-12},
    "detector": {"jitter": 0, "efficiency": 0.5},
    "correlator": {"window": 4e-12},
    "scan": {"points": 12, "pairs_per_point": 10, "mode": "analytic",
             "tau_offsets": [0, 1], "chsh_settings": [0, 1, 2, 3]}
  })");
  CHECK(cfg.seed == 7);
  CHECK(cfg.source.delta == 2e12);
  CHECK(cfg.alice.gamma == 0.9);
  CHECK_FALSE(cfg.bob.gamma.has_value());
  CHECK(cfg.detector.efficiency == 0.5);
  CHECK(cfg.correlator_params().window == Picoseconds(4));
  CHECK(cfg.correlator_params().t_sl == Picoseconds(50));
  CHECK(cfg.scan.mode == Mode::Analytic);
  CHECK(cfg.scan.tau_offsets == std::vector<double>{0, 1});
  CHECK(cfg.scan.chsh == ChshSettings{0, 1, 2, 3});
  CHECK(cfg.detection_setup().detector == cfg.detector);
}

TEST_CASE("constraint violations name the field") {
  try {
    parse_config(R"({"source": {"delta": 0}})");
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    CHECK(e.field() == "source.delta");
    CHECK(std::string(e.what()).find("delta must be > 0") != std::string::npos);
  }
  CHECK_THROWS_AS(parse_config(R"({"scan": {"points": 4}})"), ConfigError);
  CHECK_THROWS_AS(parse_config(R"({"scan": {"mode": "fast"}})"), ConfigError);
  CHECK_THROWS_AS(parse_config(R"({"schema_version": 2})"), ConfigError);
  CHECK_THROWS_AS(parse_config(R"({"seed": -1})"), ConfigError);
  CHECK_THROWS_AS(parse_config(R"({"source": {"delta": "big"}})"), ConfigError);
  CHECK_THROWS_AS(parse_config(R"({"detector": {"efficiency": 1.5}})"), ConfigError);
  CHECK_THROWS_AS(parse_config(R"({"scan": {"crossover_grid": [1, 0.5]}})"), ConfigError);
  CHECK_THROWS_AS(parse_config(R"({"correlator": {"tau_max": 50e-12}})"), ConfigError);
  CHECK_THROWS_AS(parse_config(R"({"source": {"tau_ind": 1e-13}})"), ConfigError);
}

TEST_CASE("unknown keys are rejected with their path") {
  try {
    parse_config(R"({"alice": {"t_sl": 1e-10, "phse": 0}})");
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    CHECK(e.field() == "alice.phse");
    CHECK(std::string(e.what()) == "unknown key 'alice.phse'");
  }
  CHECK_THROWS_AS(parse_config(R"({"extra": 1})"), ConfigError);
}

TEST_CASE("malformed text reports line and column") {
  try {
    parse_config("{\n  \"seed\": 1,\n  \"source\": {\"delta\": }\n}");
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(e.line() == 3);
    CHECK(e.column() >= 20);
    CHECK(std::string(e.what()).rfind("line 3, column", 0) == 0);
  }
}

TEST_CASE("regime warnings") {
  // delta * t_sl = 1 breaks the incoherent-ensemble condition
  const RunConfig cfg = parse_config(R"({"alice": {"t_sl": 1e-12}, "bob": {"t_sl": 1e-12},
                                         "correlator": {"window": 1e-12, "bin_width": 1e-12, "tau_max": 10e-12}})");
  CHECK_FALSE(cfg.regime_a.critical_condition());
  REQUIRE_FALSE(cfg.warnings.empty());
  CHECK(cfg.warnings[0] == "critical UMZI condition not satisfied");

  const RunConfig mismatch = parse_config(R"({"bob": {"t_sl": 101e-12}})");
  REQUIRE(mismatch.warnings.size() == 1);
  CHECK(mismatch.warnings[0].find("t_sl differs") != std::string::npos);

  const RunConfig wide = parse_config(R"({"correlator": {"window": 60e-12}})");
  REQUIRE(wide.warnings.size() == 1);
  CHECK(wide.warnings[0].find("overlap") != std::string::npos);
}

TEST_CASE("serialization round trip and hash") {
  const RunConfig cfg = parse_config(R"({"seed": 99, "alice": {"phase": 0.1, "gamma": 0.5},
                                         "correlator": {"bin_width": 1e-12},
                                         "scan": {"pump_grid": [0, 0.2]}})");
  const std::string text = serialize_config(cfg);
  const RunConfig back = parse_config(text);
  CHECK(back == cfg);
  CHECK(serialize_config(back) == text);
  CHECK(config_hash(back) == config_hash(cfg));
  CHECK(config_hash(cfg).size() == 16);
  CHECK(config_hash(cfg) != config_hash(RunConfig{}));

  // FNV-1a 64 reference values
  CHECK(fnv1a64("") == 0xcbf29ce484222325ULL);
  CHECK(fnv1a64("a") == 0xaf63dc4c8601ec8cULL);
  CHECK(fnv1a64("foobar") == 0x85944171f73967e8ULL);
}
