#include <gtest/gtest.h>

#include <string>

#include "twoscale/config.hpp"

using namespace twoscale;

namespace {

const std::string base_ini = R"([grid]
L = 2.0
ell = 0.5
nx = 8
ny = 4

[params]
d1 = 0.1
alpha = 0.2

[time]
t_end = 3.0
mode = adaptive
rtol = 1e-7
snapshot_times = 0, 1.5, 3

[run]
scenario = fig1
micro_slices = 0.5, 1.0
)";

std::string message_of(const std::string& text) {
  try {
    validate_config(parse_config(text));
  } catch (const ConfigError& e) {
    return e.what();
  }
  return {};
}

}  // namespace

TEST(ParseConfig, ReadsSectionsAndScenarioDefaults) {
  const RunConfig c = parse_config(base_ini);
  EXPECT_EQ(c.grid.nx, 8);
  EXPECT_EQ(c.grid.ell, 0.5);
  EXPECT_EQ(c.params.d1, 0.1);
  EXPECT_EQ(c.params.alpha.constant_value(), 0.2);
  EXPECT_EQ(c.params.d2, fig1_params().d2);
  EXPECT_EQ(c.time.mode, StepMode::adaptive);
  EXPECT_EQ(c.time.rtol, 1e-7);
  ASSERT_EQ(c.time.snapshot_times.size(), 3u);
  EXPECT_EQ(c.time.snapshot_times[1], 1.5);
  ASSERT_EQ(c.micro_slices.size(), 2u);
  EXPECT_EQ(c.seed, 42u);
  EXPECT_NO_THROW(validate_config(c));
}

TEST(ParseConfig, RejectsUnknownKeys) {
  EXPECT_NE(message_of(base_ini + "colour = blue\n").find("unknown key 'run.colour'"), std::string::npos);
  EXPECT_NE(message_of(base_ini + "[extra]\nx = 1\n").find("unknown key"), std::string::npos);
}

TEST(ParseConfig, MissingRequiredKeyIsNamed) {
  std::string text = base_ini;
  text.erase(text.find("ny = 4\n"), 7);
  EXPECT_NE(message_of(text).find("grid.ny"), std::string::npos);
  text = base_ini;
  text.erase(text.find("t_end = 3.0\n"), 12);
  EXPECT_NE(message_of(text).find("time.t_end"), std::string::npos);
}

TEST(ParseConfig, RejectsMalformedValues) {
  std::string text = base_ini;
  text.replace(text.find("nx = 8"), 6, "nx = 8.5");
  EXPECT_NE(message_of(text).find("grid.nx"), std::string::npos);
  text = base_ini;
  text.replace(text.find("d1 = 0.1"), 8, "d1 = -0.1");
  EXPECT_NE(message_of(text).find("params"), std::string::npos);
  text = base_ini;
  text.replace(text.find("mode = adaptive"), 15, "mode = implicit");
  EXPECT_FALSE(message_of(text).empty());
  text = base_ini;
  text.replace(text.find("scenario = fig1"), 15, "scenario = nope");
  EXPECT_THROW(parse_config(text), std::exception);
}

TEST(ValidateConfig, ChecksSlicesSnapshotsAndGrid) {
  std::string text = base_ini;
  text.replace(text.find("0.5, 1.0"), 8, "0.5, 2.5");
  EXPECT_NE(message_of(text).find("micro_slices"), std::string::npos);
  text = base_ini;
  text.replace(text.find("0, 1.5, 3"), 9, "0, 4");
  EXPECT_NE(message_of(text).find("time"), std::string::npos);
  text = base_ini;
  text.replace(text.find("nx = 8"), 6, "nx = 1");
  EXPECT_NE(message_of(text).find("grid"), std::string::npos);
}

TEST(ConfigHash, StableAndSensitive) {
  const RunConfig a = parse_config(base_ini);
  const RunConfig b = parse_config("; comment\n" + base_ini);
  EXPECT_EQ(config_hash(a), config_hash(b));
  EXPECT_EQ(config_hash(a).size(), 16u);
  std::string text = base_ini;
  text.replace(text.find("d1 = 0.1"), 8, "d1 = 0.10000000000000002");
  EXPECT_NE(config_hash(a), config_hash(parse_config(text)));
  EXPECT_EQ(fnv1a(""), 0xcbf29ce484222325ULL);
  EXPECT_EQ(fnv1a("a"), 0xaf63dc4c8601ec8cULL);
}

TEST(ConfigEcho, RoundTripsThroughParser) {
  const RunConfig c = parse_config(base_ini);
  EXPECT_NE(config_echo(c).find("params.d1 = 0.10000000000000001"), std::string::npos);
  EXPECT_NE(config_echo(c).find("run.scenario = fig1"), std::string::npos);
}
