#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "cli/commands.hpp"
#include "cli/config.hpp"

using namespace dunkl::cli;
using json = nlohmann::json;

namespace {

std::filesystem::path scratch(const std::string& name) {
  const std::filesystem::path p = std::filesystem::temp_directory_path() / ("dunkl_cli_test_" + name);
  std::filesystem::remove_all(p);
  return p;
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

ExperimentConfig small_config(const std::string& out, json experiment = json::object()) {
  ExperimentConfig c = parse_config({{"version", 1}, {"grid", {{"R", 12.0}, {"n", 256}}}});
  c.out_dir = out;
  c.timestamp = false;
  c.experiment = experiment;
  return c;
}

}  // namespace

TEST(Config, DefaultsFromMinimalFile) {
  const ExperimentConfig c = parse_config({{"version", 1}});
  EXPECT_EQ(c.multiplicities, std::vector<double>{1.0});
  EXPECT_EQ(c.R, 12.0);
  EXPECT_EQ(c.n, 1024);
  EXPECT_EQ(c.seed, 0xD01Cu);
  EXPECT_TRUE(c.csv);
}

TEST(Config, SchemaViolationsAreRejected) {
  EXPECT_THROW(parse_config(json::object()), std::invalid_argument);
  EXPECT_THROW(parse_config({{"version", 2}}), std::invalid_argument);
  EXPECT_THROW(parse_config({{"version", 1}, {"colour", 3}}), std::invalid_argument);
  EXPECT_THROW(parse_config({{"version", 1}, {"grid", {{"n", 100}}}}), std::invalid_argument);
  EXPECT_THROW(parse_config({{"version", 1}, {"grid", {{"R", -1.0}}}}), std::invalid_argument);
  EXPECT_THROW(parse_config({{"version", 1}, {"grid", {{"m", 64}}}}), std::invalid_argument);
  EXPECT_THROW(parse_config({{"version", 1}, {"root_system", {{"multiplicities", {-1.0}}}}}),
               std::invalid_argument);
  EXPECT_THROW(parse_config({{"version", 1}, {"root_system", {{"d", 2}, {"multiplicities", {1.0}}}}}),
               std::invalid_argument);
  EXPECT_THROW(parse_config({{"version", 1}, {"seed", -4}}), std::invalid_argument);
}

TEST(Config, OverridesReplaceFileValues) {
  ExperimentConfig c = parse_config({{"version", 1}, {"seed", 3}});
  Overrides o;
  o.seed = 11;
  o.grid_n = 512;
  o.k = std::vector<double>{2.5};
  o.no_timestamp = true;
  apply_overrides(c, o);
  EXPECT_EQ(c.seed, 11u);
  EXPECT_EQ(c.n, 512);
  EXPECT_EQ(c.multiplicities, std::vector<double>{2.5});
  EXPECT_FALSE(c.timestamp);
}

TEST(Config, ParseList) {
  EXPECT_EQ(parse_list("1,0.5, 2"), (std::vector<double>{1.0, 0.5, 2.0}));
  EXPECT_THROW(parse_list("1,x"), std::invalid_argument);
}

TEST(ParamReader, RejectsUnreadKeys) {
  ParamReader p(json{{"eps", 0.1}, {"epz", 2}}, "thin gen");
  EXPECT_EQ(p.number("eps", 0.05), 0.1);
  EXPECT_EQ(p.integer("extent", 7), 7);
  EXPECT_THROW(p.finish(), std::invalid_argument);
  EXPECT_EQ(p.resolved()["extent"], 7);
}

TEST(ParamReader, TypeErrors) {
  ParamReader p(json{{"eps", "big"}}, "thin gen");
  EXPECT_THROW(p.number("eps", 0.05), std::invalid_argument);
}

TEST(Commands, NamesAndStems) {
  EXPECT_EQ(command_names().size(), 11u);
  EXPECT_EQ(file_stem("thin gen"), "thin_gen");
  EXPECT_EQ(file_stem("cutoff-decay"), "cutoff_decay");
  EXPECT_THROW(execute("frobnicate", small_config("unused")), std::invalid_argument);
}

TEST(Commands, BadInputExitsWithTwoAndWritesNothing) {
  const auto dir = scratch("bad");
  EXPECT_EQ(run("thin check", small_config(dir.string())), 2);
  EXPECT_EQ(run("thin gen", small_config(dir.string(), {{"bogus", 1}})), 2);
  EXPECT_FALSE(std::filesystem::exists(dir / "thin_check.json"));
}

TEST(Commands, ThinCheckWritesReport) {
  const auto dir = scratch("thin");
  EXPECT_EQ(run("thin check", small_config(dir.string(), {{"set", "empty"}, {"eps", 0.01}})), 0);
  const json report = json::parse(slurp(dir / "thin_check.json"));
  EXPECT_TRUE(report["pass"].get<bool>());
  EXPECT_EQ(report["summary"]["eps_hat"], 0.0);
  EXPECT_FALSE(report.contains("timestamp"));
}

TEST(Commands, FailedCheckExitsWithOne) {
  const auto dir = scratch("fail");
  const json set = json::array({json::array({-1.0, 1.0})});
  EXPECT_EQ(run("thin check", small_config(dir.string(), {{"set", set}, {"eps", 0.01}})), 1);
  EXPECT_FALSE(json::parse(slurp(dir / "thin_check.json"))["pass"].get<bool>());
}

TEST(Commands, PairNormWithEmptySigma) {
  const CommandOutput out = execute("pair norm", small_config("unused", {{"Sigma", "empty"}}));
  EXPECT_TRUE(out.pass);
  EXPECT_EQ(out.summary["norm_H"], 0.0);
  EXPECT_EQ(out.summary["C"], 2.0);
}

TEST(Commands, ThinGenArtifactFeedsThinCheck) {
  const auto dir = scratch("gen");
  ASSERT_EQ(run("thin gen", small_config(dir.string(), {{"eps", 0.05}})), 0);
  const json artifact = json::parse(slurp(dir / "thin_gen_set.json"));
  EXPECT_TRUE(std::filesystem::exists(dir / "thin_gen_intervals.csv"));
  const CommandOutput chk =
      execute("thin check", small_config("unused", {{"set", artifact["intervals"]}, {"eps", 0.05}}));
  EXPECT_TRUE(chk.pass);
  EXPECT_NEAR(chk.summary["eps_hat"].get<double>(), artifact["eps_hat"].get<double>(), 1e-12);
}

TEST(Selfcheck, OutputIsByteIdenticalAcrossRuns) {
  const auto dir = scratch("self");
  ExperimentConfig c = small_config(dir.string());
  c.n = 1024;
  ASSERT_EQ(run("selfcheck", c), 0);
  const std::string first = slurp(dir / "selfcheck.json");
  ASSERT_EQ(run("selfcheck", c), 0);
  EXPECT_EQ(first, slurp(dir / "selfcheck.json"));
}
