#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "cli_args.hpp"
#include "dimerlab/cli.hpp"

using namespace dimerlab;
using cli::RunConfig;

namespace {

RunConfig parse(std::vector<std::string> args) {
  CLI::App app;
  tool::Parsed parsed;
  tool::configure(app, parsed);
  std::reverse(args.begin(), args.end());
  app.parse(args);
  return parsed.config;
}

std::string emit(const RunConfig& c) {
  std::ostringstream os;
  cli::render(os, c, cli::run_command(c));
  return os.str();
}

}  // namespace

TEST(CliParse, RingOptions) {
  const auto c = parse({"ring", "--S", "3", "--N", "2", "--a", "0", "--b", "2", "--format", "json"});
  EXPECT_EQ(c.command, "ring");
  EXPECT_EQ(c.S, 3);
  EXPECT_EQ(c.N, 2);
  EXPECT_EQ(c.a, 0);
  EXPECT_EQ(c.b, 2);
  EXPECT_EQ(c.format, cli::Format::kJson);
  EXPECT_FALSE(c.closed_form_only);
}

TEST(CliParse, ListOptionsAndValidation) {
  const auto c = parse({"lattice", "--family", "honeycomb", "--sizes", "4,6", "--boundary", "open", "--check-oracle"});
  EXPECT_EQ(c.sizes, (std::vector<int>{4, 6}));
  EXPECT_TRUE(c.check_oracle);
  EXPECT_EQ(parse({"thresholds", "--z", "3,4,6"}).z, (std::vector<int>{3, 4, 6}));
  EXPECT_EQ(parse({"verify", "--only", "ring,9"}).only, (std::vector<std::string>{"ring", "9"}));
  EXPECT_THROW(parse({"ring", "--S", "1"}), CLI::ValidationError);
  EXPECT_THROW(parse({"ring", "--S", "3", "--a", "3"}), ArgumentError);
  EXPECT_THROW(parse({"lattice", "--family", "triangular"}), CLI::ValidationError);
  EXPECT_THROW(parse({"lattice", "--family", "file"}), ArgumentError);
  EXPECT_THROW(parse({"thresholds", "--z", "1"}), ArgumentError);
  EXPECT_THROW(parse({}), CLI::RequiredError);
}

TEST(CliRing, OracleDeviationIsReported) {
  auto c = parse({"ring", "--S", "2", "--N", "3", "--a", "0", "--b", "0", "--format", "json"});
  const auto [config, result] = cli::parse_report(emit(c));
  EXPECT_LT(result["oracle"]["max_diff"].get<double>(), 1e-12);
  EXPECT_TRUE(result["oracle"]["checked"].get<bool>());
}

TEST(CliRing, OrthogonalCoveringsGiveTraceTwo) {
  const auto out = cli::run_command(parse({"ring", "--S", "3", "--N", "2"}));
  EXPECT_DOUBLE_EQ(out.result["trace_M"].get<double>(), 2.0);
  EXPECT_TRUE(out.ok);
}

TEST(CliRing, LongRingClosedFormApproachesLimit) {
  const auto out = cli::run_command(parse({"ring", "--S", "2", "--N", "12", "--closed-form-only"}));
  EXPECT_DOUBLE_EQ(out.result["limit_negativity"].get<double>(), 0.125);
  const auto& last = out.result["series"].back();
  EXPECT_EQ(last["N"].get<int>(), 12);
  EXPECT_LT(last["deviation"].get<double>(), 2e-4);
  EXPECT_FALSE(out.result["oracle"]["checked"].get<bool>());
}

TEST(CliRing, CapErrorNamesTheWayOut) {
  try {
    cli::run_command(parse({"ring", "--S", "2", "--N", "12"}));
    FAIL() << "expected CapacityError";
  } catch (const CapacityError& e) {
    const std::string msg = e.what();
    EXPECT_NE(msg.find("--closed-form-only"), std::string::npos);
    EXPECT_NE(msg.find("DIMERLAB_MAX_STATE"), std::string::npos);
  }
}

TEST(CliLattice, HandCountableGrid) {
  const auto out = cli::run_command(parse({"lattice", "--family", "square", "--sizes", "2", "--boundary", "open"}));
  EXPECT_DOUBLE_EQ(out.result["sizes"][0]["fraction"].get<double>(), 0.5);
  EXPECT_EQ(out.result["sizes"][0]["matchings"].get<int>(), 2);
}

TEST(CliLattice, PeriodicSquareSequence) {
  const auto out = cli::run_command(parse({"lattice", "--family", "square", "--sizes", "4,6", "--boundary", "periodic"}));
  EXPECT_EQ(out.result["sizes"].size(), 2u);
  EXPECT_NEAR(out.result["extrapolation"]["f_inf"].get<double>(), 0.25, 1e-12);
  EXPECT_FALSE(out.result["truncated"].get<bool>());
}

TEST(CliLattice, HoneycombOracleCheckPasses) {
  const auto out = cli::run_command(parse({"lattice", "--family", "honeycomb", "--check-oracle"}));
  ASSERT_EQ(out.result["oracle"].size(), 1u);
  EXPECT_TRUE(out.result["oracle"][0]["pass"].get<bool>());
  EXPECT_TRUE(out.ok);
}

TEST(CliLattice, TruncationIsFlagged) {
  const auto out =
      cli::run_command(parse({"lattice", "--family", "square", "--sizes", "4,6", "--max-nodes", "5000"}));
  EXPECT_TRUE(out.result["truncated"].get<bool>());
  EXPECT_TRUE(out.result["sizes"][1]["truncated"].get<bool>());
  EXPECT_TRUE(out.result["sizes"][1]["fraction"].is_null());
}

TEST(CliLattice, EdgeListFile) {
  const auto path = std::filesystem::temp_directory_path() / "dimerlab_cli_hexagon.txt";
  {
    std::ofstream f(path);
    f << "vertices 6\n0 1\n1 2\n2 3\n3 4\n4 5\n5 0\n";
  }
  const auto out = cli::run_command(parse({"lattice", "--family", "file", "--file", path.string(), "--check-oracle"}));
  EXPECT_DOUBLE_EQ(out.result["sizes"][0]["fraction"].get<double>(), 0.5);
  EXPECT_TRUE(out.ok);
  std::filesystem::remove(path);
}

TEST(CliThresholds, QuotedNoiseFractions) {
  const auto out = cli::run_command(parse({"thresholds", "--z", "3,4,6"}));
  const auto& rows = out.result["rows"];
  EXPECT_NEAR(rows[0]["noise"].get<double>(), 2.0 / 3.0, 1e-12);
  EXPECT_NEAR(rows[1]["noise"].get<double>(), 0.75, 1e-12);
  EXPECT_NEAR(rows[2]["noise"].get<double>(), 5.0 / 6.0, 1e-12);
  EXPECT_EQ(cli::run_command(parse({"thresholds", "--z", "2"})).result["rows"][0]["S_min"].get<int>(), 2);
}

TEST(CliThresholds, CsvHasHeaderAndOneRow) {
  const auto text = emit(parse({"thresholds", "--z", "4", "--format", "csv"}));
  EXPECT_EQ(text, "z,f,noise,S_min,s_min,negativity_at_S_min\n4,0.25,0.75,4,1.5,0.09375\n");
}

TEST(CliWerner, BoundaryWeightIsNotEntangled) {
  const auto out = cli::run_command(parse({"werner", "--spins", "2", "--p", "0.5,0.3333333333333333"}));
  EXPECT_TRUE(out.result["rows"][0]["entangled"].get<bool>());
  EXPECT_FALSE(out.result["rows"][1]["entangled"].get<bool>());
}

TEST(CliReport, JsonRoundTripsLosslessly) {
  for (const auto& args : std::vector<std::vector<std::string>>{
           {"ring", "--S", "3", "--N", "3", "--a", "2", "--b", "1", "--format", "json"},
           {"lattice", "--family", "honeycomb", "--sizes", "4", "--spins", "2,3", "--format", "json"},
           {"werner", "--spins", "3", "--p", "0.2,0.7", "--format", "json", "--seed", "17"},
           {"thresholds", "--z", "3,5", "--format", "json"},
           {"verify", "--only", "thresholds", "--format", "json"}}) {
    const auto c = parse(args);
    const auto text = emit(c);
    const auto [config, result] = cli::parse_report(text);
    EXPECT_EQ(cli::to_json(config).dump(), cli::to_json(c).dump()) << args[0];
    const auto j = cli::Json::parse(text);
    EXPECT_EQ(result.dump(), j["result"].dump()) << args[0];
    // Re-serializing the parsed pair reproduces the report byte for byte.
    cli::Outcome again;
    again.result = result;
    again.ok = j["ok"].get<bool>();
    EXPECT_EQ(cli::envelope(config, again).dump(2) + "\n", text) << args[0];
  }
}

TEST(CliReport, RejectsForeignSchema) {
  EXPECT_THROW(cli::parse_report(R"({"schema":"other/v9","config":{},"result":{}})"), ArgumentError);
}

TEST(CliReport, IdenticalRunsAreByteIdentical) {
  for (const auto& args : std::vector<std::vector<std::string>>{
           {"ring", "--S", "2", "--N", "5", "--format", "json"},
           {"lattice", "--family", "square", "--sizes", "4,6", "--threads", "3", "--format", "csv"},
           {"verify", "--only", "ring", "--format", "json"}}) {
    const auto c = parse(args);
    EXPECT_EQ(emit(c), emit(c)) << args[0];
  }
}

TEST(CliReport, MachineNumbersCarryTwelveDigits) {
  const auto text = emit(parse({"thresholds", "--z", "3", "--format", "json"}));
  EXPECT_NE(text.find("0.333333333333"), std::string::npos);
  EXPECT_EQ(text.find("0.3333333333333"), std::string::npos);
}

TEST(CliVerify, SubsetRunReportsOnlySelectedCriteria) {
  const auto out = cli::run_command(parse({"verify", "--only", "thresholds", "--format", "json"}));
  ASSERT_EQ(out.result["criteria"].size(), 1u);
  EXPECT_EQ(out.result["criteria"][0]["id"].get<int>(), 9);
  EXPECT_TRUE(out.ok);
  const auto back = acceptance::result_from_json(out.result["criteria"][0]);
  EXPECT_EQ(acceptance::to_json(back).dump(), out.result["criteria"][0].dump());
}
