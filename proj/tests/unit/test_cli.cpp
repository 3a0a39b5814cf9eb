#include <gtest/gtest.h>

#include <cstdio>
#include <sstream>
#include <string>
#include <sys/wait.h>

#include "dartree/cli.hpp"

using namespace dartree;

namespace {

struct Result {
  int code = 0;
  std::string out;
  Json json;
};

std::string fixture(const std::string& name) { return std::string(DARTREE_DATA_DIR) + "/" + name; }

Result run(std::vector<std::string> args) {
  std::ostringstream out, err;
  Result r;
  r.code = cli::run(args, out, err);
  r.out = out.str();
  r.json = Json::parse(r.out);
  return r;
}

/// Runs the built executable; returns exit status and stdout.
std::pair<int, std::string> run_binary(const std::string& args) {
  const std::string cmd = std::string(DARTREE_CLI_PATH) + " " + args + " 2>/dev/null";
  FILE* pipe = popen(cmd.c_str(), "r");
  std::string out;
  char buf[4096];
  while (pipe && fgets(buf, sizeof buf, pipe)) out += buf;
  const int status = pipe ? pclose(pipe) : -1;
  return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, out};
}

}  // namespace

TEST(Cli, ValidateStar) {
  const auto r = run({"validate", fixture("star2.json")});
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.json["branching_index"], 1);
  EXPECT_EQ(r.json["generations"], Json::parse("[1,2,2,2]"));
  EXPECT_EQ(r.json["vertices"], 7);
}

TEST(Cli, ValidateRejectsBadTree) {
  const auto r = run({"validate", fixture("bad_two_roots.json")});
  EXPECT_EQ(r.code, 3);
  EXPECT_EQ(r.json["error"]["kind"], "MultipleRoots");
}

TEST(Cli, ReportStarTimesRay) {
  const auto r = run({"report", fixture("star2.json") + "," + fixture("ray.json"), "--a", "1", "--depth", "4"});
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.json["dim_E"], 2);
  EXPECT_EQ(r.json["joint_kernel_dim"], 2);
  EXPECT_EQ(r.json["moment_check"]["ok"], true);
  ASSERT_EQ(r.json["blocks"].size(), 2u);
  EXPECT_EQ(r.json["blocks"][1]["F"], Json::parse("[1]"));
  EXPECT_EQ(r.json["blocks"][1]["M"], 2);
  EXPECT_EQ(r.json["blocks"][1]["N"], 1);
  for (const auto& e : r.json["kernel_coefficients"]) {
    EXPECT_TRUE(e["value"].is_string());
    if (!e["oracle_agrees"].is_null()) EXPECT_EQ(e["oracle_agrees"], true);
  }
}

TEST(Cli, ReportDefaultsAndWeightSyntax) {
  const auto r = run({"report", fixture("binary2.json") + "," + fixture("star2.json"), "--c", "table:2,1,1;eventual=1"});
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.json["depth"], 5);
  EXPECT_EQ(r.json["c"], "table:2,1,1;eventual=1");
  const auto bad = run({"report", fixture("star2.json")});
  EXPECT_EQ(bad.code, 3);
  const auto bad_c = run({"report", fixture("star2.json"), "--c", "c_a:x"});
  EXPECT_EQ(bad_c.code, 3);
}

TEST(Cli, VerifyCountsEverything) {
  const auto r = run({"verify", fixture("binary2.json") + "," + fixture("star2.json"), "--a", "3"});
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.json["failed"], 0);
  EXPECT_GT(r.json["passed"].get<int>(), 100);
  std::vector<std::string> names;
  for (const auto& c : r.json["checks"]) names.push_back(c["name"]);
  EXPECT_EQ(names, (std::vector<std::string>{"commuting", "balanced", "cauchy_dual", "block_dimensions", "moments",
                                             "spherical_sums", "kernel_coefficients", "density_moments"}));
}

TEST(Cli, ClassifySplitPair) {
  const auto r = run({"classify", fixture("split_2_1.json") + "," + fixture("ray.json"),
                      fixture("split_2_2.json") + "," + fixture("ray.json"), "--a", "2", "--intertwiner", "--depth",
                      "5"});
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.json["decision"], "isomorphic");
  EXPECT_EQ(r.json["graph_isomorphic"], false);
  EXPECT_EQ(r.json["intertwiner"]["certified"], true);
  EXPECT_EQ(r.json["intertwiner"]["card_V"], 56);
}

TEST(Cli, ClassifyExitCodes) {
  EXPECT_EQ(run({"classify", fixture("star2.json"), fixture("star3.json"), "--a", "2"}).code, 1);
  EXPECT_EQ(run({"classify", fixture("star2.json"), fixture("star3.json"), "--a", "1"}).code, 2);
  EXPECT_EQ(run({"classify", fixture("star2.json"), fixture("star2.json") + "," + fixture("ray.json"), "--a", "1"}).code,
            3);
  EXPECT_EQ(run({"classify", fixture("star2.json"), fixture("star3.json"), "--a", "0"}).code, 3);
}

TEST(Cli, Measure) {
  const auto r = run({"measure", "--a", "3", "--d", "2", "--l", "1", "--max-n", "5"});
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.json["kind"], "w");
  EXPECT_EQ(r.json["coefficients"], Json::parse(R"(["0","0","3"])"));
  EXPECT_EQ(r.json["moment_check"].size(), 6u);
  EXPECT_EQ(r.json["moment_check"][1]["lhs"], "3/4");
  EXPECT_EQ(r.json["all_ok"], true);
  EXPECT_EQ(run({"measure", "--a", "2", "--d", "2"}).json["kind"], "delta_1");
  EXPECT_EQ(run({"measure", "--a", "1", "--d", "3"}).json["kind"], "omega");
}

TEST(Cli, UnknownVerbAndMissingFile) {
  EXPECT_EQ(run({"frobnicate"}).code, 3);
  const auto r = run({"validate", "/no/such/file.json"});
  EXPECT_EQ(r.code, 3);
  EXPECT_EQ(r.json["error"]["kind"], "MalformedInput");
}

TEST(Cli, BinaryMatchesInProcess) {
  const std::string args = "validate " + fixture("binary2.json");
  const auto [code, out] = run_binary(args);
  EXPECT_EQ(code, 0);
  EXPECT_EQ(out, run({"validate", fixture("binary2.json")}).out);
  EXPECT_EQ(run_binary("classify " + fixture("star2.json") + " " + fixture("star3.json") + " --a 1").first, 2);
}

TEST(Cli, RepeatedRunsAreIdentical) {
  const std::vector<std::string> args{"report", fixture("binary2.json") + "," + fixture("star2.json"), "--a", "2"};
  const auto first = run(args).out;
  for (int k = 0; k < 2; ++k) EXPECT_EQ(run(args).out, first);
}
