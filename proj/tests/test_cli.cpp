#include <gtest/gtest.h>

#include <array>
#include <map>
#include <vector>
#include <cstdio>
#include <fstream>
#include <json.hpp>
#include <sstream>
#include <string>
#include <sys/wait.h>

using nlohmann::json;

namespace {

struct CliResult {
  int code = -1;
  std::string out;
};

CliResult run(const std::string& args, const std::string& env = "") {
  const std::string cmd = env + (env.empty() ? "" : " ") + WD_CLI_PATH + std::string(" ") + args + " 2>/dev/null";
  CliResult r;
  FILE* f = popen(cmd.c_str(), "r");
  if (!f) return r;
  std::array<char, 4096> buf{};
  std::size_t got;
  while ((got = std::fread(buf.data(), 1, buf.size(), f)) > 0) r.out.append(buf.data(), got);
  const int status = pclose(f);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST(Cli, ClassifyThreeClasses) {
  const CliResult r = run("classify --p 2 --n 3 --field-deg 2 --json");
  ASSERT_EQ(r.code, 0);
  const auto j = json::parse(r.out);
  EXPECT_EQ(j["status"], "ok");
  EXPECT_EQ(j["classes"].size(), 3u);
}

TEST(Cli, WittPolysLengthTwo) {
  const CliResult r = run("witt-polys --p 2 --len 2 --json");
  ASSERT_EQ(r.code, 0);
  const auto j = json::parse(r.out);
  // A_1 = X_1 + Y_1 - X_0 Y_0 over variables (X0, X1, Y0, Y1)
  std::map<std::vector<unsigned>, std::string> a1;
  for (const auto& t : j["add"][1]) a1[t["exponents"].get<std::vector<unsigned>>()] = t["coefficient"];
  const std::map<std::vector<unsigned>, std::string> expected{
      {{0, 1, 0, 0}, "1"}, {{0, 0, 0, 1}, "1"}, {{1, 0, 1, 0}, "-1"}};
  EXPECT_EQ(a1, expected);
}

TEST(Cli, HopfKernelGolden) {
  const CliResult r = run("hopf --p 2 --family kernel --r 1 --s 1 --m 2 --json");
  ASSERT_EQ(r.code, 0);
  EXPECT_EQ(r.out, slurp(WD_GOLDEN_DIR "/hopf_kernel_p2.json"));
  const auto j = json::parse(r.out);
  EXPECT_EQ(j["relations"], json({"T0^2", "T1^2 - T0"}));
  EXPECT_EQ(j["comultiplication"]["T1"], "T1 (x) 1 + T0 (x) T0 + 1 (x) T1");
  EXPECT_EQ(j["invariants"]["order_exponent"], 2);
  EXPECT_EQ(j["invariants"]["height"], 2);
  EXPECT_EQ(j["invariants"]["v_order"], 2);
  EXPECT_EQ(j["invariants"]["lie_dim"], 1);
}

TEST(Cli, ByteStableOutput) {
  for (const char* args : {"hopf --p 3 --family selfdual-example --json", "duality --p 2 --r 2 --s 1 --m 2 --json",
                           "classify --p 3 --n 2 --json"}) {
    const CliResult a = run(args), b = run(args);
    EXPECT_EQ(a.code, 0) << args;
    EXPECT_EQ(a.out, b.out) << args;
  }
}

TEST(Cli, DualityReport) {
  const CliResult r = run("duality --p 2 --r 1 --s 2 --m 2 --json");
  ASSERT_EQ(r.code, 0);
  const auto j = json::parse(r.out);
  EXPECT_TRUE(j["dimension_identity"]["holds"]);
  EXPECT_TRUE(j["dual_matches_swapped"]);
}

TEST(Cli, NoncommutativeFamily) {
  const CliResult r = run("hopf --p 2 --family noncomm --n 2 --json");
  ASSERT_EQ(r.code, 0);
  const auto j = json::parse(r.out);
  EXPECT_EQ(j["comultiplication"]["T1"], "T1 (x) 1 + T0^2 (x) T0 + 1 (x) T1");
  EXPECT_FALSE(j["invariants"]["cocommutative"]);
  EXPECT_EQ(j["invariants"]["lie_dim"], 1);
}

TEST(Cli, ExitCodes) {
  EXPECT_EQ(run("frobnicate").code, 2);
  EXPECT_EQ(run("").code, 2);
  EXPECT_EQ(run("hopf --p 4 --family witt").code, 2);
  EXPECT_EQ(run("hopf --p 2 --family nonsense").code, 2);
  EXPECT_EQ(run("hopf --p 2 --family witt --n 2 --i 2", "WD_GUARD_DIM=8").code, 2);
  EXPECT_EQ(run("hopf --p 2 --family witt --n 2 --i 2").code, 0);
  EXPECT_EQ(run("classify --p 2 --n 3 --budget 1").code, 2);
}

TEST(Cli, SelfcheckSubsetAndMutation) {
  const CliResult ok = run("selfcheck --only 1 --only 2 --json");
  ASSERT_EQ(ok.code, 0);
  EXPECT_EQ(json::parse(ok.out)["status"], "ok");
  const CliResult bad = run("selfcheck --only 1 --mutate-s1 --json");
  ASSERT_EQ(bad.code, 1);
  const auto j = json::parse(bad.out);
  EXPECT_EQ(j["first_failure"]["criterion"], 1);
  EXPECT_NE(j["first_failure"]["detail"].get<std::string>().find("addition"), std::string::npos);
}

TEST(Cli, SelfcheckReportsKnownFailure) {
  const CliResult r = run("selfcheck --only 9");
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.out.find("FAIL   9"), std::string::npos);
  EXPECT_NE(r.out.find("known failure"), std::string::npos);
}
