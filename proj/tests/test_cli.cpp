#include <gtest/gtest.h>
#include <sys/wait.h>

#include <array>
#include <cstdio>
#include <fstream>
#include <string>

namespace {

struct CliRun {
  int code;
  std::string out;
};

CliRun run(const std::string& args) {
  const std::string cmd = std::string(DIFFINV_CLI_PATH) + " " + args + " 2>/dev/null";
  FILE* pipe = popen(cmd.c_str(), "r");
  if (!pipe) return {-1, ""};
  std::string out;
  std::array<char, 4096> buf{};
  std::size_t n = 0;
  while ((n = fread(buf.data(), 1, buf.size(), pipe)) > 0) out.append(buf.data(), n);
  const int status = pclose(pipe);
  return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, out};
}

}  // namespace

TEST(Cli, InvariantsQuadratic) {
  const CliRun r = run("invariants --group G --bidegree 2,0");
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.out, "x1^2+x2^2+x3^2\n");
}

TEST(Cli, InvariantsRelativeQuadratic) {
  const CliRun r = run("invariants --group H --character chi --bidegree 2,0");
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.out, "x2*x3\n");
}

TEST(Cli, InvariantsHbarAgreesWithH) {
  EXPECT_EQ(run("invariants --group Hbar --character chi --bidegree 3,1").out,
            run("invariants --group H --character chi --bidegree 3,1").out);
}

TEST(Cli, InvariantsEmptyBasis) {
  const CliRun r = run("invariants --group G --bidegree 1,0");
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.out, "");
}

TEST(Cli, UsageErrors) {
  EXPECT_EQ(run("invariants --group K --bidegree 1,0").code, 2);
  EXPECT_EQ(run("invariants --group G --character psi --bidegree 1,0").code, 2);
  EXPECT_EQ(run("invariants --group G --character chi --bidegree 1,0").code, 2);
  EXPECT_EQ(run("invariants --group G --bidegree 1").code, 2);
  EXPECT_EQ(run("").code, 2);
  EXPECT_EQ(run("reproduce --format xml").code, 2);
}

TEST(Cli, Molien) {
  const CliRun r = run("molien --group Hbar --character chi");
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.out, "(t+t^2)/(1-t^2)^3\n");
  EXPECT_EQ(run("molien --group G").code, 2);
}

TEST(Cli, Hilbert) {
  const CliRun r = run("hilbert --group G");
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.out, "(1+t^6)/((1-t^2)(1-t^3)(1-t^4))\n");
  EXPECT_EQ(run("hilbert --group H --character chi --hsop 2,3,4").out, "(t+t^2+2*t^3+t^4+t^5)/((1-t^2)(1-t^3)(1-t^4))\n");
}

TEST(Cli, Relations) {
  const CliRun r = run("relations");
  EXPECT_EQ(r.code, 0);
  int lines = 0, zero = 0;
  for (std::size_t pos = 0; (pos = r.out.find('\n', pos)) != std::string::npos; ++pos) ++lines;
  for (std::size_t pos = 0; (pos = r.out.find("residual 0", pos)) != std::string::npos; ++pos) ++zero;
  EXPECT_EQ(lines, 3);
  EXPECT_EQ(zero, 3);
}

TEST(Cli, ReproduceDefault) {
  const CliRun r = run("reproduce --no-timings");
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("\"overall\": \"pass\""), std::string::npos);
  EXPECT_NE(r.out.find("\"total\": 14"), std::string::npos);
}

TEST(Cli, ReproduceTruncatedText) {
  const CliRun r = run("reproduce --max-degree 3 --format text");
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("overall: pass"), std::string::npos);
}

TEST(Cli, ReproduceJsonIsByteStable) {
  const CliRun a = run("reproduce --max-degree 8 --no-timings");
  const CliRun b = run("reproduce --max-degree 8 --no-timings");
  EXPECT_EQ(a.code, 0);
  EXPECT_EQ(a.out, b.out);
}

TEST(Cli, ReproduceWritesFile) {
  const std::string path = testing::TempDir() + "diffinv_report.json";
  EXPECT_EQ(run("reproduce --max-degree 4 --out " + path).code, 0);
  std::ifstream is(path);
  std::string content((std::istreambuf_iterator<char>(is)), std::istreambuf_iterator<char>());
  EXPECT_NE(content.find("\"schema\": 1"), std::string::npos);
}

TEST(Cli, ConfigOverride) {
  const std::string dir = DIFFINV_SAMPLES_DIR;
  const CliRun with = run("--config " + dir + "/standard.cfg reproduce --max-degree 6 --no-timings");
  EXPECT_EQ(with.code, 0);
  EXPECT_EQ(with.out, run("reproduce --max-degree 6 --no-timings").out);
  EXPECT_EQ(run("--config " + dir + "/flipped_chi.cfg reproduce --max-degree 4 --no-timings").code, 1);
  EXPECT_EQ(run("--config " + dir + "/missing.cfg reproduce").code, 2);
}
