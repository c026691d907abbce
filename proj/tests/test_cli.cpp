#include <gtest/gtest.h>

#include <sys/wait.h>

#include <array>
#include <cstdio>
#include <filesystem>
#include <string>

#include <json.hpp>

namespace {

struct Run {
  int code = -1;
  std::string out;
};

Run run(const std::string &args) {
  const std::string cmd = std::string(CATDIL_CLI_PATH) + " " + args + " 2>/dev/null";
  Run r;
  FILE *pipe = popen(cmd.c_str(), "r");
  if (!pipe) {
    return r;
  }
  std::array<char, 4096> buf{};
  std::size_t n = 0;
  while ((n = fread(buf.data(), 1, buf.size(), pipe)) > 0) {
    r.out.append(buf.data(), n);
  }
  const int status = pclose(pipe);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

std::string temp_path(const std::string &name) {
  return (std::filesystem::temp_directory_path() / ("catdil_cli_" + name)).string();
}

} // namespace

TEST(Cli, ScenariosPass) {
  for (const char *args : {"werner-example --d 2", "werner-example --d 8", "thermo-example --p 0.25",
                           "dmax-ppt --d 3 --lam 0.75", "protocol --d 2 --n 1",
                           "synthesize --m 0 --target noisy-phi-2", "purity-rigidity --starts 3"}) {
    const auto r = run(args);
    EXPECT_EQ(r.code, 0) << args << "\n" << r.out;
    EXPECT_NE(r.out.find("status = pass"), std::string::npos) << args;
  }
}

TEST(Cli, WernerValuesInReport) {
  const auto r = run("werner-example --d 3");
  EXPECT_NE(r.out.find("result.log_negativity_rho = 0.7369655941662"), std::string::npos) << r.out;
  EXPECT_NE(r.out.find("scenario = werner-example"), std::string::npos);
}

TEST(Cli, UsageErrorsExitTwo) {
  EXPECT_EQ(run("werner-example --d 9").code, 2);
  EXPECT_EQ(run("werner-example --d 1").code, 2);
  EXPECT_EQ(run("thermo-example --p 0.7").code, 2);
  EXPECT_EQ(run("no-such-command").code, 2);
  EXPECT_EQ(run("werner-example --bogus").code, 2);
  EXPECT_EQ(run("--format xml werner-example").code, 2);
  EXPECT_EQ(run("").code, 2);
  EXPECT_EQ(run("protocol --d 3").code, 2);
}

TEST(Cli, IoErrorsExitThree) {
  EXPECT_EQ(run("verify-broadcast --mu /nonexistent/mu.json --rho /nonexistent/rho.json").code, 3);
  EXPECT_EQ(run("export --state phi-2 --out /nonexistent/dir/x.json").code, 3);
}

TEST(Cli, NumericalFailureExitsFourWithResiduals) {
  const auto r = run("synthesize --m 1 --target broadcast-2 --max-iter 1");
  EXPECT_EQ(r.code, 4);
  EXPECT_NE(r.out.find("result.residual.ppt"), std::string::npos);
  EXPECT_NE(r.out.find("status = fail"), std::string::npos);
}

TEST(Cli, VerifyBroadcastFromExportedFiles) {
  const auto mu = temp_path("mu.json");
  const auto rho = temp_path("rho.json");
  const auto phi = temp_path("phi.json");
  ASSERT_EQ(run("export --state broadcast-2 --out " + mu).code, 0);
  ASSERT_EQ(run("export --state noisy-phi-2 --out " + rho).code, 0);
  ASSERT_EQ(run("export --state phi-2 --out " + phi).code, 0);
  EXPECT_EQ(run("verify-broadcast --mu " + mu + " --rho " + rho + " --n 2").code, 0);
  EXPECT_EQ(run("verify-broadcast --mu " + mu + " --rho " + phi + " --n 2").code, 4);
}

TEST(Cli, FormatsAndDeterminism) {
  const auto csv = run("--format csv thermo-example --p 0.25 --q-grid 3");
  EXPECT_EQ(csv.code, 0);
  EXPECT_EQ(csv.out.substr(0, csv.out.find('\n')), "q,work_cost,closed_form,abs_error");
  const auto js = run("--format json dmax-ppt --d 2 --lam 0.5");
  EXPECT_EQ(nlohmann::json::parse(js.out).at("status"), "pass");

  for (const char *args : {"purity-rigidity --starts 4 --seed 9", "--format json werner-example --d 3",
                           "synthesize --m 1 --target noisy-phi-2"}) {
    EXPECT_EQ(run(args).out, run(args).out) << args;
  }
}

TEST(Cli, HelpAndVersion) {
  EXPECT_EQ(run("--help").code, 0);
  const auto v = run("--version");
  EXPECT_EQ(v.code, 0);
  EXPECT_NE(v.out.find("0.1.0"), std::string::npos);
}
