#include <gtest/gtest.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <sys/wait.h>

#include "json.hpp"

namespace fs = std::filesystem;

namespace {

struct Run {
  int code;
  std::string out;
};

Run run(const std::string& args) {
  const std::string cmd = std::string(CCMM_BINARY) + " " + args + " 2>/dev/null";
  FILE* p = popen(cmd.c_str(), "r");
  std::string out;
  char buf[4096];
  std::size_t k;
  while ((k = fread(buf, 1, sizeof buf, p)) > 0) out.append(buf, k);
  const int status = pclose(p);
  return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, out};
}

class Cli : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() / ("ccmm_cli_" + std::to_string(::getpid()));
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }
  std::string path(const std::string& name) const { return (dir_ / name).string(); }
  void write(const std::string& name, const std::string& text) const { std::ofstream(path(name)) << text; }
  std::string read(const std::string& name) const {
    std::ifstream in(path(name));
    return {std::istreambuf_iterator<char>(in), {}};
  }
  fs::path dir_;
};

}  // namespace

TEST_F(Cli, UsageErrorsExitTwo) {
  EXPECT_EQ(run("").code, 2);
  EXPECT_EQ(run("frobnicate").code, 2);
  EXPECT_EQ(run("alpha").code, 2);
  EXPECT_EQ(run("alpha " + path("missing.json")).code, 2);
  EXPECT_EQ(run("gen --catalog zz").code, 2);
}

TEST_F(Cli, GenValidateAndTriangleViolation) {
  ASSERT_EQ(run("gen --random 7 --seed 3 --out " + path("s.json")).code, 0);
  const auto v = run("validate " + path("s.json"));
  EXPECT_EQ(v.code, 0);
  EXPECT_NE(v.out.find("valid n=7"), std::string::npos);
  write("bad.json", R"({"n": 3, "dist": [[0,1,5],[1,0,1],[5,1,0]], "edges": null})");
  const auto bad = run("validate " + path("bad.json"));
  EXPECT_EQ(bad.code, 1);
  EXPECT_NE(bad.out.find("triangle (0,1,2)"), std::string::npos);
  EXPECT_EQ(run("verify sec3 " + path("bad.json")).code, 2);
  EXPECT_EQ(run("validate --sampled " + path("s.json")).code, 0);
}

TEST_F(Cli, CatalogGenerationWritesCertificate) {
  ASSERT_EQ(run("gen --catalog g1 --resolution 32 --out " + path("g1.json")).code, 0);
  const auto j = nlohmann::json::parse(read("g1.json"));
  EXPECT_EQ(j["n"], 32);
  EXPECT_EQ(j["certified"]["K"], 1.0);
}

TEST_F(Cli, AlphaFamilyObsdiamIsoperimEigen) {
  ASSERT_EQ(run("gen --random 6 --seed 1 --out " + path("s.json")).code, 0);
  const auto a = run("alpha " + path("s.json") + " --strategy exact");
  EXPECT_EQ(a.code, 0);
  EXPECT_EQ(a.out.substr(0, a.out.find('\n')), "r,alpha,strategy");
  ASSERT_EQ(run("family " + path("s.json") + " --count 20 --out " + path("f.json")).code, 0);
  EXPECT_EQ(nlohmann::json::parse(read("f.json"))["size"], 20);
  EXPECT_EQ(run("alpha " + path("s.json") + " --strategy family --family " + path("f.json")).code, 0);
  const auto o = run("obsdiam " + path("s.json") + " --kappa 0.2 --family " + path("f.json"));
  ASSERT_EQ(o.code, 0);
  EXPECT_GE(nlohmann::json::parse(o.out)["obsdiam"].get<double>(), 0.0);
  const auto iso = run("isoperim " + path("s.json") + " --scale 0.5");
  EXPECT_EQ(iso.code, 0);
  EXPECT_EQ(iso.out.substr(0, iso.out.find('\n')), "mass,content,strategy,scale");
  const auto e = run("eigen " + path("s.json") + " --restarts 4 --seed 2");
  ASSERT_EQ(e.code, 0);
  EXPECT_GT(nlohmann::json::parse(e.out)["lambda1"].get<double>(), 0.0);
}

TEST_F(Cli, VerifyTwoPointAndExport) {
  write("two.json", R"({"n": 2, "dist": [[0,1],[1,0]], "edges": null, "measure": [0.5, 0.5]})");
  const auto r = run("verify sec3 sec4 " + path("two.json") + " --out " + path("rep.json"));
  EXPECT_EQ(r.code, 0);
  const auto j = nlohmann::json::parse(read("rep.json"));
  EXPECT_EQ(j["results"]["thm41"]["status"], "pass");
  EXPECT_EQ(j["results"]["lem51"]["status"], "skipped");
  const auto csv = run("export " + path("rep.json"));
  EXPECT_EQ(csv.code, 0);
  EXPECT_EQ(static_cast<int>(std::count(csv.out.begin(), csv.out.end(), '\n')), 19);
  ASSERT_EQ(run("alpha " + path("two.json") + " --out " + path("p.csv")).code, 0);
  const auto again = run("export " + path("p.csv"));
  EXPECT_EQ(again.out, read("p.csv"));
}

TEST_F(Cli, VerifyChengAndThreadsFlag) {
  write("two.json", R"({"n": 2, "dist": [[0,1],[1,0]], "edges": null})");
  const auto a = run("--threads 3 verify sec6 " + path("two.json") + " --cheng 2,0,0,1 --restarts 2");
  EXPECT_EQ(a.code, 0);
  const auto j = nlohmann::json::parse(a.out);
  EXPECT_EQ(j["results"]["thm63"]["status"], "pass");
  const auto b = run("verify sec6 " + path("two.json") + " --cheng 2,0,0,1 --restarts 2 --threads 1");
  EXPECT_EQ(a.out, b.out);
  EXPECT_EQ(run("verify sec6 " + path("two.json") + " --cheng 2,0").code, 2);
  EXPECT_EQ(run("verify sec7 " + path("two.json")).code, 2);
}
