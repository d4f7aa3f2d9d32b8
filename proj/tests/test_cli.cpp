#include <filesystem>
#include <fstream>
#include <sstream>

#include <gtest/gtest.h>
#include <unistd.h>

#include "fixtures.hpp"
#include "smce/cli.hpp"

using namespace smce;
namespace fs = std::filesystem;

namespace {

struct Run {
  int code = -1;
  std::string out, err;
};

Run run(std::vector<std::string> args) {
  args.insert(args.begin(), "smce");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  Run r;
  r.code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
  r.out = out.str();
  r.err = err.str();
  return r;
}

fs::path temp_dir(const std::string& tag) {
  auto p = fs::temp_directory_path() / ("smce-cli-" + tag + "-" + std::to_string(::getpid()));
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

std::string read_file(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST(Cli, VerdictIncoherent) {
  auto r = run({"verdict", "--flags", "SM,OT,NP,T"});
  EXPECT_EQ(r.code, kExitRejected);
  EXPECT_EQ(r.out, "incoherent: A.6.1.1 (viii) non-prime ^ total ^ onto ^ self-map\n");
}

TEST(Cli, VerdictByCode) {
  auto r = run({"verdict", "--code", "65545"});
  EXPECT_EQ(r.code, kExitOk);
  EXPECT_EQ(r.out.rfind("coherent\n", 0), 0u);
  EXPECT_NE(r.out.find("redundant OT"), std::string::npos);
  EXPECT_EQ(run({"verdict", "--code", "131072"}).code, kExitUsage);
}

TEST(Cli, VerdictJson) {
  auto r = run({"--json", "verdict", "--flags", "SM,T,R"});
  EXPECT_EQ(r.code, kExitRejected);
  auto j = nlohmann::json::parse(r.out);
  EXPECT_EQ(j["verdict"], "rejected");
  EXPECT_EQ(j["note"], "A.6.2.1 (ii)");
  EXPECT_EQ(run({"verdict", "--flags", "SM,T,R", "--compound"}).code, kExitOk);
}

TEST(Cli, CheckSatisfied) {
  auto r = run({"check", "--flags", "SM,S,T", "--instance", "1>2,2>1,3>4,4>3"});
  EXPECT_EQ(r.code, kExitOk);
  EXPECT_EQ(r.out, "satisfied\n");
  auto bad = run({"check", "--flags", "SM,A,T", "--instance", "1>2,2>1"});
  EXPECT_EQ(bad.code, kExitRejected);
  EXPECT_EQ(bad.out, "violated: A\n");
}

TEST(Cli, CheckInstanceFile) {
  auto dir = temp_dir("check");
  std::ofstream(dir / "i.json") << R"({"set":["1","2"],"map":{"1":"2","2":null}})";
  auto r = run({"check", "--flags", "SM,T", "--instance-file", (dir / "i.json").string()});
  EXPECT_EQ(r.code, kExitRejected);
  EXPECT_EQ(r.out, "violated: T\n");
  fs::remove_all(dir);
}

TEST(Cli, UsageErrors) {
  EXPECT_EQ(run({}).code, kExitUsage);
  EXPECT_EQ(run({"frobnicate"}).code, kExitUsage);
  EXPECT_EQ(run({"verdict"}).code, kExitUsage);
  EXPECT_EQ(run({"verdict", "--flags", "SM,XX"}).code, kExitUsage);
  EXPECT_EQ(run({"check", "--flags", "T"}).code, kExitUsage);
  auto help = run({"--help"});
  EXPECT_EQ(help.code, kExitOk);
  EXPECT_NE(help.out.find("gen-catalog"), std::string::npos);
}

TEST(Cli, GenCatalog) {
  auto dir = temp_dir("gen");
  auto r = run({"gen-catalog", "--out", dir.string()});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  EXPECT_NE(r.out.find("enumerated 131071\n"), std::string::npos);
  EXPECT_NE(r.out.find("stored 5365\n"), std::string::npos);
  for (const char* f : {"corollaries.csv", "smccoherencies.csv", "smcredundancies.csv"}) EXPECT_TRUE(fs::exists(dir / f));
  auto first = read_file(dir / "smccoherencies.csv");
  auto second_dir = temp_dir("gen2");
  run({"gen-catalog", "--out", second_dir.string()});
  EXPECT_EQ(read_file(second_dir / "smccoherencies.csv"), first);
  EXPECT_EQ(read_file(second_dir / "smcredundancies.csv"), read_file(dir / "smcredundancies.csv"));
  fs::remove_all(dir);
  fs::remove_all(second_dir);
}

TEST(Cli, OutputIsDeterministic) {
  auto a = run({"verdict", "--flags", "SM,UK,T"});
  auto b = run({"verdict", "--flags", "SM,UK,T"});
  EXPECT_EQ(a.out, b.out);
  auto t = run({"--timestamps", "verdict", "--flags", "SM,UK,T"});
  EXPECT_EQ(t.out.rfind("# ", 0), 0u);
  EXPECT_EQ(t.out.substr(t.out.find('\n') + 1), a.out);
}

TEST(Cli, VerifySingle) {
  auto r = run({"verify", "--n", "4", "--id", "P7.i"});
  EXPECT_EQ(r.code, kExitOk);
  EXPECT_EQ(r.out.rfind("PASS P7.i", 0), 0u);
  EXPECT_NE(r.out.find("625 instances"), std::string::npos);
}

TEST(Cli, VerifyAllReportsEachProposition) {
  auto r = run({"verify", "--n", "4"});
  std::istringstream lines(r.out);
  std::string line;
  int pass = 0, fail = 0;
  while (std::getline(lines, line)) {
    pass += line.rfind("PASS ", 0) == 0;
    fail += line.rfind("FAIL ", 0) == 0;
  }
  EXPECT_EQ(pass + fail, 30);
  EXPECT_EQ(fail, 2);
  EXPECT_EQ(r.code, kExitRejected);
}

TEST(Cli, Audit) {
  auto r = run({"audit", "--n", "4"});
  EXPECT_EQ(r.code, kExitOk);
  EXPECT_EQ(r.out,
            "PASS audit n=4: 4096 combinations, 3436 incoherent, 3240 without models, 196 policy-incoherent, 0 "
            "refuted; 18 rule checks, 0 invalid\n");
}

TEST(Cli, ToggleAndExport) {
  auto dir = temp_dir("toggle");
  auto g = smce::testing::geography();
  save(g.meta, dir);
  auto r = run({"toggle", "--data-dir", dir.string(), "--db", "Geography", "--mapping", "State", "--flag", "UK", "--on"});
  EXPECT_EQ(r.code, kExitRejected);
  EXPECT_NE(r.out.find("its current instance does not satisfy it!"), std::string::npos) << r.out;
  r = run({"toggle", "--data-dir", dir.string(), "--db", "Geography", "--mapping", "State", "--flag", "OT", "--on"});
  EXPECT_EQ(r.code, kExitOk) << r.out << r.err;
  auto exported = run({"export", "--data-dir", dir.string(), "--db", "Geography"});
  ASSERT_EQ(exported.code, kExitOk);
  auto doc = nlohmann::json::parse(exported.out);
  EXPECT_EQ(doc["database"]["name"], "Geography");
  EXPECT_EQ(run({"toggle", "--data-dir", dir.string(), "--db", "Geography", "--mapping", "Nope", "--flag", "OT", "--on"}).code,
            kExitUsage);
  EXPECT_EQ(run({"toggle", "--data-dir", dir.string(), "--db", "Geography", "--mapping", "State", "--flag", "OT"}).code,
            kExitUsage);
  fs::remove_all(dir);
}
