#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "unitlat/cli.hpp"

using namespace unitlat;

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
  Json json() const { return Json::parse(out); }
};

Result run(std::vector<std::string> args) {
  args.insert(args.begin(), "unitlat");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  int code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

class Cli : public ::testing::Test {
 protected:
  void SetUp() override { ::unsetenv("UNITLAT_CACHE"); }
};

std::filesystem::path temp_path(const std::string& name) {
  auto p = std::filesystem::temp_directory_path() / ("unitlat_test_" + std::to_string(::getpid()) + "_" + name);
  std::filesystem::remove(p);
  return p;
}

}  // namespace

TEST_F(Cli, UnitJson) {
  auto r = run({"--json", "unit", "2"});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  auto j = r.json();
  EXPECT_EQ(j["schema"], "unitlat/1");
  EXPECT_EQ(j["unit"]["x"], "1");
  EXPECT_EQ(j["unit"]["y"], "1");
  EXPECT_EQ(j["unit"]["q"], 1);
  EXPECT_EQ(j["unit"]["norm"], -1);
  EXPECT_EQ(j["unit"]["regulator"].get<std::string>().substr(0, 12), "0.8813735870");

  auto five = run({"--json", "unit", "5"}).json();
  EXPECT_EQ(five["unit"]["q"], 2);
}

TEST_F(Cli, UnitTextAndErrors) {
  auto r = run({"unit", "10"});
  EXPECT_EQ(r.code, kExitOk);
  EXPECT_NE(r.out.find("x: 3"), std::string::npos) << r.out;
  auto bad = run({"unit", "4"});
  EXPECT_EQ(bad.code, kExitUsage);
  EXPECT_NE(bad.err.find("error"), std::string::npos);
  EXPECT_EQ(run({"unit", "abc"}).code, kExitUsage);
  EXPECT_EQ(run({"--precision", "8", "unit", "2"}).code, kExitUsage);
  EXPECT_EQ(run({"bogus"}).code, kExitUsage);
  EXPECT_EQ(run({}).code, kExitUsage);
  EXPECT_EQ(run({"--help"}).code, kExitOk);
}

TEST_F(Cli, Classify) {
  auto r = run({"--json", "classify", "3", "7"});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  auto j = r.json();
  EXPECT_EQ(j["classification"]["family"], "II");
  EXPECT_EQ(j["prediction"]["rule"], 3);
  EXPECT_EQ(j["prediction"]["matches"], true);

  auto i = run({"--json", "classify", "3", "2"}).json();
  EXPECT_EQ(i["classification"]["type"], "Ic");
  EXPECT_EQ(i["prediction"]["matches"], true);

  auto bad = run({"classify", "4", "6"});
  EXPECT_EQ(bad.code, kExitUsage);
  EXPECT_NE(bad.err.find("classify-d"), std::string::npos);

  auto d = run({"--json", "classify-d", "6", "10"});
  ASSERT_EQ(d.code, kExitOk) << d.err;
  EXPECT_EQ(d.json()["field"]["d3"], 15);
}

TEST_F(Cli, Lattice) {
  auto r = run({"--json", "lattice", "3", "2"});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  auto j = r.json();
  EXPECT_EQ(j["lattice"]["orthogonal"], true);
  EXPECT_EQ(j["bounds"]["hypothesis"], 2);
  EXPECT_EQ(j["bounds"]["passed"], true);
  EXPECT_EQ(j["consistent"], true);

  auto n = run({"--json", "lattice", "7", "11"}).json();
  EXPECT_EQ(n["lattice"]["orthogonal"], false);
  EXPECT_TRUE(n["bounds"].is_null());

  auto iv = run({"--json", "lattice", "5", "2"}).json();
  EXPECT_EQ(iv["classification"]["type"], "IV");
  EXPECT_EQ(iv["lattice"]["orthogonal"], false);
}

TEST_F(Cli, ScanCsvAndDeterminism) {
  auto r = run({"scan", "20", "-j", "1"});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  std::istringstream in(r.out);
  std::string header;
  std::getline(in, header);
  EXPECT_EQ(header, kCsvHeader);
  long rows = 0;
  for (std::string line; std::getline(in, line);) {
    if (!line.empty() && line[0] != '#') ++rows;
  }
  EXPECT_EQ(rows, 28);  // 8 primes up to 20
  EXPECT_NE(r.out.find("# summary"), std::string::npos);

  auto a = run({"--json", "scan", "30", "-j", "3", "--format", "json"});
  auto b = run({"--json", "scan", "30", "-j", "1", "--format", "json"});
  ASSERT_EQ(a.code, kExitOk);
  EXPECT_EQ(a.out, b.out);
  auto j = a.json();
  EXPECT_EQ(j["summary"]["violations"], 0);
  EXPECT_EQ(j["summary"]["pairs"], 45);
  EXPECT_FALSE(j["rows"][0].contains("elapsed_ms"));
}

TEST_F(Cli, ScanToFile) {
  auto path = temp_path("scan.csv");
  auto r = run({"scan", "13", "-o", path.string()});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  EXPECT_TRUE(r.out.empty());
  EXPECT_NE(r.err.find("0 theorem violations"), std::string::npos);
  std::ifstream f(path);
  std::string header;
  std::getline(f, header);
  EXPECT_EQ(header, kCsvHeader);
  std::filesystem::remove(path);
}

TEST_F(Cli, Cubic) {
  auto r = run({"--json", "cubic", "-1"});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  auto j = r.json();
  EXPECT_EQ(j["verdict"], "Equilateral");
  EXPECT_EQ(j["discriminant"], "49");

  auto p = run({"--json", "cubic", "--poly", "1", "-2", "-1"});
  ASSERT_EQ(p.code, kExitOk) << p.err;
  EXPECT_EQ(p.json()["sigma"]["polynomial"], Json::array({"-2", "0", "1"}));

  EXPECT_EQ(run({"cubic", "--poly", "0", "0", "-2"}).code, kExitUsage);
  EXPECT_EQ(run({"cubic"}).code, kExitUsage);
  EXPECT_EQ(run({"cubic", "--poly", "1", "-2", "-1", "--unit", "1", "0", "0"}).code, kExitUsage);
}

TEST_F(Cli, Selftest) {
  auto r = run({"--json", "selftest", "--trials", "200", "--seed", "3"});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  auto j = r.json();
  EXPECT_EQ(j["passed"], true);
  EXPECT_EQ(j["trials"], 200);
  EXPECT_EQ(j["results"].size(), 5u);
}

TEST_F(Cli, CacheRoundTrip) {
  auto path = temp_path("cache.json");
  auto first = run({"--cache", path.string(), "--json", "unit", "94"});
  ASSERT_EQ(first.code, kExitOk) << first.err;
  ASSERT_TRUE(std::filesystem::exists(path));
  std::ifstream in(path);
  Json doc = Json::parse(in);
  EXPECT_EQ(doc["schema"], "unitlat-cache/1");
  EXPECT_EQ(doc["units"]["94"]["x"], "2143295");
  EXPECT_EQ(doc["units"]["94"]["y"], "221064");

  // Reading back through the environment variable gives the same answer.
  ::setenv("UNITLAT_CACHE", path.c_str(), 1);
  auto second = run({"--json", "unit", "94"});
  ::unsetenv("UNITLAT_CACHE");
  EXPECT_EQ(first.out, second.out);

  // A corrupted entry is dropped and recomputed.
  doc["units"]["94"]["x"] = "5";
  std::ofstream(path) << doc.dump();
  auto third = run({"--cache", path.string(), "--json", "unit", "94"});
  EXPECT_EQ(third.out, first.out);

  std::ofstream(path) << "not json";
  EXPECT_EQ(run({"--cache", path.string(), "unit", "2"}).code, kExitComputation);
  std::filesystem::remove(path);
}
