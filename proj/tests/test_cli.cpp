#include <gtest/gtest.h>

#include <nlohmann/json.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "cli.hpp"
#include "oracles.hpp"

namespace {

struct Result {
  int code;
  std::string out, err;
};

Result run(std::vector<std::string> args) {
  args.insert(args.begin(), "expcycles");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = expcycles::cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::vector<std::string> lines(const std::string& text) {
  std::vector<std::string> v;
  std::istringstream is(text);
  for (std::string l; std::getline(is, l);) v.push_back(l);
  return v;
}

using nlohmann::json;

TEST(Census, JsonGolden) {
  const auto r = run({"census", "--p", "11", "--g", "2", "--kmax", "3"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto j = json::parse(r.out);
  EXPECT_EQ(j["n_dividing"], json({1, 5, 1}));
  EXPECT_EQ(j["graph"]["cycles"], json::parse("[[1,1],[2,2],[5,1]]"));
  EXPECT_EQ(j["graph"]["max_tail"], 0);
}

TEST(Census, CsvRow) {
  const auto r = run({"census", "--p", "7", "--g", "3", "--kmax", "3", "--csv"});
  ASSERT_EQ(r.code, 0);
  const auto l = lines(r.out);
  ASSERT_EQ(l.size(), 2u);
  EXPECT_EQ(l[0].substr(0, 14), "p,g,N1,N2,N3,L");
  EXPECT_EQ(l[1].rfind("7,3,3,3,6,", 0), 0u);
}

TEST(Census, InvalidInputs) {
  const auto r = run({"census", "--p", "4", "--g", "2"});
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.err.find("p not prime"), std::string::npos);
  EXPECT_EQ(run({"census", "--p", "11", "--g", "22"}).code, 2);
  EXPECT_EQ(run({"census", "--p", "11", "--g", "2", "--kmax", "0"}).code, 2);
  EXPECT_EQ(run({"census", "--p", "11"}).code, 2);
  EXPECT_EQ(run({"census", "--p", "7", "--g", "3", "--csv", "--json"}).code, 2);
  EXPECT_EQ(run({"frobnicate"}).code, 2);
  EXPECT_EQ(run({"--help"}).code, 0);
}

TEST(VerifyBounds, ExitCodes) {
  EXPECT_EQ(run({"verify-bounds", "--pmin", "100", "--pmax", "50"}).code, 2);
  EXPECT_EQ(run({"verify-bounds", "--pmin", "3"}).code, 2);
  EXPECT_EQ(run({"verify-bounds", "--p", "12"}).code, 2);
  EXPECT_EQ(run({"verify-bounds", "--p", "11", "--theorem", "4"}).code, 2);
  const auto r = run({"verify-bounds", "--pmin", "11", "--pmax", "400", "--theorem", "1"});
  EXPECT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(run({"verify-bounds", "--pmax", "2000", "--g-list", "2,3", "--theorem", "3"}).code, 0);
}

TEST(VerifyBounds, OneRowPerPair) {
  const auto r = run({"verify-bounds", "--pmin", "11", "--pmax", "13", "--g", "all", "--csv"});
  ASSERT_EQ(r.code, 0);
  EXPECT_EQ(lines(r.out).size(), 1u + 10 + 12);
  const auto j = run({"verify-bounds", "--p", "11", "--g", "2"});
  const auto row = json::parse(j.out);
  EXPECT_EQ(row["bounds"]["thm2"]["z"], 2);
  EXPECT_EQ(row["bounds"]["thm2"]["value"], "45");
  EXPECT_EQ(row["bounds"]["thm3"]["value"], "17");
  EXPECT_EQ(row["flags"]["violation"], false);
}

TEST(Selectors, PrimitiveAndRanges) {
  const auto r = run({"sweep", "--pmin", "7", "--pmax", "7", "--g", "primitive", "--csv"});
  ASSERT_EQ(r.code, 0);
  const auto l = lines(r.out);
  ASSERT_EQ(l.size(), 3u);
  EXPECT_EQ(l[1].rfind("7,3,", 0), 0u);
  EXPECT_EQ(l[2].rfind("7,5,", 0), 0u);
  EXPECT_EQ(lines(run({"sweep", "--pmax", "11", "--g", "2..4,9", "--csv"}).out).size(), 1u + 1 + 3 + 3 + 4);
  EXPECT_EQ(run({"sweep", "--pmax", "11", "--g", "5..2"}).code, 2);
  EXPECT_EQ(run({"sweep", "--pmax", "11", "--g", "x"}).code, 2);
}

TEST(Lemma, Subcommands) {
  EXPECT_EQ(run({"lemma", "fact2", "--pmax", "3000", "--g", "2..13"}).code, 0);
  EXPECT_EQ(run({"lemma", "comb", "--random", "1000", "--nmax", "64", "--seed", "42"}).code, 0);
  EXPECT_EQ(run({"lemma", "fact1", "--random", "20000"}).code, 0);
  const auto t = run({"lemma", "thm3", "--p", "11", "--g", "2"});
  ASSERT_EQ(t.code, 0);
  const auto j = json::parse(lines(t.out).at(0));
  EXPECT_TRUE(j["M"].empty());
  EXPECT_EQ(j["ok"], true);
  EXPECT_EQ(run({"lemma", "thm3", "--p", "7", "--g", "2"}).code, 2);
  EXPECT_EQ(run({"lemma", "thm3", "--pmax", "500", "--m-semantics", "dividing"}).code, 0);
  EXPECT_EQ(run({"lemma", "thm3", "--p", "11", "--m-semantics", "most"}).code, 2);
}

TEST(Ec, GoldenAndErrors) {
  const auto r = run({"ec", "--p", "5", "--a", "1", "--b", "1", "--gx", "0", "--gy", "1", "--kmax", "3"});
  ASSERT_EQ(r.code, 0);
  const auto j = json::parse(r.out);
  EXPECT_EQ(j["N"], 9);
  EXPECT_EQ(j["n_dividing"], json({0, 0, 3}));
  EXPECT_EQ(run({"ec", "--p", "5", "--a", "0", "--b", "0", "--gx", "0", "--gy", "0"}).code, 2);
  EXPECT_EQ(run({"ec", "--p", "5", "--a", "1", "--b", "1", "--gx", "1", "--gy", "1"}).code, 2);
}

TEST(Avg, MatchesOracle) {
  for (unsigned p : {3u, 7u, 11u, 101u}) {
    for (unsigned k : {1u, 2u, 3u}) {
      const auto r = run({"avg", "--p", std::to_string(p), "--k", std::to_string(k)});
      ASSERT_EQ(r.code, 0);
      std::uint64_t sum = 0;
      for (unsigned g = 1; g < p; ++g) sum += oracle::census(p, g, k)[k];
      EXPECT_EQ(json::parse(r.out)["sum"], sum) << p << " " << k;
    }
  }
  EXPECT_EQ(json::parse(run({"avg", "--p", "7", "--k", "1"}).out)["sum"], 6);
  EXPECT_EQ(json::parse(run({"avg", "--p", "3", "--k", "1"}).out)["sum"], 1);
  EXPECT_EQ(run({"avg", "--p", "9", "--k", "1"}).code, 2);
}

TEST(Determinism, IndependentOfWorkerCount) {
  const std::vector<std::string> base{"verify-bounds", "--pmax", "3000", "--g", "2,3,5", "--csv"};
  auto with = [&](const char* w) {
    auto args = base;
    args.push_back("--workers");
    args.push_back(w);
    return run(args).out;
  };
  const auto one = with("1");
  EXPECT_EQ(with("4"), one);
  EXPECT_EQ(with("7"), one);

  auto comb = [](const char* w) { return run({"lemma", "comb", "--random", "300", "--workers", w}).out; };
  EXPECT_EQ(comb("1"), comb("5"));
}

TEST(Output, WritesToFile) {
  const auto path = std::filesystem::temp_directory_path() / "expcycles_cli_test.csv";
  ASSERT_EQ(run({"census", "--p", "7", "--g", "3", "--csv", "--out", path.string()}).code, 0);
  std::ifstream in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  EXPECT_EQ(lines(ss.str()).size(), 2u);
  std::filesystem::remove(path);
}

}  // namespace
