#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "hurwitz/cli.hpp"

using namespace hurwitz;

namespace {

struct Run {
  int code = 0;
  std::string out, err;
};

Run run(std::vector<std::string> args) {
  args.insert(args.begin(), "hurwitz");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream os, es;
  Run r;
  r.code = run_cli(static_cast<int>(argv.size()), argv.data(), os, es);
  r.out = os.str();
  r.err = es.str();
  return r;
}

std::string temp_file(const std::string& name, const std::string& content) {
  auto p = std::filesystem::temp_directory_path() / ("hurwitz_cli_test_" + name);
  std::ofstream(p) << content;
  return p.string();
}

}  // namespace

TEST(Cli, InvariantText) {
  auto r = run({"invariant", "--genus", "2", "--builtin", "xi1"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("(-1)^12 0^64"), std::string::npos) << r.out;
}

TEST(Cli, InvariantJson) {
  auto r = run({"--json", "invariant", "--genus", "2", "--builtin", "xi1"});
  ASSERT_EQ(r.code, 0) << r.err;
  auto j = json::parse(r.out);
  EXPECT_EQ(j.at("kernel_rank"), 76);
  EXPECT_EQ(j.at("mz_rank"), 12);
  EXPECT_EQ(j.at("form").at("class_string"), "(-1)^12 0^64");
  // Global options also work after the subcommand.
  auto r2 = run({"invariant", "--genus", "2", "--builtin", "xi1", "--json"});
  EXPECT_EQ(r2.out, r.out);
}

TEST(Cli, ZmodFive) {
  auto r = run({"--ring", "Zmod:5", "--json", "invariant", "--genus", "2", "--builtin", "xi1"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(json::parse(r.out).at("mz_rank"), 12);
}

TEST(Cli, ByteStableOutput) {
  std::vector<std::string> args = {"--json", "invariant", "--genus", "2", "--builtin", "xi2", "--fuzz", "30", "--seed", "3"};
  EXPECT_EQ(run(args).out, run(args).out);
  auto a = run({"moves", "--genus", "2", "--builtin", "xi1", "--random", "25", "--seed", "9"});
  auto b = run({"moves", "--genus", "2", "--builtin", "xi1", "--random", "25", "--seed", "9"});
  ASSERT_EQ(a.code, 0) << a.err;
  EXPECT_EQ(a.out, b.out);
}

TEST(Cli, FuzzedInvariantIsUnchanged) {
  auto plain = json::parse(run({"--json", "invariant", "--genus", "2", "--builtin", "xi2"}).out);
  auto moved = json::parse(run({"--json", "invariant", "--genus", "2", "--builtin", "xi2", "--fuzz", "40"}).out);
  EXPECT_EQ(plain.at("form").at("class_string"), moved.at("form").at("class_string"));
  EXPECT_EQ(plain.at("kernel_rank"), moved.at("kernel_rank"));
}

TEST(Cli, Signature) {
  auto r = run({"--json", "signature", "--genus", "2", "--builtin", "xi1", "--sum", "xi1"});
  ASSERT_EQ(r.code, 0) << r.err;
  auto j = json::parse(r.out);
  EXPECT_EQ(j.at("sigma_meyer"), -24);
  EXPECT_EQ(j.at("agree"), true);
}

TEST(Cli, TableWithAndWithoutFuzz) {
  auto plain = run({"--json", "table"});
  ASSERT_EQ(plain.code, 0) << plain.err;
  auto fuzzed = run({"--json", "--seed", "7", "table", "--fuzz", "100"});
  ASSERT_EQ(fuzzed.code, 0) << fuzzed.err;
  auto a = json::parse(plain.out), b = json::parse(fuzzed.out);
  EXPECT_EQ(a.at("rows").size(), 11u);
  EXPECT_EQ(a.at("rows"), b.at("rows"));
  EXPECT_EQ(a.at("rows").at(0).at("q_spin_odd"), "n/a (representation unavailable)");
}

TEST(Cli, TableMismatchExitsOne) {
  auto data = read_json_file(HURWITZ_DATA_DIR "/invariant_table.json");
  json rows = json::array();
  for (const auto& r : data.at("rows"))
    if (r.value("computable", false) && r.at("genus") == 2) {
      rows.push_back(r);
      break;
    }
  rows[0]["sigma"] = -11;
  auto path = temp_file("table.json", json{{"rows", rows}}.dump());
  auto r = run({"table", "--table-file", path});
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.out.find("MISMATCH"), std::string::npos);
}

TEST(Cli, TupleFileAndMoveScript) {
  auto tuple = temp_file("tuple.json", R"({"genus": 2, "alphabet": "builtin-chain",
    "entries": ["c1", "c2", {"base": "c3", "conj": ["c2", "c1^-1"]}]})");
  auto script = temp_file("script.json", R"({"moves": [{"move": "forward", "index": 1},
    {"move": "conjugate", "word": "d"}]})");
  auto r = run({"moves", "--tuple-file", tuple, "--script", script});
  ASSERT_EQ(r.code, 0) << r.err;
  auto j = json::parse(r.out);
  ASSERT_EQ(j.at("entries").size(), 3u);
  // Product is not the identity: invariant exits 3.
  EXPECT_EQ(run({"invariant", "--tuple-file", tuple}).code, 3);
}

TEST(Cli, ErrorExitCodes) {
  auto empty = temp_file("empty.json", R"({"genus": 2, "entries": []})");
  auto r = run({"invariant", "--tuple-file", empty});
  EXPECT_EQ(r.code, 2);
  EXPECT_FALSE(r.err.empty());
  EXPECT_EQ(run({"invariant", "--genus", "2"}).code, 2);                                     // no tuple source
  EXPECT_EQ(run({"invariant", "--builtin", "xi1"}).code, 2);                                  // no genus
  EXPECT_EQ(run({"--ring", "Fpy:2", "invariant", "--genus", "2", "--builtin", "xi1"}).code, 2);  // no symplectic rep
  EXPECT_EQ(run({"--ring", "Zmod:4", "invariant", "--genus", "2", "--builtin", "xi1"}).code, 2);
  EXPECT_EQ(run({"frobnicate"}).code, 2);
  EXPECT_EQ(run({}).code, 2);
  EXPECT_EQ(run({"--ring", "Q", "signature", "--genus", "2", "--builtin", "xi1"}).code, 2);
  EXPECT_EQ(run({"invariant", "--genus", "2", "--word", "c1 c2"}).code, 3);
  EXPECT_EQ(run({"invariant", "--tuple-file", "/nonexistent/t.json"}).code, 2);
}

TEST(Cli, QuantumFromFile) {
  auto r = run({"--json", "fuzz", "--rep-file", HURWITZ_DATA_DIR "/su2_level2_g1_reduced.json", "--genus", "1",
                "--word", "c1 c2 | ^6", "--steps", "60"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(json::parse(r.out).at("passed"), true);
  auto wrong = run({"--ring", "Z", "invariant", "--rep-file", HURWITZ_DATA_DIR "/su2_level2_g1_reduced.json", "--genus",
                    "1", "--word", "c1 c1"});
  EXPECT_EQ(wrong.code, 2);
  auto cyc = run({"invariant", "--rep-file", HURWITZ_DATA_DIR "/su2_level2_g1.json", "--genus", "1", "--word", "c1 c2 | ^24"});
  EXPECT_EQ(cyc.code, 2);
}

TEST(Cli, OutFile) {
  auto path = (std::filesystem::temp_directory_path() / "hurwitz_cli_test_out.json").string();
  auto r = run({"--json", "--out", path, "invariant", "--genus", "2", "--builtin", "xi1"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_TRUE(r.out.empty());
  std::ifstream f(path);
  EXPECT_EQ(json::parse(f).at("mz_rank"), 12);
}
