// Runs the built command-line tool against the sample documents in data/.
#include <gtest/gtest.h>
#include <sys/wait.h>
#include <unistd.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

namespace fs = std::filesystem;

namespace {

struct Run {
  int code;
  std::string out;
};

Run run(const std::string& args) {
  std::string cmd = std::string(SIMPLOC_BIN) + " " + args + " 2>/dev/null";
  FILE* p = ::popen(cmd.c_str(), "r");
  if (!p) return {-1, {}};
  std::string out;
  char buf[4096];
  while (auto n = std::fread(buf, 1, sizeof buf, p)) out.append(buf, n);
  int status = ::pclose(p);
  return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, out};
}

std::string data(const char* name) { return (fs::path(SIMPLOC_DATA) / name).string(); }

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

fs::path scratch(const char* tag) {
  auto d = fs::temp_directory_path() / ("simploc-cli-" + std::string(tag) + "-" + std::to_string(::getpid()));
  fs::remove_all(d);
  fs::create_directories(d);
  return d;
}

}  // namespace

TEST(Cli, SuccessPaths) {
  EXPECT_EQ(run("validate " + data("walking-weq.json")).code, 0);
  EXPECT_EQ(run("validate " + data("circle.json")).code, 0);
  EXPECT_EQ(run("nerve " + data("chain.json") + " --truncation 2").code, 0);
  EXPECT_EQ(run("flatten " + data("chain-scat.json")).code, 0);
  EXPECT_EQ(run("localize " + data("chain.json") + " --truncation 2 --width 3 --pairs X,Y").code, 0);

  auto h = run("homology " + data("circle.json"));
  ASSERT_EQ(h.code, 0);
  EXPECT_NE(h.out.find("\"torsion\""), std::string::npos);

  auto ho = run("ho " + data("walking-weq.json"));
  ASSERT_EQ(ho.code, 0);
  EXPECT_NE(ho.out.find("w^-1"), std::string::npos);

  EXPECT_EQ(run("verify 2.4i " + data("walking-iso.json") + " " + data("iso-inverses.json") + " --width 4").code, 0);
  EXPECT_EQ(run("verify 2.4ii " + data("walking-iso-marked.json") + " --width 4").code, 0);
  EXPECT_EQ(run("verify 3.2 " + data("walking-weq.json") + " --width 4").code, 0);
  EXPECT_EQ(run("verify 3.1 " + data("walking-arrow.json")).code, 0);
}

TEST(Cli, FailurePaths) {
  EXPECT_EQ(run("dk-check " + data("collapse.json")).code, 0);
  EXPECT_EQ(run("dk-check " + data("inclusion.json")).code, 1);
  EXPECT_EQ(run("neglectable " + data("walking-iso-marked.json")).code, 0);
  EXPECT_EQ(run("neglectable " + data("arrow-marked.json")).code, 1);
}

TEST(Cli, InvalidInputAndInapplicable) {
  EXPECT_EQ(run("validate " + data("no-such-file.json")).code, 2);
  EXPECT_EQ(run("validate " + data("broken-chain.json")).code, 2);
  EXPECT_EQ(run("verify 2.4ii " + data("arrow-marked.json")).code, 2);
  EXPECT_EQ(run("verify 9.9 " + data("terminal.json")).code, 2);
  auto d = scratch("bad");
  std::ofstream(d / "junk.json") << "{ not json";
  EXPECT_EQ(run("validate " + (d / "junk.json").string()).code, 2);
  fs::remove_all(d);
}

TEST(Cli, BoundLimited) {
  EXPECT_EQ(run("localize " + data("chain.json") + " --width 1").code, 3);
  EXPECT_EQ(run("verify 3.2 " + data("walking-weq.json") + " --width 2").code, 3);
}

TEST(Cli, OutputFileGetsJsonAndStdoutGetsSummary) {
  auto d = scratch("out");
  auto r = run("-o " + (d / "rep.json").string() + " verify 3.1 " + data("terminal.json"));
  ASSERT_EQ(r.code, 0);
  auto doc = slurp(d / "rep.json");
  EXPECT_EQ(doc.front(), '{');
  EXPECT_NE(doc.find("\"verdict\": \"Pass(partial)\""), std::string::npos);
  EXPECT_NE(r.out.front(), '{');
  fs::remove_all(d);
}

TEST(Cli, RepeatedAndCachedRunsAreByteIdentical) {
  auto d = scratch("cache");
  auto args = "verify 3.1 " + data("walking-arrow.json") + " --truncation 1 --width 3";
  auto first = run(args);
  auto second = run(args);
  ASSERT_EQ(first.code, 0);
  EXPECT_EQ(first.out, second.out);

  auto cold = run("--cache-dir " + d.string() + " " + args);
  std::size_t entries = 0;
  for (const auto& e : fs::directory_iterator(d)) entries += e.path().extension() == ".json";
  EXPECT_EQ(entries, 1u);
  auto warm = run("--cache-dir " + d.string() + " " + args);
  EXPECT_EQ(cold.out, first.out);
  EXPECT_EQ(warm.out, cold.out);
  EXPECT_EQ(warm.code, cold.code);

  // Different bounds miss the cache.
  run("--cache-dir " + d.string() + " " + args + " --oracle-length 6");
  entries = 0;
  for (const auto& e : fs::directory_iterator(d)) entries += e.path().extension() == ".json";
  EXPECT_EQ(entries, 2u);
  fs::remove_all(d);
}
