#include "doctest.h"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "dyndtw/cli.hpp"
#include "dyndtw/core_types.hpp"

using namespace dyndtw;

namespace {

struct CliResult {
  int code;
  std::string out;
  std::string err;
};

CliResult cli(std::vector<std::string> args) {
  std::ostringstream out, err;
  int code = run_cli(args, out, err);
  return CliResult{code, out.str(), err.str()};
}

struct TempFile {
  std::string path;
  TempFile(const std::string& name, const std::string& content) : path(name) {
    std::ofstream f(path);
    f << content;
  }
  ~TempFile() { std::remove(path.c_str()); }
};

}  // namespace

TEST_CASE("float formatting") {
  CHECK(format_double(0.0) == "0.0");
  CHECK(format_double(3.0) == "3.0");
  CHECK(format_double(1.0) == "1.0");
}

TEST_CASE("dtw command prints the exact square and the root") {
  TempFile a("cli_a1.txt", "1\n2\n");
  TempFile b("cli_b1.txt", "1\n2\n");
  CliResult r = cli({"dtw", a.path, b.path});
  CHECK(r.code == 0);
  CHECK(r.out == "0 0.0\n");

  TempFile a2("cli_a2.txt", "5\n");
  TempFile b2("cli_b2.txt", "2\n");
  CHECK(cli({"dtw", a2.path, b2.path}).out == "9 3.0\n");

  TempFile a3("cli_a3.txt", "0\n2\n");
  TempFile b3("cli_b3.txt", "0\n1\n2\n");
  CHECK(cli({"dtw", a3.path, b3.path}).out == "1 1.0\n");

  CliResult rp = cli({"dtw", a3.path, b3.path, "--path"});
  CHECK(rp.code == 0);
  CHECK(rp.out.substr(0, 4) == "1 1.");
}

TEST_CASE("dtw command input errors exit with 2") {
  TempFile a("cli_a4.txt", "1\n");
  CliResult r = cli({"dtw", a.path, "missing_file_xyz.txt"});
  CHECK(r.code == 2);
  CHECK(!r.err.empty());
}

TEST_CASE("session command streams query results") {
  TempFile a("cli_a5.txt", "3\n3\n");
  TempFile b("cli_b5.txt", "3\n3\n");
  TempFile script("cli_s5.txt", "sub 2 3\nquery\n");
  CliResult r = cli({"session", a.path, b.path, script.path});
  CHECK(r.code == 0);
  CHECK(r.out == "0 0.0\n");
}

TEST_CASE("session with verification accepts a correct engine") {
  TempFile a("cli_a6.txt", "4 1\n1 2\n4 1\n");  // RLE form
  TempFile b("cli_b6.txt", "2\n1\n1\n3\n");
  TempFile script("cli_s6.txt",
                  "ins 1 0\nquery\ndel 2\nsub 1 3\ninsrun 2 9 3\nquery\ndelrun 2 2\n"
                  "subrun 1 2 7 1\nquery\npath\nstats\n");
  CliResult r = cli({"session", a.path, b.path, script.path, "--verify"});
  CHECK(r.code == 0);
  CHECK(!r.out.empty());
}

TEST_CASE("session script errors exit with 3 and name the line") {
  TempFile a("cli_a7.txt", "1\n");
  TempFile b("cli_b7.txt", "5\n");
  TempFile script("cli_s7.txt", "# comment\ndel 1\n");
  CliResult r = cli({"session", a.path, b.path, script.path});
  CHECK(r.code == 3);
  CHECK(r.err.find("line 2") != std::string::npos);
}

TEST_CASE("gen produces readable sequence files, honoring DYNDTW_SEED") {
  CliResult r = cli({"gen", "--mode", "random", "--m", "30", "--M", "7", "--seed", "9",
                     "--out", "cli_gen1.txt"});
  CHECK(r.code == 0);
  RleString s = read_sequence_file("cli_gen1.txt");
  CHECK(s.length() == 30);
  CHECK(s.run_count() == 7);
  std::remove("cli_gen1.txt");

  setenv("DYNDTW_SEED", "9", 1);
  CliResult r2 = cli({"gen", "--mode", "random", "--m", "30", "--M", "7", "--out",
                      "cli_gen2.txt"});
  unsetenv("DYNDTW_SEED");
  CHECK(r2.code == 0);
  CHECK(read_sequence_file("cli_gen2.txt") == s);
  std::remove("cli_gen2.txt");

  CliResult r3 = cli({"gen", "--mode", "adversarial", "--M", "3", "--N", "3", "--k", "2",
                      "--l", "2", "--out", "cli_gen3"});
  CHECK(r3.code == 0);
  CHECK(read_sequence_file("cli_gen3.A").length() == 6);
  CHECK(read_sequence_file("cli_gen3.B").length() == 6);
  std::remove("cli_gen3.A");
  std::remove("cli_gen3.B");
}

TEST_CASE("audit agrees with the reported change count") {
  TempFile a("cli_a8.txt", "1\n2\n3\n");
  TempFile b("cli_b8.txt", "1\n1\n2\n2\n3\n");
  SUBCASE("no-op substitution diffs nothing") {
    CliResult r = cli({"audit", a.path, b.path, "sub 2 1"});
    CHECK(r.code == 0);
    CHECK(r.out.find("diff 0\n") != std::string::npos);
  }
  SUBCASE("worst-case delete produces a diff matching stats") {
    TempFile aa("cli_a9.txt", "4 2\n3 2\n");  // adversarial M=N=2, k=l=2
    TempFile bb("cli_b9.txt", "1 2\n2 2\n");
    CliResult r = cli({"audit", aa.path, bb.path, "del 1"});
    CHECK(r.code == 0);
    auto pos = r.out.find("diff ");
    REQUIRE(pos != std::string::npos);
    std::int64_t diff = std::stoll(r.out.substr(pos + 5));
    CHECK(diff >= 2);
  }
  SUBCASE("random edit") {
    CliResult r = cli({"audit", a.path, b.path, "ins 3 9"});
    CHECK(r.code == 0);
    CHECK(r.out.find("stats_chg") != std::string::npos);
  }
}

TEST_CASE("bench adversarial subcommand emits one row") {
  CliResult r = cli({"bench", "--experiment", "adversarial", "--M", "4", "--N", "4", "--k",
                     "2", "--l", "2"});
  CHECK(r.code == 0);
  CHECK(r.out.find("trial,m,n,M,N,edit,chg") != std::string::npos);
}
