#include <sys/wait.h>

#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "doctest.h"

namespace fs = std::filesystem;

namespace {

struct Run {
  int status = -1;
  std::string out;
};

Run lab(const std::string& args) {
  const std::string cmd = std::string(HAJLASZ_LAB_PATH) + " " + args + " 2>/dev/null";
  Run r;
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  std::array<char, 4096> buf;
  std::size_t got;
  while ((got = std::fread(buf.data(), 1, buf.size(), pipe)) > 0) r.out.append(buf.data(), got);
  const int st = pclose(pipe);
  r.status = WIFEXITED(st) ? WEXITSTATUS(st) : -1;
  return r;
}

std::string read_file(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() / ("hajlasz_cli_" + std::to_string(::getpid()));
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
  std::string file(const std::string& name) const { return (path / name).string(); }
};

}  // namespace

TEST_CASE("usage errors exit with 1") {
  CHECK(lab("").status == 1);
  CHECK(lab("frobnicate").status == 1);
  CHECK(lab("median --gamma 0.5").status == 1);  // missing --space
  CHECK(lab("gen-space --kind grid1d --n 1").status == 1);
  CHECK(lab("median --space /nonexistent.json --values /nonexistent.csv").status == 1);
}

TEST_CASE("space generation, median and covering") {
  TempDir tmp;
  const auto space = tmp.file("path.json");
  REQUIRE(lab("gen-space --kind grid1d --n 5 --out " + space).status == 0);
  REQUIRE(fs::exists(space));
  {
    std::ofstream(tmp.file("u.csv")) << "1\n2\n3\n4\n0\n";
  }
  const auto m = lab("median --space " + space + " --values " + tmp.file("u.csv") + " --subset 0,1,2,3 --gamma 0.25");
  CHECK(m.status == 0);
  CHECK(m.out.find("median=4") != std::string::npos);

  const auto c = lab("covering --space " + space + " --r 0.625 --out " + tmp.file("phi.csv"));
  CHECK(c.status == 0);
  CHECK(c.out.find("centers=0 3") != std::string::npos);
  CHECK(read_file(tmp.file("phi.csv")).find("point,ball,weight") == 0);

  const auto d = lab("gen-space --kind grid1d --n 5 --out " + tmp.file("g.json") + " --doubling-out " + tmp.file("d.csv"));
  CHECK(d.status == 0);
  CHECK(read_file(tmp.file("d.csv")).find("center,radius,ratio") == 0);
}

TEST_CASE("config files supply flags") {
  TempDir tmp;
  {
    std::ofstream(tmp.file("gen.json")) << R"({"kind": "random_points", "n": 6, "dim": 2, "seed": 3, "out": ")"
                                        << tmp.file("a.json") << "\"}";
  }
  REQUIRE(lab("gen-space --config " + tmp.file("gen.json")).status == 0);
  REQUIRE(lab("gen-space --kind random_points --n 6 --dim 2 --seed 3 --out " + tmp.file("b.json")).status == 0);
  CHECK(read_file(tmp.file("a.json")) == read_file(tmp.file("b.json")));
  // flags given on the command line win over the config
  REQUIRE(lab("gen-space --config " + tmp.file("gen.json") + " --seed 4 --out " + tmp.file("c.json")).status == 0);
  CHECK(read_file(tmp.file("a.json")) != read_file(tmp.file("c.json")));
}

TEST_CASE("norm, smooth and capacity") {
  TempDir tmp;
  const auto space = tmp.file("s.json");
  REQUIRE(lab("gen-space --kind grid1d --n 9 --out " + space).status == 0);
  const auto n = lab("norm --space " + space + " --function sin --s 0.5 --p 2 --q 2 --flavor besov --out " +
                     tmp.file("g.csv"));
  CHECK(n.status == 0);
  CHECK(n.out.find("seminorm=") != std::string::npos);
  CHECK(n.out.find("certified") != std::string::npos);
  CHECK(fs::exists(tmp.file("g.csv")));

  const auto sm = lab("smooth --space " + space + " --function linear --op median-convolution --r 0.25 --out " +
                      tmp.file("sm.csv"));
  CHECK(sm.status == 0);
  CHECK(fs::file_size(tmp.file("sm.csv")) > 0);

  const auto cap = lab("capacity --space " + space + " --subset 0,1 --s 0.5 --p 1 --q 1 --flavor besov --oracle");
  CHECK(cap.status == 0);
  CHECK(cap.out.find("capacity=") != std::string::npos);
  CHECK(cap.out.find("oracle=") != std::string::npos);
}

TEST_CASE("subadd and experiment outputs are deterministic") {
  TempDir tmp;
  const auto a = lab("subadd --trials 4 --n-max 6 --out " + tmp.file("a.csv"));
  const auto b = lab("subadd --trials 4 --n-max 6 --out " + tmp.file("b.csv"));
  CHECK(a.status == 0);
  CHECK(b.status == 0);
  CHECK(read_file(tmp.file("a.csv")) == read_file(tmp.file("b.csv")));

  {
    std::ofstream(tmp.file("exp.json"))
        << R"({"experiment": "convergence", "space": {"kind": "grid1d", "n": 129}, "scales": [2, 3, 4], "modes": ["median", "mean"]})";
  }
  const auto e1 = lab("experiment --config " + tmp.file("exp.json") + " --out " + tmp.file("e1.csv"));
  const auto e2 = lab("experiment --config " + tmp.file("exp.json") + " --out " + tmp.file("e2.csv"));
  CHECK(e1.status == 0);
  CHECK(read_file(tmp.file("e1.csv")) == read_file(tmp.file("e2.csv")));
  CHECK(read_file(tmp.file("e1.csv")).find("mode,gamma,i,error_norm") == 0);
}

TEST_CASE("failed assertions exit with 2") {
  TempDir tmp;
  // a constant function cannot show decreasing errors
  {
    std::ofstream(tmp.file("flat.json"))
        << R"({"experiment": "convergence", "space": {"kind": "grid1d", "n": 129}, "scales": [2, 3], "function": {"family": "constant"}})";
  }
  CHECK(lab("experiment --config " + tmp.file("flat.json")).status == 2);
}
