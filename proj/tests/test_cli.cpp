#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include <unistd.h>

#include <fmt/format.h>

#include "../tools/cli.hpp"
#include "memsynth/netlist.hpp"

namespace fs = std::filesystem;
using namespace memsynth;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

struct TempDir {
  fs::path path;
  TempDir() {
    static int counter = 0;
    path = fs::temp_directory_path() / fmt::format("memsynth_cli_test_{}_{}", ::getpid(), counter++);
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
  std::string file(const std::string& name) const { return (path / name).string(); }
  std::string write(const std::string& name, const std::string& text) const {
    std::ofstream(path / name, std::ios::binary) << text;
    return file(name);
  }
};

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::size_t count(const std::string& text, const std::string& needle) {
  std::size_t n = 0;
  for (auto pos = text.find(needle); pos != std::string::npos; pos = text.find(needle, pos + 1)) ++n;
  return n;
}

}  // namespace

TEST_CASE("no subcommand and --version") {
  CHECK(run({}).code == 2);
  CHECK(run({"frobnicate"}).code == 2);
  const Run v = run({"--version"});
  CHECK(v.code == 0);
  CHECK(v.out.find("memsynth 0.1.0") != std::string::npos);
}

TEST_CASE("gen-adder") {
  TempDir dir;
  const Run r = run({"gen-adder", "--bits", "32", "--out", dir.file("add32.net")});
  REQUIRE(r.code == 0);
  CHECK(r.out.find("gates: 288") != std::string::npos);
  CHECK(r.out.find("memristors (MAGIC): 864") != std::string::npos);
  CHECK(r.out.find("transistors (CMOS): 1152") != std::string::npos);
  CHECK(parse_netlist(slurp(dir.file("add32.net"))) == build_ripple_adder(32));

  const Run one = run({"gen-adder", "--bits", "1", "--out", dir.file("add1.net")});
  CHECK(one.code == 0);
  CHECK(parse_netlist(slurp(dir.file("add1.net"))).gates().size() == 9);

  const Run zero = run({"gen-adder", "--bits", "0", "--out", dir.file("add0.net")});
  CHECK(zero.code == 2);
  CHECK_FALSE(zero.err.empty());
  CHECK(run({"gen-adder", "--bits", "4", "--out", dir.file("missing/dir/x.net")}).code == 1);
}

TEST_CASE("sim on the full adder") {
  TempDir dir;
  const std::string net = dir.write("fa.net", serialize_netlist(build_full_adder()));
  const std::string stim = dir.write("fa.stim", "0 a 1\n0 b 1\n0 cin 1\n");
  const Run r = run({"sim", "--netlist", net, "--stimulus", stim, "--vcd", dir.file("fa.vcd")});
  REQUIRE(r.code == 0);
  CHECK(r.out.find("  sum=1\n") != std::string::npos);
  CHECK(r.out.find("  cout=1\n") != std::string::npos);
  CHECK(r.out.find("settled at 7 ns") != std::string::npos);
  const std::string vcd = slurp(dir.file("fa.vcd"));
  CHECK(vcd.find("$enddefinitions $end") != std::string::npos);

  const Run seq = run({"sim", "--netlist", net, "--stimulus", stim, "--init-policy", "sequential-init"});
  CHECK(seq.code == 0);
  CHECK(seq.out.find("settled at 12 ns") != std::string::npos);
  CHECK(run({"sim", "--netlist", net, "--stimulus", stim, "--init-policy", "lazy"}).code == 2);
  CHECK(run({"sim", "--netlist", net, "--stimulus", stim, "--delay", "-1"}).code == 2);
}

TEST_CASE("sim on the 32-bit adder") {
  TempDir dir;
  const std::string net = dir.write("add.net", serialize_netlist(build_ripple_adder(32)));
  std::mt19937_64 rng(50);
  for (int i = 0; i < 5; ++i) {
    const std::uint64_t a = rng() & 0xFFFFFFFFu, b = rng() & 0xFFFFFFFFu;
    std::string stim;
    for (const auto& [name, level] : adder_inputs(32, a, b, false)) stim += fmt::format("0 {} {}\n", name, to_char(level));
    const Run r = run({"sim", "--netlist", net, "--stimulus", dir.write("s.stim", stim)});
    REQUIRE(r.code == 0);
    const std::uint64_t total = a + b;
    CHECK(r.out.find(fmt::format("  sum[31:0] = 0x{:x} ({})\n", total & 0xFFFFFFFFu, total & 0xFFFFFFFFu)) !=
          std::string::npos);
    CHECK(r.out.find(fmt::format("  cout={}\n", total >> 32)) != std::string::npos);
  }
}

TEST_CASE("sim input errors") {
  TempDir dir;
  const std::string net = dir.write("fa.net", serialize_netlist(build_full_adder()));
  const Run bad = run({"sim", "--netlist", net, "--stimulus", dir.write("bad.stim", "0 a 1\n0 b maybe\n")});
  CHECK(bad.code == 1);
  CHECK(bad.err.find("bad.stim") != std::string::npos);
  CHECK(bad.err.find("line 2") != std::string::npos);

  const Run unknown = run({"sim", "--netlist", net, "--stimulus", dir.write("u.stim", "0 zz 1\n")});
  CHECK(unknown.code == 1);
  CHECK(unknown.err.find("zz") != std::string::npos);

  const Run broken = run({"sim", "--netlist", dir.write("b.net", "INPUT a\nGATE g1 NOR a -> y\n"), "--stimulus",
                          dir.write("ok.stim", "0 a 1\n")});
  CHECK(broken.code == 1);
  CHECK(broken.err.find("b.net") != std::string::npos);

  CHECK(run({"sim", "--netlist", dir.file("absent.net"), "--stimulus", dir.file("ok.stim")}).code == 2);
}

TEST_CASE("truth-table") {
  const Run nor2 = run({"truth-table", "--gate", "NOR", "--inputs", "2"});
  REQUIRE(nor2.code == 0);
  CHECK(nor2.out.find("00 1\n01 0\n10 0\n11 0\n") != std::string::npos);

  const Run and2 = run({"truth-table", "--gate", "AND", "--inputs", "2"});
  CHECK(and2.out.find("00 0\n01 0\n10 0\n11 1\n") != std::string::npos);

  const Run nor16 = run({"truth-table", "--gate", "NOR", "--inputs", "16"});
  REQUIRE(nor16.code == 0);
  CHECK(count(nor16.out, "\n") == 65536 + 1);
  CHECK(count(nor16.out, " 1\n") == 1);
  CHECK(nor16.out.find("0000000000000000 1\n") != std::string::npos);

  const Run big = run({"truth-table", "--gate", "NOR", "--inputs", "17"});
  CHECK(big.code == 2);
  CHECK(big.out.empty());
  CHECK(run({"truth-table", "--gate", "XOR", "--inputs", "2"}).code == 2);
  CHECK(run({"truth-table", "--gate", "NOT", "--inputs", "2"}).code == 2);
}

TEST_CASE("report") {
  TempDir dir;
  const std::string net = dir.write("add.net", serialize_netlist(build_ripple_adder(32)));
  const Run cmos = run({"report", "--netlist", net, "--style", "CMOS"});
  REQUIRE(cmos.code == 0);
  CHECK(cmos.out.find("1152") != std::string::npos);
  CHECK(cmos.out.find("424.003991") != std::string::npos);
  CHECK(cmos.out.find("100.5579 uW") != std::string::npos);
  CHECK(cmos.out.find("0.58 ns") != std::string::npos);

  const Run magic = run({"report", "--netlist", net, "--style", "magic", "--format", "csv"});
  REQUIRE(magic.code == 0);
  CHECK(magic.out.find("MAGIC,864,288,69,") != std::string::npos);

  const Run style = run({"report", "--netlist", net, "--style", "TTL"});
  CHECK(style.code == 2);
  CHECK(style.err.find("TTL") != std::string::npos);
  CHECK(run({"report", "--netlist", net, "--style", "hybrid"}).code == 1);
  CHECK(run({"report", "--netlist", net, "--style", "cmos", "--format", "xml"}).code == 2);
}

TEST_CASE("imply-trace") {
  const Run r = run({"imply-trace", "--op", "nand", "--p", "1", "--q", "1"});
  REQUIRE(r.code == 0);
  CHECK(r.out.find("step 1: FALSE S") != std::string::npos);
  CHECK(r.out.find("step 2: IMP P S") != std::string::npos);
  CHECK(r.out.find("step 3: IMP Q S") != std::string::npos);
  CHECK(r.out.find("result S=0 (3 steps)") != std::string::npos);
  for (const char* p : {"0", "1"}) {
    for (const char* q : {"0", "1"}) {
      const Run t = run({"imply-trace", "--p", p, "--q", q});
      const bool nand = !(p[0] == '1' && q[0] == '1');
      CHECK(t.out.find(fmt::format("result S={}", nand ? 1 : 0)) != std::string::npos);
    }
  }
  CHECK(run({"imply-trace", "--p", "2", "--q", "0"}).code == 2);
  CHECK(run({"imply-trace", "--op", "xor", "--p", "1", "--q", "0"}).code == 2);
}

TEST_CASE("imply-synth") {
  const Run xr = run({"imply-synth", "--table", "0110", "--consume-inputs", "--zero-start"});
  REQUIRE(xr.code == 0);
  CHECK(xr.out.find("# verified 4 rows") != std::string::npos);

  const Run nand = run({"imply-synth", "--table", "1110"});
  REQUIRE(nand.code == 0);
  CHECK(nand.out.find("FALSE s\nIMP p s\nIMP q s\n") != std::string::npos);
  CHECK(nand.out.find("# verified 4 rows, 3 steps") != std::string::npos);

  const Run none = run({"imply-synth", "--table", "0110", "--work", "1", "--steps", "3"});
  CHECK(none.code == 1);
  CHECK(none.err.find("no IMP/FALSE program") != std::string::npos);
  CHECK(run({"imply-synth", "--table", "012"}).code == 2);
}

TEST_CASE("determinism") {
  TempDir dir;
  const std::string net = dir.write("add.net", serialize_netlist(build_ripple_adder(8)));
  std::string stim;
  std::mt19937_64 rng(51);
  for (int t = 0; t < 10; ++t) {
    for (const auto& [name, level] : adder_inputs(8, rng() & 0xFF, rng() & 0xFF, rng() & 1)) {
      stim += fmt::format("{} {} {}\n", t * 30, name, to_char(level));
    }
  }
  const std::string stim_path = dir.write("s.stim", stim);
  const Run a = run({"sim", "--netlist", net, "--stimulus", stim_path, "--vcd", dir.file("a.vcd")});
  const Run b = run({"sim", "--netlist", net, "--stimulus", stim_path, "--vcd", dir.file("b.vcd")});
  REQUIRE(a.code == 0);
  CHECK(a.out.substr(0, a.out.find("waveform written")) == b.out.substr(0, b.out.find("waveform written")));
  CHECK(slurp(dir.file("a.vcd")) == slurp(dir.file("b.vcd")));

  run({"gen-adder", "--bits", "16", "--out", dir.file("x.net")});
  run({"gen-adder", "--bits", "16", "--out", dir.file("y.net")});
  CHECK(slurp(dir.file("x.net")) == slurp(dir.file("y.net")));
}
