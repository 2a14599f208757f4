#include <doctest.h>

#include <array>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>

namespace fs = std::filesystem;

namespace {

struct Run {
  int code = -1;
  std::string out;
};

const fs::path& scratch() {
  static const fs::path dir = [] {
    auto d = fs::temp_directory_path() / ("syncnet_cli_" + std::to_string(::getpid()));
    fs::remove_all(d);
    fs::create_directories(d);
    return d;
  }();
  return dir;
}

Run run(const std::string& args, const fs::path& out_root = scratch() / "out") {
  const std::string cmd = "SYNCNET_OUT='" + out_root.string() + "' '" SYNCNET_CLI_PATH "' " + args + " 2>&1";
  Run r;
  FILE* pipe = ::popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  std::array<char, 4096> buf{};
  std::size_t n = 0;
  while ((n = std::fread(buf.data(), 1, buf.size(), pipe)) > 0) r.out.append(buf.data(), n);
  const int status = ::pclose(pipe);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

std::string scenario(const std::string& name) { return std::string("'" SYNCNET_SOURCE_DIR "/scenarios/") + name + "'"; }

fs::path write_file(const std::string& name, const std::string& text) {
  const auto p = scratch() / name;
  std::ofstream(p) << text;
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream is(p);
  std::stringstream ss;
  ss << is.rdbuf();
  return ss.str();
}

double field(const std::string& text, const std::string& key) {
  const auto pos = text.find(key + ": ");
  REQUIRE(pos != std::string::npos);
  return std::stod(text.substr(pos + key.size() + 2));
}

bool has(const std::string& s, const std::string& needle) { return s.find(needle) != std::string::npos; }

}  // namespace

TEST_CASE("simulate writes a summary and artifacts") {
  const auto r = run("simulate " + scenario("fig4.toml") + " --svg");
  CHECK(r.code == 0);
  CHECK(field(r.out, "sync_error") <= 1e-2);
  CHECK(has(r.out, "condition gamma + mu2 > 0: HOLDS"));
  const auto dir = scratch() / "out" / "fig4";
  CHECK(fs::exists(dir / "trace.csv"));
  CHECK(fs::exists(dir / "summary.txt"));
  CHECK(has(slurp(dir / "trace.svg"), "<svg"));
  CHECK(slurp(dir / "trace.csv").rfind("t,y_1,", 0) == 0);
}

TEST_CASE("simulate is deterministic") {
  const auto a = scratch() / "det_a";
  const auto b = scratch() / "det_b";
  REQUIRE(run("simulate " + scenario("fig6.toml") + " --t-end 20", a).code == 0);
  REQUIRE(run("simulate " + scenario("fig6.toml") + " --t-end 20", b).code == 0);
  const auto csv = slurp(a / "fig6" / "trace.csv");
  CHECK(csv.size() > 1000);
  CHECK(csv == slurp(b / "fig6" / "trace.csv"));
}

TEST_CASE("simulate rejects bad input with exit 1") {
  CHECK(run("simulate " + scenario("fig4.toml") + " --dt -1").code == 1);
  CHECK(run("simulate '" + (scratch() / "absent.toml").string() + "'").code == 1);

  std::string text = slurp(SYNCNET_SOURCE_DIR "/scenarios/fig4.toml");
  const auto start = text.find("[agent]");
  const auto end = text.find("[graph]");
  text.erase(start, end - start);
  const auto r = run("simulate '" + write_file("no_agent.toml", text).string() + "'");
  CHECK(r.code == 1);
  CHECK(has(r.out, "agent: missing table"));
}

TEST_CASE("simulate reports divergence with exit 2") {
  const auto p = write_file("unstable.toml", R"(
name = "unstable"
t_end = 40.0
dt = 0.01
[agent]
type = "linear"
num = [1.0]
den = [-1.0, 1.0]
[graph]
nodes = 2
edges = [[1, 2, 1.0]]
[[nodes]]
x0 = [1.0]
[[nodes]]
x0 = [1.0]
)");
  const auto r = run("simulate '" + p.string() + "'");
  CHECK(r.code == 2);
}

TEST_CASE("reproduce") {
  const auto r = run("reproduce fig2 fig3 fig9 --jobs 2");
  CHECK(r.code == 0);
  CHECK(has(r.out, "fig2: PASS"));
  CHECK(has(r.out, "fig3: PASS"));
  CHECK(has(r.out, "fig9: PASS"));
  CHECK(fs::exists(scratch() / "out" / "fig9" / "trace.csv"));
  CHECK(run("reproduce fig5").code == 1);
}

TEST_CASE("design-dac") {
  const auto ok = run("design-dac --constant --omega 2 --epsilon 0.01");
  CHECK(ok.code == 0);
  CHECK(has(ok.out, "--- machine-readable ---"));
  CHECK(has(ok.out, "\"condition_c\":true"));

  const auto bad = run("design-dac --constant --omega 2 --epsilon 2");
  CHECK(bad.code == 3);
  CHECK(has(bad.out, "1.25"));

  CHECK(run("design-dac").code == 1);
  CHECK(run("design-dac --omega -2").code == 1);
  CHECK(run("--help").code == 0);
  CHECK(run("no-such-command").code == 1);
}

TEST_CASE("analyze-graph") {
  const auto cycle = write_file("cycle.txt", "# unit cycle\nnodes 4\n1 2\n2 3\n3 4\n4 1\n");
  const auto r = run("analyze-graph '" + cycle.string() + "' --goodwin --gamma4 5");
  CHECK(r.code == 0);
  CHECK(has(r.out, "γ = -0.75, μ2 = 2, condition HOLDS"));

  const auto split = write_file("split.txt", "nodes 3\n1 2 1 1\n");
  const auto s = run("analyze-graph '" + split.string() + "' --goodwin --gamma4 5");
  CHECK(s.code == 0);
  CHECK(has(s.out, "μ2 = 0, condition FAILS"));
  CHECK(has(s.out, "connected: no"));

  const auto path = write_file("path.txt", "1 2\n2 3\n");
  CHECK(has(run("analyze-graph '" + path.string() + "'").out, "μ2(L_p) = 1, connected: yes"));

  const auto junk = write_file("junk.txt", "1 2\nfoo\n2 x\n");
  const auto j = run("analyze-graph '" + junk.string() + "'");
  CHECK(j.code == 1);
  CHECK(has(j.out, "line 2"));
  CHECK(has(j.out, "line 3"));
}

TEST_CASE("check-spr") {
  const auto yes = run("check-spr --num 1,0.5 --den 1,1,1");
  CHECK(yes.code == 0);
  CHECK(has(yes.out, "SPR: yes"));
  const auto no = run("check-spr --num 1,1 --den 1,1,1");
  CHECK(no.code == 0);
  CHECK(has(no.out, "SPR: no"));
  CHECK(has(no.out, "tail condition"));
}

TEST_CASE("cleanup") { fs::remove_all(scratch()); }
