#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "vote_diffuse/cli.hpp"
#include "vote_diffuse/errors.hpp"
#include "vote_diffuse/suites.hpp"
#include "vote_diffuse/trace_io.hpp"

using namespace vote_diffuse;
namespace fs = std::filesystem;

namespace {

struct TempDir {
  fs::path path;
  explicit TempDir(const std::string& name) : path(fs::temp_directory_path() / name) {
    fs::remove_all(path);
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
  fs::path operator/(const std::string& leaf) const { return path / leaf; }
};

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const fs::path& p, const std::string& text) { std::ofstream(p) << text; }

int invoke(std::vector<std::string> args, std::string* out_text = nullptr, std::string* err_text = nullptr) {
  args.insert(args.begin(), "vote_diffuse");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = cli::main(static_cast<int>(argv.size()), argv.data(), out, err);
  if (out_text) *out_text = out.str();
  if (err_text) *err_text = err.str();
  return code;
}

}  // namespace

TEST_CASE("simulate") {
  TempDir dir("vote_diffuse_cli_simulate");
  write_file(dir / "min.cfg",
             "m = 2\nn = 1\nmax_steps = 1\n[initial]\nkind = explicit\nrows = 0, 1\n[pairs]\nkind = uniform\n");

  SUBCASE("minimal run averages the only pair") {
    std::string out;
    CHECK(invoke({"simulate", "--config", (dir / "min.cfg").string(), "--out", (dir / "t.trace").string()}, &out) ==
          cli::kOk);
    CHECK(out.find("steps=1") != std::string::npos);
    const Trace t = load_trace(dir / "t.trace");
    CHECK(t.final_profile == OpinionProfile::from_rows({{0.5}, {0.5}}));
  }
  SUBCASE("invalid binomial parameter") {
    write_file(dir / "bad.cfg", "m = 3\nn = 2\nmax_steps = 5\n[pairs]\nkind = uniform\n[subjects]\nkind = binomial\np = 0\n");
    std::string err;
    CHECK(invoke({"simulate", "--config", (dir / "bad.cfg").string(), "--out", (dir / "x").string()}, nullptr, &err) ==
          cli::kValidation);
    CHECK(err.find("p must be in (0,1]") != std::string::npos);
    CHECK_FALSE(fs::exists(dir / "x"));
  }
  SUBCASE("same seed gives byte-identical traces, another seed differs") {
    write_file(dir / "g.cfg", "m = 5\nn = 3\nmax_steps = 3000\n[initial]\nkind = gaussian\nseed = 4\n"
                              "[pairs]\nkind = uniform\n[subjects]\nkind = binomial\np = 0.5\n");
    const auto cfg = (dir / "g.cfg").string();
    std::ostringstream sink;
    REQUIRE(cli::cmd_simulate(cfg, 11, dir / "a", sink, sink) == cli::kOk);
    REQUIRE(cli::cmd_simulate(cfg, 11, dir / "b", sink, sink) == cli::kOk);
    REQUIRE(cli::cmd_simulate(cfg, 12, dir / "c", sink, sink) == cli::kOk);
    CHECK(slurp(dir / "a") == slurp(dir / "b"));
    CHECK(slurp(dir / "a") != slurp(dir / "c"));
    CHECK(load_trace(dir / "a").echo("seed") == "11");
  }
  SUBCASE("i/o failures") {
    std::ostringstream out, err;
    CHECK(cli::cmd_simulate(dir / "missing.cfg", std::nullopt, dir / "t", out, err) == cli::kIo);
    CHECK(cli::cmd_simulate(dir / "min.cfg", std::nullopt, dir / "no_such_dir" / "t", out, err) == cli::kIo);
  }
  SUBCASE("usage errors") {
    CHECK(invoke({}) == cli::kUsage);
    CHECK(invoke({"simulate", "--out", "x"}) == cli::kUsage);
    CHECK(invoke({"frobnicate"}) == cli::kUsage);
    CHECK(invoke({"--help"}) == cli::kOk);
  }
}

TEST_CASE("analyze") {
  TempDir dir("vote_diffuse_cli_analyze");

  SUBCASE("converged gossip passes and writes every report") {
    save_trace(dir / "g.trace", run(gossip_config(4, 2, 5)));
    std::string out;
    CHECK(invoke({"analyze", (dir / "g.trace").string(), "--out", (dir / "g").string()}, &out) == cli::kOk);
    CHECK(out.find("component consensus (min_count 10): PASS") != std::string::npos);
    for (const char* suffix : {".consensus.csv", ".components.csv", ".spread.csv", ".report.txt"}) {
      CHECK(fs::exists(dir / (std::string("g") + suffix)));
    }
    CHECK_FALSE(fs::exists(dir / "g.certificate.csv"));
    const std::string components = slurp(dir / "g.components.csv");
    CHECK(components.find("1,1,1 2 3 4,") != std::string::npos);
    CHECK(components.find("FAIL") == std::string::npos);
  }
  SUBCASE("two isolated blocks report two components per candidate") {
    save_trace(dir / "b.trace", run(two_block_config(2)));
    std::ostringstream out, err;
    CHECK(cli::cmd_analyze(dir / "b.trace", 1e-8, 10, dir / "b", out, err) == cli::kOk);
    const std::string components = slurp(dir / "b.components.csv");
    CHECK(components.find("2,1,1 2 3 4 5,") != std::string::npos);
    CHECK(components.find("2,2,6 7 8 9 10,") != std::string::npos);
  }
  SUBCASE("top-k trace gets a certificate") {
    save_trace(dir / "k.trace", run(topk_config(3)));
    std::ostringstream out, err;
    CHECK(cli::cmd_analyze(dir / "k.trace", 1e-8, 10, dir / "k", out, err) == cli::kOk);
    const std::string cert = slurp(dir / "k.certificate.csv");
    CHECK(cert.starts_with("applicable,k_prime,alpha_hat,consensual_candidates,aggregate_ranking\ntrue,"));
    CHECK(out.str().find("top-k certificate: applicable") != std::string::npos);
  }
  SUBCASE("unfinished run exits with verification failure") {
    auto c = gossip_config(6, 1, 1);
    c.max_steps = 5;
    save_trace(dir / "u.trace", run(c));
    std::ostringstream out, err;
    CHECK(cli::cmd_analyze(dir / "u.trace", 1e-8, 1, dir / "u", out, err) == cli::kVerificationFailed);
  }
  SUBCASE("corrupt trace reports the line") {
    write_file(dir / "bad.trace", "vote_diffuse-trace 1\n[config]\nm=2\nn=1\nbroken line\n");
    std::ostringstream out, err;
    CHECK(cli::cmd_analyze(dir / "bad.trace", 1e-8, 10, dir / "bad", out, err) == cli::kParse);
    CHECK(err.str().find(":5:") != std::string::npos);
  }
  SUBCASE("missing trace and bad tolerance") {
    std::ostringstream out, err;
    CHECK(cli::cmd_analyze(dir / "none.trace", 1e-8, 10, dir / "n", out, err) == cli::kIo);
    save_trace(dir / "g.trace", run(gossip_config(4, 1, 1)));
    CHECK(cli::cmd_analyze(dir / "g.trace", 0.0, 10, dir / "g", out, err) == cli::kValidation);
  }
}

TEST_CASE("verify") {
  std::string out;
  CHECK(invoke({"verify", "--suite", "hk-freeze", "--seeds", "2"}, &out) == cli::kOk);
  CHECK(out.find("hk-freeze seed=2 PASS") != std::string::npos);
  CHECK(out.find("hk-freeze: PASS (2 seeds") != std::string::npos);
  CHECK(invoke({"verify", "--suite", "gossip-consensus", "--seeds", "2"}) == cli::kOk);
  std::string err;
  CHECK(invoke({"verify", "--suite", "nonsense"}, nullptr, &err) == cli::kValidation);
  CHECK(invoke({"verify", "--suite", "hk-freeze", "--seeds", "0"}) == cli::kValidation);
}

TEST_CASE("RunManifest") {
  cli::RunManifest manifest{"a.cfg", "a.trace", {}, ""};
  CHECK_THROWS_AS(manifest.validate(), ConfigError);
  manifest.seeds = {3, 4, 3};
  CHECK_THROWS_AS(manifest.validate(), ConfigError);
  manifest.seeds = {3, 4};
  CHECK_NOTHROW(manifest.validate());
}
