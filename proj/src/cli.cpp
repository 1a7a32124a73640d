#include "vote_diffuse/cli.hpp"

#include <CLI11.hpp>
#include <fstream>
#include <ostream>
#include <set>

#include "vote_diffuse/analysis.hpp"
#include "vote_diffuse/config.hpp"
#include "vote_diffuse/errors.hpp"
#include "vote_diffuse/suites.hpp"
#include "vote_diffuse/text.hpp"
#include "vote_diffuse/trace_io.hpp"

namespace vote_diffuse::cli {

namespace {

std::ofstream open_output(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write " + path.string());
  return out;
}

std::filesystem::path with_suffix(const std::filesystem::path& prefix, const std::string& suffix) {
  return std::filesystem::path(prefix.string() + suffix);
}

}  // namespace

void RunManifest::validate() const {
  if (seeds.empty()) throw ConfigError("seed", "need at least one seed");
  if (std::set<std::uint64_t>(seeds.begin(), seeds.end()).size() != seeds.size()) {
    throw ConfigError("seed", "seeds must be distinct");
  }
}

int cmd_simulate(const std::filesystem::path& config_path, std::optional<std::uint64_t> seed,
                 const std::filesystem::path& out_path, std::ostream& out, std::ostream& err) {
  try {
    SimulationConfig config = load_config(config_path);
    if (seed) config.seed = *seed;
    RunManifest manifest{config_path, out_path, {config.seed}, {}};
    manifest.validate();

    const Trace trace = run(config);
    save_trace(out_path, trace);
    out << "stop_reason=" << to_string(trace.stop_reason) << " steps=" << trace.stopped_at
        << " drift=" << text::format_double(conservation_audit(trace)) << '\n';
    return kOk;
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return kValidation;
  } catch (const IoError& e) {
    err << "i/o error: " << e.what() << '\n';
    return kIo;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kValidation;
  }
}

int cmd_analyze(const std::filesystem::path& trace_path, double tol, std::uint64_t min_count,
                const std::filesystem::path& prefix, std::ostream& out, std::ostream& err) {
  try {
    if (!(tol > 0.0)) throw ConfigError("tol", "tol must be > 0");
    const Trace trace = load_trace(trace_path);
    const ConsensusReport consensus = consensus_report(trace.final_profile, tol);
    const ComponentConsensusReport components = verify_component_consensus(trace, tol, min_count);
    const double drift = conservation_audit(trace);
    std::optional<TopKCertificate> certificate;
    if (trace.echo("subjects.kind") == std::string(to_string(SubjectKind::top_k))) {
      certificate = topk_certificate(trace, tol, min_count);
    }

    {
      auto f = open_output(with_suffix(prefix, ".consensus.csv"));
      write_consensus_csv(f, consensus);
    }
    {
      auto f = open_output(with_suffix(prefix, ".components.csv"));
      write_component_csv(f, components);
    }
    {
      auto f = open_output(with_suffix(prefix, ".spread.csv"));
      write_spread_csv(f, trace);
    }
    if (certificate) {
      auto f = open_output(with_suffix(prefix, ".certificate.csv"));
      f << "applicable,k_prime,alpha_hat,consensual_candidates,aggregate_ranking\n";
      f << (certificate->applicable ? "true" : "false") << ',' << certificate->k_prime << ','
        << (certificate->alpha_hat ? text::format_double(*certificate->alpha_hat) : "") << ',';
      bool first = true;
      for (Candidate j : certificate->consensual_candidates) {
        f << (first ? "" : " ") << j + 1;
        first = false;
      }
      f << ',';
      first = true;
      for (Candidate j : certificate->aggregate_ranking) {
        f << (first ? "" : " ") << j + 1;
        first = false;
      }
      f << '\n';
    }
    {
      auto f = open_output(with_suffix(prefix, ".report.txt"));
      write_summary(f, trace, consensus, components, drift, certificate);
    }
    write_summary(out, trace, consensus, components, drift, certificate);
    return components.pass() ? kOk : kVerificationFailed;
  } catch (const ParseError& e) {
    err << "parse error: " << e.what() << '\n';
    return kParse;
  } catch (const IoError& e) {
    err << "i/o error: " << e.what() << '\n';
    return kIo;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kValidation;
  }
}

int cmd_verify(const std::string& suite, std::size_t seed_count, std::ostream& out, std::ostream& err) {
  try {
    if (seed_count < 1) throw ConfigError("seeds", "need at least one seed");
    const SuiteSummary summary = run_suite(suite, seed_count, default_thread_count());
    for (const auto& r : summary.runs) {
      out << suite << " seed=" << r.seed << ' ' << (r.pass ? "PASS" : "FAIL") << ' ' << r.detail << '\n';
    }
    out << suite << ": " << (summary.pass() ? "PASS" : "FAIL") << " (" << seed_count
        << " seeds, worst metric " << text::format_double(summary.worst_metric()) << ")\n";
    return summary.pass() ? kOk : kVerificationFailed;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kValidation;
  }
}

int main(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Voting diffusion simulator and verification harness"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_path;
  std::optional<std::uint64_t> seed;
  auto* simulate = app.add_subcommand("simulate", "Run one simulation and write its trace");
  simulate->add_option("--config", config_path, "Run configuration file")->required();
  simulate->add_option("--seed", seed, "Dynamics seed (overrides the config)");
  simulate->add_option("--out", out_path, "Trace output path")->required();

  std::string trace_path;
  double tol = 1e-8;
  std::uint64_t min_count = kDefaultMinCount;
  std::string prefix;
  auto* analyze = app.add_subcommand("analyze", "Check consensus and conservation on a trace");
  analyze->add_option("trace", trace_path, "Trace file")->required();
  analyze->add_option("--tol", tol, "Consensus tolerance")->capture_default_str();
  analyze->add_option("--min-count", min_count, "Discussions needed for a graph edge")->capture_default_str();
  analyze->add_option("--out", prefix, "Report file prefix (default: the trace path)");

  std::string suite;
  std::size_t seeds = 10;
  auto* verify = app.add_subcommand("verify", "Run a named verification suite over several seeds");
  verify->add_option("--suite", suite, "conservation, gossip-consensus, topk, hk-freeze or disconnected")->required();
  verify->add_option("--seeds", seeds, "Number of seeds")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kUsage;
  }

  if (simulate->parsed()) return cmd_simulate(config_path, seed, out_path, out, err);
  if (analyze->parsed()) return cmd_analyze(trace_path, tol, min_count, prefix.empty() ? trace_path : prefix, out, err);
  return cmd_verify(suite, seeds, out, err);
}

}  // namespace vote_diffuse::cli
