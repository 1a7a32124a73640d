#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace vote_diffuse::cli {

enum ExitCode : int {
  kOk = 0,
  kUsage = 1,
  kValidation = 2,
  kIo = 3,
  kVerificationFailed = 4,
  kParse = 5,
};

/// What one invocation should do. Seeds must be non-empty and distinct.
struct RunManifest {
  std::filesystem::path config_path;
  std::filesystem::path output_path;
  std::vector<std::uint64_t> seeds;
  std::string selector;  // suite name for verify, unused otherwise

  void validate() const;
};

int cmd_simulate(const std::filesystem::path& config, std::optional<std::uint64_t> seed,
                 const std::filesystem::path& out_path, std::ostream& out, std::ostream& err);

/// Writes <prefix>.report.txt, .consensus.csv, .components.csv, .spread.csv
/// and, for top_k traces, .certificate.csv. Returns kVerificationFailed when
/// component consensus fails.
int cmd_analyze(const std::filesystem::path& trace_path, double tol, std::uint64_t min_count,
                const std::filesystem::path& prefix, std::ostream& out, std::ostream& err);

int cmd_verify(const std::string& suite, std::size_t seed_count, std::ostream& out, std::ostream& err);

/// Full command line entry point (subcommands simulate, analyze, verify).
int main(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace vote_diffuse::cli
