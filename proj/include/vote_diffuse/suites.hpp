#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "vote_diffuse/engine.hpp"

namespace vote_diffuse {

/// Outcome of one seeded run of a named verification suite. `metric` is the
/// suite's headline number (max drift, max spread, ...).
struct SuiteOutcome {
  std::uint64_t seed = 0;
  bool pass = false;
  double metric = 0.0;
  std::string detail;
};

struct SuiteSummary {
  std::string suite;
  std::vector<SuiteOutcome> runs;

  bool pass() const;
  double worst_metric() const;
};

// conservation, gossip-consensus, topk, hk-freeze, disconnected
const std::vector<std::string>& suite_names();

/// Throws ParameterError for an unknown suite.
SuiteOutcome run_suite_once(std::string_view suite, std::uint64_t seed);

/// Seeds 1..seed_count, spread over up to `threads` workers. Results are in
/// seed order regardless of scheduling.
SuiteSummary run_suite(std::string_view suite, std::size_t seed_count, std::size_t threads);

/// Hardware concurrency, capped by VOTE_DIFFUSE_THREADS when set.
std::size_t default_thread_count();

/// Runs independent configs in parallel; output order matches input order.
std::vector<Trace> run_batch(const std::vector<SimulationConfig>& configs, std::size_t threads);

// Builders for the standard verification setups, shared with the tests.
SimulationConfig conservation_config(SubjectPolicy policy, std::uint64_t seed, std::uint64_t steps);
SimulationConfig gossip_config(std::size_t agents, std::size_t candidates, std::uint64_t seed);
SimulationConfig topk_config(std::uint64_t seed);
SimulationConfig hk_freeze_config(std::uint64_t seed);
/// Blocks {1..5} and {6..10} gossip on interleaved round-robin sweeps and
/// never meet. Full subjects, n = 2, gaussian X(0).
SimulationConfig two_block_config(std::uint64_t seed);
PairSchedule two_block_schedule(std::size_t block_size);

}  // namespace vote_diffuse
