#include "vote_diffuse/suites.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <functional>
#include <thread>

#include "vote_diffuse/analysis.hpp"
#include "vote_diffuse/errors.hpp"
#include "vote_diffuse/text.hpp"

namespace vote_diffuse {

namespace {

constexpr double kConservationBound = 1e-10;
constexpr double kConsensusTol = 1e-8;
constexpr std::uint64_t kMinCount = kDefaultMinCount;

std::string fmt(double v) { return text::format_double(v); }

void parallel_for(std::size_t count, std::size_t threads, const std::function<void(std::size_t)>& body) {
  threads = std::clamp<std::size_t>(threads, 1, std::max<std::size_t>(count, 1));
  std::atomic<std::size_t> next{0};
  std::vector<std::exception_ptr> errors(count);
  auto worker = [&] {
    for (std::size_t i = next++; i < count; i = next++) {
      try {
        body(i);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  std::vector<std::thread> pool;
  for (std::size_t t = 1; t < threads; ++t) pool.emplace_back(worker);
  worker();
  for (auto& th : pool) th.join();
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

SuiteOutcome conservation_suite(std::uint64_t seed) {
  const SubjectPolicy policies[] = {SubjectPolicy::full(), SubjectPolicy::top_k(3), SubjectPolicy::binomial(0.3),
                                    SubjectPolicy::hk(0.5)};
  SuiteOutcome out{seed, true, 0.0, {}};
  for (const auto& policy : policies) {
    const Trace trace = run(conservation_config(policy, seed, 250'000));
    const double drift = conservation_audit(trace);
    out.metric = std::max(out.metric, drift);
    out.detail += std::string(out.detail.empty() ? "" : " ") + std::string(to_string(policy.kind)) + "=" + fmt(drift);
  }
  out.pass = out.metric <= kConservationBound;
  return out;
}

SuiteOutcome gossip_suite(std::uint64_t seed) {
  SuiteOutcome out{seed, true, 0.0, {}};
  for (std::size_t m : {4, 10}) {
    const Trace trace = run(gossip_config(m, 3, seed));
    const auto mean0 = column_average(trace.initial).averages;
    double off_mean = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
      for (std::size_t j = 0; j < mean0.size(); ++j) {
        off_mean = std::max(off_mean, std::abs(trace.final_profile(i, j) - mean0[j]));
      }
    }
    const auto spreads = column_spreads(trace.final_profile);
    const double spread = *std::max_element(spreads.begin(), spreads.end());
    out.metric = std::max(out.metric, spread);
    out.pass = out.pass && spread <= kConsensusTol && off_mean <= kConsensusTol;
    out.detail += "m=" + std::to_string(m) + " steps=" + std::to_string(trace.stopped_at) + " spread=" + fmt(spread) +
                  " |x-mean0|=" + fmt(off_mean) + " ";
  }
  return out;
}

SuiteOutcome topk_suite(std::uint64_t seed) {
  const Trace trace = run(topk_config(seed));
  const TopKCertificate cert = topk_certificate(trace, kConsensusTol, kMinCount);
  SuiteOutcome out{seed, false, static_cast<double>(cert.k_prime), {}};
  const Candidate top = cert.aggregate_ranking.front();
  double gap = INFINITY;
  const ConsensusReport report = consensus_report(trace.final_profile, kConsensusTol);
  if (report.candidates[top].society_wide()) {
    gap = std::abs(report.candidates[top].classes.front().value - cert.initial_aggregate.averages[top]);
  }
  out.pass = cert.applicable && cert.k_prime >= 1 && gap <= kConsensusTol;
  out.detail = "k'=" + std::to_string(cert.k_prime) + " steps=" + std::to_string(trace.stopped_at) + " (" +
               std::string(to_string(trace.stop_reason)) + ") top-value gap=" + fmt(gap);
  if (!cert.diagnostic.empty()) out.detail += " note: " + cert.diagnostic;
  return out;
}

SuiteOutcome hk_freeze_suite(std::uint64_t seed) {
  const Trace trace = run(hk_freeze_config(seed));
  std::uint64_t changed = 0;
  replay(trace, [&](std::uint64_t, const OpinionProfile& x) {
    if (!bit_identical(x, trace.initial)) ++changed;
  });
  SuiteOutcome out{seed, false, static_cast<double>(changed), {}};
  out.pass = changed == 0 && trace.stopped_at == 10'000;
  out.detail = "steps=" + std::to_string(trace.stopped_at) + " changed_steps=" + std::to_string(changed);
  return out;
}

SuiteOutcome disconnected_suite(std::uint64_t seed) {
  const Trace trace = run(two_block_config(seed));
  const auto report = verify_component_consensus(trace, kConsensusTol, kMinCount);
  SuiteOutcome out{seed, report.pass(), 0.0, {}};
  const std::size_t n = trace.initial.candidates();
  for (Candidate j = 0; j < n; ++j) {
    std::size_t components = 0;
    for (const auto& check : report.checks) {
      if (check.candidate != j) continue;
      ++components;
      double mean0 = 0.0;
      for (Agent i : check.component) mean0 += trace.initial(i, j);
      mean0 /= static_cast<double>(check.component.size());
      out.metric = std::max(out.metric, std::abs(check.value - mean0));
    }
    if (components != 2) out.pass = false;
  }
  out.pass = out.pass && out.metric <= kConsensusTol;
  out.detail = "steps=" + std::to_string(trace.stopped_at) + " max |block value - block mean0|=" + fmt(out.metric);
  return out;
}

}  // namespace

bool SuiteSummary::pass() const {
  return !runs.empty() && std::all_of(runs.begin(), runs.end(), [](const SuiteOutcome& r) { return r.pass; });
}

double SuiteSummary::worst_metric() const {
  double worst = 0.0;
  for (const auto& r : runs) worst = std::max(worst, r.metric);
  return worst;
}

const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names{"conservation", "gossip-consensus", "topk", "hk-freeze", "disconnected"};
  return names;
}

SuiteOutcome run_suite_once(std::string_view suite, std::uint64_t seed) {
  if (suite == "conservation") return conservation_suite(seed);
  if (suite == "gossip-consensus") return gossip_suite(seed);
  if (suite == "topk") return topk_suite(seed);
  if (suite == "hk-freeze") return hk_freeze_suite(seed);
  if (suite == "disconnected") return disconnected_suite(seed);
  throw ParameterError("unknown suite \"" + std::string(suite) +
                       "\" (expected conservation, gossip-consensus, topk, hk-freeze or disconnected)");
}

SuiteSummary run_suite(std::string_view suite, std::size_t seed_count, std::size_t threads) {
  const auto& names = suite_names();
  if (std::find(names.begin(), names.end(), suite) == names.end()) run_suite_once(suite, 0);
  SuiteSummary summary{std::string(suite), std::vector<SuiteOutcome>(seed_count)};
  parallel_for(seed_count, threads, [&](std::size_t i) { summary.runs[i] = run_suite_once(suite, i + 1); });
  return summary;
}

std::size_t default_thread_count() {
  std::size_t threads = std::max(1u, std::thread::hardware_concurrency());
  if (const char* env = std::getenv("VOTE_DIFFUSE_THREADS")) {
    if (const auto cap = text::parse_u64(env); cap && *cap >= 1) threads = std::min<std::size_t>(threads, *cap);
  }
  return threads;
}

std::vector<Trace> run_batch(const std::vector<SimulationConfig>& configs, std::size_t threads) {
  std::vector<std::optional<Trace>> slots(configs.size());
  parallel_for(configs.size(), threads, [&](std::size_t i) { slots[i] = run(configs[i]); });
  std::vector<Trace> out;
  out.reserve(slots.size());
  for (auto& s : slots) out.push_back(std::move(*s));
  return out;
}

SimulationConfig conservation_config(SubjectPolicy policy, std::uint64_t seed, std::uint64_t steps) {
  SimulationConfig c;
  c.agents = 20;
  c.candidates = 10;
  c.initial = {InitialKind::gaussian, std::nullopt, Rng::derive(seed, 100)};
  c.pairs = PairDistribution::uniform(c.agents);
  c.subjects = std::move(policy);
  c.max_steps = steps;
  c.seed = seed;
  c.snapshot_every = steps;
  c.stop_on_convergence = false;
  return c;
}

SimulationConfig gossip_config(std::size_t agents, std::size_t candidates, std::uint64_t seed) {
  SimulationConfig c;
  c.agents = agents;
  c.candidates = candidates;
  c.initial = {InitialKind::gaussian, std::nullopt, Rng::derive(seed, 200 + agents)};
  c.pairs = PairDistribution::uniform(agents);
  c.subjects = SubjectPolicy::full();
  c.max_steps = 100'000 * agents;
  c.seed = seed;
  c.snapshot_every = 1000;
  c.convergence_tol = 1e-12;
  c.convergence_window = 1000;
  return c;
}

SimulationConfig topk_config(std::uint64_t seed) {
  SimulationConfig c;
  c.agents = 5;
  c.candidates = 4;
  c.initial = {InitialKind::gaussian, std::nullopt, Rng::derive(seed, 300)};
  c.pairs = PairDistribution::uniform(c.agents);
  c.subjects = SubjectPolicy::top_k(2);
  c.max_steps = 1'000'000;
  c.seed = seed;
  c.snapshot_every = 1000;
  c.convergence_tol = 1e-12;
  c.convergence_window = 1000;
  return c;
}

SimulationConfig hk_freeze_config(std::uint64_t seed) {
  SimulationConfig c;
  c.agents = 2;
  c.candidates = 1;
  c.initial = {InitialKind::explicit_profile, OpinionProfile::from_rows({{0.0}, {1.0}}), 0};
  c.pairs = PairDistribution::uniform(2);
  c.subjects = SubjectPolicy::hk(0.5);
  c.max_steps = 10'000;
  c.seed = seed;
  c.snapshot_every = 1000;
  c.stop_on_convergence = false;
  return c;
}

PairSchedule two_block_schedule(std::size_t block_size) {
  const auto sweep = PairSchedule::round_robin(block_size).events();
  std::vector<PairEvent> events;
  for (const PairEvent& e : sweep) {
    events.push_back(e);
    events.emplace_back(static_cast<Agent>(e.a() + block_size), static_cast<Agent>(e.b() + block_size));
  }
  return PairSchedule(std::move(events), true);
}

SimulationConfig two_block_config(std::uint64_t seed) {
  SimulationConfig c;
  c.agents = 10;
  c.candidates = 2;
  c.initial = {InitialKind::gaussian, std::nullopt, Rng::derive(seed, 400)};
  c.pairs = two_block_schedule(5);
  c.subjects = SubjectPolicy::full();
  c.max_steps = 100'000;
  c.seed = seed;
  c.snapshot_every = 1000;
  c.convergence_tol = 1e-12;
  c.convergence_window = 1000;
  return c;
}

}  // namespace vote_diffuse
