#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "vote_diffuse/graph.hpp"
#include "vote_diffuse/opinion.hpp"
#include "vote_diffuse/pair_process.hpp"
#include "vote_diffuse/subject_process.hpp"

namespace vote_diffuse {

enum class StopReason { converged, max_steps, schedule_exhausted };

std::string_view to_string(StopReason reason);
StopReason parse_stop_reason(std::string_view name);

enum class InitialKind { explicit_profile, uniform, gaussian };

std::string_view to_string(InitialKind kind);

/// X(0): either given outright or drawn i.i.d. (uniform on [0,1) or standard
/// normal) from its own seed, so one X(0) can be reused across dynamics seeds.
struct InitialProfileSpec {
  InitialKind kind = InitialKind::uniform;
  std::optional<OpinionProfile> profile;
  std::uint64_t seed = 0;
};

OpinionProfile generate_initial(const InitialProfileSpec& spec, std::size_t agents, std::size_t candidates);

/// Ordered key=value description of a run. Written as the trace header.
using ConfigEcho = std::vector<std::pair<std::string, std::string>>;

struct SimulationConfig {
  std::size_t agents = 2;
  std::size_t candidates = 1;
  InitialProfileSpec initial;
  PairSource pairs;
  SubjectPolicy subjects;
  std::uint64_t max_steps = 1000;
  std::uint64_t seed = 0;
  std::uint64_t snapshot_every = 1000;
  double convergence_tol = 1e-12;
  std::uint64_t convergence_window = 1000;
  bool stop_on_convergence = true;
  // Extra provenance lines appended to the echo (e.g. source file names).
  ConfigEcho annotations;

  /// Throws ConfigError naming the offending field.
  void validate() const;
  ConfigEcho echo() const;
};

struct StepRecord {
  std::uint64_t step;
  PairEvent pair;
  std::span<const Candidate> subjects;
};

/// Dense step log; entry t is the event applied to X(t). Subject sets are
/// packed into one buffer.
class EventLog {
public:
  void push(PairEvent pair, std::span<const Candidate> subjects);
  void reserve(std::size_t steps, std::size_t subjects_per_step);

  std::size_t size() const noexcept { return pairs_.size(); }
  bool empty() const noexcept { return pairs_.empty(); }
  PairEvent pair(std::size_t step) const noexcept { return pairs_[step]; }
  std::span<const Candidate> subjects(std::size_t step) const noexcept {
    return {subjects_.data() + offsets_[step], subjects_.data() + offsets_[step + 1]};
  }
  StepRecord operator[](std::size_t step) const noexcept { return {step, pair(step), subjects(step)}; }

  bool operator==(const EventLog&) const = default;

private:
  std::vector<PairEvent> pairs_;
  std::vector<std::size_t> offsets_{0};
  std::vector<Candidate> subjects_;
};

struct Trace {
  ConfigEcho config;
  OpinionProfile initial;
  EventLog events;
  // Always holds step 0 and step `stopped_at`.
  std::map<std::uint64_t, OpinionProfile> snapshots;
  OpinionProfile final_profile;
  std::uint64_t stopped_at = 0;
  StopReason stop_reason = StopReason::max_steps;

  std::optional<std::string> echo(std::string_view key) const;
};

/// Runs the dynamics: per step draw a pair, pick subjects, average. Stops at
/// max_steps, when a finite script runs out, or (if enabled) when
/// has_converged holds at a window boundary. Fully determined by the config.
Trace run(const SimulationConfig& config);

/// Finite-horizon convergence proxy. True iff, in the last profile, every
/// column's spread within every component is <= tol, and the last profile
/// differs from every earlier one in `history` by <= tol in max-norm.
/// `components` holds no partition (whole society), one partition for all
/// columns, or one partition per column.
bool has_converged(std::span<const OpinionProfile> history, double tol, std::span<const Partition> components = {});

double max_norm_distance(const OpinionProfile& lhs, const OpinionProfile& rhs);

using StepObserver = std::function<void(std::uint64_t step, const OpinionProfile& profile)>;

/// Re-applies the event log to the trace's initial profile. Throws
/// CorruptTrace if an event does not fit the dimensions. The observer, if
/// any, sees X(0) at step 0 and X(t + 1) after each event t.
OpinionProfile replay(const Trace& trace, const StepObserver& observer = {});

}  // namespace vote_diffuse
