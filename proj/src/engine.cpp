#include "vote_diffuse/engine.hpp"

#include <algorithm>
#include <cmath>

#include "vote_diffuse/errors.hpp"
#include "vote_diffuse/rng.hpp"
#include "vote_diffuse/text.hpp"

namespace vote_diffuse {

namespace {

constexpr std::uint64_t kPairStream = 0;
constexpr std::uint64_t kSubjectStream = 1;

std::string u64(std::uint64_t v) { return std::to_string(v); }

ConfigEcho describe_pairs(const PairSource& source) {
  ConfigEcho out;
  if (const auto* dist = std::get_if<PairDistribution>(&source)) {
    out.emplace_back("pairs.kind", "iid");
    std::string support;
    for (const PairEvent& e : dist->support()) {
      if (!support.empty()) support += ' ';
      support += u64(e.a() + 1) + "-" + u64(e.b() + 1) + ":" + text::format_double(dist->probability(e));
    }
    out.emplace_back("pairs.support", support);
  } else if (const auto* schedule = std::get_if<PairSchedule>(&source)) {
    out.emplace_back("pairs.kind", "schedule");
    out.emplace_back("pairs.cyclic", schedule->cyclic() ? "true" : "false");
    out.emplace_back("pairs.length", u64(schedule->size()));
  } else {
    out.emplace_back("pairs.kind", "callback");
    out.emplace_back("pairs.label", std::get<AdaptedPairSource>(source).label);
  }
  return out;
}

ConfigEcho describe_subjects(const SubjectPolicy& policy) {
  ConfigEcho out{{"subjects.kind", std::string(to_string(policy.kind))}};
  switch (policy.kind) {
    case SubjectKind::full: break;
    case SubjectKind::top_k: out.emplace_back("subjects.k", u64(policy.k)); break;
    case SubjectKind::binomial: out.emplace_back("subjects.p", text::format_double(policy.p)); break;
    case SubjectKind::hk: out.emplace_back("subjects.eps", text::format_double(policy.eps)); break;
    case SubjectKind::scripted:
      out.emplace_back("subjects.cyclic", policy.script_cyclic ? "true" : "false");
      out.emplace_back("subjects.length", u64(policy.script.size()));
      break;
  }
  return out;
}

std::string subject_field(const SubjectPolicy& policy) {
  switch (policy.kind) {
    case SubjectKind::top_k: return "subjects.k";
    case SubjectKind::binomial: return "subjects.p";
    case SubjectKind::hk: return "subjects.eps";
    case SubjectKind::scripted: return "subjects.script";
    case SubjectKind::full: break;
  }
  return "subjects";
}

// Per-column components of the agents that discussed that column in events
// [from, to).
std::vector<Partition> recent_discussion_components(const EventLog& events, std::size_t from, std::size_t to,
                                                    std::size_t agents, std::size_t candidates) {
  std::vector<DisjointSets> sets(candidates, DisjointSets(agents));
  for (std::size_t t = from; t < to; ++t) {
    const PairEvent pair = events.pair(t);
    for (Candidate j : events.subjects(t)) sets[j].unite(pair.a(), pair.b());
  }
  std::vector<Partition> out;
  out.reserve(candidates);
  for (auto& s : sets) out.push_back(s.partition());
  return out;
}

}  // namespace

std::string_view to_string(StopReason reason) {
  switch (reason) {
    case StopReason::converged: return "converged";
    case StopReason::max_steps: return "max_steps";
    case StopReason::schedule_exhausted: return "schedule_exhausted";
  }
  return "unknown";
}

StopReason parse_stop_reason(std::string_view name) {
  for (StopReason r : {StopReason::converged, StopReason::max_steps, StopReason::schedule_exhausted}) {
    if (to_string(r) == name) return r;
  }
  throw ParameterError("unknown stop reason \"" + std::string(name) + "\"");
}

std::string_view to_string(InitialKind kind) {
  switch (kind) {
    case InitialKind::explicit_profile: return "explicit";
    case InitialKind::uniform: return "uniform";
    case InitialKind::gaussian: return "gaussian";
  }
  return "unknown";
}

OpinionProfile generate_initial(const InitialProfileSpec& spec, std::size_t agents, std::size_t candidates) {
  if (spec.kind == InitialKind::explicit_profile) {
    if (!spec.profile) throw ConfigError("initial", "explicit initial profile missing");
    if (spec.profile->agents() != agents || spec.profile->candidates() != candidates) {
      throw ConfigError("initial", "initial profile is " + u64(spec.profile->agents()) + "x" +
                                       u64(spec.profile->candidates()) + ", expected " + u64(agents) + "x" +
                                       u64(candidates));
    }
    return *spec.profile;
  }
  Rng rng(spec.seed);
  std::vector<double> scores(agents * candidates);
  for (double& x : scores) x = spec.kind == InitialKind::uniform ? rng.uniform() : rng.gaussian();
  return OpinionProfile(agents, candidates, std::move(scores));
}

void SimulationConfig::validate() const {
  if (agents < 2) throw ConfigError("m", "m must be >= 2");
  if (candidates < 1) throw ConfigError("n", "n must be >= 1");
  if (max_steps < 1) throw ConfigError("max_steps", "max_steps must be >= 1");
  if (snapshot_every < 1) throw ConfigError("snapshot_every", "snapshot_every must be >= 1");
  if (!(convergence_tol > 0.0) || !std::isfinite(convergence_tol)) {
    throw ConfigError("convergence.tol", "convergence tolerance must be > 0");
  }
  if (convergence_window < 1) throw ConfigError("convergence.window", "convergence window must be >= 1");
  if (initial.kind == InitialKind::explicit_profile) {
    generate_initial(initial, agents, candidates);
  }
  try {
    if (const auto* dist = std::get_if<PairDistribution>(&pairs)) {
      if (dist->agents() != agents) {
        throw ConfigError("pairs", "pair distribution covers " + u64(dist->agents()) + " agents, m = " + u64(agents));
      }
    } else if (const auto* schedule = std::get_if<PairSchedule>(&pairs)) {
      schedule->check_agents(agents);
    } else if (!std::get<AdaptedPairSource>(pairs).next) {
      throw ConfigError("pairs", "no pair source configured");
    }
  } catch (const DimensionError& e) {
    throw ConfigError("pairs", e.what());
  }
  try {
    subjects.validate(candidates);
  } catch (const ConfigError&) {
    throw;
  } catch (const Error& e) {
    throw ConfigError(subject_field(subjects), e.what());
  }
}

ConfigEcho SimulationConfig::echo() const {
  ConfigEcho out{
      {"m", u64(agents)},
      {"n", u64(candidates)},
      {"seed", u64(seed)},
      {"max_steps", u64(max_steps)},
      {"snapshot_every", u64(snapshot_every)},
      {"convergence.tol", text::format_double(convergence_tol)},
      {"convergence.window", u64(convergence_window)},
      {"convergence.stop", stop_on_convergence ? "true" : "false"},
      {"initial.kind", std::string(to_string(initial.kind))},
  };
  if (initial.kind != InitialKind::explicit_profile) out.emplace_back("initial.seed", u64(initial.seed));
  for (auto& kv : describe_pairs(pairs)) out.push_back(std::move(kv));
  for (auto& kv : describe_subjects(subjects)) out.push_back(std::move(kv));
  for (const auto& kv : annotations) out.push_back(kv);
  return out;
}

void EventLog::push(PairEvent pair, std::span<const Candidate> subjects) {
  pairs_.push_back(pair);
  subjects_.insert(subjects_.end(), subjects.begin(), subjects.end());
  offsets_.push_back(subjects_.size());
}

void EventLog::reserve(std::size_t steps, std::size_t subjects_per_step) {
  pairs_.reserve(steps);
  offsets_.reserve(steps + 1);
  subjects_.reserve(steps * subjects_per_step);
}

std::optional<std::string> Trace::echo(std::string_view key) const {
  for (const auto& [k, v] : config) {
    if (k == key) return v;
  }
  return std::nullopt;
}

double max_norm_distance(const OpinionProfile& lhs, const OpinionProfile& rhs) {
  if (lhs.agents() != rhs.agents() || lhs.candidates() != rhs.candidates()) {
    throw DimensionError("profiles differ in shape");
  }
  double worst = 0.0;
  const auto l = lhs.scores();
  const auto r = rhs.scores();
  for (std::size_t k = 0; k < l.size(); ++k) worst = std::max(worst, std::abs(l[k] - r[k]));
  return worst;
}

bool has_converged(std::span<const OpinionProfile> history, double tol, std::span<const Partition> components) {
  if (history.empty()) throw ParameterError("has_converged needs at least one profile");
  const OpinionProfile& last = history.back();
  const std::size_t m = last.agents();
  const std::size_t n = last.candidates();
  if (!components.empty() && components.size() != 1 && components.size() != n) {
    throw DimensionError("need 0, 1 or n partitions");
  }

  for (std::size_t j = 0; j < n; ++j) {
    std::vector<std::size_t> cls(m, 0);
    std::size_t classes = 1;
    if (!components.empty()) {
      const Partition& part = components.size() == 1 ? components.front() : components[j];
      cls = class_of(part, m);
      classes = part.size();
    }
    std::vector<double> lo(classes, INFINITY);
    std::vector<double> hi(classes, -INFINITY);
    for (std::size_t i = 0; i < m; ++i) {
      lo[cls[i]] = std::min(lo[cls[i]], last(i, j));
      hi[cls[i]] = std::max(hi[cls[i]], last(i, j));
    }
    for (std::size_t c = 0; c < classes; ++c) {
      if (hi[c] - lo[c] > tol) return false;
    }
  }
  for (std::size_t h = 0; h + 1 < history.size(); ++h) {
    if (max_norm_distance(last, history[h]) > tol) return false;
  }
  return true;
}

Trace run(const SimulationConfig& config) {
  config.validate();
  OpinionProfile profile = generate_initial(config.initial, config.agents, config.candidates);
  Trace trace{config.echo(), profile, {}, {}, profile, 0, StopReason::max_steps};
  trace.snapshots.emplace(0, profile);

  Rng pair_rng(Rng::derive(config.seed, kPairStream));
  Rng subject_rng(Rng::derive(config.seed, kSubjectStream));

  const std::size_t reserve_steps = static_cast<std::size_t>(std::min<std::uint64_t>(config.max_steps, 1u << 20));
  trace.events.reserve(reserve_steps, config.subjects.kind == SubjectKind::full ? config.candidates : 1);

  OpinionProfile anchor = profile;
  std::uint64_t steps = 0;
  while (steps < config.max_steps) {
    const std::uint64_t t = steps;
    std::optional<PairEvent> pair;
    SubjectSet subjects;
    try {
      pair = draw_pair(config.pairs, t, profile, pair_rng);
      subjects = draw_subjects(config.subjects, t, profile, *pair, subject_rng);
    } catch (const ScheduleExhausted&) {
      trace.stop_reason = StopReason::schedule_exhausted;
      break;
    }
    apply_step_in_place(profile, *pair, subjects.members());
    trace.events.push(*pair, subjects.members());
    steps = t + 1;

    if (steps % config.snapshot_every == 0) trace.snapshots.insert_or_assign(steps, profile);

    if (config.stop_on_convergence && steps % config.convergence_window == 0) {
      const auto parts = recent_discussion_components(trace.events, steps - config.convergence_window, steps,
                                                      config.agents, config.candidates);
      const OpinionProfile window[] = {anchor, profile};
      if (has_converged(window, config.convergence_tol, parts)) {
        trace.stop_reason = StopReason::converged;
        break;
      }
      anchor = profile;
    }
  }

  trace.stopped_at = steps;
  trace.snapshots.insert_or_assign(steps, profile);
  trace.final_profile = std::move(profile);
  return trace;
}

OpinionProfile replay(const Trace& trace, const StepObserver& observer) {
  OpinionProfile profile = trace.initial;
  if (observer) observer(0, profile);
  for (std::size_t t = 0; t < trace.events.size(); ++t) {
    try {
      apply_step_in_place(profile, trace.events.pair(t), trace.events.subjects(t));
    } catch (const DimensionError& e) {
      throw CorruptTrace("event at step " + std::to_string(t) + ": " + e.what());
    }
    if (observer) observer(t + 1, profile);
  }
  return profile;
}

}  // namespace vote_diffuse
