#include "vote_diffuse/pair_process.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "vote_diffuse/errors.hpp"

namespace vote_diffuse {

namespace {

constexpr double kSumTolerance = 1e-12;

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

}  // namespace

PairDistribution::PairDistribution(std::size_t agents, std::vector<double> weights)
    : agents_(agents), weights_(std::move(weights)) {
  if (agents_ < 2) throw ParameterError("pair distribution needs at least 2 agents");
  if (weights_.size() != agents_ * agents_) throw ParameterError("pair weights must be an m x m matrix");
  double total = 0.0;
  for (std::size_t i = 0; i < agents_; ++i) {
    if (weight(i, i) != 0.0) throw ParameterError("pair weights must have a zero diagonal");
    for (std::size_t j = 0; j < agents_; ++j) {
      const double w = weight(i, j);
      if (!std::isfinite(w) || w < 0.0) throw ParameterError("pair weights must be finite and non-negative");
      if (w != weight(j, i)) throw ParameterError("pair weights must be symmetric");
      total += w;
    }
  }
  if (total == 0.0) throw ParameterError("all-zero pair distribution");
  if (std::abs(total - 1.0) > kSumTolerance) throw ParameterError("pair weights must sum to 1");

  double running = 0.0;
  for (std::size_t i = 0; i < agents_; ++i) {
    for (std::size_t j = i + 1; j < agents_; ++j) {
      const double p = 2.0 * weight(i, j);
      if (p <= 0.0) continue;
      running += p;
      support_.emplace_back(static_cast<Agent>(i), static_cast<Agent>(j));
      cumulative_.push_back(running);
    }
  }
}

PairDistribution PairDistribution::uniform(std::size_t agents) {
  if (agents < 2) throw ParameterError("pair distribution needs at least 2 agents");
  std::vector<std::pair<PairEvent, double>> pairs;
  for (std::size_t i = 0; i < agents; ++i) {
    for (std::size_t j = i + 1; j < agents; ++j) pairs.emplace_back(PairEvent(Agent(i), Agent(j)), 1.0);
  }
  return from_pair_weights(agents, pairs);
}

PairDistribution PairDistribution::point_mass(std::size_t agents, PairEvent pair) {
  return from_pair_weights(agents, {{pair, 1.0}});
}

PairDistribution PairDistribution::from_pair_weights(std::size_t agents,
                                                     const std::vector<std::pair<PairEvent, double>>& pair_weights) {
  if (agents < 2) throw ParameterError("pair distribution needs at least 2 agents");
  double total = 0.0;
  for (const auto& [pair, w] : pair_weights) {
    if (pair.b() >= agents) throw DimensionError("pair agent " + std::to_string(pair.b() + 1) + " outside [1, " +
                                                 std::to_string(agents) + "]");
    if (!std::isfinite(w) || w < 0.0) throw ParameterError("pair weights must be finite and non-negative");
    total += w;
  }
  if (total == 0.0) throw ParameterError("all-zero pair distribution");
  std::vector<double> weights(agents * agents, 0.0);
  for (const auto& [pair, w] : pair_weights) {
    const double half = w / total / 2.0;
    weights[pair.a() * agents + pair.b()] += half;
    weights[pair.b() * agents + pair.a()] += half;
  }
  return PairDistribution(agents, std::move(weights));
}

PairEvent sample_iid(const PairDistribution& dist, Rng& rng) {
  const double u = rng.uniform() * dist.cumulative_.back();
  auto it = std::upper_bound(dist.cumulative_.begin(), dist.cumulative_.end(), u);
  if (it == dist.cumulative_.end()) --it;
  return dist.support_[static_cast<std::size_t>(it - dist.cumulative_.begin())];
}

PairSchedule::PairSchedule(std::vector<PairEvent> events, bool cyclic) : events_(std::move(events)), cyclic_(cyclic) {
  if (cyclic_ && events_.empty()) throw ParameterError("cyclic schedule needs period >= 1");
}

PairSchedule PairSchedule::round_robin(std::size_t agents) {
  if (agents < 2) throw ParameterError("round-robin schedule needs at least 2 agents");
  std::vector<PairEvent> events;
  for (std::size_t offset = 1; offset < agents; ++offset) {
    for (std::size_t a = 0; a + offset < agents; ++a) events.emplace_back(Agent(a), Agent(a + offset));
  }
  return PairSchedule(std::move(events), true);
}

void PairSchedule::check_agents(std::size_t agents) const {
  for (std::size_t t = 0; t < events_.size(); ++t) {
    if (events_[t].b() >= agents) {
      throw DimensionError("schedule event " + std::to_string(t) + " names agent " +
                           std::to_string(events_[t].b() + 1) + " but m = " + std::to_string(agents));
    }
  }
}

PairEvent next_scripted(const PairSchedule& schedule, std::uint64_t step) {
  if (schedule.cyclic()) return schedule.events()[step % schedule.size()];
  if (step >= schedule.size()) {
    throw ScheduleExhausted("finite pair schedule of length " + std::to_string(schedule.size()) +
                            " has no event for step " + std::to_string(step));
  }
  return schedule.events()[step];
}

PairSchedule parse_schedule(std::istream& in) {
  std::vector<PairEvent> events;
  bool cyclic = false;
  bool seen_content = false;
  std::string raw;
  std::size_t line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    std::string line = trim(raw.substr(0, raw.find('#')));
    if (line.empty()) continue;
    if (!seen_content && line == "cyclic") {
      cyclic = true;
      seen_content = true;
      continue;
    }
    seen_content = true;
    std::istringstream fields(line);
    long long i = 0;
    long long j = 0;
    std::string extra;
    if (!(fields >> i >> j) || (fields >> extra)) throw ParseError(line_no, "expected \"i j\", got \"" + line + "\"");
    if (i < 1 || j < 1) throw ParseError(line_no, "agent indices are 1-based");
    if (i == j) throw ParseError(line_no, "pair needs two distinct agents");
    events.emplace_back(static_cast<Agent>(i - 1), static_cast<Agent>(j - 1));
  }
  if (cyclic && events.empty()) throw ParseError(0, "cyclic schedule has no events");
  return PairSchedule(std::move(events), cyclic);
}

PairSchedule load_schedule(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read schedule " + path.string());
  try {
    return parse_schedule(in);
  } catch (const ParseError& e) {
    throw e.in_source(path.string());
  }
}

void write_schedule(std::ostream& out, const PairSchedule& schedule) {
  if (schedule.cyclic()) out << "cyclic\n";
  for (const PairEvent& e : schedule.events()) out << e.a() + 1 << ' ' << e.b() + 1 << '\n';
}

PairEvent draw_pair(const PairSource& source, std::uint64_t step, const OpinionProfile& profile, Rng& rng) {
  if (const auto* dist = std::get_if<PairDistribution>(&source)) return sample_iid(*dist, rng);
  if (const auto* schedule = std::get_if<PairSchedule>(&source)) return next_scripted(*schedule, step);
  return std::get<AdaptedPairSource>(source).next(step, profile);
}

ConnectivityGraph connectivity_graph(const PairDistribution& dist) {
  // i.i.d. draws hit every positive-probability pair infinitely often a.s.
  ConnectivityGraph out{AgentGraph(dist.agents()), true};
  for (const PairEvent& e : dist.support()) out.graph.add(e);
  return out;
}

ConnectivityGraph connectivity_graph(const PairSchedule& schedule, std::size_t agents) {
  schedule.check_agents(agents);
  ConnectivityGraph out{AgentGraph(agents), schedule.cyclic()};
  for (const PairEvent& e : schedule.events()) out.graph.add(e);
  return out;
}

}  // namespace vote_diffuse
