#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <iosfwd>
#include <string>
#include <variant>
#include <vector>

#include "vote_diffuse/graph.hpp"
#include "vote_diffuse/opinion.hpp"
#include "vote_diffuse/rng.hpp"

namespace vote_diffuse {

/// Time-homogeneous pair law for i.i.d. gossip. `weights` is an m x m
/// symmetric, zero-diagonal, non-negative matrix summing to 1 (within 1e-12);
/// pair {i, j} is drawn with probability w[i][j] + w[j][i].
class PairDistribution {
public:
  PairDistribution(std::size_t agents, std::vector<double> weights);

  static PairDistribution uniform(std::size_t agents);
  static PairDistribution point_mass(std::size_t agents, PairEvent pair);
  /// Normalizes non-negative per-pair weights into a distribution.
  static PairDistribution from_pair_weights(std::size_t agents,
                                            const std::vector<std::pair<PairEvent, double>>& pair_weights);

  std::size_t agents() const noexcept { return agents_; }
  double weight(std::size_t i, std::size_t j) const noexcept { return weights_[i * agents_ + j]; }
  double probability(PairEvent pair) const noexcept { return weight(pair.a(), pair.b()) + weight(pair.b(), pair.a()); }

  /// Pairs with positive probability, in lexicographic order.
  const std::vector<PairEvent>& support() const noexcept { return support_; }

private:
  friend PairEvent sample_iid(const PairDistribution&, Rng&);

  std::size_t agents_;
  std::vector<double> weights_;
  std::vector<PairEvent> support_;
  std::vector<double> cumulative_;
};

PairEvent sample_iid(const PairDistribution& dist, Rng& rng);

/// Scripted pair sequence; cyclic schedules repeat with period size().
class PairSchedule {
public:
  PairSchedule(std::vector<PairEvent> events, bool cyclic);

  /// Every pair of [m] once per period, swept by diagonal: all {a, a+1},
  /// then all {a, a+2}, ..., ending with {1, m}. Cyclic.
  static PairSchedule round_robin(std::size_t agents);

  bool cyclic() const noexcept { return cyclic_; }
  std::size_t size() const noexcept { return events_.size(); }
  const std::vector<PairEvent>& events() const noexcept { return events_; }

  /// Throws DimensionError if any event names an agent outside [m].
  void check_agents(std::size_t agents) const;

private:
  std::vector<PairEvent> events_;
  bool cyclic_;
};

PairEvent next_scripted(const PairSchedule& schedule, std::uint64_t step);

/// Text format: optional first line "cyclic", then one "i j" pair per line
/// (1-based). Blank lines and '#' comments are ignored.
PairSchedule parse_schedule(std::istream& in);
PairSchedule load_schedule(const std::filesystem::path& path);
void write_schedule(std::ostream& out, const PairSchedule& schedule);

/// State-dependent pair source: called with (t, X(t)) before each step.
struct AdaptedPairSource {
  std::function<PairEvent(std::uint64_t, const OpinionProfile&)> next;
  std::string label = "callback";
};

// The default-constructed source is an empty callback, which configs reject.
using PairSource = std::variant<AdaptedPairSource, PairDistribution, PairSchedule>;

PairEvent draw_pair(const PairSource& source, std::uint64_t step, const OpinionProfile& profile, Rng& rng);

/// Agent graph whose edges recur forever. `asymptotic` is false when the
/// source is a finite schedule: edges then only record that the pair occurred
/// (counts are kept in the graph) and "infinitely often" has no meaning.
struct ConnectivityGraph {
  AgentGraph graph;
  bool asymptotic = true;
};

ConnectivityGraph connectivity_graph(const PairDistribution& dist);
ConnectivityGraph connectivity_graph(const PairSchedule& schedule, std::size_t agents);

}  // namespace vote_diffuse
