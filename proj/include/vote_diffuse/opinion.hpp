#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <span>
#include <vector>

namespace vote_diffuse {

// Agents and candidates are 0-based everywhere inside the library. Text I/O
// (schedules, traces, configs, CLI output) is 1-based and converts at the edge.
using Agent = std::uint32_t;
using Candidate = std::uint32_t;

/// Unordered communicating pair, stored with a() < b().
struct PairEvent {
  PairEvent(Agent x, Agent y);

  Agent a() const noexcept { return lo_; }
  Agent b() const noexcept { return hi_; }

  auto operator<=>(const PairEvent&) const = default;

private:
  Agent lo_;
  Agent hi_;
};

/// The m x n score matrix X(t). Row i is agent i's opinion vector, column j
/// the society's scores for candidate j. Requires m >= 2, n >= 1 and finite
/// entries.
class OpinionProfile {
public:
  OpinionProfile(std::size_t agents, std::size_t candidates, std::vector<double> scores);

  static OpinionProfile from_rows(const std::vector<std::vector<double>>& rows);
  static OpinionProfile from_rows(std::initializer_list<std::initializer_list<double>> rows);

  std::size_t agents() const noexcept { return agents_; }
  std::size_t candidates() const noexcept { return candidates_; }

  double operator()(std::size_t agent, std::size_t candidate) const noexcept {
    return scores_[agent * candidates_ + candidate];
  }

  std::span<const double> row(std::size_t agent) const noexcept {
    return {scores_.data() + agent * candidates_, candidates_};
  }
  std::vector<double> column(std::size_t candidate) const;
  std::span<const double> scores() const noexcept { return scores_; }

  // Value equality (-0.0 == 0.0). Use bit_identical for replay checks.
  bool operator==(const OpinionProfile&) const = default;

private:
  friend void apply_step_in_place(OpinionProfile&, PairEvent, std::span<const Candidate>);

  std::size_t agents_;
  std::size_t candidates_;
  std::vector<double> scores_;
};

bool bit_identical(const OpinionProfile& lhs, const OpinionProfile& rhs) noexcept;

/// Candidates discussed at one step. Sorted, duplicate-free, possibly empty.
class SubjectSet {
public:
  SubjectSet() = default;
  explicit SubjectSet(std::vector<Candidate> members);
  SubjectSet(std::initializer_list<Candidate> members);

  static SubjectSet all(std::size_t candidates);

  bool contains(Candidate candidate) const noexcept;
  std::size_t size() const noexcept { return members_.size(); }
  bool empty() const noexcept { return members_.empty(); }
  std::span<const Candidate> members() const noexcept { return members_; }
  auto begin() const noexcept { return members_.begin(); }
  auto end() const noexcept { return members_.end(); }

  SubjectSet united(const SubjectSet& other) const;

  bool operator==(const SubjectSet&) const = default;

private:
  std::vector<Candidate> members_;
};

struct AggregateProfile {
  std::vector<double> averages;
};

/// Dense row-major square matrix; only used for the mixing-matrix diagnostic.
struct SquareMatrix {
  std::size_t size = 0;
  std::vector<double> entries;

  double operator()(std::size_t r, std::size_t c) const noexcept { return entries[r * size + c]; }
  std::vector<double> multiply(std::span<const double> x) const;
};

/// One step of the voting diffusion update: the active pair replaces its scores
/// on every subject candidate by their midpoint (x + y) / 2. Everything else is
/// copied. Throws DimensionError when the pair or a subject is out of range.
OpinionProfile apply_step(const OpinionProfile& profile, PairEvent pair, const SubjectSet& subjects);

// In-place form used by the engine's hot loop. Observationally identical to
// apply_step. `subjects` must be sorted and unique.
void apply_step_in_place(OpinionProfile& profile, PairEvent pair, std::span<const Candidate> subjects);

/// Per-candidate society mean, summed in ascending agent order then divided by m.
AggregateProfile column_average(const OpinionProfile& profile);

/// Borda aggregate order: candidates by non-increasing average, ties by index.
std::vector<Candidate> borda_ranking(const AggregateProfile& aggregate);

/// Threshold top-k set {j : v[j] >= k-th largest value}. Keeps every tie, so
/// the result may hold more than k members. Throws ParameterError unless
/// 1 <= k <= v.size().
SubjectSet top_k_set(std::span<const double> values, std::size_t k);

/// W = I - [j in S] * 1/2 (e_a - e_b)(e_a - e_b)^T, the column-j mixing matrix.
SquareMatrix mixing_matrix(PairEvent pair, const SubjectSet& subjects, Candidate candidate, std::size_t agents);

}  // namespace vote_diffuse
