#include "vote_diffuse/opinion.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <numeric>
#include <string>

#include "vote_diffuse/errors.hpp"

namespace vote_diffuse {

OpinionProfile::OpinionProfile(std::size_t agents, std::size_t candidates, std::vector<double> scores)
    : agents_(agents), candidates_(candidates), scores_(std::move(scores)) {
  if (agents_ < 2) throw DimensionError("opinion profile needs at least 2 agents");
  if (candidates_ < 1) throw DimensionError("opinion profile needs at least 1 candidate");
  if (scores_.size() != agents_ * candidates_) {
    throw DimensionError("opinion profile has " + std::to_string(scores_.size()) + " scores, expected " +
                         std::to_string(agents_ * candidates_));
  }
  for (std::size_t k = 0; k < scores_.size(); ++k) {
    if (!std::isfinite(scores_[k])) {
      throw ParameterError("non-finite score at agent " + std::to_string(k / candidates_ + 1) + ", candidate " +
                           std::to_string(k % candidates_ + 1));
    }
  }
}

OpinionProfile OpinionProfile::from_rows(const std::vector<std::vector<double>>& rows) {
  const std::size_t n = rows.empty() ? 0 : rows.front().size();
  std::vector<double> scores;
  scores.reserve(rows.size() * n);
  for (const auto& r : rows) {
    if (r.size() != n) throw DimensionError("ragged opinion rows");
    scores.insert(scores.end(), r.begin(), r.end());
  }
  return OpinionProfile(rows.size(), n, std::move(scores));
}

OpinionProfile OpinionProfile::from_rows(std::initializer_list<std::initializer_list<double>> rows) {
  std::vector<std::vector<double>> copy;
  for (const auto& r : rows) copy.emplace_back(r);
  return from_rows(copy);
}

std::vector<double> OpinionProfile::column(std::size_t candidate) const {
  std::vector<double> out(agents_);
  for (std::size_t i = 0; i < agents_; ++i) out[i] = (*this)(i, candidate);
  return out;
}

bool bit_identical(const OpinionProfile& lhs, const OpinionProfile& rhs) noexcept {
  if (lhs.agents() != rhs.agents() || lhs.candidates() != rhs.candidates()) return false;
  const auto l = lhs.scores();
  const auto r = rhs.scores();
  return std::memcmp(l.data(), r.data(), l.size_bytes()) == 0;
}

PairEvent::PairEvent(Agent x, Agent y) : lo_(std::min(x, y)), hi_(std::max(x, y)) {
  if (x == y) throw ParameterError("pair needs two distinct agents, got " + std::to_string(x + 1) + " twice");
}

SubjectSet::SubjectSet(std::vector<Candidate> members) : members_(std::move(members)) {
  std::sort(members_.begin(), members_.end());
  members_.erase(std::unique(members_.begin(), members_.end()), members_.end());
}

SubjectSet::SubjectSet(std::initializer_list<Candidate> members) : SubjectSet(std::vector<Candidate>(members)) {}

SubjectSet SubjectSet::all(std::size_t candidates) {
  std::vector<Candidate> members(candidates);
  std::iota(members.begin(), members.end(), Candidate{0});
  return SubjectSet(std::move(members));
}

bool SubjectSet::contains(Candidate candidate) const noexcept {
  return std::binary_search(members_.begin(), members_.end(), candidate);
}

SubjectSet SubjectSet::united(const SubjectSet& other) const {
  SubjectSet out;
  out.members_.reserve(members_.size() + other.members_.size());
  std::set_union(members_.begin(), members_.end(), other.members_.begin(), other.members_.end(),
                 std::back_inserter(out.members_));
  return out;
}

std::vector<double> SquareMatrix::multiply(std::span<const double> x) const {
  std::vector<double> y(size, 0.0);
  for (std::size_t r = 0; r < size; ++r) {
    double acc = 0.0;
    for (std::size_t c = 0; c < size; ++c) acc += entries[r * size + c] * x[c];
    y[r] = acc;
  }
  return y;
}

namespace {

void check_pair(PairEvent pair, std::size_t agents) {
  if (pair.b() >= agents) {
    throw DimensionError("agent " + std::to_string(pair.b() + 1) + " outside [1, " + std::to_string(agents) + "]");
  }
}

void check_subjects(std::span<const Candidate> subjects, std::size_t candidates) {
  for (Candidate j : subjects) {
    if (j >= candidates) {
      throw DimensionError("candidate " + std::to_string(j + 1) + " outside [1, " + std::to_string(candidates) + "]");
    }
  }
}

}  // namespace

void apply_step_in_place(OpinionProfile& profile, PairEvent pair, std::span<const Candidate> subjects) {
  check_pair(pair, profile.agents_);
  check_subjects(subjects, profile.candidates_);
  double* row_a = profile.scores_.data() + pair.a() * profile.candidates_;
  double* row_b = profile.scores_.data() + pair.b() * profile.candidates_;
  for (Candidate j : subjects) {
    const double mid = (row_a[j] + row_b[j]) / 2.0;
    row_a[j] = mid;
    row_b[j] = mid;
  }
}

OpinionProfile apply_step(const OpinionProfile& profile, PairEvent pair, const SubjectSet& subjects) {
  OpinionProfile next = profile;
  apply_step_in_place(next, pair, subjects.members());
  return next;
}

AggregateProfile column_average(const OpinionProfile& profile) {
  const std::size_t m = profile.agents();
  const std::size_t n = profile.candidates();
  AggregateProfile out{std::vector<double>(n, 0.0)};
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < n; ++j) out.averages[j] += profile(i, j);
  }
  for (double& v : out.averages) v /= static_cast<double>(m);
  return out;
}

std::vector<Candidate> borda_ranking(const AggregateProfile& aggregate) {
  std::vector<Candidate> order(aggregate.averages.size());
  std::iota(order.begin(), order.end(), Candidate{0});
  std::stable_sort(order.begin(), order.end(), [&](Candidate l, Candidate r) {
    return aggregate.averages[l] > aggregate.averages[r];
  });
  return order;
}

SubjectSet top_k_set(std::span<const double> values, std::size_t k) {
  if (k < 1 || k > values.size()) {
    throw ParameterError("k must be in [1, " + std::to_string(values.size()) + "], got " + std::to_string(k));
  }
  std::vector<double> sorted(values.begin(), values.end());
  std::nth_element(sorted.begin(), sorted.begin() + static_cast<std::ptrdiff_t>(k - 1), sorted.end(),
                   std::greater<>());
  const double threshold = sorted[k - 1];
  std::vector<Candidate> members;
  for (std::size_t j = 0; j < values.size(); ++j) {
    if (values[j] >= threshold) members.push_back(static_cast<Candidate>(j));
  }
  return SubjectSet(std::move(members));
}

SquareMatrix mixing_matrix(PairEvent pair, const SubjectSet& subjects, Candidate candidate, std::size_t agents) {
  check_pair(pair, agents);
  SquareMatrix w{agents, std::vector<double>(agents * agents, 0.0)};
  for (std::size_t i = 0; i < agents; ++i) w.entries[i * agents + i] = 1.0;
  if (subjects.contains(candidate)) {
    const std::size_t a = pair.a();
    const std::size_t b = pair.b();
    w.entries[a * agents + a] = 0.5;
    w.entries[b * agents + b] = 0.5;
    w.entries[a * agents + b] = 0.5;
    w.entries[b * agents + a] = 0.5;
  }
  return w;
}

}  // namespace vote_diffuse
