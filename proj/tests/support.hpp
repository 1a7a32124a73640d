#pragma once

// Hand-rolled generators and independent oracles for the test suites.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "vote_diffuse/opinion.hpp"

namespace vote_diffuse::testing {

struct Gen {
  explicit Gen(std::uint64_t seed) : engine(seed) {}

  std::size_t size(std::size_t lo, std::size_t hi) {
    return std::uniform_int_distribution<std::size_t>(lo, hi)(engine);
  }
  double real(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(engine); }

  OpinionProfile profile(std::size_t m, std::size_t n) {
    std::vector<double> scores(m * n);
    for (double& x : scores) x = real(-10.0, 10.0);
    return OpinionProfile(m, n, std::move(scores));
  }

  PairEvent pair(std::size_t m) {
    const auto a = static_cast<Agent>(size(0, m - 1));
    auto b = static_cast<Agent>(size(0, m - 2));
    if (b >= a) ++b;
    return PairEvent(a, b);
  }

  SubjectSet subjects(std::size_t n) {
    std::vector<Candidate> members;
    for (std::size_t j = 0; j < n; ++j) {
      if (size(0, 1)) members.push_back(static_cast<Candidate>(j));
    }
    return SubjectSet(std::move(members));
  }

  std::mt19937_64 engine;
};

// Column mean with compensated (Kahan) summation, independent of column_average.
inline double kahan_column_mean(const OpinionProfile& x, std::size_t j) {
  double sum = 0.0;
  double carry = 0.0;
  for (std::size_t i = 0; i < x.agents(); ++i) {
    const double y = x(i, j) - carry;
    const double t = sum + y;
    carry = (t - sum) - y;
    sum = t;
  }
  return sum / static_cast<double>(x.agents());
}

// Direct evaluation of I - 1/2 (e_a - e_b)(e_a - e_b)^T entry by entry.
inline double mixing_entry(std::size_t r, std::size_t c, PairEvent pair, bool active) {
  const auto unit = [](std::size_t idx, std::size_t k) { return idx == k ? 1.0 : 0.0; };
  const double d_r = unit(pair.a(), r) - unit(pair.b(), r);
  const double d_c = unit(pair.a(), c) - unit(pair.b(), c);
  return unit(r, c) - (active ? 0.5 * d_r * d_c : 0.0);
}

inline std::vector<std::vector<double>> to_rows(const OpinionProfile& x) {
  std::vector<std::vector<double>> rows;
  for (std::size_t i = 0; i < x.agents(); ++i) rows.emplace_back(x.row(i).begin(), x.row(i).end());
  return rows;
}

}  // namespace vote_diffuse::testing
