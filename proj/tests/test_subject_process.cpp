#include <doctest.h>

#include <sstream>

#include "support.hpp"
#include "vote_diffuse/errors.hpp"
#include "vote_diffuse/subject_process.hpp"

using namespace vote_diffuse;
using vote_diffuse::testing::Gen;

TEST_CASE("full_subjects") {
  CHECK(full_subjects(1) == SubjectSet{0});
  CHECK(full_subjects(3) == SubjectSet{0, 1, 2});
  CHECK(full_subjects(10).size() == 10);
}

TEST_CASE("topk_subjects unites both agents' top-k lists") {
  SUBCASE("equal rows") {
    const auto x = OpinionProfile::from_rows({{5, 1, 4, 0}, {5, 1, 4, 0}});
    CHECK(topk_subjects(x, PairEvent(0, 1), 2) == top_k_set(x.row(0), 2));
  }
  SUBCASE("disjoint favourites") {
    const auto x = OpinionProfile::from_rows({{3, 1, 2}, {1, 3, 2}});
    CHECK(topk_subjects(x, PairEvent(0, 1), 1) == SubjectSet{0, 1});
  }
  SUBCASE("tie in one row") {
    const auto x = OpinionProfile::from_rows({{2, 2}, {0, 5}});
    CHECK(topk_subjects(x, PairEvent(0, 1), 1) == SubjectSet{0, 1});
  }
  SUBCASE("contains both top-k sets and has at least k members") {
    Gen gen(8);
    for (int trial = 0; trial < 300; ++trial) {
      const std::size_t m = gen.size(2, 6);
      const std::size_t n = gen.size(1, 8);
      const std::size_t k = gen.size(1, n);
      const auto x = gen.profile(m, n);
      const auto pair = gen.pair(m);
      const auto s = topk_subjects(x, pair, k);
      CHECK(s.size() >= k);
      for (Candidate j : top_k_set(x.row(pair.a()), k)) CHECK(s.contains(j));
      for (Candidate j : top_k_set(x.row(pair.b()), k)) CHECK(s.contains(j));
    }
  }
}

TEST_CASE("binomial_subjects") {
  Rng rng(12345);
  CHECK(binomial_subjects(7, 1.0, rng) == full_subjects(7));
  CHECK_THROWS_AS(binomial_subjects(3, 0.0, rng), ParameterError);
  CHECK_THROWS_AS(binomial_subjects(3, 1.5, rng), ParameterError);

  SUBCASE("half of 10000 candidates") {
    const double share = binomial_subjects(10000, 0.5, rng).size() / 10000.0;
    CHECK(share >= 0.47);
    CHECK(share <= 0.53);
  }
  SUBCASE("single candidate inclusion frequency") {
    int included = 0;
    for (int i = 0; i < 10000; ++i) included += binomial_subjects(1, 0.3, rng).size();
    CHECK(std::abs(included / 10000.0 - 0.3) <= 0.02);
  }
}

TEST_CASE("hk_subjects is inclusive at eps") {
  const auto x = OpinionProfile::from_rows({{0.0}, {1.0}});
  CHECK(hk_subjects(x, PairEvent(0, 1), 0.5).empty());
  CHECK(hk_subjects(x, PairEvent(0, 1), 1.0) == SubjectSet{0});
  const auto same = OpinionProfile::from_rows({{0.3, -2, 9}, {0.3, -2, 9}});
  CHECK(hk_subjects(same, PairEvent(0, 1), 0.0) == SubjectSet{0, 1, 2});
  CHECK(hk_subjects(same, PairEvent(0, 1), 7.0) == SubjectSet{0, 1, 2});

  Gen gen(4);
  for (int trial = 0; trial < 200; ++trial) {
    const auto p = gen.profile(4, 6);
    const double eps = gen.real(0.0, 10.0);
    const auto pair = gen.pair(4);
    const auto s = hk_subjects(p, pair, eps);
    for (std::size_t j = 0; j < 6; ++j) {
      CHECK(s.contains(Candidate(j)) == (std::abs(p(pair.a(), j) - p(pair.b(), j)) <= eps));
    }
  }
}

TEST_CASE("policy validation") {
  CHECK_THROWS_AS(SubjectPolicy::top_k(0).validate(3), ParameterError);
  CHECK_THROWS_AS(SubjectPolicy::top_k(4).validate(3), ParameterError);
  CHECK_NOTHROW(SubjectPolicy::top_k(3).validate(3));
  CHECK_THROWS_WITH_AS(SubjectPolicy::binomial(0.0).validate(3), "p must be in (0,1]", ParameterError);
  CHECK_NOTHROW(SubjectPolicy::binomial(1.0).validate(3));
  CHECK_THROWS_AS(SubjectPolicy::hk(-0.1).validate(3), ParameterError);
  CHECK_NOTHROW(SubjectPolicy::hk(0.0).validate(3));
  CHECK_THROWS_AS(SubjectPolicy::scripted({SubjectSet{3}}).validate(3), DimensionError);
  CHECK(parse_subject_kind("hk") == SubjectKind::hk);
  CHECK_THROWS_AS(parse_subject_kind("media"), ParameterError);
}

TEST_CASE("scripted subjects") {
  const auto finite = SubjectPolicy::scripted({SubjectSet{0}, SubjectSet{}, SubjectSet{1, 2}});
  CHECK(next_scripted_subjects(finite, 2) == SubjectSet{1, 2});
  CHECK_THROWS_AS(next_scripted_subjects(finite, 3), ScheduleExhausted);
  const auto cyclic = SubjectPolicy::scripted({SubjectSet{0}, SubjectSet{1}}, true);
  CHECK(next_scripted_subjects(cyclic, 7) == SubjectSet{1});

  std::istringstream in("1 3\n\n2\n");
  const auto script = parse_subject_script(in);
  REQUIRE(script.steps.size() == 3);
  CHECK(script.steps[0] == SubjectSet{0, 2});
  CHECK(script.steps[1].empty());
  CHECK(script.steps[2] == SubjectSet{1});
  CHECK_FALSE(script.cyclic);

  std::ostringstream out;
  write_subject_script(out, {script.steps, true});
  std::istringstream back(out.str());
  const auto reread = parse_subject_script(back);
  CHECK(reread.cyclic);
  CHECK(reread.steps == script.steps);

  std::istringstream bad("1\nx\n");
  try {
    parse_subject_script(bad);
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(e.line() == 2);
  }
}

TEST_CASE("full subjects keep equal columns equal") {
  Gen gen(21);
  std::vector<double> scores;
  for (int i = 0; i < 6; ++i) {
    const double v = gen.real(-1, 1);
    scores.insert(scores.end(), {v, v, v});
  }
  OpinionProfile x(6, 3, scores);
  Rng rng(2);
  for (int t = 0; t < 2000; ++t) {
    const auto pair = gen.pair(6);
    x = apply_step(x, pair, draw_subjects(SubjectPolicy::full(), t, x, pair, rng));
  }
  for (std::size_t i = 0; i < 6; ++i) {
    CHECK(x(i, 0) == x(i, 1));
    CHECK(x(i, 1) == x(i, 2));
  }
}
