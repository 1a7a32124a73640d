#include <doctest.h>

#include <sstream>

#include "support.hpp"
#include "vote_diffuse/analysis.hpp"
#include "vote_diffuse/errors.hpp"
#include "vote_diffuse/suites.hpp"

using namespace vote_diffuse;

namespace {

Trace scripted_trace(std::size_t m, std::size_t n, std::vector<PairEvent> pairs, std::vector<SubjectSet> subjects,
                     std::uint64_t steps, std::uint64_t init_seed = 1) {
  SimulationConfig c;
  c.agents = m;
  c.candidates = n;
  c.initial = {InitialKind::uniform, std::nullopt, init_seed};
  c.pairs = PairSchedule(std::move(pairs), true);
  c.subjects = SubjectPolicy::scripted(std::move(subjects), true);
  c.max_steps = steps;
  c.stop_on_convergence = false;
  return run(c);
}

Trace gossip_trace(std::size_t m, std::size_t n, std::uint64_t seed, std::uint64_t steps) {
  SimulationConfig c;
  c.agents = m;
  c.candidates = n;
  c.initial = {InitialKind::gaussian, std::nullopt, seed};
  c.pairs = PairDistribution::uniform(m);
  c.max_steps = steps;
  c.seed = seed;
  c.stop_on_convergence = false;
  return run(c);
}

}  // namespace

TEST_CASE("discussion_graph") {
  SUBCASE("count threshold") {
    const Trace t = scripted_trace(3, 2, {PairEvent(0, 1)}, {SubjectSet{0}}, 50);
    CHECK(discussion_graph(t, 0, 10).has_edge(PairEvent(0, 1)));
    CHECK(discussion_graph(t, 0, 10).count(PairEvent(0, 1)) == 50);
    CHECK_FALSE(discussion_graph(t, 0, 51).has_edge(PairEvent(0, 1)));
    CHECK(discussion_graph(t, 1, 1).edge_count() == 0);
    CHECK(discussion_graph(t, 1, 0).edge_count() == 0);
  }
  SUBCASE("full-subject trace matches the pair-occurrence graph for every candidate") {
    const Trace t = gossip_trace(6, 3, 2, 400);
    for (Candidate j = 0; j < 3; ++j) CHECK(discussion_graph(t, j, 1) == pair_occurrence_graph(t, 1));
    const auto all = discussion_counts(t);
    for (Candidate j = 0; j < 3; ++j) CHECK(all[j] == discussion_graph(t, j, 1));
  }
  CHECK_THROWS_AS(discussion_graph(gossip_trace(3, 1, 1, 5), 1, 1), DimensionError);
}

TEST_CASE("connected_components") {
  AgentGraph path(4);
  path.add(PairEvent(0, 1));
  path.add(PairEvent(1, 2));
  CHECK(connected_components(path) == Partition{{0, 1, 2}, {3}});
  CHECK(connected_components(AgentGraph(4)) == Partition{{0}, {1}, {2}, {3}});
  AgentGraph complete(5);
  for (Agent a = 0; a < 5; ++a) {
    for (Agent b = a + 1; b < 5; ++b) complete.add(PairEvent(a, b));
  }
  CHECK(connected_components(complete) == Partition{{0, 1, 2, 3, 4}});
  CHECK(is_connected(complete));
}

TEST_CASE("consensus_report") {
  SUBCASE("equal rows form one class per candidate") {
    const auto r = consensus_report(OpinionProfile::from_rows({{1, 2}, {1, 2}, {1, 2}}), 1e-9);
    REQUIRE(r.candidates.size() == 2);
    for (const auto& c : r.candidates) {
      CHECK(c.society_wide());
      CHECK(c.classes.front().members == std::vector<Agent>{0, 1, 2});
    }
    CHECK(r.candidates[1].classes.front().value == 2.0);
  }
  SUBCASE("two classes") {
    const auto r = consensus_report(OpinionProfile::from_rows({{0}, {0}, {1}}), 1e-9);
    REQUIRE(r.candidates[0].classes.size() == 2);
    CHECK(r.candidates[0].classes[0].members == std::vector<Agent>{0, 1});
    CHECK(r.candidates[0].classes[1].members == std::vector<Agent>{2});
  }
  SUBCASE("single linkage chains through the middle value") {
    const auto r = consensus_report(OpinionProfile::from_rows({{0}, {0.5}, {1}}), 0.6);
    CHECK(r.candidates[0].society_wide());
    CHECK(r.candidates[0].classes[0].spread == 1.0);
  }
  SUBCASE("classes are ordered by smallest member and sorted") {
    const auto r = consensus_report(OpinionProfile::from_rows({{5}, {0}, {5}, {0}}), 1e-9);
    REQUIRE(r.candidates[0].classes.size() == 2);
    CHECK(r.candidates[0].classes[0].members == std::vector<Agent>{0, 2});
    CHECK(r.candidates[0].classes[1].members == std::vector<Agent>{1, 3});
  }
  CHECK_THROWS_AS(consensus_report(OpinionProfile::from_rows({{0}, {1}}), 0.0), ParameterError);
}

TEST_CASE("verify_component_consensus") {
  SUBCASE("connected gossip passes with the initial mean as class value") {
    const Trace t = run(gossip_config(6, 2, 3));
    const auto report = verify_component_consensus(t, 1e-8, 10);
    CHECK(report.pass());
    const auto mean0 = column_average(t.initial).averages;
    REQUIRE(report.checks.size() == 2);
    for (const auto& check : report.checks) {
      CHECK(check.component.size() == 6);
      CHECK(std::abs(check.value - mean0[check.candidate]) <= 1e-8);
    }
  }
  SUBCASE("two isolated blocks agree with independent single-block runs") {
    const Trace t = run(two_block_config(5));
    const auto report = verify_component_consensus(t, 1e-8, 10);
    CHECK(report.pass());
    REQUIRE(t.stopped_at % 2 == 0);

    // Oracle: each block simulated alone on its own rows for half the steps.
    for (std::size_t block = 0; block < 2; ++block) {
      std::vector<std::vector<double>> rows;
      for (std::size_t i = 0; i < 5; ++i) {
        const auto r = t.initial.row(block * 5 + i);
        rows.emplace_back(r.begin(), r.end());
      }
      SimulationConfig solo;
      solo.agents = 5;
      solo.candidates = 2;
      solo.initial = {InitialKind::explicit_profile, OpinionProfile::from_rows(rows), 0};
      solo.pairs = PairSchedule::round_robin(5);
      solo.max_steps = t.stopped_at / 2;
      solo.stop_on_convergence = false;
      const Trace alone = run(solo);
      for (const auto& check : report.checks) {
        if (check.component.front() != block * 5) continue;
        CHECK(check.component.size() == 5);
        CHECK(std::abs(check.value - alone.final_profile(0, check.candidate)) <= 1e-8);
        for (std::size_t i = 0; i < 5; ++i) {
          CHECK(t.final_profile(block * 5 + i, check.candidate) == alone.final_profile(i, check.candidate));
        }
      }
    }
  }
  SUBCASE("empty trace passes trivially with singleton components") {
    auto c = two_block_config(1);
    c.pairs = PairSchedule({}, false);
    const Trace t = run(c);
    CHECK(t.stopped_at == 0);
    for (std::uint64_t min_count : {0u, 1u, 10u}) {
      const auto report = verify_component_consensus(t, 1e-8, min_count);
      CHECK(report.pass());
      CHECK(report.checks.size() == 20);
    }
  }
  SUBCASE("unfinished run fails and lists offenders") {
    const Trace t = gossip_trace(5, 1, 8, 30);
    const auto report = verify_component_consensus(t, 1e-8, 1);
    CHECK_FALSE(report.pass());
    CHECK_FALSE(report.failures().empty());
    CHECK_FALSE(report.candidate_pass(0));
  }
}

TEST_CASE("topk_certificate") {
  SUBCASE("single candidate degenerates to gossip") {
    SimulationConfig c = gossip_config(4, 1, 2);
    c.subjects = SubjectPolicy::top_k(1);
    const Trace t = run(c);
    const auto cert = topk_certificate(t, 1e-8, 10);
    CHECK(cert.applicable);
    CHECK(cert.k_prime == 1);
    REQUIRE(cert.alpha_hat);
    CHECK(std::abs(*cert.alpha_hat - column_average(t.initial).averages[0]) <= 1e-8);
  }
  SUBCASE("identical rows never move") {
    SimulationConfig c;
    c.agents = 4;
    c.candidates = 4;
    c.initial = {InitialKind::explicit_profile,
                 OpinionProfile::from_rows({{3, 1, 4, 2}, {3, 1, 4, 2}, {3, 1, 4, 2}, {3, 1, 4, 2}}), 0};
    c.pairs = PairDistribution::uniform(4);
    c.subjects = SubjectPolicy::top_k(2);
    c.max_steps = 2000;
    c.stop_on_convergence = false;
    const Trace t = run(c);
    CHECK(bit_identical(t.final_profile, t.initial));
    const auto cert = topk_certificate(t, 1e-8, 10);
    CHECK(cert.applicable);
    const SubjectSet common_top = top_k_set(t.initial.row(0), 2);
    CHECK(cert.k_prime >= 2);
    for (Candidate j : common_top) CHECK(top_k_set(cert.initial_aggregate.averages, cert.k_prime).contains(j));
    CHECK(cert.aggregate_ranking == std::vector<Candidate>{2, 0, 3, 1});
  }
  SUBCASE("policy mismatch") {
    CHECK_THROWS_AS(topk_certificate(gossip_trace(3, 2, 1, 10), 1e-8, 10), PolicyMismatch);
  }
  SUBCASE("disconnected pair graph is not applicable") {
    SimulationConfig c = two_block_config(2);
    c.subjects = SubjectPolicy::top_k(1);
    const auto cert = topk_certificate(run(c), 1e-8, 10);
    CHECK_FALSE(cert.applicable);
    CHECK_FALSE(cert.diagnostic.empty());
  }
  SUBCASE("too short a run yields k' = 0 with a diagnostic") {
    SimulationConfig c = topk_config(1);
    c.max_steps = 3;
    c.stop_on_convergence = false;
    const auto cert = topk_certificate(run(c), 1e-8, 0);
    CHECK(cert.k_prime == 0);
    CHECK_FALSE(cert.diagnostic.empty());
  }
}

TEST_CASE("conservation_audit") {
  CHECK(conservation_audit(gossip_trace(8, 3, 4, 100'000)) <= 1e-10);
  auto c = two_block_config(1);
  c.pairs = PairSchedule({}, false);
  CHECK(conservation_audit(run(c)) == 0.0);

  SimulationConfig one;
  one.agents = 2;
  one.candidates = 1;
  one.initial = {InitialKind::explicit_profile, OpinionProfile::from_rows({{0.0}, {1.0}}), 0};
  one.pairs = PairDistribution::uniform(2);
  one.max_steps = 1;
  CHECK(conservation_audit(run(one)) == 0.0);
}

TEST_CASE("report emitters") {
  const Trace t = run(two_block_config(3));
  const auto consensus = consensus_report(t.final_profile, 1e-8);
  const auto components = verify_component_consensus(t, 1e-8, 10);

  std::ostringstream csv;
  write_component_csv(csv, components);
  const std::string text = csv.str();
  CHECK(text.starts_with("candidate,component,members,spread,value,status\n"));
  CHECK(text.find("1,1,1 2 3 4 5,") != std::string::npos);
  CHECK(text.find("1,2,6 7 8 9 10,") != std::string::npos);
  CHECK(text.find("FAIL") == std::string::npos);

  std::ostringstream cons;
  write_consensus_csv(cons, consensus);
  CHECK(cons.str().starts_with("candidate,class,members,value,spread\n"));

  std::ostringstream spread;
  write_spread_csv(spread, t);
  CHECK(spread.str().starts_with("step,candidate,spread\n0,1,"));

  std::ostringstream summary;
  write_summary(summary, t, consensus, components, conservation_audit(t), std::nullopt);
  CHECK(summary.str().find("component consensus (min_count 10): PASS") != std::string::npos);
}
