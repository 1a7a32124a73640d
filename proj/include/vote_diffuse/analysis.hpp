#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "vote_diffuse/engine.hpp"
#include "vote_diffuse/graph.hpp"
#include "vote_diffuse/opinion.hpp"

namespace vote_diffuse {

inline constexpr std::uint64_t kDefaultMinCount = 10;

/// Raw co-discussion counts c_j({a,b}) = #{t : pair {a,b} active and j in S(t)},
/// one graph per candidate, from a single pass over the event log.
std::vector<AgentGraph> discussion_counts(const Trace& trace);

/// Finite-horizon stand-in for the graph of pairs that discuss `candidate`
/// infinitely often: edges with count >= min_count. A pair that never
/// discussed the candidate is never an edge, so min_count = 0 acts as 1.
AgentGraph discussion_graph(const Trace& trace, Candidate candidate, std::uint64_t min_count);

/// Pairs that were active at least max(min_count, 1) times, whatever the subjects.
AgentGraph pair_occurrence_graph(const Trace& trace, std::uint64_t min_count);

struct ConsensusClass {
  std::vector<Agent> members;
  double value = 0.0;   // class mean
  double spread = 0.0;  // max - min inside the class
};

struct CandidateConsensus {
  Candidate candidate = 0;
  std::vector<ConsensusClass> classes;

  bool society_wide() const noexcept { return classes.size() == 1; }
};

struct ConsensusReport {
  double tol = 0.0;
  std::vector<CandidateConsensus> candidates;
};

/// Per candidate, single-linkage clustering of the agents' scores at `tol`:
/// two agents share a class when a chain of scores joins them with every
/// link <= tol. Chains can make a class wider than tol.
ConsensusReport consensus_report(const OpinionProfile& final_profile, double tol);

struct ComponentCheck {
  Candidate candidate = 0;
  std::vector<Agent> component;
  double spread = 0.0;
  double value = 0.0;
  bool pass = true;
};

struct ComponentConsensusReport {
  double tol = 0.0;
  std::uint64_t min_count = 0;
  std::vector<ComponentCheck> checks;

  bool pass() const;
  bool candidate_pass(Candidate candidate) const;
  std::vector<ComponentCheck> failures() const;
};

/// Checks agents joined in a candidate's discussion graph agree on it: each
/// component's spread in the final profile must be <= tol. Only this
/// direction is checked; agreement without discussion is allowed.
ComponentConsensusReport verify_component_consensus(const Trace& trace, double tol, std::uint64_t min_count);

struct TopKCertificate {
  bool applicable = false;  // false when the trace's pair graph is not connected
  std::size_t k_prime = 0;
  std::optional<double> alpha_hat;
  SubjectSet consensual_candidates;
  std::vector<Candidate> aggregate_ranking;
  AggregateProfile initial_aggregate;
  std::string diagnostic;
};

/// Depth k' of the initial Borda ranking on which the whole society agrees at
/// the end of a top-k selective gossip trace.
///
/// consensual_candidates are the candidates with a single society-wide class
/// at `tol`; k' is the largest k' with T_k'(Xbar(0)) inside that set. alpha_hat
/// is the smallest common final value among consensual candidates. k' = 0
/// means even the top aggregate candidate has not settled, which is a
/// finite-horizon outcome and not a counterexample. When the pair graph
/// (pairs active >= min_count times) is disconnected the certificate is
/// marked not applicable.
///
/// Throws PolicyMismatch unless the trace was produced by the top_k policy.
TopKCertificate topk_certificate(const Trace& trace, double tol, std::uint64_t min_count);

/// max_j |mean_j(final) - mean_j(initial)|.
double conservation_audit(const Trace& trace);

/// Largest within-column spread of `profile`, per candidate.
std::vector<double> column_spreads(const OpinionProfile& profile);

// CSV and text emitters. Indices are 1-based; members are joined by ' '.
void write_consensus_csv(std::ostream& out, const ConsensusReport& report);
void write_component_csv(std::ostream& out, const ComponentConsensusReport& report);
void write_spread_csv(std::ostream& out, const Trace& trace);
void write_summary(std::ostream& out, const Trace& trace, const ConsensusReport& consensus,
                   const ComponentConsensusReport& components, double drift,
                   const std::optional<TopKCertificate>& certificate);

}  // namespace vote_diffuse
