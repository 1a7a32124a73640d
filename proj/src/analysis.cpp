#include "vote_diffuse/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <ostream>

#include "vote_diffuse/errors.hpp"
#include "vote_diffuse/text.hpp"

namespace vote_diffuse {

namespace {

std::string join_members(const std::vector<Agent>& members) {
  std::string out;
  for (Agent i : members) {
    if (!out.empty()) out += ' ';
    out += std::to_string(i + 1);
  }
  return out;
}

void check_candidate(const Trace& trace, Candidate candidate) {
  if (candidate >= trace.initial.candidates()) {
    throw DimensionError("candidate " + std::to_string(candidate + 1) + " outside [1, " +
                         std::to_string(trace.initial.candidates()) + "]");
  }
}

}  // namespace

std::vector<AgentGraph> discussion_counts(const Trace& trace) {
  const std::size_t m = trace.initial.agents();
  const std::size_t n = trace.initial.candidates();
  std::vector<std::uint64_t> dense(n * m * m, 0);
  for (std::size_t t = 0; t < trace.events.size(); ++t) {
    const PairEvent pair = trace.events.pair(t);
    for (Candidate j : trace.events.subjects(t)) ++dense[(j * m + pair.a()) * m + pair.b()];
  }
  std::vector<AgentGraph> out(n, AgentGraph(m));
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t a = 0; a < m; ++a) {
      for (std::size_t b = a + 1; b < m; ++b) {
        out[j].add(PairEvent(Agent(a), Agent(b)), dense[(j * m + a) * m + b]);
      }
    }
  }
  return out;
}

AgentGraph discussion_graph(const Trace& trace, Candidate candidate, std::uint64_t min_count) {
  check_candidate(trace, candidate);
  AgentGraph counts(trace.initial.agents());
  for (std::size_t t = 0; t < trace.events.size(); ++t) {
    const auto subjects = trace.events.subjects(t);
    if (std::binary_search(subjects.begin(), subjects.end(), candidate)) counts.add(trace.events.pair(t));
  }
  return counts.thresholded(std::max<std::uint64_t>(min_count, 1));
}

AgentGraph pair_occurrence_graph(const Trace& trace, std::uint64_t min_count) {
  AgentGraph counts(trace.initial.agents());
  for (std::size_t t = 0; t < trace.events.size(); ++t) counts.add(trace.events.pair(t));
  return counts.thresholded(std::max<std::uint64_t>(min_count, 1));
}

ConsensusReport consensus_report(const OpinionProfile& final_profile, double tol) {
  if (!(tol > 0.0)) throw ParameterError("consensus tolerance must be > 0");
  const std::size_t m = final_profile.agents();
  ConsensusReport report{tol, {}};
  for (std::size_t j = 0; j < final_profile.candidates(); ++j) {
    std::vector<Agent> order(m);
    std::iota(order.begin(), order.end(), Agent{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](Agent l, Agent r) { return final_profile(l, j) < final_profile(r, j); });

    std::vector<std::vector<Agent>> groups{{order.front()}};
    for (std::size_t r = 1; r < m; ++r) {
      if (final_profile(order[r], j) - final_profile(order[r - 1], j) > tol) groups.emplace_back();
      groups.back().push_back(order[r]);
    }

    CandidateConsensus entry{static_cast<Candidate>(j), {}};
    for (auto& members : groups) {
      std::sort(members.begin(), members.end());
      ConsensusClass cls;
      double lo = INFINITY;
      double hi = -INFINITY;
      double sum = 0.0;
      for (Agent i : members) {
        const double x = final_profile(i, j);
        sum += x;
        lo = std::min(lo, x);
        hi = std::max(hi, x);
      }
      cls.members = std::move(members);
      cls.value = sum / static_cast<double>(cls.members.size());
      cls.spread = hi - lo;
      entry.classes.push_back(std::move(cls));
    }
    std::sort(entry.classes.begin(), entry.classes.end(),
              [](const ConsensusClass& l, const ConsensusClass& r) { return l.members.front() < r.members.front(); });
    report.candidates.push_back(std::move(entry));
  }
  return report;
}

bool ComponentConsensusReport::pass() const {
  return std::all_of(checks.begin(), checks.end(), [](const ComponentCheck& c) { return c.pass; });
}

bool ComponentConsensusReport::candidate_pass(Candidate candidate) const {
  return std::all_of(checks.begin(), checks.end(),
                     [&](const ComponentCheck& c) { return c.candidate != candidate || c.pass; });
}

std::vector<ComponentCheck> ComponentConsensusReport::failures() const {
  std::vector<ComponentCheck> out;
  std::copy_if(checks.begin(), checks.end(), std::back_inserter(out), [](const ComponentCheck& c) { return !c.pass; });
  return out;
}

ComponentConsensusReport verify_component_consensus(const Trace& trace, double tol, std::uint64_t min_count) {
  const OpinionProfile& final_profile = trace.final_profile;
  const auto counts = discussion_counts(trace);
  ComponentConsensusReport report{tol, min_count, {}};
  for (std::size_t j = 0; j < counts.size(); ++j) {
    const auto components = connected_components(counts[j].thresholded(std::max<std::uint64_t>(min_count, 1)));
    for (const auto& component : components) {
      double lo = INFINITY;
      double hi = -INFINITY;
      double sum = 0.0;
      for (Agent i : component) {
        const double x = final_profile(i, j);
        lo = std::min(lo, x);
        hi = std::max(hi, x);
        sum += x;
      }
      const double spread = hi - lo;
      report.checks.push_back(ComponentCheck{static_cast<Candidate>(j), component, spread,
                                             sum / static_cast<double>(component.size()), spread <= tol});
    }
  }
  return report;
}

TopKCertificate topk_certificate(const Trace& trace, double tol, std::uint64_t min_count) {
  const auto kind = trace.echo("subjects.kind");
  if (!kind || *kind != to_string(SubjectKind::top_k)) {
    throw PolicyMismatch("top-k certificate needs a top_k trace, got subjects.kind=" + kind.value_or("<missing>"));
  }

  TopKCertificate cert;
  cert.initial_aggregate = column_average(trace.initial);
  cert.aggregate_ranking = borda_ranking(cert.initial_aggregate);
  cert.applicable = is_connected(pair_occurrence_graph(trace, min_count));

  const ConsensusReport report = consensus_report(trace.final_profile, tol);
  std::vector<Candidate> consensual;
  for (const auto& entry : report.candidates) {
    if (!entry.society_wide()) continue;
    consensual.push_back(entry.candidate);
    const double value = entry.classes.front().value;
    cert.alpha_hat = cert.alpha_hat ? std::min(*cert.alpha_hat, value) : value;
  }
  cert.consensual_candidates = SubjectSet(std::move(consensual));

  const std::size_t n = cert.initial_aggregate.averages.size();
  for (std::size_t k = 1; k <= n; ++k) {
    const SubjectSet top = top_k_set(cert.initial_aggregate.averages, k);
    const bool covered = std::all_of(top.begin(), top.end(),
                                     [&](Candidate j) { return cert.consensual_candidates.contains(j); });
    if (!covered) break;
    cert.k_prime = k;
  }

  if (!cert.applicable) {
    cert.diagnostic = "pair graph (pairs active >= " + std::to_string(std::max<std::uint64_t>(min_count, 1)) +
                      " times) is disconnected; certificate not applicable";
  } else if (cert.k_prime == 0) {
    cert.diagnostic = "top aggregate candidate " + std::to_string(cert.aggregate_ranking.front() + 1) +
                      " has no society-wide consensus at tol " + text::format_double(tol) +
                      "; run longer (finite-horizon outcome)";
  }
  return cert;
}

double conservation_audit(const Trace& trace) {
  const auto before = column_average(trace.initial).averages;
  const auto after = column_average(trace.final_profile).averages;
  double worst = 0.0;
  for (std::size_t j = 0; j < before.size(); ++j) worst = std::max(worst, std::abs(after[j] - before[j]));
  return worst;
}

std::vector<double> column_spreads(const OpinionProfile& profile) {
  std::vector<double> out(profile.candidates());
  for (std::size_t j = 0; j < profile.candidates(); ++j) {
    double lo = INFINITY;
    double hi = -INFINITY;
    for (std::size_t i = 0; i < profile.agents(); ++i) {
      lo = std::min(lo, profile(i, j));
      hi = std::max(hi, profile(i, j));
    }
    out[j] = hi - lo;
  }
  return out;
}

void write_consensus_csv(std::ostream& out, const ConsensusReport& report) {
  out << "candidate,class,members,value,spread\n";
  for (const auto& entry : report.candidates) {
    for (std::size_t c = 0; c < entry.classes.size(); ++c) {
      const auto& cls = entry.classes[c];
      out << entry.candidate + 1 << ',' << c + 1 << ',' << join_members(cls.members) << ','
          << text::format_double(cls.value) << ',' << text::format_double(cls.spread) << '\n';
    }
  }
}

void write_component_csv(std::ostream& out, const ComponentConsensusReport& report) {
  out << "candidate,component,members,spread,value,status\n";
  std::size_t index = 0;
  Candidate current = 0;
  for (const auto& check : report.checks) {
    if (check.candidate != current) {
      current = check.candidate;
      index = 0;
    }
    out << check.candidate + 1 << ',' << ++index << ',' << join_members(check.component) << ','
        << text::format_double(check.spread) << ',' << text::format_double(check.value) << ','
        << (check.pass ? "PASS" : "FAIL") << '\n';
  }
}

void write_spread_csv(std::ostream& out, const Trace& trace) {
  out << "step,candidate,spread\n";
  for (const auto& [step, profile] : trace.snapshots) {
    const auto spreads = column_spreads(profile);
    for (std::size_t j = 0; j < spreads.size(); ++j) {
      out << step << ',' << j + 1 << ',' << text::format_double(spreads[j]) << '\n';
    }
  }
}

void write_summary(std::ostream& out, const Trace& trace, const ConsensusReport& consensus,
                   const ComponentConsensusReport& components, double drift,
                   const std::optional<TopKCertificate>& certificate) {
  out << "steps: " << trace.stopped_at << " (" << to_string(trace.stop_reason) << ")\n";
  out << "conservation drift: " << text::format_double(drift) << '\n';
  out << "consensus classes at tol " << text::format_double(consensus.tol) << ":\n";
  for (const auto& entry : consensus.candidates) {
    out << "  candidate " << entry.candidate + 1 << ": " << entry.classes.size() << " class"
        << (entry.classes.size() == 1 ? "" : "es");
    for (const auto& cls : entry.classes) out << " {" << join_members(cls.members) << "}=" << text::format_double(cls.value);
    out << '\n';
  }
  out << "component consensus (min_count " << components.min_count << "): " << (components.pass() ? "PASS" : "FAIL")
      << '\n';
  for (const auto& f : components.failures()) {
    out << "  candidate " << f.candidate + 1 << " component {" << join_members(f.component)
        << "} spread " << text::format_double(f.spread) << '\n';
  }
  if (certificate) {
    out << "top-k certificate: " << (certificate->applicable ? "applicable" : "not applicable")
        << ", k' = " << certificate->k_prime;
    if (certificate->alpha_hat) out << ", alpha_hat = " << text::format_double(*certificate->alpha_hat);
    out << '\n';
    out << "  aggregate ranking:";
    for (Candidate j : certificate->aggregate_ranking) out << ' ' << j + 1;
    out << "\n  consensual candidates:";
    for (Candidate j : certificate->consensual_candidates) out << ' ' << j + 1;
    out << '\n';
    if (!certificate->diagnostic.empty()) out << "  note: " << certificate->diagnostic << '\n';
  }
}

}  // namespace vote_diffuse
