#include "vote_diffuse/subject_process.hpp"

#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "vote_diffuse/errors.hpp"

namespace vote_diffuse {

std::string_view to_string(SubjectKind kind) {
  switch (kind) {
    case SubjectKind::full: return "full";
    case SubjectKind::top_k: return "top_k";
    case SubjectKind::binomial: return "binomial";
    case SubjectKind::hk: return "hk";
    case SubjectKind::scripted: return "scripted";
  }
  return "unknown";
}

SubjectKind parse_subject_kind(std::string_view name) {
  for (SubjectKind kind : {SubjectKind::full, SubjectKind::top_k, SubjectKind::binomial, SubjectKind::hk,
                           SubjectKind::scripted}) {
    if (to_string(kind) == name) return kind;
  }
  throw ParameterError("unknown subject policy \"" + std::string(name) +
                       "\" (expected full, top_k, binomial, hk or scripted)");
}

SubjectPolicy SubjectPolicy::top_k(std::size_t k) {
  SubjectPolicy policy;
  policy.kind = SubjectKind::top_k;
  policy.k = k;
  return policy;
}

SubjectPolicy SubjectPolicy::binomial(double p) {
  SubjectPolicy policy;
  policy.kind = SubjectKind::binomial;
  policy.p = p;
  return policy;
}

SubjectPolicy SubjectPolicy::hk(double eps) {
  SubjectPolicy policy;
  policy.kind = SubjectKind::hk;
  policy.eps = eps;
  return policy;
}

SubjectPolicy SubjectPolicy::scripted(std::vector<SubjectSet> script, bool cyclic) {
  SubjectPolicy policy;
  policy.kind = SubjectKind::scripted;
  policy.script = std::move(script);
  policy.script_cyclic = cyclic;
  return policy;
}

void SubjectPolicy::validate(std::size_t candidates) const {
  switch (kind) {
    case SubjectKind::full: break;
    case SubjectKind::top_k:
      if (k < 1 || k > candidates) throw ParameterError("k must be in [1, " + std::to_string(candidates) + "]");
      break;
    case SubjectKind::binomial:
      if (!(p > 0.0 && p <= 1.0)) throw ParameterError("p must be in (0,1]");
      break;
    case SubjectKind::hk:
      if (!(eps >= 0.0) || !std::isfinite(eps)) throw ParameterError("eps must be finite and >= 0");
      break;
    case SubjectKind::scripted:
      if (script_cyclic && script.empty()) throw ParameterError("cyclic subject script needs period >= 1");
      for (std::size_t t = 0; t < script.size(); ++t) {
        for (Candidate j : script[t]) {
          if (j >= candidates) {
            throw DimensionError("subject script step " + std::to_string(t) + " names candidate " +
                                 std::to_string(j + 1) + " but n = " + std::to_string(candidates));
          }
        }
      }
      break;
  }
}

SubjectSet full_subjects(std::size_t candidates) {
  if (candidates < 1) throw ParameterError("need at least one candidate");
  return SubjectSet::all(candidates);
}

SubjectSet topk_subjects(const OpinionProfile& profile, PairEvent pair, std::size_t k) {
  if (pair.b() >= profile.agents()) throw DimensionError("pair outside agent range");
  return top_k_set(profile.row(pair.a()), k).united(top_k_set(profile.row(pair.b()), k));
}

SubjectSet binomial_subjects(std::size_t candidates, double p, Rng& rng) {
  if (!(p > 0.0 && p <= 1.0)) throw ParameterError("p must be in (0,1]");
  std::vector<Candidate> members;
  for (std::size_t j = 0; j < candidates; ++j) {
    if (rng.bernoulli(p)) members.push_back(static_cast<Candidate>(j));
  }
  return SubjectSet(std::move(members));
}

SubjectSet hk_subjects(const OpinionProfile& profile, PairEvent pair, double eps) {
  if (pair.b() >= profile.agents()) throw DimensionError("pair outside agent range");
  const auto a = profile.row(pair.a());
  const auto b = profile.row(pair.b());
  std::vector<Candidate> members;
  for (std::size_t j = 0; j < a.size(); ++j) {
    if (std::abs(a[j] - b[j]) <= eps) members.push_back(static_cast<Candidate>(j));
  }
  return SubjectSet(std::move(members));
}

SubjectSet next_scripted_subjects(const SubjectPolicy& policy, std::uint64_t step) {
  if (policy.script_cyclic) return policy.script[step % policy.script.size()];
  if (step >= policy.script.size()) {
    throw ScheduleExhausted("finite subject script of length " + std::to_string(policy.script.size()) +
                            " has no entry for step " + std::to_string(step));
  }
  return policy.script[step];
}

SubjectSet draw_subjects(const SubjectPolicy& policy, std::uint64_t step, const OpinionProfile& profile,
                         PairEvent pair, Rng& rng) {
  switch (policy.kind) {
    case SubjectKind::full: return full_subjects(profile.candidates());
    case SubjectKind::top_k: return topk_subjects(profile, pair, policy.k);
    case SubjectKind::binomial: return binomial_subjects(profile.candidates(), policy.p, rng);
    case SubjectKind::hk: return hk_subjects(profile, pair, policy.eps);
    case SubjectKind::scripted: return next_scripted_subjects(policy, step);
  }
  throw ParameterError("unknown subject policy");
}

SubjectScript parse_subject_script(std::istream& in) {
  SubjectScript script;
  std::string raw;
  std::size_t line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    if (!raw.empty() && raw.back() == '\r') raw.pop_back();
    if (line_no == 1 && raw == "cyclic") {
      script.cyclic = true;
      continue;
    }
    std::istringstream fields(raw);
    std::vector<Candidate> members;
    std::string token;
    while (fields >> token) {
      long long value = 0;
      std::size_t used = 0;
      try {
        value = std::stoll(token, &used);
      } catch (const std::exception&) {
        throw ParseError(line_no, "expected candidate index, got \"" + token + "\"");
      }
      if (used != token.size()) throw ParseError(line_no, "expected candidate index, got \"" + token + "\"");
      if (value < 1) throw ParseError(line_no, "candidate indices are 1-based");
      members.push_back(static_cast<Candidate>(value - 1));
    }
    script.steps.emplace_back(std::move(members));
  }
  if (script.cyclic && script.steps.empty()) throw ParseError(0, "cyclic subject script has no steps");
  return script;
}

SubjectScript load_subject_script(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read subject script " + path.string());
  try {
    return parse_subject_script(in);
  } catch (const ParseError& e) {
    throw e.in_source(path.string());
  }
}

void write_subject_script(std::ostream& out, const SubjectScript& script) {
  if (script.cyclic) out << "cyclic\n";
  for (const SubjectSet& s : script.steps) {
    bool first = true;
    for (Candidate j : s) {
      out << (first ? "" : " ") << j + 1;
      first = false;
    }
    out << '\n';
  }
}

}  // namespace vote_diffuse
