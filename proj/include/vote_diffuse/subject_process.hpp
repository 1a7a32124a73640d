#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "vote_diffuse/opinion.hpp"
#include "vote_diffuse/rng.hpp"

namespace vote_diffuse {

enum class SubjectKind { full, top_k, binomial, hk, scripted };

std::string_view to_string(SubjectKind kind);
// Throws ParameterError for unknown names.
SubjectKind parse_subject_kind(std::string_view name);

/// How the active pair picks the candidates it discusses.
struct SubjectPolicy {
  SubjectKind kind = SubjectKind::full;
  std::size_t k = 1;       // top_k
  double p = 1.0;          // binomial inclusion probability
  double eps = 0.0;        // hk confidence radius (inclusive)
  std::vector<SubjectSet> script;
  bool script_cyclic = false;

  static SubjectPolicy full() { return {}; }
  static SubjectPolicy top_k(std::size_t k);
  static SubjectPolicy binomial(double p);
  static SubjectPolicy hk(double eps);
  static SubjectPolicy scripted(std::vector<SubjectSet> script, bool cyclic = false);

  /// Throws ParameterError naming the violated bound.
  void validate(std::size_t candidates) const;
};

/// All of [n]. For n = 1 this is the classical gossip choice S(t) = {1}.
SubjectSet full_subjects(std::size_t candidates);

/// T_k(X_a) united with T_k(X_b): each agent brings its own top-k list.
SubjectSet topk_subjects(const OpinionProfile& profile, PairEvent pair, std::size_t k);

/// Independent inclusion of each candidate with probability p in (0, 1].
SubjectSet binomial_subjects(std::size_t candidates, double p, Rng& rng);

/// Candidates on which the pair already agrees to within eps, inclusive.
/// With eps = 0 only exactly equal scores qualify.
SubjectSet hk_subjects(const OpinionProfile& profile, PairEvent pair, double eps);

SubjectSet next_scripted_subjects(const SubjectPolicy& policy, std::uint64_t step);

SubjectSet draw_subjects(const SubjectPolicy& policy, std::uint64_t step, const OpinionProfile& profile,
                         PairEvent pair, Rng& rng);

struct SubjectScript {
  std::vector<SubjectSet> steps;
  bool cyclic = false;
};

// One line per step with space-separated 1-based candidates; a blank line is
// the empty set. An optional first line "cyclic" repeats the sequence.
SubjectScript parse_subject_script(std::istream& in);
SubjectScript load_subject_script(const std::filesystem::path& path);
void write_subject_script(std::ostream& out, const SubjectScript& script);

}  // namespace vote_diffuse
