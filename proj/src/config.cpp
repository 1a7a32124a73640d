#include "vote_diffuse/config.hpp"

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include <fstream>
#include <set>

#include "vote_diffuse/errors.hpp"
#include "vote_diffuse/text.hpp"

namespace vote_diffuse {

namespace {

namespace pt = boost::property_tree;

class Section {
public:
  Section(const pt::ptree* tree, std::string name) : tree_(tree), name_(std::move(name)) {}

  std::string field(const std::string& key) const { return name_.empty() ? key : name_ + "." + key; }

  std::optional<std::string> get(const std::string& key) const {
    if (!tree_) return std::nullopt;
    seen_.insert(key);
    const auto child = tree_->get_child_optional(pt::ptree::path_type(key, '\0'));
    if (!child) return std::nullopt;
    return std::string(text::trim(child->data()));
  }

  std::string require(const std::string& key) const {
    auto v = get(key);
    if (!v) throw ConfigError(field(key), "missing required key");
    return *v;
  }

  std::uint64_t u64(const std::string& key, std::optional<std::uint64_t> fallback = std::nullopt) const {
    const auto v = get(key);
    if (!v) {
      if (fallback) return *fallback;
      throw ConfigError(field(key), "missing required key");
    }
    const auto parsed = text::parse_u64(*v);
    if (!parsed) throw ConfigError(field(key), "expected a non-negative integer, got \"" + *v + "\"");
    return *parsed;
  }

  double real(const std::string& key, std::optional<double> fallback = std::nullopt) const {
    const auto v = get(key);
    if (!v) {
      if (fallback) return *fallback;
      throw ConfigError(field(key), "missing required key");
    }
    const auto parsed = text::parse_double(*v);
    if (!parsed) throw ConfigError(field(key), "expected a number, got \"" + *v + "\"");
    return *parsed;
  }

  bool flag(const std::string& key, bool fallback) const {
    const auto v = get(key);
    if (!v) return fallback;
    if (*v == "true" || *v == "1" || *v == "yes") return true;
    if (*v == "false" || *v == "0" || *v == "no") return false;
    throw ConfigError(field(key), "expected true or false, got \"" + *v + "\"");
  }

  // Rejects keys nobody asked for, so typos surface as errors.
  void check_unknown(const std::set<std::string>& sections = {}) const {
    if (!tree_) return;
    for (const auto& [key, child] : *tree_) {
      if (!child.empty() || sections.contains(key)) continue;  // a section, handled by the caller
      if (!seen_.contains(key)) throw ConfigError(field(key), "unknown key");
    }
  }

private:
  const pt::ptree* tree_;
  std::string name_;
  mutable std::set<std::string> seen_;
};

Section section(const pt::ptree& root, const std::string& name) {
  const auto child = root.get_child_optional(pt::ptree::path_type(name, '\0'));
  return Section(child ? &*child : nullptr, name);
}

std::vector<std::uint64_t> indices(const Section& s, const std::string& key, std::string_view list) {
  std::vector<std::uint64_t> out;
  for (auto token : text::split_whitespace(list)) {
    const auto v = text::parse_u64(token);
    if (!v || *v < 1) throw ConfigError(s.field(key), "expected 1-based indices, got \"" + std::string(token) + "\"");
    out.push_back(*v);
  }
  return out;
}

PairEvent parse_pair(const Section& s, const std::string& key, std::string_view spec) {
  const auto idx = indices(s, key, spec);
  if (idx.size() != 2) throw ConfigError(s.field(key), "expected \"i j\", got \"" + std::string(spec) + "\"");
  if (idx[0] == idx[1]) throw ConfigError(s.field(key), "pair needs two distinct agents");
  return PairEvent(static_cast<Agent>(idx[0] - 1), static_cast<Agent>(idx[1] - 1));
}

std::filesystem::path resolve(const std::filesystem::path& base_dir, const std::string& file) {
  std::filesystem::path p(file);
  return p.is_relative() && !base_dir.empty() ? base_dir / p : p;
}

InitialProfileSpec parse_initial(const Section& s, std::size_t m, std::size_t n) {
  InitialProfileSpec spec;
  const std::string kind = s.get("kind").value_or("uniform");
  if (kind == "explicit") {
    spec.kind = InitialKind::explicit_profile;
    const std::string rows = s.require("rows");
    std::vector<std::vector<double>> values;
    for (auto row : text::split(rows, ',')) {
      auto& r = values.emplace_back();
      for (auto cell : text::split_whitespace(row)) {
        const auto v = text::parse_double(cell);
        if (!v) throw ConfigError(s.field("rows"), "bad score \"" + std::string(cell) + "\"");
        r.push_back(*v);
      }
    }
    if (values.size() != m) {
      throw ConfigError(s.field("rows"), "expected " + std::to_string(m) + " rows, got " + std::to_string(values.size()));
    }
    for (const auto& r : values) {
      if (r.size() != n) throw ConfigError(s.field("rows"), "every row needs " + std::to_string(n) + " scores");
    }
    try {
      spec.profile = OpinionProfile::from_rows(values);
    } catch (const Error& e) {
      throw ConfigError(s.field("rows"), e.what());
    }
  } else if (kind == "uniform" || kind == "gaussian") {
    spec.kind = kind == "uniform" ? InitialKind::uniform : InitialKind::gaussian;
    spec.seed = s.u64("seed", 0);
  } else {
    throw ConfigError(s.field("kind"), "expected explicit, uniform or gaussian, got \"" + kind + "\"");
  }
  return spec;
}

PairSource parse_pairs(const Section& s, std::size_t m, const std::filesystem::path& base_dir, ConfigEcho& notes) {
  const std::string kind = s.require("kind");
  notes.emplace_back("pairs.source", kind);
  try {
    if (kind == "uniform") return PairDistribution::uniform(m);
    if (kind == "point_mass") return PairDistribution::point_mass(m, parse_pair(s, "pair", s.require("pair")));
    if (kind == "weights") {
      std::vector<std::pair<PairEvent, double>> weights;
      const std::string list = s.require("weights");
      for (auto entry : text::split(list, ',')) {
        const auto tokens = text::split_whitespace(entry);
        if (tokens.size() != 3) throw ConfigError(s.field("weights"), "expected \"i j w\" triples");
        const PairEvent pair = parse_pair(s, "weights", std::string(tokens[0]) + " " + std::string(tokens[1]));
        const auto w = text::parse_double(tokens[2]);
        if (!w) throw ConfigError(s.field("weights"), "bad weight \"" + std::string(tokens[2]) + "\"");
        weights.emplace_back(pair, *w);
      }
      return PairDistribution::from_pair_weights(m, weights);
    }
    if (kind == "round_robin") return PairSchedule::round_robin(m);
    if (kind == "schedule") {
      std::vector<PairEvent> events;
      bool cyclic = false;
      if (const auto file = s.get("file")) {
        const auto path = resolve(base_dir, *file);
        notes.emplace_back("pairs.file", *file);
        PairSchedule loaded = load_schedule(path);
        events = loaded.events();
        cyclic = loaded.cyclic();
      } else {
        const std::string list = s.require("events");
        for (auto entry : text::split(list, ',')) events.push_back(parse_pair(s, "events", entry));
      }
      cyclic = s.flag("cyclic", cyclic);
      return PairSchedule(std::move(events), cyclic);
    }
  } catch (const ConfigError&) {
    throw;
  } catch (const ParseError& e) {
    throw ConfigError(s.field("file"), e.what());
  } catch (const IoError&) {
    throw;
  } catch (const Error& e) {
    throw ConfigError(s.field(kind == "point_mass" ? "pair" : kind == "weights" ? "weights" : "kind"), e.what());
  }
  throw ConfigError(s.field("kind"),
                    "expected uniform, point_mass, weights, round_robin or schedule, got \"" + kind + "\"");
}

SubjectPolicy parse_subjects(const Section& s, const std::filesystem::path& base_dir, ConfigEcho& notes) {
  const std::string kind_name = s.get("kind").value_or("full");
  SubjectKind kind;
  try {
    kind = parse_subject_kind(kind_name);
  } catch (const Error& e) {
    throw ConfigError(s.field("kind"), e.what());
  }
  switch (kind) {
    case SubjectKind::full: return SubjectPolicy::full();
    case SubjectKind::top_k: return SubjectPolicy::top_k(static_cast<std::size_t>(s.u64("k")));
    case SubjectKind::binomial: return SubjectPolicy::binomial(s.real("p"));
    case SubjectKind::hk: return SubjectPolicy::hk(s.real("eps"));
    case SubjectKind::scripted: break;
  }
  SubjectScript script;
  if (const auto file = s.get("file")) {
    notes.emplace_back("subjects.file", *file);
    try {
      script = load_subject_script(resolve(base_dir, *file));
    } catch (const ParseError& e) {
      throw ConfigError(s.field("file"), e.what());
    }
  } else {
    const std::string list = s.require("steps");
    for (auto entry : text::split(list, ',')) {
      std::vector<Candidate> members;
      for (auto j : indices(s, "steps", entry)) members.push_back(static_cast<Candidate>(j - 1));
      script.steps.emplace_back(std::move(members));
    }
  }
  script.cyclic = s.flag("cyclic", script.cyclic);
  return SubjectPolicy::scripted(std::move(script.steps), script.cyclic);
}

}  // namespace

SimulationConfig parse_config(std::istream& in, const std::filesystem::path& base_dir) {
  pt::ptree root;
  try {
    pt::read_ini(in, root);
  } catch (const pt::ini_parser_error& e) {
    throw ConfigError("", "line " + std::to_string(e.line()) + ": " + e.message());
  }

  static const std::set<std::string> known_sections{"initial", "pairs", "subjects", "convergence"};
  for (const auto& [key, child] : root) {
    if (!child.empty() && !known_sections.contains(key)) throw ConfigError(key, "unknown section");
  }

  const Section top(&root, "");
  SimulationConfig config;
  config.agents = static_cast<std::size_t>(top.u64("m"));
  config.candidates = static_cast<std::size_t>(top.u64("n"));
  if (config.agents < 2) throw ConfigError("m", "m must be >= 2");
  if (config.candidates < 1) throw ConfigError("n", "n must be >= 1");
  config.seed = top.u64("seed", 0);
  config.max_steps = top.u64("max_steps");
  config.snapshot_every = top.u64("snapshot_every", 1000);

  const Section initial = section(root, "initial");
  const Section pairs = section(root, "pairs");
  const Section subjects = section(root, "subjects");
  const Section convergence = section(root, "convergence");

  config.initial = parse_initial(initial, config.agents, config.candidates);
  config.pairs = parse_pairs(pairs, config.agents, base_dir, config.annotations);
  config.subjects = parse_subjects(subjects, base_dir, config.annotations);
  config.convergence_tol = convergence.real("tol", 1e-12);
  config.convergence_window = convergence.u64("window", 1000);
  config.stop_on_convergence = convergence.flag("stop", true);

  top.check_unknown(known_sections);
  for (const Section* s : {&initial, &pairs, &subjects, &convergence}) s->check_unknown();
  config.validate();
  return config;
}

SimulationConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read config " + path.string());
  return parse_config(in, path.parent_path());
}

}  // namespace vote_diffuse
