#pragma once

#include <filesystem>
#include <iosfwd>

#include "vote_diffuse/engine.hpp"

namespace vote_diffuse {

// Run configuration file: flat key=value lines plus sectioned policy blocks.
// '#' and ';' start comments. Indices are 1-based.
//
//   m = 4
//   n = 1
//   seed = 7
//   max_steps = 100000
//   snapshot_every = 1000
//
//   [initial]          kind = explicit | uniform | gaussian
//   rows = 0 1, 2 3    (explicit: rows separated by ',')
//   seed = 42          (uniform / gaussian)
//
//   [pairs]            kind = uniform | point_mass | weights | round_robin | schedule
//   pair = 1 2         (point_mass)
//   weights = 1 2 0.5, 2 3 0.5   (weights: "i j w" triples, normalized)
//   events = 1 2, 2 3  (schedule, inline) or file = path (schedule file)
//   cyclic = true      (schedule)
//
//   [subjects]         kind = full | top_k | binomial | hk | scripted
//   k = 2 / p = 0.5 / eps = 0.1
//   steps = 1 2, , 3   (scripted, inline; empty entry = empty set) or file = path
//   cyclic = false     (scripted)
//
//   [convergence]
//   tol = 1e-12
//   window = 1000
//   stop = true
//
// Relative file paths resolve against `base_dir`. Throws ConfigError naming
// the offending field.
SimulationConfig parse_config(std::istream& in, const std::filesystem::path& base_dir = {});
SimulationConfig load_config(const std::filesystem::path& path);

}  // namespace vote_diffuse
