#pragma once

#include <filesystem>
#include <iosfwd>

#include "vote_diffuse/engine.hpp"

namespace vote_diffuse {

// Line-oriented trace text format, 1-based indices:
//
//   vote_diffuse-trace 1
//   [config]
//   key=value            (the config echo, in order)
//   stopped_at=T
//   stop_reason=converged|max_steps|schedule_exhausted
//   [events]
//   t i j |S| s1 s2 ...  (one line per step, t = 0 .. T-1)
//   [snapshot t]         (one block per snapshot, ascending t)
//   x11,x12,...          (m CSV rows of n scores)
//   [end]
//
// Scores are written in shortest round-trip form, so reading a trace back
// reproduces every double bit for bit.
void write_trace(std::ostream& out, const Trace& trace);
Trace read_trace(std::istream& in);

void save_trace(const std::filesystem::path& path, const Trace& trace);
Trace load_trace(const std::filesystem::path& path);

}  // namespace vote_diffuse
