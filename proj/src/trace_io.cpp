#include "vote_diffuse/trace_io.hpp"

#include <fstream>
#include <istream>
#include <ostream>
#include <string>

#include "vote_diffuse/errors.hpp"
#include "vote_diffuse/text.hpp"

namespace vote_diffuse {

namespace {

constexpr std::string_view kMagic = "vote_diffuse-trace 1";

void write_profile(std::ostream& out, const OpinionProfile& profile) {
  for (std::size_t i = 0; i < profile.agents(); ++i) {
    const auto row = profile.row(i);
    for (std::size_t j = 0; j < row.size(); ++j) {
      if (j) out << ',';
      out << text::format_double(row[j]);
    }
    out << '\n';
  }
}

class LineReader {
public:
  explicit LineReader(std::istream& in) : in_(in) {}

  bool next(std::string& line) {
    if (!std::getline(in_, line)) return false;
    ++line_no_;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    return true;
  }

  std::string expect(std::string_view what) {
    std::string line;
    if (!next(line)) fail("unexpected end of trace, expected " + std::string(what));
    return line;
  }

  [[noreturn]] void fail(const std::string& message) const { throw ParseError(line_no_, message); }

  std::size_t line_no() const noexcept { return line_no_; }

private:
  std::istream& in_;
  std::size_t line_no_ = 0;
};

std::uint64_t need_u64(LineReader& reader, std::string_view token, std::string_view what) {
  const auto v = text::parse_u64(token);
  if (!v) reader.fail("bad " + std::string(what) + " \"" + std::string(token) + "\"");
  return *v;
}

OpinionProfile read_profile(LineReader& reader, std::size_t m, std::size_t n) {
  std::vector<double> scores;
  scores.reserve(m * n);
  for (std::size_t i = 0; i < m; ++i) {
    const std::string line = reader.expect("snapshot row");
    const auto cells = text::split(line, ',');
    if (cells.size() != n) {
      reader.fail("snapshot row has " + std::to_string(cells.size()) + " values, expected " + std::to_string(n));
    }
    for (auto cell : cells) {
      const auto v = text::parse_double(cell);
      if (!v) reader.fail("bad score \"" + std::string(cell) + "\"");
      scores.push_back(*v);
    }
  }
  try {
    return OpinionProfile(m, n, std::move(scores));
  } catch (const Error& e) {
    reader.fail(e.what());
  }
}

}  // namespace

void write_trace(std::ostream& out, const Trace& trace) {
  out << kMagic << "\n[config]\n";
  for (const auto& [k, v] : trace.config) out << k << '=' << v << '\n';
  out << "stopped_at=" << trace.stopped_at << '\n';
  out << "stop_reason=" << to_string(trace.stop_reason) << '\n';
  out << "[events]\n";
  for (std::size_t t = 0; t < trace.events.size(); ++t) {
    const PairEvent pair = trace.events.pair(t);
    const auto subjects = trace.events.subjects(t);
    out << t << ' ' << pair.a() + 1 << ' ' << pair.b() + 1 << ' ' << subjects.size();
    for (Candidate j : subjects) out << ' ' << j + 1;
    out << '\n';
  }
  for (const auto& [step, profile] : trace.snapshots) {
    out << "[snapshot " << step << "]\n";
    write_profile(out, profile);
  }
  out << "[end]\n";
}

Trace read_trace(std::istream& in) {
  LineReader reader(in);
  if (reader.expect("trace header") != kMagic) reader.fail("not a vote_diffuse trace (bad magic line)");
  if (reader.expect("[config]") != "[config]") reader.fail("expected [config]");

  ConfigEcho config;
  std::optional<std::uint64_t> stopped_at;
  std::optional<StopReason> stop_reason;
  std::string line;
  for (;;) {
    line = reader.expect("[events]");
    if (line == "[events]") break;
    const auto eq = line.find('=');
    if (eq == std::string::npos || eq == 0) reader.fail("expected key=value, got \"" + line + "\"");
    std::string key = line.substr(0, eq);
    std::string value = line.substr(eq + 1);
    if (key == "stopped_at") {
      stopped_at = need_u64(reader, value, "stopped_at");
    } else if (key == "stop_reason") {
      try {
        stop_reason = parse_stop_reason(value);
      } catch (const Error& e) {
        reader.fail(e.what());
      }
    } else {
      config.emplace_back(std::move(key), std::move(value));
    }
  }
  if (!stopped_at || !stop_reason) reader.fail("header lacks stopped_at or stop_reason");

  auto header_dim = [&](std::string_view key) -> std::size_t {
    for (const auto& [k, v] : config) {
      if (k == key) {
        const auto d = text::parse_u64(v);
        if (!d) reader.fail("bad dimension " + std::string(key) + "=" + v);
        return static_cast<std::size_t>(*d);
      }
    }
    reader.fail("header lacks " + std::string(key));
  };
  const std::size_t m = header_dim("m");
  const std::size_t n = header_dim("n");

  EventLog events;
  std::map<std::uint64_t, OpinionProfile> snapshots;
  bool ended = false;
  std::vector<Candidate> subjects;
  while (reader.next(line)) {
    if (line.starts_with("[snapshot ") && line.ends_with("]")) {
      const std::uint64_t step = need_u64(reader, std::string_view(line).substr(10, line.size() - 11), "snapshot step");
      if (!snapshots.empty() && step <= snapshots.rbegin()->first) reader.fail("snapshot steps must ascend");
      snapshots.emplace(step, read_profile(reader, m, n));
      continue;
    }
    if (line == "[end]") {
      ended = true;
      break;
    }
    if (!snapshots.empty()) reader.fail("event line after snapshots");
    const auto fields = text::split_whitespace(line);
    if (fields.size() < 4) reader.fail("expected \"t i j |S| s1 ...\", got \"" + line + "\"");
    const std::uint64_t t = need_u64(reader, fields[0], "step");
    if (t != events.size()) reader.fail("event step " + std::to_string(t) + " out of sequence");
    const std::uint64_t i = need_u64(reader, fields[1], "agent");
    const std::uint64_t j = need_u64(reader, fields[2], "agent");
    if (i < 1 || j < 1 || i > m || j > m) reader.fail("agent outside [1, " + std::to_string(m) + "]");
    if (i == j) reader.fail("pair needs two distinct agents");
    const std::uint64_t count = need_u64(reader, fields[3], "subject count");
    if (fields.size() != 4 + count) reader.fail("subject count does not match the listed subjects");
    subjects.clear();
    for (std::size_t s = 0; s < count; ++s) {
      const std::uint64_t c = need_u64(reader, fields[4 + s], "candidate");
      if (c < 1 || c > n) reader.fail("candidate outside [1, " + std::to_string(n) + "]");
      if (!subjects.empty() && c - 1 <= subjects.back()) reader.fail("subjects must be strictly ascending");
      subjects.push_back(static_cast<Candidate>(c - 1));
    }
    events.push(PairEvent(static_cast<Agent>(i - 1), static_cast<Agent>(j - 1)), subjects);
  }
  if (!ended) reader.fail("trace truncated, missing [end]");
  if (events.size() != *stopped_at) reader.fail("event count does not match stopped_at");
  if (!snapshots.contains(0)) reader.fail("missing snapshot 0");
  if (!snapshots.contains(*stopped_at)) reader.fail("missing final snapshot");

  OpinionProfile initial = snapshots.at(0);
  OpinionProfile final_profile = snapshots.at(*stopped_at);
  return Trace{std::move(config),        std::move(initial), std::move(events), std::move(snapshots),
               std::move(final_profile), *stopped_at,        *stop_reason};
}

void save_trace(const std::filesystem::path& path, const Trace& trace) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write trace " + path.string());
  write_trace(out, trace);
  out.flush();
  if (!out) throw IoError("error while writing trace " + path.string());
}

Trace load_trace(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read trace " + path.string());
  try {
    return read_trace(in);
  } catch (const ParseError& e) {
    throw e.in_source(path.string());
  }
}

}  // namespace vote_diffuse
