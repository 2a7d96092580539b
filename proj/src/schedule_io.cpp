#include <charconv>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>

#include <fmt/format.h>

#include "uro/schedule.hpp"
#include "uro/text.hpp"

namespace uro {

namespace {

constexpr std::string_view kColumns = "slice_pos,src_tor,egress_port,dst_tor";

}  // namespace

Schedule load_schedule(std::istream& in) {
  std::map<std::string, std::int64_t> header;
  std::vector<CircuitRecord> recs;
  bool in_body = false;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    auto view = text::trim(line);
    if (view.empty() || view.front() == '#') continue;
    if (!in_body) {
      if (view == kColumns) {
        in_body = true;
        continue;
      }
      auto eq = view.find('=');
      if (eq == std::string_view::npos)
        throw ParseError(fmt::format("expected key=value, got '{}'", view), lineno);
      std::string key(text::trim(view.substr(0, eq)));
      if (key != "n" && key != "d" && key != "S" && key != "slice_ns" &&
          key != "guard_ns")
        throw ParseError(fmt::format("unknown header key '{}'", key), lineno);
      if (header.count(key))
        throw ParseError(fmt::format("duplicate header key '{}'", key), lineno);
      header[key] = text::parse_int(text::trim(view.substr(eq + 1)), key, lineno);
      continue;
    }
    auto fields = text::split(view, ',');
    if (fields.size() != 4)
      throw ParseError(fmt::format("expected 4 fields, got {}", fields.size()),
                       lineno);
    CircuitRecord r;
    r.slice_pos = static_cast<int>(text::parse_int(fields[0], "slice_pos", lineno));
    r.src = static_cast<Tor>(text::parse_int(fields[1], "src_tor", lineno));
    r.port = static_cast<Port>(text::parse_int(fields[2], "egress_port", lineno));
    r.dst = static_cast<Tor>(text::parse_int(fields[3], "dst_tor", lineno));
    recs.push_back(r);
  }
  for (const char* key : {"n", "d", "S", "slice_ns", "guard_ns"})
    if (!header.count(key))
      throw ParseError(fmt::format("missing header key '{}'", key), 0);
  if (!in_body) throw ParseError("missing circuit column line", 0);

  std::optional<Schedule> sched;
  try {
    sched.emplace(static_cast<int>(header["n"]), static_cast<int>(header["d"]),
                  static_cast<int>(header["S"]), header["slice_ns"],
                  header["guard_ns"], std::move(recs));
  } catch (const InvalidParameter& e) {
    throw ParseError(e.what(), 0);
  }
  auto report = validate_schedule(*sched);
  if (!report.ok()) throw ValidationError(std::move(report));
  return std::move(*sched);
}

Schedule load_schedule_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open schedule file '" + path + "'");
  return load_schedule(in);
}

void save_schedule(const Schedule& sched, std::ostream& out) {
  out << "# uro schedule\n";
  out << "n=" << sched.num_tors() << "\n";
  out << "d=" << sched.uplinks() << "\n";
  out << "S=" << sched.cycle_len() << "\n";
  out << "slice_ns=" << sched.slice_ns() << "\n";
  out << "guard_ns=" << sched.guard_ns() << "\n";
  out << kColumns << "\n";
  for (const auto& r : sched.records())
    out << r.slice_pos << ',' << r.src << ',' << r.port << ',' << r.dst << '\n';
}

void save_schedule_file(const Schedule& sched, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write schedule file '" + path + "'");
  save_schedule(sched, out);
}

}  // namespace uro
