#include "uro/tablegen.hpp"

#include <algorithm>
#include <fstream>
#include <istream>
#include <map>
#include <optional>
#include <ostream>
#include <tuple>

#include <fmt/format.h>

#include "uro/text.hpp"

namespace uro {

LookupTables::LookupTables(int num_tors, int uplinks, int cycle_len, int k)
    : num_tors_(num_tors), uplinks_(uplinks), cycle_len_(cycle_len), k_(k) {
  if (num_tors < 2 || uplinks < 1 || cycle_len < 1)
    throw InvalidParameter("bad table dimensions");
  if (k < 1 || k > kMaxAlternatives)
    throw InvalidParameter(fmt::format("k must be in [1, {}], got {}", kMaxAlternatives, k));
  const std::size_t rows =
      static_cast<std::size_t>(num_tors) * cycle_len * num_tors;
  counts_.assign(rows, 0);
  alts_.assign(rows * k, Alternative{});
}

void LookupTables::set(Tor tor, int arrival_pos, Tor dst,
                       std::span<const Alternative> alts) {
  if (static_cast<int>(alts.size()) > k_)
    throw InvalidParameter("more alternatives than k");
  const std::size_t row = index(tor, arrival_pos, dst);
  counts_[row] = static_cast<std::uint8_t>(alts.size());
  std::copy(alts.begin(), alts.end(), alts_.begin() + row * k_);
  std::fill(alts_.begin() + row * k_ + alts.size(), alts_.begin() + (row + 1) * k_,
            Alternative{});
}

std::int64_t LookupTables::populated_rows() const {
  return std::count_if(counts_.begin(), counts_.end(), [](auto c) { return c > 0; });
}

std::int64_t LookupTables::alternative_count() const {
  std::int64_t total = 0;
  for (auto c : counts_) total += c;
  return total;
}

std::vector<Alternative> compute_alternatives(const Schedule& sched, Tor tor,
                                              int arrival_pos, Tor dst,
                                              const RoutingParams& params, int k) {
  std::vector<Alternative> out;
  const int S = sched.cycle_len();
  SliceTime at{arrival_pos};
  while (static_cast<int>(out.size()) < k) {
    const auto p = uro_route(sched, tor, dst, at, params);
    const auto& h = p.hops.front();
    const auto wait = h.depart.abs - arrival_pos;
    if (wait >= S) break;
    Alternative a{h.port, h.depart.cycle_pos(S), static_cast<int>(wait)};
    if (out.empty() || !(out.back() == a)) out.push_back(a);
    at = h.depart + 1;
  }
  return out;
}

namespace {

void compile_pair(const Schedule& sched, const RoutingParams& params, int k,
                  Tor tor, Tor dst, LookupTables& out) {
  for (int pos = 0; pos < sched.cycle_len(); ++pos) {
    const auto alts = compute_alternatives(sched, tor, pos, dst, params, k);
    out.set(tor, pos, dst, alts);
  }
}

void check_compile_args(const RoutingParams& params) {
  if (params.max_hops < 1) throw InvalidParameter("max_hops must be >= 1");
}

}  // namespace

LookupTables compile_lookup_table(const Schedule& sched, const RoutingParams& params,
                                  int k) {
  check_compile_args(params);
  LookupTables out(sched.num_tors(), sched.uplinks(), sched.cycle_len(), k);
  const int n = sched.num_tors();
  const std::int64_t pairs = static_cast<std::int64_t>(n) * n;
#pragma omp parallel for schedule(dynamic, 8)
  for (std::int64_t i = 0; i < pairs; ++i) {
    const Tor tor = static_cast<Tor>(i / n);
    const Tor dst = static_cast<Tor>(i % n);
    if (tor != dst) compile_pair(sched, params, k, tor, dst, out);
  }
  return out;
}

LookupTables compile_lookup_table_serial(const Schedule& sched,
                                         const RoutingParams& params, int k) {
  check_compile_args(params);
  LookupTables out(sched.num_tors(), sched.uplinks(), sched.cycle_len(), k);
  for (Tor tor = 0; tor < sched.num_tors(); ++tor)
    for (Tor dst = 0; dst < sched.num_tors(); ++dst)
      if (tor != dst) compile_pair(sched, params, k, tor, dst, out);
  return out;
}

std::string TableStats::report() const {
  return fmt::format(
      "n,d,S,max_queues_per_port,entries_per_tor,alt_width,populated_rows\n"
      "{},{},{},{},{},{},{}\n",
      num_tors, uplinks, cycle_len, max_queues_per_port, entries_per_tor, alt_width,
      populated_rows);
}

TableStats table_stats(const LookupTables& tables) {
  TableStats s;
  s.num_tors = tables.num_tors();
  s.uplinks = tables.uplinks();
  s.cycle_len = tables.cycle_len();
  s.entries_per_tor = static_cast<std::int64_t>(s.num_tors) * s.cycle_len;
  s.max_queues_per_port = s.cycle_len;
  for (Tor tor = 0; tor < s.num_tors; ++tor)
    for (int pos = 0; pos < s.cycle_len; ++pos)
      for (Tor dst = 0; dst < s.num_tors; ++dst)
        s.alt_width = std::max(s.alt_width,
                               static_cast<int>(tables.lookup(tor, pos, dst).size()));
  s.populated_rows = tables.populated_rows();
  return s;
}

TableStats table_stats(const Schedule& sched, int k) {
  if (k < 1 || k > kMaxAlternatives)
    throw InvalidParameter(fmt::format("k must be in [1, {}]", kMaxAlternatives));
  TableStats s;
  s.num_tors = sched.num_tors();
  s.uplinks = sched.uplinks();
  s.cycle_len = sched.cycle_len();
  s.entries_per_tor = static_cast<std::int64_t>(s.num_tors) * s.cycle_len;
  s.max_queues_per_port = s.cycle_len;
  s.alt_width = k;
  s.populated_rows = static_cast<std::int64_t>(s.num_tors) * (s.num_tors - 1) * s.cycle_len;
  return s;
}

namespace {

constexpr std::string_view kTableColumns =
    "tor,arrival_pos,dst,rank,egress_port,depart_pos,wait_slices";

}  // namespace

void export_table(const LookupTables& t, std::ostream& out) {
  out << "# uro lookup tables\n";
  out << "n=" << t.num_tors() << "\n";
  out << "d=" << t.uplinks() << "\n";
  out << "S=" << t.cycle_len() << "\n";
  out << "k=" << t.k() << "\n";
  out << kTableColumns << "\n";
  std::string buf;
  for (Tor tor = 0; tor < t.num_tors(); ++tor)
    for (int pos = 0; pos < t.cycle_len(); ++pos)
      for (Tor dst = 0; dst < t.num_tors(); ++dst) {
        const auto alts = t.lookup(tor, pos, dst);
        for (std::size_t r = 0; r < alts.size(); ++r) {
          buf.clear();
          fmt::format_to(std::back_inserter(buf), "{},{},{},{},{},{},{}\n", tor, pos,
                         dst, r, alts[r].port, alts[r].depart_pos, alts[r].wait_slices);
          out << buf;
        }
      }
}

LookupTables import_table(std::istream& in) {
  std::map<std::string, std::int64_t> header;
  std::optional<LookupTables> tables;
  std::vector<Alternative> pending;
  int key_tor = -1, key_pos = -1, key_dst = -1;
  auto flush = [&] {
    if (!pending.empty()) tables->set(key_tor, key_pos, key_dst, pending);
    pending.clear();
  };
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    auto view = text::trim(line);
    if (view.empty() || view.front() == '#') continue;
    if (!tables) {
      if (view == kTableColumns) {
        for (const char* key : {"n", "d", "S", "k"})
          if (!header.count(key))
            throw ParseError(fmt::format("missing header key '{}'", key), lineno);
        try {
          tables.emplace(static_cast<int>(header["n"]), static_cast<int>(header["d"]),
                         static_cast<int>(header["S"]), static_cast<int>(header["k"]));
        } catch (const InvalidParameter& e) {
          throw ParseError(e.what(), lineno);
        }
        continue;
      }
      auto eq = view.find('=');
      if (eq == std::string_view::npos)
        throw ParseError(fmt::format("expected key=value, got '{}'", view), lineno);
      std::string key(text::trim(view.substr(0, eq)));
      if (key != "n" && key != "d" && key != "S" && key != "k")
        throw ParseError(fmt::format("unknown header key '{}'", key), lineno);
      header[key] = text::parse_int(text::trim(view.substr(eq + 1)), key, lineno);
      continue;
    }
    auto f = text::split(view, ',');
    if (f.size() != 7)
      throw ParseError(fmt::format("expected 7 fields, got {}", f.size()), lineno);
    const auto tor = text::parse_int(f[0], "tor", lineno);
    const auto pos = text::parse_int(f[1], "arrival_pos", lineno);
    const auto dst = text::parse_int(f[2], "dst", lineno);
    const auto rank = text::parse_int(f[3], "rank", lineno);
    Alternative a;
    a.port = static_cast<Port>(text::parse_int(f[4], "egress_port", lineno));
    a.depart_pos = static_cast<int>(text::parse_int(f[5], "depart_pos", lineno));
    a.wait_slices = static_cast<int>(text::parse_int(f[6], "wait_slices", lineno));
    const int n = tables->num_tors(), S = tables->cycle_len();
    if (tor < 0 || tor >= n || dst < 0 || dst >= n || tor == dst || pos < 0 || pos >= S)
      throw ParseError("key out of range", lineno);
    if (a.port < 0 || a.port >= tables->uplinks() || a.depart_pos < 0 ||
        a.depart_pos >= S || a.wait_slices < 0)
      throw ParseError("alternative out of range", lineno);
    const bool same_key = tor == key_tor && pos == key_pos && dst == key_dst;
    if (!same_key) {
      if (std::tie(tor, pos, dst) < std::tie(key_tor, key_pos, key_dst))
        throw ParseError("rows not sorted", lineno);
      flush();
      key_tor = static_cast<int>(tor);
      key_pos = static_cast<int>(pos);
      key_dst = static_cast<int>(dst);
    }
    if (rank != static_cast<std::int64_t>(pending.size()))
      throw ParseError(fmt::format("field 'rank': expected {}, got {}", pending.size(), rank),
                       lineno);
    if (rank >= tables->k()) throw ParseError("field 'rank': exceeds k", lineno);
    pending.push_back(a);
  }
  if (!tables) throw ParseError("missing table column line", 0);
  flush();
  return std::move(*tables);
}

void export_table_file(const LookupTables& tables, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write table file '" + path + "'");
  export_table(tables, out);
}

LookupTables import_table_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open table file '" + path + "'");
  return import_table(in);
}

Path chain_walk(const Schedule& sched, const LookupTables& tables, Tor src, Tor dst,
                SliceTime t0, int max_steps) {
  if (max_steps < 0) max_steps = sched.num_tors();
  Path p;
  p.src = src;
  p.dst = dst;
  p.t_start = t0;
  std::vector<char> seen(sched.num_tors(), 0);
  seen[src] = 1;
  Tor at = src;
  SliceTime t = t0;
  const int S = sched.cycle_len();
  while (at != dst && p.hop_count() < max_steps) {
    const auto alts = tables.lookup(at, t.cycle_pos(S), dst);
    if (alts.empty()) break;
    const SliceTime depart = t + alts[0].wait_slices;
    const Tor next = sched.port_target(depart.cycle_pos(S), at, alts[0].port);
    if (next < 0) break;
    p.hops.push_back({at, next, alts[0].port, depart});
    if (seen[next]++) break;
    at = next;
    t = depart;
  }
  return p;
}

}  // namespace uro
