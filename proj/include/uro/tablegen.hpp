#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "uro/router.hpp"
#include "uro/schedule.hpp"

namespace uro {

constexpr int kMaxAlternatives = 10;

// One ranked next hop: leave through `port` at cycle position `depart_pos`,
// `wait_slices` after the arrival slice.
struct Alternative {
  Port port = 0;
  int depart_pos = 0;
  int wait_slices = 0;
  friend constexpr bool operator==(const Alternative&, const Alternative&) = default;
};

// Per-ToR match-action tables keyed by (arrival cycle position, destination),
// stored densely over all N*S*N keys with the self rows left empty.
//
// Rank 0 is the first hop of uro_route from the arrival slice. Rank j is the
// first hop of uro_route from one slice after rank j-1's departure, kept while
// the wait from arrival stays below one cycle.
class LookupTables {
 public:
  LookupTables() = default;
  LookupTables(int num_tors, int uplinks, int cycle_len, int k);

  int num_tors() const { return num_tors_; }
  int uplinks() const { return uplinks_; }
  int cycle_len() const { return cycle_len_; }
  int k() const { return k_; }

  std::span<const Alternative> lookup(Tor tor, int arrival_pos, Tor dst) const {
    const std::size_t row = index(tor, arrival_pos, dst);
    return {alts_.data() + row * k_, counts_[row]};
  }
  void set(Tor tor, int arrival_pos, Tor dst, std::span<const Alternative> alts);

  // Keys with at least one alternative.
  std::int64_t populated_rows() const;
  std::int64_t alternative_count() const;

  friend bool operator==(const LookupTables&, const LookupTables&) = default;

 private:
  std::size_t index(Tor tor, int pos, Tor dst) const {
    return (static_cast<std::size_t>(tor) * cycle_len_ + pos) * num_tors_ + dst;
  }

  int num_tors_ = 0;
  int uplinks_ = 0;
  int cycle_len_ = 0;
  int k_ = 1;
  std::vector<std::uint8_t> counts_;
  std::vector<Alternative> alts_;
};

// Ranked alternatives for one key, computed directly from the schedule.
std::vector<Alternative> compute_alternatives(const Schedule& sched, Tor tor,
                                              int arrival_pos, Tor dst,
                                              const RoutingParams& params, int k);

// Compiles every (tor, arrival position, dst) key. Parallel over (tor, dst);
// the serial variant produces identical tables.
LookupTables compile_lookup_table(const Schedule& sched, const RoutingParams& params,
                                  int k = 3);
LookupTables compile_lookup_table_serial(const Schedule& sched,
                                         const RoutingParams& params, int k = 3);

struct TableStats {
  int num_tors = 0;
  int uplinks = 0;
  int cycle_len = 0;
  std::int64_t entries_per_tor = 0;  // N*S, self rows counted
  int max_queues_per_port = 0;       // S
  int alt_width = 0;                 // widest populated entry
  std::int64_t populated_rows = 0;
  std::string report() const;
};

TableStats table_stats(const LookupTables& tables);
// The same accounting without compiling: alt_width is k and populated_rows is
// the N*(N-1)*S keys every valid schedule fills.
TableStats table_stats(const Schedule& sched, int k);

// Rows `tor,arrival_pos,dst,rank,egress_port,depart_pos,wait_slices` after a
// `key=value` header (n, d, S, k) and the column line.
void export_table(const LookupTables& tables, std::ostream& out);
LookupTables import_table(std::istream& in);
void export_table_file(const LookupTables& tables, const std::string& path);
LookupTables import_table_file(const std::string& path);

// Follows rank-0 entries hop by hop from (src, t0). Stops after `max_steps`
// hops or at a repeated ToR; the returned path then does not end at dst.
Path chain_walk(const Schedule& sched, const LookupTables& tables, Tor src, Tor dst,
                SliceTime t0, int max_steps = -1);

}  // namespace uro
