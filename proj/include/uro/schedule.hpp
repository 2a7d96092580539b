#pragma once

#include <compare>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "uro/error.hpp"

namespace uro {

using Tor = std::int32_t;
using Port = std::int32_t;

// Absolute slice counter. All schedule lookups go through cycle_pos().
struct SliceTime {
  std::int64_t abs = 0;

  constexpr int cycle_pos(int cycle_len) const {
    return static_cast<int>(abs % cycle_len);
  }
  constexpr SliceTime operator+(std::int64_t n) const { return {abs + n}; }
  friend constexpr auto operator<=>(SliceTime, SliceTime) = default;
};

struct Circuit {
  Port port = 0;
  Tor dst = 0;
  friend constexpr bool operator==(Circuit, Circuit) = default;
};

// One record of the schedule body: at `slice_pos`, `src` transmits to `dst`
// through uplink `port`.
struct CircuitRecord {
  int slice_pos = 0;
  Tor src = 0;
  Port port = 0;
  Tor dst = 0;
  friend constexpr auto operator<=>(const CircuitRecord&,
                                    const CircuitRecord&) = default;
};

// Cyclic optical schedule: `cycle_len` slices, each a set of directed
// circuits. Immutable after construction and safe to share between threads.
//
// The constructor enforces only structural bounds (ids in range, a port used
// once per ToR per slice). The routing invariants (no self loops, balanced
// degree, pair coverage) are checked by validate_schedule() so that broken
// schedules can still be built and reported on.
class Schedule {
 public:
  Schedule(int num_tors, int uplinks, int cycle_len, std::int64_t slice_ns,
           std::int64_t guard_ns, std::vector<CircuitRecord> circuits);

  int num_tors() const { return num_tors_; }
  int uplinks() const { return uplinks_; }
  int cycle_len() const { return cycle_len_; }
  std::int64_t slice_ns() const { return slice_ns_; }
  std::int64_t guard_ns() const { return guard_ns_; }
  // Transmission window per slice once the guardband is removed.
  std::int64_t usable_ns() const { return slice_ns_ - guard_ns_; }

  // Circuits leaving `tor` at cycle position `pos`, ordered by port.
  std::span<const Circuit> circuits(int pos, Tor tor) const;
  // Destination reached through `port` at `pos`, or -1 when the port is idle.
  Tor port_target(int pos, Tor tor, Port port) const {
    return port_map_[(static_cast<std::size_t>(pos) * num_tors_ + tor) *
                         uplinks_ +
                     port];
  }
  // All circuits sorted by (slice_pos, src, port).
  const std::vector<CircuitRecord>& records() const { return records_; }

  // Cycle positions (ascending) at which src -> dst exists.
  std::span<const int> pair_positions(Tor src, Tor dst) const;
  bool connected(Tor src, Tor dst) const {
    return !pair_positions(src, dst).empty();
  }

  // Smallest t >= t0 with a circuit src -> dst. Throws PairNeverConnected.
  SliceTime earliest_connection(Tor src, Tor dst, SliceTime t0) const;
  // Largest t in [lo, hi] with a circuit src -> dst.
  std::optional<SliceTime> latest_connection(Tor src, Tor dst, SliceTime lo,
                                             SliceTime hi) const;
  // Lowest egress port carrying src -> dst at `t`, or -1.
  Port port_for(Tor src, Tor dst, SliceTime t) const;

  // True when relabelling every ToR i -> i+1 (mod n) maps the schedule onto
  // itself. Rotor-style schedules are circulant, which lets all-pairs sweeps
  // be reduced to a single source.
  bool is_circulant() const { return circulant_; }

  friend bool operator==(const Schedule& a, const Schedule& b);

 private:
  bool compute_circulant() const;

  int num_tors_;
  int uplinks_;
  int cycle_len_;
  std::int64_t slice_ns_;
  std::int64_t guard_ns_;
  std::vector<CircuitRecord> records_;
  // CSR over (pos, tor).
  std::vector<std::int32_t> slot_offsets_;
  std::vector<Circuit> slot_circuits_;
  std::vector<Tor> port_map_;
  // CSR over ordered pair (src, dst).
  std::vector<std::int32_t> pair_offsets_;
  std::vector<int> pair_pos_;
  bool circulant_ = false;
};

enum class ViolationKind { kSelfLoop, kPortReuse, kDegreeImbalance, kCoverage };

struct Violation {
  ViolationKind kind;
  int slice_pos = -1;
  Tor tor = -1;
  Port port = -1;
  Tor peer = -1;  // destination for coverage violations
  std::string describe() const;
};

struct ValidationReport {
  std::vector<Violation> violations;
  bool ok() const { return violations.empty(); }
  std::string summary(std::size_t max_lines = 20) const;
};

class ValidationError : public Error {
 public:
  explicit ValidationError(ValidationReport report);
  const ValidationReport& report() const { return report_; }

 private:
  ValidationReport report_;
};

ValidationReport validate_schedule(const Schedule& sched);

// Full round-robin rotor: at cycle position s, ToR i's port k reaches
// (i + s*d + k + 1) mod n. S = ceil((n-1)/d); surplus ports of the final slice
// stay idle so that each ordered pair appears exactly once per cycle.
Schedule generate_rotor_schedule(int n, int d, std::int64_t slice_ns,
                                 std::int64_t guard_ns);

// Rotor with staggered reconfiguration: uplink k holds each rotor matching for
// d consecutive slices and the uplinks reconfigure one at a time, so every
// circuit lasts d slices and S = d * ceil((n-1)/d).
Schedule generate_staggered_rotor_schedule(int n, int d, std::int64_t slice_ns,
                                           std::int64_t guard_ns);

// Text format: `key=value` header lines (n, d, S, slice_ns, guard_ns), then the
// column line `slice_pos,src_tor,egress_port,dst_tor` and one record per line.
// Lines starting with '#' are comments. Loaded schedules are validated.
Schedule load_schedule(std::istream& in);
Schedule load_schedule_file(const std::string& path);
void save_schedule(const Schedule& sched, std::ostream& out);
void save_schedule_file(const Schedule& sched, const std::string& path);

}  // namespace uro
