#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "uro/schedule.hpp"

namespace uro {

struct Hop {
  Tor from = 0;
  Tor to = 0;
  Port port = 0;
  SliceTime depart;
  friend constexpr bool operator==(const Hop&, const Hop&) = default;
};

// A routed itinerary. Departures are non-decreasing and the packet may take
// several hops inside one slice.
struct Path {
  Tor src = 0;
  Tor dst = 0;
  SliceTime t_start;
  std::vector<Hop> hops;

  bool empty() const { return hops.empty(); }
  int hop_count() const { return static_cast<int>(hops.size()); }
  SliceTime t_end() const { return hops.back().depart; }
  // Elapsed slices, t_end - t_start + 1.
  std::int64_t latency_slices() const { return t_end().abs - t_start.abs + 1; }
  std::int64_t latency_ns(std::int64_t slice_ns) const {
    return latency_slices() * slice_ns;
  }
  // "S,B@3;B,D@5" with ToR ids, or custom names when provided.
  std::string format(const std::vector<std::string>& names = {}) const;
};

// Empty string when `p` is a structurally valid itinerary on `sched`.
std::string check_path(const Schedule& sched, const Path& p);

struct RoutingParams {
  int max_hops = 4;
};

// Minimum-latency route via backtracking from the destination: the earliest
// last hop wins, then the fewest hops, then the lowest ToR ids. Always returns
// a path on a valid schedule (the direct circuit is a candidate).
Path uro_route(const Schedule& sched, Tor src, Tor dst, SliceTime t0,
               const RoutingParams& params = {});

// Independent exhaustive check of uro_route: earliest-arrival relaxation over
// the time-expanded graph, one layer per hop, within one cycle from t0.
// Returns the lexicographically smallest (t_end, hop_count).
Path oracle_route(const Schedule& sched, Tor src, Tor dst, SliceTime t0,
                  const RoutingParams& params = {});

// Two-phase Valiant route. Phase 1 draws one of src's circuits active at t0
// uniformly (seeded); phase 2 waits at the intermediate for its earliest
// circuit to dst. Throws NoActiveCircuit when src is idle at t0.
Path vlb_route(const Schedule& sched, Tor src, Tor dst, SliceTime t0,
               std::uint64_t seed);

// Every realization of vlb_route at t0, one per active circuit of src.
std::vector<Path> vlb_realizations(const Schedule& sched, Tor src, Tor dst,
                                   SliceTime t0);

}  // namespace uro
