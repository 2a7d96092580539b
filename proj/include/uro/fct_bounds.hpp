#pragma once

#include <cstdint>
#include <memory>

#include "uro/router.hpp"
#include "uro/schedule.hpp"

namespace uro {

struct LinkParams {
  double link_gbps = 100.0;
  std::int64_t prop_delay_ns = 500;
  std::int64_t mtu_bytes = 1500;
};

enum class RoutingMode { kUro, kVlb };

const char* to_string(RoutingMode m);

// Empty-network flow completion times with an ideal source.
//
// The flow starts at the beginning of slice t0 and is packetized at the MTU.
// The host link serializes packets back to back. A packet is eligible in the
// slice in which its last bit reaches the ToR, or in the next slice when it
// could not finish transmission before that slice's guard time. Each packet is
// routed independently from the source ToR in its eligible slice: URO takes the
// minimum-latency route, VLB the worst realization over src's active circuits.
// Delivery happens at the end of the last hop's slice, followed by FIFO
// serialization on the destination downlink and one propagation delay.
//
// Route latencies are cached per (src, dst, cycle position), so one model
// should be reused across flow sizes.
class FctModel {
 public:
  FctModel(const Schedule& sched, LinkParams link, RoutingParams params = {});
  ~FctModel();
  FctModel(FctModel&&) noexcept;

  const Schedule& schedule() const { return sched_; }
  const LinkParams& link() const { return link_; }

  // Nanoseconds from flow start to the last byte at the destination host.
  double fct_ns(Tor src, Tor dst, SliceTime t0, RoutingMode mode,
                std::int64_t flow_bytes);

  // Maximum over all ordered pairs at t0 = 0. Circulant schedules only sweep
  // source 0.
  double worst_case_fct_ns(RoutingMode mode, std::int64_t flow_bytes);
  double worst_case_fct_ns_serial(RoutingMode mode, std::int64_t flow_bytes);

  // h(x) = g(x) / f(x).
  double slowdown(std::int64_t flow_bytes);

  struct Cache;

 private:
  const Schedule& sched_;
  LinkParams link_;
  RoutingParams params_;
  std::unique_ptr<Cache> cache_;
};

// Convenience wrappers around a throwaway FctModel.
double lower_bound_fct(const Schedule& sched, Tor src, Tor dst, SliceTime t0,
                       RoutingMode mode, std::int64_t flow_bytes,
                       const LinkParams& link, const RoutingParams& params = {});
double worst_case_lower_bound_fct(const Schedule& sched, RoutingMode mode,
                                  std::int64_t flow_bytes, const LinkParams& link,
                                  const RoutingParams& params = {});

constexpr std::int64_t kCutoffMaxBytes = 1'000'000'000;

// Smallest flow size x (to within 0.1%) such that h(x) <= alpha, searched over
// [1 MTU, 1 GB]. Throws NoCrossing when h(1 GB) > alpha.
std::int64_t cutoff_flow_size(const Schedule& sched, double alpha,
                              const LinkParams& link,
                              const RoutingParams& params = {});
std::int64_t cutoff_flow_size(FctModel& model, double alpha);

}  // namespace uro
