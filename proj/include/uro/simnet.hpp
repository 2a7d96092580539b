#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "uro/router.hpp"
#include "uro/schedule.hpp"
#include "uro/tablegen.hpp"

namespace uro {

enum class SimRouting { kUro, kVlb, kUroOffload };

const char* to_string(SimRouting r);
SimRouting parse_sim_routing(const std::string& s);

struct SimConfig {
  SimRouting routing = SimRouting::kUro;
  // Offload threshold; flows strictly larger go through VLB. When negative it
  // is derived from `alpha` with cutoff_flow_size.
  double alpha = 1.5;
  std::int64_t cutoff_bytes = -1;
  double link_gbps = 100.0;
  std::int64_t prop_delay_ns = 500;
  std::int64_t host_prop_ns = 0;
  std::int64_t mtu_bytes = 1500;
  int k = 3;
  int max_hops = 4;
  std::uint64_t seed = 1;
  std::int64_t duration_ns = 10'000'000;
  double load = 0.05;
  int hosts_per_tor = 0;  // 0: one host per uplink
  std::int64_t staleness_adjust_ns = 0;
  // Run continues after `duration_ns` until every flow finishes or this much
  // extra time has passed. Negative: ten times the duration.
  std::int64_t drain_ns = -1;
  std::int64_t throughput_bin_ns = 100'000;
  // A packet its source ToR cannot admit waits on the host link, pausing the
  // NIC, and is offered again at the next slice boundary. Off: dropped.
  bool source_backpressure = true;
  // Per-flow cap on MTU-sized packets sent but not yet delivered or dropped,
  // released on delivery. 0: unlimited.
  int window_packets = 10;

  void validate() const;
  int hosts(const Schedule& s) const {
    return s.num_tors() * (hosts_per_tor > 0 ? hosts_per_tor : s.uplinks());
  }
  int tor_of(const Schedule& s, int host) const {
    return host / (hosts_per_tor > 0 ? hosts_per_tor : s.uplinks());
  }
};

struct Flow {
  std::int64_t id = 0;
  int src_host = 0;
  int dst_host = 0;
  std::int64_t bytes = 0;
  std::int64_t start_ns = 0;
  friend bool operator==(const Flow&, const Flow&) = default;
};

struct FlowResult {
  std::int64_t id = 0;
  std::int64_t bytes = 0;
  std::int64_t start_ns = 0;
  std::int64_t fct_ns = -1;  // -1 when unfinished
  int path_hops = 0;         // most ToR-to-ToR hops taken by any packet
  bool vlb = false;
};

struct PortQueueStats {
  Tor tor = 0;
  Port port = 0;
  int max_nonempty_queues = 0;
  int p99_nonempty_queues = 0;
  std::int64_t max_occupancy_bytes = 0;
  std::int64_t p99_occupancy_bytes = 0;
};

struct ThroughputSample {
  std::int64_t time_ns = 0;  // bin end
  std::int64_t delivered_bytes = 0;
  double normalized = 0;  // of aggregate host capacity
};

struct SimMetrics {
  std::vector<FlowResult> flows;
  double fct_p50_ns = 0, fct_p99_ns = 0, fct_p999_ns = 0;
  std::vector<ThroughputSample> throughput;
  std::vector<std::int64_t> hop_histogram;  // packets by ToR-to-ToR hop count
  std::vector<PortQueueStats> ports;

  std::int64_t injected_bytes = 0;
  std::int64_t delivered_bytes = 0;
  std::int64_t dropped_bytes = 0;
  std::int64_t dropped_packets = 0;
  std::int64_t rank_overflow_drops = 0;
  std::int64_t rerouted_packets = 0;  // took a non-zero-rank alternative
  std::int64_t missed_slices = 0;     // still queued when their slice ended
  std::int64_t reordered_packets = 0;
  std::int64_t unfinished_flows = 0;
  std::int64_t conservation_samples = 0;
  std::int64_t conservation_violations = 0;
  std::int64_t queue_bound_violations = 0;  // more than S non-empty queues
  std::int64_t lower_bound_violations = 0;  // FCT below the physical floor
  std::int64_t cutoff_bytes = -1;
  std::int64_t end_ns = 0;
  std::int64_t events = 0;
};

// Discrete-event run over `flows` (sorted by start). Deterministic in
// (sched, cfg, flows).
SimMetrics run_simulation(const Schedule& sched, const SimConfig& cfg,
                          const std::vector<Flow>& flows);

// Lower bound on a flow's FCT under any routing: the last packet leaves the
// host after the whole flow is serialized, its last hop cannot start before
// the earliest-arrival slice of an unbounded-hop route, and it still needs an
// uplink transmission, a propagation delay and the downlink.
std::int64_t physical_fct_floor(const Schedule& sched, const SimConfig& cfg,
                                const Flow& flow);

// fct.csv, queues.csv, throughput.csv, hops.csv and summary.csv in `dir`.
std::vector<std::string> write_metrics(const SimMetrics& m, const std::string& dir);

// --- workloads ---

// Piecewise-linear flow size CDF from rows `bytes,cumulative_prob`.
class SizeCdf {
 public:
  SizeCdf(std::vector<std::pair<double, double>> points);
  static SizeCdf parse(std::istream& in);
  static SizeCdf load(const std::string& path);
  // "websearch" and "datamining".
  static SizeCdf preset(const std::string& name);

  double mean() const;
  std::int64_t sample(std::mt19937_64& rng) const;
  const std::vector<std::pair<double, double>>& points() const { return pts_; }
  void write(std::ostream& out) const;

 private:
  std::vector<std::pair<double, double>> pts_;
};

enum class WorkloadKind { kWebsearch, kDatamining, kFixed, kFile };

WorkloadKind parse_workload_kind(const std::string& s);

struct WorkloadSpec {
  WorkloadKind kind = WorkloadKind::kWebsearch;
  double load = 0.05;
  std::int64_t duration_ns = 10'000'000;
  std::int64_t fixed_bytes = 100'000;
  std::string cdf_path;   // overrides the preset when set
  std::string flow_file;  // kFile
};

// Poisson arrivals whose mean offered load on the host links equals `load`;
// source hosts uniform, destinations uniform over hosts of other ToRs.
std::vector<Flow> generate_workload(const WorkloadSpec& spec, const Schedule& sched,
                                    const SimConfig& cfg, std::uint64_t seed);

// Rows `start_ns,src_host,dst_host,bytes`.
std::vector<Flow> read_flow_file(std::istream& in);
std::vector<Flow> read_flow_file(const std::string& path);
void write_flow_file(const std::vector<Flow>& flows, std::ostream& out);

struct OffloadSplit {
  std::vector<Flow> uro;
  std::vector<Flow> vlb;
};
// Flows strictly larger than the cutoff go to VLB.
OffloadSplit offload_split(const std::vector<Flow>& flows, std::int64_t cutoff_bytes);

// --- failures ---

struct FailureSpec {
  double link_fraction = 0;
  double tor_fraction = 0;
  double ocs_fraction = 0;
};

// Failed elements for a whole run. A failed link is one (ToR, egress port); a
// failed ToR loses every circuit to or from it; a failed OCS is the same
// uplink index on every ToR.
class FailureMask {
 public:
  FailureMask() = default;
  FailureMask(int num_tors, int uplinks);

  void fail_link(Tor tor, Port port);
  void fail_tor(Tor tor);
  void fail_ocs(Port port);

  bool link_failed(Tor tor, Port port) const {
    return links_[static_cast<std::size_t>(tor) * uplinks_ + port] != 0;
  }
  bool tor_failed(Tor tor) const { return tors_[tor] != 0; }
  bool circuit_alive(Tor from, Port port, Tor to) const {
    return !link_failed(from, port) && !tor_failed(from) && !tor_failed(to);
  }
  bool empty() const { return failed_links_ == 0 && failed_tors_ == 0 && failed_ocs_ == 0; }
  int failed_links() const { return failed_links_; }
  int failed_tors() const { return failed_tors_; }
  int failed_ocs() const { return failed_ocs_; }
  int num_tors() const { return num_tors_; }

 private:
  int num_tors_ = 0;
  int uplinks_ = 0;
  std::vector<char> links_;
  std::vector<char> tors_;
  std::vector<char> ocs_;
  int failed_links_ = 0, failed_tors_ = 0, failed_ocs_ = 0;
};

// Draws round(fraction * population) distinct elements of each kind.
FailureMask inject_failures(const Schedule& sched, const FailureSpec& spec,
                            std::uint64_t seed);

// Fraction of (src, dst, arrival position) triples among surviving ToRs that
// cannot reach dst when packets walk the first k alternatives of each entry,
// skipping failed circuits, and may re-match up to `max_reroutes` times along
// the way. A re-match looks the entry up again one slice after the last
// alternative's departure.
double connectivity_loss(const Schedule& sched, const LookupTables& tables,
                         const FailureMask& mask, int k, int max_reroutes);
double connectivity_loss_serial(const Schedule& sched, const LookupTables& tables,
                                const FailureMask& mask, int k, int max_reroutes);

// For each ordered pair, the fraction of arrival positions t whose rank-0 path
// shares no (ToR, egress port) with the path for t + 1.
std::vector<double> edge_disjoint_ratio(const Schedule& sched, const LookupTables& tables);

}  // namespace uro
