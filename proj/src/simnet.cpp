#include "uro/simnet.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <filesystem>
#include <fstream>
#include <queue>

#include <fmt/format.h>

#include "uro/fct_bounds.hpp"
#include "uro/switch_model.hpp"

namespace uro {

const char* to_string(SimRouting r) {
  switch (r) {
    case SimRouting::kUro:
      return "uro";
    case SimRouting::kVlb:
      return "vlb";
    case SimRouting::kUroOffload:
      return "uro+vlb";
  }
  return "?";
}

SimRouting parse_sim_routing(const std::string& s) {
  if (s == "uro") return SimRouting::kUro;
  if (s == "vlb") return SimRouting::kVlb;
  if (s == "uro+vlb" || s == "offload") return SimRouting::kUroOffload;
  throw InvalidParameter("unknown routing '" + s + "'");
}

void SimConfig::validate() const {
  if (!(link_gbps > 0)) throw InvalidParameter("link_gbps must be positive");
  if (prop_delay_ns < 0 || host_prop_ns < 0) throw InvalidParameter("delays must be >= 0");
  if (mtu_bytes <= 0) throw InvalidParameter("mtu must be positive");
  if (k < 1 || k > kMaxAlternatives)
    throw InvalidParameter(fmt::format("k must be in [1, {}]", kMaxAlternatives));
  if (max_hops < 1) throw InvalidParameter("max_hops must be >= 1");
  if (duration_ns < 0) throw InvalidParameter("duration must be >= 0");
  if (!(load > 0) || load > 1) throw InvalidParameter("load must be in (0, 1]");
  if (hosts_per_tor < 0) throw InvalidParameter("hosts_per_tor must be >= 0");
  if (window_packets < 0) throw InvalidParameter("window must be >= 0");
  if (throughput_bin_ns <= 0) throw InvalidParameter("throughput bin must be positive");
  if (routing == SimRouting::kUroOffload && cutoff_bytes < 0 && !(alpha > 1))
    throw InvalidParameter("alpha must be > 1");
}

namespace {

std::int64_t tx_ns(std::int64_t bytes, double gbps) {
  return static_cast<std::int64_t>(std::ceil(static_cast<double>(bytes) * 8.0 / gbps));
}

// Host serialization of a whole flow and the size of its last packet.
std::pair<std::int64_t, std::int64_t> serialize(std::int64_t bytes, const SimConfig& cfg) {
  const std::int64_t full = bytes / cfg.mtu_bytes, rest = bytes % cfg.mtu_bytes;
  const std::int64_t t =
      full * tx_ns(cfg.mtu_bytes, cfg.link_gbps) + (rest ? tx_ns(rest, cfg.link_gbps) : 0);
  return {t, rest ? rest : cfg.mtu_bytes};
}

}  // namespace

std::int64_t physical_fct_floor(const Schedule& sched, const SimConfig& cfg,
                                const Flow& flow) {
  const auto [ser, last] = serialize(flow.bytes, cfg);
  const Tor src = cfg.tor_of(sched, flow.src_host), dst = cfg.tor_of(sched, flow.dst_host);
  const std::int64_t ready = flow.start_ns + ser + cfg.host_prop_ns;
  const std::int64_t down = tx_ns(last, cfg.link_gbps) + cfg.host_prop_ns;
  if (src == dst) return ready + down - flow.start_ns;
  const std::int64_t u = sched.slice_ns();
  const auto p = oracle_route(sched, src, dst, {ready / u}, {sched.num_tors() - 1});
  const std::int64_t last_hop = std::max(ready, p.t_end().abs * u);
  return last_hop + tx_ns(last, cfg.link_gbps) + cfg.prop_delay_ns + down - flow.start_ns;
}

namespace {

enum class Ev : std::uint8_t { kPortDone, kSlice, kFlowStart, kNicDone, kTorArrive, kDownDone, kDeliver };

// Same-time order: transmissions finishing exactly at a boundary complete in
// the old slice, then the boundary, then everything else by insertion.
int ev_class(Ev e) { return e == Ev::kPortDone ? 0 : e == Ev::kSlice ? 1 : 2; }

struct Event {
  std::int64_t time;
  int cls;
  std::uint64_t seq;
  Ev type;
  std::int32_t a;
  std::int32_t b;
  std::int64_t c;
  bool operator>(const Event& o) const {
    if (time != o.time) return time > o.time;
    if (cls != o.cls) return cls > o.cls;
    return seq > o.seq;
  }
};

enum class Loc : std::uint8_t { kFree, kNic, kHostLink, kTorQueue, kFiber, kDownlink };

struct Pkt {
  std::int64_t flow = 0;
  std::int64_t bytes = 0;
  std::int64_t seq = 0;
  Tor dst_tor = 0;
  int src_host = 0;
  int dst_host = 0;
  int hops = 0;
  int phase = 0;  // 0 URO, 1 VLB spraying, 2 VLB at the intermediate
  Loc loc = Loc::kFree;
};

struct FlowState {
  std::int64_t remaining = 0;  // not yet packetized
  std::int64_t next_seq = 0;
  std::int64_t delivered = 0;
  std::int64_t highest_seq = -1;
  std::int64_t outstanding = 0;  // injected into the NIC, not yet delivered or dropped
  int max_hops = 0;
  bool vlb = false;
};

struct Host {
  std::deque<std::int64_t> active;  // round robin over flows
  bool nic_busy = false;
  std::deque<std::int64_t> held;  // refused by the source ToR, retried per slice
  std::deque<std::int64_t> down;
  bool down_busy = false;
};

struct TorState {
  CalendarQueueSet qset;
  QueueStateTable qstate;
  std::vector<char> busy;
};

std::int64_t percentile(std::vector<std::int64_t> v, double q) {
  if (v.empty()) return 0;
  std::sort(v.begin(), v.end());
  const auto rank = static_cast<std::size_t>(std::ceil(q * static_cast<double>(v.size())));
  return v[std::min(v.size() - 1, rank == 0 ? 0 : rank - 1)];
}

class Simulator {
 public:
  Simulator(const Schedule& s, const SimConfig& cfg, const std::vector<Flow>& flows)
      : s_(s), cfg_(cfg), flows_(flows), rng_(cfg.seed) {
    cfg.validate();
    for (std::size_t i = 1; i < flows.size(); ++i)
      if (flows[i].start_ns < flows[i - 1].start_ns)
        throw InvalidParameter("flows must be sorted by start time");
    const int hosts = cfg.hosts(s);
    for (const auto& f : flows)
      if (f.bytes <= 0 || f.src_host < 0 || f.dst_host < 0 || f.src_host >= hosts ||
          f.dst_host >= hosts || f.src_host == f.dst_host)
        throw InvalidParameter(fmt::format("invalid flow {}", f.id));
    u_ = s.slice_ns();
    drain_ = {cfg.link_gbps, cfg.staleness_adjust_ns};
    if (cfg.routing != SimRouting::kVlb)
      tables_ = compile_lookup_table(s, {cfg.max_hops}, cfg.k);
    if (cfg.routing == SimRouting::kUroOffload) {
      cutoff_ = cfg.cutoff_bytes >= 0
                    ? cfg.cutoff_bytes
                    : cutoff_flow_size(s, cfg.alpha,
                                       {cfg.link_gbps, cfg.prop_delay_ns, cfg.mtu_bytes},
                                       {cfg.max_hops});
    }
    for (Tor t = 0; t < s.num_tors(); ++t)
      tors_.push_back({CalendarQueueSet(s.uplinks(), s.cycle_len()),
                       QueueStateTable(s.uplinks(), s.cycle_len()),
                       std::vector<char>(s.uplinks(), 0)});
    hosts_.resize(hosts);
    fstate_.resize(flows.size());
    m_.flows.resize(flows.size());
    for (std::size_t i = 0; i < flows.size(); ++i) {
      m_.flows[i] = {flows[i].id, flows[i].bytes, flows[i].start_ns, -1, 0, false};
      fstate_[i].remaining = flows[i].bytes;
      fstate_[i].vlb = cfg.routing == SimRouting::kVlb ||
                       (cfg.routing == SimRouting::kUroOffload && flows[i].bytes > cutoff_);
      m_.flows[i].vlb = fstate_[i].vlb;
    }
    m_.cutoff_bytes = cutoff_;
    end_limit_ = cfg.duration_ns + (cfg.drain_ns >= 0 ? cfg.drain_ns : 10 * cfg.duration_ns);
    port_nonempty_.resize(static_cast<std::size_t>(s.num_tors()) * s.uplinks());
    port_occupancy_.resize(port_nonempty_.size());
  }

  SimMetrics run() {
    push(0, Ev::kSlice, 0, 0, 0);
    if (!flows_.empty()) push(flows_[0].start_ns, Ev::kFlowStart, 0, 0, 0);
    while (!events_.empty()) {
      const Event e = events_.top();
      events_.pop();
      now_ = e.time;
      ++m_.events;
      switch (e.type) {
        case Ev::kSlice:
          on_slice(e.c);
          break;
        case Ev::kFlowStart:
          on_flow_start(e.c);
          break;
        case Ev::kNicDone:
          on_nic_done(e.a, e.c);
          break;
        case Ev::kTorArrive:
          forward(e.c, e.a);
          break;
        case Ev::kPortDone:
          on_port_done(e.a, e.b, e.c);
          break;
        case Ev::kDownDone:
          on_down_done(e.a, e.c);
          break;
        case Ev::kDeliver:
          on_deliver(e.c);
          break;
      }
    }
    finish();
    return std::move(m_);
  }

 private:
  void push(std::int64_t t, Ev type, std::int32_t a, std::int32_t b, std::int64_t c) {
    events_.push({t, ev_class(type), seq_++, type, a, b, c});
  }

  std::int64_t alloc(Pkt p) {
    std::int64_t id;
    if (!free_.empty()) {
      id = free_.back();
      free_.pop_back();
      pkts_[id] = p;
    } else {
      id = static_cast<std::int64_t>(pkts_.size());
      pkts_.push_back(p);
    }
    ++live_;
    return id;
  }
  void release(std::int64_t id) {
    pkts_[id].loc = Loc::kFree;
    free_.push_back(id);
    --live_;
  }

  bool busy_network() const {
    return next_flow_ < flows_.size() || live_ > 0;
  }

  // --- hosts ---

  void on_flow_start(std::int64_t idx) {
    const auto& f = flows_[idx];
    auto& h = hosts_[f.src_host];
    h.active.push_back(idx);
    next_flow_ = static_cast<std::size_t>(idx) + 1;
    if (next_flow_ < flows_.size())
      push(flows_[next_flow_].start_ns, Ev::kFlowStart, 0, 0,
           static_cast<std::int64_t>(next_flow_));
    start_nic(f.src_host);
  }

  void start_nic(int host) {
    auto& h = hosts_[host];
    if (h.nic_busy || h.active.empty() || !h.held.empty()) return;
    // Round robin over flows with window room.
    auto it = std::find_if(h.active.begin(), h.active.end(), [&](std::int64_t fi) {
      return cfg_.window_packets <= 0 ||
             fstate_[fi].outstanding + std::min(cfg_.mtu_bytes, fstate_[fi].remaining) <=
                 cfg_.window_packets * cfg_.mtu_bytes;
    });
    if (it == h.active.end()) return;
    const std::int64_t fi = *it;
    h.active.erase(it);
    auto& fs = fstate_[fi];
    const auto& f = flows_[fi];
    Pkt p;
    p.flow = fi;
    p.bytes = std::min(cfg_.mtu_bytes, fs.remaining);
    p.seq = fs.next_seq++;
    p.src_host = f.src_host;
    p.dst_host = f.dst_host;
    p.dst_tor = cfg_.tor_of(s_, f.dst_host);
    p.phase = fs.vlb ? 1 : 0;
    p.loc = Loc::kNic;
    fs.remaining -= p.bytes;
    fs.outstanding += p.bytes;
    if (fs.remaining > 0) h.active.push_back(fi);
    const std::int64_t id = alloc(p);
    h.nic_busy = true;
    push(now_ + tx_ns(p.bytes, cfg_.link_gbps), Ev::kNicDone, host, 0, id);
  }

  void retry_held(int host) {
    auto& h = hosts_[host];
    if (h.held.empty()) return;
    const Tor tor = cfg_.tor_of(s_, host);
    while (!h.held.empty()) {
      const std::int64_t id = h.held.front();
      h.held.pop_front();
      forward(id, tor);
      if (pkts_[id].loc == Loc::kHostLink) {
        // Refused again and re-appended: restore FIFO order.
        h.held.pop_back();
        h.held.push_front(id);
        break;
      }
    }
    start_nic(host);
  }

  void on_nic_done(int host, std::int64_t id) {
    auto& p = pkts_[id];
    m_.injected_bytes += p.bytes;
    p.loc = Loc::kHostLink;
    push(now_ + cfg_.host_prop_ns, Ev::kTorArrive, cfg_.tor_of(s_, host), 0, id);
    hosts_[host].nic_busy = false;
    start_nic(host);
  }

  void start_down(int host) {
    auto& h = hosts_[host];
    if (h.down_busy || h.down.empty()) return;
    h.down_busy = true;
    push(now_ + tx_ns(pkts_[h.down.front()].bytes, cfg_.link_gbps), Ev::kDownDone, host, 0,
         h.down.front());
  }

  void on_down_done(int host, std::int64_t id) {
    auto& h = hosts_[host];
    h.down.pop_front();
    h.down_busy = false;
    push(now_ + cfg_.host_prop_ns, Ev::kDeliver, 0, 0, id);
    start_down(host);
  }

  void on_deliver(std::int64_t id) {
    const Pkt p = pkts_[id];
    release(id);
    auto& fs = fstate_[p.flow];
    fs.outstanding -= p.bytes;
    start_nic(p.src_host);
    m_.delivered_bytes += p.bytes;
    fs.delivered += p.bytes;
    if (p.seq < fs.highest_seq)
      ++m_.reordered_packets;
    else
      fs.highest_seq = p.seq;
    fs.max_hops = std::max(fs.max_hops, p.hops);
    if (static_cast<std::size_t>(p.hops) >= m_.hop_histogram.size())
      m_.hop_histogram.resize(p.hops + 1, 0);
    ++m_.hop_histogram[p.hops];
    const auto bin = static_cast<std::size_t>(now_ / cfg_.throughput_bin_ns);
    if (bin >= bins_.size()) bins_.resize(bin + 1, 0);
    bins_[bin] += p.bytes;
    auto& r = m_.flows[p.flow];
    r.path_hops = fs.max_hops;
    if (fs.delivered == flows_[p.flow].bytes) r.fct_ns = now_ - flows_[p.flow].start_ns;
  }

  // Packets still at their source ToR are paused on the host link instead of
  // dropped when source backpressure is on.
  void refuse(std::int64_t id, bool overflow) {
    auto& p = pkts_[id];
    if (cfg_.source_backpressure && p.hops == 0) {
      p.loc = Loc::kHostLink;
      hosts_[p.src_host].held.push_back(id);
      return;
    }
    if (overflow) ++m_.rank_overflow_drops;
    drop(id);
  }

  void drop(std::int64_t id) {
    const Pkt& p = pkts_[id];
    m_.dropped_bytes += p.bytes;
    ++m_.dropped_packets;
    fstate_[p.flow].outstanding -= p.bytes;
    const int host = p.src_host;
    release(id);
    start_nic(host);
  }

  // --- ToRs ---

  void forward(std::int64_t id, Tor tor) {
    auto& p = pkts_[id];
    if (tor == p.dst_tor) {
      p.loc = Loc::kDownlink;
      hosts_[p.dst_host].down.push_back(id);
      start_down(p.dst_host);
      return;
    }
    p.loc = Loc::kTorQueue;
    auto& ts = tors_[tor];
    const SliceTime slice = ts.qset.current_slice();
    const std::int64_t within = now_ - slice.abs * u_;
    const QueuedPacket qp{static_cast<std::uint64_t>(id), p.bytes};
    const int Q = ts.qset.queues();
    auto fits = [&](Port port, int rank) {
      const int q = ts.qset.queue_for_rank(rank);
      const auto st = queue_full_check(ts.qset, port, q, within, s_, drain_, p.bytes);
      ts.qstate.set(port, q, st);
      return st == QueueState::kUnfull;
    };
    auto enqueue = [&](Port port, int rank) {
      ts.qset.enqueue(port, ts.qset.queue_for_rank(rank), qp);
      if (rank == 0) start_port(tor, port);
    };

    if (p.phase == 0) {
      for (const auto& a : tables_.lookup(tor, slice.cycle_pos(s_.cycle_len()), p.dst_tor))
        if (a.wait_slices < Q) fits(a.port, a.wait_slices);
      ForwardCounters c;
      const auto r = classify_and_enqueue(tor, p.dst_tor, qp, slice, tables_, ts.qset,
                                          ts.qstate, &c);
      if (r.outcome != EnqueueOutcome::kEnqueued) {
        refuse(id, r.outcome == EnqueueOutcome::kRankOverflow);
        return;
      }
      m_.rerouted_packets += c.rerouted;
      if (r.rank == 0) start_port(tor, r.port);
      return;
    }
    if (p.phase == 1) {
      // Spray over the circuits of the current slice in random order, then of
      // the following slices.
      std::vector<Port> ports;
      for (int rank = 0; rank < Q; ++rank) {
        ports.clear();
        for (const auto& c : s_.circuits((slice + rank).cycle_pos(s_.cycle_len()), tor))
          ports.push_back(c.port);
        std::shuffle(ports.begin(), ports.end(), rng_);
        for (Port port : ports)
          if (fits(port, rank)) {
            enqueue(port, rank);
            return;
          }
      }
      refuse(id, false);
      return;
    }
    for (int rank = 0; rank < Q; ++rank)
      for (const auto& c : s_.circuits((slice + rank).cycle_pos(s_.cycle_len()), tor))
        if (c.dst == p.dst_tor && fits(c.port, rank)) {
          enqueue(c.port, rank);
          return;
        }
    drop(id);
  }

  void start_port(Tor tor, Port port) {
    auto& ts = tors_[tor];
    if (ts.busy[port] || ts.qset.empty(port, ts.qset.active_index())) return;
    const std::int64_t slice_start = ts.qset.current_slice().abs * u_;
    const auto& head = ts.qset.front(port);
    const std::int64_t finish = now_ + tx_ns(head.bytes, cfg_.link_gbps);
    if (finish > slice_start + s_.usable_ns()) return;
    ts.busy[port] = 1;
    push(finish, Ev::kPortDone, tor, port, static_cast<std::int64_t>(head.id));
  }

  void on_port_done(Tor tor, Port port, std::int64_t id) {
    auto& ts = tors_[tor];
    const auto qp = ts.qset.pop_active(port);
    if (static_cast<std::int64_t>(qp.id) != id) throw Error("port transmitted out of order");
    ts.busy[port] = 0;
    const Tor next =
        s_.port_target(ts.qset.current_slice().cycle_pos(s_.cycle_len()), tor, port);
    auto& p = pkts_[id];
    if (next < 0) throw Error("packet queued on an idle port");
    ++p.hops;
    if (p.phase == 1) p.phase = 2;
    p.loc = Loc::kFiber;
    push(now_ + cfg_.prop_delay_ns, Ev::kTorArrive, next, 0, id);
    start_port(tor, port);
  }

  void on_slice(std::int64_t slice) {
    if (slice > 0) {
      std::vector<std::pair<Tor, std::int64_t>> missed;
      for (Tor t = 0; t < s_.num_tors(); ++t) {
        auto& ts = tors_[t];
        for (const auto& [port, qp] :
             rotate_queues(ts.qset, ts.qstate, SliceTime{slice}, s_, drain_))
          missed.push_back({t, static_cast<std::int64_t>(qp.id)});
      }
      m_.missed_slices += static_cast<std::int64_t>(missed.size());
      for (const auto& [t, id] : missed) forward(id, t);
    }
    for (int h = 0; h < static_cast<int>(hosts_.size()); ++h) retry_held(h);
    sample();
    for (Tor t = 0; t < s_.num_tors(); ++t)
      for (Port p = 0; p < s_.uplinks(); ++p) start_port(t, p);
    const std::int64_t next = (slice + 1) * u_;
    if (next <= end_limit_ && (next <= cfg_.duration_ns || busy_network()))
      push(next, Ev::kSlice, 0, 0, slice + 1);
  }

  void sample() {
    std::size_t i = 0;
    std::int64_t queued = 0;
    for (Tor t = 0; t < s_.num_tors(); ++t) {
      const auto& q = tors_[t].qset;
      queued += q.total_bytes();
      for (Port p = 0; p < s_.uplinks(); ++p, ++i) {
        const int nonempty = q.nonempty_queues(p);
        if (nonempty > s_.cycle_len()) ++m_.queue_bound_violations;
        port_nonempty_[i].push_back(nonempty);
        port_occupancy_[i].push_back(q.port_occupancy(p));
      }
    }
    std::int64_t in_flight = 0, in_queues = 0;
    for (const auto& p : pkts_) {
      if (p.loc == Loc::kFree || p.loc == Loc::kNic) continue;
      in_flight += p.bytes;
      if (p.loc == Loc::kTorQueue) in_queues += p.bytes;
    }
    ++m_.conservation_samples;
    if (m_.injected_bytes != m_.delivered_bytes + m_.dropped_bytes + in_flight ||
        in_queues != queued)
      ++m_.conservation_violations;
  }

  void finish() {
    m_.end_ns = now_;
    std::vector<std::int64_t> fcts;
    for (std::size_t i = 0; i < flows_.size(); ++i) {
      const auto& r = m_.flows[i];
      if (r.fct_ns < 0) {
        ++m_.unfinished_flows;
        continue;
      }
      fcts.push_back(r.fct_ns);
      if (r.fct_ns < physical_fct_floor(s_, cfg_, flows_[i])) ++m_.lower_bound_violations;
    }
    m_.fct_p50_ns = static_cast<double>(percentile(fcts, 0.50));
    m_.fct_p99_ns = static_cast<double>(percentile(fcts, 0.99));
    m_.fct_p999_ns = static_cast<double>(percentile(fcts, 0.999));
    const double cap = cfg_.hosts(s_) * cfg_.link_gbps / 8.0 * cfg_.throughput_bin_ns;
    for (std::size_t b = 0; b < bins_.size(); ++b)
      m_.throughput.push_back({static_cast<std::int64_t>(b + 1) * cfg_.throughput_bin_ns,
                               bins_[b], static_cast<double>(bins_[b]) / cap});
    std::size_t i = 0;
    for (Tor t = 0; t < s_.num_tors(); ++t)
      for (Port p = 0; p < s_.uplinks(); ++p, ++i) {
        std::vector<std::int64_t> ne(port_nonempty_[i].begin(), port_nonempty_[i].end());
        PortQueueStats st;
        st.tor = t;
        st.port = p;
        st.max_nonempty_queues =
            ne.empty() ? 0 : static_cast<int>(*std::max_element(ne.begin(), ne.end()));
        st.p99_nonempty_queues = static_cast<int>(percentile(ne, 0.99));
        const auto& occ = port_occupancy_[i];
        st.max_occupancy_bytes = occ.empty() ? 0 : *std::max_element(occ.begin(), occ.end());
        st.p99_occupancy_bytes = percentile(occ, 0.99);
        m_.ports.push_back(st);
      }
  }

  const Schedule& s_;
  const SimConfig& cfg_;
  const std::vector<Flow>& flows_;
  std::mt19937_64 rng_;
  std::int64_t u_ = 0;
  DrainParams drain_;
  LookupTables tables_;
  std::int64_t cutoff_ = -1;
  std::int64_t end_limit_ = 0;

  std::priority_queue<Event, std::vector<Event>, std::greater<Event>> events_;
  std::uint64_t seq_ = 0;
  std::int64_t now_ = 0;

  std::vector<Pkt> pkts_;
  std::vector<std::int64_t> free_;
  std::int64_t live_ = 0;
  std::vector<FlowState> fstate_;
  std::size_t next_flow_ = 0;
  std::vector<Host> hosts_;
  std::vector<TorState> tors_;
  std::vector<std::int64_t> bins_;
  std::vector<std::vector<int>> port_nonempty_;
  std::vector<std::vector<std::int64_t>> port_occupancy_;
  SimMetrics m_;
};

}  // namespace

SimMetrics run_simulation(const Schedule& sched, const SimConfig& cfg,
                          const std::vector<Flow>& flows) {
  Simulator sim(sched, cfg, flows);
  return sim.run();
}

std::vector<std::string> write_metrics(const SimMetrics& m, const std::string& dir) {
  namespace fs = std::filesystem;
  fs::create_directories(dir);
  std::vector<std::string> written;
  auto open = [&](const char* name) {
    const auto path = (fs::path(dir) / name).string();
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write '" + path + "'");
    written.push_back(path);
    return out;
  };
  {
    auto out = open("fct.csv");
    out << "flow_id,bytes,fct_ns,path_hops\n";
    for (const auto& f : m.flows)
      if (f.fct_ns >= 0)
        out << fmt::format("{},{},{},{}\n", f.id, f.bytes, f.fct_ns, f.path_hops);
  }
  {
    auto out = open("queues.csv");
    out << "tor,port,max_nonempty_queues,p99_nonempty_queues,max_occupancy_bytes,"
           "p99_occupancy_bytes\n";
    for (const auto& p : m.ports)
      out << fmt::format("{},{},{},{},{},{}\n", p.tor, p.port, p.max_nonempty_queues,
                         p.p99_nonempty_queues, p.max_occupancy_bytes,
                         p.p99_occupancy_bytes);
  }
  {
    auto out = open("throughput.csv");
    out << "time_ns,delivered_bytes,normalized\n";
    for (const auto& t : m.throughput)
      out << fmt::format("{},{},{:.6f}\n", t.time_ns, t.delivered_bytes, t.normalized);
  }
  {
    auto out = open("hops.csv");
    out << "hops,packets\n";
    for (std::size_t h = 0; h < m.hop_histogram.size(); ++h)
      out << fmt::format("{},{}\n", h, m.hop_histogram[h]);
  }
  {
    auto out = open("summary.csv");
    out << "metric,value\n";
    const std::pair<const char*, std::int64_t> rows[] = {
        {"flows", static_cast<std::int64_t>(m.flows.size())},
        {"unfinished_flows", m.unfinished_flows},
        {"injected_bytes", m.injected_bytes},
        {"delivered_bytes", m.delivered_bytes},
        {"dropped_bytes", m.dropped_bytes},
        {"dropped_packets", m.dropped_packets},
        {"rank_overflow_drops", m.rank_overflow_drops},
        {"rerouted_packets", m.rerouted_packets},
        {"missed_slices", m.missed_slices},
        {"reordered_packets", m.reordered_packets},
        {"conservation_samples", m.conservation_samples},
        {"conservation_violations", m.conservation_violations},
        {"queue_bound_violations", m.queue_bound_violations},
        {"lower_bound_violations", m.lower_bound_violations},
        {"cutoff_bytes", m.cutoff_bytes},
        {"end_ns", m.end_ns},
        {"events", m.events}};
    for (const auto& [k, v] : rows) out << k << ',' << v << '\n';
    out << fmt::format("fct_p50_ns,{:.0f}\nfct_p99_ns,{:.0f}\nfct_p999_ns,{:.0f}\n",
                       m.fct_p50_ns, m.fct_p99_ns, m.fct_p999_ns);
  }
  return written;
}

}  // namespace uro
