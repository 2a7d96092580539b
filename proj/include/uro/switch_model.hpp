#pragma once

#include <cstdint>
#include <deque>
#include <iosfwd>
#include <span>
#include <vector>

#include "uro/schedule.hpp"
#include "uro/tablegen.hpp"

namespace uro {

struct QueuedPacket {
  std::uint64_t id = 0;
  std::int64_t bytes = 0;
};

// Per-egress-port calendar queues of one ToR. Queue (active + r) mod Q holds
// packets departing r slices from the current one; only the active queue of
// each port transmits, all others are paused.
class CalendarQueueSet {
 public:
  CalendarQueueSet(int ports, int queues, SliceTime start = {});

  int ports() const { return ports_; }
  int queues() const { return queues_; }
  int active_index() const { return active_; }
  SliceTime current_slice() const { return current_; }
  bool paused(Port port, int queue) const;

  // Queue index that serves `rank` slices from now.
  int queue_for_rank(int rank) const { return (active_ + rank) % queues_; }

  void enqueue(Port port, int queue, QueuedPacket pkt);
  bool empty(Port port, int queue) const { return fifo(port, queue).empty(); }
  const QueuedPacket& front(Port port) const;
  // Removes the head of the port's active queue.
  QueuedPacket pop_active(Port port);

  std::int64_t occupancy(Port port, int queue) const {
    return bytes_[slot(port, queue)];
  }
  std::int64_t port_occupancy(Port port) const;
  int nonempty_queues(Port port) const;
  std::int64_t total_bytes() const { return total_; }

  // Pauses the active queue of every port and resumes the next one. Packets
  // still held by the queue that was active are returned: they missed their
  // slice. Throws OutOfOrderSlice unless new_slice follows the current one.
  std::vector<std::pair<Port, QueuedPacket>> rotate(SliceTime new_slice);

 private:
  std::size_t slot(Port port, int queue) const {
    return static_cast<std::size_t>(port) * queues_ + queue;
  }
  const std::deque<QueuedPacket>& fifo(Port port, int queue) const {
    return fifos_[slot(port, queue)];
  }

  int ports_;
  int queues_;
  int active_ = 0;
  SliceTime current_;
  std::vector<std::deque<QueuedPacket>> fifos_;
  std::vector<std::int64_t> bytes_;
  std::int64_t total_ = 0;
};

enum class QueueState : std::uint8_t { kUnfull = 0, kFull = 1 };

const char* to_string(QueueState s);

struct DrainParams {
  double link_gbps = 100.0;
  // Subtracted from the window of future queues (ingress estimator lag).
  std::int64_t staleness_adjust_ns = 0;
};

// Full iff the time to drain occupancy + probe_bytes exceeds the remaining
// window: the whole usable window for a future queue, the part of it after
// `now_within_slice_ns` for the active one. Fitting exactly is Unfull.
QueueState queue_full_check(const CalendarQueueSet& qset, Port port, int queue,
                            std::int64_t now_within_slice_ns, const Schedule& sched,
                            const DrainParams& drain, std::int64_t probe_bytes = 0);

// One Full/Unfull bit per (port, queue).
class QueueStateTable {
 public:
  QueueStateTable(int ports, int queues);

  QueueState get(Port port, int queue) const {
    return static_cast<QueueState>(bits_[static_cast<std::size_t>(port) * queues_ + queue]);
  }
  void set(Port port, int queue, QueueState s) {
    bits_[static_cast<std::size_t>(port) * queues_ + queue] = static_cast<std::uint8_t>(s);
  }
  // Recomputes every bit with queue_full_check.
  void refresh(const CalendarQueueSet& qset, std::int64_t now_within_slice_ns,
               const Schedule& sched, const DrainParams& drain,
               std::int64_t probe_bytes = 0);
  const std::vector<std::uint8_t>& bits() const { return bits_; }

 private:
  int queues_;
  std::vector<std::uint8_t> bits_;
};

enum class EnqueueOutcome { kEnqueued, kDropped, kRankOverflow };

struct EnqueueResult {
  EnqueueOutcome outcome = EnqueueOutcome::kDropped;
  Port port = -1;
  int queue = -1;
  int rank = -1;         // slices until departure
  int alternative = -1;  // index of the alternative taken
};

struct ForwardCounters {
  std::int64_t enqueued = 0;
  std::int64_t dropped = 0;
  std::int64_t rank_overflow = 0;
  std::int64_t rerouted = 0;  // took an alternative other than rank 0
};

// One-shot lookup: all alternatives of (now's cycle position, dst) are read
// with one snapshot of the state bits; the first whose queue is Unfull wins.
// A rank of Q or more would alias onto the active queue and is dropped.
EnqueueResult classify_and_enqueue(Tor tor, Tor dst, QueuedPacket pkt, SliceTime now,
                                   const LookupTables& tables, CalendarQueueSet& qset,
                                   const QueueStateTable& qstate,
                                   ForwardCounters* counters = nullptr);

// Rotation driven by the per-slice timer. Returns the packets that missed the
// slice that just ended.
std::vector<std::pair<Port, QueuedPacket>> rotate_queues(CalendarQueueSet& qset,
                                                         QueueStateTable& qstate,
                                                         SliceTime new_slice,
                                                         const Schedule& sched,
                                                         const DrainParams& drain);

// Rows `slice,tor,port,queue,occupancy_bytes,state` for the non-empty queues.
void write_queue_snapshot(std::ostream& out, SliceTime slice, Tor tor,
                          const CalendarQueueSet& qset, const QueueStateTable& qstate);
constexpr const char* kQueueSnapshotColumns =
    "slice,tor,port,queue,occupancy_bytes,state";

}  // namespace uro
