#include "uro/switch_model.hpp"

#include <algorithm>
#include <ostream>

#include <fmt/format.h>

namespace uro {

CalendarQueueSet::CalendarQueueSet(int ports, int queues, SliceTime start)
    : ports_(ports), queues_(queues), current_(start) {
  if (ports < 1 || queues < 1) throw InvalidParameter("need at least one port and queue");
  fifos_.resize(static_cast<std::size_t>(ports) * queues);
  bytes_.assign(fifos_.size(), 0);
}

bool CalendarQueueSet::paused(Port port, int queue) const {
  (void)port;
  return queue != active_;
}

void CalendarQueueSet::enqueue(Port port, int queue, QueuedPacket pkt) {
  if (port < 0 || port >= ports_ || queue < 0 || queue >= queues_)
    throw InvalidParameter(fmt::format("no queue {} on port {}", queue, port));
  if (pkt.bytes <= 0) throw InvalidParameter("packet size must be positive");
  bytes_[slot(port, queue)] += pkt.bytes;
  total_ += pkt.bytes;
  fifos_[slot(port, queue)].push_back(pkt);
}

const QueuedPacket& CalendarQueueSet::front(Port port) const {
  return fifo(port, active_).front();
}

QueuedPacket CalendarQueueSet::pop_active(Port port) {
  auto& q = fifos_[slot(port, active_)];
  const QueuedPacket pkt = q.front();
  q.pop_front();
  bytes_[slot(port, active_)] -= pkt.bytes;
  total_ -= pkt.bytes;
  return pkt;
}

std::int64_t CalendarQueueSet::port_occupancy(Port port) const {
  std::int64_t total = 0;
  for (int q = 0; q < queues_; ++q) total += bytes_[slot(port, q)];
  return total;
}

int CalendarQueueSet::nonempty_queues(Port port) const {
  int count = 0;
  for (int q = 0; q < queues_; ++q) count += !fifo(port, q).empty();
  return count;
}

std::vector<std::pair<Port, QueuedPacket>> CalendarQueueSet::rotate(SliceTime new_slice) {
  if (new_slice.abs != current_.abs + 1)
    throw OutOfOrderSlice(fmt::format("rotation from slice {} to {}", current_.abs,
                                      new_slice.abs));
  std::vector<std::pair<Port, QueuedPacket>> missed;
  for (Port p = 0; p < ports_; ++p) {
    auto& q = fifos_[slot(p, active_)];
    for (const auto& pkt : q) missed.push_back({p, pkt});
    total_ -= bytes_[slot(p, active_)];
    bytes_[slot(p, active_)] = 0;
    q.clear();
  }
  active_ = (active_ + 1) % queues_;
  current_ = new_slice;
  return missed;
}

const char* to_string(QueueState s) { return s == QueueState::kFull ? "F" : "U"; }

QueueState queue_full_check(const CalendarQueueSet& qset, Port port, int queue,
                            std::int64_t now_within_slice_ns, const Schedule& sched,
                            const DrainParams& drain, std::int64_t probe_bytes) {
  const double drain_ns =
      static_cast<double>(qset.occupancy(port, queue) + probe_bytes) * 8.0 / drain.link_gbps;
  const std::int64_t usable = sched.usable_ns();
  const std::int64_t window =
      queue == qset.active_index()
          ? std::max<std::int64_t>(0, usable - now_within_slice_ns)
          : usable - drain.staleness_adjust_ns;
  return drain_ns > static_cast<double>(window) ? QueueState::kFull : QueueState::kUnfull;
}

QueueStateTable::QueueStateTable(int ports, int queues)
    : queues_(queues), bits_(static_cast<std::size_t>(ports) * queues, 0) {}

void QueueStateTable::refresh(const CalendarQueueSet& qset,
                              std::int64_t now_within_slice_ns, const Schedule& sched,
                              const DrainParams& drain, std::int64_t probe_bytes) {
  for (Port p = 0; p < qset.ports(); ++p)
    for (int q = 0; q < qset.queues(); ++q)
      set(p, q, queue_full_check(qset, p, q, now_within_slice_ns, sched, drain, probe_bytes));
}

EnqueueResult classify_and_enqueue(Tor tor, Tor dst, QueuedPacket pkt, SliceTime now,
                                   const LookupTables& tables, CalendarQueueSet& qset,
                                   const QueueStateTable& qstate,
                                   ForwardCounters* counters) {
  if (tor == dst) throw InvalidParameter("packet already at its destination ToR");
  const auto alts = tables.lookup(tor, now.cycle_pos(tables.cycle_len()), dst);
  EnqueueResult res;
  bool overflow = false;
  for (std::size_t j = 0; j < alts.size(); ++j) {
    const int rank = alts[j].wait_slices;
    if (rank >= qset.queues()) {
      overflow = true;
      continue;
    }
    const int q = qset.queue_for_rank(rank);
    if (qstate.get(alts[j].port, q) == QueueState::kFull) continue;
    qset.enqueue(alts[j].port, q, pkt);
    res = {EnqueueOutcome::kEnqueued, alts[j].port, q, rank, static_cast<int>(j)};
    break;
  }
  if (res.outcome != EnqueueOutcome::kEnqueued && overflow)
    res.outcome = EnqueueOutcome::kRankOverflow;
  if (counters) {
    switch (res.outcome) {
      case EnqueueOutcome::kEnqueued:
        ++counters->enqueued;
        if (res.alternative > 0) ++counters->rerouted;
        break;
      case EnqueueOutcome::kDropped:
        ++counters->dropped;
        break;
      case EnqueueOutcome::kRankOverflow:
        ++counters->rank_overflow;
        break;
    }
  }
  return res;
}

std::vector<std::pair<Port, QueuedPacket>> rotate_queues(CalendarQueueSet& qset,
                                                         QueueStateTable& qstate,
                                                         SliceTime new_slice,
                                                         const Schedule& sched,
                                                         const DrainParams& drain) {
  auto missed = qset.rotate(new_slice);
  qstate.refresh(qset, 0, sched, drain);
  return missed;
}

void write_queue_snapshot(std::ostream& out, SliceTime slice, Tor tor,
                          const CalendarQueueSet& qset, const QueueStateTable& qstate) {
  for (Port p = 0; p < qset.ports(); ++p)
    for (int q = 0; q < qset.queues(); ++q)
      if (!qset.empty(p, q))
        out << fmt::format("{},{},{},{},{},{}\n", slice.abs, tor, p, q,
                           qset.occupancy(p, q), to_string(qstate.get(p, q)));
}

}  // namespace uro
