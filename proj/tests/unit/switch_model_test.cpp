#include <gtest/gtest.h>

#include <sstream>

#include "support/fixtures.hpp"
#include "uro/switch_model.hpp"

namespace uro {
namespace {

struct CalendarSwitch : ::testing::Test {
  Schedule sched = testing::Calendar::schedule(2000);
  LookupTables tables = compile_lookup_table(sched, {}, 3);
  CalendarQueueSet qset{sched.uplinks(), sched.cycle_len(), SliceTime{2}};
  QueueStateTable qstate{sched.uplinks(), sched.cycle_len()};
};

TEST_F(CalendarSwitch, FullRankZeroFallsThroughToSecondBestPath) {
  ASSERT_EQ(qset.active_index(), 0);
  qstate.set(1, 0, QueueState::kFull);
  ForwardCounters c;
  const auto r = classify_and_enqueue(1, 4, {7, 1500}, SliceTime{2}, tables, qset, qstate, &c);
  ASSERT_EQ(r.outcome, EnqueueOutcome::kEnqueued);
  EXPECT_EQ(r.port, 5);
  EXPECT_EQ(r.rank, 2);
  EXPECT_EQ(r.queue, 2);
  EXPECT_EQ(r.alternative, 1);
  EXPECT_EQ(qset.occupancy(5, 2), 1500);
  EXPECT_EQ(c.rerouted, 1);
}

TEST_F(CalendarSwitch, UnfullRankZeroIsTaken) {
  const auto r = classify_and_enqueue(1, 4, {7, 1500}, SliceTime{2}, tables, qset, qstate);
  EXPECT_EQ(r.port, 1);
  EXPECT_EQ(r.queue, 0);
  EXPECT_EQ(r.alternative, 0);
}

TEST_F(CalendarSwitch, ArrivalThreeDepartsNextSlice) {
  rotate_queues(qset, qstate, SliceTime{3}, sched, {});
  ASSERT_EQ(qset.active_index(), 1);
  const auto r = classify_and_enqueue(1, 4, {9, 100}, SliceTime{3}, tables, qset, qstate);
  ASSERT_EQ(r.outcome, EnqueueOutcome::kEnqueued);
  EXPECT_EQ(r.port, 5);
  EXPECT_EQ(r.rank, 1);
  EXPECT_EQ(r.queue, (qset.active_index() + 1) % qset.queues());
  EXPECT_EQ(r.queue, 2);
}

TEST_F(CalendarSwitch, AllAlternativesFullDrops) {
  for (Port p = 0; p < sched.uplinks(); ++p)
    for (int q = 0; q < qset.queues(); ++q) qstate.set(p, q, QueueState::kFull);
  ForwardCounters c;
  const auto r = classify_and_enqueue(1, 4, {1, 1500}, SliceTime{2}, tables, qset, qstate, &c);
  EXPECT_EQ(r.outcome, EnqueueOutcome::kDropped);
  EXPECT_EQ(c.dropped, 1);
  EXPECT_EQ(qset.total_bytes(), 0);
}

TEST(ClassifyAndEnqueue, RankBeyondQueueCountIsOverflow) {
  const auto s = generate_rotor_schedule(6, 1, 1000, 0);
  const auto t = compile_lookup_table(s, {1}, 1);
  CalendarQueueSet qset(1, 2);
  QueueStateTable qstate(1, 2);
  ForwardCounters c;
  const auto r = classify_and_enqueue(0, 5, {1, 100}, SliceTime{0}, t, qset, qstate, &c);
  EXPECT_EQ(r.outcome, EnqueueOutcome::kRankOverflow);
  EXPECT_EQ(c.rank_overflow, 1);
}

TEST(RotateQueues, IncrementsModuloQueueCount) {
  CalendarQueueSet qset(2, 5);
  EXPECT_EQ(qset.active_index(), 0);
  EXPECT_FALSE(qset.paused(0, 0));
  EXPECT_TRUE(qset.paused(1, 3));
  qset.rotate(SliceTime{1});
  EXPECT_EQ(qset.active_index(), 1);
  EXPECT_TRUE(qset.paused(0, 0));
  for (int i = 2; i <= 5; ++i) qset.rotate(SliceTime{i});
  EXPECT_EQ(qset.active_index(), 0);
}

TEST(RotateQueues, SkippedSliceThrows) {
  CalendarQueueSet qset(1, 4);
  EXPECT_THROW(qset.rotate(SliceTime{2}), OutOfOrderSlice);
  EXPECT_THROW(qset.rotate(SliceTime{0}), OutOfOrderSlice);
}

TEST(RotateQueues, LeftoverPacketsAreReturnedAsMisses) {
  CalendarQueueSet qset(2, 3);
  qset.enqueue(1, 0, {4, 700});
  qset.enqueue(1, 1, {5, 800});
  const auto missed = qset.rotate(SliceTime{1});
  ASSERT_EQ(missed.size(), 1u);
  EXPECT_EQ(missed[0].first, 1);
  EXPECT_EQ(missed[0].second.id, 4u);
  EXPECT_EQ(qset.total_bytes(), 800);
  EXPECT_EQ(qset.front(1).id, 5u);
}

TEST(QueueFullCheck, DrainBeyondWindowIsFull) {
  const auto s = generate_rotor_schedule(4, 1, 2000, 0);
  CalendarQueueSet qset(1, 3);
  qset.enqueue(0, 1, {1, 30000});
  EXPECT_EQ(queue_full_check(qset, 0, 1, 0, s, {100.0}), QueueState::kFull);
  EXPECT_EQ(queue_full_check(qset, 0, 2, 0, s, {100.0}), QueueState::kUnfull);
}

TEST(QueueFullCheck, ExactFitIsUnfull) {
  const auto s = generate_rotor_schedule(4, 1, 2000, 0);
  CalendarQueueSet qset(1, 3);
  qset.enqueue(0, 1, {1, 25000});
  EXPECT_EQ(queue_full_check(qset, 0, 1, 0, s, {100.0}), QueueState::kUnfull);
  EXPECT_EQ(queue_full_check(qset, 0, 1, 0, s, {100.0}, 1), QueueState::kFull);
}

TEST(QueueFullCheck, ActiveQueueUsesRemainingWindow) {
  const auto s = generate_rotor_schedule(4, 1, 2000, 200);
  CalendarQueueSet qset(1, 3);
  qset.enqueue(0, 0, {1, 10000});  // 800 ns
  EXPECT_EQ(queue_full_check(qset, 0, 0, 1000, s, {100.0}), QueueState::kUnfull);
  EXPECT_EQ(queue_full_check(qset, 0, 0, 1001, s, {100.0}), QueueState::kFull);
  EXPECT_EQ(queue_full_check(qset, 0, 0, 1900, s, {100.0}), QueueState::kFull);
}

TEST(QueueFullCheck, StalenessShrinksFutureWindow) {
  const auto s = generate_rotor_schedule(4, 1, 2000, 0);
  CalendarQueueSet qset(1, 3);
  qset.enqueue(0, 2, {1, 24000});  // 1920 ns
  EXPECT_EQ(queue_full_check(qset, 0, 2, 0, s, {100.0, 0}), QueueState::kUnfull);
  EXPECT_EQ(queue_full_check(qset, 0, 2, 0, s, {100.0, 100}), QueueState::kFull);
}

TEST(CalendarQueueSet, ByteAccountingBalances) {
  CalendarQueueSet qset(2, 4);
  std::int64_t in = 0, out = 0;
  for (int i = 0; i < 10; ++i) {
    qset.enqueue(i % 2, 0, {static_cast<std::uint64_t>(i), 100 + i});
    in += 100 + i;
  }
  EXPECT_EQ(qset.nonempty_queues(0), 1);
  out += qset.pop_active(0).bytes;
  out += qset.pop_active(1).bytes;
  EXPECT_EQ(in, out + qset.total_bytes());
  EXPECT_EQ(qset.port_occupancy(0) + qset.port_occupancy(1), qset.total_bytes());
}

TEST(QueueSnapshot, RowsForNonEmptyQueues) {
  const auto s = generate_rotor_schedule(4, 1, 2000, 0);
  CalendarQueueSet qset(1, 3);
  QueueStateTable qstate(1, 3);
  qset.enqueue(0, 1, {1, 30000});
  qstate.refresh(qset, 0, s, {100.0});
  std::ostringstream out;
  write_queue_snapshot(out, SliceTime{7}, 2, qset, qstate);
  EXPECT_EQ(out.str(), "7,2,0,1,30000,F\n");
}

}  // namespace
}  // namespace uro
