#include <gtest/gtest.h>

#include <random>
#include <sstream>

#include "support/fixtures.hpp"
#include "uro/schedule.hpp"

namespace uro {
namespace {

TEST(RotorSchedule, CycleLengthMatchesResourceTable) {
  EXPECT_EQ(generate_rotor_schedule(108, 6, 2000, 200).cycle_len(), 18);
  EXPECT_EQ(generate_rotor_schedule(324, 12, 2000, 200).cycle_len(), 27);
  EXPECT_EQ(generate_rotor_schedule(768, 24, 2000, 200).cycle_len(), 32);
  EXPECT_EQ(generate_rotor_schedule(1024, 32, 2000, 200).cycle_len(), 32);
}

TEST(RotorSchedule, FourTorSingleUplink) {
  const auto s = generate_rotor_schedule(4, 1, 1000, 0);
  ASSERT_EQ(s.cycle_len(), 3);
  EXPECT_EQ(s.port_target(0, 0, 0), 1);
  EXPECT_EQ(s.port_target(1, 0, 0), 2);
  EXPECT_EQ(s.port_target(2, 0, 0), 3);
}

TEST(RotorSchedule, EveryOrderedPairExactlyOncePerCycle) {
  for (int n = 2; n <= 17; ++n)
    for (int d = 1; d <= std::min(4, n - 1); ++d) {
      const auto s = generate_rotor_schedule(n, d, 1000, 0);
      EXPECT_TRUE(validate_schedule(s).ok()) << n << "," << d;
      for (Tor i = 0; i < n; ++i)
        for (Tor j = 0; j < n; ++j)
          if (i != j) EXPECT_EQ(s.pair_positions(i, j).size(), 1u) << n << "," << d;
      EXPECT_TRUE(s.is_circulant());
    }
}

TEST(RotorSchedule, PartialFinalSliceLeavesPortsIdle) {
  const auto s = generate_rotor_schedule(8, 3, 1000, 0);  // 7 peers, 3 slices
  ASSERT_EQ(s.cycle_len(), 3);
  EXPECT_EQ(s.circuits(2, 0).size(), 1u);
  EXPECT_EQ(s.port_target(2, 0, 1), -1);
}

TEST(RotorSchedule, RejectsBadParameters) {
  EXPECT_THROW(generate_rotor_schedule(1, 1, 1000, 0), InvalidParameter);
  EXPECT_THROW(generate_rotor_schedule(8, 0, 1000, 0), InvalidParameter);
  EXPECT_THROW(generate_rotor_schedule(8, 8, 1000, 0), InvalidParameter);
  EXPECT_THROW(generate_rotor_schedule(8, 2, 1000, 1000), InvalidParameter);
}

TEST(StaggeredSchedule, CircuitsHoldForUplinkCountSlices) {
  const auto s = generate_staggered_rotor_schedule(13, 3, 1000, 0);
  EXPECT_EQ(s.cycle_len(), 12);
  EXPECT_TRUE(validate_schedule(s).ok());
  EXPECT_TRUE(s.is_circulant());
  for (Tor j = 1; j < 13; ++j) {
    auto pos = s.pair_positions(0, j);
    ASSERT_EQ(pos.size(), 3u) << j;
    // Consecutive modulo the cycle.
    int runs = 0;
    for (std::size_t i = 0; i < pos.size(); ++i) {
      const int prev = (pos[i] + s.cycle_len() - 1) % s.cycle_len();
      if (std::find(pos.begin(), pos.end(), prev) == pos.end()) ++runs;
    }
    EXPECT_EQ(runs, 1) << j;
  }
}

Schedule three_tor(std::vector<CircuitRecord> extra = {}) {
  std::vector<CircuitRecord> recs{{0, 0, 0, 1}, {0, 1, 0, 2}, {0, 2, 0, 0},
                                  {1, 0, 0, 2}, {1, 2, 0, 1}, {1, 1, 0, 0}};
  recs.insert(recs.end(), extra.begin(), extra.end());
  return Schedule(3, 2, 2, 1000, 0, recs);
}

TEST(Validate, CleanScheduleHasEmptyReport) {
  EXPECT_TRUE(validate_schedule(generate_rotor_schedule(8, 1, 1000, 0)).ok());
  EXPECT_TRUE(validate_schedule(three_tor()).ok());
}

TEST(Validate, SelfLoopNamesSliceTorPort) {
  const auto rep = validate_schedule(three_tor({{1, 0, 1, 0}}));
  ASSERT_FALSE(rep.ok());
  bool found = false;
  for (const auto& v : rep.violations)
    if (v.kind == ViolationKind::kSelfLoop) {
      EXPECT_EQ(v.slice_pos, 1);
      EXPECT_EQ(v.tor, 0);
      EXPECT_EQ(v.port, 1);
      found = true;
    }
  EXPECT_TRUE(found);
}

TEST(Validate, MissingPairIsCoverageViolation) {
  auto s = generate_rotor_schedule(8, 1, 1000, 0);
  std::vector<CircuitRecord> recs;
  for (const auto& r : s.records())
    if (!((r.src == 0 && r.dst == 5) || (r.src == 5 && r.dst == 0))) recs.push_back(r);
  Schedule broken(8, 1, s.cycle_len(), 1000, 0, recs);
  const auto rep = validate_schedule(broken);
  bool coverage = false;
  for (const auto& v : rep.violations)
    if (v.kind == ViolationKind::kCoverage && v.tor == 0 && v.peer == 5) coverage = true;
  EXPECT_TRUE(coverage);
}

TEST(Validate, PortReuseAndDegreeImbalance) {
  const auto rep = validate_schedule(three_tor({{0, 0, 0, 2}}));
  bool reuse = false, degree = false;
  for (const auto& v : rep.violations) {
    reuse |= v.kind == ViolationKind::kPortReuse;
    degree |= v.kind == ViolationKind::kDegreeImbalance;
  }
  EXPECT_TRUE(reuse);
  EXPECT_TRUE(degree);
}

TEST(EarliestConnection, RotorExamples) {
  const auto s = generate_rotor_schedule(4, 1, 1000, 0);
  EXPECT_EQ(s.earliest_connection(0, 1, {0}).abs, 0);
  EXPECT_EQ(s.earliest_connection(0, 1, {1}).abs, 3);
  EXPECT_EQ(s.earliest_connection(0, 3, {7}).abs, 8);
}

TEST(EarliestConnection, ThrowsForUnconnectedPair) {
  Schedule s(3, 1, 1, 1000, 0, {{0, 0, 0, 1}, {0, 1, 0, 0}});
  EXPECT_THROW(s.earliest_connection(0, 2, {0}), PairNeverConnected);
}

bool has_circuit(const Schedule& s, Tor i, Tor j, std::int64_t t) {
  for (const auto& c : s.circuits(static_cast<int>(t % s.cycle_len()), i))
    if (c.dst == j) return true;
  return false;
}

TEST(EarliestConnection, MatchesLinearScanOnRandomSchedules) {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 200; ++trial) {
    const int n = 2 + static_cast<int>(rng() % 10);
    const int d = 1 + static_cast<int>(rng() % std::min(3, n - 1));
    const auto s = testing::random_schedule(rng, n, d, trial % 2 == 1);
    ASSERT_TRUE(validate_schedule(s).ok());
    const int S = s.cycle_len();
    for (Tor i = 0; i < n; ++i)
      for (Tor j = 0; j < n; ++j) {
        if (i == j) continue;
        for (std::int64_t t0 = 0; t0 < 2 * S; ++t0) {
          std::int64_t expect = -1;
          for (std::int64_t t = t0; t < t0 + S && expect < 0; ++t)
            if (has_circuit(s, i, j, t)) expect = t;
          ASSERT_GE(expect, 0);
          EXPECT_EQ(s.earliest_connection(i, j, {t0}).abs, expect);
          const auto hi = SliceTime{t0 + static_cast<std::int64_t>(rng() % (2 * S))};
          std::int64_t latest = -1;
          for (std::int64_t t = hi.abs; t >= t0 && latest < 0; --t)
            if (has_circuit(s, i, j, t)) latest = t;
          const auto got = s.latest_connection(i, j, {t0}, hi);
          EXPECT_EQ(got ? got->abs : -1, latest);
        }
      }
  }
}

TEST(EarliestConnection, TotalOnThousandRandomSchedules) {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 1000; ++trial) {
    const int n = 2 + static_cast<int>(rng() % 15);
    const int d = 1 + static_cast<int>(rng() % std::min(3, n - 1));
    const auto s = testing::random_schedule(rng, n, d, true);
    ASSERT_TRUE(validate_schedule(s).ok());
    const Tor i = static_cast<Tor>(rng() % n);
    Tor j = static_cast<Tor>(rng() % n);
    if (j == i) j = (i + 1) % n;
    const auto t0 = SliceTime{static_cast<std::int64_t>(rng() % 100)};
    const auto t = s.earliest_connection(i, j, t0);
    EXPECT_LT(t.abs - t0.abs, s.cycle_len());
    EXPECT_GE(s.port_for(i, j, t), 0);
  }
}

TEST(ScheduleIo, RoundTrip) {
  const auto s = generate_rotor_schedule(8, 2, 2000, 200);
  std::stringstream buf;
  save_schedule(s, buf);
  EXPECT_EQ(load_schedule(buf), s);
}

TEST(ScheduleIo, HandWrittenThreeTor) {
  std::istringstream in(
      "# three ToRs\n"
      "n=3\nd=1\nS=2\nslice_ns=1000\nguard_ns=100\n"
      "slice_pos,src_tor,egress_port,dst_tor\n"
      "0,0,0,1\n0,1,0,2\n0,2,0,0\n1,0,0,2\n1,1,0,0\n1,2,0,1\n");
  const auto s = load_schedule(in);
  EXPECT_EQ(s.num_tors(), 3);
  EXPECT_EQ(s.cycle_len(), 2);
  EXPECT_EQ(s.guard_ns(), 100);
  EXPECT_EQ(s.port_target(0, 1, 0), 2);
  EXPECT_EQ(s.port_target(1, 2, 0), 1);
}

TEST(ScheduleIo, ZeroCycleIsRejected) {
  std::istringstream in(
      "n=3\nd=1\nS=0\nslice_ns=1000\nguard_ns=0\n"
      "slice_pos,src_tor,egress_port,dst_tor\n");
  EXPECT_THROW(load_schedule(in), Error);
}

TEST(ScheduleIo, UnknownKeyAndBadFieldCiteLine) {
  std::istringstream unknown("n=3\ncolor=blue\n");
  try {
    load_schedule(unknown);
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 2);
  }
  std::istringstream bad(
      "n=3\nd=1\nS=1\nslice_ns=1000\nguard_ns=0\n"
      "slice_pos,src_tor,egress_port,dst_tor\n0,0,x,1\n");
  try {
    load_schedule(bad);
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 7);
  }
}

TEST(ScheduleIo, InvalidScheduleRaisesValidationError) {
  std::istringstream in(
      "n=3\nd=1\nS=1\nslice_ns=1000\nguard_ns=0\n"
      "slice_pos,src_tor,egress_port,dst_tor\n0,0,0,1\n0,1,0,0\n");
  EXPECT_THROW(load_schedule(in), ValidationError);
}

TEST(ScheduleFixtures, ShippedBacktrackingFixtureMatchesBuilder) {
  EXPECT_EQ(load_schedule_file(std::string(URO_DATA_DIR) + "/fixtures/backtrack.sched"),
            testing::Backtrack::schedule());
}

}  // namespace
}  // namespace uro
