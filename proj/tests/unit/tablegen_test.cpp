#include <gtest/gtest.h>

#include <random>
#include <sstream>

#include "support/fixtures.hpp"
#include "uro/tablegen.hpp"

namespace uro {
namespace {

TEST(CompileTable, CalendarEntriesTowardTor4) {
  const auto s = testing::Calendar::schedule();
  ASSERT_TRUE(validate_schedule(s).ok());
  const auto t = compile_lookup_table(s, {}, 3);
  for (int arrival : {0, 1}) {
    const auto alts = t.lookup(1, arrival, 4);
    ASSERT_FALSE(alts.empty());
    EXPECT_EQ(alts[0].port, 2);
    EXPECT_EQ(alts[0].depart_pos, 1);
    EXPECT_EQ(alts[0].wait_slices, 1 - arrival);
  }
  const auto at2 = t.lookup(1, 2, 4);
  ASSERT_GE(at2.size(), 2u);
  EXPECT_EQ(at2[0], (Alternative{1, 2, 0}));
  EXPECT_EQ(at2[1], (Alternative{5, 4, 2}));
}

TEST(CompileTable, SelfRowsStayEmpty) {
  const auto s = generate_rotor_schedule(8, 2, 1000, 0);
  const auto t = compile_lookup_table(s, {}, 2);
  for (Tor tor = 0; tor < 8; ++tor)
    for (int pos = 0; pos < s.cycle_len(); ++pos) {
      EXPECT_TRUE(t.lookup(tor, pos, tor).empty());
      for (Tor dst = 0; dst < 8; ++dst)
        if (dst != tor) EXPECT_FALSE(t.lookup(tor, pos, dst).empty());
    }
  EXPECT_EQ(t.populated_rows(), 8 * 7 * s.cycle_len());
}

TEST(CompileTable, RankZeroIsFirstHopOfRoute) {
  std::mt19937_64 rng(31);
  for (int trial = 0; trial < 20; ++trial) {
    const int n = 3 + static_cast<int>(rng() % 8);
    const auto s = testing::random_schedule(rng, n, 2 <= n - 1 ? 2 : 1, trial % 2 == 0);
    const RoutingParams params{1 + static_cast<int>(rng() % 4)};
    const auto t = compile_lookup_table(s, params, 3);
    for (Tor a = 0; a < n; ++a)
      for (Tor b = 0; b < n; ++b)
        for (int pos = 0; pos < s.cycle_len() && a != b; ++pos) {
          const auto p = uro_route(s, a, b, {pos}, params);
          const auto alts = t.lookup(a, pos, b);
          ASSERT_FALSE(alts.empty());
          EXPECT_EQ(alts[0].port, p.hops[0].port);
          EXPECT_EQ(alts[0].wait_slices, p.hops[0].depart.abs - pos);
          EXPECT_LT(alts[0].wait_slices, s.cycle_len());
          EXPECT_EQ(s.port_target(alts[0].depart_pos, a, alts[0].port), p.hops[0].to);
        }
  }
}

TEST(CompileTable, LaterRanksFollowOracleFromNextSlice) {
  std::mt19937_64 rng(37);
  for (int trial = 0; trial < 20; ++trial) {
    const int n = 4 + static_cast<int>(rng() % 7);
    const auto s = testing::random_schedule(rng, n, 2, trial % 2 == 1);
    const auto t = compile_lookup_table(s, {}, 4);
    for (Tor a = 0; a < n; ++a)
      for (Tor b = 0; b < n; ++b)
        for (int pos = 0; pos < s.cycle_len() && a != b; ++pos) {
          const auto alts = t.lookup(a, pos, b);
          for (std::size_t j = 1; j < alts.size(); ++j) {
            EXPECT_GT(alts[j].wait_slices, alts[j - 1].wait_slices);
            EXPECT_LT(alts[j].wait_slices, s.cycle_len());
            const SliceTime from{pos + alts[j - 1].wait_slices + 1};
            const auto best = oracle_route(s, a, b, from);
            const auto p = uro_route(s, a, b, from);
            EXPECT_EQ(p.t_end(), best.t_end());
            EXPECT_EQ(p.hop_count(), best.hop_count());
            EXPECT_EQ(alts[j].port, p.hops[0].port);
            EXPECT_EQ(pos + alts[j].wait_slices, p.hops[0].depart.abs);
          }
        }
  }
}

TEST(CompileTable, SmallerKIsPrefix) {
  const auto s = generate_staggered_rotor_schedule(10, 2, 1000, 0);
  const auto t1 = compile_lookup_table(s, {}, 1);
  const auto t3 = compile_lookup_table(s, {}, 3);
  for (Tor a = 0; a < 10; ++a)
    for (Tor b = 0; b < 10; ++b)
      for (int pos = 0; pos < s.cycle_len(); ++pos) {
        const auto x = t1.lookup(a, pos, b);
        const auto y = t3.lookup(a, pos, b);
        ASSERT_LE(x.size(), y.size());
        for (std::size_t j = 0; j < x.size(); ++j) EXPECT_EQ(x[j], y[j]);
      }
}

TEST(CompileTable, SerialAndParallelAgree) {
  const auto s = generate_rotor_schedule(20, 3, 1000, 0);
  EXPECT_EQ(compile_lookup_table(s, {}, 3), compile_lookup_table_serial(s, {}, 3));
}

TEST(CompileTable, KIsCapped) {
  const auto s = generate_rotor_schedule(6, 1, 1000, 0);
  EXPECT_NO_THROW(compile_lookup_table(s, {}, 10));
  EXPECT_THROW(compile_lookup_table(s, {}, 11), InvalidParameter);
  EXPECT_THROW(compile_lookup_table(s, {}, 0), InvalidParameter);
}

TEST(CompileTable, EntriesDependOnCyclePositionOnly) {
  const auto s = generate_staggered_rotor_schedule(9, 2, 1000, 0);
  const int S = s.cycle_len();
  for (Tor b = 1; b < 9; ++b)
    for (int pos = 0; pos < S; ++pos) {
      const auto p = uro_route(s, 0, b, {pos + 3 * S});
      const auto alts = compute_alternatives(s, 0, pos, b, {}, 1);
      EXPECT_EQ(p.hops[0].depart.abs - (pos + 3 * S), alts[0].wait_slices);
      EXPECT_EQ(p.hops[0].port, alts[0].port);
    }
}

TEST(ChainWalk, UnboundedHopsReproducesRoute) {
  std::mt19937_64 rng(41);
  for (int trial = 0; trial < 40; ++trial) {
    const int n = 3 + static_cast<int>(rng() % 8);
    const auto s = testing::random_schedule(rng, n, n > 2 ? 2 : 1, trial % 2 == 0);
    const RoutingParams params{n - 1};
    const auto t = compile_lookup_table(s, params, 1);
    for (Tor a = 0; a < n; ++a)
      for (Tor b = 0; b < n; ++b)
        for (int t0 = 0; t0 < s.cycle_len() && a != b; ++t0) {
          const auto walk = chain_walk(s, t, a, b, {t0});
          const auto p = uro_route(s, a, b, {t0}, params);
          ASSERT_EQ(walk.hops.back().to, b);
          EXPECT_EQ(check_path(s, walk), "");
          EXPECT_EQ(walk.t_end(), p.t_end());
          EXPECT_EQ(walk.hop_count(), p.hop_count());
        }
  }
}

TEST(ChainWalk, NeverArrivesLaterThanRoute) {
  std::mt19937_64 rng(43);
  for (int trial = 0; trial < 40; ++trial) {
    const int n = 3 + static_cast<int>(rng() % 8);
    const auto s = testing::random_schedule(rng, n, n > 2 ? 2 : 1, true);
    const RoutingParams params{1 + static_cast<int>(rng() % 4)};
    const auto t = compile_lookup_table(s, params, 1);
    for (Tor a = 0; a < n; ++a)
      for (Tor b = 0; b < n; ++b)
        for (int t0 = 0; t0 < s.cycle_len() && a != b; ++t0) {
          const auto walk = chain_walk(s, t, a, b, {t0});
          ASSERT_EQ(walk.hops.back().to, b);
          EXPECT_LE(walk.t_end(), uro_route(s, a, b, {t0}, params).t_end());
        }
  }
}

TEST(TableStats, ResourceTableRows) {
  struct Row {
    int n, d, S;
    std::int64_t entries;
  };
  for (auto r : {Row{108, 6, 18, 1944}, Row{324, 12, 27, 8748}, Row{768, 24, 32, 24576},
                 Row{1024, 32, 32, 32768}}) {
    const auto st = table_stats(generate_rotor_schedule(r.n, r.d, 2000, 200), 3);
    EXPECT_EQ(st.cycle_len, r.S);
    EXPECT_EQ(st.max_queues_per_port, r.S);
    EXPECT_EQ(st.entries_per_tor, r.entries);
  }
}

TEST(TableStats, CompiledMatchesScheduleAccounting) {
  const auto s = generate_rotor_schedule(40, 4, 2000, 200);
  const auto from_tables = table_stats(compile_lookup_table(s, {}, 2));
  const auto from_sched = table_stats(s, 2);
  EXPECT_EQ(from_tables.entries_per_tor, from_sched.entries_per_tor);
  EXPECT_EQ(from_tables.max_queues_per_port, from_sched.max_queues_per_port);
  EXPECT_EQ(from_tables.populated_rows, from_sched.populated_rows);
  EXPECT_EQ(from_tables.alt_width, 2);
}

TEST(TableIo, RoundTrip) {
  const auto s = generate_rotor_schedule(8, 2, 1000, 0);
  const auto t = compile_lookup_table(s, {}, 3);
  std::stringstream buf;
  export_table(t, buf);
  EXPECT_EQ(import_table(buf), t);
}

TEST(TableIo, RowCountMatchesAlternatives) {
  const auto s = generate_rotor_schedule(12, 2, 1000, 0);
  const auto t = compile_lookup_table(s, {}, 1);
  std::stringstream buf;
  export_table(t, buf);
  int rows = 0;
  std::string line;
  while (std::getline(buf, line))
    if (!line.empty() && std::isdigit(static_cast<unsigned char>(line[0]))) ++rows;
  EXPECT_EQ(rows, t.alternative_count());
  EXPECT_EQ(rows, 12 * 11 * s.cycle_len());
}

TEST(TableIo, MalformedRankCitesLine) {
  std::istringstream in(
      "n=3\nd=1\nS=2\nk=2\n"
      "tor,arrival_pos,dst,rank,egress_port,depart_pos,wait_slices\n"
      "0,0,1,0,0,0,0\n"
      "0,0,1,x,0,1,1\n");
  try {
    import_table(in);
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 7);
  }
  std::istringstream gap(
      "n=3\nd=1\nS=2\nk=2\n"
      "tor,arrival_pos,dst,rank,egress_port,depart_pos,wait_slices\n"
      "0,0,1,1,0,0,0\n");
  EXPECT_THROW(import_table(gap), ParseError);
}

}  // namespace
}  // namespace uro
