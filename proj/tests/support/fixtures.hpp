#pragma once

// Hand-built schedules and random generators shared by the unit tests, the
// acceptance binary and the benchmarks.

#include <algorithm>
#include <cstdint>
#include <limits>
#include <numeric>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "uro/router.hpp"
#include "uro/schedule.hpp"

namespace uro::testing {

// Builds a schedule from bidirectional circuits listed per slice. Each ToR
// takes its lowest free port unless an explicit port is given.
class BidirectionalBuilder {
 public:
  BidirectionalBuilder(int n, int d) : n_(n), d_(d) {}

  void link(int slice, Tor a, Tor b, Port pa = -1, Port pb = -1) {
    ensure(slice);
    add(slice, a, b, pa);
    add(slice, b, a, pb);
  }

  // Packs every still-unconnected unordered pair into new slices starting at
  // `first_slice`, at most `per_tor` circuits per ToR per slice.
  void fill_remaining(int first_slice, int per_tor) {
    std::vector<std::pair<Tor, Tor>> todo;
    for (Tor a = 0; a < n_; ++a)
      for (Tor b = a + 1; b < n_; ++b)
        if (!covered(a, b)) todo.push_back({a, b});
    int slice = first_slice;
    while (!todo.empty()) {
      ensure(slice);
      std::vector<int> deg(n_, 0);
      std::vector<std::pair<Tor, Tor>> rest;
      for (auto [a, b] : todo) {
        if (deg[a] < per_tor && deg[b] < per_tor) {
          link(slice, a, b);
          ++deg[a];
          ++deg[b];
        } else {
          rest.push_back({a, b});
        }
      }
      todo.swap(rest);
      ++slice;
    }
  }

  int slices() const { return static_cast<int>(used_.size()); }

  Schedule build(std::int64_t slice_ns = 1000, std::int64_t guard_ns = 0) const {
    return Schedule(n_, d_, slices(), slice_ns, guard_ns, recs_);
  }

 private:
  void ensure(int slice) {
    while (static_cast<int>(used_.size()) <= slice)
      used_.emplace_back(static_cast<std::size_t>(n_) * d_, 0);
  }
  void add(int slice, Tor from, Tor to, Port p) {
    auto& used = used_[slice];
    if (p < 0) {
      p = 0;
      while (used[static_cast<std::size_t>(from) * d_ + p]) ++p;
    }
    used[static_cast<std::size_t>(from) * d_ + p] = 1;
    recs_.push_back({slice, from, p, to});
  }
  bool covered(Tor a, Tor b) const {
    for (const auto& r : recs_)
      if (r.src == a && r.dst == b) return true;
    return false;
  }

  int n_, d_;
  std::vector<std::vector<char>> used_;
  std::vector<CircuitRecord> recs_;
};

// Backtracking example: source S, destination D.
struct Backtrack {
  static constexpr Tor S = 0, A = 1, B = 2, C = 3, E = 4, G = 5, F = 6, D = 7;
  static std::vector<std::string> names() {
    return {"S", "A", "B", "C", "E", "G", "F", "D"};
  }
  static Schedule schedule(std::int64_t slice_ns = 1000) {
    BidirectionalBuilder b(8, 3);
    b.link(1, S, G);
    b.link(1, S, C);
    b.link(2, G, B);
    b.link(2, C, E);
    b.link(3, S, B);
    b.link(4, E, A);
    b.link(5, B, D);
    b.link(5, A, D);
    b.link(6, S, A);
    b.link(7, S, D);
    b.fill_remaining(8, 2);
    return b.build(slice_ns);
  }
};

// Lookup-table example: ToR1 towards ToR4 with ToR1's ports fixed.
struct Calendar {
  static Schedule schedule(std::int64_t slice_ns = 1000) {
    BidirectionalBuilder b(5, 6);
    b.link(1, 1, 2, 2);
    b.link(1, 2, 4);
    b.link(2, 1, 4, 1);
    b.link(4, 1, 3, 5);
    b.link(4, 3, 4);
    b.link(5, 0, 1, -1, 0);
    b.link(5, 0, 2);
    b.link(5, 2, 3);
    b.link(6, 0, 3);
    b.link(6, 0, 4);
    return b.build(slice_ns);
  }
};

// Random valid schedules: a rotor with relabelled ToRs and shuffled slices,
// optionally perturbed with extra random matchings (which repeat pairs within
// a cycle) and idle slices.
inline Schedule random_schedule(std::mt19937_64& rng, int n, int d, bool perturb) {
  const Schedule base = generate_rotor_schedule(n, d, 1000, 0);
  std::vector<Tor> relabel(n);
  std::iota(relabel.begin(), relabel.end(), 0);
  std::shuffle(relabel.begin(), relabel.end(), rng);
  std::vector<int> order(base.cycle_len());
  std::iota(order.begin(), order.end(), 0);
  std::shuffle(order.begin(), order.end(), rng);
  std::vector<CircuitRecord> recs;
  for (const auto& r : base.records())
    recs.push_back({order[r.slice_pos], relabel[r.src], r.port, relabel[r.dst]});
  int cycle = base.cycle_len();
  if (perturb) {
    // Extra slices hold random permutations per port. Whole cycles are kept or
    // dropped so that in-degree stays equal to out-degree.
    const int extra = 1 + static_cast<int>(rng() % 3);
    for (int e = 0; e < extra; ++e) {
      const int slice = cycle++;
      if (rng() % 4 == 0) continue;  // idle slice
      for (Port k = 0; k < d; ++k) {
        std::vector<Tor> perm(n);
        std::iota(perm.begin(), perm.end(), 0);
        std::shuffle(perm.begin(), perm.end(), rng);
        std::vector<char> seen(n, 0);
        for (Tor i = 0; i < n; ++i) {
          if (seen[i] || perm[i] == i) continue;
          const bool keep = rng() % 3 != 0;
          for (Tor v = i; !seen[v]; v = perm[v]) {
            seen[v] = 1;
            if (keep) recs.push_back({slice, v, k, perm[v]});
          }
        }
      }
    }
    const int shift = static_cast<int>(rng() % cycle);
    for (auto& r : recs) r.slice_pos = (r.slice_pos + shift) % cycle;
  }
  return Schedule(n, d, cycle, 1000, 0, std::move(recs));
}

// Brute force over every simple node sequence of at most `max_hops` hops,
// timed greedily. Returns the lexicographically smallest (t_end, hops).
inline std::pair<std::int64_t, int> enumerate_best(const Schedule& s, Tor src,
                                                   Tor dst, SliceTime t0,
                                                   int max_hops) {
  std::pair<std::int64_t, int> best{std::numeric_limits<std::int64_t>::max(), 0};
  std::vector<char> used(s.num_tors(), 0);
  used[src] = 1;
  auto rec = [&](auto&& self, Tor at, SliceTime t, int hops) -> void {
    for (Tor next = 0; next < s.num_tors(); ++next) {
      if (used[next] || !s.connected(at, next)) continue;
      const SliceTime dep = s.earliest_connection(at, next, t);
      if (next == dst) {
        best = std::min(best, {dep.abs, hops + 1});
        continue;
      }
      if (hops + 1 >= max_hops) continue;
      used[next] = 1;
      self(self, next, dep, hops + 1);
      used[next] = 0;
    }
  };
  rec(rec, src, t0, 0);
  return best;
}

}  // namespace uro::testing
