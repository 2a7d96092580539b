#include "uro/router.hpp"

#include <algorithm>
#include <limits>
#include <random>

#include <fmt/format.h>

namespace uro {

std::string Path::format(const std::vector<std::string>& names) const {
  auto name = [&](Tor t) {
    return t < static_cast<Tor>(names.size()) ? names[t] : std::to_string(t);
  };
  std::string out;
  for (const auto& h : hops) {
    if (!out.empty()) out += ';';
    out += fmt::format("{},{}@{}", name(h.from), name(h.to), h.depart.abs);
  }
  return out;
}

std::string check_path(const Schedule& sched, const Path& p) {
  if (p.hops.empty()) return "empty path";
  if (p.hops.front().from != p.src) return "first hop does not leave src";
  if (p.hops.back().to != p.dst) return "last hop does not reach dst";
  if (p.hops.front().depart < p.t_start) return "departs before t_start";
  std::vector<char> seen(sched.num_tors(), 0);
  seen[p.src] = 1;
  for (std::size_t i = 0; i < p.hops.size(); ++i) {
    const auto& h = p.hops[i];
    if (i > 0 && h.from != p.hops[i - 1].to) return "hops are not contiguous";
    if (i > 0 && h.depart < p.hops[i - 1].depart) return "departures decrease";
    if (h.port < 0 || h.port >= sched.uplinks() ||
        sched.port_target(h.depart.cycle_pos(sched.cycle_len()), h.from,
                          h.port) != h.to)
      return fmt::format("no circuit {}->{} on port {} at slice {}", h.from,
                         h.to, h.port, h.depart.abs);
    if (seen[h.to]++) return fmt::format("ToR {} visited twice", h.to);
  }
  return {};
}

namespace {

// Builds a Path along `nodes`, departing every hop at its earliest circuit.
Path time_path(const Schedule& sched, const std::vector<Tor>& nodes,
               SliceTime t0) {
  Path p{nodes.front(), nodes.back(), t0, {}};
  SliceTime t = t0;
  for (std::size_t i = 0; i + 1 < nodes.size(); ++i) {
    t = sched.earliest_connection(nodes[i], nodes[i + 1], t);
    p.hops.push_back({nodes[i], nodes[i + 1],
                      sched.port_for(nodes[i], nodes[i + 1], t), t});
  }
  return p;
}

// Backtracking search from the destination. Candidate last hops are taken in
// order of their circuit to dst; for each, a depth-first search looks for the
// shortest upstream chain that meets every downstream deadline.
class Backtracker {
 public:
  Backtracker(const Schedule& sched, Tor src, Tor dst, SliceTime t0, int max_hops)
      : sched_(sched),
        src_(src),
        dst_(dst),
        t0_(t0),
        max_hops_(max_hops),
        visited_(sched.num_tors(), 0) {}

  std::vector<Tor> run() {
    struct Candidate {
      SliceTime t;
      Tor r;
    };
    std::vector<Candidate> cands;
    cands.reserve(sched_.num_tors());
    // Every r -> dst circuit within one cycle is a candidate last hop; pairs
    // connected more than once per cycle contribute several.
    const int S = sched_.cycle_len();
    const int p0 = t0_.cycle_pos(S);
    for (Tor r = 0; r < sched_.num_tors(); ++r) {
      if (r == dst_) continue;
      for (int pos : sched_.pair_positions(r, dst_))
        cands.push_back({t0_ + ((pos - p0 + S) % S), r});
    }
    std::sort(cands.begin(), cands.end(), [](const Candidate& a, const Candidate& b) {
      return a.t != b.t ? a.t < b.t : a.r < b.r;
    });

    std::vector<Tor> best;
    int min_hop = std::numeric_limits<int>::max();
    SliceTime min_time = cands.front().t;
    std::vector<Tor> chain;
    visited_[dst_] = 1;
    for (const auto& c : cands) {
      if (c.t > min_time && !best.empty()) break;
      min_time = c.t;
      if (c.r == src_) {
        if (1 < min_hop) {
          best = {src_, dst_};
          min_hop = 1;
        }
        continue;
      }
      visited_[c.r] = 1;
      const int h = subpath(c.r, c.t, 1, min_hop, chain);
      visited_[c.r] = 0;
      if (h > 0) {
        best = chain;
        best.push_back(dst_);
        min_hop = h;
      }
    }
    visited_[dst_] = 0;
    return best;
  }

 private:
  // Shortest chain src..r reaching r no later than `deadline`, given `tail`
  // hops already fixed from r to dst. Only chains with fewer than `bound`
  // total hops are accepted. Returns the total hop count, 0 when none.
  int subpath(Tor r, SliceTime deadline, int tail, int bound,
              std::vector<Tor>& out) {
    if (tail + 1 > max_hops_ || tail + 1 >= bound) return 0;
    if (sched_.latest_connection(src_, r, t0_, deadline)) {
      out.assign({src_, r});
      return tail + 1;
    }
    if (tail + 2 > max_hops_ || tail + 2 >= bound) return 0;
    int best = 0;
    std::vector<Tor> sub;
    for (Tor rp = 0; rp < sched_.num_tors(); ++rp) {
      if (visited_[rp] || rp == src_) continue;
      auto s = sched_.latest_connection(rp, r, t0_, deadline);
      if (!s) continue;
      visited_[rp] = 1;
      const int h = subpath(rp, *s, tail + 1, bound, sub);
      visited_[rp] = 0;
      if (h > 0) {
        best = h;
        bound = h;
        out = sub;
        out.push_back(r);
        if (h == tail + 2) break;  // nothing shorter exists below this level
      }
    }
    return best;
  }

  const Schedule& sched_;
  Tor src_, dst_;
  SliceTime t0_;
  int max_hops_;
  std::vector<char> visited_;
};

void check_endpoints(const Schedule& sched, Tor src, Tor dst) {
  if (src < 0 || src >= sched.num_tors() || dst < 0 || dst >= sched.num_tors())
    throw InvalidParameter(fmt::format("ToR id out of range ({}, {})", src, dst));
  if (src == dst) throw InvalidParameter("src and dst must differ");
}

}  // namespace

Path uro_route(const Schedule& sched, Tor src, Tor dst, SliceTime t0,
               const RoutingParams& params) {
  check_endpoints(sched, src, dst);
  if (params.max_hops < 1) throw InvalidParameter("max_hops must be >= 1");
  auto nodes = Backtracker(sched, src, dst, t0, params.max_hops).run();
  return time_path(sched, nodes, t0);
}

Path oracle_route(const Schedule& sched, Tor src, Tor dst, SliceTime t0,
                  const RoutingParams& params) {
  check_endpoints(sched, src, dst);
  const int n = sched.num_tors();
  const int m = params.max_hops;
  constexpr std::int64_t kInf = std::numeric_limits<std::int64_t>::max();
  // arrive[h][v]: earliest slice at which v holds the packet using <= h hops.
  std::vector<std::vector<std::int64_t>> arrive(m + 1, std::vector<std::int64_t>(n, kInf));
  std::vector<std::vector<Tor>> parent(m + 1, std::vector<Tor>(n, -1));
  std::vector<std::vector<int>> layer(m + 1, std::vector<int>(n, 0));
  arrive[0][src] = t0.abs;
  for (int h = 1; h <= m; ++h) {
    arrive[h] = arrive[h - 1];
    layer[h] = layer[h - 1];
    for (Tor u = 0; u < n; ++u) {
      if (arrive[h - 1][u] == kInf || u == dst) continue;
      for (Tor w = 0; w < n; ++w) {
        if (w == u || w == src || !sched.connected(u, w)) continue;
        const auto t = sched.earliest_connection(u, w, {arrive[h - 1][u]}).abs;
        if (t < arrive[h][w]) {
          arrive[h][w] = t;
          parent[h][w] = u;
          layer[h][w] = h;
        }
      }
    }
  }
  if (arrive[m][dst] == kInf) return Path{src, dst, t0, {}};
  int h = layer[m][dst];
  std::vector<Tor> nodes{dst};
  Tor v = dst;
  while (v != src) {
    const Tor u = parent[h][v];
    nodes.push_back(u);
    v = u;
    h = layer[h - 1][v];
  }
  std::reverse(nodes.begin(), nodes.end());
  return time_path(sched, nodes, t0);
}

std::vector<Path> vlb_realizations(const Schedule& sched, Tor src, Tor dst,
                                   SliceTime t0) {
  check_endpoints(sched, src, dst);
  std::vector<Path> out;
  for (const auto& c : sched.circuits(t0.cycle_pos(sched.cycle_len()), src)) {
    Path p{src, dst, t0, {{src, c.dst, c.port, t0}}};
    if (c.dst != dst) {
      const auto t = sched.earliest_connection(c.dst, dst, t0);
      p.hops.push_back({c.dst, dst, sched.port_for(c.dst, dst, t), t});
    }
    out.push_back(std::move(p));
  }
  return out;
}

Path vlb_route(const Schedule& sched, Tor src, Tor dst, SliceTime t0,
               std::uint64_t seed) {
  auto options = vlb_realizations(sched, src, dst, t0);
  if (options.empty())
    throw NoActiveCircuit(fmt::format("ToR {} has no circuit at slice {}", src,
                                      t0.abs));
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::size_t> pick(0, options.size() - 1);
  return std::move(options[pick(rng)]);
}

}  // namespace uro
