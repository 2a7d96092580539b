#include <algorithm>
#include <cmath>
#include <numeric>

#include <fmt/format.h>

#include "uro/simnet.hpp"

namespace uro {

FailureMask::FailureMask(int num_tors, int uplinks)
    : num_tors_(num_tors),
      uplinks_(uplinks),
      links_(static_cast<std::size_t>(num_tors) * uplinks, 0),
      tors_(num_tors, 0),
      ocs_(uplinks, 0) {}

void FailureMask::fail_link(Tor tor, Port port) {
  auto& f = links_[static_cast<std::size_t>(tor) * uplinks_ + port];
  if (!f) ++failed_links_;
  f = 1;
}

void FailureMask::fail_tor(Tor tor) {
  if (!tors_[tor]) ++failed_tors_;
  tors_[tor] = 1;
}

void FailureMask::fail_ocs(Port port) {
  if (ocs_[port]) return;
  ocs_[port] = 1;
  ++failed_ocs_;
  for (Tor t = 0; t < num_tors_; ++t) links_[static_cast<std::size_t>(t) * uplinks_ + port] = 1;
}

namespace {

std::vector<int> draw(int population, double fraction, std::mt19937_64& rng) {
  if (!(fraction >= 0) || fraction > 1)
    throw InvalidParameter(fmt::format("failure fraction {} outside [0, 1]", fraction));
  std::vector<int> ids(population);
  std::iota(ids.begin(), ids.end(), 0);
  std::shuffle(ids.begin(), ids.end(), rng);
  ids.resize(static_cast<std::size_t>(std::llround(fraction * population)));
  return ids;
}

}  // namespace

FailureMask inject_failures(const Schedule& sched, const FailureSpec& spec,
                            std::uint64_t seed) {
  const int n = sched.num_tors(), d = sched.uplinks();
  FailureMask mask(n, d);
  std::mt19937_64 rng(seed);
  for (int id : draw(n * d, spec.link_fraction, rng)) mask.fail_link(id / d, id % d);
  for (int id : draw(n, spec.tor_fraction, rng)) mask.fail_tor(id);
  for (int id : draw(d, spec.ocs_fraction, rng)) mask.fail_ocs(id);
  return mask;
}

namespace {

bool walk_reaches(const Schedule& sched, const LookupTables& tables,
                  const FailureMask& mask, int k, int max_reroutes, Tor src, Tor dst,
                  int pos, std::vector<char>& seen) {
  const int S = sched.cycle_len();
  std::fill(seen.begin(), seen.end(), 0);
  seen[src] = 1;
  Tor at = src;
  std::int64_t t = pos;
  int reroutes = 0;
  for (int hops = 0; hops < sched.num_tors() - 1; ++hops) {
    std::int64_t arrival = t;
    Tor next = -1;
    std::int64_t depart = 0;
    while (next < 0) {
      const auto alts = tables.lookup(at, static_cast<int>(arrival % S), dst);
      if (alts.empty()) return false;
      const std::size_t width = std::min<std::size_t>(alts.size(), k);
      for (std::size_t j = 0; j < width && next < 0; ++j) {
        const std::int64_t dep = arrival + alts[j].wait_slices;
        const Tor to = sched.port_target(static_cast<int>(dep % S), at, alts[j].port);
        if (to >= 0 && mask.circuit_alive(at, alts[j].port, to)) {
          next = to;
          depart = dep;
        }
      }
      if (next >= 0) break;
      if (reroutes == max_reroutes) return false;
      ++reroutes;
      arrival = arrival + alts[width - 1].wait_slices + 1;
    }
    if (next == dst) return true;
    if (seen[next]) return false;
    seen[next] = 1;
    at = next;
    t = depart;
  }
  return false;
}

void check_loss_args(const LookupTables& tables, const FailureMask& mask, int k,
                     int max_reroutes) {
  if (k < 1 || k > tables.k())
    throw InvalidParameter(fmt::format("k must be in [1, {}]", tables.k()));
  if (max_reroutes < 0) throw InvalidParameter("max_reroutes must be >= 0");
  if (mask.num_tors() != tables.num_tors()) throw InvalidParameter("mask size mismatch");
}

std::int64_t surviving_triples(const Schedule& sched, const FailureMask& mask) {
  const std::int64_t alive = sched.num_tors() - mask.failed_tors();
  return alive * (alive - 1) * sched.cycle_len();
}

}  // namespace

double connectivity_loss(const Schedule& sched, const LookupTables& tables,
                         const FailureMask& mask, int k, int max_reroutes) {
  check_loss_args(tables, mask, k, max_reroutes);
  const int n = sched.num_tors();
  const std::int64_t total = surviving_triples(sched, mask);
  if (total == 0) return 0;
  std::int64_t lost = 0;
#pragma omp parallel reduction(+ : lost)
  {
    std::vector<char> seen(n);
#pragma omp for schedule(dynamic, 4)
    for (std::int64_t i = 0; i < static_cast<std::int64_t>(n) * n; ++i) {
      const Tor src = static_cast<Tor>(i / n), dst = static_cast<Tor>(i % n);
      if (src == dst || mask.tor_failed(src) || mask.tor_failed(dst)) continue;
      for (int pos = 0; pos < sched.cycle_len(); ++pos)
        lost += !walk_reaches(sched, tables, mask, k, max_reroutes, src, dst, pos, seen);
    }
  }
  return static_cast<double>(lost) / static_cast<double>(total);
}

double connectivity_loss_serial(const Schedule& sched, const LookupTables& tables,
                                const FailureMask& mask, int k, int max_reroutes) {
  check_loss_args(tables, mask, k, max_reroutes);
  const int n = sched.num_tors();
  const std::int64_t total = surviving_triples(sched, mask);
  if (total == 0) return 0;
  std::int64_t lost = 0;
  std::vector<char> seen(n);
  for (Tor src = 0; src < n; ++src)
    for (Tor dst = 0; dst < n; ++dst) {
      if (src == dst || mask.tor_failed(src) || mask.tor_failed(dst)) continue;
      for (int pos = 0; pos < sched.cycle_len(); ++pos)
        lost += !walk_reaches(sched, tables, mask, k, max_reroutes, src, dst, pos, seen);
    }
  return static_cast<double>(lost) / static_cast<double>(total);
}

namespace {

std::vector<std::pair<Tor, Port>> path_edges(const Path& p) {
  std::vector<std::pair<Tor, Port>> e;
  for (const auto& h : p.hops) e.push_back({h.from, h.port});
  std::sort(e.begin(), e.end());
  return e;
}

bool disjoint(const std::vector<std::pair<Tor, Port>>& a,
              const std::vector<std::pair<Tor, Port>>& b) {
  std::size_t i = 0, j = 0;
  while (i < a.size() && j < b.size()) {
    if (a[i] == b[j]) return false;
    if (a[i] < b[j])
      ++i;
    else
      ++j;
  }
  return true;
}

}  // namespace

std::vector<double> edge_disjoint_ratio(const Schedule& sched, const LookupTables& tables) {
  const int n = sched.num_tors(), S = sched.cycle_len();
  std::vector<double> out(static_cast<std::size_t>(n) * (n - 1));
#pragma omp parallel for schedule(dynamic, 4)
  for (std::int64_t i = 0; i < static_cast<std::int64_t>(n) * n; ++i) {
    const Tor src = static_cast<Tor>(i / n), dst = static_cast<Tor>(i % n);
    if (src == dst) continue;
    std::vector<std::vector<std::pair<Tor, Port>>> edges(S);
    for (int t = 0; t < S; ++t) edges[t] = path_edges(chain_walk(sched, tables, src, dst, {t}));
    int count = 0;
    if (S > 1)
      for (int t = 0; t < S; ++t) count += disjoint(edges[t], edges[(t + 1) % S]);
    out[static_cast<std::size_t>(src) * (n - 1) + (dst < src ? dst : dst - 1)] =
        static_cast<double>(count) / S;
  }
  return out;
}

}  // namespace uro
