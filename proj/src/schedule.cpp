#include "uro/schedule.hpp"

#include <algorithm>
#include <fmt/format.h>

namespace uro {

Schedule::Schedule(int num_tors, int uplinks, int cycle_len,
                   std::int64_t slice_ns, std::int64_t guard_ns,
                   std::vector<CircuitRecord> circuits)
    : num_tors_(num_tors),
      uplinks_(uplinks),
      cycle_len_(cycle_len),
      slice_ns_(slice_ns),
      guard_ns_(guard_ns),
      records_(std::move(circuits)) {
  if (num_tors_ < 2) throw InvalidParameter("schedule needs at least 2 ToRs");
  if (uplinks_ < 1) throw InvalidParameter("schedule needs at least 1 uplink");
  if (cycle_len_ < 1) throw InvalidParameter("cycle length must be >= 1");
  if (slice_ns_ <= 0) throw InvalidParameter("slice_ns must be positive");
  if (guard_ns_ < 0 || guard_ns_ >= slice_ns_)
    throw InvalidParameter("guard_ns must be in [0, slice_ns)");

  for (const auto& r : records_) {
    if (r.slice_pos < 0 || r.slice_pos >= cycle_len_ || r.src < 0 ||
        r.src >= num_tors_ || r.dst < 0 || r.dst >= num_tors_ || r.port < 0 ||
        r.port >= uplinks_) {
      throw InvalidParameter(fmt::format(
          "circuit ({}, {}, {}, {}) out of range", r.slice_pos, r.src, r.port,
          r.dst));
    }
  }
  std::sort(records_.begin(), records_.end());

  const std::size_t n = static_cast<std::size_t>(num_tors_);
  const std::size_t slots = static_cast<std::size_t>(cycle_len_) * n;

  slot_offsets_.assign(slots + 1, 0);
  for (const auto& r : records_)
    ++slot_offsets_[static_cast<std::size_t>(r.slice_pos) * n + r.src + 1];
  for (std::size_t i = 0; i < slots; ++i) slot_offsets_[i + 1] += slot_offsets_[i];
  slot_circuits_.resize(records_.size());
  // records_ is sorted by (pos, src, port), so slot order is already by port.
  for (std::size_t i = 0; i < records_.size(); ++i)
    slot_circuits_[i] = {records_[i].port, records_[i].dst};

  port_map_.assign(slots * static_cast<std::size_t>(uplinks_), -1);
  for (const auto& r : records_) {
    auto& cell = port_map_[(static_cast<std::size_t>(r.slice_pos) * n + r.src) *
                               uplinks_ +
                           r.port];
    if (cell < 0) cell = r.dst;
  }

  // Two ports carrying the same pair in one slice count once for timing.
  {
    std::vector<std::vector<int>> tmp(n * n);
    for (const auto& r : records_) tmp[r.src * n + r.dst].push_back(r.slice_pos);
    pair_offsets_.assign(n * n + 1, 0);
    pair_pos_.clear();
    for (std::size_t p = 0; p < n * n; ++p) {
      auto& v = tmp[p];
      std::sort(v.begin(), v.end());
      v.erase(std::unique(v.begin(), v.end()), v.end());
      pair_pos_.insert(pair_pos_.end(), v.begin(), v.end());
      pair_offsets_[p + 1] = static_cast<std::int32_t>(pair_pos_.size());
    }
  }
  circulant_ = compute_circulant();
}

std::span<const Circuit> Schedule::circuits(int pos, Tor tor) const {
  const std::size_t slot = static_cast<std::size_t>(pos) * num_tors_ + tor;
  return {slot_circuits_.data() + slot_offsets_[slot],
          static_cast<std::size_t>(slot_offsets_[slot + 1] - slot_offsets_[slot])};
}

std::span<const int> Schedule::pair_positions(Tor src, Tor dst) const {
  const std::size_t p = static_cast<std::size_t>(src) * num_tors_ + dst;
  return {pair_pos_.data() + pair_offsets_[p],
          static_cast<std::size_t>(pair_offsets_[p + 1] - pair_offsets_[p])};
}

SliceTime Schedule::earliest_connection(Tor src, Tor dst, SliceTime t0) const {
  auto pos = pair_positions(src, dst);
  if (pos.empty())
    throw PairNeverConnected(
        fmt::format("ToR {} is never connected to ToR {}", src, dst));
  const int p0 = t0.cycle_pos(cycle_len_);
  auto it = std::lower_bound(pos.begin(), pos.end(), p0);
  if (it != pos.end()) return t0 + (*it - p0);
  return t0 + (cycle_len_ - p0 + pos.front());
}

std::optional<SliceTime> Schedule::latest_connection(Tor src, Tor dst,
                                                     SliceTime lo,
                                                     SliceTime hi) const {
  if (hi < lo) return std::nullopt;
  auto pos = pair_positions(src, dst);
  if (pos.empty()) return std::nullopt;
  const int ph = hi.cycle_pos(cycle_len_);
  auto it = std::upper_bound(pos.begin(), pos.end(), ph);
  SliceTime t = it != pos.begin() ? SliceTime{hi.abs - (ph - *std::prev(it))}
                                  : SliceTime{hi.abs - ph - (cycle_len_ - pos.back())};
  if (t < lo) return std::nullopt;
  return t;
}

Port Schedule::port_for(Tor src, Tor dst, SliceTime t) const {
  for (const auto& c : circuits(t.cycle_pos(cycle_len_), src))
    if (c.dst == dst) return c.port;
  return -1;
}

bool Schedule::compute_circulant() const {
  const int n = num_tors_;
  for (int pos = 0; pos < cycle_len_; ++pos) {
    for (Tor i = 0; i < n; ++i) {
      const Tor ni = (i + 1) % n;
      if (circuits(pos, i).size() != circuits(pos, ni).size()) return false;
      for (const auto& c : circuits(pos, i))
        if (port_target(pos, ni, c.port) != (c.dst + 1) % n) return false;
    }
  }
  return true;
}

bool operator==(const Schedule& a, const Schedule& b) {
  return a.num_tors_ == b.num_tors_ && a.uplinks_ == b.uplinks_ &&
         a.cycle_len_ == b.cycle_len_ && a.slice_ns_ == b.slice_ns_ &&
         a.guard_ns_ == b.guard_ns_ && a.records_ == b.records_;
}

std::string Violation::describe() const {
  switch (kind) {
    case ViolationKind::kSelfLoop:
      return fmt::format("self-loop at slice {} ToR {} port {}", slice_pos, tor,
                         port);
    case ViolationKind::kPortReuse:
      return fmt::format("port reused at slice {} ToR {} port {}", slice_pos,
                         tor, port);
    case ViolationKind::kDegreeImbalance:
      return fmt::format("in/out degree mismatch at slice {} ToR {}", slice_pos,
                         tor);
    case ViolationKind::kCoverage:
      return fmt::format("pair ({}, {}) never connected in the cycle", tor, peer);
  }
  return "unknown violation";
}

std::string ValidationReport::summary(std::size_t max_lines) const {
  std::string out;
  for (std::size_t i = 0; i < violations.size() && i < max_lines; ++i)
    out += violations[i].describe() + "\n";
  if (violations.size() > max_lines)
    out += fmt::format("... {} more\n", violations.size() - max_lines);
  return out;
}

ValidationError::ValidationError(ValidationReport report)
    : Error("schedule failed validation:\n" + report.summary()),
      report_(std::move(report)) {}

ValidationReport validate_schedule(const Schedule& sched) {
  ValidationReport rep;
  const int n = sched.num_tors();
  std::vector<int> in_deg(n), out_deg(n);
  std::vector<int> port_seen;
  for (int pos = 0; pos < sched.cycle_len(); ++pos) {
    std::fill(in_deg.begin(), in_deg.end(), 0);
    std::fill(out_deg.begin(), out_deg.end(), 0);
    for (Tor i = 0; i < n; ++i) {
      port_seen.assign(sched.uplinks(), 0);
      for (const auto& c : sched.circuits(pos, i)) {
        if (c.dst == i)
          rep.violations.push_back(
              {ViolationKind::kSelfLoop, pos, i, c.port, c.dst});
        if (port_seen[c.port]++ == 1)
          rep.violations.push_back(
              {ViolationKind::kPortReuse, pos, i, c.port, c.dst});
        ++out_deg[i];
        ++in_deg[c.dst];
      }
    }
    for (Tor i = 0; i < n; ++i)
      if (in_deg[i] != out_deg[i])
        rep.violations.push_back({ViolationKind::kDegreeImbalance, pos, i});
  }
  for (Tor i = 0; i < n; ++i)
    for (Tor j = 0; j < n; ++j)
      if (i != j && !sched.connected(i, j))
        rep.violations.push_back({ViolationKind::kCoverage, -1, i, -1, j});
  return rep;
}

namespace {

void check_rotor_params(int n, int d, std::int64_t slice_ns,
                        std::int64_t guard_ns) {
  if (n < 2) throw InvalidParameter("rotor needs n >= 2");
  if (d < 1 || d > n - 1) throw InvalidParameter("rotor needs 1 <= d <= n-1");
  if (slice_ns <= 0) throw InvalidParameter("slice_ns must be positive");
  if (guard_ns < 0 || guard_ns >= slice_ns)
    throw InvalidParameter("guardband must be in [0, slice_ns)");
}

}  // namespace

Schedule generate_rotor_schedule(int n, int d, std::int64_t slice_ns,
                                 std::int64_t guard_ns) {
  check_rotor_params(n, d, slice_ns, guard_ns);
  const int cycle = (n - 1 + d - 1) / d;
  std::vector<CircuitRecord> recs;
  recs.reserve(static_cast<std::size_t>(n) * (n - 1));
  for (int s = 0; s < cycle; ++s)
    for (Tor i = 0; i < n; ++i)
      for (Port k = 0; k < d; ++k) {
        const int offset = s * d + k + 1;
        if (offset > n - 1) break;
        recs.push_back({s, i, k, (i + offset) % n});
      }
  return Schedule(n, d, cycle, slice_ns, guard_ns, std::move(recs));
}

Schedule generate_staggered_rotor_schedule(int n, int d, std::int64_t slice_ns,
                                           std::int64_t guard_ns) {
  check_rotor_params(n, d, slice_ns, guard_ns);
  const int matchings = (n - 1 + d - 1) / d;
  const int cycle = d * matchings;
  std::vector<CircuitRecord> recs;
  recs.reserve(static_cast<std::size_t>(n) * d * cycle);
  for (int s = 0; s < cycle; ++s)
    for (Tor i = 0; i < n; ++i)
      for (Port k = 0; k < d; ++k) {
        // Port k switches to its next matching whenever (s + k) % d == 0.
        const int m = ((s + k) / d) % matchings;
        const int offset = m * d + k + 1;
        if (offset > n - 1) continue;
        recs.push_back({s, i, k, (i + offset) % n});
      }
  return Schedule(n, d, cycle, slice_ns, guard_ns, std::move(recs));
}

}  // namespace uro
