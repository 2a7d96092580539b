#include "uro/fct_bounds.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>
#ifdef _OPENMP
#include <omp.h>
#endif

namespace uro {

const char* to_string(RoutingMode m) {
  return m == RoutingMode::kUro ? "uro" : "vlb";
}

namespace {

// Packets that become eligible at the source ToR in the same slice and share a
// size travel together.
struct Group {
  std::int64_t slice = 0;  // relative to t0
  std::int64_t count = 0;
  std::int64_t bytes = 0;
};

double tx_ns(std::int64_t bytes, double gbps) { return bytes * 8.0 / gbps; }

std::vector<Group> make_groups(std::int64_t flow_bytes, const LinkParams& link,
                               const Schedule& s) {
  std::vector<Group> out;
  const double u = static_cast<double>(s.slice_ns());
  const double window = static_cast<double>(s.usable_ns());
  std::int64_t sent = 0;
  while (sent < flow_bytes) {
    const std::int64_t b = std::min(link.mtu_bytes, flow_bytes - sent);
    sent += b;
    const double ready = tx_ns(sent, link.link_gbps);
    auto slice = static_cast<std::int64_t>(std::floor(ready / u));
    if (ready - slice * u + tx_ns(b, link.link_gbps) > window) ++slice;
    if (!out.empty() && out.back().slice == slice && out.back().bytes == b)
      ++out.back().count;
    else
      out.push_back({slice, 1, b});
  }
  return out;
}

constexpr std::int32_t kUnset = -1;

}  // namespace

struct FctModel::Cache {
  // Slices from arrival to the last departure, per (src, dst, cycle position)
  // and routing mode; one lazily filled table per thread.
  struct Table {
    std::vector<std::int32_t> uro, vlb;
  };
  std::vector<Table> per_thread;
};

FctModel::FctModel(const Schedule& sched, LinkParams link, RoutingParams params)
    : sched_(sched), link_(link), params_(params), cache_(std::make_unique<Cache>()) {
  if (!(link_.link_gbps > 0)) throw InvalidParameter("link bandwidth must be positive");
  if (link_.mtu_bytes <= 0) throw InvalidParameter("mtu must be positive");
  if (link_.prop_delay_ns < 0) throw InvalidParameter("propagation delay must be >= 0");
  if (params_.max_hops < 1) throw InvalidParameter("max_hops must be >= 1");
  if (tx_ns(link_.mtu_bytes, link_.link_gbps) > static_cast<double>(sched_.usable_ns()))
    throw InvalidParameter("one MTU does not fit in the usable slice window");
#ifdef _OPENMP
  cache_->per_thread.resize(omp_get_max_threads());
#else
  cache_->per_thread.resize(1);
#endif
}

FctModel::~FctModel() = default;
FctModel::FctModel(FctModel&&) noexcept = default;

namespace {

class FlowRun {
 public:
  FlowRun(const Schedule& s, const LinkParams& link, const RoutingParams& params,
          FctModel::Cache& cache, int thread);

  double run(Tor src, Tor dst, SliceTime t0, RoutingMode mode,
             const std::vector<Group>& groups) {
    // Deliveries are non-decreasing in the group's slice only for URO, so
    // collect and sort before serializing onto the downlink.
    deliveries_.clear();
    for (const auto& g : groups) {
      const std::int64_t a = t0.abs + g.slice;
      const std::int64_t end = a + wait(src, dst, a, mode);
      deliveries_.push_back({(end + 1) * s_.slice_ns(), g.count, g.bytes});
    }
    std::stable_sort(deliveries_.begin(), deliveries_.end(),
                     [](const Delivery& x, const Delivery& y) { return x.time_ns < y.time_ns; });
    double finish = 0;
    for (const auto& d : deliveries_)
      finish = std::max(finish, static_cast<double>(d.time_ns)) +
               d.count * tx_ns(d.bytes, link_.link_gbps);
    return finish + static_cast<double>(link_.prop_delay_ns) -
           static_cast<double>(t0.abs * s_.slice_ns());
  }

 private:
  struct Delivery {
    std::int64_t time_ns;
    std::int64_t count;
    std::int64_t bytes;
  };

  std::int32_t wait(Tor src, Tor dst, std::int64_t t, RoutingMode mode) {
    const int pos = static_cast<int>(t % s_.cycle_len());
    auto& table = mode == RoutingMode::kUro ? uro_ : vlb_;
    auto& e = table[(static_cast<std::size_t>(src) * s_.num_tors() + dst) *
                        s_.cycle_len() +
                    pos];
    if (e == kUnset) {
      if (mode == RoutingMode::kUro) {
        e = static_cast<std::int32_t>(
            uro_route(s_, src, dst, SliceTime{t}, params_).t_end().abs - t);
      } else {
        // Worst realization over the circuits active at t. A source idle in
        // this slice sends in the next one.
        std::int64_t at = t;
        while (s_.circuits(static_cast<int>(at % s_.cycle_len()), src).empty()) ++at;
        std::int64_t worst = 0;
        for (const auto& p : vlb_realizations(s_, src, dst, SliceTime{at}))
          worst = std::max(worst, p.t_end().abs);
        e = static_cast<std::int32_t>(worst - t);
      }
    }
    return e;
  }

  const Schedule& s_;
  const LinkParams& link_;
  const RoutingParams& params_;
  std::vector<std::int32_t>& uro_;
  std::vector<std::int32_t>& vlb_;
  std::vector<Delivery> deliveries_;
};

FlowRun::FlowRun(const Schedule& s, const LinkParams& link,
                 const RoutingParams& params, FctModel::Cache& cache, int thread)
    : s_(s),
      link_(link),
      params_(params),
      uro_(cache.per_thread[thread].uro),
      vlb_(cache.per_thread[thread].vlb) {
  const std::size_t cells =
      static_cast<std::size_t>(s.num_tors()) * s.num_tors() * s.cycle_len();
  if (uro_.empty()) uro_.assign(cells, kUnset);
  if (vlb_.empty()) vlb_.assign(cells, kUnset);
}

void check_flow(std::int64_t flow_bytes) {
  if (flow_bytes < 0) throw InvalidParameter("flow size must be >= 0");
}

int thread_index() {
#ifdef _OPENMP
  return omp_get_thread_num();
#else
  return 0;
#endif
}

}  // namespace

double FctModel::fct_ns(Tor src, Tor dst, SliceTime t0, RoutingMode mode,
                        std::int64_t flow_bytes) {
  check_flow(flow_bytes);
  if (src == dst || src < 0 || dst < 0 || src >= sched_.num_tors() ||
      dst >= sched_.num_tors())
    throw InvalidParameter("bad ToR pair");
  if (flow_bytes == 0) return 0;
  FlowRun run(sched_, link_, params_, *cache_, 0);
  return run.run(src, dst, t0, mode, make_groups(flow_bytes, link_, sched_));
}

double FctModel::worst_case_fct_ns_serial(RoutingMode mode, std::int64_t flow_bytes) {
  check_flow(flow_bytes);
  if (flow_bytes == 0) return 0;
  const auto groups = make_groups(flow_bytes, link_, sched_);
  const int n = sched_.num_tors();
  const int sources = sched_.is_circulant() ? 1 : n;
  FlowRun run(sched_, link_, params_, *cache_, 0);
  double worst = 0;
  for (Tor src = 0; src < sources; ++src)
    for (Tor dst = 0; dst < n; ++dst)
      if (src != dst)
        worst = std::max(worst, run.run(src, dst, SliceTime{0}, mode, groups));
  return worst;
}

double FctModel::worst_case_fct_ns(RoutingMode mode, std::int64_t flow_bytes) {
  check_flow(flow_bytes);
  if (flow_bytes == 0) return 0;
  const auto groups = make_groups(flow_bytes, link_, sched_);
  const int n = sched_.num_tors();
  const int sources = sched_.is_circulant() ? 1 : n;
  const std::int64_t pairs = static_cast<std::int64_t>(sources) * n;
  double worst = 0;
#pragma omp parallel reduction(max : worst)
  {
    FlowRun run(sched_, link_, params_, *cache_, thread_index());
#pragma omp for schedule(dynamic, 4)
    for (std::int64_t i = 0; i < pairs; ++i) {
      const Tor src = static_cast<Tor>(i / n);
      const Tor dst = static_cast<Tor>(i % n);
      if (src == dst) continue;
      worst = std::max(worst, run.run(src, dst, SliceTime{0}, mode, groups));
    }
  }
  return worst;
}

double FctModel::slowdown(std::int64_t flow_bytes) {
  return worst_case_fct_ns(RoutingMode::kVlb, flow_bytes) /
         worst_case_fct_ns(RoutingMode::kUro, flow_bytes);
}

double lower_bound_fct(const Schedule& sched, Tor src, Tor dst, SliceTime t0,
                       RoutingMode mode, std::int64_t flow_bytes,
                       const LinkParams& link, const RoutingParams& params) {
  FctModel m(sched, link, params);
  return m.fct_ns(src, dst, t0, mode, flow_bytes);
}

double worst_case_lower_bound_fct(const Schedule& sched, RoutingMode mode,
                                  std::int64_t flow_bytes, const LinkParams& link,
                                  const RoutingParams& params) {
  FctModel m(sched, link, params);
  return m.worst_case_fct_ns(mode, flow_bytes);
}

std::int64_t cutoff_flow_size(FctModel& model, double alpha) {
  if (!(alpha > 1.0)) throw InvalidParameter("alpha must be > 1");
  std::int64_t hi = kCutoffMaxBytes;
  const double h_hi = model.slowdown(hi);
  if (h_hi > alpha)
    throw NoCrossing(fmt::format(
        "slowdown {:.4f} at 1 GB still exceeds alpha {}", h_hi, alpha));
  std::int64_t lo = model.link().mtu_bytes;
  if (model.slowdown(lo) <= alpha) return lo;
  // h(lo) > alpha >= h(hi); bisect in log space to 0.1%.
  while (static_cast<double>(hi) / static_cast<double>(lo) > 1.001) {
    const auto mid = static_cast<std::int64_t>(
        std::llround(std::sqrt(static_cast<double>(lo) * static_cast<double>(hi))));
    if (mid <= lo || mid >= hi) break;
    if (model.slowdown(mid) <= alpha)
      hi = mid;
    else
      lo = mid;
  }
  return hi;
}

std::int64_t cutoff_flow_size(const Schedule& sched, double alpha,
                              const LinkParams& link, const RoutingParams& params) {
  FctModel m(sched, link, params);
  return cutoff_flow_size(m, alpha);
}

}  // namespace uro
