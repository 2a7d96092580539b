#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>

#include <fmt/format.h>

#include "uro/simnet.hpp"
#include "uro/text.hpp"

namespace uro {

SizeCdf::SizeCdf(std::vector<std::pair<double, double>> points) : pts_(std::move(points)) {
  if (pts_.empty()) throw InvalidParameter("empty size CDF");
  for (std::size_t i = 0; i < pts_.size(); ++i) {
    const auto [b, p] = pts_[i];
    if (!(b >= 1) || !(p >= 0) || !(p <= 1))
      throw InvalidParameter(fmt::format("bad CDF point {} ({}, {})", i, b, p));
    if (i > 0 && (b <= pts_[i - 1].first || p < pts_[i - 1].second))
      throw InvalidParameter(fmt::format("CDF not monotone at point {}", i));
  }
  if (std::abs(pts_.back().second - 1.0) > 1e-9)
    throw InvalidParameter("CDF must end at probability 1");
}

SizeCdf SizeCdf::parse(std::istream& in) {
  std::vector<std::pair<double, double>> pts;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    auto view = text::trim(line);
    if (view.empty() || view.front() == '#' || view == "bytes,cumulative_prob") continue;
    auto f = text::split(view, ',');
    if (f.size() != 2)
      throw ParseError(fmt::format("expected 2 fields, got {}", f.size()), lineno);
    pts.push_back({text::parse_double(f[0], "bytes", lineno),
                   text::parse_double(f[1], "cumulative_prob", lineno)});
  }
  try {
    return SizeCdf(std::move(pts));
  } catch (const InvalidParameter& e) {
    throw ParseError(e.what(), 0);
  }
}

SizeCdf SizeCdf::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open CDF file '" + path + "'");
  return parse(in);
}

SizeCdf SizeCdf::preset(const std::string& name) {
  if (name == "websearch")
    return SizeCdf({{1460, 0.0},
                    {10'000, 0.15},
                    {20'000, 0.20},
                    {30'000, 0.30},
                    {50'000, 0.40},
                    {80'000, 0.53},
                    {200'000, 0.60},
                    {1'000'000, 0.70},
                    {2'000'000, 0.80},
                    {5'000'000, 0.90},
                    {10'000'000, 0.97},
                    {30'000'000, 1.0}});
  if (name == "datamining")
    return SizeCdf({{100, 0.0},
                    {180, 0.1},
                    {216, 0.2},
                    {560, 0.3},
                    {900, 0.4},
                    {1'100, 0.5},
                    {1'870, 0.6},
                    {3'160, 0.7},
                    {10'000, 0.8},
                    {400'000, 0.9},
                    {3'160'000, 0.95},
                    {100'000'000, 0.98},
                    {1'000'000'000, 1.0}});
  throw InvalidParameter("unknown CDF preset '" + name + "'");
}

double SizeCdf::mean() const {
  double m = pts_.front().first * pts_.front().second;
  for (std::size_t i = 1; i < pts_.size(); ++i)
    m += (pts_[i].second - pts_[i - 1].second) * (pts_[i].first + pts_[i - 1].first) / 2;
  return m;
}

std::int64_t SizeCdf::sample(std::mt19937_64& rng) const {
  const double u = std::uniform_real_distribution<double>(0.0, 1.0)(rng);
  auto it = std::lower_bound(pts_.begin(), pts_.end(), u,
                             [](const auto& pt, double v) { return pt.second < v; });
  double bytes;
  if (it == pts_.begin()) {
    bytes = it->first;
  } else {
    const auto& [b1, p1] = *it;
    const auto& [b0, p0] = *(it - 1);
    bytes = p1 > p0 ? b0 + (b1 - b0) * (u - p0) / (p1 - p0) : b1;
  }
  return std::max<std::int64_t>(1, std::llround(bytes));
}

void SizeCdf::write(std::ostream& out) const {
  out << "bytes,cumulative_prob\n";
  for (const auto& [b, p] : pts_) out << fmt::format("{},{}\n", b, p);
}

WorkloadKind parse_workload_kind(const std::string& s) {
  if (s == "websearch") return WorkloadKind::kWebsearch;
  if (s == "datamining") return WorkloadKind::kDatamining;
  if (s == "fixed") return WorkloadKind::kFixed;
  if (s == "file") return WorkloadKind::kFile;
  throw InvalidParameter("unknown workload '" + s + "'");
}

std::vector<Flow> generate_workload(const WorkloadSpec& spec, const Schedule& sched,
                                    const SimConfig& cfg, std::uint64_t seed) {
  if (spec.kind == WorkloadKind::kFile) {
    auto flows = read_flow_file(spec.flow_file);
    const int hosts = cfg.hosts(sched);
    for (const auto& f : flows)
      if (f.src_host >= hosts || f.dst_host >= hosts)
        throw InvalidParameter(fmt::format("flow {} names a host beyond {}", f.id, hosts - 1));
    return flows;
  }
  if (!(spec.load > 0) || spec.load > 1) throw InvalidParameter("load must be in (0, 1]");
  if (spec.duration_ns <= 0) throw InvalidParameter("duration must be positive");

  std::optional<SizeCdf> cdf;
  double mean_bytes = static_cast<double>(spec.fixed_bytes);
  if (!spec.cdf_path.empty()) {
    cdf = SizeCdf::load(spec.cdf_path);
  } else if (spec.kind == WorkloadKind::kWebsearch) {
    cdf = SizeCdf::preset("websearch");
  } else if (spec.kind == WorkloadKind::kDatamining) {
    cdf = SizeCdf::preset("datamining");
  } else if (spec.fixed_bytes <= 0) {
    throw InvalidParameter("fixed flow size must be positive");
  }
  if (cdf) mean_bytes = cdf->mean();

  const int hosts = cfg.hosts(sched);
  const int per_tor = hosts / sched.num_tors();
  const double capacity_bytes_per_ns = hosts * cfg.link_gbps / 8.0;
  const double rate_per_ns = spec.load * capacity_bytes_per_ns / mean_bytes;

  std::mt19937_64 rng(seed);
  std::exponential_distribution<double> gap(rate_per_ns);
  std::uniform_int_distribution<int> pick_src(0, hosts - 1);
  std::uniform_int_distribution<int> pick_dst(0, hosts - per_tor - 1);
  std::vector<Flow> flows;
  double t = 0;
  while (true) {
    t += gap(rng);
    const auto start = static_cast<std::int64_t>(t);
    if (start >= spec.duration_ns) break;
    Flow f;
    f.id = static_cast<std::int64_t>(flows.size());
    f.start_ns = start;
    f.src_host = pick_src(rng);
    // Skip the hosts of the source rack.
    const int first_local = (f.src_host / per_tor) * per_tor;
    f.dst_host = pick_dst(rng);
    if (f.dst_host >= first_local) f.dst_host += per_tor;
    f.bytes = cdf ? cdf->sample(rng) : spec.fixed_bytes;
    flows.push_back(f);
  }
  return flows;
}

std::vector<Flow> read_flow_file(std::istream& in) {
  std::vector<Flow> flows;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    auto view = text::trim(line);
    if (view.empty() || view.front() == '#' || view == "start_ns,src_host,dst_host,bytes")
      continue;
    auto f = text::split(view, ',');
    if (f.size() != 4)
      throw ParseError(fmt::format("expected 4 fields, got {}", f.size()), lineno);
    Flow fl;
    fl.id = static_cast<std::int64_t>(flows.size());
    fl.start_ns = text::parse_int(f[0], "start_ns", lineno);
    fl.src_host = static_cast<int>(text::parse_int(f[1], "src_host", lineno));
    fl.dst_host = static_cast<int>(text::parse_int(f[2], "dst_host", lineno));
    fl.bytes = text::parse_int(f[3], "bytes", lineno);
    if (fl.bytes <= 0) throw ParseError("flow bytes must be positive", lineno);
    if (fl.start_ns < 0 || fl.src_host < 0 || fl.dst_host < 0)
      throw ParseError("negative field", lineno);
    if (fl.src_host == fl.dst_host) throw ParseError("flow to its own host", lineno);
    if (!flows.empty() && fl.start_ns < flows.back().start_ns)
      throw ParseError("flows not sorted by start", lineno);
    flows.push_back(fl);
  }
  return flows;
}

std::vector<Flow> read_flow_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open flow file '" + path + "'");
  return read_flow_file(in);
}

void write_flow_file(const std::vector<Flow>& flows, std::ostream& out) {
  out << "start_ns,src_host,dst_host,bytes\n";
  for (const auto& f : flows)
    out << fmt::format("{},{},{},{}\n", f.start_ns, f.src_host, f.dst_host, f.bytes);
}

OffloadSplit offload_split(const std::vector<Flow>& flows, std::int64_t cutoff_bytes) {
  OffloadSplit out;
  for (const auto& f : flows) (f.bytes > cutoff_bytes ? out.vlb : out.uro).push_back(f);
  return out;
}

}  // namespace uro
