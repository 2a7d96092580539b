#include <omp.h>
#include <openssl/evp.h>

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>

#include <fmt/format.h>

#include "CLI11.hpp"
#include "json.hpp"
#include "uro/fct_bounds.hpp"
#include "uro/router.hpp"
#include "uro/schedule.hpp"
#include "uro/simnet.hpp"
#include "uro/tablegen.hpp"

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;
using namespace uro;

namespace {

constexpr int kExitIo = 1;
constexpr int kExitDomain = 2;
constexpr const char* kVersion = "0.1.0";

// Failures the exit-code contract treats as domain errors.
struct DomainFailure : Error {
  using Error::Error;
};

std::string sha256_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot read '" + path + "'");
  EVP_MD_CTX* ctx = EVP_MD_CTX_new();
  EVP_DigestInit_ex(ctx, EVP_sha256(), nullptr);
  char buf[1 << 16];
  while (in) {
    in.read(buf, sizeof buf);
    EVP_DigestUpdate(ctx, buf, static_cast<std::size_t>(in.gcount()));
  }
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  EVP_DigestFinal_ex(ctx, md, &len);
  EVP_MD_CTX_free(ctx);
  std::string hex;
  for (unsigned int i = 0; i < len; ++i) hex += fmt::format("{:02x}", md[i]);
  return hex;
}

// manifest.json: command, resolved config, seed, version, input and output
// digests. Contains nothing run-dependent beyond those.
void write_manifest(const std::string& dir, const std::string& command, const json& config,
                    std::uint64_t seed, const std::vector<std::string>& inputs,
                    const std::vector<std::string>& outputs) {
  json m;
  m["command"] = command;
  m["tool_version"] = kVersion;
  m["seed"] = seed;
  m["config"] = config;
  json in = json::array(), out = json::array();
  for (const auto& p : inputs) in.push_back({{"path", p}, {"sha256", sha256_file(p)}});
  for (const auto& p : outputs)
    out.push_back({{"path", fs::path(p).filename().string()}, {"sha256", sha256_file(p)}});
  m["inputs"] = in;
  m["outputs"] = out;
  std::ofstream f(fs::path(dir) / "manifest.json", std::ios::binary);
  if (!f) throw Error("cannot write manifest in '" + dir + "'");
  f << m.dump(2) << '\n';
}

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write '" + path + "'");
  return out;
}

std::string path_row(const Path& p, const std::vector<std::string>& names) {
  auto name = [&](Tor t) {
    return t < static_cast<Tor>(names.size()) ? names[t] : std::to_string(t);
  };
  std::string out;
  for (const auto& h : p.hops) {
    if (!out.empty()) out += ';';
    out += fmt::format("{},{}@{}", name(h.from), name(h.to), h.depart.abs);
  }
  return out + fmt::format(" latency={}u", p.latency_slices());
}

std::vector<std::string> split_names(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream in(s);
  for (std::string tok; std::getline(in, tok, ',');) out.push_back(tok);
  return out;
}

std::uint64_t default_seed() {
  if (const char* env = std::getenv("URO_SEED")) return std::strtoull(env, nullptr, 10);
  return 1;
}

struct ScheduleArgs {
  std::string path;
  int n = 0, d = 0;
  std::string kind = "rotor";
  std::int64_t slice_ns = 2000, guard_ns = 0;

  void add(CLI::App* app, bool generated_allowed) {
    app->add_option("--sched", path, "Schedule file");
    if (generated_allowed) {
      app->add_option("--n", n, "Generate a schedule with n ToRs instead of --sched");
      app->add_option("--d", d, "Uplinks of the generated schedule");
      app->add_option("--kind", kind, "rotor or staggered")->check(CLI::IsMember({"rotor", "staggered"}));
      app->add_option("--slice-ns", slice_ns, "Slice duration of the generated schedule");
      app->add_option("--guard-ns", guard_ns, "Guardband of the generated schedule");
    }
  }
  Schedule load() const {
    if (!path.empty()) return load_schedule_file(path);
    if (n <= 0) throw InvalidParameter("give --sched or --n/--d");
    return kind == "staggered" ? generate_staggered_rotor_schedule(n, d, slice_ns, guard_ns)
                               : generate_rotor_schedule(n, d, slice_ns, guard_ns);
  }
  std::vector<std::string> inputs() const {
    return path.empty() ? std::vector<std::string>{} : std::vector<std::string>{path};
  }
  json describe() const {
    if (!path.empty()) return {{"sched", path}};
    return {{"kind", kind}, {"n", n}, {"d", d}, {"slice_ns", slice_ns}, {"guard_ns", guard_ns}};
  }
};

// --- schedule ---

struct ScheduleCmd {
  int n = 0, d = 0;
  std::int64_t slice_ns = 2000, guard_ns = 0;
  std::string kind = "rotor", out, in;

  void attach(CLI::App& root, std::function<int()>& action) {
    auto* cmd = root.add_subcommand("schedule", "Generate, validate or print schedules");
    cmd->require_subcommand(1);
    auto* gen = cmd->add_subcommand("gen", "Generate a rotor schedule");
    gen->add_option("--n", n, "ToRs")->required();
    gen->add_option("--d", d, "Uplinks per ToR")->required();
    gen->add_option("--slice-ns", slice_ns, "Slice duration");
    gen->add_option("--guard-ns", guard_ns, "Guardband");
    gen->add_option("--kind", kind, "rotor or staggered")->check(CLI::IsMember({"rotor", "staggered"}));
    gen->add_option("--out", out, "Output file (stdout when omitted)");
    gen->callback([&] { action = [this] { return gen_run(); }; });
    auto* val = cmd->add_subcommand("validate", "Check a schedule file");
    val->add_option("in,--in", in, "Schedule file")->required();
    val->callback([&] { action = [this] { return validate_run(); }; });
    auto* show = cmd->add_subcommand("show", "Print per-slice matchings");
    show->add_option("in,--in", in, "Schedule file")->required();
    show->callback([&] { action = [this] { return show_run(); }; });
  }

  int gen_run() const {
    const Schedule s = kind == "staggered"
                           ? generate_staggered_rotor_schedule(n, d, slice_ns, guard_ns)
                           : generate_rotor_schedule(n, d, slice_ns, guard_ns);
    if (out.empty()) {
      save_schedule(s, std::cout);
    } else {
      save_schedule_file(s, out);
      std::cout << fmt::format("wrote {} (n={} d={} S={})\n", out, s.num_tors(), s.uplinks(),
                               s.cycle_len());
    }
    return 0;
  }
  int validate_run() const {
    const Schedule s = load_schedule_file(in);
    std::cout << fmt::format("ok n={} d={} S={} slice_ns={} guard_ns={}\n", s.num_tors(),
                             s.uplinks(), s.cycle_len(), s.slice_ns(), s.guard_ns());
    return 0;
  }
  int show_run() const {
    const Schedule s = load_schedule_file(in);
    for (int pos = 0; pos < s.cycle_len(); ++pos) {
      std::string line = fmt::format("slice {}:", pos);
      for (Tor t = 0; t < s.num_tors(); ++t)
        for (const auto& c : s.circuits(pos, t)) line += fmt::format(" {}->{}@p{}", t, c.dst, c.port);
      std::cout << line << '\n';
    }
    return 0;
  }
};

// --- route ---

struct RouteCmd {
  ScheduleArgs sched;
  Tor src = -1, dst = -1;
  std::int64_t t0 = 0;
  int max_hops = 4;
  std::string mode = "uro", names;
  std::uint64_t seed = default_seed();

  void attach(CLI::App& root, std::function<int()>& action) {
    auto* cmd = root.add_subcommand("route", "Route one packet");
    sched.add(cmd, true);
    cmd->add_option("--src", src, "Source ToR")->required();
    cmd->add_option("--dst", dst, "Destination ToR")->required();
    cmd->add_option("--t0", t0, "Arrival slice");
    cmd->add_option("--max-hops", max_hops, "Hop limit M");
    cmd->add_option("--mode", mode, "uro, vlb or oracle")->check(CLI::IsMember({"uro", "vlb", "oracle"}));
    cmd->add_option("--seed", seed, "VLB seed (default $URO_SEED or 1)");
    cmd->add_option("--names", names, "Comma-separated ToR names for printing");
    cmd->callback([&] { action = [this] { return run(); }; });
  }

  int run() const {
    const Schedule s = sched.load();
    if (src == dst) throw InvalidParameter("src and dst must differ");
    Path p;
    if (mode == "uro")
      p = uro_route(s, src, dst, {t0}, {max_hops});
    else if (mode == "oracle")
      p = oracle_route(s, src, dst, {t0}, {max_hops});
    else
      p = vlb_route(s, src, dst, {t0}, seed);
    if (p.empty()) throw DomainFailure(fmt::format("{} unreachable from {}", dst, src));
    std::cout << path_row(p, split_names(names)) << '\n';
    return 0;
  }
};

// --- table ---

struct TableCmd {
  ScheduleArgs sched;
  int k = 3, max_hops = 4;
  std::string out, in;

  void attach(CLI::App& root, std::function<int()>& action) {
    auto* cmd = root.add_subcommand("table", "Compile lookup tables");
    cmd->require_subcommand(1);
    auto* compile = cmd->add_subcommand("compile", "Compile and write a table file");
    sched.add(compile, true);
    compile->add_option("--k", k, "Alternatives per entry (1..10)");
    compile->add_option("--max-hops", max_hops, "Hop limit M");
    compile->add_option("--out", out, "Table file")->required();
    compile->callback([&] { action = [this] { return compile_run(); }; });
    auto* stats = cmd->add_subcommand("stats", "Resource figures for a schedule");
    sched.add(stats, true);
    stats->add_option("--k", k, "Alternatives per entry (1..10)");
    stats->callback([&] { action = [this] { return stats_run(); }; });
    auto* exp = cmd->add_subcommand("export", "Re-export a table file after validating it");
    exp->add_option("in,--in", in, "Table file")->required();
    exp->add_option("--out", out, "Output (stdout when omitted)");
    exp->callback([&] { action = [this] { return export_run(); }; });
  }

  int compile_run() const {
    const Schedule s = sched.load();
    const auto t = compile_lookup_table(s, {max_hops}, k);
    export_table_file(t, out);
    std::cout << table_stats(t).report() << '\n';
    return 0;
  }
  int stats_run() const {
    const Schedule s = sched.load();
    std::cout << table_stats(s, k).report() << '\n';
    return 0;
  }
  int export_run() const {
    const auto t = import_table_file(in);
    if (out.empty())
      export_table(t, std::cout);
    else
      export_table_file(t, out);
    return 0;
  }
};

// --- sim ---

struct SimCmd {
  ScheduleArgs sched;
  SimConfig cfg;
  std::string routing = "uro", workload = "websearch", flows_path, cdf_path, outdir;
  std::int64_t fixed_bytes = 100'000;

  void attach(CLI::App& root, std::function<int()>& action) {
    auto* cmd = root.add_subcommand("sim", "Run the packet simulator");
    sched.add(cmd, true);
    cfg.seed = default_seed();
    cmd->add_option("--routing", routing, "uro, vlb or uro+vlb");
    cmd->add_option("--alpha", cfg.alpha, "Slowdown threshold for the offload cutoff");
    cmd->add_option("--cutoff", cfg.cutoff_bytes, "Explicit offload cutoff in bytes");
    cmd->add_option("--load", cfg.load, "Offered host-link load in (0, 1]");
    cmd->add_option("--workload", workload, "websearch, datamining, fixed or file");
    cmd->add_option("--flows", flows_path, "Flow list for --workload file");
    cmd->add_option("--cdf", cdf_path, "Size CDF file overriding the preset");
    cmd->add_option("--size", fixed_bytes, "Flow size for --workload fixed");
    cmd->add_option("--duration", cfg.duration_ns, "Arrival window in ns");
    cmd->add_option("--drain", cfg.drain_ns, "Extra time after the window (-1: 10x duration)");
    cmd->add_option("--seed", cfg.seed, "Seed (default $URO_SEED or 1)");
    cmd->add_option("--k", cfg.k, "Alternatives per entry");
    cmd->add_option("--max-hops", cfg.max_hops, "Hop limit M");
    cmd->add_option("--link-gbps", cfg.link_gbps, "Link rate");
    cmd->add_option("--prop-ns", cfg.prop_delay_ns, "ToR-to-ToR propagation delay");
    cmd->add_option("--host-prop-ns", cfg.host_prop_ns, "Host-to-ToR propagation delay");
    cmd->add_option("--mtu", cfg.mtu_bytes, "MTU in bytes");
    cmd->add_option("--hosts-per-tor", cfg.hosts_per_tor, "Hosts per ToR (0: uplinks)");
    cmd->add_option("--window", cfg.window_packets, "Per-flow window in packets (0: none)");
    cmd->add_option("--staleness-ns", cfg.staleness_adjust_ns, "Queue-state staleness adjustment");
    cmd->add_option("--bin-ns", cfg.throughput_bin_ns, "Throughput bin width");
    cmd->add_flag("!--no-backpressure", cfg.source_backpressure, "Drop instead of pausing at the source ToR");
    cmd->add_option("--outdir", outdir, "Directory for metric files")->required();
    cmd->callback([&] { action = [this] { return run(); }; });
  }

  int run() {
    cfg.routing = parse_sim_routing(routing);
    const Schedule s = sched.load();
    WorkloadSpec ws;
    ws.kind = parse_workload_kind(workload);
    ws.load = cfg.load;
    ws.duration_ns = cfg.duration_ns;
    ws.fixed_bytes = fixed_bytes;
    ws.cdf_path = cdf_path;
    ws.flow_file = flows_path;
    if (ws.kind == WorkloadKind::kFile && flows_path.empty())
      throw InvalidParameter("--workload file needs --flows");
    const auto flows = generate_workload(ws, s, cfg, cfg.seed);
    const auto m = run_simulation(s, cfg, flows);
    auto outputs = write_metrics(m, outdir);
    {
      const auto p = (fs::path(outdir) / "flows.csv").string();
      auto f = open_out(p);
      write_flow_file(flows, f);
      outputs.push_back(p);
    }
    json c = sched.describe();
    c["routing"] = to_string(cfg.routing);
    c["alpha"] = cfg.alpha;
    c["cutoff_bytes"] = m.cutoff_bytes;
    c["load"] = cfg.load;
    c["workload"] = workload;
    c["fixed_bytes"] = fixed_bytes;
    c["duration_ns"] = cfg.duration_ns;
    c["drain_ns"] = cfg.drain_ns;
    c["k"] = cfg.k;
    c["max_hops"] = cfg.max_hops;
    c["link_gbps"] = cfg.link_gbps;
    c["prop_delay_ns"] = cfg.prop_delay_ns;
    c["host_prop_ns"] = cfg.host_prop_ns;
    c["mtu_bytes"] = cfg.mtu_bytes;
    c["hosts_per_tor"] = cfg.hosts(s) / s.num_tors();
    c["window_packets"] = cfg.window_packets;
    c["source_backpressure"] = cfg.source_backpressure;
    c["staleness_adjust_ns"] = cfg.staleness_adjust_ns;
    c["throughput_bin_ns"] = cfg.throughput_bin_ns;
    auto inputs = sched.inputs();
    if (!flows_path.empty()) inputs.push_back(flows_path);
    if (!cdf_path.empty()) inputs.push_back(cdf_path);
    write_manifest(outdir, "sim", c, cfg.seed, inputs, outputs);
    std::cout << fmt::format(
        "flows={} finished={} delivered_bytes={} dropped_packets={} p50_ns={:.0f} "
        "p99_ns={:.0f} conservation_violations={}\n",
        m.flows.size(), m.flows.size() - m.unfinished_flows, m.delivered_bytes,
        m.dropped_packets, m.fct_p50_ns, m.fct_p99_ns, m.conservation_violations);
    return 0;
  }
};

// --- analyze ---

struct AnalyzeCmd {
  ScheduleArgs sched, cut_sched;
  std::int64_t size = 1500;
  Tor src = 0, dst = 1;
  std::int64_t t0 = 0;
  std::string mode = "uro", outdir;
  int max_hops = 4, k = 3, max_k = 5, max_reroutes = 3, masks = 100;
  double alpha = 1.5;
  LinkParams link;
  FailureSpec failures{0.1, 0, 0};
  std::uint64_t seed = default_seed();

  void attach(CLI::App& root, std::function<int()>& action) {
    auto* cmd = root.add_subcommand("analyze", "Analytical sweeps");
    cmd->require_subcommand(1);
    auto common_link = [&](CLI::App* c) {
      c->add_option("--link-gbps", link.link_gbps, "Link rate");
      c->add_option("--prop-ns", link.prop_delay_ns, "Propagation delay");
      c->add_option("--mtu", link.mtu_bytes, "MTU in bytes");
      c->add_option("--max-hops", max_hops, "Hop limit M");
    };
    auto* lb = cmd->add_subcommand("lowerbound", "Empty-network FCT of one flow");
    sched.add(lb, true);
    common_link(lb);
    lb->add_option("--size", size, "Flow bytes");
    lb->add_option("--src", src, "Source ToR");
    lb->add_option("--dst", dst, "Destination ToR");
    lb->add_option("--t0", t0, "Start slice");
    lb->add_option("--mode", mode, "uro or vlb")->check(CLI::IsMember({"uro", "vlb"}));
    lb->callback([&] { action = [this] { return lowerbound_run(); }; });

    auto* cut = cmd->add_subcommand("cutoff", "Elephant cutoff flow size");
    cut_sched.kind = "staggered";
    cut_sched.n = 108;
    cut_sched.d = 6;
    cut_sched.guard_ns = 200;
    cut_sched.add(cut, true);
    common_link(cut);
    cut->add_option("--alpha", alpha, "Slowdown threshold");
    cut->callback([&] { action = [this] { return cutoff_run(); }; });

    auto* fail = cmd->add_subcommand("failures", "Connectivity loss under random failures");
    sched.add(fail, true);
    fail->add_option("--link-frac", failures.link_fraction, "Failed link fraction");
    fail->add_option("--tor-frac", failures.tor_fraction, "Failed ToR fraction");
    fail->add_option("--ocs-frac", failures.ocs_fraction, "Failed OCS fraction");
    fail->add_option("--masks", masks, "Random masks");
    fail->add_option("--max-k", max_k, "Sweep k = 1..max-k");
    fail->add_option("--max-reroutes", max_reroutes, "Sweep re-matches = 0..max");
    fail->add_option("--max-hops", max_hops, "Hop limit M");
    fail->add_option("--seed", seed, "Seed (default $URO_SEED or 1)");
    fail->add_option("--outdir", outdir, "Directory for loss.csv")->required();
    fail->callback([&] { action = [this] { return failures_run(); }; });

    auto* dis = cmd->add_subcommand("disjoint", "Edge-disjoint ratio per pair");
    sched.add(dis, true);
    dis->add_option("--k", k, "Alternatives compiled");
    dis->add_option("--max-hops", max_hops, "Hop limit M");
    dis->add_option("--outdir", outdir, "Directory for disjoint.csv")->required();
    dis->callback([&] { action = [this] { return disjoint_run(); }; });
  }

  int lowerbound_run() const {
    const Schedule s = sched.load();
    const double fct = lower_bound_fct(s, src, dst, {t0}, mode == "uro" ? RoutingMode::kUro : RoutingMode::kVlb,
                                       size, link, {max_hops});
    std::cout << fmt::format("mode={} src={} dst={} t0={} bytes={} fct_ns={:.0f}\n", mode, src, dst,
                             t0, size, fct);
    return 0;
  }
  int cutoff_run() const {
    const Schedule s = cut_sched.load();
    FctModel model(s, link, {max_hops});
    const auto x = cutoff_flow_size(model, alpha);
    std::cout << fmt::format("alpha={} slice_ns={} cutoff_bytes={} slowdown={:.4f}\n", alpha,
                             s.slice_ns(), x, model.slowdown(x));
    return 0;
  }
  int failures_run() const {
    const Schedule s = sched.load();
    const auto tables = compile_lookup_table(s, {max_hops}, std::max(max_k, 1));
    // mean[r][k-1]
    std::vector<std::vector<double>> mean(max_reroutes + 1, std::vector<double>(max_k, 0));
    int violations = 0;
    for (int i = 0; i < masks; ++i) {
      const auto mask = inject_failures(s, failures, seed + static_cast<std::uint64_t>(i));
      std::vector<std::vector<double>> loss(max_reroutes + 1, std::vector<double>(max_k));
      for (int r = 0; r <= max_reroutes; ++r)
        for (int kk = 1; kk <= max_k; ++kk) {
          loss[r][kk - 1] = connectivity_loss(s, tables, mask, kk, r);
          mean[r][kk - 1] += loss[r][kk - 1] / masks;
          if (kk > 1 && loss[r][kk - 1] > loss[r][kk - 2]) ++violations;
          if (r > 0 && loss[r][kk - 1] > loss[r - 1][kk - 1]) ++violations;
        }
    }
    fs::create_directories(outdir);
    const auto path = (fs::path(outdir) / "loss.csv").string();
    {
      auto out = open_out(path);
      out << "k,max_reroutes,mean_loss\n";
      for (int r = 0; r <= max_reroutes; ++r)
        for (int kk = 1; kk <= max_k; ++kk)
          out << fmt::format("{},{},{:.8f}\n", kk, r, mean[r][kk - 1]);
    }
    json c = sched.describe();
    c["link_fraction"] = failures.link_fraction;
    c["tor_fraction"] = failures.tor_fraction;
    c["ocs_fraction"] = failures.ocs_fraction;
    c["masks"] = masks;
    c["max_k"] = max_k;
    c["max_reroutes"] = max_reroutes;
    c["max_hops"] = max_hops;
    write_manifest(outdir, "analyze failures", c, seed, sched.inputs(), {path});
    std::cout << fmt::format("masks={} monotone={} violations={}\n", masks,
                             violations == 0 ? "yes" : "no", violations);
    for (int kk = 1; kk <= max_k; ++kk)
      std::cout << fmt::format("k={} loss={:.6f}\n", kk, mean[0][kk - 1]);
    return violations == 0 ? 0 : kExitDomain;
  }
  int disjoint_run() const {
    const Schedule s = sched.load();
    const auto tables = compile_lookup_table(s, {max_hops}, k);
    const auto ratios = edge_disjoint_ratio(s, tables);
    fs::create_directories(outdir);
    const auto path = (fs::path(outdir) / "disjoint.csv").string();
    {
      auto out = open_out(path);
      out << "src,dst,ratio\n";
      const int n = s.num_tors();
      for (Tor a = 0; a < n; ++a)
        for (Tor b = 0; b < n; ++b)
          if (a != b)
            out << fmt::format("{},{},{:.6f}\n", a, b,
                               ratios[static_cast<std::size_t>(a) * (n - 1) + (b < a ? b : b - 1)]);
    }
    json c = sched.describe();
    c["k"] = k;
    c["max_hops"] = max_hops;
    write_manifest(outdir, "analyze disjoint", c, seed, sched.inputs(), {path});
    auto sorted = ratios;
    std::sort(sorted.begin(), sorted.end());
    std::cout << fmt::format("pairs={} median={:.6f}\n", sorted.size(),
                             sorted.empty() ? 0.0 : sorted[sorted.size() / 2]);
    return 0;
  }
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Routing, table compilation and simulation for time-slotted optical networks"};
  app.require_subcommand(1);
  int jobs = 0;
  app.add_option("--jobs", jobs, "OpenMP threads (0: runtime default)");
  app.set_version_flag("--version", kVersion);

  std::function<int()> action;
  ScheduleCmd schedule;
  RouteCmd route;
  TableCmd table;
  SimCmd sim;
  AnalyzeCmd analyze;
  schedule.attach(app, action);
  route.attach(app, action);
  table.attach(app, action);
  sim.attach(app, action);
  analyze.attach(app, action);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitIo;
  }
  if (jobs > 0) omp_set_num_threads(jobs);
  try {
    return action ? action() : 0;
  } catch (const ParseError& e) {
    std::cerr << "parse error: " << e.what() << '\n';
    return kExitIo;
  } catch (const ValidationError& e) {
    std::cerr << e.what();
    return kExitDomain;
  } catch (const DomainFailure& e) {
    std::cerr << e.what() << '\n';
    return kExitDomain;
  } catch (const InvalidParameter& e) {
    std::cerr << "invalid: " << e.what() << '\n';
    return kExitDomain;
  } catch (const Error& e) {
    // Includes schedule-specific errors (pair never connected and the like).
    std::cerr << e.what() << '\n';
    return dynamic_cast<const PairNeverConnected*>(&e) || dynamic_cast<const NoCrossing*>(&e)
               ? kExitDomain
               : kExitIo;
  }
}
