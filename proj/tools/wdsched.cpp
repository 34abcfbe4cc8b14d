#include <CLI11.hpp>

#include <algorithm>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <map>
#include <random>
#include <sstream>

#include "wdsched/io.hpp"
#include "wdsched/oracle.hpp"
#include "wdsched/solitary.hpp"

namespace fs = std::filesystem;
using namespace wdsched;

namespace {

constexpr const char* kVersion = "0.1.0";

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, sep)) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

Rational parse_rational(const std::string& s) {
  Rational r;
  if (r.set_str(s, 10) != 0) throw std::invalid_argument("bad rational '" + s + "'");
  r.canonicalize();
  return r;
}

std::pair<int, int> parse_dims(const std::string& s) {
  auto x = s.find('x');
  if (x == std::string::npos) throw std::invalid_argument("expected AxB, got '" + s + "'");
  return {std::stoi(s.substr(0, x)), std::stoi(s.substr(x + 1))};
}

// line:N | grid:RxC | sink-tree:DEPTHxDEGREE | grid-random:RxC:P:SEED
TopologyKind parse_topology(const std::string& s) {
  auto parts = split(s, ':');
  if (parts.empty()) throw std::invalid_argument("empty topology");
  const std::string& kind = parts[0];
  if (kind == "line" && parts.size() == 2) return topo::Line{std::stoi(parts[1])};
  if (kind == "grid" && parts.size() == 2) {
    auto [r, c] = parse_dims(parts[1]);
    return topo::Grid{r, c};
  }
  if (kind == "sink-tree" && parts.size() == 2) {
    auto [d, k] = parse_dims(parts[1]);
    return topo::SinkTree{d, k};
  }
  if (kind == "grid-random" && parts.size() == 4) {
    auto [r, c] = parse_dims(parts[1]);
    return topo::GridRandom{r, c, std::stod(parts[2]), std::stoull(parts[3])};
  }
  throw std::invalid_argument("unknown topology '" + s + "'");
}

// "4,8,12" or "4:40:4" (inclusive)
std::vector<int> parse_int_grid(const std::string& s) {
  std::vector<int> out;
  auto range = split(s, ':');
  if (range.size() == 3) {
    int lo = std::stoi(range[0]), hi = std::stoi(range[1]), step = std::stoi(range[2]);
    if (step <= 0) throw std::invalid_argument("grid step must be positive");
    for (int v = lo; v <= hi; v += step) out.push_back(v);
  } else {
    for (const auto& p : split(s, ',')) out.push_back(std::stoi(p));
  }
  if (out.empty()) throw std::invalid_argument("empty grid '" + s + "'");
  return out;
}

// "1,2,9" or "1-50" (inclusive)
std::vector<std::uint64_t> parse_seeds(const std::string& s) {
  std::vector<std::uint64_t> out;
  for (const auto& part : split(s, ',')) {
    auto dash = part.find('-');
    if (dash == std::string::npos) {
      out.push_back(std::stoull(part));
    } else {
      std::uint64_t lo = std::stoull(part.substr(0, dash)), hi = std::stoull(part.substr(dash + 1));
      for (std::uint64_t v = lo; v <= hi; ++v) out.push_back(v);
    }
  }
  if (out.empty()) throw std::invalid_argument("no seeds given");
  return out;
}

Json metadata(const std::string& command, const std::vector<std::string>& argv, const Json& seeds,
              const Json& timings) {
  Json j;
  j["tool"] = "wdsched";
  j["version"] = kVersion;
  j["compiler"] = __VERSION__;
  j["command"] = command;
  j["argv"] = argv;
  j["generator"] = "mt19937_64";
  j["seeds"] = seeds;
  j["timings_s"] = timings;
  return j;
}

void print_flows(const Json& summary, double slot_us) {
  std::cout << std::left << std::setw(6) << "flow" << std::setw(6) << "tau" << std::setw(10) << "delay"
            << std::setw(12) << "delay_ms" << "supported\n";
  for (const auto& f : summary["flows"]) {
    std::int64_t d = f["max_delay"].get<std::int64_t>();
    std::cout << std::setw(6) << f["flow"].get<int>() << std::setw(6) << f["tau"].get<int>() << std::setw(10) << d
              << std::setw(12) << slots_to_ms(d, slot_us) << (f["supported"].get<bool>() ? "yes" : "no") << '\n';
  }
}

// ---------------------------------------------------------------- solve

struct SolveArgs {
  std::string scenario;
  std::string out;
  std::int64_t period_cap = SolveOptions().period_cap;
  std::uint64_t exhaustive_cap = SolveOptions().exhaustive_cap;
  std::int64_t horizon_periods = SolveOptions().sim.horizon_periods;
  bool trace = false;
  double slot_us = kSlotMicroseconds;
};

int cmd_solve(const SolveArgs& a, const std::vector<std::string>& argv) {
  auto t0 = Clock::now();
  Scenario scn = load_scenario(a.scenario);
  SolveOptions opt;
  opt.period_cap = a.period_cap;
  opt.exhaustive_cap = a.exhaustive_cap;
  opt.sim.horizon_periods = a.horizon_periods;
  opt.sim.record_queues = a.trace;
  double load_s = seconds_since(t0);
  auto t1 = Clock::now();
  SolveResult r = solve(scn, opt);
  double solve_s = seconds_since(t1);

  fs::create_directories(a.out);
  const fs::path dir(a.out);
  Json summary = solve_summary(scn, r);
  write_json_file((dir / "summary.json").string(), summary);
  if (r.feasible) {
    Json sched = schedule_to_json(r.schedule);
    sched["text"] = run_length(r.schedule);
    write_json_file((dir / "schedule.json").string(), sched);
    write_json_file((dir / "coloring.json").string(), coloring_to_json(r.instance, r.wgc));
    write_json_file((dir / "slices.json").string(), slices_to_json(r.slices));
    if (a.trace) {
      std::ofstream os(dir / "trace.csv");
      write_trace_csv(os, scn, r.trace);
    }
  }
  write_json_file((dir / "metadata.json").string(),
                  metadata("solve", argv, Json::array(), {{"load", load_s}, {"solve", solve_s}}));

  if (r.feasible) {
    std::cout << "feasible: " << r.wgc.coloring.sets.size() << " colors, period " << r.schedule.period() << " ("
              << r.pinwheel.method << ")\n";
    print_flows(summary, a.slot_us);
    return 0;
  }
  std::cout << "infeasible at " << to_string(r.failed) << ": " << r.message << '\n';
  if (!r.support.empty()) print_flows(summary, a.slot_us);
  return 1;
}

// ------------------------------------------------------------- simulate

struct SimulateArgs {
  std::string scenario;
  std::string schedule;
  std::string slices;
  std::string out;
  std::string trace;
  std::int64_t horizon_periods = 3;
  double slot_us = kSlotMicroseconds;
};

int cmd_simulate(const SimulateArgs& a) {
  Scenario scn = load_scenario(a.scenario);
  SolveResult r;
  r.schedule = schedule_from_json(read_json_file(a.schedule));
  r.slices = a.slices.empty() ? capacity_slices(scn) : slices_from_json(read_json_file(a.slices));
  check_conflict_free(r.schedule, scn.net, scn.model);
  SimOptions opt;
  opt.horizon_periods = a.horizon_periods;
  opt.record_queues = !a.trace.empty();
  r.trace = simulate(scn, r.schedule, r.slices, opt);
  if (!r.trace.steady) throw std::runtime_error("no steady state within the slot budget");
  r.support = verify_support(r.trace, scn);
  r.deficits = delay_deficit_trace(r.trace, scn, r.schedule, r.slices);
  r.feasible = std::all_of(r.support.begin(), r.support.end(), [](const auto& v) { return v.supported; });
  if (!r.feasible) {
    r.failed = Stage::Simulation;
    r.message = "deadline missed";
    for (const auto& v : r.support) {
      if (!v.supported) r.binding_flows.push_back(v.flow);
    }
  }
  Json summary = solve_summary(scn, r);
  if (!a.out.empty()) write_json_file(a.out, summary);
  if (!a.trace.empty()) {
    std::ofstream os(a.trace);
    write_trace_csv(os, scn, r.trace);
  }
  std::cout << (r.feasible ? "supported" : "not supported") << ": period " << r.schedule.period() << '\n';
  print_flows(summary, a.slot_us);
  return r.feasible ? 0 : 1;
}

// ---------------------------------------------------------------- sweep

struct SweepArgs {
  std::string topology = "grid:4x4";
  int phi = 1;
  std::string pattern = "random";
  std::size_t flows = 32;
  std::string fractions = "1/4,1/2,3/4,1";
  std::string taus = "4:40:4";
  std::string seeds;
  std::size_t instances = 0;
  std::uint64_t seed_base = 1;
  unsigned threads = 1;
  std::int64_t period_cap = SolveOptions().period_cap;
  std::uint64_t exhaustive_cap = SolveOptions().exhaustive_cap;
  std::int64_t horizon_periods = SolveOptions().sim.horizon_periods;
  std::string out;
  std::string meta;
};

int cmd_sweep(const SweepArgs& a, const std::vector<std::string>& argv) {
  SweepConfig cfg;
  cfg.topology = parse_topology(a.topology);
  cfg.phi = a.phi;
  if (a.pattern == "random") {
    cfg.pattern = FlowPattern::Random;
  } else if (a.pattern == "leaves") {
    cfg.pattern = FlowPattern::LeavesToSink;
  } else {
    throw std::invalid_argument("unknown flow pattern '" + a.pattern + "'");
  }
  cfg.flow_count = a.flows;
  for (const auto& f : split(a.fractions, ',')) cfg.lambda_fractions.push_back(parse_rational(f));
  cfg.taus = parse_int_grid(a.taus);
  if (!a.seeds.empty()) {
    cfg.seeds = parse_seeds(a.seeds);
  } else {
    if (a.instances == 0) throw std::invalid_argument("give --seeds or --instances");
    for (std::size_t i = 0; i < a.instances; ++i) cfg.seeds.push_back(a.seed_base + i);
  }
  cfg.threads = std::max(1u, a.threads);
  cfg.solve.period_cap = a.period_cap;
  cfg.solve.exhaustive_cap = a.exhaustive_cap;
  cfg.solve.sim.horizon_periods = a.horizon_periods;

  std::ofstream file;
  if (!a.out.empty()) {
    file.open(a.out);
    if (!file) throw std::runtime_error("cannot write " + a.out);
  }
  std::ostream& os = a.out.empty() ? std::cout : file;
  auto t0 = Clock::now();
  write_sweep_header(os);
  auto rows = run_sweep(cfg, [&](const SweepRow& r) {
    write_sweep_row(os, r);
    os.flush();
  });
  double sweep_s = seconds_since(t0);
  if (!a.meta.empty()) {
    Json m = metadata("sweep", argv, cfg.seeds, {{"sweep", sweep_s}});
    m["topology"] = describe(cfg.topology);
    m["points"] = rows.size();
    write_json_file(a.meta, m);
  }
  if (!a.out.empty()) {
    for (const auto& p : feasibility_curve(rows)) {
      std::cout << "tau " << p.tau << " (" << slots_to_ms(p.tau) << " ms): rate " << p.rate << '\n';
    }
  }
  return 0;
}

// --------------------------------------------------------------- oracle

struct OracleArgs {
  std::string scenario;
  std::string slices;
  std::string mode = "impulse";
  std::int64_t period_bound = 12;
  std::int64_t period_base = 1;
  std::uint64_t guard = OracleOptions().guard;
  std::string out;
};

int cmd_oracle(const OracleArgs& a) {
  Scenario scn = load_scenario(a.scenario);
  ThroughputResult t = throughput_lp(scn);
  std::cout << "throughput bound: " << std::setprecision(12) << t.lambda << " (" << t.source << ", " << t.sets
            << " sets)\n";
  OracleOptions opt;
  if (a.mode == "impulse") {
    opt.mode = OracleMode::Impulse;
  } else if (a.mode == "steady") {
    opt.mode = OracleMode::Steady;
  } else {
    throw std::invalid_argument("unknown oracle mode '" + a.mode + "'");
  }
  opt.period_bound = a.period_bound;
  opt.period_base = a.period_base;
  opt.guard = a.guard;
  SliceAssignment slices = a.slices.empty() ? capacity_slices(scn) : slices_from_json(read_json_file(a.slices));
  OracleResult r = min_deadline_oracle(scn, slices, opt);
  Json j;
  j["throughput"] = {{"lambda", t.lambda}, {"source", t.source}};
  j["examined"] = r.examined;
  j["found"] = r.found;
  if (r.found) {
    j["best_delay"] = r.best_delay;
    j["schedule"] = schedule_to_json(r.best);
    std::cout << "best max delay " << r.best_delay << " with " << run_length(r.best) << '\n';
  } else {
    std::cout << "no schedule within period " << a.period_bound << '\n';
  }
  std::cout << r.examined << " candidates examined\n";
  if (!a.out.empty()) write_json_file(a.out, j);
  return r.found ? 0 : 1;
}

// --------------------------------------------------------------- greedy

struct GreedyArgs {
  std::size_t hops = 6;
  int phi = 5;
  std::string distribution = "uniform";
  std::size_t instances = 1000;
  std::uint64_t seed = 1;
  std::string out;
};

int cmd_greedy(const GreedyArgs& a, const std::vector<std::string>& argv) {
  std::vector<WidthDistribution> dists;
  if (a.distribution == "all") {
    dists = {WidthDistribution::Normal, WidthDistribution::Uniform, WidthDistribution::Bimodal};
  } else {
    dists = {width_distribution_from_string(a.distribution)};
  }
  std::ofstream file;
  if (!a.out.empty()) {
    file.open(a.out);
    if (!file) throw std::runtime_error("cannot write " + a.out);
  }
  std::ostream& os = a.out.empty() ? std::cout : file;
  os << "instance,distribution,hops,phi,lambda,max_delay,zeta,steady\n";
  std::mt19937_64 rng(a.seed);
  std::vector<double> zetas;
  auto t0 = Clock::now();
  for (std::size_t i = 0; i < a.instances; ++i) {
    WidthDistribution d = dists[i % dists.size()];
    std::vector<Rational> w = random_widths(a.hops, d, rng);
    Rational lambda = lambda_star(w, a.phi);
    GreedyResult g = greedy_delay_ratio({w, a.phi, lambda});
    double z = to_double(g.zeta);
    zetas.push_back(z);
    os << i << ',' << to_string(d) << ',' << a.hops << ',' << a.phi << ',' << to_string(lambda) << ','
       << g.max_delay << ',' << std::setprecision(9) << z << ',' << (g.steady ? 1 : 0) << '\n';
  }
  if (!a.out.empty()) {
    write_json_file(a.out + ".meta.json", metadata("greedy", argv, Json::array({a.seed}),
                                                   {{"greedy", seconds_since(t0)}}));
    auto at_most = [&](double x) {
      return static_cast<double>(std::count_if(zetas.begin(), zetas.end(), [&](double z) { return z <= x; })) /
             static_cast<double>(zetas.size());
    };
    double mean = 0;
    for (double z : zetas) mean += z;
    mean /= static_cast<double>(std::max<std::size_t>(1, zetas.size()));
    std::cout << "zeta <= 1: " << at_most(1.0) << ", zeta <= 1.2: " << at_most(1.2) << ", mean " << mean << '\n';
  }
  return 0;
}

// --------------------------------------------------------------- report

double quantile(std::vector<double> v, double q) {
  std::sort(v.begin(), v.end());
  std::size_t idx = static_cast<std::size_t>(std::ceil(q * static_cast<double>(v.size())));
  return v[std::min(v.size() - 1, idx == 0 ? 0 : idx - 1)];
}

std::vector<double> greedy_zetas(const fs::path& p) {
  std::ifstream in(p);
  std::string line;
  std::getline(in, line);
  std::vector<double> out;
  while (std::getline(in, line)) {
    auto cells = split(line, ',');
    if (cells.size() != 8) throw std::runtime_error(p.string() + ": malformed greedy row");
    out.push_back(std::stod(cells[6]));
  }
  return out;
}

std::string first_line(const fs::path& p) {
  std::ifstream in(p);
  std::string line;
  std::getline(in, line);
  return line;
}

struct ReportArgs {
  std::string dir;
  double slot_us = kSlotMicroseconds;
  std::string csv;
};

int cmd_report(const ReportArgs& a) {
  if (!fs::is_directory(a.dir)) throw std::runtime_error(a.dir + " is not a directory");
  std::vector<fs::path> files;
  for (const auto& e : fs::recursive_directory_iterator(a.dir)) {
    if (e.is_regular_file()) files.push_back(e.path());
  }
  std::sort(files.begin(), files.end());

  std::ostringstream delays;
  delays << "source,flow,tau,max_delay,max_delay_ms,supported,zeta\n";
  std::vector<double> zetas;
  std::ostringstream kbar;
  std::ostringstream curves;
  std::size_t used = 0;

  for (const auto& p : files) {
    const std::string rel = fs::relative(p, a.dir).string();
    if (p.extension() == ".json" && p.filename() != "metadata.json") {
      Json j = read_json_file(p.string());
      if (!j.is_object() || !j.contains("flows") || !j.contains("feasible")) continue;
      ++used;
      for (const auto& f : j["flows"]) {
        std::int64_t d = f.at("max_delay").get<std::int64_t>();
        delays << rel << ',' << f.at("flow").get<int>() << ',' << f.at("tau").get<int>() << ',' << d << ','
               << slots_to_ms(d, a.slot_us) << ',' << (f.at("supported").get<bool>() ? 1 : 0) << ',';
        if (f.contains("zeta")) {
          zetas.push_back(f["zeta"].get<double>());
          delays << f["zeta"].get<double>();
        }
        delays << '\n';
        if (f.contains("kbar")) {
          kbar << "  " << rel << " flow " << f["flow"].get<int>() << ": kbar";
          for (auto k : f["kbar"]) kbar << ' ' << k.get<std::int64_t>();
          kbar << "  sum " << f["kbar_sum"].get<std::int64_t>() << "  tau " << f["tau"].get<int>() << '\n';
        }
      }
    } else if (p.extension() == ".csv") {
      std::string head = first_line(p);
      if (head.rfind("fraction,", 0) == 0) {
        ++used;
        std::ifstream in(p);
        auto rows = read_sweep_csv(in);
        curves << "  " << rel << '\n';
        for (const auto& c : feasibility_curve(rows)) {
          curves << "    tau " << c.tau << " (" << slots_to_ms(c.tau, a.slot_us) << " ms): " << c.rate << '\n';
        }
      } else if (head.rfind("instance,distribution,", 0) == 0) {
        ++used;
        auto z = greedy_zetas(p);
        zetas.insert(zetas.end(), z.begin(), z.end());
      }
    }
  }
  if (used == 0) throw std::runtime_error("no artifacts found in " + a.dir);

  std::cout << "per-flow delays (" << a.slot_us << " us per slot)\n" << delays.str();
  if (!zetas.empty()) {
    double mean = 0;
    for (double z : zetas) mean += z;
    mean /= static_cast<double>(zetas.size());
    std::cout << "delay ratio over " << zetas.size() << " samples: min " << quantile(zetas, 0) << " p05 "
              << quantile(zetas, 0.05) << " p50 " << quantile(zetas, 0.5) << " p95 " << quantile(zetas, 0.95)
              << " max " << quantile(zetas, 1) << " mean " << mean << '\n';
    std::map<int, std::size_t> hist;
    for (double z : zetas) ++hist[static_cast<int>(std::floor(z * 10))];
    for (auto [bin, n] : hist) {
      std::cout << "  [" << bin / 10.0 << ", " << (bin + 1) / 10.0 << "): " << n << '\n';
    }
  }
  if (!kbar.str().empty()) std::cout << "measured kbar\n" << kbar.str();
  if (!curves.str().empty()) std::cout << "feasibility curves\n" << curves.str();
  if (!a.csv.empty()) {
    std::ofstream os(a.csv);
    if (!os) throw std::runtime_error("cannot write " + a.csv);
    os << delays.str();
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  std::vector<std::string> args(argv, argv + argc);
  CLI::App app{"Deadline-aware schedule synthesis for multi-hop wireless networks"};
  app.require_subcommand(1);
  app.set_version_flag("--version", kVersion);

  SolveArgs sa;
  auto* solve_cmd = app.add_subcommand("solve", "Color, schedule, simulate and certify a scenario");
  solve_cmd->add_option("scenario", sa.scenario, "Scenario JSON")->required()->check(CLI::ExistingFile);
  solve_cmd->add_option("-o,--out", sa.out, "Output directory")->required();
  solve_cmd->add_option("--period-cap", sa.period_cap, "Longest pinwheel period accepted");
  solve_cmd->add_option("--exhaustive-cap", sa.exhaustive_cap, "State budget of the exhaustive pinwheel search");
  solve_cmd->add_option("--horizon-periods", sa.horizon_periods, "Measured periods after steady onset");
  solve_cmd->add_flag("--trace", sa.trace, "Write per-slot queue volumes to trace.csv");
  solve_cmd->add_option("--slot-us", sa.slot_us, "Slot duration for display");

  SimulateArgs ma;
  auto* sim_cmd = app.add_subcommand("simulate", "Simulate a persisted schedule and check deadlines");
  sim_cmd->add_option("scenario", ma.scenario, "Scenario JSON")->required()->check(CLI::ExistingFile);
  sim_cmd->add_option("schedule", ma.schedule, "Schedule JSON")->required()->check(CLI::ExistingFile);
  sim_cmd->add_option("--slices", ma.slices, "Slice JSON (default: full capacity)")->check(CLI::ExistingFile);
  sim_cmd->add_option("-o,--out", ma.out, "Summary JSON");
  sim_cmd->add_option("--trace", ma.trace, "Trace CSV");
  sim_cmd->add_option("--horizon-periods", ma.horizon_periods, "Measured periods after steady onset");
  sim_cmd->add_option("--slot-us", ma.slot_us, "Slot duration for display");

  SweepArgs wa;
  auto* sweep_cmd = app.add_subcommand("sweep", "Feasibility sweep over rate and deadline grids");
  sweep_cmd->add_option("--topology", wa.topology, "line:N, grid:RxC, sink-tree:DxK or grid-random:RxC:P:SEED");
  sweep_cmd->add_option("--phi", wa.phi, "Interference hops");
  sweep_cmd->add_option("--pattern", wa.pattern, "random or leaves");
  sweep_cmd->add_option("--flows", wa.flows, "Flows per instance (random pattern)");
  sweep_cmd->add_option("--fractions", wa.fractions, "Rates as fractions of the throughput bound");
  sweep_cmd->add_option("--taus", wa.taus, "Deadlines: list or lo:hi:step");
  sweep_cmd->add_option("--seeds", wa.seeds, "Seeds: list or lo-hi");
  sweep_cmd->add_option("--instances", wa.instances, "Instance count when --seeds is absent");
  sweep_cmd->add_option("--seed-base", wa.seed_base, "First seed when using --instances");
  sweep_cmd->add_option("--threads", wa.threads, "Worker threads");
  sweep_cmd->add_option("--period-cap", wa.period_cap, "Longest pinwheel period accepted");
  sweep_cmd->add_option("--exhaustive-cap", wa.exhaustive_cap, "State budget of the exhaustive pinwheel search");
  sweep_cmd->add_option("--horizon-periods", wa.horizon_periods, "Measured periods after steady onset");
  sweep_cmd->add_option("-o,--out", wa.out, "CSV output (default stdout)");
  sweep_cmd->add_option("--metadata", wa.meta, "Run metadata JSON");

  ReportArgs ra;
  auto* report_cmd = app.add_subcommand("report", "Summarize solve, sweep and greedy artifacts");
  report_cmd->add_option("dir", ra.dir, "Artifact directory")->required();
  report_cmd->add_option("--slot-us", ra.slot_us, "Slot duration");
  report_cmd->add_option("--csv", ra.csv, "Per-flow delay CSV");

  OracleArgs oa;
  auto* oracle_cmd = app.add_subcommand("oracle", "Exhaustive minimum-delay schedule and throughput bound");
  oracle_cmd->add_option("scenario", oa.scenario, "Scenario JSON")->required()->check(CLI::ExistingFile);
  oracle_cmd->add_option("--slices", oa.slices, "Slice JSON (default: full capacity)")->check(CLI::ExistingFile);
  oracle_cmd->add_option("--mode", oa.mode, "impulse or steady");
  oracle_cmd->add_option("--period-bound", oa.period_bound, "Longest period searched");
  oracle_cmd->add_option("--period-base", oa.period_base, "Steady mode: periods are multiples of this");
  oracle_cmd->add_option("--guard", oa.guard, "Candidate budget");
  oracle_cmd->add_option("-o,--out", oa.out, "Result JSON");

  GreedyArgs ga;
  auto* greedy_cmd = app.add_subcommand("greedy", "Greedy delay ratio on random solitary lines");
  greedy_cmd->add_option("--hops", ga.hops, "Links per line");
  greedy_cmd->add_option("--phi", ga.phi, "Interference hops");
  greedy_cmd->add_option("--distribution", ga.distribution, "normal, uniform, bimodal or all");
  greedy_cmd->add_option("--instances", ga.instances, "Number of lines");
  greedy_cmd->add_option("--seed", ga.seed, "Generator seed");
  greedy_cmd->add_option("-o,--out", ga.out, "CSV output (default stdout)");

  CLI11_PARSE(app, argc, argv);
  try {
    if (*solve_cmd) return cmd_solve(sa, args);
    if (*sim_cmd) return cmd_simulate(ma);
    if (*sweep_cmd) return cmd_sweep(wa, args);
    if (*report_cmd) return cmd_report(ra);
    if (*oracle_cmd) return cmd_oracle(oa);
    if (*greedy_cmd) return cmd_greedy(ga, args);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 2;
}
