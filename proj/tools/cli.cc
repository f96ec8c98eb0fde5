#include "cli.h"

#include <algorithm>
#include <cctype>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <mutex>
#include <optional>
#include <sstream>

#include <CLI11.hpp>
#include <spdlog/sinks/stdout_sinks.h>
#include <spdlog/spdlog.h>

#include "osea/bench.h"
#include "osea/mip.h"
#include "osea/model.h"
#include "osea/mps.h"
#include "osea/osea.h"
#include "osea/report.h"

namespace osea {
namespace {

namespace fs = std::filesystem;

// Thrown for command-line misuse detected after CLI11 has parsed the flags.
class UsageError : public InputError {
 public:
  using InputError::InputError;
};

void ConfigureLogging(const std::string& flag) {
  static std::once_flag once;
  std::call_once(once, [] {
    auto logger = spdlog::stderr_logger_mt("osea");
    logger->set_pattern("[%l] %v");
    spdlog::set_default_logger(logger);
  });
  std::string level = flag;
  if (level.empty()) {
    const char* env = std::getenv("OSEA_LOG");
    level = env ? env : "warn";
  }
  std::transform(level.begin(), level.end(), level.begin(),
                 [](unsigned char c) { return std::tolower(c); });
  const spdlog::level::level_enum parsed = spdlog::level::from_str(level);
  if (parsed == spdlog::level::off && level != "off") {
    throw UsageError("unknown log level '" + level + "'");
  }
  spdlog::set_level(parsed);
}

std::string Num(double v) { return FormatNumber(v); }

MilpInstance LoadInstance(const std::string& path, bool legacy, std::ostream& err) {
  std::vector<std::string> warnings;
  MpsOptions opts;
  opts.legacy_integer_bounds = legacy;
  MilpInstance instance = ReadMpsFile(path, opts, &warnings);
  for (const std::string& w : warnings) err << "warning: " << w << "\n";
  return instance;
}

void WriteFile(const fs::path& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw InputError("cannot write " + path.string());
  f << text;
  if (!f) throw InputError("write failed for " + path.string());
}

int CmdCheck(const std::string& path, bool legacy, std::ostream& out, std::ostream& err) {
  const MilpInstance inst = LoadInstance(path, legacy, err);
  const ProblemClass cls = Classify(inst);
  out << "name: " << inst.name() << "\n"
      << "sense: " << (inst.sense() == ObjectiveSense::kMaximize ? "max" : "min") << "\n"
      << "class: " << ToString(cls) << "\n"
      << "variables: " << inst.num_vars() << "\n"
      << "binary: " << inst.count(VarKind::kBinary) << "\n"
      << "integer: " << inst.count(VarKind::kInteger) << "\n"
      << "continuous: " << inst.count(VarKind::kContinuous) << "\n"
      << "rows: " << inst.num_rows() << "\n"
      << "nonzeros: " << inst.num_entries() << "\n";
  const int cost_nonzeros = static_cast<int>(
      std::count_if(inst.cost().begin(), inst.cost().end(), [](double c) { return c != 0.0; }));
  out << "objective_nonzeros: " << cost_nonzeros << "\n";
  if (cls == ProblemClass::kLp) {
    out << "note: no integer variables, OSEA is not applicable\n";
  }
  return kExitOk;
}

struct SolveFlags {
  std::string path;
  std::string time_limit;
  int64_t node_limit = 0;
  double gap_tol = 1e-6;
  std::string write_sol;
};

int CmdSolve(const SolveFlags& f, bool legacy, std::ostream& out, std::ostream& err) {
  const MilpInstance inst = LoadInstance(f.path, legacy, err);
  BnbOptions opts;
  if (!f.time_limit.empty()) opts.limit = Budget::Parse(f.time_limit);
  if (f.node_limit > 0) opts.limit.nodes = std::min(opts.limit.nodes, f.node_limit);
  if (!(f.gap_tol >= 0.0)) throw UsageError("--gap-tol must be nonnegative");
  opts.gap_tolerance = f.gap_tol;
  const BnbResult r = SolveMip(inst, opts);
  out << "status: " << ToString(r.status) << "\n";
  out << "objective: "
      << (r.incumbent ? Num(ReportedObjective(inst, r.incumbent->objective)) : "NA") << "\n";
  out << "bound: " << (std::isfinite(r.bound) ? Num(ReportedObjective(inst, r.bound)) : "NA")
      << "\n";
  out << "nodes: " << r.nodes << "\n";
  out << "lp_iterations: " << r.lp_iterations << "\n";
  out << "time_s: " << Num(r.wall_time) << "\n";
  if (!f.write_sol.empty()) {
    if (!r.incumbent) {
      err << "warning: no solution to write\n";
    } else {
      WriteFile(f.write_sol, WriteSolution(inst, r.incumbent->x));
    }
  }
  return r.status == BnbStatus::kInfeasible ? kExitInfeasible : kExitOk;
}

struct OseaFlags {
  std::string path;
  std::string total_budget = "60";
  std::string incumbent_budget = "1";
  int n_max = 50;
  double support_tol = 1e-9;
  std::string report_json;
};

int CmdOsea(const OseaFlags& f, bool legacy, std::ostream& out, std::ostream& err) {
  const MilpInstance inst = LoadInstance(f.path, legacy, err);
  OseaOptions opts;
  opts.total_budget = Budget::Parse(f.total_budget);
  opts.incumbent_budget = Budget::Parse(f.incumbent_budget);
  if (f.n_max < 1) throw UsageError("--nmax must be at least 1");
  opts.n_max = f.n_max;
  if (!(f.support_tol > 0.0)) throw UsageError("--support-tol must be positive");
  opts.support_tol = f.support_tol;

  OseaResult r;
  try {
    r = RunOsea(inst, opts);
  } catch (const NotApplicableError& e) {
    err << "error: " << e.what() << "\n";
    return kExitNotApplicable;
  }
  std::string status = "NoSolutionFound";
  if (r.proven_infeasible) {
    status = "Infeasible";
  } else if (r.objective) {
    status = "Feasible";
  }
  out << "status: " << status << "\n";
  out << "objective: " << (r.objective ? Num(ReportedObjective(inst, *r.objective)) : "NA")
      << "\n";
  out << "source: " << ToString(r.source) << "\n";
  out << "gamma: " << Num(r.gamma) << "\n";
  out << "fixed: " << r.fix_set.size() << " of " << r.integer_count << "\n";
  out << "iterations_run: " << r.iterations_run << "\n";
  out << "stop_reason: " << ToString(r.stop_reason) << "\n";
  if (!r.diagnostic.empty()) out << "diagnostic: " << r.diagnostic << "\n";
  out << "ensemble:";
  for (const EnsembleMember& m : r.ensemble) {
    out << " " << ToString(m.provenance);
    if (m.iteration >= 0) out << "@" << m.iteration;
  }
  out << "\n";
  out << "incumbent_objective: "
      << (r.incumbent_objective ? Num(ReportedObjective(inst, *r.incumbent_objective)) : "NA")
      << "\n";
  out << "reduced_status: " << (r.reduced_status ? ToString(*r.reduced_status) : "NA") << "\n";
  if (r.fallback_full_solve) out << "note: empty ensemble, solved the full problem\n";
  if (r.m_clamped) out << "note: scaling constant clamped to 1\n";
  out << "nodes: " << r.nodes << "\n";
  out << "lp_iterations: " << r.lp_iterations << "\n";
  out << "time_incumbent_s: " << Num(r.timings.incumbent) << "\n"
      << "time_scaling_s: " << Num(r.timings.scaling) << "\n"
      << "time_aggregation_s: " << Num(r.timings.aggregation) << "\n"
      << "time_reduced_solve_s: " << Num(r.timings.reduced_solve) << "\n"
      << "time_total_s: " << Num(r.timings.total) << "\n";

  if (!f.report_json.empty()) {
    const bool timed = opts.total_budget.has_time_limit() || opts.incumbent_budget.has_time_limit();
    const std::string json = OseaResultToJson(r, inst, timed).dump(2) + "\n";
    if (f.report_json == "-") {
      out << json;
    } else {
      WriteFile(f.report_json, json);
    }
  }
  return r.proven_infeasible ? kExitInfeasible : kExitOk;
}

struct BenchFlags {
  std::string input;
  std::string generate;
  uint64_t seed = 1;
  std::string out_dir;
  std::string total_budget = "60";
  std::string incumbent_budget = "1";
  std::string oracle_budget = "600";
  int n_max = 50;
  int workers = 1;
  std::string clock;
};

// Directory: every *.mps file, sorted. Otherwise a manifest with one path per
// line, relative to the manifest, '#' starting a comment.
std::vector<std::string> ListInputs(const std::string& input) {
  std::vector<std::string> paths;
  const fs::path root(input);
  if (fs::is_directory(root)) {
    for (const auto& entry : fs::directory_iterator(root)) {
      std::string ext = entry.path().extension().string();
      std::transform(ext.begin(), ext.end(), ext.begin(),
                     [](unsigned char c) { return std::tolower(c); });
      if (entry.is_regular_file() && ext == ".mps") paths.push_back(entry.path().string());
    }
    std::sort(paths.begin(), paths.end());
    return paths;
  }
  std::istringstream lines(ReadTextFile(input));
  std::string line;
  while (std::getline(lines, line)) {
    if (const size_t hash = line.find('#'); hash != std::string::npos) line.resize(hash);
    const size_t a = line.find_first_not_of(" \t\r");
    if (a == std::string::npos) continue;
    const size_t b = line.find_last_not_of(" \t\r");
    fs::path p(line.substr(a, b - a + 1));
    if (p.is_relative()) p = root.parent_path() / p;
    paths.push_back(p.string());
  }
  return paths;
}

int CmdBench(const BenchFlags& f, bool legacy, std::ostream& out, std::ostream& err) {
  if (f.input.empty() == f.generate.empty()) {
    throw UsageError("bench needs exactly one of an input path or --generate <spec>");
  }
  BenchOptions opts;
  opts.total = Budget::Parse(f.total_budget);
  opts.incumbent = Budget::Parse(f.incumbent_budget);
  opts.oracle = Budget::Parse(f.oracle_budget);
  if (f.n_max < 1) throw UsageError("--nmax must be at least 1");
  opts.n_max = f.n_max;
  if (f.workers < 1) throw UsageError("--workers must be at least 1");
  opts.workers = f.workers;
  const bool node_limited = !opts.total.has_time_limit() && !opts.incumbent.has_time_limit() &&
                            !opts.oracle.has_time_limit();
  if (f.clock.empty()) {
    opts.time_source = node_limited ? TimeSource::kWork : TimeSource::kWallClock;
  } else if (f.clock == "wall") {
    opts.time_source = TimeSource::kWallClock;
  } else if (f.clock == "work") {
    opts.time_source = TimeSource::kWork;
  } else {
    throw UsageError("--clock must be wall or work");
  }

  std::vector<BenchInstance> instances;
  if (!f.generate.empty()) {
    const GeneratorSpec spec = ParseGeneratorSpec(f.generate);
    std::vector<GeneratedInstance> generated = GenerateInstances(f.seed, spec);
    for (size_t k = 0; k < generated.size(); ++k) {
      char id[32];
      std::snprintf(id, sizeof(id), "gen%04zu", k);
      instances.push_back({id, std::move(generated[k].instance)});
    }
  } else {
    for (const std::string& path : ListInputs(f.input)) {
      try {
        instances.push_back({fs::path(path).stem().string(), LoadInstance(path, legacy, err)});
      } catch (const InputError& e) {
        err << "warning: skipping " << path << ": " << e.what() << "\n";
      }
    }
  }
  if (instances.empty()) throw UsageError("no benchmark instances found");

  const std::vector<MethodSpec> methods = DefaultMethods();
  const BenchReport report = RunBenchmark(instances, methods, opts);
  for (const std::string& w : report.warnings) err << "warning: " << w << "\n";

  const fs::path dir(f.out_dir);
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw InputError("cannot create " + dir.string() + ": " + ec.message());
  WriteFile(dir / "records.csv", RecordsToCsv(report.records));
  WriteFile(dir / "profile_time.csv", ProfilesToCsv(report.time_profile));
  WriteFile(dir / "profile_gap.csv", ProfilesToCsv(report.gap_profile));
  const std::string summary = SummaryToText(report.summary);
  WriteFile(dir / "summary.txt", summary);
  WriteFile(dir / "summary.csv", SummaryToCsv(report.summary));
  out << summary;
  out << "records: " << report.records.size() << "\n";
  return kExitOk;
}

}  // namespace

int RunCli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"MILP toolkit with the objective scaling ensemble heuristic", "osea"};
  app.require_subcommand(1);
  std::string log_level;
  bool legacy = false;
  app.add_option("--log", log_level, "off, error, warn, info, debug or trace (overrides OSEA_LOG)");
  app.add_flag("--legacy-int-bounds", legacy, "unbounded integer MPS columns default to [0,1]");

  std::string check_path;
  CLI::App* check = app.add_subcommand("check", "validate and classify an MPS file");
  check->add_option("path", check_path, "MPS file or - for stdin")->required();

  SolveFlags solve_flags;
  CLI::App* solve = app.add_subcommand("solve", "solve with branch-and-bound");
  solve->add_option("path", solve_flags.path, "MPS file or - for stdin")->required();
  solve->add_option("--time-limit", solve_flags.time_limit, "seconds or <n>nodes");
  solve->add_option("--node-limit", solve_flags.node_limit, "maximum explored nodes");
  solve->add_option("--gap-tol", solve_flags.gap_tol, "absolute-relative pruning tolerance");
  solve->add_option("--write-sol", solve_flags.write_sol, "write `name value` lines here");

  OseaFlags osea_flags;
  CLI::App* osea = app.add_subcommand("osea", "run the objective scaling ensemble heuristic");
  osea->add_option("path", osea_flags.path, "MPS file or - for stdin")->required();
  osea->add_option("--total-budget", osea_flags.total_budget, "seconds or <n>nodes")
      ->capture_default_str();
  osea->add_option("--incumbent-budget", osea_flags.incumbent_budget, "seconds or <n>nodes")
      ->capture_default_str();
  osea->add_option("--nmax", osea_flags.n_max, "maximum scaling LP solves")->capture_default_str();
  osea->add_option("--support-tol", osea_flags.support_tol, "support threshold")
      ->capture_default_str();
  osea->add_option("--report-json", osea_flags.report_json, "write the JSON report (- for stdout)");

  BenchFlags bench_flags;
  CLI::App* bench = app.add_subcommand("bench", "compare OSEA with plain branch-and-bound");
  bench->add_option("input", bench_flags.input, "directory of .mps files or a manifest");
  bench->add_option("--generate", bench_flags.generate, "generator spec, e.g. count=20,n=15..25");
  bench->add_option("--seed", bench_flags.seed, "generator seed")->capture_default_str();
  bench->add_option("--out", bench_flags.out_dir, "output directory")->required();
  bench->add_option("--total-budget", bench_flags.total_budget, "seconds or <n>nodes")
      ->capture_default_str();
  bench->add_option("--incumbent-budget", bench_flags.incumbent_budget, "seconds or <n>nodes")
      ->capture_default_str();
  bench->add_option("--oracle-budget", bench_flags.oracle_budget,
                    "reference solve budget, seconds or <n>nodes")
      ->capture_default_str();
  bench->add_option("--nmax", bench_flags.n_max, "maximum scaling LP solves")->capture_default_str();
  bench->add_option("--workers", bench_flags.workers, "parallel instance solves")
      ->capture_default_str();
  bench->add_option("--clock", bench_flags.clock,
                    "wall or work; defaults to work when every budget is node-limited");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    app.exit(e, out, err);
    return kExitOk;
  } catch (const CLI::CallForAllHelp& e) {
    app.exit(e, out, err);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kExitInputError;
  }

  try {
    ConfigureLogging(log_level);
    if (*check) return CmdCheck(check_path, legacy, out, err);
    if (*solve) return CmdSolve(solve_flags, legacy, out, err);
    if (*osea) return CmdOsea(osea_flags, legacy, out, err);
    return CmdBench(bench_flags, legacy, out, err);
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n";
    CLI::App* active = app.get_subcommands().empty() ? &app : app.get_subcommands().front();
    err << active->help();
    return kExitInputError;
  } catch (const InputError& e) {
    err << "error: " << e.what() << "\n";
    return kExitInputError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitInputError;
  }
}

}  // namespace osea
