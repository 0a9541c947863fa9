#include <algorithm>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "collsched/demand.hpp"
#include "collsched/epoch_estimator.hpp"
#include "collsched/error.hpp"
#include "collsched/generators.hpp"
#include "collsched/io.hpp"
#include "collsched/lp_alltoall.hpp"
#include "collsched/milp_general.hpp"
#include "collsched/pipeline.hpp"
#include "collsched/schedule.hpp"
#include "collsched/simulator.hpp"
#include "collsched/topology.hpp"

namespace cs = collsched;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitOther = 1;
constexpr int kExitInfeasible = 2;
constexpr int kExitTimeout = 3;
constexpr int kExitValidation = 4;

int exit_code(cs::ErrorKind kind) {
  switch (kind) {
    case cs::ErrorKind::kInfeasible: return kExitInfeasible;
    case cs::ErrorKind::kTimeout: return kExitTimeout;
    case cs::ErrorKind::kValidation: return kExitValidation;
    default: return kExitOther;
  }
}

int report_error(std::string_view kind, const std::string& message, int code) {
  cs::Json j;
  j["error"] = {{"kind", std::string(kind)}, {"message", message}, {"exit_code", code}};
  std::cerr << j.dump() << '\n';
  return code;
}

void emit(const cs::Json& j, const std::string& path) {
  if (path.empty()) {
    std::cout << j.dump(2) << '\n';
  } else {
    cs::write_json_file(path, j);
  }
}

cs::Topology load_topology(const std::string& path) {
  cs::Topology t = cs::topology_from_json(cs::read_json_file(path));
  cs::require_valid(t);
  return t;
}

cs::Demand load_demand(const std::string& path, const cs::Topology& t) {
  cs::Demand d = cs::demand_from_json(cs::read_json_file(path));
  cs::check_demand_against(t, d);
  return d;
}

struct GenTopologyArgs {
  std::string kind;
  int chassis = 1;
  int nodes = 4;
  double capacity = 1.0;
  double alpha = 0.0;
  std::string out;
};

int cmd_gen_topology(const GenTopologyArgs& a) {
  cs::Topology t;
  if (a.kind == "dgx1") {
    t = cs::make_dgx1();
  } else if (a.kind == "ndv2") {
    t = cs::make_ndv2(a.chassis);
  } else if (a.kind == "dgx2") {
    t = cs::make_dgx2(a.chassis);
  } else if (a.kind == "star") {
    t = cs::make_star(a.nodes, a.capacity, a.alpha);
  } else if (a.kind == "line") {
    t = cs::make_line(a.nodes, a.capacity, a.alpha);
  } else {
    t = cs::make_ring(a.nodes, a.capacity, a.alpha);
  }
  emit(cs::topology_to_json(t), a.out);
  return kExitOk;
}

struct GenDemandArgs {
  std::string kind;
  std::string topology;
  int chunks = 1;
  double chunk_size = 0.0;
  std::string out;
};

int cmd_gen_demand(const GenDemandArgs& a) {
  const cs::Topology t = load_topology(a.topology);
  const cs::CollectiveKind kind = a.kind == "allgather" ? cs::CollectiveKind::kAllGather
                                                        : cs::CollectiveKind::kAllToAll;
  emit(cs::demand_to_json(cs::generate_demand(kind, t, a.chunks, a.chunk_size)), a.out);
  return kExitOk;
}

struct MergeArgs {
  std::vector<std::string> inputs;
  std::string out;
};

int cmd_merge_demands(const MergeArgs& a) {
  std::vector<cs::Demand> ds;
  for (const std::string& p : a.inputs) ds.push_back(cs::demand_from_json(cs::read_json_file(p)));
  emit(cs::demand_to_json(cs::merge_demands(ds)), a.out);
  return kExitOk;
}

struct ModelArgs {
  std::string topology;
  std::string demand;
  std::string switch_mode = "copy";
  std::string epoch_mode = "fastest";
  std::string capacity_mode;
  int em = 1;
  double time_limit = 300.0;
  double gap = 0.0;
  unsigned seed = 0;
  std::string backend;
};

void add_model_args(CLI::App* sub, ModelArgs& m) {
  sub->add_option("--topology", m.topology, "Topology JSON")->required()->check(CLI::ExistingFile);
  sub->add_option("--demand", m.demand, "Demand JSON")->required()->check(CLI::ExistingFile);
  sub->add_option("--switch", m.switch_mode, "Switch model")
      ->check(CLI::IsMember({"copy", "no-copy", "hyper-edge"}));
  sub->add_option("--epoch-mode", m.epoch_mode, "Epoch duration mode")
      ->check(CLI::IsMember({"slowest", "fastest"}));
  sub->add_option("--capacity-mode", m.capacity_mode,
                  "Capacity constraints; default follows the epoch mode")
      ->check(CLI::IsMember({"plain", "windowed"}));
  sub->add_option("--em", m.em, "Epoch multiplier")->check(CLI::PositiveNumber);
  sub->add_option("--time-limit", m.time_limit, "Solver time limit in seconds")
      ->check(CLI::PositiveNumber);
  sub->add_option("--gap", m.gap, "Relative gap at which the solver stops")
      ->check(CLI::Range(0.0, 1.0));
  sub->add_option("--seed", m.seed, "Solver seed");
  sub->add_option("--backend", m.backend,
                  "Solver backend; default $COLLSCHED_SOLVER, then highs");
}

cs::ModelOptions model_options(const ModelArgs& m) {
  cs::ModelOptions mo;
  mo.switch_mode = cs::parse_switch_mode(m.switch_mode);
  const cs::DurationMode dm = cs::parse_duration_mode(m.epoch_mode);
  mo.capacity_mode = m.capacity_mode.empty() ? cs::default_capacity_mode(dm)
                                             : cs::parse_capacity_mode(m.capacity_mode);
  return mo;
}

cs::SolverOptions solver_options(const ModelArgs& m) {
  cs::SolverOptions so;
  so.time_limit_sec = m.time_limit;
  so.relative_gap = m.gap;
  so.seed = m.seed;
  so.backend = m.backend;
  return so;
}

cs::EpochEstimate estimate(const cs::Topology& t, const cs::Demand& d, const ModelArgs& m,
                           double tau) {
  cs::EstimatorOptions eo;
  eo.switch_mode = cs::parse_switch_mode(m.switch_mode);
  eo.solver = solver_options(m);
  return cs::estimate_epoch_upper_bound(t, d, tau, cs::default_candidates(t, d), eo);
}

int cmd_estimate_epochs(const ModelArgs& m) {
  const cs::Topology t = load_topology(m.topology);
  const cs::Demand d = load_demand(m.demand, t);
  const cs::EpochConfig cfg =
      cs::make_epoch_config(t, d, cs::parse_duration_mode(m.epoch_mode), m.em, 1);
  const cs::EpochEstimate e = estimate(t, d, m, cfg.tau_sec);
  cs::Json j;
  j["num_epochs"] = e.num_epochs;
  j["tau_sec"] = cfg.tau_sec;
  j["feasible_time_sec"] = e.feasible_time_sec;
  j["coarse_epochs"] = e.coarse_epochs;
  std::cout << j.dump(2) << '\n';
  return kExitOk;
}

struct SolveArgs {
  ModelArgs model;
  std::string method = "milp";
  std::optional<int> buffer_limit;
  std::optional<int> epochs;
  bool min_horizon = false;
  double gamma = 0.5;
  int epochs_per_round = 0;
  int max_rounds = 64;
  std::string out;
  std::string summary;
  std::string write_lp;
};

int cmd_solve(const SolveArgs& a) {
  const cs::Topology t = load_topology(a.model.topology);
  const cs::Demand d = load_demand(a.model.demand, t);
  cs::SolveRequest req;
  req.method = cs::parse_method(a.method);
  req.model = model_options(a.model);
  req.model.buffer_limit = a.buffer_limit;
  req.solver = solver_options(a.model);
  req.astar.gamma = a.gamma;
  req.astar.epochs_per_round = a.epochs_per_round;
  req.astar.max_rounds = a.max_rounds;
  req.astar.solver = req.solver;
  req.min_horizon = a.min_horizon;
  req.cfg = cs::make_epoch_config(t, d, cs::parse_duration_mode(a.model.epoch_mode),
                                  a.model.em, 1);
  if (a.epochs) {
    req.cfg.num_epochs = *a.epochs;
  } else if (req.method != cs::Method::kAStar) {
    req.cfg.num_epochs = estimate(t, d, a.model, req.cfg.tau_sec).num_epochs;
  }
  req.cfg.validate();

  if (!a.write_lp.empty()) {
    std::ofstream lp(a.write_lp);
    if (!lp) throw cs::Error(cs::ErrorKind::kInvalidInput, "cannot write '" + a.write_lp + "'");
    if (req.method == cs::Method::kMilp) {
      cs::build_general_model(t, d, req.cfg, req.model).model.write_lp(lp);
    } else if (req.method == cs::Method::kLp) {
      cs::build_lp_model(t, d, req.cfg, req.model).model.write_lp(lp);
    } else {
      throw cs::Error(cs::ErrorKind::kInvalidInput, "--write-lp needs --method milp or lp");
    }
  }

  const cs::SolveOutcome o = cs::run_solve(t, d, req);
  for (const std::string& w : o.warnings) std::cerr << "warning: " << w << '\n';
  if (!a.out.empty()) cs::write_json_file(a.out, cs::schedule_to_json(o.schedule));

  cs::Json j;
  j["method"] = a.method;
  j["status"] = std::string(cs::to_string(o.status));
  j["num_epochs"] = o.num_epochs;
  j["tau_sec"] = o.schedule.tau_sec;
  j["completion_epoch"] = o.report.completion_epoch;
  j["transfer_epochs"] = o.report.completion_epoch + 1;
  j["transfer_time_sec"] = o.report.transfer_time_sec;
  j["algbw_bytes_per_sec"] = cs::algorithmic_bandwidth(o.report).max_node;
  j["achieved_gap"] = o.achieved_gap;
  j["solver_wall_time_sec"] = o.solver_wall_time_sec;
  if (req.method == cs::Method::kAStar) j["rounds"] = o.astar_rounds;
  j["warnings"] = o.warnings;
  if (!a.summary.empty()) cs::write_json_file(a.summary, j);
  std::cout << j.dump(2) << '\n';
  return kExitOk;
}

struct SimulateArgs {
  std::string topology;
  std::string demand;
  std::string schedule;
  std::string csv_label;
};

int cmd_simulate(const SimulateArgs& a) {
  const cs::Topology t = load_topology(a.topology);
  const cs::Demand d = load_demand(a.demand, t);
  const cs::Schedule s = cs::schedule_from_json(cs::read_json_file(a.schedule));
  const cs::SimReport r = cs::simulate(s, t, d);
  if (a.csv_label.empty()) {
    std::cout << cs::report_to_json(r).dump(2) << '\n';
  } else {
    std::cout << cs::report_csv_header() << '\n' << cs::report_csv_row(a.csv_label, r) << '\n';
  }
  return r.ok() ? kExitOk : kExitValidation;
}

struct CompareArgs {
  std::string topology;
  std::string demand;
  std::string schedule;
  std::string against;
  std::string summary;
  std::string against_summary;
};

std::string wall_time(const std::string& summary_path) {
  if (summary_path.empty()) return "n/a";
  const cs::Json j = cs::read_json_file(summary_path);
  if (!j.contains("solver_wall_time_sec")) return "n/a";
  std::ostringstream out;
  out << std::setprecision(6) << j["solver_wall_time_sec"].get<double>();
  return out.str();
}

int cmd_compare(const CompareArgs& a) {
  const cs::Topology t = load_topology(a.topology);
  const cs::Demand d = load_demand(a.demand, t);
  struct Row {
    std::string label;
    cs::SimReport report;
    std::string wall;
  };
  std::vector<Row> rows;
  for (auto [path, summary] : {std::pair{a.schedule, a.summary},
                               std::pair{a.against, a.against_summary}}) {
    const cs::Schedule s = cs::schedule_from_json(cs::read_json_file(path));
    rows.push_back({path, cs::simulate(s, t, d), wall_time(summary)});
  }
  int name_width = 10;
  for (const Row& r : rows) name_width = std::max<int>(name_width, r.label.size() + 2);
  std::cout << std::left << std::setw(name_width) << "schedule" << std::setw(18) << "transfer_time_s"
            << std::setw(18) << "solver_wall_s" << std::setw(18) << "algbw_B_per_s"
            << "violations\n";
  for (const Row& r : rows) {
    std::ostringstream bw;
    if (r.report.ok()) {
      bw << std::setprecision(6) << cs::algorithmic_bandwidth(r.report).max_node;
    } else {
      bw << "n/a";
    }
    std::ostringstream tt;
    tt << std::setprecision(6) << r.report.transfer_time_sec;
    std::cout << std::left << std::setw(name_width) << r.label << std::setw(18) << tt.str()
              << std::setw(18) << r.wall << std::setw(18) << bw.str()
              << r.report.violations.size() << '\n';
  }
  return rows[0].report.ok() && rows[1].report.ok() ? kExitOk : kExitValidation;
}

struct ExportArgs {
  std::string topology;
  std::string schedule;
  std::string out;
};

int cmd_export_msccl(const ExportArgs& a) {
  const cs::Topology t = load_topology(a.topology);
  const cs::Schedule s = cs::schedule_from_json(cs::read_json_file(a.schedule));
  if (a.out.empty()) {
    cs::export_msccl(s, t, std::cout);
  } else {
    std::ofstream out(a.out);
    if (!out) throw cs::Error(cs::ErrorKind::kInvalidInput, "cannot write '" + a.out + "'");
    cs::export_msccl(s, t, out);
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Collective communication schedule synthesis"};
  app.require_subcommand(1);

  GenTopologyArgs gt;
  auto* gen_topology = app.add_subcommand("gen-topology", "Write a topology JSON");
  gen_topology->add_option("kind", gt.kind)
      ->required()
      ->check(CLI::IsMember({"dgx1", "ndv2", "dgx2", "star", "line", "ring"}));
  gen_topology->add_option("--chassis", gt.chassis, "Chassis count")->check(CLI::PositiveNumber);
  gen_topology->add_option("--nodes", gt.nodes, "GPUs for star, line and ring")
      ->check(CLI::PositiveNumber);
  gen_topology->add_option("--capacity", gt.capacity, "Link capacity in bytes per second")
      ->check(CLI::PositiveNumber);
  gen_topology->add_option("--alpha", gt.alpha, "Link latency in seconds")
      ->check(CLI::NonNegativeNumber);
  gen_topology->add_option("-o,--out", gt.out, "Output file; stdout if omitted");

  GenDemandArgs gd;
  auto* gen_demand = app.add_subcommand("gen-demand", "Write a collective demand JSON");
  gen_demand->add_option("kind", gd.kind)->required()->check(CLI::IsMember({"allgather", "alltoall"}));
  gen_demand->add_option("--topology", gd.topology)->required()->check(CLI::ExistingFile);
  gen_demand->add_option("--chunks", gd.chunks, "Chunks per source-destination pair")
      ->check(CLI::PositiveNumber);
  gen_demand->add_option("--chunk-size", gd.chunk_size, "Chunk size in bytes")
      ->required()
      ->check(CLI::PositiveNumber);
  gen_demand->add_option("-o,--out", gd.out, "Output file; stdout if omitted");

  MergeArgs md;
  auto* merge = app.add_subcommand("merge-demands", "Union demands with disjoint chunk ids");
  merge->add_option("inputs", md.inputs)->required()->check(CLI::ExistingFile);
  merge->add_option("-o,--out", md.out, "Output file; stdout if omitted");

  ModelArgs ee;
  auto* estimate_epochs =
      app.add_subcommand("estimate-epochs", "Upper bound on the number of epochs");
  add_model_args(estimate_epochs, ee);

  SolveArgs sa;
  auto* solve = app.add_subcommand("solve", "Synthesize a schedule");
  add_model_args(solve, sa.model);
  solve->add_option("--method", sa.method)->check(CLI::IsMember({"milp", "lp", "astar"}));
  solve->add_option("--buffer-limit", sa.buffer_limit, "Chunks a GPU may hold")
      ->check(CLI::NonNegativeNumber);
  solve->add_option("--epochs", sa.epochs, "Horizon; estimated if omitted")
      ->check(CLI::PositiveNumber);
  solve->add_flag("--min-horizon", sa.min_horizon,
                  "Search the smallest feasible horizon up to --epochs");
  solve->add_option("--gamma", sa.gamma, "A* discount for chunks still in flight")
      ->check(CLI::Range(0.0, 1.0));
  solve->add_option("--epochs-per-round", sa.epochs_per_round, "A* epochs per round")
      ->check(CLI::NonNegativeNumber);
  solve->add_option("--max-rounds", sa.max_rounds, "A* round budget")->check(CLI::PositiveNumber);
  solve->add_option("-o,--out", sa.out, "Schedule output file");
  solve->add_option("--summary", sa.summary, "Also write the run summary here");
  solve->add_option("--write-lp", sa.write_lp, "Also write the model in LP text format");

  SimulateArgs si;
  auto* simulate = app.add_subcommand("simulate", "Replay a schedule and report violations");
  simulate->add_option("--topology", si.topology)->required()->check(CLI::ExistingFile);
  simulate->add_option("--demand", si.demand)->required()->check(CLI::ExistingFile);
  simulate->add_option("--schedule", si.schedule)->required()->check(CLI::ExistingFile);
  simulate->add_option("--csv", si.csv_label, "Print a CSV metrics row with this label");

  CompareArgs ca;
  auto* compare = app.add_subcommand("compare", "Compare two schedules");
  compare->add_option("--topology", ca.topology)->required()->check(CLI::ExistingFile);
  compare->add_option("--demand", ca.demand)->required()->check(CLI::ExistingFile);
  compare->add_option("--schedule", ca.schedule)->required()->check(CLI::ExistingFile);
  compare->add_option("--against", ca.against)->required()->check(CLI::ExistingFile);
  compare->add_option("--summary", ca.summary, "Solve summary of --schedule")
      ->check(CLI::ExistingFile);
  compare->add_option("--against-summary", ca.against_summary, "Solve summary of --against")
      ->check(CLI::ExistingFile);

  ExportArgs ex;
  auto* export_msccl = app.add_subcommand("export-msccl", "Write an MSCCL-style step list");
  export_msccl->add_option("--topology", ex.topology)->required()->check(CLI::ExistingFile);
  export_msccl->add_option("--schedule", ex.schedule)->required()->check(CLI::ExistingFile);
  export_msccl->add_option("-o,--out", ex.out, "Output file; stdout if omitted");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    return report_error("usage", e.what(), kExitOther);
  }

  try {
    if (*gen_topology) return cmd_gen_topology(gt);
    if (*gen_demand) return cmd_gen_demand(gd);
    if (*merge) return cmd_merge_demands(md);
    if (*estimate_epochs) return cmd_estimate_epochs(ee);
    if (*solve) return cmd_solve(sa);
    if (*simulate) return cmd_simulate(si);
    if (*compare) return cmd_compare(ca);
    if (*export_msccl) return cmd_export_msccl(ex);
  } catch (const cs::Error& e) {
    return report_error(cs::to_string(e.kind()), e.what(), exit_code(e.kind()));
  } catch (const std::exception& e) {
    return report_error("internal", e.what(), kExitOther);
  }
  return kExitOther;
}
