#include "pqgraph/cli.hpp"

#include <atomic>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <thread>

#include <CLI11.hpp>
#include <json.hpp>

#include "pqgraph/io.hpp"
#include "pqgraph/solver.hpp"

namespace pqgraph::cli {

namespace {

using ordered_json = nlohmann::ordered_json;

constexpr int kExitOk = 0;
constexpr int kExitValidation = 1;
constexpr int kExitStall = 2;
constexpr int kExitIo = 3;

int log_level() {
  static const int level = [] {
    const char* env = std::getenv("PQGRAPH_LOG");
    if (!env) return 1;
    const std::string v(env);
    if (v == "error") return 0;
    if (v == "warn") return 1;
    if (v == "info") return 2;
    if (v == "debug") return 3;
    return 1;
  }();
  return level;
}

void log_at(int level, const char* tag, const std::string& msg) {
  if (level <= log_level()) std::cerr << "pqgraph [" << tag << "] " << msg << "\n";
}
void log_info(const std::string& msg) { log_at(2, "info", msg); }
void log_debug(const std::string& msg) { log_at(3, "debug", msg); }

std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

struct CommonConfig {
  std::string instance_path;
  std::string out_path;
  std::string format;  // empty: command-specific default
  double lambda = 0.0;
  double lambda_ratio = 0.0;
  bool has_lambda = false;
  bool has_ratio = false;
  SolverOptions solver;
  unsigned jobs = 1;
};

void add_io_flags(CLI::App* cmd, CommonConfig& cfg) {
  cmd->add_option("--instance", cfg.instance_path, "instance file path")->required();
  cmd->add_option("--out", cfg.out_path, "output path (default: stdout)");
  cmd->add_option("--format", cfg.format, "output format")
      ->check(CLI::IsMember({"json", "csv"}));
}

void add_lambda_flags(CLI::App* cmd, CommonConfig& cfg) {
  auto* l = cmd->add_option_function<double>(
      "--lambda", [&cfg](double v) { cfg.lambda = v; cfg.has_lambda = true; },
      "parameter lambda (absolute)");
  auto* r = cmd->add_option_function<double>(
      "--lambda-ratio", [&cfg](double v) { cfg.lambda_ratio = v; cfg.has_ratio = true; },
      "lambda as a ratio of Lambda*");
  l->excludes(r);
  r->excludes(l);
}

void add_solver_flags(CLI::App* cmd, CommonConfig& cfg) {
  cmd->add_option("--grad-tol", cfg.solver.grad_tol, "residual sup-norm tolerance");
  cmd->add_option("--energy-tol", cfg.solver.energy_tol, "relative energy resolution");
  cmd->add_option("--max-iters", cfg.solver.max_iters, "iteration cap");
  cmd->add_option("--step-init", cfg.solver.step_init, "initial line-search step");
  cmd->add_option("--armijo-c", cfg.solver.armijo_c, "Armijo sufficient-decrease constant");
  cmd->add_option("--shrink", cfg.solver.shrink, "line-search backtracking factor");
  cmd->add_option("--seed", cfg.solver.seed, "seed for randomized probes");
  cmd->add_option_function<std::string>(
         "--positivity-policy",
         [&cfg](const std::string&) { cfg.solver.positivity = PositivityPolicy::RejectStep; },
         "handling of nonpositive trial points")
      ->check(CLI::IsMember({"reject-step"}));
}

struct LoadedInstance {
  ParsedInstance parsed;
  ProblemInstance instance;
};

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Exponents are a property of the run, not the file; defaults match the
/// desk-scale fixtures and can be overridden per command.
struct ExponentFlags {
  double p = 3.0, q = 2.0, gamma = 0.5, alpha = 3.0;
  void add(CLI::App* cmd) {
    cmd->add_option("--p", p, "exponent p");
    cmd->add_option("--q", q, "exponent q");
    cmd->add_option("--gamma", gamma, "singular exponent gamma");
    cmd->add_option("--alpha", alpha, "superlinear exponent alpha");
  }
};

LoadedInstance load_full_instance(const CommonConfig& cfg, const ExponentFlags& ef) {
  ParsedInstance parsed = load_instance_file(cfg.instance_path);
  if (!parsed.fields)
    throw std::invalid_argument(
        "instance file has no coefficient columns; solve/constants commands need the "
        "6-column vertex form");
  const ValidationReport vr = validate_graph(*parsed.graph);
  if (!vr.ok()) {
    std::string msg = "graph invariants violated:";
    for (const auto& v : vr.violations) msg += "\n  " + v;
    throw std::invalid_argument(msg);
  }
  Exponents exps(ef.p, ef.q, ef.gamma, ef.alpha);
  ProblemInstance inst(parsed.graph, *parsed.fields, exps, 1.0);
  double lambda;
  if (cfg.has_lambda) {
    lambda = cfg.lambda;
  } else if (cfg.has_ratio) {
    lambda = cfg.lambda_ratio * lambda_star(inst);
  } else {
    throw UsageError("one of --lambda or --lambda-ratio is required");
  }
  log_info("instance '" + cfg.instance_path + "': n=" + std::to_string(parsed.graph->vertex_count()) +
           " m=" + std::to_string(parsed.graph->edge_count()) + " lambda=" + fmt17(lambda));
  return {std::move(parsed), inst.with_lambda(lambda)};
}

void emit(const CommonConfig& cfg, const std::string& payload) {
  if (cfg.out_path.empty()) {
    std::cout << payload;
    if (!payload.empty() && payload.back() != '\n') std::cout << '\n';
  } else {
    write_file_atomic(cfg.out_path, payload);
  }
}

ordered_json checks_to_json(const std::vector<NamedCheck>& checks) {
  ordered_json arr = ordered_json::array();
  for (const auto& c : checks) {
    ordered_json j;
    j["name"] = c.name;
    j["lhs"] = c.lhs;
    j["rhs"] = c.rhs;
    j["ok"] = c.ok;
    arr.push_back(std::move(j));
  }
  return arr;
}

ordered_json solution_to_json(const std::vector<std::string>& labels, const GraphFunction& u) {
  ordered_json j = ordered_json::object();
  for (std::size_t x = 0; x < u.size(); ++x) j[labels[x]] = u[x];
  return j;
}

ordered_json report_to_json(const LoadedInstance& li, const std::string& command,
                            const SolveReport& report) {
  const ProblemInstance& inst = li.instance;
  ordered_json j;
  j["command"] = command;
  j["lambda"] = inst.lambda();
  j["converged"] = report.converged;
  j["stop_reason"] = report.stop_reason;
  j["iterations"] = report.iterations;
  j["energy"] = report.energy;
  j["residual_inf"] = report.residual_inf;
  j["residual_l2"] = report.residual_l2;
  j["nehari_class"] = to_string(report.nehari_class);
  j["norm_wa"] = sobolev_norm(inst.graph(), report.solution, inst.fields().a, inst.exps().p);
  j["norm_wb"] = sobolev_norm(inst.graph(), report.solution, inst.fields().b, inst.exps().q);
  j["norm_alpha_plus_1"] = lp_norm(inst.graph(), report.solution, inst.exps().alpha + 1.0);
  j["inequality_checks"] = checks_to_json(report.inequality_checks);
  j["solution"] = solution_to_json(li.parsed.labels, report.solution);
  return j;
}

int run_validate(const CommonConfig& cfg) {
  ParsedInstance parsed = load_instance_file(cfg.instance_path);
  const ValidationReport vr = validate_graph(*parsed.graph);
  ordered_json j;
  j["command"] = "validate";
  j["vertex_count"] = parsed.graph->vertex_count();
  j["edge_count"] = parsed.graph->edge_count();
  j["mu_min"] = vr.mu_min;
  j["weight_row_sum_max"] = vr.weight_row_sum_max;
  j["connected"] = vr.connected;
  j["has_coefficients"] = parsed.fields.has_value();
  j["violations"] = vr.violations;
  if (parsed.fields) {
    try {
      parsed.fields->validate(*parsed.graph);
    } catch (const std::invalid_argument& e) {
      j["violations"].push_back(e.what());
    }
  }
  j["ok"] = j["violations"].empty();
  emit(cfg, j.dump(2));
  return j["ok"].get<bool>() ? kExitOk : kExitValidation;
}

int run_constants(const CommonConfig& cfg, const ExponentFlags& ef) {
  LoadedInstance li = load_full_instance(cfg, ef);
  if (!(li.instance.lambda() > 0.0)) throw UsageError("constants requires lambda > 0");
  const ConstantsReport cs = constants(li.instance);
  const ConstantsReport at_star = constants(li.instance.with_lambda(cs.Lambda_star));
  ordered_json j;
  j["command"] = "constants";
  j["lambda"] = li.instance.lambda();
  j["lambda_star"] = cs.Lambda_star;
  j["X_lambda"] = cs.X_lambda;
  j["X0"] = cs.X0;
  j["S_lambda"] = cs.S_lambda;
  j["S0"] = cs.S0;
  j["identity_slack_X"] = std::abs(at_star.X_lambda - at_star.X0) / at_star.X0;
  j["identity_slack_S"] = std::abs(at_star.S_lambda - at_star.S0) / at_star.S0;
  emit(cfg, j.dump(2));
  return kExitOk;
}

const char* fiber_class_name(FiberClass c) {
  switch (c) {
    case FiberClass::TwoRoots: return "two_roots";
    case FiberClass::Tangent: return "tangent";
    case FiberClass::NoRoot: return "no_root";
  }
  return "?";
}

int run_fiber(const CommonConfig& cfg, const ExponentFlags& ef, double t_min, double t_max,
              unsigned t_points) {
  LoadedInstance li = load_full_instance(cfg, ef);
  const ProblemInstance& inst = li.instance;
  if (!(inst.lambda() > 0.0)) throw UsageError("fiber requires lambda > 0");
  const GraphFunction u = GraphFunction::constant(inst.graph().vertex_count(), 1.0);
  const FiberAnalysis fa = analyze_fiber(inst, u);

  const std::string format = cfg.format.empty() ? "csv" : cfg.format;
  double lo = t_min, hi = t_max;
  if (lo <= 0.0 || hi <= 0.0) {
    if (fa.classification == FiberClass::TwoRoots) {
      lo = *fa.t1 / 10.0;
      hi = *fa.t2 * 10.0;
    } else {
      lo = fa.t_tilde / 1000.0;
      hi = fa.t_tilde * 1000.0;
    }
  }
  if (!(lo < hi)) throw UsageError("fiber grid needs t-min < t-max");
  if (t_points < 2) throw UsageError("fiber grid needs at least 2 points");

  std::vector<double> ts(t_points);
  const double lr = std::log(lo), step = (std::log(hi) - lr) / (t_points - 1);
  for (unsigned i = 0; i < t_points; ++i) ts[i] = std::exp(lr + step * i);

  ordered_json info;
  info["classification"] = fiber_class_name(fa.classification);
  info["t_tilde"] = fa.t_tilde;
  info["phi_at_t_tilde"] = fa.phi_at_t_tilde;
  if (fa.t1) info["t1"] = *fa.t1;
  if (fa.t2) info["t2"] = *fa.t2;

  if (format == "csv") {
    std::string out = "t,phi,phi_prime,J_of_tu\n";
    for (double t : ts) {
      out += fmt17(t) + "," + fmt17(fiber_value(inst.exps(), inst.lambda(), fa.coeffs, t)) + "," +
             fmt17(fiber_derivative(inst.exps(), inst.lambda(), fa.coeffs, t)) + "," +
             fmt17(j_lambda_on_ray(inst, fa.coeffs, t)) + "\n";
    }
    out += "\n" + info.dump() + "\n";
    emit(cfg, out);
  } else {
    ordered_json grid = ordered_json::array();
    for (double t : ts) {
      ordered_json row;
      row["t"] = t;
      row["phi"] = fiber_value(inst.exps(), inst.lambda(), fa.coeffs, t);
      row["phi_prime"] = fiber_derivative(inst.exps(), inst.lambda(), fa.coeffs, t);
      row["J_of_tu"] = j_lambda_on_ray(inst, fa.coeffs, t);
      grid.push_back(std::move(row));
    }
    ordered_json j;
    j["command"] = "fiber";
    j["lambda"] = inst.lambda();
    j["analysis"] = info;
    j["grid"] = grid;
    emit(cfg, j.dump(2));
  }
  return kExitOk;
}

int run_solve(const CommonConfig& cfg, const ExponentFlags& ef, const std::string& command) {
  LoadedInstance li = load_full_instance(cfg, ef);
  const ProblemInstance& inst = li.instance;
  const GraphFunction init = GraphFunction::constant(inst.graph().vertex_count(), 1.0);
  SolveReport report;
  if (command == "solve-negative") {
    if (!(inst.lambda() < 0.0)) throw UsageError("solve-negative requires lambda < 0");
    report = minimize_global_negative(inst, init, cfg.solver);
  } else {
    const Branch branch = command == "solve-plus" ? Branch::Plus : Branch::Minus;
    report = minimize_on_branch(inst, branch, init, cfg.solver);
  }
  emit(cfg, report_to_json(li, command, report).dump(2));
  log_info(command + ": " + report.stop_reason + " after " + std::to_string(report.iterations) +
           " iterations, residual_inf=" + fmt17(report.residual_inf));
  return report.converged ? kExitOk : kExitStall;
}

int run_verify(const CommonConfig& cfg, const ExponentFlags& ef,
               const std::string& solution_path) {
  LoadedInstance li = load_full_instance(cfg, ef);
  std::ifstream in(solution_path);
  if (!in) throw ParseError(solution_path, 0, "cannot open file");
  ordered_json doc;
  try {
    in >> doc;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(solution_path, 0, std::string("invalid JSON: ") + e.what());
  }
  const ordered_json& map = doc.contains("solution") ? doc["solution"] : doc;
  if (!map.is_object()) throw ParseError(solution_path, 0, "expected an object of id -> value");
  GraphFunction u(li.instance.graph().vertex_count(), 0.0);
  std::size_t found = 0;
  for (std::size_t x = 0; x < li.parsed.labels.size(); ++x) {
    const auto it = map.find(li.parsed.labels[x]);
    if (it == map.end())
      throw ParseError(solution_path, 0, "missing value for vertex '" + li.parsed.labels[x] + "'");
    u[x] = it->get<double>();
    ++found;
  }
  if (map.size() != found)
    throw ParseError(solution_path, 0, "solution mentions vertices not present in the instance");

  const auto checks = verify_solution(li.instance, u, cfg.solver.grad_tol, cfg.solver.seed);
  ordered_json j;
  j["command"] = "verify";
  j["lambda"] = li.instance.lambda();
  j["checks"] = checks_to_json(checks);
  bool ok = true;
  for (const auto& c : checks) ok = ok && c.ok;
  j["ok"] = ok;
  emit(cfg, j.dump(2));
  return ok ? kExitOk : kExitValidation;
}

struct SweepRow {
  double param = 0.0;
  double lambda = 0.0;
  double lambda_star_v = 0.0;
  bool two_branch = false;
  ConstantsReport cs;
  SolveReport plus, minus, negative;
  bool point_ok = false;
};

int run_sweep(const CommonConfig& cfg, const ExponentFlags& ef,
              const std::vector<double>& lambda_grid, const std::vector<double>& ratio_grid,
              const std::vector<double>& p_grid) {
  const int grids = (!lambda_grid.empty()) + (!ratio_grid.empty()) + (!p_grid.empty());
  if (grids != 1)
    throw UsageError("sweep needs exactly one of --lambda-grid, --lambda-ratio-grid, --p-grid");
  const bool is_p_grid = !p_grid.empty();
  if (is_p_grid && !cfg.has_ratio)
    throw UsageError("--p-grid requires --lambda-ratio to fix lambda at each p");

  // Load once; per-point instances are derived copies.
  CommonConfig base = cfg;
  if (!base.has_lambda && !base.has_ratio) {
    base.has_ratio = true;
    base.lambda_ratio = 0.5;
  }
  LoadedInstance li = load_full_instance(base, ef);

  const std::vector<double>& grid = is_p_grid ? p_grid : (!lambda_grid.empty() ? lambda_grid : ratio_grid);
  std::vector<SweepRow> rows(grid.size());

  std::atomic<std::size_t> next{0};
  auto worker = [&]() {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= grid.size()) return;
      SweepRow& row = rows[i];
      row.param = grid[i];
      // A failing point leaves its row with converged=false; the sweep
      // itself never aborts.
      try {
        ProblemInstance inst = li.instance;
        if (is_p_grid) {
          inst = inst.with_exponents(Exponents(grid[i], ef.q, ef.gamma, ef.alpha));
          inst = inst.with_lambda(cfg.lambda_ratio * lambda_star(inst));
        } else if (!ratio_grid.empty()) {
          inst = inst.with_lambda(grid[i] * lambda_star(inst));
        } else {
          inst = inst.with_lambda(grid[i]);
        }
        row.lambda = inst.lambda();
        row.lambda_star_v = lambda_star(inst);
        const GraphFunction init = GraphFunction::constant(inst.graph().vertex_count(), 1.0);
        if (inst.lambda() > 0.0) {
          row.two_branch = true;
          row.cs = constants(inst);
          row.plus = minimize_on_branch(inst, Branch::Plus, init, cfg.solver);
          row.minus = minimize_on_branch(inst, Branch::Minus, init, cfg.solver);
          row.point_ok = row.plus.converged && row.minus.converged;
        } else {
          row.negative = minimize_global_negative(inst, init, cfg.solver);
          row.point_ok = row.negative.converged;
        }
      } catch (const std::exception& e) {
        log_at(1, "warn", "sweep point " + std::to_string(i) + " failed: " + e.what());
        row.point_ok = false;
      }
      log_debug("sweep point " + std::to_string(i) + " done (lambda=" + fmt17(row.lambda) + ")");
    }
  };
  const unsigned jobs = std::max(1u, cfg.jobs);
  std::vector<std::thread> pool;
  for (unsigned t = 1; t < jobs; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();

  const ProblemInstance& base_inst = li.instance;
  std::string out =
      "index,param,lambda,lambda_star,X_lambda,X0,S_lambda,S0,"
      "energy_plus,norm_wa_plus,converged_plus,"
      "energy_minus,norm_wa_minus,converged_minus,"
      "energy_negative,norm_wa_negative,converged_negative\n";
  bool any_ok = false;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const SweepRow& row = rows[i];
    any_ok = any_ok || row.point_ok;
    ProblemInstance inst = base_inst;
    if (is_p_grid) inst = inst.with_exponents(Exponents(row.param, ef.q, ef.gamma, ef.alpha));
    // Empty cells for solves that were not run or failed outright.
    const auto solve_cells = [&](const SolveReport& r) -> std::string {
      if (r.solution.size() != inst.graph().vertex_count()) return ",,,false";
      return "," + fmt17(r.energy) + "," +
             fmt17(sobolev_norm(inst.graph(), r.solution, inst.fields().a, inst.exps().p)) +
             "," + (r.converged ? "true" : "false");
    };
    out += std::to_string(i) + "," + fmt17(row.param) + "," + fmt17(row.lambda) + "," +
           fmt17(row.lambda_star_v);
    if (row.two_branch) {
      out += "," + fmt17(row.cs.X_lambda) + "," + fmt17(row.cs.X0) + "," +
             fmt17(row.cs.S_lambda) + "," + fmt17(row.cs.S0);
      out += solve_cells(row.plus) + solve_cells(row.minus) + ",,,\n";
    } else {
      out += ",,,,,,,,,," + solve_cells(row.negative) + "\n";
    }
  }
  emit(cfg, out);
  return any_ok ? kExitOk : kExitStall;
}

}  // namespace

int run(int argc, const char* const* argv) {
  CLI::App app{"discrete (p,q)-Laplacian variational toolkit on finite weighted graphs"};
  app.require_subcommand(1);

  CommonConfig cfg;
  ExponentFlags exps;
  double t_min = 0.0, t_max = 0.0;
  unsigned t_points = 200;
  std::string solution_path;
  std::vector<double> lambda_grid, ratio_grid, p_grid;

  CLI::App* validate = app.add_subcommand("validate", "check graph invariants");
  add_io_flags(validate, cfg);

  CLI::App* constants_cmd = app.add_subcommand("constants", "threshold constants and identities");
  add_io_flags(constants_cmd, cfg);
  add_lambda_flags(constants_cmd, cfg);
  exps.add(constants_cmd);

  CLI::App* fiber = app.add_subcommand("fiber", "fibering map profile along u = 1");
  add_io_flags(fiber, cfg);
  add_lambda_flags(fiber, cfg);
  exps.add(fiber);
  fiber->add_option("--t-min", t_min, "grid start (default: around the roots)");
  fiber->add_option("--t-max", t_max, "grid end");
  fiber->add_option("--t-points", t_points, "grid size");

  const char* solve_names[] = {"solve-plus", "solve-minus", "solve-negative"};
  const char* solve_help[] = {"minimize on the plus Nehari branch",
                              "minimize on the minus Nehari branch",
                              "global minimization for lambda < 0"};
  for (int i = 0; i < 3; ++i) {
    CLI::App* cmd = app.add_subcommand(solve_names[i], solve_help[i]);
    add_io_flags(cmd, cfg);
    add_lambda_flags(cmd, cfg);
    add_solver_flags(cmd, cfg);
    exps.add(cmd);
  }

  CLI::App* verify = app.add_subcommand("verify", "a-posteriori checks of a solution file");
  add_io_flags(verify, cfg);
  add_lambda_flags(verify, cfg);
  add_solver_flags(verify, cfg);
  exps.add(verify);
  verify->add_option("--solution", solution_path, "solve report or id->value JSON")->required();

  CLI::App* sweep = app.add_subcommand("sweep", "parameter sweep to CSV");
  add_io_flags(sweep, cfg);
  add_lambda_flags(sweep, cfg);
  add_solver_flags(sweep, cfg);
  exps.add(sweep);
  sweep->add_option("--lambda-grid", lambda_grid, "absolute lambda values")->delimiter(',');
  sweep->add_option("--lambda-ratio-grid", ratio_grid, "lambda/Lambda* values")->delimiter(',');
  sweep->add_option("--p-grid", p_grid, "p values (lambda fixed via --lambda-ratio)")
      ->delimiter(',');
  sweep->add_option("--jobs", cfg.jobs, "concurrent sweep points");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitIo;
  }

  try {
    if (validate->parsed()) return run_validate(cfg);
    if (constants_cmd->parsed()) return run_constants(cfg, exps);
    if (fiber->parsed()) return run_fiber(cfg, exps, t_min, t_max, t_points);
    for (const char* name : solve_names)
      if (app.get_subcommand(name)->parsed()) return run_solve(cfg, exps, name);
    if (verify->parsed()) return run_verify(cfg, exps, solution_path);
    if (sweep->parsed()) return run_sweep(cfg, exps, lambda_grid, ratio_grid, p_grid);
    return kExitIo;
  } catch (const UsageError& e) {
    std::cerr << "pqgraph: " << e.what() << "\n";
    return kExitIo;
  } catch (const ParseError& e) {
    std::cerr << "pqgraph: " << e.what() << "\n";
    return kExitIo;
  } catch (const std::invalid_argument& e) {
    std::cerr << "pqgraph: validation failure: " << e.what() << "\n";
    return kExitValidation;
  } catch (const std::domain_error& e) {
    std::cerr << "pqgraph: validation failure: " << e.what() << "\n";
    return kExitValidation;
  } catch (const FiberError& e) {
    std::cerr << "pqgraph: " << e.what() << "\n";
    return kExitValidation;
  } catch (const ProjectionError& e) {
    std::cerr << "pqgraph: " << e.what() << "\n";
    return kExitValidation;
  } catch (const std::exception& e) {
    std::cerr << "pqgraph: " << e.what() << "\n";
    return kExitIo;
  }
}

}  // namespace pqgraph::cli
