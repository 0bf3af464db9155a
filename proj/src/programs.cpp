#include "programs.hpp"

#include <cmath>

namespace amm {

namespace {

RobustnessReport report_from(const std::string& quantity, int level,
                             const ConicSolution& sol) {
  RobustnessReport r;
  r.quantity = quantity;
  r.level = level;
  r.status = sol.status;
  r.value = sol.objective_value;
  r.gap = sol.duality_gap;
  r.primal_residual = sol.primal_residual;
  r.dual_residual = sol.dual_residual;
  r.iterations = sol.iterations;
  return r;
}

enum class Direction { kSr, kSw };
enum class DataMode { kFullTable, kBellValue };

// Free symmetric moment block used when sigma_entrywise_free is set: every
// non-zero-class entry gets its own variable, only the trace entry is shared
// with the objective.
struct FreeBlockVars {
  int trace_var = -1;
  std::vector<int> entry_var;  // dim*dim, -1 on zero entries
};

FreeBlockVars add_free_block_vars(ConicProgram& prog,
                                  const MomentLayout& layout) {
  FreeBlockVars v;
  v.entry_var.assign(size_t(layout.dim) * layout.dim, -1);
  for (int r = 0; r < layout.dim; ++r)
    for (int c = r; c < layout.dim; ++c) {
      const EntryClass& e = layout.at(r, c);
      if (e.kind == EntryKind::kZero) continue;
      int var = prog.add_variable();
      v.entry_var[r * layout.dim + c] = var;
      v.entry_var[c * layout.dim + r] = var;
      if (e.kind == EntryKind::kTrace && v.trace_var < 0) v.trace_var = var;
    }
  return v;
}

void place_free_block(ConicProgram& prog, const MomentLayout& layout,
                      const FreeBlockVars& v, int block, double weight) {
  for (int r = 0; r < layout.dim; ++r)
    for (int c = r; c < layout.dim; ++c) {
      int var = v.entry_var[r * layout.dim + c];
      if (var >= 0) prog.add_coefficient(var, block, r, c, weight);
    }
}

struct SteeringProgram {
  ConicProgram prog;
  std::vector<int> sigma_trace_vars;
};

SteeringProgram build_di_steering(const BellScenario& scenario,
                                  const MomentLayout& layout,
                                  Direction direction, DataMode mode,
                                  const CorrelationTable* table,
                                  const BellFunctional* functional,
                                  double s_obs, const DiOptions& opts) {
  SteeringProgram out;
  ConicProgram& prog = out.prog;
  auto strategies =
      enumerate_strategies(scenario.nx, scenario.na, opts.strategy_cap);

  std::vector<std::vector<MomentBlockVars>> rho(scenario.nx);
  for (int x = 0; x < scenario.nx; ++x)
    for (int a = 0; a < scenario.na; ++a) {
      if (mode == DataMode::kFullTable) {
        auto fixed = fixed_from_table(*table, layout, a, x);
        rho[x].push_back(add_moment_vars(prog, layout, &fixed));
      } else {
        rho[x].push_back(add_moment_vars(prog, layout, nullptr));
      }
    }

  std::vector<MomentBlockVars> sigma;
  std::vector<FreeBlockVars> sigma_free;
  for (size_t l = 0; l < strategies.size(); ++l) {
    if (opts.sigma_entrywise_free) {
      sigma_free.push_back(add_free_block_vars(prog, layout));
      out.sigma_trace_vars.push_back(sigma_free.back().trace_var);
    } else {
      sigma.push_back(add_moment_vars(prog, layout, nullptr));
      out.sigma_trace_vars.push_back(sigma.back().trace_var);
    }
  }

  // chi[rho_{a|x}] >= 0
  for (int x = 0; x < scenario.nx; ++x)
    for (int a = 0; a < scenario.na; ++a) {
      int blk = prog.add_block(layout.dim);
      place_moment_block(prog, layout, rho[x][a], blk, 1.0);
    }
  // chi[sigma_l] >= 0
  for (size_t l = 0; l < strategies.size(); ++l) {
    int blk = prog.add_block(layout.dim);
    if (opts.sigma_entrywise_free)
      place_free_block(prog, layout, sigma_free[l], blk, 1.0);
    else
      place_moment_block(prog, layout, sigma[l], blk, 1.0);
  }
  // domination blocks, oriented by direction
  const double rho_sign = direction == Direction::kSr ? -1.0 : 1.0;
  for (int x = 0; x < scenario.nx; ++x)
    for (int a = 0; a < scenario.na; ++a) {
      int blk = prog.add_block(layout.dim);
      place_moment_block(prog, layout, rho[x][a], blk, rho_sign);
      for (size_t l = 0; l < strategies.size(); ++l) {
        if (strategies[l].response(x) != a) continue;
        if (opts.sigma_entrywise_free)
          place_free_block(prog, layout, sigma_free[l], blk, -rho_sign);
        else
          place_moment_block(prog, layout, sigma[l], blk, -rho_sign);
      }
    }

  add_reduced_state_consistency(prog, layout, rho);
  add_trace_normalization(prog, rho);

  if (mode == DataMode::kBellValue) {
    LinearExpr expr = functional_on_moments(*functional, layout, rho);
    if (opts.value_as_lower_bound) {
      int blk = prog.add_block(1);
      prog.set_constant(blk, 0, 0, expr.constant - s_obs);
      for (auto [var, c] : expr.terms) prog.add_coefficient(var, blk, 0, 0, c);
    } else {
      LinearEquality eq;
      eq.terms = expr.terms;
      eq.rhs = s_obs - expr.constant;
      prog.equalities.push_back(std::move(eq));
    }
  }

  const double tsign = direction == Direction::kSr ? 1.0 : -1.0;
  for (int var : out.sigma_trace_vars) prog.objective[var] += tsign;
  prog.objective_constant = direction == Direction::kSr ? -1.0 : 1.0;
  return out;
}

RobustnessReport run_di_steering(const BellScenario& scenario,
                                 Direction direction, DataMode mode,
                                 const CorrelationTable* table,
                                 const BellFunctional* functional,
                                 double s_obs, const DiOptions& opts) {
  const std::string quantity = direction == Direction::kSr ? "sr" : "sw";
  if (mode == DataMode::kBellValue &&
      s_obs <= functional->local_bound + 1e-12) {
    // a mixture of deterministic strategies realizes the value; nothing to
    // solve
    RobustnessReport r;
    r.quantity = quantity;
    r.level = opts.level;
    r.status = SolveStatus::kOptimal;
    r.value = 0.0;
    r.detail = "at or below the local bound; explicit LHS model exists";
    return r;
  }
  MomentLayout layout = build_layout(scenario, opts.level, opts.extra_words);
  SteeringProgram sp = build_di_steering(scenario, layout, direction, mode,
                                         table, functional, s_obs, opts);
  ConicSolution sol = solve(sp.prog, opts.solver);
  RobustnessReport r = report_from(quantity, opts.level, sol);
  if (sol.status == SolveStatus::kInfeasible)
    r.detail = "no level-" + std::to_string(opts.level) +
               " quantum model matches the data";
  if (mode == DataMode::kFullTable) {
    TableCheck check = check_table(*table);
    if (!check.ok())
      r.detail = "input table violates normalization or no-signaling";
  }
  return r;
}

}  // namespace

RobustnessReport sr_assemblage(const StateAssemblage& assemblage,
                               const SolveOptions& solver, int strategy_cap) {
  auto strategies = enumerate_strategies(assemblage.n_settings(),
                                         assemblage.n_outcomes(),
                                         strategy_cap);
  const int d = assemblage.dim();
  ConicProgram prog;
  std::vector<HermitianVar> sigma;
  for (size_t l = 0; l < strategies.size(); ++l) {
    sigma.push_back(add_hermitian_var(prog, d));
    for (int i = 0; i < d; ++i) prog.objective[sigma[l].re_var(i, i)] += 1.0;
  }
  prog.objective_constant = -1.0;
  for (size_t l = 0; l < strategies.size(); ++l) {
    int blk = prog.add_block(2 * d);
    place_hermitian_var(prog, sigma[l], blk, 1.0);
  }
  for (int x = 0; x < assemblage.n_settings(); ++x)
    for (int a = 0; a < assemblage.n_outcomes(); ++a) {
      int blk = prog.add_block(2 * d);
      place_hermitian_constant(prog, assemblage.at(x, a), blk, -1.0);
      for (size_t l = 0; l < strategies.size(); ++l)
        if (strategies[l].response(x) == a)
          place_hermitian_var(prog, sigma[l], blk, 1.0);
    }
  ConicSolution sol = solve(prog, solver);
  return report_from("sr", 0, sol);
}

RobustnessReport sw_assemblage(const StateAssemblage& assemblage,
                               const SolveOptions& solver, int strategy_cap) {
  auto strategies = enumerate_strategies(assemblage.n_settings(),
                                         assemblage.n_outcomes(),
                                         strategy_cap);
  const int d = assemblage.dim();
  ConicProgram prog;
  std::vector<HermitianVar> sigma;
  for (size_t l = 0; l < strategies.size(); ++l) {
    sigma.push_back(add_hermitian_var(prog, d));
    for (int i = 0; i < d; ++i) prog.objective[sigma[l].re_var(i, i)] -= 1.0;
  }
  prog.objective_constant = 1.0;
  for (size_t l = 0; l < strategies.size(); ++l) {
    int blk = prog.add_block(2 * d);
    place_hermitian_var(prog, sigma[l], blk, 1.0);
  }
  for (int x = 0; x < assemblage.n_settings(); ++x)
    for (int a = 0; a < assemblage.n_outcomes(); ++a) {
      int blk = prog.add_block(2 * d);
      place_hermitian_constant(prog, assemblage.at(x, a), blk, 1.0);
      for (size_t l = 0; l < strategies.size(); ++l)
        if (strategies[l].response(x) == a)
          place_hermitian_var(prog, sigma[l], blk, -1.0);
    }
  ConicSolution sol = solve(prog, solver);
  return report_from("sw", 0, sol);
}

RobustnessReport di_membership(const CorrelationTable& table,
                               const DiOptions& opts) {
  MomentLayout layout =
      build_layout(table.scenario, opts.level, opts.extra_words);
  ConicProgram prog;
  std::vector<std::vector<MomentBlockVars>> rho(table.scenario.nx);
  for (int x = 0; x < table.scenario.nx; ++x)
    for (int a = 0; a < table.scenario.na; ++a) {
      auto fixed = fixed_from_table(table, layout, a, x);
      rho[x].push_back(add_moment_vars(prog, layout, &fixed));
      int blk = prog.add_block(layout.dim);
      place_moment_block(prog, layout, rho[x].back(), blk, 1.0);
    }
  add_reduced_state_consistency(prog, layout, rho);

  FeasibilityResult fr = feasibility(prog, opts.solver);
  RobustnessReport r;
  r.quantity = "membership";
  r.level = opts.level;
  r.value = fr.margin;
  switch (fr.verdict) {
    case Feasibility::kFeasible:
      r.status = SolveStatus::kOptimal;
      r.detail = "feasible";
      break;
    case Feasibility::kInfeasible:
      r.status = SolveStatus::kInfeasible;
      r.detail = "infeasible: certifiably non-quantum at this level";
      break;
    default:
      r.status = SolveStatus::kNumericalFailure;
      r.detail = "inconclusive";
  }
  return r;
}

RobustnessReport di_tsirelson(const BellFunctional& functional,
                              const DiOptions& opts) {
  const BellScenario& s = functional.scenario;
  MomentLayout layout = build_layout(s, opts.level, opts.extra_words);
  ConicProgram prog;
  std::vector<std::vector<MomentBlockVars>> rho(s.nx);
  for (int x = 0; x < s.nx; ++x)
    for (int a = 0; a < s.na; ++a) {
      rho[x].push_back(add_moment_vars(prog, layout, nullptr));
      int blk = prog.add_block(layout.dim);
      place_moment_block(prog, layout, rho[x].back(), blk, 1.0);
    }
  add_reduced_state_consistency(prog, layout, rho);
  add_trace_normalization(prog, rho);
  LinearExpr expr = functional_on_moments(functional, layout, rho);
  for (auto [var, c] : expr.terms) prog.objective[var] -= c;
  prog.objective_constant = -expr.constant;

  ConicSolution sol = solve(prog, opts.solver);
  RobustnessReport r = report_from("tsirelson", opts.level, sol);
  r.value = -sol.objective_value;
  return r;
}

RobustnessReport di_sr(const CorrelationTable& table, const DiOptions& opts) {
  return run_di_steering(table.scenario, Direction::kSr, DataMode::kFullTable,
                         &table, nullptr, 0.0, opts);
}

RobustnessReport di_sr(const BellFunctional& functional, double s_obs,
                       const DiOptions& opts) {
  return run_di_steering(functional.scenario, Direction::kSr,
                         DataMode::kBellValue, nullptr, &functional, s_obs,
                         opts);
}

RobustnessReport di_sw(const CorrelationTable& table, const DiOptions& opts) {
  return run_di_steering(table.scenario, Direction::kSw, DataMode::kFullTable,
                         &table, nullptr, 0.0, opts);
}

RobustnessReport di_sw(const BellFunctional& functional, double s_obs,
                       const DiOptions& opts) {
  return run_di_steering(functional.scenario, Direction::kSw,
                         DataMode::kBellValue, nullptr, &functional, s_obs,
                         opts);
}

CorrelationTable swap_roles(const CorrelationTable& table) {
  return transpose_roles(table);
}

}  // namespace amm
