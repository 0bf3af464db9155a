#include "conic.hpp"

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <unordered_map>

#include "matlin.hpp"

namespace amm {

void ConicProgram::validate() const {
  if (int(objective.size()) != n_vars || int(var_entries.size()) != n_vars)
    throw Error(ErrorCode::kInvalidArgument, "conic program size mismatch");
  auto check = [&](const SymEntry& e) {
    if (e.block < 0 || e.block >= int(block_dims.size()) || e.row < 0 ||
        e.col >= block_dims[e.block] || e.row > e.col)
      throw Error(ErrorCode::kInvalidArgument, "conic entry out of range");
  };
  for (const auto& e : constant_entries) check(e);
  for (const auto& v : var_entries)
    for (const auto& e : v) check(e);
  for (const auto& eq : equalities)
    for (const auto& [var, coef] : eq.terms) {
      (void)coef;
      if (var < 0 || var >= n_vars)
        throw Error(ErrorCode::kInvalidArgument, "equality variable range");
    }
}

std::string to_string(SolveStatus s) {
  switch (s) {
    case SolveStatus::kOptimal: return "optimal";
    case SolveStatus::kInfeasible: return "infeasible";
    case SolveStatus::kMaxIter: return "max_iter";
    default: return "numerical_failure";
  }
}

namespace detail {

// Result of eliminating the equality constraints by substitution. Kept
// variables are renumbered 0..n_red-1; every original variable is an affine
// function of the kept ones.
struct Presolved {
  bool infeasible = false;
  ConicProgram reduced;
  std::vector<int> kept;                      // reduced index -> original
  // original index -> affine expression over reduced vars
  std::vector<std::vector<std::pair<int, double>>> expr;
  std::vector<double> expr_const;

  std::vector<double> lift(const std::vector<double>& x_red) const {
    std::vector<double> x(expr.size());
    for (size_t i = 0; i < expr.size(); ++i) {
      double v = expr_const[i];
      for (auto [j, w] : expr[i]) v += w * x_red[j];
      x[i] = v;
    }
    return x;
  }
};

Presolved presolve(const ConicProgram& prog) {
  Presolved out;
  const int n = prog.n_vars;

  struct Row {
    std::unordered_map<int, double> terms;
    double rhs = 0.0;
    bool active = true;
  };
  std::vector<Row> rows(prog.equalities.size());
  for (size_t r = 0; r < prog.equalities.size(); ++r) {
    for (auto [v, c] : prog.equalities[r].terms)
      if (c != 0.0) rows[r].terms[v] += c;
    rows[r].rhs = prog.equalities[r].rhs;
  }

  // substitution[v] = (expression over not-yet-eliminated vars, constant)
  std::unordered_map<int, std::pair<std::unordered_map<int, double>, double>>
      subst;
  std::vector<bool> eliminated(n, false);
  std::vector<int> elim_order;

  for (size_t r = 0; r < rows.size(); ++r) {
    Row& row = rows[r];
    if (!row.active) continue;
    // substitute previously eliminated vars
    bool changed = true;
    while (changed) {
      changed = false;
      for (auto it = row.terms.begin(); it != row.terms.end(); ++it) {
        auto s = subst.find(it->first);
        if (s == subst.end()) continue;
        double c = it->second;
        row.terms.erase(it);
        row.rhs -= c * s->second.second;
        for (auto [v2, c2] : s->second.first) row.terms[v2] += c * c2;
        changed = true;
        break;
      }
    }
    for (auto it = row.terms.begin(); it != row.terms.end();)
      it = std::abs(it->second) < 1e-13 ? row.terms.erase(it) : ++it;
    if (row.terms.empty()) {
      if (std::abs(row.rhs) > 1e-9) {
        out.infeasible = true;
        return out;
      }
      continue;  // redundant
    }
    auto pivot = std::max_element(
        row.terms.begin(), row.terms.end(), [](const auto& a, const auto& b) {
          return std::abs(a.second) < std::abs(b.second);
        });
    int pv = pivot->first;
    double pc = pivot->second;
    std::unordered_map<int, double> expr;
    for (auto [v, c] : row.terms)
      if (v != pv) expr[v] = -c / pc;
    subst[pv] = {std::move(expr), row.rhs / pc};
    eliminated[pv] = true;
    elim_order.push_back(pv);
  }

  // compose substitutions so each expression uses only kept variables
  std::vector<int> new_index(n, -1);
  for (int v = 0; v < n; ++v)
    if (!eliminated[v]) {
      new_index[v] = int(out.kept.size());
      out.kept.push_back(v);
    }
  out.expr.assign(n, {});
  out.expr_const.assign(n, 0.0);
  for (int v = 0; v < n; ++v)
    if (!eliminated[v]) out.expr[v] = {{new_index[v], 1.0}};
  for (auto it = elim_order.rbegin(); it != elim_order.rend(); ++it) {
    auto& [e, cst] = subst[*it];
    std::unordered_map<int, double> acc;
    double acc_c = cst;
    for (auto [v, c] : e) {
      acc_c += c * out.expr_const[v];
      for (auto [rv, rc] : out.expr[v]) acc[rv] += c * rc;
    }
    out.expr_const[*it] = acc_c;
    out.expr[*it].assign(acc.begin(), acc.end());
    std::sort(out.expr[*it].begin(), out.expr[*it].end());
  }

  // rebuild the program over kept variables
  ConicProgram& red = out.reduced;
  red.block_dims = prog.block_dims;
  red.objective.assign(out.kept.size(), 0.0);
  red.var_entries.assign(out.kept.size(), {});
  red.n_vars = int(out.kept.size());
  red.objective_constant = prog.objective_constant;
  red.constant_entries = prog.constant_entries;
  for (int v = 0; v < n; ++v) {
    red.objective_constant += prog.objective[v] * out.expr_const[v];
    for (auto [rv, rc] : out.expr[v])
      red.objective[rv] += prog.objective[v] * rc;
    if (prog.var_entries[v].empty()) continue;
    if (out.expr_const[v] != 0.0)
      for (SymEntry e : prog.var_entries[v]) {
        e.value *= out.expr_const[v];
        red.constant_entries.push_back(e);
      }
    for (auto [rv, rc] : out.expr[v])
      for (SymEntry e : prog.var_entries[v]) {
        e.value *= rc;
        red.var_entries[rv].push_back(e);
      }
  }
  return out;
}

// in conic_ipm.cpp
ConicSolution ipm_solve(const ConicProgram& prog, const SolveOptions& opts);

}  // namespace detail

double replay_violation(const ConicProgram& prog,
                        const std::vector<double>& x) {
  double worst = 0.0;
  for (size_t k = 0; k < prog.block_dims.size(); ++k) {
    int d = prog.block_dims[k];
    RMat m = RMat::Zero(d, d);
    for (const auto& e : prog.constant_entries)
      if (e.block == int(k)) {
        m(e.row, e.col) += e.value;
        if (e.row != e.col) m(e.col, e.row) += e.value;
      }
    for (int v = 0; v < prog.n_vars; ++v)
      for (const auto& e : prog.var_entries[v])
        if (e.block == int(k)) {
          m(e.row, e.col) += x[v] * e.value;
          if (e.row != e.col) m(e.col, e.row) += x[v] * e.value;
        }
    Eigen::SelfAdjointEigenSolver<RMat> eig(m, Eigen::EigenvaluesOnly);
    worst = std::max(worst, -eig.eigenvalues().minCoeff());
  }
  for (const auto& eq : prog.equalities) {
    double lhs = 0.0;
    for (auto [v, c] : eq.terms) lhs += c * x[v];
    worst = std::max(worst, std::abs(lhs - eq.rhs));
  }
  return worst;
}

ConicSolution solve(const ConicProgram& prog, const SolveOptions& opts) {
  prog.validate();
  detail::Presolved pre = detail::presolve(prog);
  if (pre.infeasible) {
    ConicSolution sol;
    sol.status = SolveStatus::kInfeasible;
    return sol;
  }
  ConicSolution sol = detail::ipm_solve(pre.reduced, opts);
  if (!sol.x.empty() || pre.reduced.n_vars == 0)
    sol.x = pre.lift(sol.x);
  return sol;
}

FeasibilityResult feasibility(const ConicProgram& prog,
                              const SolveOptions& opts) {
  ConicProgram phase1 = prog;
  for (double& c : phase1.objective) c = 0.0;
  phase1.objective_constant = 0.0;
  int t = phase1.add_variable(1.0);
  for (size_t k = 0; k < phase1.block_dims.size(); ++k)
    for (int i = 0; i < phase1.block_dims[k]; ++i)
      phase1.add_coefficient(t, int(k), i, i, 1.0);
  // keep t bounded below so the phase-I objective cannot diverge
  int bound = phase1.add_block(1);
  phase1.set_constant(bound, 0, 0, 1.0);
  phase1.add_coefficient(t, bound, 0, 0, 1.0);

  ConicSolution sol = solve(phase1, opts);
  FeasibilityResult out;
  if (sol.status == SolveStatus::kInfeasible) {
    // only the equalities can be infeasible in phase-I
    out.verdict = Feasibility::kInfeasible;
    return out;
  }
  if (sol.status != SolveStatus::kOptimal) return out;
  double tstar = sol.x.back();
  out.margin = -tstar;
  if (tstar <= opts.feas_tol) {
    out.verdict = Feasibility::kFeasible;
    out.witness.assign(sol.x.begin(), sol.x.end() - 1);
  } else {
    out.verdict = Feasibility::kInfeasible;
  }
  return out;
}

}  // namespace amm
