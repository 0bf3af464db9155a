#pragma once

// Block-diagonal semidefinite programming in standard form
//
//   minimize    c.x + const
//   subject to  C_k + sum_i x_i A_{k,i}  PSD   for every block k
//               sum_i g_i x_i = h              for every equality
//
// solved by a built-in primal-dual interior-point method (Nesterov-Todd
// scaling, Mehrotra predictor-corrector). Equalities are eliminated by a
// substitution presolve before the solver runs.

#include <string>
#include <vector>

namespace amm {

// Symmetric placement: (row, col) with row <= col sets both mirror entries.
struct SymEntry {
  int block = 0;
  int row = 0;
  int col = 0;
  double value = 0.0;
};

struct LinearEquality {
  std::vector<std::pair<int, double>> terms;  // (variable, coefficient)
  double rhs = 0.0;
};

struct ConicProgram {
  int n_vars = 0;
  std::vector<double> objective;  // size n_vars
  double objective_constant = 0.0;
  std::vector<int> block_dims;
  std::vector<SymEntry> constant_entries;           // the C_k
  std::vector<std::vector<SymEntry>> var_entries;   // A_{k,i} per variable
  std::vector<LinearEquality> equalities;

  int add_variable(double cost = 0.0) {
    objective.push_back(cost);
    var_entries.emplace_back();
    return n_vars++;
  }
  int add_block(int dim) {
    block_dims.push_back(dim);
    return int(block_dims.size()) - 1;
  }
  void set_constant(int block, int row, int col, double value) {
    constant_entries.push_back({block, std::min(row, col),
                                std::max(row, col), value});
  }
  void add_coefficient(int var, int block, int row, int col, double value) {
    var_entries[var].push_back({block, std::min(row, col),
                                std::max(row, col), value});
  }
  void validate() const;
};

enum class SolveStatus { kOptimal, kInfeasible, kMaxIter, kNumericalFailure };

std::string to_string(SolveStatus s);

struct SolveOptions {
  double gap_tol = 1e-8;
  double feas_tol = 1e-8;
  int max_iter = 200;
  bool verbose = false;
};

struct ConicSolution {
  SolveStatus status = SolveStatus::kNumericalFailure;
  std::vector<double> x;
  double objective_value = 0.0;
  double primal_residual = 0.0;  // PSD violation + equality violation of x
  double dual_residual = 0.0;
  double duality_gap = 0.0;
  int iterations = 0;
};

ConicSolution solve(const ConicProgram& prog, const SolveOptions& opts = {});

enum class Feasibility { kFeasible, kInfeasible, kInconclusive };

struct FeasibilityResult {
  Feasibility verdict = Feasibility::kInconclusive;
  std::vector<double> witness;  // populated when feasible
  double margin = 0.0;          // phase-I slack at the optimum (negated t*)
};

// Phase-I test: minimize t with C_k + A_k(x) + t I PSD; feasible iff the
// optimal t is below feas_tol.
FeasibilityResult feasibility(const ConicProgram& prog,
                              const SolveOptions& opts = {});

// Re-evaluates all constraints of `prog` at x from scratch; returns the
// worst violation (most negative block eigenvalue, largest equality gap).
// Used by tests as an independent check on solver output.
double replay_violation(const ConicProgram& prog,
                        const std::vector<double>& x);

}  // namespace amm
