#pragma once

// Shared builders that lower quantum objects onto real ConicPrograms:
// Hermitian matrix variables via the real embedding, and the word-indexed
// variable structure of assemblage-moment-matrix blocks.

#include <optional>
#include <vector>

#include "conic.hpp"
#include "matlin.hpp"
#include "moments.hpp"
#include "scenario.hpp"

namespace amm {

// A d x d Hermitian matrix variable, realized inside 2d x 2d embedded blocks.
// re(i,j) for i <= j and im(i,j) for i < j are program variables; the trace
// is sum_i re(i,i).
struct HermitianVar {
  int dim = 0;
  std::vector<int> re;  // packed upper triangle, index i*dim+j stored via pack
  std::vector<int> im;

  int re_var(int i, int j) const;  // i <= j
  int im_var(int i, int j) const;  // i < j
};

HermitianVar add_hermitian_var(ConicProgram& prog, int dim);

// Adds weight * H into the affine map of `block` (dim must be 2*H.dim).
void place_hermitian_var(ConicProgram& prog, const HermitianVar& h, int block,
                         double weight);

// Adds weight * embed(c) to the constant part of `block`.
void place_hermitian_constant(ConicProgram& prog, const CMat& c, int block,
                              double weight);

// Word-indexed variables of one moment-matrix block. Entries whose value is
// pinned by data carry a constant instead of a variable id (-1).
struct MomentBlockVars {
  int trace_var = -1;
  double trace_const = 0.0;
  std::vector<int> obs_var;      // ny * (nb-1), index y*(nb-1)+b
  std::vector<double> obs_const;
  std::vector<int> u_var;        // layout.n_free

  int var_of_word(const MomentLayout& layout, int entry_index) const;
  int n_words(const MomentLayout& layout) const {
    return 1 + int(obs_var.size()) + layout.n_free;
  }
};

// Creates variables for one moment block. If `fixed` is provided it pins the
// trace and observed entries: fixed[0] is the trace, fixed[1+k] the observed
// value for packed index k.
MomentBlockVars add_moment_vars(ConicProgram& prog, const MomentLayout& layout,
                                const std::vector<double>* fixed);

// Accumulates weight * (moment block of `vars`) into the affine map of
// `block`; constants flow into the block constant.
void place_moment_block(ConicProgram& prog, const MomentLayout& layout,
                        const MomentBlockVars& vars, int block, double weight);

// Equality rows tying word w of the x-th and (x+1)-th setting sums:
// sum_a vars[x][a].word(w) = sum_a vars[x+1][a].word(w), skipping rows where
// both sides are constant.
void add_reduced_state_consistency(
    ConicProgram& prog, const MomentLayout& layout,
    const std::vector<std::vector<MomentBlockVars>>& rho_vars);

// sum_a trace = 1 for every setting (no-op for pinned traces).
void add_trace_normalization(
    ConicProgram& prog,
    const std::vector<std::vector<MomentBlockVars>>& rho_vars);

// Linear expression sum beta p(a,b|x,y) over the moment variables, with the
// last Bob outcome rewritten as trace - sum of kept outcomes.
struct LinearExpr {
  std::vector<std::pair<int, double>> terms;
  double constant = 0.0;
};

LinearExpr functional_on_moments(
    const BellFunctional& f, const MomentLayout& layout,
    const std::vector<std::vector<MomentBlockVars>>& rho_vars);

// Fixed data vector for add_moment_vars from an observed table: the trace
// entry is the Alice marginal averaged over Bob settings.
std::vector<double> fixed_from_table(const CorrelationTable& table,
                                     const MomentLayout& layout, int a, int x);

}  // namespace amm
