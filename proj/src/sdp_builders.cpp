#include "sdp_builders.hpp"

namespace amm {

namespace {
int pack_upper(int dim, int i, int j) { return i * dim + j; }
}  // namespace

int HermitianVar::re_var(int i, int j) const {
  return re[pack_upper(dim, i, j)];
}

int HermitianVar::im_var(int i, int j) const {
  return im[pack_upper(dim, i, j)];
}

HermitianVar add_hermitian_var(ConicProgram& prog, int dim) {
  HermitianVar h;
  h.dim = dim;
  h.re.assign(size_t(dim) * dim, -1);
  h.im.assign(size_t(dim) * dim, -1);
  for (int i = 0; i < dim; ++i)
    for (int j = i; j < dim; ++j) {
      h.re[pack_upper(dim, i, j)] = prog.add_variable();
      if (i != j) h.im[pack_upper(dim, i, j)] = prog.add_variable();
    }
  return h;
}

void place_hermitian_var(ConicProgram& prog, const HermitianVar& h, int block,
                         double weight) {
  const int d = h.dim;
  for (int i = 0; i < d; ++i)
    for (int j = i; j < d; ++j) {
      int re = h.re_var(i, j);
      prog.add_coefficient(re, block, i, j, weight);
      prog.add_coefficient(re, block, d + i, d + j, weight);
      if (i != j) {
        int im = h.im_var(i, j);
        // embedding [[Re, -Im], [Im, Re]]; symmetric placement mirrors
        prog.add_coefficient(im, block, i, d + j, -weight);
        prog.add_coefficient(im, block, j, d + i, weight);
      }
    }
}

void place_hermitian_constant(ConicProgram& prog, const CMat& c, int block,
                              double weight) {
  const int d = int(c.rows());
  for (int i = 0; i < d; ++i)
    for (int j = i; j < d; ++j) {
      double re = c(i, j).real() * weight;
      if (re != 0.0) {
        prog.set_constant(block, i, j, re);
        prog.set_constant(block, d + i, d + j, re);
      }
      double im = c(i, j).imag() * weight;
      if (i != j && im != 0.0) {
        prog.set_constant(block, i, d + j, -im);
        prog.set_constant(block, j, d + i, im);
      }
    }
}

int MomentBlockVars::var_of_word(const MomentLayout& layout,
                                 int entry_index) const {
  const EntryClass& e = layout.entries[entry_index];
  switch (e.kind) {
    case EntryKind::kTrace: return trace_var;
    case EntryKind::kObserved:
      return obs_var[e.y * layout.algebra.n_kept_outcomes + e.b];
    case EntryKind::kFree: return u_var[e.u_index];
    default: return -1;
  }
}

MomentBlockVars add_moment_vars(ConicProgram& prog, const MomentLayout& layout,
                                const std::vector<double>* fixed) {
  MomentBlockVars vars;
  const int n_obs = layout.scenario.ny * layout.algebra.n_kept_outcomes;
  if (fixed) {
    vars.trace_const = (*fixed)[0];
    vars.obs_const.assign(fixed->begin() + 1, fixed->end());
    vars.obs_var.assign(n_obs, -1);
  } else {
    vars.trace_var = prog.add_variable();
    vars.obs_var.resize(n_obs);
    for (int& v : vars.obs_var) v = prog.add_variable();
    vars.obs_const.assign(n_obs, 0.0);
  }
  vars.u_var.resize(layout.n_free);
  for (int& v : vars.u_var) v = prog.add_variable();
  return vars;
}

void place_moment_block(ConicProgram& prog, const MomentLayout& layout,
                        const MomentBlockVars& vars, int block,
                        double weight) {
  const int d = layout.dim;
  for (int r = 0; r < d; ++r)
    for (int c = r; c < d; ++c) {
      const int idx = r * d + c;
      const EntryClass& e = layout.entries[idx];
      if (e.kind == EntryKind::kZero) continue;
      int var = vars.var_of_word(layout, idx);
      if (var >= 0) {
        prog.add_coefficient(var, block, r, c, weight);
      } else {
        double v = e.kind == EntryKind::kTrace
                       ? vars.trace_const
                       : vars.obs_const[e.y * layout.algebra.n_kept_outcomes +
                                        e.b];
        if (v != 0.0) prog.set_constant(block, r, c, v * weight);
      }
    }
}

namespace {

// word slots: 0 = trace, 1..n_obs = observed, then the free moments
int word_count(const MomentLayout& layout) {
  return 1 + layout.scenario.ny * layout.algebra.n_kept_outcomes +
         layout.n_free;
}

int word_var(const MomentBlockVars& v, int w) {
  int n_obs = int(v.obs_var.size());
  if (w == 0) return v.trace_var;
  if (w <= n_obs) return v.obs_var[w - 1];
  return v.u_var[w - 1 - n_obs];
}

double word_const(const MomentBlockVars& v, int w) {
  int n_obs = int(v.obs_var.size());
  if (w == 0) return v.trace_const;
  if (w <= n_obs) return v.obs_const[w - 1];
  return 0.0;
}

}  // namespace

void add_reduced_state_consistency(
    ConicProgram& prog, const MomentLayout& layout,
    const std::vector<std::vector<MomentBlockVars>>& rho_vars) {
  const int nx = int(rho_vars.size());
  const int nw = word_count(layout);
  for (int x = 0; x + 1 < nx; ++x)
    for (int w = 0; w < nw; ++w) {
      LinearEquality eq;
      double rhs = 0.0;
      bool any_var = false;
      for (const MomentBlockVars& v : rho_vars[x]) {
        int var = word_var(v, w);
        if (var >= 0) {
          eq.terms.push_back({var, 1.0});
          any_var = true;
        } else {
          rhs -= word_const(v, w);
        }
      }
      for (const MomentBlockVars& v : rho_vars[x + 1]) {
        int var = word_var(v, w);
        if (var >= 0) {
          eq.terms.push_back({var, -1.0});
          any_var = true;
        } else {
          rhs += word_const(v, w);
        }
      }
      if (!any_var) continue;  // both sides pinned by data
      eq.rhs = rhs;
      prog.equalities.push_back(std::move(eq));
    }
}

void add_trace_normalization(
    ConicProgram& prog,
    const std::vector<std::vector<MomentBlockVars>>& rho_vars) {
  for (const auto& setting : rho_vars) {
    LinearEquality eq;
    double rhs = 1.0;
    bool any_var = false;
    for (const MomentBlockVars& v : setting) {
      if (v.trace_var >= 0) {
        eq.terms.push_back({v.trace_var, 1.0});
        any_var = true;
      } else {
        rhs -= v.trace_const;
      }
    }
    if (!any_var) continue;
    eq.rhs = rhs;
    prog.equalities.push_back(std::move(eq));
  }
}

LinearExpr functional_on_moments(
    const BellFunctional& f, const MomentLayout& layout,
    const std::vector<std::vector<MomentBlockVars>>& rho_vars) {
  const BellScenario& s = f.scenario;
  const int kept = layout.algebra.n_kept_outcomes;
  const int slots = 1 + s.ny * kept;
  LinearExpr expr;
  std::vector<double> acc(size_t(s.nx) * s.na * slots, 0.0);
  auto slot = [&](int x, int a, int w) {
    return (size_t(x) * s.na + a) * slots + w;
  };
  for (int x = 0; x < s.nx; ++x)
    for (int y = 0; y < s.ny; ++y)
      for (int a = 0; a < s.na; ++a)
        for (int b = 0; b < s.nb; ++b) {
          double beta = f.coef(x, y, a, b);
          if (beta == 0.0) continue;
          if (b < kept) {
            acc[slot(x, a, 1 + y * kept + b)] += beta;
          } else {
            // last Bob outcome: p = trace - sum of kept outcomes
            acc[slot(x, a, 0)] += beta;
            for (int bp = 0; bp < kept; ++bp)
              acc[slot(x, a, 1 + y * kept + bp)] -= beta;
          }
        }
  for (int x = 0; x < s.nx; ++x)
    for (int a = 0; a < s.na; ++a)
      for (int w = 0; w < slots; ++w) {
        double c = acc[slot(x, a, w)];
        if (c == 0.0) continue;
        const MomentBlockVars& v = rho_vars[x][a];
        int var = word_var(v, w);
        if (var >= 0)
          expr.terms.push_back({var, c});
        else
          expr.constant += c * word_const(v, w);
      }
  return expr;
}

std::vector<double> fixed_from_table(const CorrelationTable& table,
                                     const MomentLayout& layout, int a,
                                     int x) {
  const BellScenario& s = table.scenario;
  const int kept = layout.algebra.n_kept_outcomes;
  std::vector<double> fixed(1 + size_t(s.ny) * kept, 0.0);
  fixed[0] = table.marginal_a(x, a);
  for (int y = 0; y < s.ny; ++y)
    for (int b = 0; b < kept; ++b)
      fixed[1 + y * kept + b] = table.at(x, y, a, b);
  return fixed;
}

}  // namespace amm
