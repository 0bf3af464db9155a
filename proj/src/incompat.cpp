#include "incompat.hpp"

#include <cmath>

#include "sdp_builders.hpp"

namespace amm {

RobustnessReport ir(const MeasurementAssemblage& assemblage,
                    const SolveOptions& solver, int strategy_cap) {
  assemblage.validate();
  const int d = assemblage.dim();
  auto strategies = enumerate_strategies(assemblage.n_settings(),
                                         assemblage.n_outcomes(),
                                         strategy_cap);
  ConicProgram prog;
  std::vector<HermitianVar> g;
  for (size_t l = 0; l < strategies.size(); ++l)
    g.push_back(add_hermitian_var(prog, d));
  int s_var = prog.add_variable(1.0);  // tr(sum G)/d
  prog.objective_constant = -1.0;

  for (size_t l = 0; l < strategies.size(); ++l) {
    int blk = prog.add_block(2 * d);
    place_hermitian_var(prog, g[l], blk, 1.0);
  }
  for (int x = 0; x < assemblage.n_settings(); ++x)
    for (int a = 0; a < assemblage.n_outcomes(); ++a) {
      int blk = prog.add_block(2 * d);
      place_hermitian_constant(prog, assemblage.povms[x].elements[a], blk,
                               -1.0);
      for (size_t l = 0; l < strategies.size(); ++l)
        if (strategies[l].response(x) == a)
          place_hermitian_var(prog, g[l], blk, 1.0);
    }
  // sum_l G_l = s I
  for (int i = 0; i < d; ++i)
    for (int j = i; j < d; ++j) {
      LinearEquality re;
      for (size_t l = 0; l < strategies.size(); ++l)
        re.terms.push_back({g[l].re_var(i, j), 1.0});
      if (i == j) re.terms.push_back({s_var, -1.0});
      prog.equalities.push_back(std::move(re));
      if (i != j) {
        LinearEquality im;
        for (size_t l = 0; l < strategies.size(); ++l)
          im.terms.push_back({g[l].im_var(i, j), 1.0});
        prog.equalities.push_back(std::move(im));
      }
    }

  ConicSolution sol = solve(prog, solver);
  RobustnessReport r;
  r.quantity = "ir";
  r.status = sol.status;
  r.value = sol.objective_value;
  r.gap = sol.duality_gap;
  r.primal_residual = sol.primal_residual;
  r.dual_residual = sol.dual_residual;
  r.iterations = sol.iterations;
  return r;
}

MeasurementAssemblage se_observables(const StateAssemblage& assemblage,
                                     double rank_tol) {
  const int d = assemblage.dim();
  CMat rho_b = assemblage.reduced_state();
  PinvSqrt pinv = pinv_sqrt(rho_b, rank_tol);

  // orthonormal basis of range(rho_B), consistent with pinv_sqrt's cut
  EigResult eig = eig_hermitian(rho_b);
  double wmax = eig.eigenvalues.maxCoeff();
  double cut = rank_tol < 0 ? 1e-9 * std::max(wmax, 1e-300) : rank_tol;
  CMat basis(d, pinv.rank);
  int col = 0;
  for (Eigen::Index i = 0; i < eig.eigenvalues.size(); ++i)
    if (eig.eigenvalues(i) > cut) basis.col(col++) = eig.eigenvectors.col(i);

  MeasurementAssemblage out;
  for (int x = 0; x < assemblage.n_settings(); ++x) {
    Povm povm;
    for (int a = 0; a < assemblage.n_outcomes(); ++a) {
      CMat full = pinv.result * assemblage.at(x, a) * pinv.result;
      CMat restricted = basis.adjoint() * full * basis;
      povm.elements.push_back((restricted + restricted.adjoint()) / 2.0);
    }
    CMat sum = CMat::Zero(pinv.rank, pinv.rank);
    for (const CMat& e : povm.elements) sum += e;
    if ((sum - identity(pinv.rank)).cwiseAbs().maxCoeff() > 1e-8)
      throw Error(ErrorCode::kInvalidArgument,
                  "se_observables: assemblage is not consistent on the range");
    out.povms.push_back(std::move(povm));
  }
  return out;
}

namespace {
double norm3(const std::array<double, 3>& v) {
  return std::sqrt(v[0] * v[0] + v[1] * v[1] + v[2] * v[2]);
}
}  // namespace

bool busch_jm(const QubitBinaryObservable& o1,
              const QubitBinaryObservable& o2) {
  if (std::abs(o1.alpha) > 1e-12 || std::abs(o2.alpha) > 1e-12)
    throw Error(ErrorCode::kInvalidArgument,
                "busch_jm: criterion is if-and-only-if for unbiased "
                "observables only");
  std::array<double, 3> sum{o1.bloch[0] + o2.bloch[0],
                            o1.bloch[1] + o2.bloch[1],
                            o1.bloch[2] + o2.bloch[2]};
  std::array<double, 3> diff{o1.bloch[0] - o2.bloch[0],
                             o1.bloch[1] - o2.bloch[1],
                             o1.bloch[2] - o2.bloch[2]};
  return norm3(sum) + norm3(diff) <= 2.0 + 1e-12;
}

BuschMubResult busch_ir_mub() {
  BuschMubResult out;
  out.value = 3.0 - 2.0 * std::sqrt(2.0);
  out.q1 = {-1.0, 0.0, 0.0};
  out.q2 = {0.0, 0.0, -1.0};
  return out;
}

ChainReport verify_chain(const DensityMatrix& state,
                         const MeasurementAssemblage& alice,
                         const SolveOptions& solver, int strategy_cap) {
  ChainReport report;
  StateAssemblage steered = steer(state, alice);
  report.ir_alice = ir(alice, solver, strategy_cap);
  report.ir_se = ir(se_observables(steered), solver, strategy_cap);
  report.sr = sr_assemblage(steered, solver, strategy_cap);
  double g1 = report.ir_alice.value - report.ir_se.value;
  double g2 = report.ir_se.value - report.sr.value;
  report.worst_gap = std::min(g1, g2);
  report.ordering_ok = report.worst_gap >= -1e-6;
  return report;
}

}  // namespace amm
