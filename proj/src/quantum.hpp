#pragma once

// Quantum objects and simulation: states, POVMs, Born-rule tables, steered
// assemblages, assemblage validation and Neumark dilation, plus the factory
// of named states/measurements used by the CLI fixtures.

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "matlin.hpp"
#include "scenario.hpp"

namespace amm {

struct DensityMatrix {
  CMat mat;
  int dim_a = 0;  // dim_a == 0 means single-partite
  int dim_b = 0;

  int dim() const { return int(mat.rows()); }
  bool bipartite() const { return dim_a > 0 && dim_b > 0; }
  void validate(double tol = tol::kPsd) const;
};

struct Povm {
  std::vector<CMat> elements;

  int dim() const { return elements.empty() ? 0 : int(elements[0].rows()); }
  int n_outcomes() const { return int(elements.size()); }
  void validate(double tol = tol::kPsd) const;
};

// One POVM per measurement setting, all on the same dimension.
struct MeasurementAssemblage {
  std::vector<Povm> povms;

  int n_settings() const { return int(povms.size()); }
  int n_outcomes() const { return povms.empty() ? 0 : povms[0].n_outcomes(); }
  int dim() const { return povms.empty() ? 0 : povms[0].dim(); }
  void validate(double tol = tol::kPsd) const;
  bool is_projective(double tol = 1e-9) const;
};

// Subnormalized conditional states rho_{a|x}, indexed [x][a].
struct StateAssemblage {
  std::vector<std::vector<CMat>> states;

  int n_settings() const { return int(states.size()); }
  int n_outcomes() const { return states.empty() ? 0 : int(states[0].size()); }
  int dim() const {
    return states.empty() || states[0].empty() ? 0
                                               : int(states[0][0].rows());
  }
  const CMat& at(int x, int a) const { return states[x][a]; }

  // Bob's reduced state sum_a rho_{a|x}, averaged over x.
  CMat reduced_state() const;
};

struct AssemblageIssue {
  std::string what;
  double magnitude = 0.0;
};

struct AssemblageReport {
  std::vector<AssemblageIssue> issues;
  bool clean() const { return issues.empty(); }
};

// p(a,b|x,y) = tr[(A_{a|x} x B_{b|y}) rho].
CorrelationTable born_table(const DensityMatrix& state,
                            const MeasurementAssemblage& alice,
                            const MeasurementAssemblage& bob);

// rho_{a|x} = tr_A[(A_{a|x} x 1) rho].
StateAssemblage steer(const DensityMatrix& state,
                      const MeasurementAssemblage& alice);

// Joint projective dilation of all POVMs on a common larger space. Output
// elements are rank-1-sum orthogonal projectors grouped per original outcome;
// probabilities of states embedded in the original space are preserved.
MeasurementAssemblage neumark_dilate(const MeasurementAssemblage& bob);

AssemblageReport validate_assemblage(const StateAssemblage& asm_,
                                     double tol = tol::kNormalization);

// --- factory -------------------------------------------------------------

// (sum_i |ii>)/sqrt(d)
DensityMatrix phi_plus(int d);

DensityMatrix product_state(const CMat& rho_a, const CMat& rho_b);

DensityMatrix maximally_mixed(int dim_a, int dim_b);

// Binary qubit POVM {(1+alpha)I + r.sigma, (1-alpha)I - r.sigma}/2.
Povm qubit_povm(const std::array<double, 3>& bloch, double alpha = 0.0);

// X/Z pair.
MeasurementAssemblage mub_pair();
// X/Y/Z triple.
MeasurementAssemblage mub_triple();
// Four binary measurements along regular tetrahedron directions.
MeasurementAssemblage tetrahedron();
// CHSH-optimal partner to mub_pair: (X+Z)/sqrt2, (X-Z)/sqrt2.
MeasurementAssemblage chsh_optimal_pair();
// Bob's side of the elegant-inequality optimum: x, -y, z.
MeasurementAssemblage elegant_bob();
// d+1 mutually unbiased bases exist for prime d; returns the first `count`
// of them as projective measurements (d = 2 or 3).
MeasurementAssemblage mub_assemblage(int d, int count);
// Trine POVM: three subnormalized rank-1 elements (2/3)|e_k><e_k| in a plane.
Povm trine_povm();

// Named fixture lookup used by the CLI: "phi-plus-d2", "mub-pair", ...
std::optional<DensityMatrix> state_fixture(const std::string& name);
std::optional<MeasurementAssemblage> measurement_fixture(
    const std::string& name);

}  // namespace amm
