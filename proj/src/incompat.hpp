#pragma once

// Measurement-incompatibility computations: incompatibility robustness SDP,
// steering-equivalent observables, the Busch criterion for unbiased qubit
// pairs, and the IR/SR inequality chain.

#include <array>

#include "programs.hpp"
#include "quantum.hpp"

namespace amm {

// Binary qubit observable O_+ = ((1+alpha) I + r.sigma)/2.
struct QubitBinaryObservable {
  double alpha = 0.0;
  std::array<double, 3> bloch{0.0, 0.0, 0.0};
};

// Incompatibility robustness: minimum t such that mixing with some noise
// assemblage at weight t/(1+t) makes the collection jointly measurable.
// Solved as min tr(sum_l G_l)/d - 1 over G_l >= 0 with
// sum_l D(a|x,l) G_l >= M_{a|x} and sum_l G_l proportional to the identity.
RobustnessReport ir(const MeasurementAssemblage& assemblage,
                    const SolveOptions& solver = {},
                    int strategy_cap = kDefaultStrategyCap);

// Bob's steering-equivalent observables pinv_sqrt(rho_B) rho_{a|x}
// pinv_sqrt(rho_B), restricted to range(rho_B).
MeasurementAssemblage se_observables(const StateAssemblage& assemblage,
                                     double rank_tol = -1.0);

// Joint measurability of two unbiased binary qubit observables:
// ||r1 + r2|| + ||r1 - r2|| <= 2. Rejects biased inputs.
bool busch_jm(const QubitBinaryObservable& o1, const QubitBinaryObservable& o2);

struct BuschMubResult {
  double value = 0.0;  // exactly 3 - 2 sqrt(2)
  std::array<double, 3> q1{0, 0, 0};  // optimal noise directions
  std::array<double, 3> q2{0, 0, 0};
};

// Analytic IR of the X/Z qubit pair with its optimality certificate.
BuschMubResult busch_ir_mub();

struct ChainReport {
  RobustnessReport ir_alice;
  RobustnessReport ir_se;
  RobustnessReport sr;
  bool ordering_ok = false;
  double worst_gap = 0.0;  // most negative pairwise slack
};

// IR(Alice) >= IR(SE observables) >= SR(steered assemblage).
ChainReport verify_chain(const DensityMatrix& state,
                         const MeasurementAssemblage& alice,
                         const SolveOptions& solver = {},
                         int strategy_cap = kDefaultStrategyCap);

}  // namespace amm
