#pragma once

// Steering-side optimization problems: direct steering robustness and
// steerable weight of assemblages, and their device-independent relaxations
// through assemblage moment matrices (membership, Tsirelson bounds, SR, SW).

#include <string>

#include "conic.hpp"
#include "moments.hpp"
#include "quantum.hpp"
#include "scenario.hpp"
#include "sdp_builders.hpp"

namespace amm {

struct RobustnessReport {
  std::string quantity;  // sr | sw | ir | tsirelson | membership
  double value = 0.0;
  int level = 0;  // 0 for trusted-side computations
  SolveStatus status = SolveStatus::kNumericalFailure;
  double gap = 0.0;
  double primal_residual = 0.0;
  double dual_residual = 0.0;
  int iterations = 0;
  std::string detail;
  std::string inputs_digest;
};

struct DiOptions {
  int level = 1;
  std::vector<Word> extra_words;  // appended generating words ("level 2+")
  SolveOptions solver;
  int strategy_cap = kDefaultStrategyCap;
  // LHS moment blocks drop the word structure and become free symmetric
  // matrices (only the Hermitian pairing kept).
  bool sigma_entrywise_free = false;
  // Bell-value data matching as ">= S_obs" instead of "= S_obs".
  bool value_as_lower_bound = false;
};

// Direct SR of a known assemblage: min sum_l tr(sigma_l) - 1 subject to
// sum_l D(a|x,l) sigma_l >= rho_{a|x}, sigma_l >= 0.
RobustnessReport sr_assemblage(const StateAssemblage& assemblage,
                               const SolveOptions& solver = {},
                               int strategy_cap = kDefaultStrategyCap);

// Direct steerable weight: min 1 - sum_l tr(sigma_l) with the reversed
// domination rho_{a|x} >= sum_l D(a|x,l) sigma_l.
RobustnessReport sw_assemblage(const StateAssemblage& assemblage,
                               const SolveOptions& solver = {},
                               int strategy_cap = kDefaultStrategyCap);

// Level-l feasibility of a quantum representation for the observed table;
// infeasible certifies the table non-quantum at that level.
RobustnessReport di_membership(const CorrelationTable& table,
                               const DiOptions& opts = {});

// Upper bound on the Tsirelson bound of a Bell functional.
RobustnessReport di_tsirelson(const BellFunctional& functional,
                              const DiOptions& opts = {});

// Lower bound on SR from the full observed table / from one Bell value.
RobustnessReport di_sr(const CorrelationTable& table,
                       const DiOptions& opts = {});
RobustnessReport di_sr(const BellFunctional& functional, double s_obs,
                       const DiOptions& opts = {});

// Lower bound on the steerable weight, same two input modes.
RobustnessReport di_sw(const CorrelationTable& table,
                       const DiOptions& opts = {});
RobustnessReport di_sw(const BellFunctional& functional, double s_obs,
                       const DiOptions& opts = {});

// p'(b,a|y,x), for bounding the Bob-to-Alice steering quantities.
CorrelationTable swap_roles(const CorrelationTable& table);

}  // namespace amm
