#pragma once

// Bell-scenario bookkeeping: settings/outcome cardinalities, correlation
// tables, Bell functionals and deterministic strategies. Outcome labels are
// 1-based in I/O and 0-based internally.

#include <string>
#include <vector>

#include "matlin.hpp"

namespace amm {

struct BellScenario {
  int nx = 1;  // Alice settings
  int ny = 1;  // Bob settings
  int na = 1;  // Alice outcomes
  int nb = 1;  // Bob outcomes

  bool operator==(const BellScenario&) const = default;
  void validate() const;
};

// Conditional distribution p(a,b|x,y), flattened as ((x*ny+y)*na+a)*nb+b.
struct CorrelationTable {
  BellScenario scenario;
  std::vector<double> p;

  CorrelationTable() = default;
  explicit CorrelationTable(const BellScenario& s)
      : scenario(s),
        p(static_cast<size_t>(s.nx) * s.ny * s.na * s.nb, 0.0) {}

  double& at(int x, int y, int a, int b) {
    return p[((static_cast<size_t>(x) * scenario.ny + y) * scenario.na + a) *
                 scenario.nb +
             b];
  }
  double at(int x, int y, int a, int b) const {
    return p[((static_cast<size_t>(x) * scenario.ny + y) * scenario.na + a) *
                 scenario.nb +
             b];
  }

  // Alice / Bob marginals averaged over the other party's settings.
  double marginal_a(int x, int a) const;
  double marginal_b(int y, int b) const;
};

struct TableCheck {
  double max_normalization_violation = 0.0;
  double min_entry = 0.0;
  double max_signaling_a_to_b = 0.0;  // variation of sum_a p over x
  double max_signaling_b_to_a = 0.0;  // variation of sum_b p over y
  bool ok(double norm_tol = tol::kNormalization,
          double ns_tol = tol::kNoSignaling) const;
};

TableCheck check_table(const CorrelationTable& table);

// Linear form sum beta[x][y][a][b] p(a,b|x,y) with local bound L.
struct BellFunctional {
  BellScenario scenario;
  std::vector<double> beta;  // layout identical to CorrelationTable::p
  double local_bound = 0.0;
  std::string name;

  double& coef(int x, int y, int a, int b) {
    return beta[((static_cast<size_t>(x) * scenario.ny + y) * scenario.na +
                 a) *
                    scenario.nb +
                b];
  }
  double coef(int x, int y, int a, int b) const {
    return beta[((static_cast<size_t>(x) * scenario.ny + y) * scenario.na +
                 a) *
                    scenario.nb +
                b];
  }
};

// One local response function: outcome lambda[x] for every setting x.
struct DeterministicStrategy {
  std::vector<int> lambda;

  int response(int x) const { return lambda[x]; }
};

inline constexpr int kDefaultStrategyCap = 10000;

// All n_outcomes^n_settings response functions in lexicographic order.
std::vector<DeterministicStrategy> enumerate_strategies(
    int n_settings, int n_outcomes, int cap = kDefaultStrategyCap);

// Alice-side strategies of a scenario.
std::vector<DeterministicStrategy> enumerate_strategies(
    const BellScenario& s, int cap = kDefaultStrategyCap);

// Two-outcome correlator E_xy = sum_{a,b} (-1)^{a+b} p(a,b|x,y), 1-based labels.
double correlator(const CorrelationTable& table, int x, int y);

double evaluate(const BellFunctional& f, const CorrelationTable& table);

// chsh, elegant, i3322, i2233, i3plus.
BellFunctional builtin_functional(const std::string& name);

// Product table of two deterministic strategies.
CorrelationTable deterministic_table(const BellScenario& s,
                                     const DeterministicStrategy& alice,
                                     const DeterministicStrategy& bob);

CorrelationTable uniform_table(const BellScenario& s);

// The no-signaling point with a XOR b = x AND y (binary scenario).
CorrelationTable pr_box_table();

// Brute-force maximum over product deterministic strategies.
double local_bound_by_enumeration(const BellFunctional& f,
                                  int cap = kDefaultStrategyCap);

// p'(b,a|y,x); Bob becomes the steering party.
CorrelationTable transpose_roles(const CorrelationTable& table);
BellFunctional transpose_roles(const BellFunctional& f);

}  // namespace amm
