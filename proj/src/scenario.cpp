#include "scenario.hpp"

#include <cmath>
#include <cstdint>

namespace amm {

void BellScenario::validate() const {
  if (nx < 1 || ny < 1 || na < 1 || nb < 1)
    throw Error(ErrorCode::kInvalidArgument,
                "scenario cardinalities must be positive");
}

double CorrelationTable::marginal_a(int x, int a) const {
  double sum = 0.0;
  for (int y = 0; y < scenario.ny; ++y)
    for (int b = 0; b < scenario.nb; ++b) sum += at(x, y, a, b);
  return sum / scenario.ny;
}

double CorrelationTable::marginal_b(int y, int b) const {
  double sum = 0.0;
  for (int x = 0; x < scenario.nx; ++x)
    for (int a = 0; a < scenario.na; ++a) sum += at(x, y, a, b);
  return sum / scenario.nx;
}

bool TableCheck::ok(double norm_tol, double ns_tol) const {
  return max_normalization_violation <= norm_tol && min_entry >= -1e-12 &&
         max_signaling_a_to_b <= ns_tol && max_signaling_b_to_a <= ns_tol;
}

TableCheck check_table(const CorrelationTable& table) {
  const BellScenario& s = table.scenario;
  TableCheck out;
  out.min_entry = table.p.empty() ? 0.0 : table.p[0];
  for (double v : table.p) out.min_entry = std::min(out.min_entry, v);
  for (int x = 0; x < s.nx; ++x)
    for (int y = 0; y < s.ny; ++y) {
      double sum = 0.0;
      for (int a = 0; a < s.na; ++a)
        for (int b = 0; b < s.nb; ++b) sum += table.at(x, y, a, b);
      out.max_normalization_violation =
          std::max(out.max_normalization_violation, std::abs(sum - 1.0));
    }
  // sum_a p(a,b|x,y) must not depend on x, and sum_b not on y
  for (int y = 0; y < s.ny; ++y)
    for (int b = 0; b < s.nb; ++b)
      for (int x = 1; x < s.nx; ++x) {
        double m0 = 0.0, m1 = 0.0;
        for (int a = 0; a < s.na; ++a) {
          m0 += table.at(0, y, a, b);
          m1 += table.at(x, y, a, b);
        }
        out.max_signaling_a_to_b =
            std::max(out.max_signaling_a_to_b, std::abs(m0 - m1));
      }
  for (int x = 0; x < s.nx; ++x)
    for (int a = 0; a < s.na; ++a)
      for (int y = 1; y < s.ny; ++y) {
        double m0 = 0.0, m1 = 0.0;
        for (int b = 0; b < s.nb; ++b) {
          m0 += table.at(x, 0, a, b);
          m1 += table.at(x, y, a, b);
        }
        out.max_signaling_b_to_a =
            std::max(out.max_signaling_b_to_a, std::abs(m0 - m1));
      }
  return out;
}

std::vector<DeterministicStrategy> enumerate_strategies(int n_settings,
                                                        int n_outcomes,
                                                        int cap) {
  double count = std::pow(double(n_outcomes), double(n_settings));
  if (count > double(cap))
    throw Error(ErrorCode::kCapExceeded,
                "strategy count " + std::to_string(int64_t(count)) +
                    " exceeds cap " + std::to_string(cap));
  std::vector<DeterministicStrategy> out;
  out.reserve(size_t(count));
  std::vector<int> lambda(n_settings, 0);
  while (true) {
    out.push_back({lambda});
    int i = n_settings - 1;
    for (; i >= 0; --i) {
      if (++lambda[i] < n_outcomes) break;
      lambda[i] = 0;
    }
    if (i < 0) break;
  }
  return out;
}

std::vector<DeterministicStrategy> enumerate_strategies(const BellScenario& s,
                                                        int cap) {
  return enumerate_strategies(s.nx, s.na, cap);
}

double correlator(const CorrelationTable& table, int x, int y) {
  const BellScenario& s = table.scenario;
  if (s.na != 2 || s.nb != 2)
    throw Error(ErrorCode::kInvalidArgument,
                "correlator requires binary outcomes");
  double e = 0.0;
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b)
      e += ((a + b) % 2 == 0 ? 1.0 : -1.0) * table.at(x, y, a, b);
  return e;
}

double evaluate(const BellFunctional& f, const CorrelationTable& table) {
  if (!(f.scenario == table.scenario))
    throw Error(ErrorCode::kDimensionMismatch,
                "functional and table scenarios differ");
  double sum = 0.0;
  for (size_t i = 0; i < f.beta.size(); ++i) sum += f.beta[i] * table.p[i];
  return sum;
}

CorrelationTable deterministic_table(const BellScenario& s,
                                     const DeterministicStrategy& alice,
                                     const DeterministicStrategy& bob) {
  CorrelationTable table(s);
  for (int x = 0; x < s.nx; ++x)
    for (int y = 0; y < s.ny; ++y)
      table.at(x, y, alice.response(x), bob.response(y)) = 1.0;
  return table;
}

CorrelationTable uniform_table(const BellScenario& s) {
  CorrelationTable table(s);
  double v = 1.0 / (s.na * s.nb);
  for (double& e : table.p) e = v;
  return table;
}

CorrelationTable pr_box_table() {
  CorrelationTable table({2, 2, 2, 2});
  for (int x = 0; x < 2; ++x)
    for (int y = 0; y < 2; ++y)
      for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b)
          if (((a + b) % 2) == (x & y)) table.at(x, y, a, b) = 0.5;
  return table;
}

double local_bound_by_enumeration(const BellFunctional& f, int cap) {
  const BellScenario& s = f.scenario;
  auto alice = enumerate_strategies(s.nx, s.na, cap);
  auto bob = enumerate_strategies(s.ny, s.nb, cap);
  double best = -std::numeric_limits<double>::infinity();
  for (const auto& sa : alice)
    for (const auto& sb : bob) {
      double v = 0.0;
      for (int x = 0; x < s.nx; ++x)
        for (int y = 0; y < s.ny; ++y)
          v += f.coef(x, y, sa.response(x), sb.response(y));
      best = std::max(best, v);
    }
  return best;
}

CorrelationTable transpose_roles(const CorrelationTable& table) {
  const BellScenario& s = table.scenario;
  CorrelationTable out({s.ny, s.nx, s.nb, s.na});
  for (int x = 0; x < s.nx; ++x)
    for (int y = 0; y < s.ny; ++y)
      for (int a = 0; a < s.na; ++a)
        for (int b = 0; b < s.nb; ++b)
          out.at(y, x, b, a) = table.at(x, y, a, b);
  return out;
}

BellFunctional transpose_roles(const BellFunctional& f) {
  const BellScenario& s = f.scenario;
  BellFunctional out;
  out.scenario = {s.ny, s.nx, s.nb, s.na};
  out.beta.assign(f.beta.size(), 0.0);
  out.local_bound = f.local_bound;
  out.name = f.name + "-transposed";
  for (int x = 0; x < s.nx; ++x)
    for (int y = 0; y < s.ny; ++y)
      for (int a = 0; a < s.na; ++a)
        for (int b = 0; b < s.nb; ++b)
          out.coef(y, x, b, a) = f.coef(x, y, a, b);
  return out;
}

namespace {

// Correlator-form functional from a sign matrix c_xy, beta = (-1)^(a+b) c_xy.
BellFunctional correlator_functional(const BellScenario& s,
                                     const std::vector<std::vector<int>>& c,
                                     double local_bound,
                                     const std::string& name) {
  BellFunctional f;
  f.scenario = s;
  f.beta.assign(size_t(s.nx) * s.ny * 4, 0.0);
  f.local_bound = local_bound;
  f.name = name;
  for (int x = 0; x < s.nx; ++x)
    for (int y = 0; y < s.ny; ++y)
      for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b)
          f.coef(x, y, a, b) = ((a + b) % 2 == 0 ? 1.0 : -1.0) * c[x][y];
  return f;
}

BellFunctional make_chsh() {
  return correlator_functional({2, 2, 2, 2}, {{1, 1}, {1, -1}}, 2.0, "chsh");
}

BellFunctional make_elegant() {
  return correlator_functional(
      {4, 3, 2, 2},
      {{1, 1, 1}, {1, -1, -1}, {-1, 1, -1}, {-1, -1, 1}}, 6.0, "elegant");
}

// Collins-Gisin form: joint terms on outcome (1,1) plus marginal penalties
// -P_A(1|1) - 2 P_B(1|1) - P_B(1|2); marginals are spread uniformly over the
// other party's settings so the functional stays a pure linear form in p.
BellFunctional make_i3322() {
  BellScenario s{3, 3, 2, 2};
  BellFunctional f;
  f.scenario = s;
  f.beta.assign(size_t(s.nx) * s.ny * 4, 0.0);
  f.local_bound = 0.0;
  f.name = "i3322";
  const int joint[3][3] = {{1, 1, 1}, {1, 1, -1}, {1, -1, 0}};
  for (int x = 0; x < 3; ++x)
    for (int y = 0; y < 3; ++y) f.coef(x, y, 0, 0) += joint[x][y];
  for (int y = 0; y < 3; ++y)
    for (int b = 0; b < 2; ++b) f.coef(0, y, 0, b) += -1.0 / 3.0;
  const double bob_marg[3] = {-2.0, -1.0, 0.0};
  for (int y = 0; y < 3; ++y)
    for (int x = 0; x < 3; ++x)
      for (int a = 0; a < 2; ++a) f.coef(x, y, a, 0) += bob_marg[y] / 3.0;
  return f;
}

// (CGLMP_3 - 2)/3: local bound 0, with the constant absorbed uniformly.
BellFunctional make_i2233() {
  BellScenario s{2, 2, 3, 3};
  BellFunctional f;
  f.scenario = s;
  f.beta.assign(size_t(s.nx) * s.ny * 9, 0.0);
  f.local_bound = 0.0;
  f.name = "i2233";
  auto add_a_eq_b_plus = [&](int x, int y, int shift, double w) {
    for (int b = 0; b < 3; ++b) f.coef(x, y, (b + shift + 3) % 3, b) += w;
  };
  // P(A1=B1) + P(B1=A2+1) + P(A2=B2) + P(B2=A1)
  add_a_eq_b_plus(0, 0, 0, 1.0);
  add_a_eq_b_plus(1, 0, -1, 1.0);  // b = a+1  <=>  a = b-1
  add_a_eq_b_plus(1, 1, 0, 1.0);
  add_a_eq_b_plus(0, 1, 0, 1.0);
  // -[P(A1=B1-1) + P(B1=A2) + P(A2=B2-1) + P(B2=A1-1)]
  add_a_eq_b_plus(0, 0, -1, -1.0);
  add_a_eq_b_plus(1, 0, 0, -1.0);
  add_a_eq_b_plus(1, 1, -1, -1.0);
  add_a_eq_b_plus(0, 1, 1, -1.0);  // b = a-1  <=>  a = b+1
  for (double& v : f.beta) v = (v - 0.5) / 3.0;
  return f;
}

// Three-setting three-outcome CHSH generalization: win condition
// b - a = x*y (mod 3) with 1-based settings, scored +1 for a win and -1 for
// b - a = x*y + 1. Maximal quantum value reached by mutually unbiased qutrit
// measurements on a maximally entangled pair.
BellFunctional make_i3plus() {
  BellScenario s{3, 3, 3, 3};
  BellFunctional f;
  f.scenario = s;
  f.beta.assign(size_t(s.nx) * s.ny * 9, 0.0);
  f.name = "i3plus";
  for (int x = 0; x < 3; ++x)
    for (int y = 0; y < 3; ++y) {
      int target = ((x + 1) * (y + 1)) % 3;
      for (int a = 0; a < 3; ++a) {
        f.coef(x, y, a, (a + target) % 3) += 1.0;
        f.coef(x, y, a, (a + target + 1) % 3) += -1.0;
      }
    }
  f.local_bound = 6.0;
  return f;
}

}  // namespace

BellFunctional builtin_functional(const std::string& name) {
  if (name == "chsh") return make_chsh();
  if (name == "elegant") return make_elegant();
  if (name == "i3322") return make_i3322();
  if (name == "i2233") return make_i2233();
  if (name == "i3plus") return make_i3plus();
  throw Error(ErrorCode::kInvalidArgument, "unknown functional: " + name);
}

}  // namespace amm
