#include "moments.hpp"

#include <cmath>
#include <unordered_map>

namespace amm {

bool WordAlgebra::reduce(const Word& in, Word& out) const {
  out.clear();
  for (int s : in) {
    if (s == 0) continue;
    if (!out.empty() && out.back() == s) continue;  // idempotence
    if (!out.empty() && setting_of(out.back()) == setting_of(s))
      return false;  // orthogonal outcomes of one setting
    out.push_back(s);
  }
  return true;
}

namespace {

uint64_t encode(const Word& w) {
  uint64_t key = 0;
  for (int s : w) key = (key << 4) | uint64_t(s + 1);
  return key;
}

}  // namespace

MomentLayout build_layout(const BellScenario& scenario, int level,
                          const std::vector<Word>& extra_words) {
  scenario.validate();
  if (level < 1)
    throw Error(ErrorCode::kInvalidArgument, "level must be >= 1");
  MomentLayout layout;
  layout.scenario = scenario;
  layout.level = level;
  layout.algebra = {scenario.ny, scenario.nb - 1};
  const int n_ops = layout.algebra.n_ops();
  size_t max_len = size_t(level);
  for (const Word& w : extra_words) max_len = std::max(max_len, w.size());
  if (n_ops > 14 || 2 * max_len > kMaxLevelWords)
    throw Error(ErrorCode::kCapExceeded, "layout level/alphabet too large");

  double dim_d = std::pow(double(n_ops), double(level));
  if (dim_d + extra_words.size() > 4096)
    throw Error(ErrorCode::kCapExceeded, "moment matrix dimension too large");

  Word tuple(level, 0);
  while (true) {
    layout.row_words.push_back(tuple);
    int i = level - 1;
    for (; i >= 0; --i) {
      if (++tuple[i] < n_ops) break;
      tuple[i] = 0;
    }
    if (i < 0) break;
  }
  for (const Word& w : extra_words) {
    for (int s : w)
      if (s < 0 || s >= n_ops)
        throw Error(ErrorCode::kInvalidArgument, "extra word symbol range");
    layout.row_words.push_back(w);
  }
  layout.dim = int(layout.row_words.size());

  layout.entries.assign(size_t(layout.dim) * layout.dim, {});
  std::unordered_map<uint64_t, int> u_index;
  Word joined, reduced, reversed;
  for (int r = 0; r < layout.dim; ++r)
    for (int c = r; c < layout.dim; ++c) {
      joined.assign(layout.row_words[c].rbegin(), layout.row_words[c].rend());
      joined.insert(joined.end(), layout.row_words[r].begin(),
                    layout.row_words[r].end());
      EntryClass entry;
      if (!layout.algebra.reduce(joined, reduced)) {
        entry.kind = EntryKind::kZero;
      } else if (reduced.empty()) {
        entry.kind = EntryKind::kTrace;
      } else if (reduced.size() == 1) {
        entry.kind = EntryKind::kObserved;
        entry.y = layout.algebra.setting_of(reduced[0]);
        entry.b = layout.algebra.outcome_of(reduced[0]);
      } else {
        entry.kind = EntryKind::kFree;
        reversed.assign(reduced.rbegin(), reduced.rend());
        uint64_t key = std::min(encode(reduced), encode(reversed));
        auto [it, inserted] = u_index.try_emplace(key, layout.n_free);
        if (inserted) {
          layout.free_words.push_back(
              encode(reduced) <= encode(reversed) ? reduced : reversed);
          ++layout.n_free;
        }
        entry.u_index = it->second;
      }
      layout.entries[size_t(r) * layout.dim + c] = entry;
      layout.entries[size_t(c) * layout.dim + r] = entry;
    }
  return layout;
}

CMat evaluate_block(const MomentLayout& layout, const StateAssemblage& asm_,
                    const MeasurementAssemblage& bob, int a, int x,
                    bool strict) {
  if (bob.n_settings() != layout.scenario.ny ||
      bob.n_outcomes() != layout.scenario.nb)
    throw Error(ErrorCode::kDimensionMismatch,
                "Bob assemblage does not match the layout scenario");
  if (strict && !bob.is_projective())
    throw Error(ErrorCode::kInvalidArgument,
                "evaluate_block: Bob measurements not projective");
  if (x < 0 || x >= asm_.n_settings() || a < 0 || a >= asm_.n_outcomes())
    throw Error(ErrorCode::kInvalidArgument, "evaluate_block: (a,x) range");
  const CMat& rho = asm_.at(x, a);
  const int d = int(rho.rows());

  auto op = [&](int symbol) -> CMat {
    if (symbol == 0) return identity(d);
    return bob.povms[layout.algebra.setting_of(symbol)]
        .elements[layout.algebra.outcome_of(symbol)];
  };
  std::vector<CMat> products;
  products.reserve(layout.row_words.size());
  for (const Word& w : layout.row_words) {
    CMat prod = identity(d);
    for (int s : w) prod = prod * op(s);
    products.push_back(prod);
  }
  CMat block(layout.dim, layout.dim);
  for (int r = 0; r < layout.dim; ++r)
    for (int c = 0; c < layout.dim; ++c)
      block(r, c) = (products[c].adjoint() * products[r] * rho).trace();
  return block;
}

BlockStats block_stats(const MomentLayout& layout) {
  return {layout.scenario.na * layout.scenario.nx, layout.dim, layout.n_free};
}

}  // namespace amm
