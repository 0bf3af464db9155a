#pragma once

// Symbolic structure of one assemblage moment matrix block: level-l operator
// words over Bob's projectors, canonical reduction under the projector
// algebra, and the split of each entry into observed probabilities versus
// free moments.

#include <cstdint>
#include <vector>

#include "quantum.hpp"
#include "scenario.hpp"

namespace amm {

// Word symbols: 0 is the identity, k >= 1 is the projector with
// setting (k-1) / (nb-1) and outcome (k-1) % (nb-1). The last outcome of
// every setting is excluded from the operator list.
using Word = std::vector<int>;

struct WordAlgebra {
  int n_settings = 0;
  int n_kept_outcomes = 0;  // nb - 1

  int n_ops() const { return 1 + n_settings * n_kept_outcomes; }
  int setting_of(int symbol) const { return (symbol - 1) / n_kept_outcomes; }
  int outcome_of(int symbol) const { return (symbol - 1) % n_kept_outcomes; }

  // Canonical form: identities dropped, adjacent equal projectors collapsed,
  // adjacent same-setting different-outcome projectors annihilate (returns
  // false). Idempotent.
  bool reduce(const Word& in, Word& out) const;
};

enum class EntryKind : uint8_t { kTrace, kObserved, kZero, kFree };

struct EntryClass {
  EntryKind kind = EntryKind::kZero;
  int y = -1;       // observed entries only
  int b = -1;
  int u_index = -1; // free entries only
};

struct MomentLayout {
  BellScenario scenario;
  int level = 0;
  int dim = 0;  // n_ops^level + extra words
  WordAlgebra algebra;
  std::vector<Word> row_words;     // index tuples, duplicates included
  std::vector<EntryClass> entries; // dim x dim row-major
  int n_free = 0;
  std::vector<Word> free_words;    // canonical word per u index

  const EntryClass& at(int r, int c) const { return entries[r * dim + c]; }
};

inline constexpr int kMaxLevelWords = 16;  // canonical keys pack 4 bits/symbol

// Enumerates all n_ops^level index tuples (lexicographic, identity first) and
// classifies every entry by canonically reducing reverse(col) ++ row. Free
// moments are keyed by the lexicographic minimum of the reduced word and its
// reversal, so Hermitian partners share one real variable. Extra words extend
// the generating list for intermediate levels.
MomentLayout build_layout(const BellScenario& scenario, int level,
                          const std::vector<Word>& extra_words = {});

// Numeric moment matrix of rho_{a|x} under Bob's measurements: entry (r,c) is
// tr(rho W_c^dagger W_r). Throws for non-projective Bob when strict is set.
CMat evaluate_block(const MomentLayout& layout, const StateAssemblage& asm_,
                    const MeasurementAssemblage& bob, int a, int x,
                    bool strict = false);

struct BlockStats {
  int n_blocks = 0;        // |A| |X|
  int block_dim = 0;       // (1 + |Y|(|B|-1))^level
  int n_free_per_block = 0;
};

BlockStats block_stats(const MomentLayout& layout);

}  // namespace amm
