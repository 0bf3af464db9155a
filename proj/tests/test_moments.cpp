#include <cmath>
#include <random>

#include "doctest.h"
#include "moments.hpp"
#include "testutil.hpp"

using namespace amm;

TEST_CASE("word reduction: idempotence, orthogonality, identity removal") {
  WordAlgebra alg{2, 1};  // two settings, binary outcomes
  Word out;
  // identity symbols vanish
  CHECK(alg.reduce({0, 0, 0}, out));
  CHECK(out.empty());
  // projector idempotence
  CHECK(alg.reduce({1, 1, 1}, out));
  CHECK(out == Word{1});
  // different settings do not reduce
  CHECK(alg.reduce({1, 2, 1}, out));
  CHECK(out == Word{1, 2, 1});
  // same setting, different outcome annihilates
  WordAlgebra tern{2, 2};  // two settings, 2 kept outcomes each
  CHECK_FALSE(tern.reduce({1, 2}, out));
  // cascade: collapse then annihilate
  CHECK_FALSE(tern.reduce({1, 0, 1, 2}, out));
}

TEST_CASE("word canonicalization is idempotent") {
  WordAlgebra alg{3, 2};
  std::mt19937_64 rng(23);
  for (int trial = 0; trial < 200; ++trial) {
    Word w(1 + rng() % 6);
    for (int& s : w) s = int(rng() % alg.n_ops());
    Word once, twice;
    if (!alg.reduce(w, once)) continue;
    CHECK(alg.reduce(once, twice));
    CHECK(once == twice);
  }
}

TEST_CASE("chsh level-1 layout matches the explicit 3x3 pattern") {
  MomentLayout layout = build_layout({2, 2, 2, 2}, 1);
  REQUIRE(layout.dim == 3);
  CHECK(layout.n_free == 1);

  CHECK(layout.at(0, 0).kind == EntryKind::kTrace);
  // row/col 1 is B_{1|1}, row/col 2 is B_{1|2}
  for (auto [r, c] : {std::pair{0, 1}, {1, 0}, {1, 1}}) {
    CHECK(layout.at(r, c).kind == EntryKind::kObserved);
    CHECK(layout.at(r, c).y == 0);
    CHECK(layout.at(r, c).b == 0);
  }
  for (auto [r, c] : {std::pair{0, 2}, {2, 0}, {2, 2}}) {
    CHECK(layout.at(r, c).kind == EntryKind::kObserved);
    CHECK(layout.at(r, c).y == 1);
    CHECK(layout.at(r, c).b == 0);
  }
  CHECK(layout.at(1, 2).kind == EntryKind::kFree);
  CHECK(layout.at(2, 1).kind == EntryKind::kFree);
  CHECK(layout.at(1, 2).u_index == layout.at(2, 1).u_index);
}

TEST_CASE("block dimensions follow (1 + |Y|(|B|-1))^l") {
  struct Row {
    BellScenario s;
    int level;
    int dim;
    int n_blocks;
  };
  const Row rows[] = {
      {{2, 2, 2, 2}, 1, 3, 4},   {{2, 2, 2, 2}, 2, 9, 4},
      {{2, 2, 2, 2}, 3, 27, 4},  {{2, 2, 2, 2}, 4, 81, 4},
      {{3, 3, 2, 2}, 1, 4, 6},   {{3, 3, 2, 2}, 2, 16, 6},
      {{2, 2, 3, 3}, 1, 5, 6},   {{2, 2, 3, 3}, 2, 25, 6},
      {{3, 3, 3, 3}, 1, 7, 9},   {{3, 3, 3, 3}, 2, 49, 9},
  };
  for (const Row& row : rows) {
    MomentLayout layout = build_layout(row.s, row.level);
    BlockStats stats = block_stats(layout);
    CHECK(stats.block_dim == row.dim);
    CHECK(stats.n_blocks == row.n_blocks);
    int expected = 1;
    for (int i = 0; i < row.level; ++i)
      expected *= 1 + row.s.ny * (row.s.nb - 1);
    CHECK(stats.block_dim == expected);
  }
}

TEST_CASE("extra generating words extend the block") {
  MomentLayout base = build_layout({2, 2, 2, 2}, 1);
  MomentLayout ext = build_layout({2, 2, 2, 2}, 1, {{1, 2}, {2, 1}});
  CHECK(ext.dim == base.dim + 2);
  // the appended rows create longer products
  CHECK(ext.n_free > base.n_free);
}

TEST_CASE("evaluate_block: numeric agreement with the entry classes") {
  std::mt19937_64 rng(29);
  BellScenario s{2, 3, 2, 2};
  for (int trial = 0; trial < 5; ++trial) {
    DensityMatrix rho = testutil::random_bipartite_density(2, 3, rng);
    MeasurementAssemblage alice = testutil::random_projective_pair(rng);
    MeasurementAssemblage bob =
        testutil::random_projective_assemblage(3, 3, rng);
    // collapse bob's 3 outcomes into 2 per setting
    for (Povm& p : bob.povms) {
      p.elements[1] += p.elements[2];
      p.elements.pop_back();
    }
    CorrelationTable table = born_table(rho, alice, bob);
    StateAssemblage asm_ = steer(rho, alice);

    for (int level : {1, 2}) {
      MomentLayout layout = build_layout(s, level);
      for (int x = 0; x < 2; ++x)
        for (int a = 0; a < 2; ++a) {
          CMat block = evaluate_block(layout, asm_, bob, a, x);
          CHECK(is_hermitian(block, 1e-10));
          CHECK(is_psd(block, 1e-9));
          for (int r = 0; r < layout.dim; ++r)
            for (int c = 0; c < layout.dim; ++c) {
              const EntryClass& e = layout.at(r, c);
              if (e.kind == EntryKind::kTrace)
                CHECK(block(r, c).real() ==
                      doctest::Approx(asm_.at(x, a).trace().real())
                          .epsilon(1e-10));
              if (e.kind == EntryKind::kObserved)
                CHECK(block(r, c).real() ==
                      doctest::Approx(table.at(x, e.y, a, e.b))
                          .epsilon(1e-10));
              if (e.kind == EntryKind::kZero)
                CHECK(std::abs(block(r, c)) < 1e-10);
              // Hermitian pairing of the numeric matrix
              CHECK(std::abs(block(r, c) - std::conj(block(c, r))) < 1e-10);
            }
        }
    }
  }
}

TEST_CASE("evaluate_block of the zero state vanishes") {
  BellScenario s{1, 2, 1, 2};
  MomentLayout layout = build_layout(s, 1);
  StateAssemblage z;
  z.states = {{CMat::Zero(2, 2)}};
  MeasurementAssemblage bob = mub_pair();
  CMat block = evaluate_block(layout, z, bob, 0, 0);
  CHECK(block.cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("evaluate_block diagonal on the chsh-optimal realization") {
  // Alice X/Z on the maximally entangled pair, Bob at the chsh-optimal
  // angles; diagonal of block (a=1, x=1) carries (P(1|1), P(11|11), P(11|12))
  DensityMatrix rho = phi_plus(2);
  MeasurementAssemblage alice = mub_pair();
  MeasurementAssemblage bob = chsh_optimal_pair();
  StateAssemblage asm_ = steer(rho, alice);
  CorrelationTable table = born_table(rho, alice, bob);
  MomentLayout layout = build_layout({2, 2, 2, 2}, 1);
  CMat block = evaluate_block(layout, asm_, bob, 0, 0);
  CHECK(block(0, 0).real() == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(block(1, 1).real() ==
        doctest::Approx((2.0 + std::sqrt(2.0)) / 8.0).epsilon(1e-12));
  CHECK(block(2, 2).real() ==
        doctest::Approx((2.0 + std::sqrt(2.0)) / 8.0).epsilon(1e-12));
  CHECK(block(1, 1).real() == doctest::Approx(table.at(0, 0, 0, 0)));
  CHECK(block(2, 2).real() == doctest::Approx(table.at(0, 1, 0, 0)));
}

TEST_CASE("strict mode rejects non-projective measurements") {
  BellScenario s{1, 1, 1, 3};
  MomentLayout layout = build_layout(s, 1);
  StateAssemblage asm_;
  asm_.states = {{identity(2) / 2.0}};
  MeasurementAssemblage bob{{trine_povm()}};
  CHECK_THROWS_AS(evaluate_block(layout, asm_, bob, 0, 0, true), Error);
  CMat loose = evaluate_block(layout, asm_, bob, 0, 0, false);
  CHECK(is_psd(loose, 1e-9));
}

TEST_CASE("level cap guards the dimension") {
  CHECK_THROWS_AS(build_layout({2, 2, 2, 2}, 0), Error);
  CHECK_THROWS_AS(build_layout({8, 8, 14, 14}, 3), Error);
}
