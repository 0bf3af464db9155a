#include <cmath>
#include <random>

#include "doctest.h"
#include "quantum.hpp"
#include "testutil.hpp"

using namespace amm;

TEST_CASE("factory states and measurements are valid") {
  phi_plus(2).validate();
  phi_plus(3).validate();
  maximally_mixed(2, 2).validate();
  mub_pair().validate();
  mub_triple().validate();
  tetrahedron().validate();
  chsh_optimal_pair().validate();
  elegant_bob().validate();
  mub_assemblage(3, 3).validate();
  trine_povm().validate();
}

TEST_CASE("qutrit bases are mutually unbiased") {
  MeasurementAssemblage mubs = mub_assemblage(3, 4);
  for (int k = 0; k < 4; ++k)
    for (int l = k + 1; l < 4; ++l)
      for (const CMat& p : mubs.povms[k].elements)
        for (const CMat& q : mubs.povms[l].elements) {
          double overlap = (p * q).trace().real();
          CHECK(overlap == doctest::Approx(1.0 / 3.0).epsilon(1e-10));
        }
}

TEST_CASE("born table on the chsh-optimal realization") {
  CorrelationTable t =
      born_table(phi_plus(2), mub_pair(), chsh_optimal_pair());
  CHECK(check_table(t).ok());
  CHECK(evaluate(builtin_functional("chsh"), t) ==
        doctest::Approx(2.0 * std::sqrt(2.0)).epsilon(1e-9));
  // the singlet-style X/Z table at (1,1)
  CHECK(correlator(t, 0, 0) == doctest::Approx(1.0 / std::sqrt(2.0)));
}

TEST_CASE("born table of the elegant-optimal realization hits 4 sqrt 3") {
  CorrelationTable t = born_table(phi_plus(2), tetrahedron(), elegant_bob());
  CHECK(evaluate(builtin_functional("elegant"), t) ==
        doctest::Approx(4.0 * std::sqrt(3.0)).epsilon(1e-9));
}

TEST_CASE("born table factorizes on product states") {
  std::mt19937_64 rng(5);
  DensityMatrix rho = product_state(testutil::random_density(2, rng).mat,
                                    testutil::random_density(2, rng).mat);
  CorrelationTable t = born_table(rho, mub_pair(), mub_triple());
  for (int x = 0; x < 2; ++x)
    for (int y = 0; y < 3; ++y)
      for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b) {
          double pa = t.marginal_a(x, a), pb = t.marginal_b(y, b);
          CHECK(t.at(x, y, a, b) == doctest::Approx(pa * pb).epsilon(1e-9));
        }
}

TEST_CASE("maximally mixed state gives the uniform table") {
  CorrelationTable t =
      born_table(maximally_mixed(2, 2), mub_pair(), mub_pair());
  for (double p : t.p) CHECK(p == doctest::Approx(0.25));
}

TEST_CASE("steering the maximally entangled state transposes projectors") {
  StateAssemblage asm_ = steer(phi_plus(2), mub_pair());
  CHECK(validate_assemblage(asm_).clean());
  for (int x = 0; x < 2; ++x)
    for (int a = 0; a < 2; ++a) {
      CMat expected =
          mub_pair().povms[x].elements[a].transpose() / 2.0;
      CHECK((asm_.at(x, a) - expected).cwiseAbs().maxCoeff() < 1e-12);
    }
}

TEST_CASE("steer marginals agree with the born table") {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 5; ++trial) {
    DensityMatrix rho{testutil::random_density(4, rng).mat, 2, 2};
    MeasurementAssemblage alice = testutil::random_projective_pair(rng);
    MeasurementAssemblage bob = testutil::random_projective_pair(rng);
    StateAssemblage asm_ = steer(rho, alice);
    CorrelationTable t = born_table(rho, alice, bob);
    for (int x = 0; x < 2; ++x)
      for (int a = 0; a < 2; ++a)
        for (int y = 0; y < 2; ++y) {
          double marg = 0.0;
          for (int b = 0; b < 2; ++b) marg += t.at(x, y, a, b);
          CHECK(marg == doctest::Approx(asm_.at(x, a).trace().real())
                            .epsilon(1e-10));
        }
  }
}

TEST_CASE("steering with the trivial measurement returns the reduced state") {
  DensityMatrix rho = phi_plus(2);
  Povm trivial;
  trivial.elements.push_back(identity(2));
  StateAssemblage asm_ = steer(rho, MeasurementAssemblage{{trivial}});
  CHECK(asm_.n_settings() == 1);
  CHECK(asm_.n_outcomes() == 1);
  CHECK((asm_.at(0, 0) - identity(2) / 2.0).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("validate_assemblage flags constructed defects") {
  StateAssemblage asm_ = steer(phi_plus(2), mub_pair());
  CHECK(validate_assemblage(asm_).clean());

  StateAssemblage signaling = asm_;
  signaling.states[1][0] = identity(2) * 0.7;
  signaling.states[1][1] = identity(2) * 0.3;
  AssemblageReport r = validate_assemblage(signaling);
  CHECK_FALSE(r.clean());

  StateAssemblage negative = asm_;
  negative.states[0][0] -= 1e-3 * identity(2);
  negative.states[0][1] += 1e-3 * identity(2);
  AssemblageReport r2 = validate_assemblage(negative, 1e-6);
  bool flagged_psd = false;
  for (const auto& issue : r2.issues)
    if (issue.what.find("PSD") != std::string::npos) flagged_psd = true;
  CHECK(flagged_psd);
}

TEST_CASE("neumark dilation of a projective pair keeps probabilities") {
  MeasurementAssemblage dilated = neumark_dilate(mub_pair());
  CHECK(dilated.dim() == 2);
  CHECK(dilated.is_projective(1e-9));
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 10; ++trial) {
    CMat rho = testutil::random_density(2, rng).mat;
    for (int x = 0; x < 2; ++x)
      for (int a = 0; a < 2; ++a) {
        double orig =
            (mub_pair().povms[x].elements[a] * rho).trace().real();
        double dil = (dilated.povms[x].elements[a] * rho).trace().real();
        CHECK(dil == doctest::Approx(orig).epsilon(1e-9));
      }
  }
}

TEST_CASE("neumark dilation of the trine POVM lands on C3") {
  Povm trine = trine_povm();
  MeasurementAssemblage dilated = neumark_dilate({{trine}});
  CHECK(dilated.dim() == 3);
  CHECK(dilated.is_projective(1e-9));
  std::mt19937_64 rng(13);
  for (int trial = 0; trial < 20; ++trial) {
    CMat rho2 = testutil::random_density(2, rng).mat;
    CMat rho3 = CMat::Zero(3, 3);
    rho3.topLeftCorner(2, 2) = rho2;
    for (int k = 0; k < 3; ++k) {
      double orig = (trine.elements[k] * rho2).trace().real();
      double dil = (dilated.povms[0].elements[k] * rho3).trace().real();
      CHECK(dil == doctest::Approx(orig).epsilon(1e-9));
    }
  }
}

TEST_CASE("joint dilation embeds two qubit POVMs in one space") {
  // two 3-outcome qubit POVMs dilate into the same C^3
  Povm a = trine_povm();
  Povm b;
  CMat rot(2, 2);
  double c = std::cos(0.3), s = std::sin(0.3);
  rot << c, -s, s, c;
  for (const CMat& e : a.elements) b.elements.push_back(rot * e * rot.adjoint());
  MeasurementAssemblage joint{{a, b}};
  MeasurementAssemblage dilated = neumark_dilate(joint);
  CHECK(dilated.dim() == 3);
  CHECK(dilated.is_projective(1e-9));
  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 10; ++trial) {
    CMat rho2 = testutil::random_density(2, rng).mat;
    CMat rho3 = CMat::Zero(3, 3);
    rho3.topLeftCorner(2, 2) = rho2;
    for (int x = 0; x < 2; ++x)
      for (int k = 0; k < 3; ++k) {
        double orig = (joint.povms[x].elements[k] * rho2).trace().real();
        double dil = (dilated.povms[x].elements[k] * rho3).trace().real();
        CHECK(dil == doctest::Approx(orig).epsilon(1e-9));
      }
  }
}

TEST_CASE("dilated elements are exact projectors with orthogonal partners") {
  std::mt19937_64 rng(19);
  for (int trial = 0; trial < 5; ++trial) {
    MeasurementAssemblage noisy = testutil::random_povm_assemblage(2, 2, 3, rng);
    MeasurementAssemblage dilated = neumark_dilate(noisy);
    for (const Povm& p : dilated.povms) {
      for (size_t i = 0; i < p.elements.size(); ++i) {
        const CMat& e = p.elements[i];
        CHECK((e * e - e).cwiseAbs().maxCoeff() < 1e-9);
        for (size_t j = i + 1; j < p.elements.size(); ++j)
          CHECK((e * p.elements[j]).cwiseAbs().maxCoeff() < 1e-9);
      }
    }
  }
}
