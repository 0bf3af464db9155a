#pragma once

// Shared random generators for the test suites.

#include <random>

#include "quantum.hpp"

namespace amm::testutil {

inline CMat random_complex(int rows, int cols, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  CMat m(rows, cols);
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) m(i, j) = Complex(g(rng), g(rng));
  return m;
}

inline DensityMatrix random_density(int d, std::mt19937_64& rng) {
  CMat m = random_complex(d, d, rng);
  CMat rho = m * m.adjoint();
  rho /= rho.trace().real();
  return {rho, 0, 0};
}

inline DensityMatrix random_bipartite_density(int da, int db,
                                              std::mt19937_64& rng) {
  DensityMatrix rho = random_density(da * db, rng);
  return {rho.mat, da, db};
}

// Haar-ish random unitary from the QR of a Ginibre matrix.
inline CMat random_unitary(int d, std::mt19937_64& rng) {
  CMat m = random_complex(d, d, rng);
  Eigen::HouseholderQR<CMat> qr(m);
  CMat q = qr.householderQ();
  return q;
}

// Random rank-1 projective binary qubit pair.
inline MeasurementAssemblage random_projective_pair(std::mt19937_64& rng) {
  MeasurementAssemblage out;
  for (int x = 0; x < 2; ++x) {
    CMat u = random_unitary(2, rng);
    Povm p;
    p.elements.push_back(u.col(0) * u.col(0).adjoint());
    p.elements.push_back(u.col(1) * u.col(1).adjoint());
    out.povms.push_back(std::move(p));
  }
  return out;
}

inline MeasurementAssemblage random_projective_assemblage(
    int d, int n_settings, std::mt19937_64& rng) {
  MeasurementAssemblage out;
  for (int x = 0; x < n_settings; ++x) {
    CMat u = random_unitary(d, rng);
    Povm p;
    for (int a = 0; a < d; ++a)
      p.elements.push_back(u.col(a) * u.col(a).adjoint());
    out.povms.push_back(std::move(p));
  }
  return out;
}

// Random full-rank POVMs: normalized squares of Ginibre matrices.
inline MeasurementAssemblage random_povm_assemblage(int d, int n_settings,
                                                    int n_outcomes,
                                                    std::mt19937_64& rng) {
  MeasurementAssemblage out;
  for (int x = 0; x < n_settings; ++x) {
    std::vector<CMat> raw;
    CMat sum = CMat::Zero(d, d);
    for (int a = 0; a < n_outcomes; ++a) {
      CMat m = random_complex(d, d, rng);
      raw.push_back(m * m.adjoint());
      sum += raw.back();
    }
    PinvSqrt norm = pinv_sqrt(sum);
    Povm p;
    for (int a = 0; a < n_outcomes; ++a)
      p.elements.push_back(norm.result * raw[a] * norm.result);
    out.povms.push_back(std::move(p));
  }
  return out;
}

}  // namespace amm::testutil
