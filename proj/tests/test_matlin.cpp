#include <random>

#include "doctest.h"
#include "matlin.hpp"

using namespace amm;

namespace {

CMat pauli_x() {
  CMat m(2, 2);
  m << 0, 1, 1, 0;
  return m;
}

CMat pauli_z() {
  CMat m(2, 2);
  m << 1, 0, 0, -1;
  return m;
}

CMat random_matrix(int rows, int cols, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  CMat m(rows, cols);
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) m(i, j) = Complex(g(rng), g(rng));
  return m;
}

CMat random_hermitian(int d, std::mt19937_64& rng) {
  CMat m = random_matrix(d, d, rng);
  return (m + m.adjoint()) / 2.0;
}

CMat random_psd(int d, std::mt19937_64& rng, int rank = -1) {
  if (rank < 0) rank = d;
  CMat m = random_matrix(d, rank, rng);
  return m * m.adjoint();
}

}  // namespace

TEST_CASE("kron identity and basis projectors") {
  CMat i2 = identity(2);
  CHECK((kron(i2, i2) - identity(4)).cwiseAbs().maxCoeff() == 0.0);

  CMat d10(2, 2), d01(2, 2);
  d10 << 1, 0, 0, 0;
  d01 << 0, 0, 0, 1;
  CMat out = kron(d10, d01);
  CMat expected = CMat::Zero(4, 4);
  expected(1, 1) = 1;
  CHECK((out - expected).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("kron matches the direct index formula") {
  // hand-expanded sigma_x (x) sigma_z
  CMat out = kron(pauli_x(), pauli_z());
  CMat expected(4, 4);
  expected << 0, 0, 1, 0,
              0, 0, 0, -1,
              1, 0, 0, 0,
              0, -1, 0, 0;
  CHECK((out - expected).cwiseAbs().maxCoeff() == 0.0);

  std::mt19937_64 rng(7);
  CMat a = random_matrix(2, 3, rng), b = random_matrix(3, 2, rng);
  CMat k = kron(a, b);
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 3; ++j)
      for (int p = 0; p < 3; ++p)
        for (int q = 0; q < 2; ++q)
          CHECK(std::abs(k(i * 3 + p, j * 2 + q) - a(i, j) * b(p, q)) <
                1e-14);
}

TEST_CASE("partial trace of a product state") {
  std::mt19937_64 rng(11);
  CMat rho = random_psd(2, rng);
  CMat tau = random_psd(3, rng);
  CMat prod = kron(rho, tau);
  CMat over_first = partial_trace(prod, 2, 3, Subsystem::kFirst);
  CHECK((over_first - rho.trace() * tau).cwiseAbs().maxCoeff() < 1e-12);
  CMat over_second = partial_trace(prod, 2, 3, Subsystem::kSecond);
  CHECK((over_second - tau.trace() * rho).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("partial trace of the maximally entangled state is maximally mixed") {
  Eigen::VectorXcd psi = Eigen::VectorXcd::Zero(4);
  psi(0) = psi(3) = 1.0 / std::sqrt(2.0);
  CMat phi = psi * psi.adjoint();
  CMat red = partial_trace(phi, 2, 2, Subsystem::kFirst);
  CHECK((red - identity(2) / 2.0).cwiseAbs().maxCoeff() < 1e-14);
}

TEST_CASE("partial trace: brute-force oracle, trace preservation, PSD") {
  std::mt19937_64 rng(13);
  for (int trial = 0; trial < 20; ++trial) {
    CMat m = random_psd(6, rng);
    CMat got = partial_trace(m, 2, 3, Subsystem::kSecond);
    // independent index-sum oracle
    CMat want = CMat::Zero(2, 2);
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j)
        for (int k = 0; k < 3; ++k) want(i, j) += m(i * 3 + k, j * 3 + k);
    CHECK((got - want).cwiseAbs().maxCoeff() < 1e-12);
    CHECK(std::abs(got.trace().real() - m.trace().real()) < 1e-12);
    CHECK(is_psd(got, 1e-12));
  }
}

TEST_CASE("partial trace is linear") {
  std::mt19937_64 rng(17);
  CMat a = random_hermitian(6, rng), b = random_hermitian(6, rng);
  CMat lhs = partial_trace(a + 2.5 * b, 3, 2, Subsystem::kFirst);
  CMat rhs = partial_trace(a, 3, 2, Subsystem::kFirst) +
             2.5 * partial_trace(b, 3, 2, Subsystem::kFirst);
  CHECK((lhs - rhs).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("partial trace rejects bad dimensions") {
  CHECK_THROWS_AS(partial_trace(identity(5), 2, 3, Subsystem::kFirst), Error);
}

TEST_CASE("eig_hermitian: diagonal and Pauli spectra") {
  CMat d = CMat::Zero(3, 3);
  d(0, 0) = 3;
  d(1, 1) = 1;
  d(2, 2) = 2;
  EigResult eig = eig_hermitian(d);
  CHECK(eig.eigenvalues(0) == doctest::Approx(1.0));
  CHECK(eig.eigenvalues(1) == doctest::Approx(2.0));
  CHECK(eig.eigenvalues(2) == doctest::Approx(3.0));

  EigResult x = eig_hermitian(pauli_x());
  CHECK(x.eigenvalues(0) == doctest::Approx(-1.0));
  CHECK(x.eigenvalues(1) == doctest::Approx(1.0));
}

TEST_CASE("eig_hermitian: reconstruction and unitarity on random input") {
  std::mt19937_64 rng(19);
  for (int trial = 0; trial < 10; ++trial) {
    int d = 2 + int(rng() % 7);
    CMat m = random_hermitian(d, rng);
    EigResult eig = eig_hermitian(m);
    CMat recon = eig.eigenvectors *
                 eig.eigenvalues.cast<Complex>().asDiagonal() *
                 eig.eigenvectors.adjoint();
    double scale = std::max(1.0, eig.eigenvalues.cwiseAbs().maxCoeff());
    CHECK((recon - m).cwiseAbs().maxCoeff() <= 1e-10 * d * scale);
    CHECK((eig.eigenvectors.adjoint() * eig.eigenvectors - identity(d))
              .cwiseAbs()
              .maxCoeff() < 1e-12);
  }
}

TEST_CASE("eig_hermitian: PSD-constructed spectra stay nonnegative") {
  std::mt19937_64 rng(23);
  for (int trial = 0; trial < 10; ++trial) {
    CMat m = random_psd(5, rng);
    CHECK(eig_hermitian(m).eigenvalues.minCoeff() >= -1e-10);
  }
}

TEST_CASE("pinv_sqrt: scalar multiple of identity") {
  PinvSqrt out = pinv_sqrt(identity(3) / 2.0);
  CHECK((out.result - std::sqrt(2.0) * identity(3)).cwiseAbs().maxCoeff() <
        1e-12);
  CHECK((out.range_projector - identity(3)).cwiseAbs().maxCoeff() < 1e-12);
  CHECK(out.rank == 3);
}

TEST_CASE("pinv_sqrt: rank-deficient diagonal") {
  CMat m = CMat::Zero(2, 2);
  m(0, 0) = 4.0;
  PinvSqrt out = pinv_sqrt(m, 1e-9);
  CHECK(out.result(0, 0).real() == doctest::Approx(0.5));
  CHECK(std::abs(out.result(1, 1)) < 1e-15);
  CHECK(out.range_projector(0, 0).real() == doctest::Approx(1.0));
  CHECK(std::abs(out.range_projector(1, 1)) < 1e-15);
  CHECK(out.rank == 1);
}

TEST_CASE("pinv_sqrt: defining identity and commutation on random rank-2") {
  std::mt19937_64 rng(29);
  for (int trial = 0; trial < 10; ++trial) {
    CMat m = random_psd(3, rng, 2);
    PinvSqrt out = pinv_sqrt(m);
    CHECK((out.result * m * out.result - out.range_projector)
              .cwiseAbs()
              .maxCoeff() < 1e-9);
    CMat comm = out.result * m - m * out.result;
    CHECK(comm.norm() <= 1e-9 * std::max(1.0, m.norm()));
  }
}

TEST_CASE("pinv_sqrt rejects non-PSD input") {
  CMat m = CMat::Zero(2, 2);
  m(0, 0) = 1.0;
  m(1, 1) = -0.5;
  CHECK_THROWS_AS(pinv_sqrt(m, 1e-9), Error);
}

TEST_CASE("is_psd") {
  CHECK(is_psd(identity(4)));
  CMat m = CMat::Zero(2, 2);
  m(0, 0) = 1.0;
  m(1, 1) = -0.01;
  CHECK_FALSE(is_psd(m, 1e-9));

  std::mt19937_64 rng(31);
  for (int trial = 0; trial < 10; ++trial)
    CHECK(is_psd(random_psd(4, rng), 1e-10));
}

TEST_CASE("real_embedding preserves PSD and doubles the trace") {
  std::mt19937_64 rng(37);
  CMat h = random_psd(3, rng);
  RMat e = real_embedding(h);
  CHECK((e - e.transpose()).cwiseAbs().maxCoeff() < 1e-14);
  Eigen::SelfAdjointEigenSolver<RMat> eig(e);
  CHECK(eig.eigenvalues().minCoeff() >= -1e-10);
  CHECK(e.trace() == doctest::Approx(2.0 * h.trace().real()));

  CMat nh = random_hermitian(3, rng);
  Eigen::SelfAdjointEigenSolver<RMat> eig2(real_embedding(nh));
  CHECK(eig2.eigenvalues().minCoeff() ==
        doctest::Approx(min_eigenvalue(nh)).epsilon(1e-9));
}
