#include "matlin.hpp"

#include <Eigen/Eigenvalues>

namespace amm {

bool is_hermitian(const CMat& m, double tol) {
  if (m.rows() != m.cols()) return false;
  return (m - m.adjoint()).cwiseAbs().maxCoeff() <= tol;
}

CMat kron(const CMat& a, const CMat& b) {
  CMat out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

CMat partial_trace(const CMat& m, int d1, int d2, Subsystem traced_out) {
  if (m.rows() != m.cols() || m.rows() != Eigen::Index(d1) * d2)
    throw Error(ErrorCode::kDimensionMismatch,
                "partial_trace: matrix is " + std::to_string(m.rows()) + "x" +
                    std::to_string(m.cols()) + ", expected " +
                    std::to_string(d1 * d2) + " square");
  if (traced_out == Subsystem::kFirst) {
    CMat out = CMat::Zero(d2, d2);
    for (int i = 0; i < d1; ++i) out += m.block(i * d2, i * d2, d2, d2);
    return out;
  }
  CMat out = CMat::Zero(d1, d1);
  for (int i = 0; i < d1; ++i)
    for (int j = 0; j < d1; ++j)
      out(i, j) = m.block(i * d2, j * d2, d2, d2).trace();
  return out;
}

EigResult eig_hermitian(const CMat& m) {
  if (!is_hermitian(m, 1e-9 * std::max(1.0, m.cwiseAbs().maxCoeff())))
    throw Error(ErrorCode::kNotHermitian, "eig_hermitian: input not Hermitian");
  Eigen::SelfAdjointEigenSolver<CMat> solver(m);
  if (solver.info() != Eigen::Success)
    throw Error(ErrorCode::kSolverFailure, "eig_hermitian: did not converge");
  return {solver.eigenvalues(), solver.eigenvectors()};
}

PinvSqrt pinv_sqrt(const CMat& m, double rank_tol) {
  EigResult eig = eig_hermitian(m);
  double wmax = eig.eigenvalues.size() ? eig.eigenvalues.maxCoeff() : 0.0;
  if (rank_tol < 0) rank_tol = 1e-9 * std::max(wmax, 1e-300);
  if (eig.eigenvalues.size() && eig.eigenvalues.minCoeff() < -rank_tol)
    throw Error(ErrorCode::kNotPsd,
                "pinv_sqrt: eigenvalue " +
                    std::to_string(eig.eigenvalues.minCoeff()) +
                    " below -rank_tol");
  PinvSqrt out;
  out.result = CMat::Zero(m.rows(), m.cols());
  out.range_projector = CMat::Zero(m.rows(), m.cols());
  for (Eigen::Index i = 0; i < eig.eigenvalues.size(); ++i) {
    double w = eig.eigenvalues(i);
    if (w <= rank_tol) continue;
    CMat vv = eig.eigenvectors.col(i) * eig.eigenvectors.col(i).adjoint();
    out.result += vv / std::sqrt(w);
    out.range_projector += vv;
    ++out.rank;
  }
  return out;
}

bool is_psd(const CMat& m, double tol) { return min_eigenvalue(m) >= -tol; }

double min_eigenvalue(const CMat& m) {
  Eigen::SelfAdjointEigenSolver<CMat> solver(m, Eigen::EigenvaluesOnly);
  return solver.eigenvalues().minCoeff();
}

RMat real_embedding(const CMat& h) {
  const Eigen::Index d = h.rows();
  RMat out(2 * d, 2 * d);
  out.topLeftCorner(d, d) = h.real();
  out.bottomRightCorner(d, d) = h.real();
  out.topRightCorner(d, d) = -h.imag();
  out.bottomLeftCorner(d, d) = h.imag();
  return out;
}

}  // namespace amm
