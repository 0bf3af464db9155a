#pragma once

// Dense complex/real Hermitian linear algebra used by every other module.
// Matrices are immutable values; all functions here are pure.

#include <Eigen/Dense>
#include <complex>
#include <stdexcept>
#include <string>
#include <utility>

namespace amm {

using CMat = Eigen::MatrixXcd;
using RMat = Eigen::MatrixXd;
using RVec = Eigen::VectorXd;
using Complex = std::complex<double>;

enum class ErrorCode {
  kDimensionMismatch,
  kInvalidArgument,
  kNotPsd,
  kNotHermitian,
  kCapExceeded,
  kSolverFailure,
  kParseError,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}
  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

namespace tol {
inline constexpr double kHermitian = 1e-12;
inline constexpr double kPsd = 1e-10;
inline constexpr double kTrace = 1e-10;
inline constexpr double kNormalization = 1e-9;
inline constexpr double kNoSignaling = 1e-9;
}  // namespace tol

bool is_hermitian(const CMat& m, double tol = tol::kHermitian);

// Kronecker product, (a ⊗ b)[i*p+k, j*q+l] = a(i,j) b(k,l).
CMat kron(const CMat& a, const CMat& b);

enum class Subsystem { kFirst, kSecond };

// Partial trace of an operator on C^{d1} ⊗ C^{d2} over the named factor.
// Trace-preserving; requires m.rows() == d1*d2.
CMat partial_trace(const CMat& m, int d1, int d2, Subsystem traced_out);

struct EigResult {
  RVec eigenvalues;  // ascending
  CMat eigenvectors; // unitary, columns match eigenvalues
};

// Dense Hermitian eigendecomposition, m = V diag(w) V^dagger.
EigResult eig_hermitian(const CMat& m);

struct PinvSqrt {
  CMat result;           // sum over eigenvalues > rank_tol of w^{-1/2} v v^dagger
  CMat range_projector;  // projector onto the retained eigenspace
  int rank = 0;
};

// Pseudo-inverse square root of a PSD matrix. rank_tol < 0 selects the
// default 1e-9 * max eigenvalue. Throws if an eigenvalue < -rank_tol.
PinvSqrt pinv_sqrt(const CMat& m, double rank_tol = -1.0);

bool is_psd(const CMat& m, double tol = tol::kPsd);

double min_eigenvalue(const CMat& m);

// Hermitian H = A + iB mapped to the real symmetric form [[A, -B], [B, A]];
// PSD is preserved in both directions and the trace doubles.
RMat real_embedding(const CMat& h);

inline CMat identity(int d) { return CMat::Identity(d, d); }

}  // namespace amm
