#include "quantum.hpp"

#include <Eigen/QR>
#include <cmath>

namespace amm {

namespace {
const double kSqrt2 = std::sqrt(2.0);
const double kSqrt3 = std::sqrt(3.0);

CMat pauli(int i) {
  CMat m(2, 2);
  switch (i) {
    case 0: m << 1, 0, 0, 1; break;
    case 1: m << 0, 1, 1, 0; break;
    case 2: m << 0, Complex(0, -1), Complex(0, 1), 0; break;
    default: m << 1, 0, 0, -1; break;
  }
  return m;
}
}  // namespace

void DensityMatrix::validate(double tol) const {
  if (bipartite() && Eigen::Index(dim_a) * dim_b != mat.rows())
    throw Error(ErrorCode::kDimensionMismatch,
                "density matrix dims do not factor");
  if (!is_hermitian(mat, 1e-9))
    throw Error(ErrorCode::kNotHermitian, "density matrix not Hermitian");
  if (!is_psd(mat, tol))
    throw Error(ErrorCode::kNotPsd, "density matrix not PSD");
  if (std::abs(mat.trace().real() - 1.0) > tol)
    throw Error(ErrorCode::kInvalidArgument, "density matrix trace != 1");
}

void Povm::validate(double tol) const {
  if (elements.empty())
    throw Error(ErrorCode::kInvalidArgument, "empty POVM");
  CMat sum = CMat::Zero(dim(), dim());
  for (const CMat& e : elements) {
    if (e.rows() != dim() || e.cols() != dim())
      throw Error(ErrorCode::kDimensionMismatch, "POVM element shape");
    if (!is_psd(e, tol))
      throw Error(ErrorCode::kNotPsd, "POVM element not PSD");
    sum += e;
  }
  if ((sum - identity(dim())).cwiseAbs().maxCoeff() > tol::kNormalization)
    throw Error(ErrorCode::kInvalidArgument, "POVM does not sum to identity");
}

void MeasurementAssemblage::validate(double tol) const {
  if (povms.empty())
    throw Error(ErrorCode::kInvalidArgument, "empty measurement assemblage");
  for (const Povm& p : povms) {
    p.validate(tol);
    if (p.dim() != dim())
      throw Error(ErrorCode::kDimensionMismatch,
                  "POVMs act on different dimensions");
  }
}

bool MeasurementAssemblage::is_projective(double tol) const {
  for (const Povm& p : povms)
    for (size_t i = 0; i < p.elements.size(); ++i) {
      const CMat& e = p.elements[i];
      if ((e * e - e).cwiseAbs().maxCoeff() > tol) return false;
      for (size_t j = i + 1; j < p.elements.size(); ++j)
        if ((e * p.elements[j]).cwiseAbs().maxCoeff() > tol) return false;
    }
  return true;
}

CMat StateAssemblage::reduced_state() const {
  CMat sum = CMat::Zero(dim(), dim());
  for (const auto& setting : states)
    for (const CMat& rho : setting) sum += rho;
  return sum / double(n_settings());
}

CorrelationTable born_table(const DensityMatrix& state,
                            const MeasurementAssemblage& alice,
                            const MeasurementAssemblage& bob) {
  if (!state.bipartite())
    throw Error(ErrorCode::kDimensionMismatch, "born_table needs dims (dA,dB)");
  if (alice.dim() != state.dim_a || bob.dim() != state.dim_b)
    throw Error(ErrorCode::kDimensionMismatch,
                "measurement dimensions do not match the state");
  BellScenario s{alice.n_settings(), bob.n_settings(), alice.n_outcomes(),
                 bob.n_outcomes()};
  CorrelationTable table(s);
  for (int x = 0; x < s.nx; ++x)
    for (int y = 0; y < s.ny; ++y)
      for (int a = 0; a < s.na; ++a)
        for (int b = 0; b < s.nb; ++b) {
          Complex v = (kron(alice.povms[x].elements[a],
                            bob.povms[y].elements[b]) *
                       state.mat)
                          .trace();
          table.at(x, y, a, b) = v.real();
        }
  return table;
}

StateAssemblage steer(const DensityMatrix& state,
                      const MeasurementAssemblage& alice) {
  if (!state.bipartite())
    throw Error(ErrorCode::kDimensionMismatch, "steer needs dims (dA,dB)");
  if (alice.dim() != state.dim_a)
    throw Error(ErrorCode::kDimensionMismatch,
                "measurement dimension does not match the state");
  StateAssemblage out;
  out.states.resize(alice.n_settings());
  CMat id_b = identity(state.dim_b);
  for (int x = 0; x < alice.n_settings(); ++x)
    for (const CMat& e : alice.povms[x].elements)
      out.states[x].push_back(partial_trace(kron(e, id_b) * state.mat,
                                            state.dim_a, state.dim_b,
                                            Subsystem::kFirst));
  return out;
}

MeasurementAssemblage neumark_dilate(const MeasurementAssemblage& bob) {
  bob.validate();
  const int d = bob.dim();

  // Refine every POVM to scaled rank-1 vectors, remembering outcome labels.
  struct Refined {
    std::vector<Eigen::VectorXcd> vectors;
    std::vector<int> outcome;
  };
  std::vector<Refined> refined(bob.n_settings());
  int n = d;
  for (int y = 0; y < bob.n_settings(); ++y) {
    for (int b = 0; b < bob.povms[y].n_outcomes(); ++b) {
      EigResult eig = eig_hermitian(bob.povms[y].elements[b]);
      for (Eigen::Index i = 0; i < eig.eigenvalues.size(); ++i) {
        if (eig.eigenvalues(i) <= 1e-12) continue;
        refined[y].vectors.push_back(std::sqrt(eig.eigenvalues(i)) *
                                     eig.eigenvectors.col(i));
        refined[y].outcome.push_back(b);
      }
    }
    n = std::max(n, int(refined[y].vectors.size()));
  }

  MeasurementAssemblage out;
  for (int y = 0; y < bob.n_settings(); ++y) {
    const int last = bob.povms[y].n_outcomes() - 1;
    // Isometry with orthonormal columns: row i is the refined vector's
    // conjugate, zero-padded to n rows.
    CMat iso = CMat::Zero(n, d);
    for (size_t i = 0; i < refined[y].vectors.size(); ++i)
      iso.row(i) = refined[y].vectors[i].conjugate().transpose();
    if ((iso.adjoint() * iso - identity(d)).cwiseAbs().maxCoeff() > 1e-9)
      throw Error(ErrorCode::kSolverFailure,
                  "neumark_dilate: isometry completion is singular");
    Eigen::HouseholderQR<CMat> qr(iso);
    CMat q = qr.householderQ();
    CMat unitary(n, n);
    unitary.leftCols(d) = iso;
    unitary.rightCols(n - d) = q.rightCols(n - d);

    Povm dilated;
    dilated.elements.assign(bob.povms[y].n_outcomes(), CMat::Zero(n, n));
    for (int i = 0; i < n; ++i) {
      Eigen::VectorXcd u = unitary.row(i).adjoint();
      int b = i < int(refined[y].outcome.size()) ? refined[y].outcome[i] : last;
      dilated.elements[b] += u * u.adjoint();
    }
    out.povms.push_back(std::move(dilated));
  }
  return out;
}

AssemblageReport validate_assemblage(const StateAssemblage& asm_, double tol) {
  AssemblageReport report;
  auto flag = [&](const std::string& what, double magnitude) {
    if (magnitude > tol) report.issues.push_back({what, magnitude});
  };
  if (asm_.states.empty()) {
    report.issues.push_back({"empty assemblage", 0.0});
    return report;
  }
  for (int x = 0; x < asm_.n_settings(); ++x)
    for (size_t a = 0; a < asm_.states[x].size(); ++a) {
      const CMat& rho = asm_.states[x][a];
      flag("rho_{" + std::to_string(a + 1) + "|" + std::to_string(x + 1) +
               "} not Hermitian",
           (rho - rho.adjoint()).cwiseAbs().maxCoeff());
      double mineig = min_eigenvalue((rho + rho.adjoint()) / 2.0);
      flag("rho_{" + std::to_string(a + 1) + "|" + std::to_string(x + 1) +
               "} not PSD",
           std::max(0.0, -mineig));
    }
  CMat ref = CMat::Zero(asm_.dim(), asm_.dim());
  for (const CMat& rho : asm_.states[0]) ref += rho;
  for (int x = 1; x < asm_.n_settings(); ++x) {
    CMat sum = CMat::Zero(asm_.dim(), asm_.dim());
    for (const CMat& rho : asm_.states[x]) sum += rho;
    flag("reduced state depends on x=" + std::to_string(x + 1) +
             " (signaling)",
         (sum - ref).cwiseAbs().maxCoeff());
  }
  flag("total trace != 1", std::abs(ref.trace().real() - 1.0));
  return report;
}

DensityMatrix phi_plus(int d) {
  Eigen::VectorXcd psi = Eigen::VectorXcd::Zero(d * d);
  for (int i = 0; i < d; ++i) psi(i * d + i) = 1.0 / std::sqrt(double(d));
  return {psi * psi.adjoint(), d, d};
}

DensityMatrix product_state(const CMat& rho_a, const CMat& rho_b) {
  return {kron(rho_a, rho_b), int(rho_a.rows()), int(rho_b.rows())};
}

DensityMatrix maximally_mixed(int dim_a, int dim_b) {
  int d = dim_a * dim_b;
  return {CMat::Identity(d, d) / double(d), dim_a, dim_b};
}

Povm qubit_povm(const std::array<double, 3>& bloch, double alpha) {
  CMat r_sigma = bloch[0] * pauli(1) + bloch[1] * pauli(2) + bloch[2] * pauli(3);
  Povm out;
  out.elements.push_back(((1 + alpha) * pauli(0) + r_sigma) / 2.0);
  out.elements.push_back(((1 - alpha) * pauli(0) - r_sigma) / 2.0);
  return out;
}

MeasurementAssemblage mub_pair() {
  return {{qubit_povm({1, 0, 0}), qubit_povm({0, 0, 1})}};
}

MeasurementAssemblage mub_triple() {
  return {{qubit_povm({1, 0, 0}), qubit_povm({0, 1, 0}),
           qubit_povm({0, 0, 1})}};
}

MeasurementAssemblage tetrahedron() {
  double s = 1.0 / kSqrt3;
  return {{qubit_povm({s, s, s}), qubit_povm({s, -s, -s}),
           qubit_povm({-s, s, -s}), qubit_povm({-s, -s, s})}};
}

MeasurementAssemblage chsh_optimal_pair() {
  double s = 1.0 / kSqrt2;
  return {{qubit_povm({s, 0, s}), qubit_povm({s, 0, -s})}};
}

MeasurementAssemblage elegant_bob() {
  return {{qubit_povm({1, 0, 0}), qubit_povm({0, -1, 0}),
           qubit_povm({0, 0, 1})}};
}

MeasurementAssemblage mub_assemblage(int d, int count) {
  std::vector<std::vector<Eigen::VectorXcd>> bases;
  if (d == 2) {
    auto basis_of = [&](const Povm& p) {
      std::vector<Eigen::VectorXcd> basis;
      for (const CMat& e : p.elements) {
        EigResult eig = eig_hermitian(e);
        basis.push_back(eig.eigenvectors.col(eig.eigenvalues.size() - 1));
      }
      return basis;
    };
    bases.push_back(basis_of(qubit_povm({0, 0, 1})));
    bases.push_back(basis_of(qubit_povm({1, 0, 0})));
    bases.push_back(basis_of(qubit_povm({0, 1, 0})));
  } else if (d == 3) {
    std::vector<Eigen::VectorXcd> computational;
    for (int j = 0; j < 3; ++j) {
      Eigen::VectorXcd v = Eigen::VectorXcd::Zero(3);
      v(j) = 1.0;
      computational.push_back(v);
    }
    bases.push_back(computational);
    Complex omega = std::exp(Complex(0, 2.0 * M_PI / 3.0));
    for (int k = 0; k < 3; ++k) {
      std::vector<Eigen::VectorXcd> basis;
      for (int j = 0; j < 3; ++j) {
        Eigen::VectorXcd v(3);
        for (int l = 0; l < 3; ++l)
          v(l) = std::pow(omega, double(k * l * l + j * l)) / kSqrt3;
        basis.push_back(v);
      }
      bases.push_back(basis);
    }
  } else {
    throw Error(ErrorCode::kInvalidArgument,
                "mub_assemblage supports d = 2 or 3");
  }
  if (count < 1 || count > int(bases.size()))
    throw Error(ErrorCode::kInvalidArgument,
                "mub_assemblage: at most " + std::to_string(bases.size()) +
                    " bases for d = " + std::to_string(d));
  MeasurementAssemblage out;
  for (int k = 0; k < count; ++k) {
    Povm p;
    for (const auto& v : bases[k]) p.elements.push_back(v * v.adjoint());
    out.povms.push_back(std::move(p));
  }
  return out;
}

Povm trine_povm() {
  Povm out;
  for (int k = 0; k < 3; ++k) {
    double theta = 2.0 * M_PI * k / 3.0;
    Eigen::VectorXcd v(2);
    v << std::cos(theta / 2), std::sin(theta / 2);
    out.elements.push_back((2.0 / 3.0) * v * v.adjoint());
  }
  return out;
}

std::optional<DensityMatrix> state_fixture(const std::string& name) {
  if (name == "phi-plus-d2") return phi_plus(2);
  if (name == "phi-plus-d3") return phi_plus(3);
  if (name == "max-mixed-d2") return maximally_mixed(2, 2);
  return std::nullopt;
}

std::optional<MeasurementAssemblage> measurement_fixture(
    const std::string& name) {
  if (name == "mub-pair") return mub_pair();
  if (name == "mub-triple") return mub_triple();
  if (name == "tetrahedron") return tetrahedron();
  if (name == "chsh-optimal-pair") return chsh_optimal_pair();
  if (name == "elegant-bob") return elegant_bob();
  if (name == "qutrit-mub-triple") return mub_assemblage(3, 3);
  if (name == "trine") return MeasurementAssemblage{{trine_povm()}};
  return std::nullopt;
}

}  // namespace amm
