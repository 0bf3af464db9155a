#include <Eigen/Dense>
#include <Eigen/Eigenvalues>
#include <Eigen/SVD>
#include <algorithm>
#include <cmath>
#include <cstdio>
#include <vector>

#include "conic.hpp"
#include "matlin.hpp"

// Fortran BLAS/LAPACK kernels used on the Schur complement hot path.
extern "C" {
void dsyrk_(const char* uplo, const char* trans, const int* n, const int* k,
            const double* alpha, const double* a, const int* lda,
            const double* beta, double* c, const int* ldc);
void dpotrf_(const char* uplo, const int* n, double* a, const int* lda,
             int* info);
void dpotrs_(const char* uplo, const int* n, const int* nrhs, const double* a,
             const int* lda, double* b, const int* ldb, int* info);
void dgemv_(const char* trans, const int* m, const int* n,
            const double* alpha, const double* a, const int* lda,
            const double* x, const int* incx, const double* beta, double* y,
            const int* incy);
}

namespace amm {
namespace detail {

namespace {

struct BlockData {
  int dim = 0;
  int svec_dim = 0;
  RMat constant;                 // C_k
  std::vector<int> vars;         // global indices touching this block
  std::vector<int> var_local;    // parallel: local column in V
  // per local variable: triplets (row, col, value), row <= col
  std::vector<std::vector<std::array<double, 3>>> coeffs;
};

struct BlockWork {
  RMat z, y, dz, dy;
  RMat g, gi;            // NT scaling factor and its inverse
  Eigen::VectorXd sigma; // scaled spectrum
  RMat lz;               // chol(Z), reused for step lengths
  RMat rres;             // primal residual C + A(x) - Z
  RMat rres_scaled;      // Gi * rres * Gi^T
  RMat rhs_scaled;       // centering target in scaled space
  RMat dz_scaled, dy_scaled;
  RMat dz_scaled_aff, dy_scaled_aff;
  std::vector<double> v;  // svec_dim x nvars column-major scaled coefficients
};

void svec(const RMat& m, double* out) {
  const int d = int(m.rows());
  int idx = 0;
  for (int j = 0; j < d; ++j)
    for (int i = 0; i <= j; ++i)
      out[idx++] = i == j ? m(i, j) : m(i, j) * M_SQRT2;
}

RMat unsvec(const double* in, int d) {
  RMat m(d, d);
  int idx = 0;
  for (int j = 0; j < d; ++j)
    for (int i = 0; i <= j; ++i) {
      double v = in[idx++];
      if (i == j) {
        m(i, j) = v;
      } else {
        m(i, j) = v / M_SQRT2;
        m(j, i) = m(i, j);
      }
    }
  return m;
}

// Largest step s.t. S + alpha*dS stays PSD, given chol(S) = L.
double max_step(const RMat& l, const RMat& ds) {
  RMat w = l.triangularView<Eigen::Lower>().solve(ds);
  w = l.triangularView<Eigen::Lower>().solve(w.transpose()).eval();
  Eigen::SelfAdjointEigenSolver<RMat> eig((w + w.transpose()) / 2.0,
                                          Eigen::EigenvaluesOnly);
  double lmin = eig.eigenvalues().minCoeff();
  if (lmin >= -1e-14) return 1e30;
  return -1.0 / lmin;
}

bool chol_lower(const RMat& m, RMat& l) {
  Eigen::LLT<RMat> llt(m);
  if (llt.info() != Eigen::Success) return false;
  l = llt.matrixL();
  return true;
}

}  // namespace

ConicSolution ipm_solve(const ConicProgram& prog, const SolveOptions& opts) {
  const int m = prog.n_vars;
  const int nblk = int(prog.block_dims.size());
  ConicSolution sol;

  // no free variables: the program is a constant-PSD check
  if (m == 0) {
    double worst = replay_violation(prog, {});
    sol.status = worst <= opts.feas_tol ? SolveStatus::kOptimal
                                        : SolveStatus::kInfeasible;
    sol.objective_value = prog.objective_constant;
    return sol;
  }

  std::vector<BlockData> blocks(nblk);
  for (int k = 0; k < nblk; ++k) {
    blocks[k].dim = prog.block_dims[k];
    blocks[k].svec_dim = blocks[k].dim * (blocks[k].dim + 1) / 2;
    blocks[k].constant = RMat::Zero(blocks[k].dim, blocks[k].dim);
  }
  for (const auto& e : prog.constant_entries) {
    blocks[e.block].constant(e.row, e.col) += e.value;
    if (e.row != e.col) blocks[e.block].constant(e.col, e.row) += e.value;
  }
  {
    std::vector<int> local(nblk, -1);
    for (int i = 0; i < m; ++i) {
      for (int k = 0; k < nblk; ++k) local[k] = -1;
      for (const auto& e : prog.var_entries[i]) {
        BlockData& blk = blocks[e.block];
        if (local[e.block] < 0) {
          local[e.block] = int(blk.vars.size());
          blk.vars.push_back(i);
          blk.coeffs.emplace_back();
        }
        blk.coeffs[local[e.block]].push_back(
            {double(e.row), double(e.col), e.value});
      }
    }
  }

  double norm_c = 1.0, norm_data = 1.0;
  for (double c : prog.objective) norm_c = std::max(norm_c, std::abs(c));
  for (const auto& e : prog.constant_entries)
    norm_data = std::max(norm_data, std::abs(e.value));

  std::vector<BlockWork> work(nblk);
  for (int k = 0; k < nblk; ++k) {
    const int d = blocks[k].dim;
    double scale = std::max({10.0, std::sqrt(double(d)),
                             blocks[k].constant.cwiseAbs().maxCoeff() * 2.0});
    work[k].z = RMat::Identity(d, d) * scale;
    work[k].y = RMat::Identity(d, d) * std::max(10.0, norm_c);
    work[k].v.resize(size_t(blocks[k].svec_dim) * blocks[k].vars.size());
  }

  std::vector<double> x(m, 0.0);
  std::vector<double> schur(size_t(m) * m);
  std::vector<double> rd(m), q(m), dx(m), dx_aff(m);
  std::vector<double> svec_buf;

  double total_dim = 0;
  for (int k = 0; k < nblk; ++k) total_dim += blocks[k].dim;

  int stall_count = 0;
  bool restarted = false;
  double reg = 1e-10;
  double best_merit = std::numeric_limits<double>::infinity();

  auto a_of_x = [&](int k, const std::vector<double>& xs) {
    const BlockData& blk = blocks[k];
    RMat out = RMat::Zero(blk.dim, blk.dim);
    for (size_t j = 0; j < blk.vars.size(); ++j) {
      double xv = xs[blk.vars[j]];
      if (xv == 0.0) continue;
      for (const auto& t : blk.coeffs[j]) {
        int r = int(t[0]), c = int(t[1]);
        out(r, c) += xv * t[2];
        if (r != c) out(c, r) += xv * t[2];
      }
    }
    return out;
  };

  for (int iter = 0; iter < opts.max_iter; ++iter) {
    // residuals and gap
    double gap = 0.0, norm_rp = 0.0;
    for (int k = 0; k < nblk; ++k) {
      work[k].rres = blocks[k].constant + a_of_x(k, x) - work[k].z;
      norm_rp = std::max(norm_rp, work[k].rres.cwiseAbs().maxCoeff());
      gap += (work[k].z.array() * work[k].y.array()).sum();
    }
    for (int i = 0; i < m; ++i) rd[i] = prog.objective[i];
    for (int k = 0; k < nblk; ++k) {
      const BlockData& blk = blocks[k];
      for (size_t j = 0; j < blk.vars.size(); ++j) {
        double dot = 0.0;
        for (const auto& t : blk.coeffs[j]) {
          int r = int(t[0]), c = int(t[1]);
          dot += t[2] * work[k].y(r, c) * (r == c ? 1.0 : 2.0);
        }
        rd[blk.vars[j]] -= dot;
      }
    }
    double norm_rd = 0.0;
    for (int i = 0; i < m; ++i) norm_rd = std::max(norm_rd, std::abs(rd[i]));

    double pobj = prog.objective_constant;
    for (int i = 0; i < m; ++i) pobj += prog.objective[i] * x[i];
    double dobj = prog.objective_constant;
    for (int k = 0; k < nblk; ++k)
      dobj -= (blocks[k].constant.array() * work[k].y.array()).sum();

    double rel_gap = gap / (1.0 + std::abs(pobj) + std::abs(dobj));
    double rel_rp = norm_rp / (1.0 + norm_data);
    double rel_rd = norm_rd / (1.0 + norm_c);
    if (opts.verbose)
      std::fprintf(stderr,
                   "iter %3d  pobj % .8e  dobj % .8e  gap %.2e  rp %.2e  rd "
                   "%.2e\n",
                   iter, pobj, dobj, rel_gap, rel_rp, rel_rd);
    if (!std::isfinite(gap) || !std::isfinite(pobj) || !std::isfinite(dobj)) {
      sol.status = SolveStatus::kNumericalFailure;
      if (sol.x.empty()) sol.x = x;
      sol.iterations = iter;
      return sol;
    }
    double merit = std::max({rel_gap / opts.gap_tol, rel_rp / opts.feas_tol,
                             rel_rd / opts.feas_tol});
    if (merit < best_merit) {
      best_merit = merit;
      sol.x = x;
      sol.objective_value = pobj;
      sol.duality_gap = rel_gap;
      sol.primal_residual = rel_rp;
      sol.dual_residual = rel_rd;
      sol.iterations = iter;
    }
    if (merit <= 1.0) {
      sol.status = SolveStatus::kOptimal;
      return sol;
    }

    // primal infeasibility certificate: Y PSD with A*(Y) ~ 0, <C,Y> < 0
    {
      double c_dot_y = 0.0, a_star = 0.0, ynorm = 0.0;
      for (int k = 0; k < nblk; ++k) {
        c_dot_y += (blocks[k].constant.array() * work[k].y.array()).sum();
        ynorm += work[k].y.trace();
      }
      for (int i = 0; i < m; ++i)
        a_star = std::max(a_star, std::abs(prog.objective[i] - rd[i]));
      if (c_dot_y < -1e-8 * ynorm && a_star <= 1e-10 * ynorm &&
          ynorm > 1e6 * total_dim) {
        sol.status = SolveStatus::kInfeasible;
        if (sol.x.empty()) sol.x = x;
        sol.iterations = iter;
        return sol;
      }
    }

    double mu = gap / total_dim;

    // Nesterov-Todd scaling point per block
    bool scaling_ok = true;
    for (int k = 0; k < nblk && scaling_ok; ++k) {
      BlockWork& w = work[k];
      RMat ly;
      if (!chol_lower(w.z, w.lz) || !chol_lower(w.y, ly)) {
        scaling_ok = false;
        break;
      }
      RMat b = ly.transpose() * w.lz;
      Eigen::JacobiSVD<RMat> svd(b,
                                 Eigen::ComputeFullU | Eigen::ComputeFullV);
      w.sigma = svd.singularValues();
      Eigen::VectorXd isq =
          w.sigma.cwiseMax(1e-150).cwiseSqrt().cwiseInverse();
      w.g = w.lz * svd.matrixV() * isq.asDiagonal();
      w.gi = isq.asDiagonal() * svd.matrixU().transpose() * ly.transpose();
    }
    if (!scaling_ok) {
      if (!restarted) {
        restarted = true;
        for (int k = 0; k < nblk; ++k) {
          double bump = std::sqrt(mu) + 1.0;
          work[k].z += bump * RMat::Identity(blocks[k].dim, blocks[k].dim);
          work[k].y += bump * RMat::Identity(blocks[k].dim, blocks[k].dim);
        }
        continue;
      }
      sol.status = SolveStatus::kNumericalFailure;
      if (sol.x.empty()) sol.x = x;
      sol.iterations = iter;
      return sol;
    }

    // scaled coefficient columns and Schur complement M = sum V^T V
    std::fill(schur.begin(), schur.end(), 0.0);
    for (int k = 0; k < nblk; ++k) {
      const BlockData& blk = blocks[k];
      BlockWork& w = work[k];
      const int d = blk.dim, s = blk.svec_dim;
      const int mk = int(blk.vars.size());
      if (mk == 0) {
        w.rres_scaled = w.gi * w.rres * w.gi.transpose();
        continue;
      }
      RMat atilde(d, d);
      for (int j = 0; j < mk; ++j) {
        atilde.setZero();
        for (const auto& t : blk.coeffs[j]) {
          int r = int(t[0]), c = int(t[1]);
          atilde += t[2] * (w.gi.col(r) * w.gi.col(c).transpose());
          if (r != c)
            atilde += t[2] * (w.gi.col(c) * w.gi.col(r).transpose());
        }
        svec((atilde + atilde.transpose()) / 2.0, w.v.data() + size_t(j) * s);
      }
      w.rres_scaled = w.gi * w.rres * w.gi.transpose();

      // local Schur block, then scatter (vars are sorted ascending)
      static thread_local std::vector<double> mk_buf;
      mk_buf.assign(size_t(mk) * mk, 0.0);
      const double one = 1.0, zero = 0.0;
      dsyrk_("L", "T", &mk, &s, &one, w.v.data(), &s, &zero, mk_buf.data(),
             &mk);
      for (int j = 0; j < mk; ++j) {
        const int gj = blk.vars[j];
        for (int i = j; i < mk; ++i)
          schur[size_t(gj) * m + blk.vars[i]] += mk_buf[size_t(j) * mk + i];
      }
    }
    double max_diag = 1.0;
    for (int i = 0; i < m; ++i)
      max_diag = std::max(max_diag, schur[size_t(i) * m + i]);
    double delta = reg * max_diag;
    for (int i = 0; i < m; ++i) schur[size_t(i) * m + i] += delta;

    int info = 0;
    dpotrf_("L", &m, schur.data(), &m, &info);
    if (info != 0) {
      reg *= 1e4;
      if (reg > 1e-2) {
        sol.status = SolveStatus::kNumericalFailure;
        if (sol.x.empty()) sol.x = x;
        sol.iterations = iter;
        return sol;
      }
      --iter;
      continue;
    }

    auto build_q = [&](bool corrector, double sigma_mu) {
      for (int i = 0; i < m; ++i) q[i] = -rd[i];
      for (int k = 0; k < nblk; ++k) {
        const BlockData& blk = blocks[k];
        BlockWork& w = work[k];
        const int d = blk.dim, s = blk.svec_dim;
        const int mk = int(blk.vars.size());
        RMat rhs;
        if (!corrector) {
          rhs = RMat::Zero(d, d);
          for (int i = 0; i < d; ++i) rhs(i, i) = -w.sigma(i);
        } else {
          RMat cross = w.dz_scaled_aff * w.dy_scaled_aff;
          cross = ((cross + cross.transpose()) / 2.0).eval();
          rhs = RMat::Zero(d, d);
          for (int i = 0; i < d; ++i)
            for (int j = 0; j < d; ++j) {
              double target = (i == j ? sigma_mu - w.sigma(i) * w.sigma(i)
                                      : 0.0) -
                              cross(i, j);
              rhs(i, j) = target / ((w.sigma(i) + w.sigma(j)) / 2.0);
            }
        }
        w.rhs_scaled = rhs;
        if (mk == 0) continue;
        svec_buf.resize(s);
        svec(rhs - w.rres_scaled, svec_buf.data());
        static thread_local std::vector<double> qk;
        qk.assign(mk, 0.0);
        const double one = 1.0, zero = 0.0;
        const int inc = 1;
        dgemv_("T", &s, &mk, &one, w.v.data(), &s, svec_buf.data(), &inc,
               &zero, qk.data(), &inc);
        for (int j = 0; j < mk; ++j) q[blk.vars[j]] += qk[j];
      }
    };

    // M dx = q via the factored, regularized Schur matrix, with iterative
    // refinement against the unregularized M recomputed from the V columns
    auto apply_schur = [&](const std::vector<double>& v_in,
                           std::vector<double>& v_out) {
      std::fill(v_out.begin(), v_out.end(), 0.0);
      for (int k = 0; k < nblk; ++k) {
        const BlockData& blk = blocks[k];
        const BlockWork& w = work[k];
        const int s = blk.svec_dim;
        const int mk = int(blk.vars.size());
        if (mk == 0) continue;
        static thread_local std::vector<double> xk, vk;
        xk.assign(mk, 0.0);
        for (int j = 0; j < mk; ++j) xk[j] = v_in[blk.vars[j]];
        vk.assign(s, 0.0);
        const double one = 1.0, zero = 0.0;
        const int inc = 1;
        dgemv_("N", &s, &mk, &one, w.v.data(), &s, xk.data(), &inc, &zero,
               vk.data(), &inc);
        dgemv_("T", &s, &mk, &one, w.v.data(), &s, vk.data(), &inc, &zero,
               xk.data(), &inc);
        for (int j = 0; j < mk; ++j) v_out[blk.vars[j]] += xk[j];
      }
    };
    auto solve_directions = [&](std::vector<double>& dxout) {
      dxout = q;
      int info2 = 0;
      const int one_i = 1;
      dpotrs_("L", &m, &one_i, schur.data(), &m, dxout.data(), &m, &info2);
      if (info2 != 0) return false;
      std::vector<double> resid(m), corr(m);
      for (int pass = 0; pass < 2; ++pass) {
        apply_schur(dxout, resid);
        for (int i = 0; i < m; ++i) resid[i] = q[i] - resid[i];
        corr = resid;
        dpotrs_("L", &m, &one_i, schur.data(), &m, corr.data(), &m, &info2);
        if (info2 != 0) break;
        for (int i = 0; i < m; ++i) dxout[i] += corr[i];
      }
      return true;
    };

    auto reconstruct = [&](const std::vector<double>& dxv, bool save_aff) {
      for (int k = 0; k < nblk; ++k) {
        const BlockData& blk = blocks[k];
        BlockWork& w = work[k];
        w.dz = a_of_x(k, dxv) + w.rres;
        w.dz_scaled = w.gi * w.dz * w.gi.transpose();
        w.dy_scaled = w.rhs_scaled - w.dz_scaled;
        w.dy = w.gi.transpose() * w.dy_scaled * w.gi;
        w.dy = ((w.dy + w.dy.transpose()) / 2.0).eval();
        w.dz = ((w.dz + w.dz.transpose()) / 2.0).eval();
        if (save_aff) {
          w.dz_scaled_aff = w.dz_scaled;
          w.dy_scaled_aff = w.dy_scaled;
        }
      }
    };

    auto step_lengths = [&](double& ap, double& ad) {
      ap = ad = 1e30;
      for (int k = 0; k < nblk; ++k) {
        BlockWork& w = work[k];
        ap = std::min(ap, max_step(w.lz, w.dz));
        RMat ly;
        if (!chol_lower(w.y, ly)) {
          ad = 0.0;
          continue;
        }
        ad = std::min(ad, max_step(ly, w.dy));
      }
    };

    // predictor
    build_q(false, 0.0);
    if (!solve_directions(dx_aff)) {
      sol.status = SolveStatus::kNumericalFailure;
      if (sol.x.empty()) sol.x = x;
      sol.iterations = iter;
      return sol;
    }
    reconstruct(dx_aff, true);
    double ap_aff, ad_aff;
    step_lengths(ap_aff, ad_aff);
    ap_aff = std::min(1.0, ap_aff);
    ad_aff = std::min(1.0, ad_aff);
    double gap_aff = 0.0;
    for (int k = 0; k < nblk; ++k)
      gap_aff += ((work[k].z + ap_aff * work[k].dz).array() *
                  (work[k].y + ad_aff * work[k].dy).array())
                     .sum();
    gap_aff = std::max(gap_aff, 0.0);
    double sigma = std::pow(gap_aff / gap, 3.0);
    sigma = std::clamp(sigma, 1e-8, 1.0);

    // corrector
    build_q(true, sigma * mu);
    if (!solve_directions(dx)) {
      sol.status = SolveStatus::kNumericalFailure;
      if (sol.x.empty()) sol.x = x;
      sol.iterations = iter;
      return sol;
    }
    reconstruct(dx, false);
    double ap, ad;
    step_lengths(ap, ad);
    const double tau = 0.98;
    ap = std::min(1.0, tau * ap);
    ad = std::min(1.0, tau * ad);

    if (std::min(ap, ad) < 1e-4) {
      if (++stall_count >= 3) {
        if (!restarted) {
          restarted = true;
          stall_count = 0;
          double bump = std::sqrt(mu) + 1.0;
          for (int k = 0; k < nblk; ++k) {
            work[k].z += bump * RMat::Identity(blocks[k].dim, blocks[k].dim);
            work[k].y += bump * RMat::Identity(blocks[k].dim, blocks[k].dim);
          }
          continue;
        }
        sol.status = SolveStatus::kMaxIter;
        if (sol.x.empty()) sol.x = x;
        return sol;
      }
    } else {
      stall_count = 0;
    }

    for (int i = 0; i < m; ++i) x[i] += ap * dx[i];
    for (int k = 0; k < nblk; ++k) {
      work[k].z += ap * work[k].dz;
      work[k].y += ad * work[k].dy;
      work[k].z = ((work[k].z + work[k].z.transpose()) / 2.0).eval();
      work[k].y = ((work[k].y + work[k].y.transpose()) / 2.0).eval();
    }
  }

  sol.status = SolveStatus::kMaxIter;
  if (sol.x.empty()) sol.x = x;
  return sol;
}

}  // namespace detail
}  // namespace amm
