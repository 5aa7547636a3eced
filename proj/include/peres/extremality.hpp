#pragma once

#include <algorithm>
#include <stdexcept>
#include <vector>

#include "peres/mspace.hpp"

namespace peres {

struct InternalError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Outcome of the extreme-point test at a PPT state rho.
//
// With P, Q the projectors onto the images of rho and rho^PT, a direction A
// stays on the boundary structure of both cones iff PAP = A and Q(A^PT)Q = A^PT,
// i.e. iff A is an eigenvalue-1 eigenvector of the product operator
// P o Qbar o P (Qbar = PT o Q o PT) acting on Hermitian matrices.  rho itself
// always solves the pair, so b_rank >= 1, and rho is an extreme point of the
// PPT set exactly when rho is the only solution: b_rank == 1.
struct ExtremalityReport {
  int n = 0;                        // rank of rho
  int m = 0;                        // rank of rho^PT
  int b_rank = 0;                   // eigenvalue-1 multiplicity of the product operator
  int b_rank_clean = 0;             // cluster members clear of the ambiguity window
  double lambda_next = 0.0;         // largest eigenvalue below the 1-cluster
  RVec spectrum;                    // all N^2 eigenvalues, descending
  std::vector<MVector> face_basis;  // orthonormal basis of the eigenvalue-1 subspace
  bool is_extreme = false;          // b_rank == 1
  bool borderline = false;          // the verdict depends on ambiguous eigenvalues

  double gap() const { return 1.0 - lambda_next; }
};

// Extreme points satisfy n^2 + m^2 <= N^2 + 1.
inline bool check_rank_bound(int n, int m, const BipartiteDims& dims) {
  const int nn = dims.n();
  return n * n + m * m <= nn * nn + 1;
}

namespace detail {

// Columns of V span an invariant r-dimensional subspace; lift the orthonormal
// Hermitian basis of that subspace, i.e. { V S_a V^dagger }, and return the
// vectorized lifts as the columns of an (N^2 x r^2) real matrix.  The lifts are
// built from outer products of the columns of V, mirroring the basis layout.
inline RMat lifted_basis_columns(const CMat& v, int big_n,
                                 std::vector<CMat>* lifts) {
  const int r = static_cast<int>(v.cols());
  const double inv_s2 = 1.0 / std::sqrt(2.0);
  RMat cols(big_n * big_n, r * r);
  lifts->clear();
  lifts->reserve(r * r);
  auto push = [&](int k, const CMat& h) {
    cols.col(k) = vectorize_dim(h, big_n);
    lifts->push_back(h);
  };
  for (int i = 0; i < r; ++i) push(i, v.col(i) * v.col(i).adjoint());
  for (int i = 0; i < r; ++i)
    for (int j = i + 1; j < r; ++j) {
      const int k = r + 2 * pair_ordinal(i, j, r);
      const CMat cij = v.col(i) * v.col(j).adjoint();
      push(k, inv_s2 * (cij + cij.adjoint()));
      push(k + 1, Cplx(0, 1) * inv_s2 * (cij - cij.adjoint()));
    }
  return cols;
}

inline CMat pt_raw(const CMat& a, const BipartiteDims& dims) {
  const int na = dims.n_a, nb = dims.n_b;
  CMat out(dims.n(), dims.n());
  for (int p = 0; p < na; ++p)
    for (int b = 0; b < nb; ++b)
      for (int q = 0; q < na; ++q)
        for (int b2 = 0; b2 < nb; ++b2)
          out(p * nb + b2, q * nb + b) = a(p * nb + b, q * nb + b2);
  return out;
}

}  // namespace detail

// Classify a PPT state as extreme / not extreme via the eigenvalue-1
// multiplicity of the product operator.  The operator annihilates the
// orthocomplement of the n^2-dimensional range of the P-conjugation (and of
// the m^2-dimensional range of the Qbar-conjugation), so its spectrum is
// computed on the smaller of the two invariant subspaces and padded with
// zeros; unit tests pin this against the dense N^2 x N^2 operator.
inline ExtremalityReport test_extremality(const DensityMatrix& rho,
                                          const Tolerances& tol = {}) {
  tol.validate();
  const BipartiteDims dims = rho.dims();
  const int big_n = dims.n();
  const HermitianMatrix rho_pt = partial_transpose(rho.hermitian(), dims);
  if (!is_psd(rho_pt, tol))
    throw std::domain_error("test_extremality: state is not PPT");

  const SpectralDecomposition sd = spectral_decompose(rho.hermitian(), tol);
  const SpectralDecomposition sd_pt = spectral_decompose(rho_pt, tol);
  const double thr = detail::rank_threshold(sd.eigenvalues, tol);
  const double thr_pt = detail::rank_threshold(sd_pt.eigenvalues, tol);
  int n = 0, m = 0;
  for (int i = 0; i < big_n; ++i) {
    if (sd.eigenvalues[i] > thr) ++n;
    if (sd_pt.eigenvalues[i] > thr_pt) ++m;
  }

  ExtremalityReport rep;
  rep.n = n;
  rep.m = m;

  if (n == big_n && m == big_n) {
    // both conjugations are the identity, so the product operator is too
    rep.b_rank = big_n * big_n;
    rep.b_rank_clean = rep.b_rank;
    rep.lambda_next = 0.0;
    rep.spectrum = RVec::Ones(big_n * big_n);
    rep.face_basis.reserve(rep.b_rank);
    for (int k = 0; k < rep.b_rank; ++k) {
      RVec e = RVec::Zero(big_n * big_n);
      e[k] = 1.0;
      rep.face_basis.push_back({std::move(e), dims});
    }
    rep.is_extreme = (rep.b_rank == 1);
    return rep;
  }

  // Restrict to the smaller invariant subspace.  On the P side the subspace is
  // spanned by lifts V S V^dagger of the image basis of rho and the restricted
  // operator is Qbar; on the Qbar side the spans are partial transposes of
  // lifts from the image of rho^PT and the restricted operator is the
  // P-conjugation.  Both give the same nonzero spectrum.
  const bool p_side = (n <= m);
  const CMat small_v =
      p_side ? sd.eigenvectors.leftCols(n) : sd_pt.eigenvectors.leftCols(m);
  const CMat other_v =
      p_side ? sd_pt.eigenvectors.leftCols(m) : sd.eigenvectors.leftCols(n);
  const CMat other_proj = other_v * other_v.adjoint();
  const int r = static_cast<int>(small_v.cols());
  const int d = r * r;

  std::vector<CMat> lifts;
  RMat h_cols = detail::lifted_basis_columns(small_v, big_n, &lifts);
  RMat g_cols(big_n * big_n, d);
  for (int a = 0; a < d; ++a) {
    if (p_side) {
      const CMat t = detail::pt_raw(lifts[a], dims);
      g_cols.col(a) =
          detail::vectorize_dim(detail::pt_raw(other_proj * t * other_proj, dims), big_n);
    } else {
      const CMat h = detail::pt_raw(lifts[a], dims);  // lift lives on the PT side
      h_cols.col(a) = detail::vectorize_dim(h, big_n);
      g_cols.col(a) = detail::vectorize_dim(other_proj * h * other_proj, big_n);
    }
  }
  RMat restricted = h_cols.transpose() * g_cols;
  restricted = 0.5 * (restricted + restricted.transpose()).eval();

  Eigen::SelfAdjointEigenSolver<RMat> es(restricted);
  if (es.info() != Eigen::Success)
    throw std::runtime_error("restricted eigensolver did not converge");
  const RVec vals = es.eigenvalues();  // ascending

  const double one_thr = 1.0 - tol.one_eig;
  int b_rank = 0;
  for (int i = 0; i < d; ++i)
    if (vals[i] > one_thr) ++b_rank;
  if (b_rank == 0)
    throw InternalError("test_extremality: empty eigenvalue-1 cluster");
  rep.b_rank = b_rank;

  rep.lambda_next = (d > b_rank) ? vals[d - b_rank - 1] : 0.0;
  if (n < big_n || m < big_n) rep.lambda_next = std::max(rep.lambda_next, 0.0);

  // An eigenvalue within a decade of the cluster threshold on either side
  // (1 - lambda between one_eig/10 and 10*one_eig) cannot be told apart from
  // a true 1 at this tolerance; clean face eigenvalues sit at
  // 1 - lambda ~ 1e-10, two decades clear of the window.  The verdict is
  // flagged as borderline exactly when such eigenvalues could flip it: with
  // two or more clean cluster members the state is not extreme no matter how
  // the ambiguous ones are counted.
  int clean = 0, loose = 0;
  for (int i = 0; i < d; ++i) {
    if (vals[i] > 1.0 - 0.1 * tol.one_eig) ++clean;
    if (vals[i] > 1.0 - 10.0 * tol.one_eig) ++loose;
  }
  rep.b_rank_clean = clean;
  rep.borderline = (clean <= 1 && loose > 1);

  rep.spectrum = RVec::Zero(big_n * big_n);
  for (int i = 0; i < d; ++i) rep.spectrum[i] = vals[d - 1 - i];
  std::sort(rep.spectrum.data(), rep.spectrum.data() + rep.spectrum.size(),
            std::greater<double>());

  rep.face_basis.reserve(b_rank);
  for (int k = 0; k < b_rank; ++k) {
    const CMat small_h = detail::devectorize_dim(es.eigenvectors().col(d - 1 - k), r);
    CMat sigma = small_v * small_h * small_v.adjoint();
    if (!p_side) sigma = detail::pt_raw(sigma, dims);
    rep.face_basis.push_back(vectorize(HermitianMatrix(sigma), dims));
  }

  rep.is_extreme = (rep.b_rank == 1);
  return rep;
}

}  // namespace peres
