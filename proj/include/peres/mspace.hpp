#pragma once

#include <cmath>
#include <stdexcept>
#include <vector>

#include "peres/bipartite.hpp"

namespace peres {

// The N x N Hermitian matrices form a real Hilbert space of dimension N^2
// under <A,B> = Tr(AB).  Orthonormal basis used everywhere, in this order:
//   k in [0,N):                E_kk
//   then for each pair i<j (lexicographic):
//       (E_ij + E_ji)/sqrt(2)  and  i(E_ij - E_ji)/sqrt(2)
// Linear maps on Hermitian matrices become real N^2 x N^2 matrices in these
// coordinates; conjugations A -> PAP by Hermitian projectors become symmetric
// PSD matrices, and the partial transpose becomes a signed permutation.

struct MVector {
  RVec coords;
  BipartiteDims dims;
};

struct SuperOperator {
  RMat mat;
  BipartiteDims dims;
};

namespace detail {

// ordinal of the pair (i,j), i<j, in lexicographic order
inline int pair_ordinal(int i, int j, int n) {
  return i * n - i * (i + 1) / 2 + (j - i - 1);
}

inline RVec vectorize_dim(const CMat& a, int n) {
  const double s2 = std::sqrt(2.0);
  RVec v(n * n);
  for (int i = 0; i < n; ++i) v[i] = a(i, i).real();
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      const int k = n + 2 * pair_ordinal(i, j, n);
      v[k] = s2 * a(i, j).real();
      v[k + 1] = s2 * a(i, j).imag();
    }
  return v;
}

inline CMat devectorize_dim(const RVec& v, int n) {
  const double inv_s2 = 1.0 / std::sqrt(2.0);
  CMat a = CMat::Zero(n, n);
  for (int i = 0; i < n; ++i) a(i, i) = v[i];
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      const int k = n + 2 * pair_ordinal(i, j, n);
      a(i, j) = Cplx(v[k] * inv_s2, v[k + 1] * inv_s2);
      a(j, i) = std::conj(a(i, j));
    }
  return a;
}

inline void require_projector(const HermitianMatrix& p, const char* who) {
  const CMat& m = p.mat();
  if ((m * m - m).norm() > 1e-8 * p.dim())
    throw std::invalid_argument(std::string(who) +
                                ": input is not an orthogonal projector");
}

}  // namespace detail

// The N^2 basis matrices in coordinate order.
inline std::vector<HermitianMatrix> basis(const BipartiteDims& dims) {
  const int n = dims.n();
  std::vector<HermitianMatrix> out;
  out.reserve(n * n);
  for (int k = 0; k < n * n; ++k) {
    RVec e = RVec::Zero(n * n);
    e[k] = 1.0;
    out.emplace_back(detail::devectorize_dim(e, n));
  }
  return out;
}

// Coordinates of A: coords[k] = Tr(basis_k * A).
inline MVector vectorize(const HermitianMatrix& a, const BipartiteDims& dims) {
  if (a.dim() != dims.n())
    throw std::invalid_argument("vectorize: dims mismatch");
  return {detail::vectorize_dim(a.mat(), dims.n()), dims};
}

inline HermitianMatrix devectorize(const MVector& v) {
  const int n = v.dims.n();
  if (v.coords.size() != static_cast<long>(n) * n)
    throw std::invalid_argument("devectorize: coordinate length mismatch");
  return HermitianMatrix(detail::devectorize_dim(v.coords, n));
}

// Matrix of A -> PAP for an orthogonal projector P.  Column k is built from
// P E_ij P = (P e_i)(e_j^T P), i.e. outer products of columns of P.
inline SuperOperator conjugation_superop(const HermitianMatrix& p,
                                         const BipartiteDims& dims) {
  if (p.dim() != dims.n())
    throw std::invalid_argument("conjugation_superop: dims mismatch");
  detail::require_projector(p, "conjugation_superop");
  const int n = dims.n();
  const double inv_s2 = 1.0 / std::sqrt(2.0);
  const CMat& pm = p.mat();
  RMat s(n * n, n * n);
  CMat c(n, n);
  for (int i = 0; i < n; ++i) {
    c.noalias() = pm.col(i) * pm.col(i).adjoint();
    s.col(i) = detail::vectorize_dim(c, n);
  }
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      const int k = n + 2 * detail::pair_ordinal(i, j, n);
      const CMat cij = pm.col(i) * pm.col(j).adjoint();
      c = inv_s2 * (cij + cij.adjoint());
      s.col(k) = detail::vectorize_dim(c, n);
      c = Cplx(0, 1) * inv_s2 * (cij - cij.adjoint());
      s.col(k + 1) = detail::vectorize_dim(c, n);
    }
  return {std::move(s), dims};
}

// Matrix of the partial transpose in the Hermitian basis.  The map permutes
// basis elements up to sign, so the entries are exactly 0 and +-1 and the
// matrix is exactly symmetric and involutive.
inline SuperOperator pt_superop(const BipartiteDims& dims) {
  const int na = dims.n_a, nb = dims.n_b, n = dims.n();
  RMat s = RMat::Zero(n * n, n * n);
  for (int i = 0; i < n; ++i) s(i, i) = 1.0;  // diagonal entries are fixed
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      const int a = i / nb, b = i % nb, a2 = j / nb, b2 = j % nb;
      const int ip = a * nb + b2, jp = a2 * nb + b;  // images of (i,j)
      const int k = n + 2 * detail::pair_ordinal(i, j, n);
      if (ip < jp) {
        const int kp = n + 2 * detail::pair_ordinal(ip, jp, n);
        s(kp, k) = 1.0;
        s(kp + 1, k + 1) = 1.0;
      } else {  // ip > jp; reversed pair flips the sign of the imaginary element
        const int kp = n + 2 * detail::pair_ordinal(jp, ip, n);
        s(kp, k) = 1.0;
        s(kp + 1, k + 1) = -1.0;
      }
    }
  return {std::move(s), dims};
}

// P o PT o Q o PT o P with P, Q orthogonal projectors: the product whose
// eigenvalue-1 subspace consists of the A with PAP = A and Q(A^PT)Q = A^PT.
// All eigenvalues lie in [0,1].
inline SuperOperator combined_operator(const HermitianMatrix& p,
                                       const HermitianMatrix& q,
                                       const BipartiteDims& dims) {
  detail::require_projector(p, "combined_operator");
  detail::require_projector(q, "combined_operator");
  const SuperOperator sp = conjugation_superop(p, dims);
  const SuperOperator sq = conjugation_superop(q, dims);
  const SuperOperator pi = pt_superop(dims);
  RMat qbar = pi.mat * sq.mat * pi.mat;
  RMat c = sp.mat * qbar * sp.mat;
  c = 0.5 * (c + c.transpose()).eval();
  return {std::move(c), dims};
}

}  // namespace peres
