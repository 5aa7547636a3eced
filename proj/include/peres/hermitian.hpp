#pragma once

#include <Eigen/Dense>
#include <complex>
#include <stdexcept>

#include "peres/tolerances.hpp"

namespace peres {

using Cplx = std::complex<double>;
using CMat = Eigen::MatrixXcd;
using CVec = Eigen::VectorXcd;
using RMat = Eigen::MatrixXd;
using RVec = Eigen::VectorXd;

// Hermitian matrix with the symmetry enforced structurally: every constructor
// stores (A + A^dagger)/2.  For input that is Hermitian to the last bit the
// average reproduces it exactly, so re-wrapping never drifts.
class HermitianMatrix {
 public:
  explicit HermitianMatrix(const CMat& a) {
    if (a.rows() != a.cols() || a.rows() < 1)
      throw std::invalid_argument("HermitianMatrix: need a square matrix");
    m_ = 0.5 * (a + a.adjoint());
  }

  static HermitianMatrix zero(int n) { return HermitianMatrix(CMat::Zero(n, n)); }
  static HermitianMatrix identity(int n) {
    return HermitianMatrix(CMat::Identity(n, n));
  }

  int dim() const { return static_cast<int>(m_.rows()); }
  const CMat& mat() const { return m_; }
  double trace() const { return m_.trace().real(); }
  double norm() const { return m_.norm(); }  // Frobenius

 private:
  CMat m_;
};

inline HermitianMatrix operator+(const HermitianMatrix& a, const HermitianMatrix& b) {
  return HermitianMatrix(a.mat() + b.mat());
}
inline HermitianMatrix operator-(const HermitianMatrix& a, const HermitianMatrix& b) {
  return HermitianMatrix(a.mat() - b.mat());
}
inline HermitianMatrix operator*(double s, const HermitianMatrix& a) {
  return HermitianMatrix(s * a.mat());
}

// Trace inner product Tr(AB); real for Hermitian arguments.
inline double inner(const HermitianMatrix& a, const HermitianMatrix& b) {
  return a.mat().cwiseProduct(b.mat().conjugate()).sum().real();
}

struct SpectralDecomposition {
  RVec eigenvalues;  // sorted descending
  CMat eigenvectors; // column k pairs with eigenvalues[k]; orthonormal
};

namespace detail {

inline RVec hermitian_eigenvalues(const HermitianMatrix& a) {
  Eigen::SelfAdjointEigenSolver<CMat> es(a.mat(), Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success)
    throw std::runtime_error("hermitian eigensolver did not converge");
  return es.eigenvalues();
}

// |eigenvalue| at or below this counts as zero
inline double rank_threshold(const RVec& eigs, const Tolerances& tol) {
  return tol.zero_eig * eigs.cwiseAbs().maxCoeff();
}

}  // namespace detail

inline SpectralDecomposition spectral_decompose(const HermitianMatrix& a,
                                                const Tolerances& tol = {}) {
  Eigen::SelfAdjointEigenSolver<CMat> es(a.mat());
  if (es.info() != Eigen::Success)
    throw std::runtime_error("hermitian eigensolver did not converge");
  const int n = a.dim();
  SpectralDecomposition sd;
  sd.eigenvalues = es.eigenvalues().reverse();
  sd.eigenvectors = es.eigenvectors().rowwise().reverse();
  // cheap insurance on the backend: rebuild and compare
  const CMat rebuilt = sd.eigenvectors * sd.eigenvalues.asDiagonal() *
                       sd.eigenvectors.adjoint();
  const double scale = std::max(1.0, sd.eigenvalues.cwiseAbs().maxCoeff());
  if ((rebuilt - a.mat()).norm() > tol.recon_for(n) * scale)
    throw std::runtime_error("spectral reconstruction outside tolerance");
  return sd;
}

// Eigenvalues with |l| > zero_eig * max|l|.  The zero matrix has rank 0.
inline int numerical_rank(const HermitianMatrix& a, const Tolerances& tol = {}) {
  const RVec eigs = detail::hermitian_eigenvalues(a);
  const double thr = detail::rank_threshold(eigs, tol);
  int r = 0;
  for (int i = 0; i < eigs.size(); ++i)
    if (std::abs(eigs[i]) > thr) ++r;
  return r;
}

// Positive semidefinite up to the zero_eig band (absolute floor of 1 on the
// scale so that near-zero matrices are judged sanely).
inline bool is_psd(const HermitianMatrix& a, const Tolerances& tol = {}) {
  const RVec eigs = detail::hermitian_eigenvalues(a);
  const double scale = std::max(eigs.cwiseAbs().maxCoeff(), 1.0);
  return eigs.minCoeff() > -tol.zero_eig * scale;
}

// Orthogonal projector onto the span of the eigenvectors with eigenvalue above
// the rank threshold; rank(image_projector(A)) == numerical_rank(A) for PSD A.
inline HermitianMatrix image_projector(const HermitianMatrix& a,
                                       const Tolerances& tol = {}) {
  if (!is_psd(a, tol))
    throw std::domain_error("image_projector: input is not PSD");
  const SpectralDecomposition sd = spectral_decompose(a, tol);
  const double thr = detail::rank_threshold(sd.eigenvalues, tol);
  CMat p = CMat::Zero(a.dim(), a.dim());
  for (int i = 0; i < sd.eigenvalues.size(); ++i)
    if (sd.eigenvalues[i] > thr)
      p += sd.eigenvectors.col(i) * sd.eigenvectors.col(i).adjoint();
  return HermitianMatrix(p);
}

}  // namespace peres
