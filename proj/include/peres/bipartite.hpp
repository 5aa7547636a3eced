#pragma once

#include <cctype>
#include <cmath>
#include <stdexcept>
#include <string>
#include <unsupported/Eigen/KroneckerProduct>
#include <utility>

#include "peres/hermitian.hpp"

namespace peres {

// Composite index convention: basis state (a, b) of the n_a x n_b system sits
// at row/column a*n_b + b (subsystem A major).
struct BipartiteDims {
  int n_a = 0;
  int n_b = 0;

  BipartiteDims() = default;
  BipartiteDims(int a, int b) : n_a(a), n_b(b) {
    if (a < 1 || b < 1)
      throw std::invalid_argument("BipartiteDims: factors must be >= 1");
  }
  int n() const { return n_a * n_b; }
  bool operator==(const BipartiteDims& o) const = default;
};

// "AxB" with positive integer factors, e.g. "3x3"
inline BipartiteDims parse_dims(const std::string& s) {
  const auto x = s.find('x');
  if (x == std::string::npos || x == 0 || x + 1 == s.size())
    throw std::invalid_argument("dims: expected AxB, got '" + s + "'");
  for (size_t i = 0; i < s.size(); ++i)
    if (i != x && !std::isdigit(static_cast<unsigned char>(s[i])))
      throw std::invalid_argument("dims: expected AxB, got '" + s + "'");
  const int a = std::stoi(s.substr(0, x));
  const int b = std::stoi(s.substr(x + 1));
  if (a < 1 || b < 1)
    throw std::invalid_argument("dims: factors must be >= 1 in '" + s + "'");
  return BipartiteDims(a, b);
}

// Transpose of the B factor only, as a pure index permutation:
//   out[(a,b'),(a',b)] = in[(a,b),(a',b')]
// No arithmetic is performed, so applying it twice restores the input exactly.
// Transposing the A factor instead is the composition with the full transpose:
// PT_A(X) = PT_B(X)^T.
inline HermitianMatrix partial_transpose(const HermitianMatrix& a,
                                         const BipartiteDims& dims) {
  if (a.dim() != dims.n())
    throw std::invalid_argument("partial_transpose: dims mismatch");
  const int na = dims.n_a, nb = dims.n_b;
  CMat out(dims.n(), dims.n());
  for (int p = 0; p < na; ++p)
    for (int b = 0; b < nb; ++b)
      for (int q = 0; q < na; ++q)
        for (int b2 = 0; b2 < nb; ++b2)
          out(p * nb + b2, q * nb + b) = a.mat()(p * nb + b, q * nb + b2);
  return HermitianMatrix(out);
}

// Unit-trace PSD matrix tagged with its tensor factorization.
class DensityMatrix {
 public:
  DensityMatrix(const HermitianMatrix& m, const BipartiteDims& dims,
                const Tolerances& tol = {})
      : m_(m), dims_(dims) {
    if (m.dim() != dims.n())
      throw std::invalid_argument("DensityMatrix: dims mismatch");
    if (std::abs(m.trace() - 1.0) > 1e-12)
      throw std::invalid_argument("DensityMatrix: trace must be 1");
    if (!is_psd(m, tol))
      throw std::invalid_argument("DensityMatrix: not positive semidefinite");
  }

  const HermitianMatrix& hermitian() const { return m_; }
  const CMat& mat() const { return m_.mat(); }
  const BipartiteDims& dims() const { return dims_; }
  int dim() const { return m_.dim(); }

 private:
  HermitianMatrix m_;
  BipartiteDims dims_;
};

// rho_a (x) rho_b; both factors must be states themselves.
inline DensityMatrix product_state(const HermitianMatrix& rho_a,
                                   const HermitianMatrix& rho_b,
                                   const Tolerances& tol = {}) {
  if (std::abs(rho_a.trace() - 1.0) > 1e-12 ||
      std::abs(rho_b.trace() - 1.0) > 1e-12)
    throw std::invalid_argument("product_state: factors must have trace 1");
  if (!is_psd(rho_a, tol) || !is_psd(rho_b, tol))
    throw std::invalid_argument("product_state: factors must be PSD");
  const CMat prod = Eigen::kroneckerProduct(rho_a.mat(), rho_b.mat());
  return DensityMatrix(HermitianMatrix(prod),
                       BipartiteDims(rho_a.dim(), rho_b.dim()), tol);
}

inline bool is_ppt(const DensityMatrix& rho, const Tolerances& tol = {}) {
  return is_psd(partial_transpose(rho.hermitian(), rho.dims()), tol);
}

// (rank rho, rank rho^PT)
inline std::pair<int, int> rank_pair(const DensityMatrix& rho,
                                     const Tolerances& tol = {}) {
  return {numerical_rank(rho.hermitian(), tol),
          numerical_rank(partial_transpose(rho.hermitian(), rho.dims()), tol)};
}

}  // namespace peres
