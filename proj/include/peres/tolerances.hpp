#pragma once

#include <stdexcept>

namespace peres {

// Numerical thresholds used throughout the library.  Every comparison that
// decides a rank, a set membership or a termination goes through one of these.
struct Tolerances {
  double zero_eig = 1e-9;  // |eigenvalue| below zero_eig*max|eig| counts as zero
  double one_eig = 1e-6;   // eigenvalue above 1-one_eig counts as one
  double recon = 1e-10;    // spectral reconstruction budget, per matrix dimension
  double orth = 1e-10;     // eigenvector orthonormality budget
  double bisect = 1e-12;   // relative x-resolution of the boundary line search

  // reconstruction budget grows linearly with the matrix dimension
  double recon_for(int dim) const { return recon * dim; }

  void validate() const {
    for (double t : {zero_eig, one_eig, recon, orth, bisect})
      if (!(t > 0.0 && t < 1e-3))
        throw std::invalid_argument(
            "Tolerances: every threshold must lie in (0, 1e-3)");
  }
};

}  // namespace peres
