#pragma once

#include <cmath>
#include <random>
#include <stdexcept>
#include <vector>

#include "peres/search.hpp"

namespace peres {

// Two-dimensional affine slice of the trace-1 Hermitian matrices:
// rho(x, y) = origin + x*dir1 + y*dir2 with traceless orthonormal directions.
struct SectionSpec {
  HermitianMatrix origin;
  BipartiteDims dims;
  HermitianMatrix dir1;
  HermitianMatrix dir2;
  int nx = 41, ny = 41;
  double x0 = -1.0, x1 = 1.0, y0 = -1.0, y1 = 1.0;

  void validate() const {
    if (origin.dim() != dims.n() || dir1.dim() != dims.n() ||
        dir2.dim() != dims.n())
      throw std::invalid_argument("SectionSpec: dims mismatch");
    if (nx < 2 || ny < 2)
      throw std::invalid_argument("SectionSpec: grid must be at least 2x2");
    if (!(x1 > x0) || !(y1 > y0))
      throw std::invalid_argument("SectionSpec: empty extent");
    if (std::abs(dir1.trace()) > 1e-8 || std::abs(dir2.trace()) > 1e-8)
      throw std::invalid_argument("SectionSpec: directions must be traceless");
    if (std::abs(dir1.norm() - 1.0) > 1e-8 || std::abs(dir2.norm() - 1.0) > 1e-8)
      throw std::invalid_argument("SectionSpec: directions must be unit norm");
    if (std::abs(inner(dir1, dir2)) > 1e-8)
      throw std::invalid_argument("SectionSpec: directions must be orthogonal");
  }
};

enum class Region { NOT_PSD, PPT, NOT_PPT };

inline const char* region_name(Region r) {
  switch (r) {
    case Region::NOT_PSD: return "NOT_PSD";
    case Region::PPT: return "PPT";
    default: return "NOT_PPT";
  }
}

struct SectionSample {
  double x = 0, y = 0;
  double min_eig_rho = 0;
  double min_eig_rho_pt = 0;
  Region region = Region::NOT_PSD;
};

// Minimum eigenvalues of rho(x,y) and its partial transpose on the grid;
// row-major with x varying fastest.  Classification uses the absolute
// zero_eig band (the section lives on the trace-1 slice, scale 1): a sample is
// PPT iff both minima exceed -zero_eig, NOT_PSD if the state itself fails.
inline std::vector<SectionSample> sample_section(const SectionSpec& spec,
                                                 const Tolerances& tol = {}) {
  spec.validate();
  tol.validate();
  std::vector<SectionSample> out;
  out.reserve(static_cast<size_t>(spec.nx) * spec.ny);
  for (int iy = 0; iy < spec.ny; ++iy) {
    const double y = spec.y0 + (spec.y1 - spec.y0) * iy / (spec.ny - 1);
    for (int ix = 0; ix < spec.nx; ++ix) {
      const double x = spec.x0 + (spec.x1 - spec.x0) * ix / (spec.nx - 1);
      const HermitianMatrix h(spec.origin.mat() + x * spec.dir1.mat() +
                              y * spec.dir2.mat());
      SectionSample s;
      s.x = x;
      s.y = y;
      s.min_eig_rho = detail::hermitian_eigenvalues(h).minCoeff();
      s.min_eig_rho_pt =
          detail::hermitian_eigenvalues(partial_transpose(h, spec.dims)).minCoeff();
      if (s.min_eig_rho <= -tol.zero_eig)
        s.region = Region::NOT_PSD;
      else if (s.min_eig_rho_pt <= -tol.zero_eig)
        s.region = Region::NOT_PPT;
      else
        s.region = Region::PPT;
      out.push_back(s);
    }
  }
  return out;
}

struct FaceBoundaryPoint {
  double theta = 0;       // ray angle in the (dir1, dir2) plane
  double x = 0, y = 0;    // boundary coordinates t*(cos,sin)
  double t = 0;           // distance from the origin state
  int n = 0, m = 0;
  int b_rank = 0;
  bool is_extreme = false;
  bool borderline = false;
};

struct FaceSectionResult {
  SectionSpec spec;  // directions chosen inside the face, extent auto-sized
  std::vector<SectionSample> samples;
  std::vector<FaceBoundaryPoint> boundary;
};

// Section through the face of rho described by report: two random traceless
// orthonormal directions inside span(face_basis) (needs b_rank >= 3), sampled
// on a grid auto-scaled to the face, plus n_rays boundary states located by
// radial line search and classified by the extremality test.
inline FaceSectionResult face_section(const DensityMatrix& rho,
                                      const ExtremalityReport& report,
                                      std::uint64_t rng_seed, int nx, int ny,
                                      int n_rays, const Tolerances& tol = {}) {
  tol.validate();
  if (report.b_rank < 3 ||
      report.face_basis.size() != static_cast<size_t>(report.b_rank))
    throw std::invalid_argument(
        "face_section: need b_rank >= 3 for a two-dimensional slice");
  if (n_rays < 4) throw std::invalid_argument("face_section: need n_rays >= 4");

  std::mt19937_64 rng(rng_seed);
  const HermitianMatrix d1 = random_face_direction(report, rho, rng);
  HermitianMatrix d2 = d1;  // placeholder; replaced below
  for (int attempt = 0;; ++attempt) {
    const HermitianMatrix cand = random_face_direction(report, rho, rng);
    const HermitianMatrix ortho(cand.mat() - inner(cand, d1) * d1.mat());
    if (ortho.norm() > 1e-6) {
      d2 = (1.0 / ortho.norm()) * ortho;
      break;
    }
    if (attempt >= 100)
      throw InternalError("face_section: no second independent direction");
  }

  FaceSectionResult res{{rho.hermitian(), rho.dims(), d1, d2, nx, ny},
                        {},
                        {}};
  double t_max = 0.0;
  for (int j = 0; j < n_rays; ++j) {
    const double theta = 2.0 * M_PI * j / n_rays;
    const HermitianMatrix d(std::cos(theta) * d1.mat() +
                            std::sin(theta) * d2.mat());
    auto [state, t] = line_search_to_boundary(rho, d, 1, tol);
    const ExtremalityReport brep = test_extremality(state, tol);
    res.boundary.push_back({theta, t * std::cos(theta), t * std::sin(theta), t,
                            brep.n, brep.m, brep.b_rank, brep.is_extreme,
                            brep.borderline});
    t_max = std::max(t_max, t);
  }

  const double extent = 1.1 * t_max;
  res.spec.x0 = res.spec.y0 = -extent;
  res.spec.x1 = res.spec.y1 = extent;
  res.samples = sample_section(res.spec, tol);
  return res;
}

}  // namespace peres
