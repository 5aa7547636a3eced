#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "peres/sections.hpp"

using namespace peres;

namespace {

// Bell-direction plane through the center of the two-qubit state space:
// dir1 points from the maximally mixed state towards the Bell state, dir2 is
// a diagonal traceless direction orthogonal to it.
SectionSpec bell_plane(int nx, int ny, double ext) {
  const BipartiteDims dims(2, 2);
  CVec psi = CVec::Zero(4);
  psi[0] = psi[3] = 1.0 / std::sqrt(2.0);
  const CMat bell = psi * psi.adjoint();
  HermitianMatrix d1(bell - 0.25 * CMat::Identity(4, 4));
  d1 = (1.0 / d1.norm()) * d1;
  CMat d = CMat::Zero(4, 4);
  d(0, 0) = d(2, 2) = 0.5;
  d(1, 1) = d(3, 3) = -0.5;
  const HermitianMatrix d2(d);
  return {HermitianMatrix(0.25 * CMat::Identity(4, 4)),
          dims,
          d1,
          d2,
          nx,
          ny,
          -ext,
          ext,
          -ext,
          ext};
}

}  // namespace

TEST_CASE("section specs validate their geometry", "[sections]") {
  SectionSpec spec = bell_plane(5, 5, 0.5);
  CHECK_NOTHROW(spec.validate());
  SectionSpec bad = spec;
  bad.nx = 1;
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
  bad = spec;
  bad.x1 = bad.x0;
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
  bad = spec;
  bad.dir1 = HermitianMatrix::identity(4);  // neither traceless nor unit norm
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
  bad = spec;
  bad.dir2 = spec.dir1;  // not orthogonal to dir1
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
}

TEST_CASE("center sample of a section through the mixed state", "[sections]") {
  const SectionSpec spec = bell_plane(5, 5, 0.4);
  const auto samples = sample_section(spec);
  REQUIRE(samples.size() == 25);
  // grid is odd, so (0,0) is sampled
  bool seen = false;
  for (const SectionSample& s : samples) {
    if (std::abs(s.x) > 1e-12 || std::abs(s.y) > 1e-12) continue;
    seen = true;
    CHECK(s.region == Region::PPT);
    CHECK_THAT(s.min_eig_rho, Catch::Matchers::WithinAbs(0.25, 1e-12));
    CHECK_THAT(s.min_eig_rho_pt, Catch::Matchers::WithinAbs(0.25, 1e-12));
  }
  REQUIRE(seen);
}

TEST_CASE("the Bell direction exposes a NOT_PPT region", "[sections]") {
  // along dir1 the state is a mix of the Bell state and noise: positive but
  // with a negative partial transpose once the Bell weight passes 1/3
  const auto samples = sample_section(bell_plane(41, 3, 0.8));
  bool seen_ppt = false, seen_not_ppt = false, seen_not_psd = false;
  for (const SectionSample& s : samples) {
    if (s.region == Region::PPT) seen_ppt = true;
    if (s.region == Region::NOT_PPT) {
      seen_not_ppt = true;
      CHECK(s.min_eig_rho > 0.0);
      CHECK(s.min_eig_rho_pt < 0.0);
    }
    if (s.region == Region::NOT_PSD) seen_not_psd = true;
  }
  CHECK(seen_ppt);
  CHECK(seen_not_ppt);
  CHECK(seen_not_psd);
}

TEST_CASE("region labels agree with independent membership checks",
          "[sections]") {
  const SectionSpec spec = bell_plane(15, 15, 0.7);
  const auto samples = sample_section(spec);
  const Tolerances tol;
  for (const SectionSample& s : samples) {
    // skip samples too close to a boundary to classify robustly
    if (std::abs(s.min_eig_rho) < 1e-7 || std::abs(s.min_eig_rho_pt) < 1e-7)
      continue;
    const HermitianMatrix h(spec.origin.mat() + s.x * spec.dir1.mat() +
                            s.y * spec.dir2.mat());
    if (s.min_eig_rho < 0.0) {
      REQUIRE(s.region == Region::NOT_PSD);
      REQUIRE_FALSE(is_psd(h, tol));
    } else {
      const DensityMatrix rho(h, spec.dims, tol);
      REQUIRE(s.region == (is_ppt(rho, tol) ? Region::PPT : Region::NOT_PPT));
    }
  }
}

TEST_CASE("minimum eigenvalues are continuous along grid rows", "[sections]") {
  const SectionSpec spec = bell_plane(21, 5, 0.6);
  const auto samples = sample_section(spec);
  const double dx = (spec.x1 - spec.x0) / (spec.nx - 1);
  for (int iy = 0; iy < spec.ny; ++iy)
    for (int ix = 1; ix < spec.nx; ++ix) {
      const SectionSample& a = samples[iy * spec.nx + ix - 1];
      const SectionSample& b = samples[iy * spec.nx + ix];
      CHECK(std::abs(b.min_eig_rho - a.min_eig_rho) <= 2.0 * dx);
      CHECK(std::abs(b.min_eig_rho_pt - a.min_eig_rho_pt) <= 2.0 * dx);
    }
}

TEST_CASE("the PPT region is star shaped around the mixed state", "[sections]") {
  const SectionSpec spec = bell_plane(11, 11, 0.7);
  const auto samples = sample_section(spec);
  for (const SectionSample& s : samples) {
    if (s.region != Region::PPT) continue;
    for (double t : {0.25, 0.5, 0.75}) {
      const HermitianMatrix h(spec.origin.mat() + t * s.x * spec.dir1.mat() +
                              t * s.y * spec.dir2.mat());
      const double me = detail::hermitian_eigenvalues(h).minCoeff();
      const double mept =
          detail::hermitian_eigenvalues(partial_transpose(h, spec.dims))
              .minCoeff();
      REQUIRE(me > -1e-9);
      REQUIRE(mept > -1e-9);
    }
  }
}

TEST_CASE("face sections demand a two-dimensional slice", "[sections]") {
  const DensityMatrix tiles = upb_tiles_state().rho;
  const ExtremalityReport rep = test_extremality(tiles);
  CHECK_THROWS_AS(face_section(tiles, rep, 0, 5, 5, 8),
                  std::invalid_argument);  // b_rank 1
  const DensityMatrix rho = horodecki_state(0.42).rho;
  const ExtremalityReport hrep = test_extremality(rho);
  CHECK_THROWS_AS(face_section(rho, hrep, 0, 5, 5, 2),
                  std::invalid_argument);  // too few rays
}

TEST_CASE("face sections surround the state with boundary points",
          "[sections]") {
  const DensityMatrix rho = horodecki_state(0.42).rho;
  const ExtremalityReport rep = test_extremality(rho);
  REQUIRE(rep.b_rank >= 3);
  const FaceSectionResult res = face_section(rho, rep, 3, 9, 9, 12);
  REQUIRE(res.boundary.size() == 12);
  for (const FaceBoundaryPoint& p : res.boundary) {
    CHECK(p.t > 0.0);
    CHECK(p.n <= rep.n);
    CHECK(p.m <= rep.m);
    CHECK(p.n + p.m < rep.n + rep.m);  // every ray leaves the open face
  }
  // the sampled grid is centred on the state and covers the rays
  double t_max = 0.0;
  for (const FaceBoundaryPoint& p : res.boundary) t_max = std::max(t_max, p.t);
  CHECK(res.spec.x1 >= t_max);
  CHECK(res.samples.size() == 81);
  // the centre of the face section is PPT
  bool seen_center = false;
  for (const SectionSample& s : res.samples)
    if (std::abs(s.x) < 1e-12 && std::abs(s.y) < 1e-12) {
      seen_center = true;
      CHECK(s.region == Region::PPT);
    }
  REQUIRE(seen_center);
}
