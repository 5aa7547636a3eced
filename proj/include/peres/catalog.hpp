#pragma once

#include <cmath>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>

#include "peres/bipartite.hpp"

namespace peres {

// A state with a name, a provenance note, and (when the source states them)
// expected properties that tests can pin against.
struct NamedState {
  std::string name;
  DensityMatrix rho;
  std::optional<std::pair<int, int>> expected_rank_pair;
  std::optional<bool> expected_extreme;
  std::string source;
};

inline NamedState maximally_mixed(const BipartiteDims& dims) {
  const int n = dims.n();
  DensityMatrix rho(HermitianMatrix(CMat::Identity(n, n) / double(n)), dims);
  return {"mixed:" + std::to_string(dims.n_a) + "x" + std::to_string(dims.n_b),
          std::move(rho),
          std::make_pair(n, n),
          n == 1,  // the single point of a 1x1 system is trivially extreme
          "uniform state 1/N"};
}

// (|00> + |11>)/sqrt(2) on 2x2 — maximally entangled, so not PPT.
inline NamedState bell_state() {
  CVec psi = CVec::Zero(4);
  psi[0] = psi[3] = 1.0 / std::sqrt(2.0);
  DensityMatrix rho(HermitianMatrix(psi * psi.adjoint()), BipartiteDims(2, 2));
  return {"bell", std::move(rho), std::make_pair(1, 4), std::nullopt,
          "maximally entangled qubit pair"};
}

// Tiles construction: the five-member unextendible product basis on 3x3 of
// Bennett, DiVincenzo, Mor, Shor, Smolin and Terhal, Phys. Rev. Lett. 82,
// 5385 (1999); the state is the normalized projector onto its complement.
// PPT with ranks (4,4), and an extreme point of the PPT set.
inline NamedState upb_tiles_state() {
  const BipartiteDims dims(3, 3);
  const double s2 = 1.0 / std::sqrt(2.0);
  const double th = 1.0 / 3.0;
  auto ket = [](double c0, double c1, double c2) {
    CVec v(3);
    v << c0, c1, c2;
    return v;
  };
  const CVec a[5] = {ket(1, 0, 0), ket(0, 0, 1), ket(s2, -s2, 0),
                     ket(0, s2, -s2), ket(th, th, th)};
  const CVec b[5] = {ket(s2, -s2, 0), ket(0, s2, -s2), ket(0, 0, 1),
                     ket(1, 0, 0), ket(1, 1, 1)};
  CMat sum = CMat::Zero(9, 9);
  for (int i = 0; i < 5; ++i) {
    CVec psi(9);
    for (int p = 0; p < 3; ++p)
      for (int q = 0; q < 3; ++q) psi[p * 3 + q] = a[i][p] * b[i][q];
    // construction self-check: unit product vectors, mutually orthogonal
    if (std::abs(psi.norm() - 1.0) > 1e-12)
      throw std::logic_error("tiles state: basis vector not normalized");
    for (int j = 0; j < i; ++j) {
      CVec prev(9);
      for (int p = 0; p < 3; ++p)
        for (int q = 0; q < 3; ++q) prev[p * 3 + q] = a[j][p] * b[j][q];
      if (std::abs(psi.dot(prev)) > 1e-12)
        throw std::logic_error("tiles state: basis vectors not orthogonal");
    }
    sum += psi * psi.adjoint();
  }
  const HermitianMatrix h(0.25 * (CMat::Identity(9, 9) - sum));
  DensityMatrix rho(h, dims);
  if (!is_ppt(rho))
    throw std::logic_error("tiles state: construction is not PPT");
  if (rank_pair(rho) != std::make_pair(4, 4))
    throw std::logic_error("tiles state: construction has wrong ranks");
  return {"upb-tiles", std::move(rho), std::make_pair(4, 4), true,
          "complement of the Tiles unextendible product basis, "
          "Bennett et al., Phys. Rev. Lett. 82, 5385 (1999)"};
}

// One-parameter 3x3 family of P. Horodecki, Phys. Lett. A 232, 333 (1997):
// PPT for every a in [0,1] and entangled (hence not extreme and not separable)
// strictly inside the interval.
inline NamedState horodecki_state(double a) {
  if (!(a > 0.0 && a < 1.0))
    throw std::invalid_argument("horodecki_state: parameter must be in (0,1)");
  const BipartiteDims dims(3, 3);
  const double norm = 1.0 / (8.0 * a + 1.0);
  const double c = (1.0 + a) / 2.0;
  const double s = std::sqrt(1.0 - a * a) / 2.0;
  CMat m = CMat::Zero(9, 9);
  for (int i : {0, 1, 2, 3, 4, 5, 7}) m(i, i) = a;
  m(6, 6) = c;
  m(8, 8) = c;
  m(0, 4) = m(4, 0) = a;
  m(0, 8) = m(8, 0) = a;
  m(4, 8) = m(8, 4) = a;
  m(6, 8) = m(8, 6) = s;
  DensityMatrix rho(HermitianMatrix(norm * m), dims);
  if (!is_ppt(rho))
    throw std::logic_error("horodecki state: construction is not PPT");
  return {"horodecki:" + std::to_string(a), std::move(rho), std::nullopt,
          false, "P. Horodecki, Phys. Lett. A 232, 333 (1997)"};
}

// "mixed:AxB", "bell", "upb-tiles", "horodecki:<a>"
inline NamedState parse_state_spec(const std::string& spec) {
  if (spec == "bell") return bell_state();
  if (spec == "upb-tiles") return upb_tiles_state();
  if (spec.rfind("mixed:", 0) == 0)
    return maximally_mixed(parse_dims(spec.substr(6)));
  if (spec.rfind("horodecki:", 0) == 0) {
    double a = 0.0;
    try {
      size_t used = 0;
      a = std::stod(spec.substr(10), &used);
      if (used != spec.size() - 10) throw std::invalid_argument("trail");
    } catch (const std::exception&) {
      throw std::invalid_argument("state: bad horodecki parameter in '" + spec + "'");
    }
    return horodecki_state(a);
  }
  throw std::invalid_argument("state: unknown catalog name '" + spec + "'");
}

}  // namespace peres
