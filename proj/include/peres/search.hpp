#pragma once

#include <cstdint>
#include <exception>
#include <map>
#include <optional>
#include <random>
#include <thread>
#include <utility>
#include <vector>

#include "peres/catalog.hpp"
#include "peres/extremality.hpp"

namespace peres {

// Walk of strictly decreasing rank pairs ending at an extreme point.
struct SearchTrace {
  std::vector<DensityMatrix> states;             // visited states, start first
  std::vector<std::pair<int, int>> rank_pairs;   // (n_k, m_k) per state
  std::vector<double> step_sizes;                // signed x chosen at each step
  std::uint64_t seed = 0;
  ExtremalityReport final_report;                // report at the last state
  bool flagged = false;  // borderline spectrum stopped the walk early
};

// Deterministic per-run seed derivation (splitmix64 round on master + index),
// so survey results do not depend on how runs are scheduled.
inline std::uint64_t split_seed(std::uint64_t master, std::uint64_t index) {
  std::uint64_t z = master + 0x9E3779B97F4A7C15ull * (index + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

// Remove the trace component along rho: sigma - Tr(sigma) rho.  Directions in
// the face of rho stay in the face under this, since rho itself belongs to it.
inline HermitianMatrix traceless_direction(const HermitianMatrix& sigma,
                                           const DensityMatrix& rho) {
  if (sigma.dim() != rho.dim())
    throw std::invalid_argument("traceless_direction: dims mismatch");
  return HermitianMatrix(sigma.mat() - sigma.trace() * rho.mat());
}

// Random unit-norm traceless direction inside the face of rho described by
// report.face_basis.  Only the unambiguous cluster members are mixed in (the
// basis is ordered by descending eigenvalue, so they come first): a member
// whose eigenvalue merely straddles the cluster threshold is not a reliable
// face direction and would stall the line search.  Needs two clean members;
// with exactly two the traceless slice is one-dimensional, so the output is
// unique up to sign.
inline HermitianMatrix random_face_direction(const ExtremalityReport& report,
                                             const DensityMatrix& rho,
                                             std::mt19937_64& rng) {
  const int k = std::min(report.b_rank_clean, report.b_rank);
  if (k < 2 || report.face_basis.size() != static_cast<size_t>(report.b_rank))
    throw std::invalid_argument(
        "random_face_direction: need two unambiguous face members");
  std::normal_distribution<double> gauss(0.0, 1.0);
  for (int attempt = 0; attempt < 100; ++attempt) {
    RVec v = RVec::Zero(report.face_basis[0].coords.size());
    for (int i = 0; i < k; ++i) v += gauss(rng) * report.face_basis[i].coords;
    const HermitianMatrix sigma1 =
        traceless_direction(devectorize({v, rho.dims()}), rho);
    const double nrm = sigma1.norm();
    if (nrm > 1e-8) return (1.0 / nrm) * sigma1;
  }
  throw InternalError("random_face_direction: no traceless component found");
}

inline HermitianMatrix random_face_direction(const ExtremalityReport& report,
                                             const DensityMatrix& rho,
                                             std::uint64_t rng_seed) {
  std::mt19937_64 rng(rng_seed);
  return random_face_direction(report, rho, rng);
}

namespace detail {

// Orthogonal projection of rho onto the span of its own face basis, followed
// by trace renormalization.  In exact arithmetic the state already lies in
// that span; numerically the projection pushes the near-zero eigenvalues of
// both rho and its partial transpose from the edge of the zero band down to
// round-off.  Without it a state accepted right at the band edge leaves the
// next line search no room to move.
inline DensityMatrix face_project(const DensityMatrix& rho,
                                  const std::vector<MVector>& face_basis,
                                  const Tolerances& tol) {
  const MVector v = vectorize(rho.hermitian(), rho.dims());
  RVec acc = RVec::Zero(v.coords.size());
  for (const MVector& f : face_basis)
    acc += f.coords.dot(v.coords) * f.coords;
  const HermitianMatrix h = devectorize({acc, rho.dims()});
  const double tr = h.trace();
  if (!(tr > 0.5))
    throw InternalError("face_project: projected state lost its trace");
  return DensityMatrix((1.0 / tr) * h, rho.dims(), tol);
}

// Worst normalized PSD margin of t and its partial transpose: the minimum
// over both spectra of lambda_min divided by that side's zero band
// (zero_eig * max|lambda|).  Zero on the boundary, -1 a full band outside.
inline double ppt_margin(const CMat& t, const BipartiteDims& dims,
                         const Tolerances& tol) {
  const HermitianMatrix h(t);
  const RVec e = hermitian_eigenvalues(h);
  const RVec ept = hermitian_eigenvalues(partial_transpose(h, dims));
  return std::min(
      e.minCoeff() / (tol.zero_eig * e.cwiseAbs().maxCoeff()),
      ept.minCoeff() / (tol.zero_eig * ept.cwiseAbs().maxCoeff()));
}

// Inside the PPT set up to 0.999 of the relative zero_eig band, on both
// spectra.  Bisection parks the crossed eigenvalue right where this predicate
// flips.  The factor keeps that eigenvalue strictly inside the full band, so
// the rank count afterwards sees an unambiguous zero (at the same scale,
// round-off would decide the rank), while staying close enough to the band
// edge that stepping a whole bisect resolution further leaves the band.
inline bool ppt_within_band(const CMat& t, const BipartiteDims& dims,
                            const Tolerances& tol) {
  return ppt_margin(t, dims, tol) > -0.999;
}

}  // namespace detail

// Walk tau(x) = rho + x*direction*sigma to the last x (geometric bracketing,
// then bisection to a relative resolution of tol.bisect) at which both tau and
// its partial transpose are PSD within the zero_eig band.  The returned state
// is cleaned up: the landing is backed off to sit just past the exact
// crossing (see below), eigenvalues in (-band, 0) are truncated to zero and
// the trace is renormalized, so the eigenvalue that hit the boundary counts
// as an exact rank drop afterwards.  Returns the new state and the signed
// maximal step x; the state corresponds to an |x| smaller by the backoff.
inline std::pair<DensityMatrix, double> line_search_to_boundary(
    const DensityMatrix& rho, const HermitianMatrix& sigma, int direction,
    const Tolerances& tol = {}) {
  tol.validate();
  if (direction != 1 && direction != -1)
    throw std::invalid_argument("line_search_to_boundary: direction must be +-1");
  if (sigma.dim() != rho.dim())
    throw std::invalid_argument("line_search_to_boundary: dims mismatch");
  if (std::abs(sigma.trace()) > 1e-8)
    throw std::invalid_argument("line_search_to_boundary: sigma must be traceless");
  if (std::abs(sigma.norm() - 1.0) > 1e-6)
    throw std::invalid_argument("line_search_to_boundary: sigma must be unit norm");

  const BipartiteDims dims = rho.dims();
  const CMat step = double(direction) * sigma.mat();
  auto inside = [&](double x) {
    return detail::ppt_within_band(rho.mat() + x * step, dims, tol);
  };

  double lo = 0.0, hi = 1.0;
  while (inside(hi)) {
    lo = hi;
    hi *= 2.0;
    if (hi > 1e6)
      throw InternalError("line_search_to_boundary: no boundary before x = 1e6");
  }
  while (hi - lo > tol.bisect * hi && hi > 1e-18) {
    const double mid = 0.5 * (lo + hi);
    (inside(mid) ? lo : hi) = mid;
  }

  // The maximal in-band step parks the crossed eigenvalue near -0.999 of the
  // band, i.e. nearly a full band past the exact crossing.  That overshoot is
  // tangential to the rank stratum, survives the cleanup below, and seeds
  // spurious near-1 eigenvalues of the product operator at later states.  So
  // back the landing off to a margin of -1e-3: still hundreds of times the
  // eigensolver round-off (the sign of the crossed eigenvalue stays certain),
  // but a thousand times closer to the crossing.  The maximal step lo is kept
  // as the reported step size; any failure here keeps the unrefined landing.
  auto margin_at = [&](double x) {
    return detail::ppt_margin(rho.mat() + x * step, dims, tol);
  };
  double x_land = lo;
  const double u_t = -1e-3;
  const double u_lo = margin_at(lo);
  if (u_lo < u_t && lo > 0.0) {
    const double xq = lo * (1.0 - 1e-7);
    const double uq = margin_at(xq);
    const double slope = (u_lo - uq) / (lo - xq);
    if (std::abs(slope) > 0.0 && std::isfinite(slope)) {
      double left = lo - 1.5 * (u_lo / slope);
      int grow = 0;
      while (grow < 8 && left > 0.0 && margin_at(left) < u_t) {
        left = lo - 2.0 * (lo - left);
        ++grow;
      }
      if (grow < 8 && left > 0.0) {
        double a = left, b = lo;  // margin(a) >= u_t > margin(b)
        for (int it = 0; it < 60 && b - a > 1e-16 * b; ++it) {
          const double mid = 0.5 * (a + b);
          (margin_at(mid) < u_t ? b : a) = mid;
        }
        const double u_b = margin_at(b);
        if (u_b > -5e-2 && u_b < -1e-5) x_land = b;
      }
    }
  }

  // clean up the boundary state
  const HermitianMatrix tau(rho.mat() + x_land * step);
  const SpectralDecomposition sd = spectral_decompose(tau, tol);
  const double band = detail::rank_threshold(sd.eigenvalues, tol);
  RVec vals = sd.eigenvalues;
  for (int i = 0; i < vals.size(); ++i) {
    if (vals[i] < 0.0) {
      if (vals[i] <= -band)
        throw InternalError("line_search_to_boundary: kept state left the band");
      vals[i] = 0.0;
    }
  }
  const double tr = vals.sum();
  if (!(tr > 0.0))
    throw InternalError("line_search_to_boundary: cleaned state has no trace");
  const CMat cleaned = sd.eigenvectors * (vals / tr).asDiagonal() *
                       sd.eigenvectors.adjoint();
  return {DensityMatrix(HermitianMatrix(cleaned), dims, tol),
          double(direction) * lo};
}

// Repeatedly step from rho to the boundary of its face along random face
// directions.  Each accepted step lowers at least one of the two ranks and
// raises neither, so the walk ends at an extreme point (b_rank == 1) after at
// most n_1 + m_1 steps.  A borderline spectrum stops the walk early with the
// trace flagged; a step that drops no rank is retried once with a fresh
// direction, and a second failure aborts the walk with the trace flagged.
inline SearchTrace find_extreme(const DensityMatrix& start, std::uint64_t seed,
                                const Tolerances& tol = {}) {
  tol.validate();
  if (!is_ppt(start, tol))
    throw std::domain_error("find_extreme: start state is not PPT");

  SearchTrace trace;
  trace.seed = seed;
  std::mt19937_64 rng(seed);
  DensityMatrix rho = start;
  ExtremalityReport rep = test_extremality(rho, tol);
  const int cap = 4 * start.dim();

  for (int iter = 0; iter <= cap; ++iter) {
    trace.states.push_back(rho);
    trace.rank_pairs.emplace_back(rep.n, rep.m);
    if (rep.borderline) {
      trace.flagged = true;
      trace.final_report = rep;
      return trace;
    }
    if (rep.is_extreme) {
      trace.final_report = rep;
      return trace;
    }
    bool stepped = false;
    for (int attempt = 0; attempt < 2 && !stepped; ++attempt) {
      const HermitianMatrix sigma = random_face_direction(rep, rho, rng);
      const int sign = (rng() & 1u) ? 1 : -1;
      auto [cand, x] = line_search_to_boundary(rho, sigma, sign, tol);
      const auto [n2, m2] = rank_pair(cand, tol);
      if (n2 <= rep.n && m2 <= rep.m && (n2 < rep.n || m2 < rep.m)) {
        const ExtremalityReport next_rep = test_extremality(cand, tol);
        rho = detail::face_project(cand, next_rep.face_basis, tol);
        rep = next_rep;
        trace.step_sizes.push_back(x);
        stepped = true;
      }
    }
    if (!stepped) {
      // two directions in a row failed to drop a rank: the walk is wedged on
      // numerical noise, which is a flagged abort rather than a verdict
      trace.flagged = true;
      trace.final_report = rep;
      return trace;
    }
  }
  throw InternalError("find_extreme: iteration cap exceeded");
}

struct RankHistogram {
  std::map<std::pair<int, int>, int> counts;  // canonical (min,max) pairs
  int runs = 0;
  int flagged_runs = 0;  // walks stopped by a borderline spectrum
};

// Terminal rank pairs over `runs` independent searches from the maximally
// mixed state.  Run k uses split_seed(seed, k); results are merged in run
// order, so the histogram does not depend on the number of workers.
inline RankHistogram rank_survey(const BipartiteDims& dims, int runs,
                                 std::uint64_t seed, const Tolerances& tol = {}) {
  if (runs < 1) throw std::invalid_argument("rank_survey: runs must be >= 1");
  const DensityMatrix start = maximally_mixed(dims).rho;
  std::vector<std::optional<std::pair<int, int>>> results(runs);
  std::vector<std::exception_ptr> errors;

  const unsigned workers =
      std::min<unsigned>(std::max(1u, std::thread::hardware_concurrency()),
                         static_cast<unsigned>(runs));
  auto work = [&](unsigned w) {
    for (int k = static_cast<int>(w); k < runs; k += workers) {
      const SearchTrace t = find_extreme(start, split_seed(seed, k), tol);
      if (t.flagged) continue;  // leaves results[k] empty
      results[k] = std::minmax(t.final_report.n, t.final_report.m);
    }
  };
  if (workers == 1) {
    work(0);
  } else {
    errors.assign(workers, nullptr);
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w)
      pool.emplace_back([&, w] {
        try {
          work(w);
        } catch (...) {
          errors[w] = std::current_exception();
        }
      });
    for (auto& th : pool) th.join();
    for (auto& e : errors)
      if (e) std::rethrow_exception(e);
  }

  RankHistogram hist;
  hist.runs = runs;
  for (const auto& r : results) {
    if (r)
      ++hist.counts[*r];
    else
      ++hist.flagged_runs;
  }
  return hist;
}

}  // namespace peres
