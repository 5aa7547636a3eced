// peres: find and certify extreme points of the set of PPT bipartite states.
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "peres/catalog.hpp"
#include "peres/extremality.hpp"
#include "peres/io.hpp"
#include "peres/search.hpp"
#include "peres/sections.hpp"

namespace {

using namespace peres;

// Catalog names win over paths; anything else must be a readable file.
DensityMatrix resolve_state(const std::string& spec, const Tolerances& tol) {
  try {
    return parse_state_spec(spec).rho;
  } catch (const std::invalid_argument&) {
    if (!std::filesystem::exists(spec)) throw;
  }
  MatrixFileData mf = load_matrix_file(spec);
  return DensityMatrix(mf.mat, mf.dims, tol);
}

std::pair<int, int> parse_grid(const std::string& s) {
  const auto x = s.find('x');
  if (x == std::string::npos)
    throw std::invalid_argument("grid must look like 41x41");
  try {
    const int nx = std::stoi(s.substr(0, x));
    const int ny = std::stoi(s.substr(x + 1));
    return {nx, ny};
  } catch (const std::exception&) {
    throw std::invalid_argument("grid must look like 41x41");
  }
}

std::array<double, 4> parse_extent(const std::string& s) {
  std::array<double, 4> e{};
  std::stringstream ss(s);
  std::string item;
  for (int i = 0; i < 4; ++i) {
    if (!std::getline(ss, item, ','))
      throw std::invalid_argument("extent must look like x0,x1,y0,y1");
    try {
      e[i] = std::stod(item);
    } catch (const std::exception&) {
      throw std::invalid_argument("extent must look like x0,x1,y0,y1");
    }
  }
  if (std::getline(ss, item, ','))
    throw std::invalid_argument("extent must look like x0,x1,y0,y1");
  return e;
}

HermitianMatrix random_traceless_direction(const BipartiteDims& dims,
                                           std::mt19937_64& rng) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  const int n = dims.n();
  CMat g(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) g(i, j) = Cplx(gauss(rng), gauss(rng));
  HermitianMatrix h(g);  // symmetrized
  CMat m = h.mat();
  m -= (h.trace() / n) * CMat::Identity(n, n);
  HermitianMatrix d(m);
  return (1.0 / d.norm()) * d;
}

// Output sink: --out path, or stdout.
struct Sink {
  std::ofstream file;
  std::ostream* os = &std::cout;
  explicit Sink(const std::string& path) {
    if (!path.empty()) {
      file.open(path);
      if (!file) throw IoError("cannot write '" + path + "'");
      os = &file;
    }
  }
  std::ostream& stream() { return *os; }
};

struct CommonOpts {
  std::uint64_t seed = 0;
  std::string out;
  Tolerances tol;
};

void add_common(CLI::App* cmd, CommonOpts& o, bool with_out = true) {
  cmd->add_option("--seed", o.seed, "RNG seed (default 0)");
  if (with_out) cmd->add_option("--out", o.out, "Output path (default stdout)");
  cmd->add_option("--tol-zero-eig", o.tol.zero_eig,
                  "Relative threshold below which eigenvalues count as zero");
  cmd->add_option("--tol-one-eig", o.tol.one_eig,
                  "Width of the eigenvalue-one cluster of the projection");
  cmd->add_option("--tol-bisect", o.tol.bisect,
                  "Relative bisection resolution of boundary line searches");
  cmd->add_option("--tol-recon", o.tol.recon,
                  "Per-dimension eigendecomposition reconstruction tolerance");
  cmd->add_option("--tol-orth", o.tol.orth,
                  "Orthonormality tolerance for eigenvector bases");
}

int run_find_extreme(const std::string& dims_str, const std::string& state,
                     const CommonOpts& o) {
  o.tol.validate();
  std::optional<DensityMatrix> start;
  if (!state.empty())
    start = resolve_state(state, o.tol);
  else if (!dims_str.empty())
    start = maximally_mixed(parse_dims(dims_str)).rho;
  else
    throw std::invalid_argument("find-extreme needs --dims or --state");
  const SearchTrace trace = find_extreme(*start, o.seed, o.tol);
  Sink sink(o.out);
  sink.stream() << trace_to_json(trace).dump(2) << "\n";
  return trace.flagged ? 2 : 0;
}

int run_test_extreme(const std::string& state, const CommonOpts& o) {
  o.tol.validate();
  if (state.empty())
    throw std::invalid_argument("test-extreme needs --state");
  const DensityMatrix rho = resolve_state(state, o.tol);
  const ExtremalityReport rep = test_extremality(rho, o.tol);
  std::cout << "n " << rep.n << "\n"
            << "m " << rep.m << "\n"
            << "b_rank " << rep.b_rank << "\n"
            << "lambda_next " << fmt17(rep.lambda_next) << "\n"
            << "gap " << fmt17(rep.gap()) << "\n"
            << "verdict "
            << (rep.borderline ? "borderline"
                               : (rep.is_extreme ? "extreme" : "not-extreme"))
            << "\n";
  if (rep.borderline) return 2;
  return rep.is_extreme ? 0 : 1;
}

int run_rank_survey(const std::string& dims_str, int runs,
                    const CommonOpts& o) {
  o.tol.validate();
  if (dims_str.empty()) throw std::invalid_argument("rank-survey needs --dims");
  if (runs < 1) throw std::invalid_argument("rank-survey needs --runs >= 1");
  const RankHistogram hist =
      rank_survey(parse_dims(dims_str), runs, o.seed, o.tol);
  Sink sink(o.out);
  write_survey_csv(sink.stream(), hist);
  return hist.flagged_runs > 0 ? 2 : 0;
}

int run_scan_section(const std::string& state, const std::string& face_of,
                     const std::vector<std::string>& through,
                     const std::string& grid_str, const std::string& extent_str,
                     int rays, const std::string& boundary_out,
                     const CommonOpts& o) {
  o.tol.validate();
  const auto [nx, ny] = parse_grid(grid_str);

  if (!face_of.empty()) {  // face of the penultimate state of a search trace
    if (o.out.empty())
      throw std::invalid_argument("--face-of needs --out (two files are written)");
    const LoadedTrace trace = load_search_trace(face_of);
    if (trace.states.size() < 2)
      throw std::invalid_argument(
          "trace has no penultimate state (search started at an extreme point)");
    const DensityMatrix penultimate(trace.states[trace.states.size() - 2],
                                    trace.dims, o.tol);
    const ExtremalityReport rep = test_extremality(penultimate, o.tol);
    const FaceSectionResult res =
        face_section(penultimate, rep, o.seed, nx, ny, rays, o.tol);
    Sink sink(o.out);
    write_section_csv(sink.stream(), res.samples);
    const std::string bpath =
        boundary_out.empty() ? o.out + ".boundary.csv" : boundary_out;
    std::ofstream bfile(bpath);
    if (!bfile) throw IoError("cannot write '" + bpath + "'");
    write_boundary_csv(bfile, res.boundary);
    for (const FaceBoundaryPoint& p : res.boundary)
      if (p.borderline) return 2;
    return 0;
  }

  if (state.empty())
    throw std::invalid_argument("scan-section needs --state for the origin");
  const DensityMatrix origin = resolve_state(state, o.tol);
  const BipartiteDims dims = origin.dims();
  std::mt19937_64 rng(o.seed);

  HermitianMatrix dir1 = HermitianMatrix::zero(dims.n());
  if (!through.empty()) {  // dir1 along the difference of two states
    if (through.size() != 2)
      throw std::invalid_argument("--through needs exactly two states");
    const DensityMatrix a = resolve_state(through[0], o.tol);
    const DensityMatrix b = resolve_state(through[1], o.tol);
    if (!(a.dims() == dims) || !(b.dims() == dims))
      throw std::invalid_argument("--through states must match the origin dims");
    const HermitianMatrix diff = b.hermitian() - a.hermitian();
    if (diff.norm() < 1e-12)
      throw std::invalid_argument("--through states are equal: no direction");
    dir1 = (1.0 / diff.norm()) * diff;
  } else {
    dir1 = random_traceless_direction(dims, rng);
  }
  // Second direction: random, orthogonalized against the first.
  HermitianMatrix dir2 = dir1;
  bool found = false;
  for (int attempt = 0; attempt < 100 && !found; ++attempt) {
    const HermitianMatrix raw = random_traceless_direction(dims, rng);
    const HermitianMatrix ortho = raw - inner(dir1, raw) * dir1;
    if (ortho.norm() > 1e-6) {
      dir2 = (1.0 / ortho.norm()) * ortho;
      found = true;
    }
  }
  if (!found) throw InternalError("could not draw a second section direction");

  const auto ext = parse_extent(extent_str);
  SectionSpec spec{origin.hermitian(), dims, dir1, dir2,
                   nx,                 ny,   ext[0], ext[1], ext[2], ext[3]};
  const std::vector<SectionSample> samples = sample_section(spec, o.tol);
  Sink sink(o.out);
  write_section_csv(sink.stream(), samples);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "peres: locate and certify extreme points of the convex set of\n"
      "bipartite density matrices with positive partial transpose"};
  app.require_subcommand(1);

  int rc = 0;

  auto* find = app.add_subcommand(
      "find-extreme", "Walk from a PPT state to an extreme point");
  CommonOpts find_o;
  std::string find_dims, find_state;
  find->add_option("--dims", find_dims,
                   "Bipartite dims AxB; start from the maximally mixed state");
  find->add_option("--state", find_state,
                   "Start state: catalog name or matrix file");
  add_common(find, find_o);
  find->callback(
      [&] { rc = run_find_extreme(find_dims, find_state, find_o); });

  auto* test = app.add_subcommand(
      "test-extreme", "Report the extremality verdict for a PPT state");
  CommonOpts test_o;
  std::string test_state;
  test->add_option("--state", test_state,
                   "State to test: catalog name or matrix file");
  add_common(test, test_o, /*with_out=*/false);
  test->callback([&] { rc = run_test_extreme(test_state, test_o); });

  auto* survey = app.add_subcommand(
      "rank-survey", "Histogram terminal rank pairs over repeated searches");
  CommonOpts survey_o;
  std::string survey_dims;
  int survey_runs = 100;
  survey->add_option("--dims", survey_dims, "Bipartite dims AxB");
  survey->add_option("--runs", survey_runs, "Number of searches (default 100)");
  add_common(survey, survey_o);
  survey->callback(
      [&] { rc = run_rank_survey(survey_dims, survey_runs, survey_o); });

  auto* scan = app.add_subcommand(
      "scan-section", "Sample a 2D affine section of the state space");
  CommonOpts scan_o;
  std::string scan_state, scan_face_of, scan_grid = "41x41";
  std::string scan_extent = "-1,1,-1,1", scan_boundary_out;
  std::vector<std::string> scan_through;
  int scan_rays = 64;
  scan->add_option("--state", scan_state, "Origin: catalog name or matrix file");
  scan->add_option("--face-of", scan_face_of,
                   "Search-trace file; sections the face of its penultimate "
                   "state (auto extent, ignores --state/--extent)");
  scan->add_option("--through", scan_through,
                   "Two states; the first direction joins them")
      ->expected(2);
  scan->add_option("--grid", scan_grid, "Grid NXxNY (default 41x41)");
  scan->add_option("--extent", scan_extent,
                   "x0,x1,y0,y1 (default -1,1,-1,1)");
  scan->add_option("--rays", scan_rays,
                   "Boundary rays for --face-of (default 64)");
  scan->add_option("--boundary-out", scan_boundary_out,
                   "Boundary CSV path for --face-of (default <out>.boundary.csv)");
  add_common(scan, scan_o);
  scan->callback([&] {
    rc = run_scan_section(scan_state, scan_face_of, scan_through, scan_grid,
                          scan_extent, scan_rays, scan_boundary_out, scan_o);
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 3;
  } catch (const peres::InternalError& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 5;
  } catch (const peres::IoError& e) {
    std::cerr << "io error: " << e.what() << "\n";
    return 4;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const std::domain_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 5;
  }
  return rc;
}
