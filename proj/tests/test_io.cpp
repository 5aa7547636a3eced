#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <random>
#include <sstream>

#include "peres/catalog.hpp"
#include "peres/io.hpp"

using namespace peres;

namespace {

struct TempDir {
  std::filesystem::path path;
  TempDir() {
    path = std::filesystem::temp_directory_path() /
           ("peres_io_test_" + std::to_string(std::random_device{}()));
    std::filesystem::create_directories(path);
  }
  ~TempDir() { std::filesystem::remove_all(path); }
  std::string file(const char* name) const { return (path / name).string(); }
};

HermitianMatrix random_hermitian(int n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  CMat g(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) g(i, j) = Cplx(gauss(rng), gauss(rng));
  return HermitianMatrix(g);
}

}  // namespace

TEST_CASE("seventeen digits reproduce doubles exactly", "[io]") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> uni(-1.0, 1.0);
  for (int k = 0; k < 200; ++k) {
    const double v = std::ldexp(uni(rng), k % 64 - 32);
    REQUIRE(std::strtod(fmt17(v).c_str(), nullptr) == v);
  }
  CHECK(fmt17(0.5) == "0.5");
}

TEST_CASE("matrix files round trip to the last digit", "[io]") {
  TempDir tmp;
  const BipartiteDims dims(2, 3);
  const HermitianMatrix h = random_hermitian(6, 42);
  const std::string path = tmp.file("m.json");
  save_matrix_file(path, h, dims);
  const MatrixFileData back = load_matrix_file(path);
  CHECK(back.dims == dims);
  REQUIRE((back.mat.mat() - h.mat()).norm() == 0.0);
}

TEST_CASE("matrix loading validates structure and hermiticity", "[io]") {
  CHECK_THROWS_AS(load_matrix_file("/nonexistent/path.json"), IoError);

  TempDir tmp;
  auto write = [&](const char* name, const std::string& text) {
    std::ofstream out(tmp.file(name));
    out << text;
    return tmp.file(name);
  };
  CHECK_THROWS_AS(load_matrix_file(write("garbage.json", "not json at all")),
                  IoError);
  CHECK_THROWS_AS(
      matrix_from_json(json{{"dims", {2, 2}}, {"re", json::array()}}),
      std::invalid_argument);  // missing im
  CHECK_THROWS_AS(
      matrix_from_json(json{{"dims", {2}},
                            {"re", {{1.0, 0.0}, {0.0, 1.0}}},
                            {"im", {{0.0, 0.0}, {0.0, 0.0}}}}),
      std::invalid_argument);  // dims not a pair
  CHECK_THROWS_AS(
      matrix_from_json(json{{"dims", {1, 2}},
                            {"re", {{1.0, 5.0}, {4.0, 1.0}}},
                            {"im", {{0.0, 0.0}, {0.0, 0.0}}}}),
      std::invalid_argument);  // re not symmetric
  CHECK_THROWS_AS(
      matrix_from_json(json{{"dims", {1, 2}},
                            {"re", {{1.0, 0.0}, {0.0, 1.0}}},
                            {"im", {{0.0, 2.0}, {2.0, 0.0}}}}),
      std::invalid_argument);  // im not antisymmetric
  const MatrixFileData ok =
      matrix_from_json(json{{"dims", {1, 2}},
                            {"re", {{1.0, 3.0}, {3.0, 1.0}}},
                            {"im", {{0.0, 2.0}, {-2.0, 0.0}}}});
  CHECK(ok.mat.mat()(0, 1) == Cplx(3.0, 2.0));
}

TEST_CASE("search traces round trip with states and metadata", "[io]") {
  TempDir tmp;
  const DensityMatrix start = maximally_mixed(BipartiteDims(2, 2)).rho;
  const SearchTrace trace = find_extreme(start, 31);
  const std::string path = tmp.file("trace.json");
  {
    std::ofstream out(path);
    out << trace_to_json(trace).dump(2) << "\n";
  }
  const LoadedTrace back = load_search_trace(path);
  CHECK(back.dims == trace.states.front().dims());
  CHECK(back.seed == trace.seed);
  CHECK(back.flagged == trace.flagged);
  REQUIRE(back.rank_pairs == trace.rank_pairs);
  REQUIRE(back.step_sizes.size() == trace.step_sizes.size());
  for (size_t k = 0; k < back.step_sizes.size(); ++k)
    REQUIRE(back.step_sizes[k] == trace.step_sizes[k]);
  REQUIRE(back.states.size() == trace.states.size());
  for (size_t k = 0; k < back.states.size(); ++k)
    REQUIRE((back.states[k].mat() - trace.states[k].mat()).norm() == 0.0);

  CHECK_THROWS_AS(load_search_trace(tmp.file("missing.json")), IoError);
}

TEST_CASE("csv writers emit headers and full precision", "[io]") {
  std::ostringstream out;
  SectionSample s;
  s.x = 1.0 / 3.0;
  s.y = -2.0 / 7.0;
  s.min_eig_rho = 0.25;
  s.min_eig_rho_pt = -1e-17;
  s.region = Region::NOT_PPT;
  write_section_csv(out, {s});
  std::istringstream in(out.str());
  std::string header, line;
  std::getline(in, header);
  CHECK(header == "x,y,min_eig_rho,min_eig_rho_pt,region");
  std::getline(in, line);
  CHECK(line.find("0.33333333333333331") == 0);
  CHECK(line.find("NOT_PPT") != std::string::npos);

  std::ostringstream sout;
  RankHistogram hist;
  hist.counts[{5, 6}] = 92;
  hist.counts[{6, 6}] = 8;
  hist.runs = 100;
  write_survey_csv(sout, hist);
  CHECK(sout.str() == "n,m,count\n5,6,92\n6,6,8\n");

  std::ostringstream bout;
  FaceBoundaryPoint p;
  p.theta = 0.0;
  p.x = 0.125;
  p.y = 0.0;
  p.t = 0.125;
  p.n = 6;
  p.m = 6;
  p.b_rank = 1;
  p.is_extreme = true;
  write_boundary_csv(bout, {p});
  CHECK(bout.str() ==
        "theta,x,y,t,n,m,b_rank,is_extreme\n0,0.125,0,0.125,6,6,1,1\n");
}

TEST_CASE("reports serialize their verdict fields", "[io]") {
  const ExtremalityReport rep = test_extremality(upb_tiles_state().rho);
  const json j = report_to_json(rep);
  CHECK(j.at("n") == 4);
  CHECK(j.at("m") == 4);
  CHECK(j.at("b_rank") == 1);
  CHECK(j.at("is_extreme") == true);
  CHECK(j.at("borderline") == false);
  CHECK(j.at("gap").get<double>() > 1e-3);
}
