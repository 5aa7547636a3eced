#pragma once

#include <cstdio>
#include <fstream>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"
#include "peres/search.hpp"
#include "peres/sections.hpp"

namespace peres {

using nlohmann::json;

// File-level failures (unreadable path, malformed JSON); distinct from the
// numerical InternalError so callers can report them differently.
struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// 17 significant digits: enough to reproduce any double exactly on reload.
inline std::string fmt17(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

// --- matrix files ---------------------------------------------------------
// {"dims": [na, nb], "re": [[...], ...], "im": [[...], ...]}
// re must be symmetric and im antisymmetric (both within 1e-10): together
// they encode one Hermitian matrix.

inline json matrix_to_json(const HermitianMatrix& h, const BipartiteDims& dims) {
  json re = json::array(), im = json::array();
  for (int i = 0; i < h.dim(); ++i) {
    json re_row = json::array(), im_row = json::array();
    for (int j = 0; j < h.dim(); ++j) {
      re_row.push_back(h.mat()(i, j).real());
      im_row.push_back(h.mat()(i, j).imag());
    }
    re.push_back(std::move(re_row));
    im.push_back(std::move(im_row));
  }
  return json{{"dims", {dims.n_a, dims.n_b}}, {"re", std::move(re)},
              {"im", std::move(im)}};
}

struct MatrixFileData {
  BipartiteDims dims;
  HermitianMatrix mat;
};

inline MatrixFileData matrix_from_json(const json& j) {
  if (!j.is_object() || !j.contains("dims") || !j.contains("re") ||
      !j.contains("im"))
    throw std::invalid_argument("matrix file: need dims, re and im fields");
  const auto& jd = j.at("dims");
  if (!jd.is_array() || jd.size() != 2)
    throw std::invalid_argument("matrix file: dims must be [n_a, n_b]");
  const BipartiteDims dims(jd.at(0).get<int>(), jd.at(1).get<int>());
  const int n = dims.n();
  const auto& re = j.at("re");
  const auto& im = j.at("im");
  if (!re.is_array() || !im.is_array() || static_cast<int>(re.size()) != n ||
      static_cast<int>(im.size()) != n)
    throw std::invalid_argument("matrix file: re/im must be NxN arrays");
  CMat m(n, n);
  for (int i = 0; i < n; ++i) {
    const auto& re_row = re.at(i);
    const auto& im_row = im.at(i);
    if (static_cast<int>(re_row.size()) != n ||
        static_cast<int>(im_row.size()) != n)
      throw std::invalid_argument("matrix file: re/im must be NxN arrays");
    for (int jj = 0; jj < n; ++jj)
      m(i, jj) = Cplx(re_row.at(jj).get<double>(), im_row.at(jj).get<double>());
  }
  for (int i = 0; i < n; ++i)
    for (int jj = 0; jj < n; ++jj) {
      if (std::abs(m(i, jj).real() - m(jj, i).real()) > 1e-10)
        throw std::invalid_argument("matrix file: re part is not symmetric");
      if (std::abs(m(i, jj).imag() + m(jj, i).imag()) > 1e-10)
        throw std::invalid_argument("matrix file: im part is not antisymmetric");
    }
  return {dims, HermitianMatrix(m)};
}

inline void save_matrix_file(const std::string& path, const HermitianMatrix& h,
                             const BipartiteDims& dims) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write '" + path + "'");
  out << matrix_to_json(h, dims).dump(2) << "\n";
}

inline MatrixFileData load_matrix_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read '" + path + "'");
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw IoError("'" + path + "': " + e.what());
  }
  return matrix_from_json(j);
}

// --- search traces --------------------------------------------------------

inline json report_to_json(const ExtremalityReport& rep) {
  return json{{"n", rep.n},
              {"m", rep.m},
              {"b_rank", rep.b_rank},
              {"lambda_next", rep.lambda_next},
              {"gap", rep.gap()},
              {"is_extreme", rep.is_extreme},
              {"borderline", rep.borderline}};
}

inline json trace_to_json(const SearchTrace& trace) {
  const BipartiteDims dims = trace.states.front().dims();
  json pairs = json::array();
  for (const auto& [n, m] : trace.rank_pairs) pairs.push_back({n, m});
  json states = json::array();
  for (const DensityMatrix& s : trace.states)
    states.push_back(matrix_to_json(s.hermitian(), dims));
  return json{{"seed", trace.seed},
              {"dims", {dims.n_a, dims.n_b}},
              {"flagged", trace.flagged},
              {"rank_pairs", std::move(pairs)},
              {"step_sizes", trace.step_sizes},
              {"states", std::move(states)},
              {"final_report", report_to_json(trace.final_report)}};
}

struct LoadedTrace {
  BipartiteDims dims;
  std::vector<HermitianMatrix> states;
  std::vector<std::pair<int, int>> rank_pairs;
  std::vector<double> step_sizes;
  std::uint64_t seed = 0;
  bool flagged = false;
};

inline LoadedTrace load_search_trace(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read '" + path + "'");
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw IoError("'" + path + "': " + e.what());
  }
  LoadedTrace t;
  try {
    const auto& jd = j.at("dims");
    t.dims = BipartiteDims(jd.at(0).get<int>(), jd.at(1).get<int>());
    t.seed = j.at("seed").get<std::uint64_t>();
    t.flagged = j.at("flagged").get<bool>();
    for (const auto& p : j.at("rank_pairs"))
      t.rank_pairs.emplace_back(p.at(0).get<int>(), p.at(1).get<int>());
    t.step_sizes = j.at("step_sizes").get<std::vector<double>>();
    for (const auto& s : j.at("states")) {
      MatrixFileData mf = matrix_from_json(s);
      if (!(mf.dims == t.dims))
        throw std::invalid_argument("trace file: state dims differ from trace dims");
      t.states.push_back(std::move(mf.mat));
    }
  } catch (const json::exception& e) {
    throw IoError("'" + path + "': " + e.what());
  }
  if (t.states.empty() || t.states.size() != t.rank_pairs.size())
    throw IoError("'" + path + "': malformed trace");
  return t;
}

// --- CSV ------------------------------------------------------------------

inline void write_section_csv(std::ostream& out,
                              const std::vector<SectionSample>& samples) {
  out << "x,y,min_eig_rho,min_eig_rho_pt,region\n";
  for (const SectionSample& s : samples)
    out << fmt17(s.x) << ',' << fmt17(s.y) << ',' << fmt17(s.min_eig_rho)
        << ',' << fmt17(s.min_eig_rho_pt) << ',' << region_name(s.region)
        << '\n';
}

inline void write_boundary_csv(std::ostream& out,
                               const std::vector<FaceBoundaryPoint>& pts) {
  out << "theta,x,y,t,n,m,b_rank,is_extreme\n";
  for (const FaceBoundaryPoint& p : pts)
    out << fmt17(p.theta) << ',' << fmt17(p.x) << ',' << fmt17(p.y) << ','
        << fmt17(p.t) << ',' << p.n << ',' << p.m << ',' << p.b_rank << ','
        << (p.is_extreme ? 1 : 0) << '\n';
}

inline void write_survey_csv(std::ostream& out, const RankHistogram& hist) {
  out << "n,m,count\n";
  for (const auto& [pair, count] : hist.counts)
    out << pair.first << ',' << pair.second << ',' << count << '\n';
}

}  // namespace peres
