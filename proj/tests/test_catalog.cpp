#include <catch2/catch_amalgamated.hpp>

#include "peres/catalog.hpp"
#include "peres/extremality.hpp"

using namespace peres;

TEST_CASE("maximally mixed state is uniform with full ranks", "[catalog]") {
  const NamedState s = maximally_mixed(BipartiteDims(3, 3));
  CHECK((s.rho.mat() - CMat::Identity(9, 9) / 9.0).norm() == 0.0);
  CHECK(rank_pair(s.rho) == std::make_pair(9, 9));
  CHECK(s.expected_rank_pair == std::make_pair(9, 9));
  CHECK(s.name == "mixed:3x3");
}

TEST_CASE("bell state is pure with full-rank partial transpose", "[catalog]") {
  const NamedState s = bell_state();
  CHECK_FALSE(is_ppt(s.rho));
  CHECK(numerical_rank(s.rho.hermitian()) == 1);
  CHECK(numerical_rank(partial_transpose(s.rho.hermitian(), s.rho.dims())) == 4);
}

TEST_CASE("tiles state has ranks (4,4), is PPT and extreme", "[catalog]") {
  const NamedState s = upb_tiles_state();
  CHECK(rank_pair(s.rho) == std::make_pair(4, 4));
  CHECK(is_ppt(s.rho));
  const ExtremalityReport rep = test_extremality(s.rho);
  CHECK(rep.is_extreme);
  CHECK_FALSE(rep.borderline);
  CHECK(rep.gap() > 1e-3);
  CHECK(s.expected_extreme == true);
}

TEST_CASE("horodecki family is PPT across its parameter range", "[catalog]") {
  for (int k = 0; k < 20; ++k) {
    const double a = 0.05 + 0.9 * k / 19.0;
    const NamedState s = horodecki_state(a);
    CHECK(is_ppt(s.rho));
    CHECK_THAT(s.rho.hermitian().trace(),
               Catch::Matchers::WithinAbs(1.0, 1e-12));
  }
  CHECK_THROWS_AS(horodecki_state(0.0), std::invalid_argument);
  CHECK_THROWS_AS(horodecki_state(1.0), std::invalid_argument);
  CHECK_THROWS_AS(horodecki_state(-2.0), std::invalid_argument);
}

TEST_CASE("horodecki state at 0.42 is not extreme", "[catalog]") {
  const NamedState s = horodecki_state(0.42);
  const ExtremalityReport rep = test_extremality(s.rho);
  CHECK_FALSE(rep.is_extreme);
  CHECK(rep.b_rank > 1);
  CHECK(s.expected_extreme == false);
}

TEST_CASE("state specs parse to catalog entries", "[catalog]") {
  CHECK(parse_state_spec("bell").name == "bell");
  CHECK(parse_state_spec("upb-tiles").name == "upb-tiles");
  CHECK(parse_state_spec("mixed:2x4").rho.dim() == 8);
  CHECK(parse_state_spec("horodecki:0.42").rho.dim() == 9);
  CHECK_THROWS_AS(parse_state_spec("nonsense"), std::invalid_argument);
  CHECK_THROWS_AS(parse_state_spec("mixed:3z3"), std::invalid_argument);
  CHECK_THROWS_AS(parse_state_spec("horodecki:abc"), std::invalid_argument);
  CHECK_THROWS_AS(parse_state_spec("horodecki:0.42junk"), std::invalid_argument);
}
