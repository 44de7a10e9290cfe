#include "doctest.h"
#include "support/fixtures.hpp"

#include "perco/report.hpp"

using namespace perco;

namespace {

int count(const std::string& s, const std::string& needle) {
  int n = 0;
  for (std::size_t i = s.find(needle); i != std::string::npos; i = s.find(needle, i + 1)) ++n;
  return n;
}

}  // namespace

TEST_CASE("claim report json") {
  const auto r = verify_theorem1(PercolationModel::independent_bond(Prob::parse("0.5")), {{0, 0}}, {{0, 2}}, {{1, 1}});
  const auto j = to_json(r);
  CHECK(j["holds"] == true);
  REQUIRE(j["records"].size() == 4);
  CHECK(j["records"][0].contains("inequality"));
  CHECK(j["records"][0].contains("certificate"));
  CHECK(to_csv(r).rfind("inequality,lhs,rhs,applicable,holds,flow\n", 0) == 0);
}

TEST_CASE("inequality report json has the documented fields") {
  const auto r = verify_corollary62(PercolationModel::independent_bond(Prob::parse("0.5")), {{0, 0}}, {{-2, 2}},
                                    {{0, 2}}, {{2, 2}});
  const auto j = to_json(r);
  for (const char* key : {"claim", "lhs", "rhs", "gap", "method", "n", "holds"}) CHECK(j["records"][0].contains(key));
  const auto c = verify_corollary63(PercolationModel::independent_bond(Prob::parse("0.5")), 2);
  CHECK(to_csv(c) == "y,p,stderr,method,exact\n0,0.4375,0,exact,7/16\n2,0.25,0,exact,1/4\n4,0,0,exact,0\n");
}

TEST_CASE("distribution json keeps exact weights") {
  const auto d = exact_extreme_distribution(PercolationModel::independent_bond(Prob::parse("0.5")),
                                            {{{0, 0}}, {{0, 2}}, Region::whole(0, 2), Side::Left, std::nullopt});
  const auto j = to_json(d);
  CHECK(j["weights"][0]["exact"] == "4/7");
  CHECK(j["weights"][0]["path"]["xs"] == nlohmann::json::array({0, -1, 0}));
}

TEST_CASE("svg rendering of the diamond") {
  const Lattice L = Lattice::bond();
  const std::vector<Site> a{{0, 0}}, b{{0, 2}};
  const std::vector<Support> sup{path_support(L, Region::whole(0, 2), a, b)};
  const auto u = fixtures::universe_for(L, sup);
  // Edges in unit order: (0,0)-1, (0,0)+1, (-1,1)+1, (1,1)-1.
  const auto one = render_svg(Configuration::from_bits(u, 0b1011), a, b, Region::whole(0, 2));
  CHECK(count(one, "<line class=\"edge") == 4);
  CHECK(count(one, "edge closed") == 1);
  CHECK(count(one, "<polyline") == 1);
  const auto both = render_svg(Configuration::from_bits(u, 0b1111), a, b, Region::whole(0, 2));
  CHECK(count(both, "<polyline") == 2);
  CHECK(count(both, "path leftmost") == 1);
  CHECK(count(both, "path rightmost") == 1);
  const auto none = render_svg(Configuration::from_bits(u, 0), a, b, Region::whole(0, 2));
  CHECK(count(none, "<polyline") == 0);
  CHECK(count(none, "edge closed") == 4);
}
