#include "doctest.h"
#include "support/fixtures.hpp"

#include "perco/chain.hpp"

#include <sstream>

using namespace perco;
using fixtures::error_of;

namespace {

const std::vector<Site> kA{{0, 0}};
const std::vector<Site> kB{{0, 2}};

PercolationModel bond(const char* p) { return PercolationModel::independent_bond(Prob::parse(p)); }

Rational draw_weight(const BhkChain& chain, std::uint64_t draws) {
  Rational w = 1;
  for (int u = 0; u < chain.universe()->size(); ++u) {
    const Rational p = *chain.open_probs()[static_cast<std::size_t>(u)].exact();
    w *= ((draws >> u) & 1U) ? p : 1 - p;
  }
  return w;
}

}  // namespace

TEST_CASE("laterality partitions the units") {
  std::mt19937_64 rng(41);
  for (const Lattice& L : {Lattice::bond(), Lattice::site(-1, 2)}) {
    for (int trial = 0; trial < 20; ++trial) {
      const auto g = fixtures::random_geometry(rng, L, 4, 2, 40);
      const Region r = Region::whole(g.m, g.n);
      const std::vector<Support> sup{path_support(L, r, g.a, g.b)};
      const auto u = fixtures::universe_for(L, sup);
      for (const Path& gamma : fixtures::brute_paths(L, g.a, g.b, r)) {
        const auto on = fixtures::path_units(*u, gamma);
        for (int unit = 0; unit < u->size(); ++unit) {
          const Laterality lat = laterality(*u, unit, gamma);
          const bool is_on = std::find(on.begin(), on.end(), unit) != on.end();
          CHECK((lat == Laterality::On) == is_on);
          if (is_on) continue;
          bool left = true;
          if (L.openness() == Openness::Sites) {
            const Site s = u->sites()[static_cast<std::size_t>(unit)];
            left = s.x <= gamma.at(s.y);
          } else {
            const Edge e = u->edges()[static_cast<std::size_t>(unit)];
            left = e.from.x <= gamma.at(e.from.y) && e.to().x <= gamma.at(e.from.y + 1);
          }
          CHECK((lat == Laterality::Left) == left);
        }
      }
    }
  }
}

TEST_CASE("chain refuses correlated pairs") {
  const auto corr = PercolationModel::correlated_pair_bond(PairLaw::from_correlation(Prob::parse("0.5"), 0.5));
  CHECK(error_of([&] { (void)BhkChain::on_support(corr, kA, kB, Region::whole(0, 2)); }) ==
        ErrorCode::UnsupportedModel);
  const auto flat = PercolationModel::correlated_pair_bond(PairLaw::from_correlation(Prob::parse("0.5"), 0.0));
  CHECK_NOTHROW((void)BhkChain::on_support(flat, kA, kB, Region::whole(0, 2)));
}

TEST_CASE("diamond kernel") {
  const auto chain = BhkChain::on_support(bond("0.5"), kA, kB, Region::whole(0, 2));
  const ExactKernel k(chain);
  CHECK(k.states().size() == 7);
  const auto inv = check_invariance(k, true);
  REQUIRE(inv.exact_residual);
  CHECK(*inv.exact_residual == 0);
  const auto slow = BhkChain::on_support(bond("0.2"), kA, kB, Region::whole(0, 2));
  const auto conv = check_convergence(ExactKernel(slow));
  CHECK(conv.converged);
  CHECK(conv.max_tv < 1e-8);
  std::ostringstream csv;
  write_dense_csv(k, csv);
  const std::string text = csv.str();
  CHECK(std::count(text.begin(), text.end(), '\n') == 8);
  for (const auto& row : k.dense()) {
    double s = 0;
    for (double v : row) s += v;
    CHECK(s == doctest::Approx(1.0));
  }
}

TEST_CASE("invariance on random supports") {
  std::mt19937_64 rng(42);
  for (const Lattice& L : {Lattice::bond(), Lattice::site(0, 1)}) {
    for (int trial = 0; trial < 6; ++trial) {
      const auto g = fixtures::random_geometry(rng, L, 4, 3, 10);
      const std::vector<Site> gset{fixtures::random_site(rng, L, g.m + 1, -2, 2)};
      const Region r = strictly_right_region(gset, g.m, g.n);
      if (path_support(L, r, g.a, g.b).empty()) continue;
      const PercolationModel m = L.openness() == Openness::Sites
                                     ? PercolationModel::independent_site(Prob::parse("0.3"))
                                     : bond("0.7");
      const std::vector<Support> sup{path_support(L, Region::whole(g.m, g.n), g.a, g.b)};
      const BhkChain chain(m, fixtures::universe_for(L, sup), g.a, g.b, r);
      const ExactKernel k(chain);
      const auto inv = check_invariance(k, true);
      CHECK(*inv.exact_residual == 0);
      CHECK(check_invariance(k, false).tv_residual < 1e-12);
    }
  }
}

TEST_CASE("steps stay in T and are reproducible") {
  const std::vector<Site> b{{0, 4}, {2, 4}};
  const auto chain = BhkChain::on_support(bond("0.4"), kA, b, Region::whole(0, 4));
  auto x = chain.all_open();
  auto y = chain.all_open();
  for (std::uint64_t t = 1; t <= 2000; ++t) {
    chain.step(x, 9, t);
    chain.step(y, 9, t);
    REQUIRE(chain.in_t(x));
  }
  CHECK(x == y);
  auto z = chain.all_open();
  for (std::uint64_t t = 1; t <= 2000; ++t) chain.step(z, 10, t);
  CHECK(keyed_open(1, 2, 1, 3, 0.5) == keyed_open(1, 2, 1, 3, 0.5));
  const auto only = chain.only_path_open(Path{0, {0, 1, 2, 1, 2}});
  CHECK(chain.in_t(only));
  CHECK(chain.graph().leftmost(only) == Path{0, {0, 1, 2, 1, 2}});
}

TEST_CASE("half steps resample the units beyond the extreme path") {
  const auto chain = BhkChain::on_support(bond("0.5"), kA, kB, Region::whole(0, 2));
  const auto& u = *chain.universe();
  const auto only_left = chain.only_path_open(Path{0, {0, -1, 0}});
  CHECK(chain.resampled(only_left, 1).size() == 2);
  CHECK(chain.resampled(only_left, 2).empty());
  const auto only_right = chain.only_path_open(Path{0, {0, 1, 0}});
  CHECK(chain.resampled(only_right, 1).empty());
  const auto moved = chain.resampled(only_right, 2);
  REQUIRE(moved.size() == 2);
  for (int unit : moved) CHECK(u.edges()[static_cast<std::size_t>(unit)].from.x + u.edges()[static_cast<std::size_t>(unit)].step <= 0);
}

TEST_CASE("given the rightmost path, the units to its left keep the product law") {
  for (const auto& b : {kB, std::vector<Site>{{0, 4}}}) {
    const int n = b.front().y;
    const auto model = bond("0.3");
    const auto chain = BhkChain::on_support(model, kA, b, Region::whole(0, n));
    const auto& u = *chain.universe();
    const int units = u.size();
    std::map<Path, std::map<std::uint64_t, Rational>> joint;
    std::map<Path, Rational> mass;
    std::map<Path, std::uint64_t> left_mask;
    for (std::uint64_t bits = 0; bits < (std::uint64_t{1} << units); ++bits) {
      const std::uint64_t words[] = {bits};
      const auto gamma = chain.graph().rightmost(words);
      if (!gamma) continue;
      std::uint64_t mask = 0;
      for (int unit : chain.resampled(words, 2)) mask |= std::uint64_t{1} << unit;
      left_mask[*gamma] = mask;
      const Rational p = fixtures::config_probability(model, u, bits);
      joint[*gamma][bits & mask] += p;
      mass[*gamma] += p;
    }
    for (const auto& [gamma, law] : joint) {
      const std::uint64_t mask = left_mask[gamma];
      for (std::uint64_t sub = mask;; sub = (sub - 1) & mask) {
        Rational product = 1;
        for (int unit = 0; unit < units; ++unit) {
          if (!((mask >> unit) & 1U)) continue;
          product *= ((sub >> unit) & 1U) ? Rational(3, 10) : Rational(7, 10);
        }
        const auto it = law.find(sub);
        CHECK((it == law.end() ? Rational(0) : it->second) / mass[gamma] == product);
        if (sub == 0) break;
      }
    }
  }
}

TEST_CASE("coupled marginals follow the single chains") {
  const auto model = bond("0.5");
  for (const bool left : {true, false}) {
    const std::vector<Site> g{{left ? 1 : -1, 1}};
    const Region whole = Region::whole(0, 2);
    const Region restricted = left ? strictly_left_region(g, 0, 2) : strictly_right_region(g, 0, 2);
    const CoupledChain coupled(model, kA, kB, left ? whole : restricted, left ? restricted : whole);
    const ExactKernel ku(coupled.upper());
    const ExactKernel kl(coupled.lower());
    const int units = coupled.upper().universe()->size();
    int pairs = 0;
    for (std::uint64_t up : ku.states()) {
      for (std::uint64_t lo : kl.states()) {
        CoupledChain::State s{{up}, {lo}};
        if (!coupled.in_x(s)) continue;
        ++pairs;
        std::vector<Rational> got_u(std::size_t{1} << units, 0), got_l(std::size_t{1} << units, 0);
        for (std::uint64_t d1 = 0; d1 < (std::uint64_t{1} << units); ++d1) {
          for (std::uint64_t d2 = 0; d2 < (std::uint64_t{1} << units); ++d2) {
            CoupledChain::State t = s;
            coupled.half_step(t, 1, [&](int unit) { return ((d1 >> unit) & 1U) != 0; });
            coupled.half_step(t, 2, [&](int unit) { return ((d2 >> unit) & 1U) != 0; });
            CHECK(coupled.in_x(t));
            const Rational w = draw_weight(coupled.upper(), d1) * draw_weight(coupled.upper(), d2);
            got_u[t.upper[0]] += w;
            got_l[t.lower[0]] += w;
          }
        }
        std::vector<Rational> du(std::size_t{1} << units, 0), dl(std::size_t{1} << units, 0);
        du[up] = 1;
        dl[lo] = 1;
        CHECK(ku.apply(du) == got_u);
        CHECK(kl.apply(dl) == got_l);
      }
    }
    CHECK(pairs > 0);
  }
}

TEST_CASE("coupled runs never leave X") {
  std::mt19937_64 rng(43);
  const auto model = bond("0.6");
  for (int trial = 0; trial < 6; ++trial) {
    const auto g = fixtures::random_geometry(rng, model.lattice(), 4, 6, 20);
    const std::vector<Site> gset{fixtures::random_site(rng, model.lattice(), g.m + 2 <= g.n ? g.m + 1 : g.m, -1, 1)};
    for (const Side side : {Side::Left, Side::Right}) {
      ChainOptions opt;
      opt.steps = 3000;
      opt.burn_in = 100;
      opt.seed = 5 + static_cast<std::uint64_t>(trial);
      try {
        const auto r = chain_theorem1_estimate(model, g.a, g.b, gset, side, opt);
        CHECK(r.x_violations == 0);
        CHECK(r.x_checks == 3101);
      } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::NoPath);
      }
    }
  }
}

TEST_CASE("empty G gives identical marginals") {
  ChainOptions opt;
  opt.steps = 2000;
  std::ostringstream traj;
  opt.trajectory = &traj;
  const auto r = chain_theorem1_estimate(bond("0.5"), kA, std::vector<Site>{{0, 4}}, {}, Side::Left, opt);
  CHECK(r.x_violations == 0);
  CHECK(r.min_diff == 0.0);
  for (const auto& d : r.upsets) CHECK(d.diff() == 0.0);
  CHECK(traj.str().rfind("step,upper_left,upper_right,lower_left,lower_right\n", 0) == 0);
}
