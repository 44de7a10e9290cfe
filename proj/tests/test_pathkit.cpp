#include "doctest.h"
#include "support/fixtures.hpp"

#include "perco/pathkit.hpp"

using namespace perco;
using fixtures::error_of;

namespace {

struct Compiled {
  std::shared_ptr<const Universe> universe;
  SupportGraph graph;
};

Compiled compile(const Lattice& L, const std::vector<Site>& a, const std::vector<Site>& b, const Region& r) {
  const std::vector<Support> supports{path_support(L, r, a, b)};
  auto u = fixtures::universe_for(L, supports);
  SupportGraph g(*u, r, a, b);
  return {u, std::move(g)};
}

/// Every path of a window [lo, hi] x [m, n].
std::vector<Path> window_paths(const Lattice& L, int lo, int hi, int m, int n) {
  std::vector<Site> a = level_sites(L, m, lo, hi);
  std::vector<Site> b = level_sites(L, n, lo - 100, hi + 100);
  std::vector<Path> all = fixtures::brute_paths(L, a, b, Region::whole(m, n));
  std::erase_if(all, [&](const Path& p) {
    return std::any_of(p.xs.begin(), p.xs.end(), [&](int x) { return x < lo || x > hi; });
  });
  return all;
}

bool strictly_below(const Path& p, const Path& tau) {
  for (int k = p.first_level(); k <= p.last_level(); ++k) {
    if (p.at(k) >= tau.at(k)) return false;
  }
  return true;
}

bool strictly_above(const Path& p, const Path& tau) {
  for (int k = p.first_level(); k <= p.last_level(); ++k) {
    if (p.at(k) <= tau.at(k)) return false;
  }
  return true;
}

}  // namespace

TEST_CASE("diamond paths") {
  const Lattice L = Lattice::bond();
  const std::vector<Site> a{{0, 0}}, b{{0, 2}};
  const auto paths = enumerate_paths(L, a, b, Region::whole(0, 2));
  REQUIRE(paths.size() == 2);
  CHECK(paths[0] == Path{0, {0, -1, 0}});
  CHECK(paths[1] == Path{0, {0, 1, 0}});
  const std::vector<Site> c{{1, 1}};
  const auto through = enumerate_paths_through(L, a, c, b, Region::whole(0, 2));
  REQUIRE(through.size() == 1);
  CHECK(through[0] == Path{0, {0, 1, 0}});
  const auto left = enumerate_paths(L, a, b, strictly_left_region(c, 0, 2));
  REQUIRE(left.size() == 1);
  CHECK(left[0] == Path{0, {0, -1, 0}});
}

TEST_CASE("enumeration matches brute force and ranks are positions") {
  std::mt19937_64 rng(21);
  for (const Lattice& L : {Lattice::bond(), Lattice::site(0, 1), Lattice::site(-1, 2)}) {
    for (int trial = 0; trial < 30; ++trial) {
      const auto g = fixtures::random_geometry(rng, L, 4, 1, 60, 3);
      const Region r = Region::whole(g.m, g.n);
      const auto want = fixtures::brute_paths(L, g.a, g.b, r);
      const auto got = enumerate_paths(L, g.a, g.b, r);
      CHECK(got == want);
      const auto c = compile(L, g.a, g.b, r);
      CHECK(c.graph.path_count() == want.size());
      for (std::size_t i = 0; i < want.size(); ++i) CHECK(c.graph.rank_of(want[i]) == i);
    }
  }
}

TEST_CASE("path listing honours the limit") {
  const Lattice L = Lattice::bond();
  const auto c = compile(L, {{0, 0}}, level_sites(L, 6, -6, 6), Region::whole(0, 6));
  CHECK(c.graph.path_count() == 64);
  CHECK(error_of([&] { (void)c.graph.paths(10); }) == ErrorCode::SupportTooLarge);
}

TEST_CASE("open paths form a lattice under pointwise min and max") {
  std::mt19937_64 rng(22);
  for (const Lattice& L : {Lattice::bond(), Lattice::site(-1, 2)}) {
    for (int trial = 0; trial < 8; ++trial) {
      const auto g = fixtures::random_geometry(rng, L, 3, 3, 10, 2);
      const Region r = Region::whole(g.m, g.n);
      const auto c = compile(L, g.a, g.b, r);
      const auto paths = fixtures::brute_paths(L, g.a, g.b, r);
      for (std::uint64_t bits = 0; bits < (std::uint64_t{1} << c.universe->size()); ++bits) {
        std::vector<const Path*> open;
        for (const Path& p : paths) {
          if (fixtures::path_open(*c.universe, bits, p)) open.push_back(&p);
        }
        for (const Path* x : open) {
          for (const Path* y : open) {
            CHECK(fixtures::path_open(*c.universe, bits, pointwise_min(*x, *y)));
            CHECK(fixtures::path_open(*c.universe, bits, pointwise_max(*x, *y)));
          }
        }
      }
    }
  }
}

TEST_CASE("extreme open paths equal the brute-force extremes") {
  std::mt19937_64 rng(23);
  for (const Lattice& L : {Lattice::bond(), Lattice::site(0, 1)}) {
    for (int trial = 0; trial < 10; ++trial) {
      const auto g = fixtures::random_geometry(rng, L, 4, 2, 10, 2);
      const std::vector<Site> gset{fixtures::random_site(rng, L, g.m + 1, -2, 2)};
      for (const Region& r : {Region::whole(g.m, g.n), strictly_right_region(gset, g.m, g.n)}) {
        const auto paths = fixtures::brute_paths(L, g.a, g.b, r);
        if (paths.empty()) continue;
        const auto c = compile(L, g.a, g.b, r);
        for (std::uint64_t bits = 0; bits < (std::uint64_t{1} << c.universe->size()); ++bits) {
          const std::uint64_t words[] = {bits};
          CHECK(c.graph.leftmost(words) == fixtures::brute_extreme(*c.universe, bits, paths, true));
          CHECK(c.graph.rightmost(words) == fixtures::brute_extreme(*c.universe, bits, paths, false));
          CHECK(c.graph.connected(words) == c.graph.leftmost(words).has_value());
          const auto config = Configuration::from_bits(c.universe, bits);
          CHECK(leftmost_open_path(config, g.a, g.b, r) == c.graph.leftmost(words));
          CHECK(rightmost_open_path(config, g.a, g.b, r) == c.graph.rightmost(words));
        }
      }
    }
  }
}

TEST_CASE("tau boundary separates exactly like G") {
  std::mt19937_64 rng(24);
  for (const Lattice& L : {Lattice::bond(), Lattice::site(-1, 2)}) {
    const auto paths = window_paths(L, -5, 5, 0, 4);
    REQUIRE(!paths.empty());
    for (int trial = 0; trial < 30; ++trial) {
      std::vector<Site> g;
      const int k = std::uniform_int_distribution<int>(1, 4)(rng);
      for (int i = 0; i < k; ++i) {
        const int level = std::uniform_int_distribution<int>(0, 4)(rng);
        g.push_back(fixtures::random_site(rng, L, level, -5, 5));
      }
      const Path tl = tau_boundary(L, g, 0, 4);
      const Path tr = tau_boundary_right(L, g, 0, 4);
      CHECK(L.valid_path(tl));
      CHECK(L.valid_path(tr));
      for (const Path& p : paths) {
        CHECK(strictly_left_of(p, g) == strictly_below(p, tl));
        CHECK(strictly_right_of(p, g) == strictly_above(p, tr));
      }
    }
  }
}

TEST_CASE("tau boundary examples and errors") {
  const Lattice L = Lattice::bond();
  const std::vector<Site> g{{1, 1}};
  CHECK(tau_boundary(L, g, 0, 2) == Path{0, {2, 1, 2}});
  CHECK(tau_boundary_right(L, g, 0, 2) == Path{0, {0, 1, 0}});
  CHECK(error_of([&] { (void)tau_boundary(L, std::vector<Site>{}, 0, 2); }) == ErrorCode::EmptyG);
  CHECK(error_of([&] { (void)tau_boundary(L, std::vector<Site>{{0, 6}}, 0, 2); }) == ErrorCode::EmptyG);
}
