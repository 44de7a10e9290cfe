#pragma once

// Independent brute-force oracles and random geometries for the tests.
// Nothing here calls SupportGraph or the enumeration engine.

#include "perco/lattice.hpp"
#include "perco/model.hpp"
#include "perco/prob.hpp"
#include "perco/universe.hpp"

#include <algorithm>
#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <random>
#include <set>
#include <vector>

namespace fixtures {

using perco::Edge;
using perco::Lattice;
using perco::Path;
using perco::Rational;
using perco::Region;
using perco::Site;

struct Geometry {
  std::vector<Site> a;
  std::vector<Site> b;
  int m = 0;
  int n = 0;
};

/// Every A -> B path inside the region, by plain recursion over the steps.
inline std::vector<Path> brute_paths(const Lattice& lattice, const std::vector<Site>& a, const std::vector<Site>& b,
                                     const Region& region) {
  std::set<Site> targets(b.begin(), b.end());
  std::vector<Path> out;
  const int m = region.first_level();
  const int n = region.last_level();
  std::vector<int> xs;
  std::function<void(Site)> walk = [&](Site s) {
    xs.push_back(s.x);
    if (s.y == n) {
      if (targets.count(s)) out.push_back(Path{m, xs});
    } else {
      for (int step : lattice.steps()) {
        const Site t{s.x + step, s.y + 1};
        if (region.contains(t)) walk(t);
      }
    }
    xs.pop_back();
  };
  for (const Site& s : std::set<Site>(a.begin(), a.end())) {
    if (s.y == m && region.contains(s)) walk(s);
  }
  std::sort(out.begin(), out.end());
  return out;
}

/// Units of a path in the universe (-1 entries mean "not randomized").
inline std::vector<int> path_units(const perco::Universe& u, const Path& p) {
  std::vector<int> units;
  if (u.openness() == perco::Openness::Sites) {
    for (int k = p.first_level(); k <= p.last_level(); ++k) units.push_back(u.index_of(Site{p.at(k), k}));
  } else {
    for (int k = p.first_level(); k < p.last_level(); ++k) {
      units.push_back(u.index_of(Edge{Site{p.at(k), k}, p.at(k + 1) - p.at(k)}));
    }
  }
  return units;
}

inline bool path_open(const perco::Universe& u, std::uint64_t bits, const Path& p) {
  for (int unit : path_units(u, p)) {
    if (unit < 0) return false;
    if (!((bits >> unit) & 1U)) return false;
  }
  return true;
}

/// Minimum (maximum) of the open paths, asserted to be a true pointwise extreme.
inline std::optional<Path> brute_extreme(const perco::Universe& u, std::uint64_t bits, const std::vector<Path>& paths,
                                         bool left) {
  std::vector<const Path*> open;
  for (const Path& p : paths) {
    if (path_open(u, bits, p)) open.push_back(&p);
  }
  for (const Path* c : open) {
    bool extreme = true;
    for (const Path* q : open) {
      for (std::size_t i = 0; i < c->xs.size() && extreme; ++i) {
        extreme = left ? c->xs[i] <= q->xs[i] : c->xs[i] >= q->xs[i];
      }
      if (!extreme) break;
    }
    if (extreme) return *c;
  }
  return std::nullopt;
}

inline Rational exact_of(const perco::Prob& p) { return *p.exact(); }

/// P(configuration) straight from the model, unit by unit.
inline Rational config_probability(const perco::PercolationModel& model, const perco::Universe& u, std::uint64_t bits) {
  Rational prob = 1;
  auto bit = [&](int unit) { return ((bits >> unit) & 1U) != 0; };
  if (u.openness() == perco::Openness::Sites) {
    for (std::size_t i = 0; i < u.sites().size(); ++i) {
      const Rational q = exact_of(model.site_prob(u.sites()[i]));
      prob *= bit(static_cast<int>(i)) ? q : 1 - q;
    }
    return prob;
  }
  std::map<Site, std::pair<int, int>> by_site;  // left, right unit
  for (std::size_t i = 0; i < u.edges().size(); ++i) {
    const Edge& e = u.edges()[i];
    auto [it, fresh] = by_site.try_emplace(e.from, -1, -1);
    (e.step < 0 ? it->second.first : it->second.second) = static_cast<int>(i);
  }
  for (const auto& [site, lr] : by_site) {
    const perco::PairLaw law = model.pair_law(site);
    const auto [l, r] = lr;
    if (l >= 0 && r >= 0) {
      prob *= exact_of(law.q[static_cast<std::size_t>(2 * bit(l) + bit(r))]);
    } else if (l >= 0) {
      const Rational q = exact_of(law.left_open());
      prob *= bit(l) ? q : 1 - q;
    } else {
      const Rational q = exact_of(law.right_open());
      prob *= bit(r) ? q : 1 - q;
    }
  }
  return prob;
}

/// Law of the extreme open path, summed over all configurations.
inline std::map<Path, Rational> brute_extreme_law(const perco::PercolationModel& model, const perco::Universe& u,
                                                  const std::vector<Path>& paths, bool left) {
  std::map<Path, Rational> law;
  Rational total = 0;
  for (std::uint64_t bits = 0; bits < (std::uint64_t{1} << u.size()); ++bits) {
    const auto e = brute_extreme(u, bits, paths, left);
    if (!e) continue;
    const Rational p = config_probability(model, u, bits);
    if (p == 0) continue;
    law[*e] += p;
    total += p;
  }
  for (auto& [path, q] : law) q /= total;
  return law;
}

/// Units of a bond or site universe covering the given regions' supports.
inline std::shared_ptr<const perco::Universe> universe_for(const Lattice& lattice,
                                                           const std::vector<perco::Support>& supports) {
  return std::make_shared<const perco::Universe>(lattice, supports);
}

inline int unit_count(const Lattice& lattice, const perco::Support& s) {
  return lattice.openness() == perco::Openness::Sites ? static_cast<int>(s.sites.size())
                                                      : static_cast<int>(s.edges.size());
}

inline Site random_site(std::mt19937_64& rng, const Lattice& lattice, int level, int lo, int hi) {
  std::vector<Site> sites = perco::level_sites(lattice, level, lo, hi);
  return sites[std::uniform_int_distribution<std::size_t>(0, sites.size() - 1)(rng)];
}

inline std::vector<Site> random_set(std::mt19937_64& rng, const Lattice& lattice, int level, int lo, int hi,
                                    int max_size) {
  const int k = std::uniform_int_distribution<int>(1, max_size)(rng);
  std::set<Site> s;
  for (int i = 0; i < k; ++i) s.insert(random_site(rng, lattice, level, lo, hi));
  return {s.begin(), s.end()};
}

/// A random slab geometry with at least one path and between min_units and
/// max_units units on the whole-slab support.
inline Geometry random_geometry(std::mt19937_64& rng, const Lattice& lattice, int max_levels, int min_units,
                                int max_units, int max_set = 2) {
  for (;;) {
    Geometry g;
    g.m = std::uniform_int_distribution<int>(0, 1)(rng);
    g.n = g.m + std::uniform_int_distribution<int>(1, max_levels)(rng);
    const int w = lattice.max_step() - lattice.min_step() > 2 ? 1 : 2;
    g.a = random_set(rng, lattice, g.m, -w, w, max_set);
    g.b = random_set(rng, lattice, g.n, -w - 1, w + 1, max_set);
    const auto s = perco::path_support(lattice, Region::whole(g.m, g.n), g.a, g.b);
    const int units = unit_count(lattice, s);
    if (!s.empty() && units >= min_units && units <= max_units) return g;
  }
}

}  // namespace fixtures

#include "perco/error.hpp"

namespace fixtures {

/// Error code thrown by `f`, or nothing when it returns normally.
template <class F>
std::optional<perco::ErrorCode> error_of(F&& f) {
  try {
    f();
  } catch (const perco::Error& e) {
    return e.code();
  }
  return std::nullopt;
}

}  // namespace fixtures

namespace fixtures {

inline double to_double_q(const perco::Rational& q) { return perco::to_double(q); }

}  // namespace fixtures
