#include "perco/lattice.hpp"

#include "perco/error.hpp"

#include <algorithm>
#include <limits>

namespace perco {

Lattice Lattice::bond() { return Lattice(true, Openness::Bonds, {-1, 1}); }

Lattice Lattice::site(int a, int b) {
  if (!(a <= 0 && 0 < b)) {
    throw Error(ErrorCode::InvalidModel,
                "range must satisfy a <= 0 < b, got [" + std::to_string(a) + "," + std::to_string(b) + "]");
  }
  std::vector<int> steps;
  for (int k = a; k <= b; ++k) steps.push_back(k);
  return Lattice(false, Openness::Sites, std::move(steps));
}

bool Lattice::valid(Site s) const noexcept {
  if (s.y < 0) return false;
  return !parity_ || ((s.x + s.y) % 2 == 0);
}

bool Lattice::valid_step(int step) const noexcept {
  return std::binary_search(steps_.begin(), steps_.end(), step);
}

void Lattice::require_valid(Site s, std::string_view what) const {
  if (!valid(s)) {
    throw Error(ErrorCode::InvalidSite, std::string(what) + " contains " + to_string(s) +
                                            (parity_ ? ", which violates y >= 0 and x + y even"
                                                     : ", which violates y >= 0"));
  }
}

bool Lattice::valid_path(const Path& p) const noexcept {
  if (p.xs.empty()) return false;
  for (std::size_t i = 0; i < p.xs.size(); ++i) {
    if (!valid(Site{p.xs[i], p.m + static_cast<int>(i)})) return false;
    if (i + 1 < p.xs.size() && !valid_step(p.xs[i + 1] - p.xs[i])) return false;
  }
  return true;
}

std::vector<Site> level_sites(const Lattice& lattice, int n, int lo, int hi) {
  std::vector<Site> out;
  if (n < 0) return out;
  for (int x = lo; x <= hi; ++x) {
    if (lattice.valid(Site{x, n})) out.push_back(Site{x, n});
  }
  return out;
}

std::strong_ordering operator<=>(const Bound& a, const Bound& b) {
  if (auto c = static_cast<int>(a.kind_) <=> static_cast<int>(b.kind_); c != 0) return c;
  if (a.kind_ != Bound::Kind::Finite) return std::strong_ordering::equal;
  return a.value_ <=> b.value_;
}

Region Region::whole(int m, int n) {
  if (m < 0 || n < m) {
    throw Error(ErrorCode::LevelMismatch, "invalid slab [" + std::to_string(m) + "," + std::to_string(n) + "]");
  }
  const auto levels = static_cast<std::size_t>(n - m + 1);
  return Region(m, std::vector<Bound>(levels, Bound::neg_inf()), std::vector<Bound>(levels, Bound::pos_inf()));
}

bool Region::contains(Site s) const noexcept {
  if (s.y < m_ || s.y > last_level()) return false;
  const auto i = static_cast<std::size_t>(s.y - m_);
  return lo_[i].less_than(s.x) && hi_[i].greater_than(s.x);
}

bool Region::contains(const Path& p) const noexcept {
  for (std::size_t i = 0; i < p.xs.size(); ++i) {
    if (!contains(Site{p.xs[i], p.m + static_cast<int>(i)})) return false;
  }
  return true;
}

Region Region::intersect(const Region& other) const {
  if (m_ != other.m_ || lo_.size() != other.lo_.size()) {
    throw Error(ErrorCode::LevelMismatch, "cannot intersect regions on different slabs");
  }
  Region out = *this;
  for (std::size_t i = 0; i < lo_.size(); ++i) {
    out.lo_[i] = std::max(lo_[i], other.lo_[i]);
    out.hi_[i] = std::min(hi_[i], other.hi_[i]);
  }
  return out;
}

Region strictly_left_region(std::span<const Site> g, int m, int n) {
  Region out = Region::whole(m, n);
  for (const Site& s : g) {
    if (s.y < m || s.y > n) continue;
    Bound& hi = out.hi_[static_cast<std::size_t>(s.y - m)];
    hi = std::min(hi, Bound::at(s.x));
  }
  return out;
}

Region strictly_right_region(std::span<const Site> g, int m, int n) {
  Region out = Region::whole(m, n);
  for (const Site& s : g) {
    if (s.y < m || s.y > n) continue;
    Bound& lo = out.lo_[static_cast<std::size_t>(s.y - m)];
    lo = std::max(lo, Bound::at(s.x));
  }
  return out;
}

Region band(const BoundaryPath& tau1, const BoundaryPath& tau2, int m, int n) {
  Region out = Region::whole(m, n);
  for (const BoundaryPath* t : {&tau1, &tau2}) {
    if (t->finite() && (t->path().first_level() != m || t->path().last_level() != n)) {
      throw Error(ErrorCode::LevelMismatch, "band boundary path does not span [" + std::to_string(m) + "," +
                                                std::to_string(n) + "]");
    }
  }
  if (tau1.kind() == BoundaryPath::Kind::PosInf || tau2.kind() == BoundaryPath::Kind::NegInf ||
      !path_leq(tau1, tau2, /*strict=*/true)) {
    throw Error(ErrorCode::NotStrictlyOrdered, "band requires tau1 strictly left of tau2");
  }
  for (int k = m; k <= n; ++k) {
    const auto i = static_cast<std::size_t>(k - m);
    if (tau1.finite()) out.lo_[i] = Bound::at(tau1.path().at(k));
    if (tau2.finite()) out.hi_[i] = Bound::at(tau2.path().at(k));
  }
  return out;
}

int common_level(std::span<const Site> sites, std::string_view what) {
  if (sites.empty()) throw Error(ErrorCode::LevelMismatch, std::string(what) + " is empty");
  const int level = sites.front().y;
  for (const Site& s : sites) {
    if (s.y != level) throw Error(ErrorCode::LevelMismatch, std::string(what) + " spans several levels");
  }
  return level;
}

Support path_support(const Lattice& lattice, const Region& region, std::span<const Site> a,
                     std::span<const Site> b) {
  const int m = region.first_level();
  const int n = region.last_level();
  if (common_level(a, "A") != m) throw Error(ErrorCode::LevelMismatch, "A must lie on level " + std::to_string(m));
  if (common_level(b, "B") != n) throw Error(ErrorCode::LevelMismatch, "B must lie on level " + std::to_string(n));
  for (const Site& s : a) lattice.require_valid(s, "A");
  for (const Site& s : b) lattice.require_valid(s, "B");

  const auto levels = static_cast<std::size_t>(n - m + 1);
  std::vector<std::vector<int>> fwd(levels);
  for (const Site& s : a) {
    if (region.contains(s)) fwd[0].push_back(s.x);
  }
  auto normalize = [](std::vector<int>& v) {
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end()), v.end());
  };
  normalize(fwd[0]);
  for (std::size_t i = 0; i + 1 < levels; ++i) {
    const int next_level = m + static_cast<int>(i) + 1;
    for (int x : fwd[i]) {
      for (int step : lattice.steps()) {
        if (region.contains(Site{x + step, next_level})) fwd[i + 1].push_back(x + step);
      }
    }
    normalize(fwd[i + 1]);
  }

  std::vector<std::vector<int>> on(levels);
  for (const Site& s : b) {
    if (std::binary_search(fwd[levels - 1].begin(), fwd[levels - 1].end(), s.x)) on[levels - 1].push_back(s.x);
  }
  normalize(on[levels - 1]);
  for (std::size_t i = levels - 1; i-- > 0;) {
    for (int x : fwd[i]) {
      for (int step : lattice.steps()) {
        if (std::binary_search(on[i + 1].begin(), on[i + 1].end(), x + step)) {
          on[i].push_back(x);
          break;
        }
      }
    }
  }

  Support out;
  if (on[0].empty()) return out;
  for (std::size_t i = 0; i < levels; ++i) {
    const int level = m + static_cast<int>(i);
    for (int x : on[i]) out.sites.push_back(Site{x, level});
    if (i + 1 == levels) continue;
    for (int x : on[i]) {
      for (int step : lattice.steps()) {
        if (std::binary_search(on[i + 1].begin(), on[i + 1].end(), x + step)) {
          out.edges.push_back(Edge{Site{x, level}, step});
        }
      }
    }
  }
  return out;
}

std::vector<Edge> edge_support(const Lattice& lattice, const Region& region, std::span<const Site> a,
                               std::span<const Site> b) {
  Support s = path_support(lattice, region, a, b);
  if (s.empty()) throw Error(ErrorCode::NoPath, "no path from A to B inside the region");
  return std::move(s.edges);
}

bool strictly_left_of(const Path& p, std::span<const Site> g) {
  for (const Site& s : g) {
    if (s.y >= p.first_level() && s.y <= p.last_level() && p.at(s.y) >= s.x) return false;
  }
  return true;
}

bool strictly_right_of(const Path& p, std::span<const Site> g) {
  for (const Site& s : g) {
    if (s.y >= p.first_level() && s.y <= p.last_level() && p.at(s.y) <= s.x) return false;
  }
  return true;
}

std::string to_string(Site s) { return "(" + std::to_string(s.x) + "," + std::to_string(s.y) + ")"; }

}  // namespace perco
