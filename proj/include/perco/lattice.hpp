#pragma once

#include "perco/path.hpp"

#include <compare>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace perco {

struct Site {
  int x = 0;
  int y = 0;

  friend bool operator==(const Site&, const Site&) = default;
  /// Ordered by (level, x).
  friend auto operator<=>(const Site& a, const Site& b) {
    if (auto c = a.y <=> b.y; c != 0) return c;
    return a.x <=> b.x;
  }
};

struct Edge {
  Site from;
  int step = 0;

  [[nodiscard]] Site to() const noexcept { return {from.x + step, from.y + 1}; }

  friend bool operator==(const Edge&, const Edge&) = default;
  /// Ordered by (level, x, step); this is the bit-index order of supports.
  friend auto operator<=>(const Edge& a, const Edge& b) {
    if (auto c = a.from <=> b.from; c != 0) return c;
    return a.step <=> b.step;
  }
};

/// Which objects carry the randomness: the bonds (edges) or the sites.
enum class Openness { Bonds, Sites };

/// The oriented lattice: the bond lattice with parity constraint and steps
/// +-1, or the site lattice without parity and steps a..b (a <= 0 < b).
class Lattice {
 public:
  static Lattice bond();
  static Lattice site(int a, int b);

  [[nodiscard]] bool parity() const noexcept { return parity_; }
  [[nodiscard]] Openness openness() const noexcept { return openness_; }
  [[nodiscard]] std::span<const int> steps() const noexcept { return steps_; }
  [[nodiscard]] int min_step() const noexcept { return steps_.front(); }
  [[nodiscard]] int max_step() const noexcept { return steps_.back(); }

  [[nodiscard]] bool valid(Site s) const noexcept;
  [[nodiscard]] bool valid_step(int step) const noexcept;
  void require_valid(Site s, std::string_view what) const;
  /// Checks steps and site validity of every level of `p`.
  [[nodiscard]] bool valid_path(const Path& p) const noexcept;

  friend bool operator==(const Lattice&, const Lattice&) = default;

 private:
  Lattice(bool parity, Openness o, std::vector<int> steps)
      : parity_(parity), openness_(o), steps_(std::move(steps)) {}

  bool parity_;
  Openness openness_;
  std::vector<int> steps_;
};

/// Sites of the lattice on level `n` with lo <= x <= hi, ascending in x.
std::vector<Site> level_sites(const Lattice& lattice, int n, int lo, int hi);

/// One end of a per-level open interval; never encoded as an extreme integer.
class Bound {
 public:
  enum class Kind { NegInf, Finite, PosInf };

  static Bound neg_inf() { return {Kind::NegInf, 0}; }
  static Bound pos_inf() { return {Kind::PosInf, 0}; }
  static Bound at(int x) { return {Kind::Finite, x}; }

  [[nodiscard]] Kind kind() const noexcept { return kind_; }
  [[nodiscard]] bool finite() const noexcept { return kind_ == Kind::Finite; }
  [[nodiscard]] int value() const noexcept { return value_; }

  [[nodiscard]] bool less_than(int x) const noexcept {
    return kind_ == Kind::NegInf || (kind_ == Kind::Finite && value_ < x);
  }
  [[nodiscard]] bool greater_than(int x) const noexcept {
    return kind_ == Kind::PosInf || (kind_ == Kind::Finite && value_ > x);
  }

  friend bool operator==(const Bound&, const Bound&) = default;
  friend std::strong_ordering operator<=>(const Bound& a, const Bound& b);

 private:
  Bound(Kind k, int v) : kind_(k), value_(v) {}

  Kind kind_;
  int value_;
};

/// A sub-lattice of the slab [m, n] whose level-k set is the open interval
/// (lower(k), upper(k)).  Whole lattice, l(G), r(G) and bands are all of this
/// form, and the class is closed under intersection.
class Region {
 public:
  static Region whole(int m, int n);

  [[nodiscard]] int first_level() const noexcept { return m_; }
  [[nodiscard]] int last_level() const noexcept { return m_ + static_cast<int>(lo_.size()) - 1; }
  [[nodiscard]] const Bound& lower(int level) const { return lo_.at(static_cast<std::size_t>(level - m_)); }
  [[nodiscard]] const Bound& upper(int level) const { return hi_.at(static_cast<std::size_t>(level - m_)); }

  [[nodiscard]] bool contains(Site s) const noexcept;
  [[nodiscard]] bool contains(const Path& p) const noexcept;
  /// Intersection; throws LevelMismatch if the slabs differ.
  [[nodiscard]] Region intersect(const Region& other) const;

  friend bool operator==(const Region&, const Region&) = default;

 private:
  friend Region strictly_left_region(std::span<const Site>, int, int);
  friend Region strictly_right_region(std::span<const Site>, int, int);
  friend Region band(const BoundaryPath&, const BoundaryPath&, int, int);

  Region(int m, std::vector<Bound> lo, std::vector<Bound> hi) : m_(m), lo_(std::move(lo)), hi_(std::move(hi)) {}

  int m_;
  std::vector<Bound> lo_;
  std::vector<Bound> hi_;
};

/// l(G) on [m, n]: level-k set {x < inf P1(G cap L_k)}, with inf of the empty set = +inf.
Region strictly_left_region(std::span<const Site> g, int m, int n);
/// r(G) on [m, n]: level-k set {x > sup P1(G cap L_k)}.
Region strictly_right_region(std::span<const Site> g, int m, int n);
/// b(tau1, tau2): points strictly between the two boundary paths.  Finite
/// paths must span [m, n]; throws NotStrictlyOrdered if tau1(k) >= tau2(k).
Region band(const BoundaryPath& tau1, const BoundaryPath& tau2, int m, int n);

/// Sites and edges lying on at least one A -> B path inside a region.
struct Support {
  std::vector<Site> sites;  // ascending (level, x)
  std::vector<Edge> edges;  // ascending (level, x, step)

  [[nodiscard]] bool empty() const noexcept { return edges.empty() && sites.empty(); }
};

/// Forward reachability from A intersected with backward reachability from
/// B, inside `region`.  Returns an empty support when there is no path.
/// A must lie on region.first_level(), B on region.last_level().
Support path_support(const Lattice& lattice, const Region& region, std::span<const Site> a,
                     std::span<const Site> b);

/// Like path_support(...).edges but throws NoPath when empty.
std::vector<Edge> edge_support(const Lattice& lattice, const Region& region, std::span<const Site> a,
                               std::span<const Site> b);

/// True iff every point of `p` is strictly left (right) of every point of G
/// on the same level.
bool strictly_left_of(const Path& p, std::span<const Site> g);
bool strictly_right_of(const Path& p, std::span<const Site> g);

/// Common level of a nonempty site set; throws LevelMismatch otherwise.
int common_level(std::span<const Site> sites, std::string_view what);

std::string to_string(Site s);

}  // namespace perco
