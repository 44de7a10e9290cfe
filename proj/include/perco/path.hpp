#pragma once

#include <compare>
#include <vector>

namespace perco {

/// A path from level m to level m + xs.size() - 1, stored as the absolute
/// x-coordinate at every level.
struct Path {
  int m = 0;
  std::vector<int> xs;

  [[nodiscard]] int first_level() const noexcept { return m; }
  [[nodiscard]] int last_level() const noexcept { return m + static_cast<int>(xs.size()) - 1; }
  [[nodiscard]] int at(int level) const { return xs.at(static_cast<std::size_t>(level - m)); }

  friend bool operator==(const Path&, const Path&) = default;
  /// Lexicographic on (m, xs); the enumeration order used everywhere.
  friend auto operator<=>(const Path& a, const Path& b) {
    if (auto c = a.m <=> b.m; c != 0) return c;
    return a.xs <=> b.xs;
  }
};

/// A real path or one of the two sentinel paths at -inf / +inf.
class BoundaryPath {
 public:
  enum class Kind { NegInf, Finite, PosInf };

  static BoundaryPath neg_inf() { return BoundaryPath(Kind::NegInf, {}); }
  static BoundaryPath pos_inf() { return BoundaryPath(Kind::PosInf, {}); }
  static BoundaryPath of(Path p) { return BoundaryPath(Kind::Finite, std::move(p)); }

  [[nodiscard]] Kind kind() const noexcept { return kind_; }
  [[nodiscard]] bool finite() const noexcept { return kind_ == Kind::Finite; }
  /// Only meaningful when finite().
  [[nodiscard]] const Path& path() const noexcept { return path_; }

  friend bool operator==(const BoundaryPath&, const BoundaryPath&) = default;

 private:
  BoundaryPath(Kind k, Path p) : kind_(k), path_(std::move(p)) {}

  Kind kind_;
  Path path_;
};

/// Pointwise order.  Throws LevelMismatch when the level ranges differ.
bool path_leq(const Path& lhs, const Path& rhs, bool strict = false);
/// Sentinel-aware order: -inf is below everything, +inf above everything.
/// Two equal sentinels compare non-strictly equal.
bool path_leq(const BoundaryPath& lhs, const BoundaryPath& rhs, bool strict = false);

Path pointwise_min(const Path& a, const Path& b);
Path pointwise_max(const Path& a, const Path& b);

}  // namespace perco
