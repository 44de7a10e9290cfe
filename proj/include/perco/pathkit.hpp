#pragma once

#include "perco/lattice.hpp"
#include "perco/path.hpp"
#include "perco/universe.hpp"

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace perco {

/// All A -> B paths inside `region`, in lexicographic order of xs.
std::vector<Path> enumerate_paths(const Lattice& lattice, std::span<const Site> a, std::span<const Site> b,
                                  const Region& region);
/// The subset of enumerate_paths(a, b, region) that passes through a point of C.
std::vector<Path> enumerate_paths_through(const Lattice& lattice, std::span<const Site> a,
                                          std::span<const Site> c, std::span<const Site> b,
                                          const Region& region);

/// The path tau_G on [m, n]: a path is strictly left of G iff it is strictly
/// left of tau_G.  Built as the lower envelope of the cones issued from the
/// points of G inside the slab.  Throws EmptyG when no point of G lies in [m, n].
Path tau_boundary(const Lattice& lattice, std::span<const Site> g, int m, int n);
/// Mirror of tau_boundary for "strictly right of G".
Path tau_boundary_right(const Lattice& lattice, std::span<const Site> g, int m, int n);

/// The graph of A -> B paths inside a region, compiled against a universe so
/// that configurations can be evaluated without allocation.
///
/// Extreme open paths come from a two-pass reachability DP: forward from A,
/// then backward from B restricted to the forward set.  The surviving sites on
/// each level are exactly the sites of open A -> B paths; the leftmost open
/// path is then a greedy descent through the smallest surviving successor.
/// Path ranks are positions in lexicographic order, i.e. indices into paths().
class SupportGraph {
 public:
  static constexpr int kMaxLevels = 64;
  static constexpr int kMaxWidth = 64;

  /// The universe must contain every unit of the A -> B support.
  SupportGraph(const Universe& universe, const Region& region, std::span<const Site> a, std::span<const Site> b);

  [[nodiscard]] bool has_paths() const noexcept { return !nodes_.empty(); }
  [[nodiscard]] int first_level() const noexcept { return m_; }
  [[nodiscard]] int last_level() const noexcept { return m_ + levels_ - 1; }
  [[nodiscard]] const Support& support() const noexcept { return support_; }
  /// Number of A -> B paths, saturating at UINT64_MAX.
  [[nodiscard]] std::uint64_t path_count() const noexcept { return total_paths_; }
  /// All paths in rank order; throws SupportTooLarge beyond `limit` paths.
  [[nodiscard]] std::vector<Path> paths(std::uint64_t limit = 1U << 20) const;
  [[nodiscard]] std::uint64_t rank_of(const Path& p) const;

  [[nodiscard]] bool connected(std::span<const std::uint64_t> words) const noexcept;
  /// Rank of the leftmost / rightmost open path, or -1 when none is open.
  [[nodiscard]] std::int64_t leftmost_rank(std::span<const std::uint64_t> words) const noexcept;
  [[nodiscard]] std::int64_t rightmost_rank(std::span<const std::uint64_t> words) const noexcept;
  [[nodiscard]] std::optional<Path> leftmost(std::span<const std::uint64_t> words) const;
  [[nodiscard]] std::optional<Path> rightmost(std::span<const std::uint64_t> words) const;

 private:
  struct Node {
    int x;
    int level;  // relative to m_
    int local;  // bit position in the level mask
    int unit;   // site unit, or -1 when sites are always open
  };
  struct Arc {
    int target;
    int unit;             // edge unit, or -1 when bonds are always open
    std::uint64_t before;  // paths through earlier arcs of the same node
  };
  using Masks = std::array<std::uint64_t, kMaxLevels>;

  static bool bit(std::span<const std::uint64_t> words, int unit) noexcept {
    return unit < 0 || ((words[static_cast<std::size_t>(unit) >> 6] >> (unit & 63)) & 1U);
  }
  /// Fills co[k] with the level-k sites that lie on an open A -> B path.
  void reach(std::span<const std::uint64_t> words, Masks& co) const noexcept;
  template <bool Left>
  std::int64_t descend(std::span<const std::uint64_t> words, Path* out) const;

  int m_ = 0;
  int levels_ = 0;
  Support support_;
  std::vector<Node> nodes_;
  std::vector<int> level_begin_;  // levels_ + 1 offsets into nodes_
  std::vector<Arc> arcs_;         // grouped by source node, ascending target x
  std::vector<int> arc_begin_;    // nodes_.size() + 1 offsets
  std::vector<std::uint64_t> start_before_;  // per level-0 node: paths from earlier A nodes
  std::uint64_t a_mask_ = 0;
  std::uint64_t b_mask_ = 0;
  std::uint64_t total_paths_ = 0;
};

/// The open A -> B path in `region` that is pointwise left of all others, or
/// nothing when no open path exists.
std::optional<Path> leftmost_open_path(const Configuration& config, std::span<const Site> a,
                                       std::span<const Site> b, const Region& region);
std::optional<Path> rightmost_open_path(const Configuration& config, std::span<const Site> a,
                                        std::span<const Site> b, const Region& region);

}  // namespace perco
