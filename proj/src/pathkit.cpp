#include "perco/pathkit.hpp"

#include "perco/error.hpp"

#include <algorithm>
#include <bit>
#include <limits>

namespace perco {

namespace {

std::uint64_t saturating_add(std::uint64_t a, std::uint64_t b) noexcept {
  return a > std::numeric_limits<std::uint64_t>::max() - b ? std::numeric_limits<std::uint64_t>::max() : a + b;
}

std::vector<Site> in_slab(std::span<const Site> g, int m, int n) {
  std::vector<Site> out;
  for (const Site& s : g) {
    if (s.y >= m && s.y <= n) out.push_back(s);
  }
  if (g.empty()) throw Error(ErrorCode::EmptyG, "G is empty");
  if (out.empty()) throw Error(ErrorCode::EmptyG, "no point of G lies in the slab");
  return out;
}

}  // namespace

std::vector<Path> enumerate_paths(const Lattice& lattice, std::span<const Site> a, std::span<const Site> b,
                                  const Region& region) {
  const Support support = path_support(lattice, region, a, b);
  if (support.empty()) return {};
  const Support supports[] = {support};
  const Universe universe(lattice, supports);
  return SupportGraph(universe, region, a, b).paths();
}

std::vector<Path> enumerate_paths_through(const Lattice& lattice, std::span<const Site> a,
                                          std::span<const Site> c, std::span<const Site> b,
                                          const Region& region) {
  const int j = common_level(c, "C");
  std::vector<Path> out;
  for (Path& p : enumerate_paths(lattice, a, b, region)) {
    if (j < p.first_level() || j > p.last_level()) continue;
    const Site here{p.at(j), j};
    if (std::find(c.begin(), c.end(), here) != c.end()) out.push_back(std::move(p));
  }
  return out;
}

Path tau_boundary(const Lattice& lattice, std::span<const Site> g, int m, int n) {
  const std::vector<Site> pts = in_slab(g, m, n);
  const int a = lattice.min_step();
  const int b = lattice.max_step();
  Path tau{m, {}};
  for (int j = m; j <= n; ++j) {
    int best = std::numeric_limits<int>::max();
    for (const Site& s : pts) {
      const int cone = j >= s.y ? s.x + b * (j - s.y) : s.x - a * (s.y - j);
      best = std::min(best, cone);
    }
    tau.xs.push_back(best);
  }
  return tau;
}

Path tau_boundary_right(const Lattice& lattice, std::span<const Site> g, int m, int n) {
  const std::vector<Site> pts = in_slab(g, m, n);
  const int a = lattice.min_step();
  const int b = lattice.max_step();
  Path tau{m, {}};
  for (int j = m; j <= n; ++j) {
    int best = std::numeric_limits<int>::min();
    for (const Site& s : pts) {
      const int cone = j >= s.y ? s.x + a * (j - s.y) : s.x - b * (s.y - j);
      best = std::max(best, cone);
    }
    tau.xs.push_back(best);
  }
  return tau;
}

SupportGraph::SupportGraph(const Universe& universe, const Region& region, std::span<const Site> a,
                           std::span<const Site> b)
    : m_(region.first_level()),
      levels_(region.last_level() - region.first_level() + 1),
      support_(path_support(universe.lattice(), region, a, b)) {
  if (levels_ > kMaxLevels) throw Error(ErrorCode::SupportTooLarge, "more than 64 levels");
  level_begin_.assign(static_cast<std::size_t>(levels_) + 1, 0);
  arc_begin_.assign(1, 0);
  if (support_.empty()) return;

  const bool site_units = universe.openness() == Openness::Sites;
  for (const Site& s : support_.sites) {
    const int level = s.y - m_;
    const int local = static_cast<int>(nodes_.size()) - level_begin_[static_cast<std::size_t>(level)];
    if (local >= kMaxWidth) throw Error(ErrorCode::SupportTooLarge, "more than 64 sites on one level");
    int unit = -1;
    if (site_units) {
      unit = universe.index_of(s);
      if (unit < 0) throw Error(ErrorCode::InvalidSite, "universe does not contain support site " + to_string(s));
    }
    nodes_.push_back(Node{s.x, level, local, unit});
    for (std::size_t k = static_cast<std::size_t>(level) + 1; k < level_begin_.size(); ++k) {
      level_begin_[k] = static_cast<int>(nodes_.size());
    }
  }

  auto find_node = [&](int level, int x) -> int {
    const auto first = nodes_.begin() + level_begin_[static_cast<std::size_t>(level)];
    const auto last = nodes_.begin() + level_begin_[static_cast<std::size_t>(level) + 1];
    auto it = std::lower_bound(first, last, x, [](const Node& n, int v) { return n.x < v; });
    return (it != last && it->x == x) ? static_cast<int>(it - nodes_.begin()) : -1;
  };

  for (const Node& u : nodes_) {
    if (u.level + 1 < levels_) {
      for (int step : universe.lattice().steps()) {
        const int t = find_node(u.level + 1, u.x + step);
        if (t < 0) continue;
        int unit = -1;
        if (!site_units) {
          const Edge e{Site{u.x, u.level + m_}, step};
          unit = universe.index_of(e);
          if (unit < 0) throw Error(ErrorCode::InvalidSite, "universe does not contain a support edge");
        }
        arcs_.push_back(Arc{t, unit, 0});
      }
    }
    arc_begin_.push_back(static_cast<int>(arcs_.size()));
  }

  for (const Site& s : a) {
    if (s.y == m_) {
      if (int i = find_node(0, s.x); i >= 0) a_mask_ |= std::uint64_t{1} << nodes_[static_cast<std::size_t>(i)].local;
    }
  }
  for (const Site& s : b) {
    if (int i = find_node(levels_ - 1, s.x); i >= 0 && s.y == last_level()) {
      b_mask_ |= std::uint64_t{1} << nodes_[static_cast<std::size_t>(i)].local;
    }
  }

  std::vector<std::uint64_t> count(nodes_.size(), 0);
  for (std::size_t u = nodes_.size(); u-- > 0;) {
    if (nodes_[u].level == levels_ - 1) {
      count[u] = 1;
      continue;
    }
    std::uint64_t acc = 0;
    for (int i = arc_begin_[u]; i < arc_begin_[u + 1]; ++i) {
      Arc& arc = arcs_[static_cast<std::size_t>(i)];
      arc.before = acc;
      acc = saturating_add(acc, count[static_cast<std::size_t>(arc.target)]);
    }
    count[u] = acc;
  }
  std::uint64_t acc = 0;
  for (int u = level_begin_[0]; u < level_begin_[1]; ++u) {
    start_before_.push_back(acc);
    acc = saturating_add(acc, count[static_cast<std::size_t>(u)]);
  }
  total_paths_ = acc;
}

std::vector<Path> SupportGraph::paths(std::uint64_t limit) const {
  if (total_paths_ > limit) throw Error(ErrorCode::SupportTooLarge, "too many paths to list");
  std::vector<Path> out;
  out.reserve(static_cast<std::size_t>(total_paths_));
  Path current{m_, {}};
  auto walk = [&](auto&& self, int u) -> void {
    current.xs.push_back(nodes_[static_cast<std::size_t>(u)].x);
    if (nodes_[static_cast<std::size_t>(u)].level == levels_ - 1) {
      out.push_back(current);
    } else {
      for (int i = arc_begin_[static_cast<std::size_t>(u)]; i < arc_begin_[static_cast<std::size_t>(u) + 1]; ++i) {
        self(self, arcs_[static_cast<std::size_t>(i)].target);
      }
    }
    current.xs.pop_back();
  };
  if (has_paths()) {
    for (int u = level_begin_[0]; u < level_begin_[1]; ++u) walk(walk, u);
  }
  return out;
}

std::uint64_t SupportGraph::rank_of(const Path& p) const {
  if (!has_paths() || p.m != m_ || static_cast<int>(p.xs.size()) != levels_) {
    throw Error(ErrorCode::LevelMismatch, "path does not belong to this support graph");
  }
  int u = -1;
  for (int i = level_begin_[0]; i < level_begin_[1]; ++i) {
    if (nodes_[static_cast<std::size_t>(i)].x == p.xs[0]) u = i;
  }
  if (u < 0) throw Error(ErrorCode::NoPath, "path does not start in the support");
  std::uint64_t rank = start_before_[static_cast<std::size_t>(u - level_begin_[0])];
  for (std::size_t k = 1; k < p.xs.size(); ++k) {
    bool found = false;
    for (int i = arc_begin_[static_cast<std::size_t>(u)]; i < arc_begin_[static_cast<std::size_t>(u) + 1]; ++i) {
      const Arc& arc = arcs_[static_cast<std::size_t>(i)];
      if (nodes_[static_cast<std::size_t>(arc.target)].x == p.xs[k]) {
        rank += arc.before;
        u = arc.target;
        found = true;
        break;
      }
    }
    if (!found) throw Error(ErrorCode::NoPath, "path leaves the support");
  }
  return rank;
}

void SupportGraph::reach(std::span<const std::uint64_t> words, Masks& co) const noexcept {
  Masks fwd{};
  std::uint64_t open0 = 0;
  for (int u = level_begin_[0]; u < level_begin_[1]; ++u) {
    const Node& node = nodes_[static_cast<std::size_t>(u)];
    if (bit(words, node.unit)) open0 |= std::uint64_t{1} << node.local;
  }
  fwd[0] = a_mask_ & open0;
  for (int k = 0; k + 1 < levels_; ++k) {
    std::uint64_t next = 0;
    for (std::uint64_t mask = fwd[static_cast<std::size_t>(k)]; mask != 0; mask &= mask - 1) {
      const int u = level_begin_[static_cast<std::size_t>(k)] + std::countr_zero(mask);
      for (int i = arc_begin_[static_cast<std::size_t>(u)]; i < arc_begin_[static_cast<std::size_t>(u) + 1]; ++i) {
        const Arc& arc = arcs_[static_cast<std::size_t>(i)];
        const Node& t = nodes_[static_cast<std::size_t>(arc.target)];
        if (bit(words, arc.unit) && bit(words, t.unit)) next |= std::uint64_t{1} << t.local;
      }
    }
    fwd[static_cast<std::size_t>(k) + 1] = next;
  }
  co[static_cast<std::size_t>(levels_) - 1] = fwd[static_cast<std::size_t>(levels_) - 1] & b_mask_;
  for (int k = levels_ - 2; k >= 0; --k) {
    std::uint64_t here = 0;
    const std::uint64_t above = co[static_cast<std::size_t>(k) + 1];
    if (above != 0) {
      for (std::uint64_t mask = fwd[static_cast<std::size_t>(k)]; mask != 0; mask &= mask - 1) {
        const int local = std::countr_zero(mask);
        const int u = level_begin_[static_cast<std::size_t>(k)] + local;
        for (int i = arc_begin_[static_cast<std::size_t>(u)]; i < arc_begin_[static_cast<std::size_t>(u) + 1]; ++i) {
          const Arc& arc = arcs_[static_cast<std::size_t>(i)];
          if (bit(words, arc.unit) && ((above >> nodes_[static_cast<std::size_t>(arc.target)].local) & 1U)) {
            here |= std::uint64_t{1} << local;
            break;
          }
        }
      }
    }
    co[static_cast<std::size_t>(k)] = here;
  }
}

bool SupportGraph::connected(std::span<const std::uint64_t> words) const noexcept {
  if (!has_paths()) return false;
  Masks co;
  reach(words, co);
  return co[0] != 0;
}

template <bool Left>
std::int64_t SupportGraph::descend(std::span<const std::uint64_t> words, Path* out) const {
  if (!has_paths()) return -1;
  Masks co;
  reach(words, co);
  if (co[0] == 0) return -1;
  const int local0 = Left ? std::countr_zero(co[0]) : 63 - std::countl_zero(co[0]);
  int u = level_begin_[0] + local0;
  std::uint64_t rank = start_before_[static_cast<std::size_t>(local0)];
  if (out) {
    out->m = m_;
    out->xs.assign(1, nodes_[static_cast<std::size_t>(u)].x);
  }
  for (int k = 0; k + 1 < levels_; ++k) {
    const std::uint64_t above = co[static_cast<std::size_t>(k) + 1];
    const int lo = arc_begin_[static_cast<std::size_t>(u)];
    const int hi = arc_begin_[static_cast<std::size_t>(u) + 1];
    for (int j = 0; j < hi - lo; ++j) {
      const Arc& arc = arcs_[static_cast<std::size_t>(Left ? lo + j : hi - 1 - j)];
      if (bit(words, arc.unit) && ((above >> nodes_[static_cast<std::size_t>(arc.target)].local) & 1U)) {
        rank += arc.before;
        u = arc.target;
        break;
      }
    }
    if (out) out->xs.push_back(nodes_[static_cast<std::size_t>(u)].x);
  }
  return static_cast<std::int64_t>(rank);
}

std::int64_t SupportGraph::leftmost_rank(std::span<const std::uint64_t> words) const noexcept {
  return descend<true>(words, nullptr);
}

std::int64_t SupportGraph::rightmost_rank(std::span<const std::uint64_t> words) const noexcept {
  return descend<false>(words, nullptr);
}

std::optional<Path> SupportGraph::leftmost(std::span<const std::uint64_t> words) const {
  Path p;
  if (descend<true>(words, &p) < 0) return std::nullopt;
  return p;
}

std::optional<Path> SupportGraph::rightmost(std::span<const std::uint64_t> words) const {
  Path p;
  if (descend<false>(words, &p) < 0) return std::nullopt;
  return p;
}

std::optional<Path> leftmost_open_path(const Configuration& config, std::span<const Site> a,
                                       std::span<const Site> b, const Region& region) {
  return SupportGraph(config.universe(), region, a, b).leftmost(config.words());
}

std::optional<Path> rightmost_open_path(const Configuration& config, std::span<const Site> a,
                                        std::span<const Site> b, const Region& region) {
  return SupportGraph(config.universe(), region, a, b).rightmost(config.words());
}

}  // namespace perco
