#include "perco/path.hpp"

#include "perco/error.hpp"

#include <algorithm>
#include <string>

namespace perco {

namespace {

void require_same_span(const Path& a, const Path& b) {
  if (a.m != b.m || a.xs.size() != b.xs.size()) {
    throw Error(ErrorCode::LevelMismatch, "paths span levels [" + std::to_string(a.first_level()) + "," +
                                              std::to_string(a.last_level()) + "] and [" +
                                              std::to_string(b.first_level()) + "," +
                                              std::to_string(b.last_level()) + "]");
  }
}

}  // namespace

bool path_leq(const Path& lhs, const Path& rhs, bool strict) {
  require_same_span(lhs, rhs);
  for (std::size_t i = 0; i < lhs.xs.size(); ++i) {
    if (strict ? lhs.xs[i] >= rhs.xs[i] : lhs.xs[i] > rhs.xs[i]) return false;
  }
  return true;
}

bool path_leq(const BoundaryPath& lhs, const BoundaryPath& rhs, bool strict) {
  using K = BoundaryPath::Kind;
  if (lhs.finite() && rhs.finite()) return path_leq(lhs.path(), rhs.path(), strict);
  if (lhs.kind() == rhs.kind()) return !strict;
  if (lhs.kind() == K::NegInf || rhs.kind() == K::PosInf) return true;
  return false;
}

Path pointwise_min(const Path& a, const Path& b) {
  require_same_span(a, b);
  Path out{a.m, a.xs};
  for (std::size_t i = 0; i < out.xs.size(); ++i) out.xs[i] = std::min(a.xs[i], b.xs[i]);
  return out;
}

Path pointwise_max(const Path& a, const Path& b) {
  require_same_span(a, b);
  Path out{a.m, a.xs};
  for (std::size_t i = 0; i < out.xs.size(); ++i) out.xs[i] = std::max(a.xs[i], b.xs[i]);
  return out;
}

}  // namespace perco
