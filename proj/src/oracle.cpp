#include "perco/oracle.hpp"

#include "perco/error.hpp"
#include "perco/maxflow.hpp"

#include <algorithm>
#include <functional>
#include <numeric>
#include <tuple>

namespace perco {

std::string_view to_string(Side s) { return s == Side::Left ? "left" : "right"; }

Side parse_side(std::string_view name) {
  if (name == "left") return Side::Left;
  if (name == "right") return Side::Right;
  throw Error(ErrorCode::InvalidModel, "side must be left or right, got '" + std::string(name) + "'");
}

std::string describe(const std::vector<Site>& sites) {
  std::string out = "{";
  for (std::size_t i = 0; i < sites.size(); ++i) out += (i ? "," : "") + to_string(sites[i]);
  return out + "}";
}

std::string describe(const BoundaryPath& p) {
  if (p.kind() == BoundaryPath::Kind::NegInf) return "-inf";
  if (p.kind() == BoundaryPath::Kind::PosInf) return "+inf";
  std::string out = "[";
  for (std::size_t i = 0; i < p.path().xs.size(); ++i) out += (i ? "," : "") + std::to_string(p.path().xs[i]);
  return out + "]";
}

bool PathDistribution::exact() const noexcept {
  return std::all_of(entries.begin(), entries.end(), [](const PathWeight& w) { return w.exact.has_value(); });
}

double PathDistribution::prob(const Path& p) const {
  for (const PathWeight& w : entries) {
    if (w.path == p) return w.p;
  }
  return 0.0;
}

std::optional<Rational> PathDistribution::exact_prob(const Path& p) const {
  for (const PathWeight& w : entries) {
    if (w.path == p) return w.exact;
  }
  return exact() ? std::optional<Rational>(Rational(0)) : std::nullopt;
}

PathDistribution PathDistribution::point_mass(std::vector<Site> a, std::vector<Site> b, Region region, Path p) {
  return PathDistribution{std::move(a), std::move(b), std::move(region), {PathWeight{std::move(p), 1.0, Rational(1)}}};
}

namespace {

bool use_exact(const PercolationModel& model, Arithmetic arithmetic) {
  switch (arithmetic) {
    case Arithmetic::Float:
      return false;
    case Arithmetic::Exact:
      if (!model.exact()) throw Error(ErrorCode::InvalidModel, "exact arithmetic needs rational probabilities");
      return true;
    case Arithmetic::Auto:
      break;
  }
  return model.exact();
}

constexpr std::uint64_t kMaxListedPaths = std::uint64_t{1} << 22;

}  // namespace

std::vector<PathDistribution> extreme_distributions(const PercolationModel& model,
                                                    std::span<const ExtremeQuery> queries,
                                                    const OracleOptions& options) {
  if (queries.empty()) return {};
  const bool exact = use_exact(model, options.arithmetic);
  const Lattice& lattice = model.lattice();
  std::vector<Support> supports;
  for (const ExtremeQuery& q : queries) {
    Support s = path_support(lattice, q.region, q.a, q.b);
    if (s.empty()) throw Error(ErrorCode::NoPath, "no path from " + describe(q.a) + " to " + describe(q.b) + " in the region");
    supports.push_back(std::move(s));
    if (q.condition) {
      for (Support& extra : event_supports(lattice, *q.condition)) supports.push_back(std::move(extra));
    }
  }
  const Universe universe(lattice, supports);
  const std::vector<Factor> factors = factors_for(model, universe);
  const WeightTables tables = make_weight_tables(factors, universe.size(), exact, options.cap);

  std::vector<SupportGraph> graphs;
  std::vector<std::optional<CompiledEvent>> conditions;
  std::vector<int> sizes;
  for (const ExtremeQuery& q : queries) {
    graphs.emplace_back(universe, q.region, q.a, q.b);
    if (graphs.back().path_count() > kMaxListedPaths) throw Error(ErrorCode::SupportTooLarge, "too many paths");
    sizes.push_back(static_cast<int>(graphs.back().path_count()));
    if (q.condition) {
      conditions.emplace_back(std::in_place, *q.condition, universe);
    } else {
      conditions.emplace_back();
    }
  }

  const Tally t = tally(tables, sizes, [&] {
    return [&](std::uint64_t config, int* out) {
      const std::span<const std::uint64_t> words(&config, 1);
      for (std::size_t i = 0; i < queries.size(); ++i) {
        if (conditions[i] && !conditions[i]->holds(words)) {
          out[i] = -1;
          continue;
        }
        out[i] = static_cast<int>(queries[i].side == Side::Left ? graphs[i].leftmost_rank(words)
                                                                : graphs[i].rightmost_rank(words));
      }
    };
  }, options.threads);

  std::vector<PathDistribution> out;
  for (std::size_t i = 0; i < queries.size(); ++i) {
    const ExtremeQuery& q = queries[i];
    PathDistribution d{q.a, q.b, q.region, {}};
    const std::vector<Path> paths = graphs[i].paths(kMaxListedPaths);
    const auto& mass = t.mass[i];
    if (exact) {
      BigInt z = 0;
      for (std::size_t v = 1; v < mass.size(); ++v) z += t.numerators[i][v];
      if (z == 0) throw Error(ErrorCode::ZeroProbabilityCondition, "conditioning event has probability zero");
      for (std::size_t v = 1; v < mass.size(); ++v) {
        if (t.numerators[i][v] == 0) continue;
        Rational w(t.numerators[i][v], z);
        d.entries.push_back(PathWeight{paths[v - 1], to_double(w), w});
      }
    } else {
      const double z = std::accumulate(mass.begin() + 1, mass.end(), 0.0);
      if (!(z > 0.0)) throw Error(ErrorCode::ZeroProbabilityCondition, "conditioning event has probability zero");
      for (std::size_t v = 1; v < mass.size(); ++v) {
        if (mass[v] == 0.0) continue;
        d.entries.push_back(PathWeight{paths[v - 1], mass[v] / z, std::nullopt});
      }
    }
    out.push_back(std::move(d));
  }
  return out;
}

PathDistribution exact_extreme_distribution(const PercolationModel& model, const ExtremeQuery& query,
                                            const OracleOptions& options) {
  return std::move(extreme_distributions(model, std::span(&query, 1), options).front());
}

namespace {

void require_compatible(const PathDistribution& mu, const PathDistribution& nu) {
  if (mu.region.first_level() != nu.region.first_level() || mu.region.last_level() != nu.region.last_level()) {
    throw Error(ErrorCode::IncompatibleBases, "path laws live on different level spans");
  }
}

std::vector<Path> union_paths(const PathDistribution& mu, const PathDistribution& nu) {
  std::vector<Path> all;
  for (const auto& w : mu.entries) all.push_back(w.path);
  for (const auto& w : nu.entries) all.push_back(w.path);
  std::sort(all.begin(), all.end());
  all.erase(std::unique(all.begin(), all.end()), all.end());
  return all;
}

BigInt common_denominator(const PathDistribution& mu, const PathDistribution& nu) {
  BigInt l = 1;
  for (const auto* d : {&mu, &nu}) {
    for (const auto& w : d->entries) l = boost::multiprecision::lcm(l, boost::multiprecision::denominator(*w.exact));
  }
  return l;
}

BigInt scaled(const Rational& q, const BigInt& l) {
  return boost::multiprecision::numerator(q) * (l / boost::multiprecision::denominator(q));
}

template <class Cap>
void run_flow(const PathDistribution& mu, const PathDistribution& nu, const std::vector<Cap>& cap1,
              const std::vector<Cap>& cap2, const Cap& total, const Cap& eps, DominanceResult& r,
              const std::function<bool(const Cap&)>& full, const std::function<double(const Cap&)>& as_double,
              const std::function<std::optional<Rational>(const Cap&)>& as_exact) {
  const int n1 = static_cast<int>(mu.entries.size());
  const int n2 = static_cast<int>(nu.entries.size());
  const int sink = n1 + n2 + 1;
  MaxFlow<Cap> flow(n1 + n2 + 2, eps);
  for (int i = 0; i < n1; ++i) flow.add_arc(0, 1 + i, cap1[static_cast<std::size_t>(i)]);
  for (int j = 0; j < n2; ++j) flow.add_arc(1 + n1 + j, sink, cap2[static_cast<std::size_t>(j)]);
  std::vector<std::tuple<int, int, int>> middle;
  for (int i = 0; i < n1; ++i) {
    for (int j = 0; j < n2; ++j) {
      if (path_leq(mu.entries[static_cast<std::size_t>(i)].path, nu.entries[static_cast<std::size_t>(j)].path)) {
        middle.emplace_back(i, j, flow.add_arc(1 + i, 1 + n1 + j, total));
      }
    }
  }
  const Cap value = flow.solve(0, sink);
  r.flow = as_double(value);
  r.holds = full(value);
  if (r.holds) {
    for (const auto& [i, j, id] : middle) {
      if (!(flow.flow(id) > eps)) continue;
      r.coupling.push_back(CouplingEntry{mu.entries[static_cast<std::size_t>(i)].path,
                                         nu.entries[static_cast<std::size_t>(j)].path, as_double(flow.flow(id)),
                                         as_exact(flow.flow(id))});
    }
    return;
  }
  const std::vector<bool> side = flow.source_side(0);
  std::vector<const Path*> seeds;
  for (int i = 0; i < n1; ++i) {
    if (side[static_cast<std::size_t>(1 + i)]) seeds.push_back(&mu.entries[static_cast<std::size_t>(i)].path);
  }
  for (const Path& p : union_paths(mu, nu)) {
    if (std::any_of(seeds.begin(), seeds.end(), [&](const Path* s) { return path_leq(*s, p); })) {
      r.violating_up_set.push_back(p);
      r.up_mu += mu.prob(p);
      r.up_nu += nu.prob(p);
    }
  }
}

}  // namespace

DominanceResult stochastic_leq(const PathDistribution& mu, const PathDistribution& nu) {
  require_compatible(mu, nu);
  DominanceResult r;
  r.exact = mu.exact() && nu.exact();
  if (r.exact) {
    const BigInt l = common_denominator(mu, nu);
    std::vector<BigInt> cap1, cap2;
    for (const auto& w : mu.entries) cap1.push_back(scaled(*w.exact, l));
    for (const auto& w : nu.entries) cap2.push_back(scaled(*w.exact, l));
    run_flow<BigInt>(
        mu, nu, cap1, cap2, l, BigInt(0), r, [&](const BigInt& v) { return v == l; },
        [&](const BigInt& v) { return to_double(Rational(v, l)); },
        [&](const BigInt& v) { return std::optional<Rational>(Rational(v, l)); });
  } else {
    std::vector<double> cap1, cap2;
    for (const auto& w : mu.entries) cap1.push_back(w.p);
    for (const auto& w : nu.entries) cap2.push_back(w.p);
    run_flow<double>(
        mu, nu, cap1, cap2, 2.0, 1e-15, r, [](double v) { return v >= 1.0 - kFlowTolerance; },
        [](double v) { return v; }, [](double) { return std::optional<Rational>(); });
  }
  return r;
}

bool upset_dominance(const PathDistribution& mu, const PathDistribution& nu, int max_paths) {
  require_compatible(mu, nu);
  std::vector<Path> all = union_paths(mu, nu);
  const int n = static_cast<int>(all.size());
  if (n > max_paths || n > 63) throw Error(ErrorCode::SupportTooLarge, "too many paths for up-set enumeration");
  auto sum = [](const Path& p) { return std::accumulate(p.xs.begin(), p.xs.end(), 0L); };
  // Strictly larger paths have a strictly larger coordinate sum, so this
  // order visits every path after all paths above it.
  std::stable_sort(all.begin(), all.end(), [&](const Path& x, const Path& y) { return sum(x) > sum(y); });
  std::vector<std::uint64_t> above(static_cast<std::size_t>(n), 0);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if (i != j && path_leq(all[static_cast<std::size_t>(i)], all[static_cast<std::size_t>(j)])) {
        above[static_cast<std::size_t>(i)] |= std::uint64_t{1} << j;
      }
    }
  }
  const bool exact = mu.exact() && nu.exact();
  std::vector<BigInt> diff_exact;
  std::vector<double> diff;
  if (exact) {
    const BigInt l = common_denominator(mu, nu);
    for (const Path& p : all) diff_exact.push_back(scaled(*mu.exact_prob(p), l) - scaled(*nu.exact_prob(p), l));
  } else {
    for (const Path& p : all) diff.push_back(mu.prob(p) - nu.prob(p));
  }
  bool ok = true;
  auto visit = [&](auto&& self, int k, std::uint64_t chosen, const BigInt& de, double d) -> void {
    if (!ok) return;
    if (k == n) {
      if (exact ? de > 0 : d > kFlowTolerance) ok = false;
      return;
    }
    self(self, k + 1, chosen, de, d);
    if ((above[static_cast<std::size_t>(k)] & ~chosen) == 0) {
      const std::size_t kk = static_cast<std::size_t>(k);
      self(self, k + 1, chosen | (std::uint64_t{1} << k), exact ? BigInt(de + diff_exact[kk]) : de,
           exact ? 0.0 : d + diff[kk]);
    }
  };
  visit(visit, 0, 0, BigInt(0), 0.0);
  return ok;
}

bool ClaimReport::all_hold() const noexcept {
  return std::all_of(records.begin(), records.end(), [](const ClaimRecord& r) { return r.holds; });
}

int ClaimReport::applicable_count() const noexcept {
  return static_cast<int>(std::count_if(records.begin(), records.end(), [](const ClaimRecord& r) { return r.applicable; }));
}

namespace {

ClaimRecord compare(std::string claim, std::string lhs, std::string rhs, const PathDistribution* lower,
                    const PathDistribution* upper) {
  ClaimRecord r{std::move(claim), std::move(lhs), std::move(rhs), lower && upper, true, {}};
  if (r.applicable) {
    r.detail = stochastic_leq(*lower, *upper);
    r.holds = r.detail.holds;
  }
  return r;
}

struct Slab {
  int m;
  int n;
};

Slab slab_of(const Lattice& lattice, const std::vector<Site>& a, const std::vector<Site>& b) {
  for (const Site& s : a) lattice.require_valid(s, "A");
  for (const Site& s : b) lattice.require_valid(s, "B");
  const Slab s{common_level(a, "A"), common_level(b, "B")};
  if (s.n <= s.m) throw Error(ErrorCode::LevelMismatch, "B must lie on a higher level than A");
  return s;
}

bool has_path(const Lattice& lattice, const Region& region, const std::vector<Site>& a, const std::vector<Site>& b) {
  return !path_support(lattice, region, a, b).empty();
}

/// Computes left and right laws for each base; nullptr entries for bases
/// without paths.
struct LawPair {
  const PathDistribution* left = nullptr;
  const PathDistribution* right = nullptr;
};

struct Laws {
  std::vector<PathDistribution> store;
  std::vector<LawPair> pairs;
};

Laws laws_for(const PercolationModel& model, const std::vector<ExtremeQuery>& bases,
              const std::vector<bool>& present, const OracleOptions& options) {
  std::vector<ExtremeQuery> queries;
  for (std::size_t i = 0; i < bases.size(); ++i) {
    if (!present[i]) continue;
    for (Side s : {Side::Left, Side::Right}) {
      ExtremeQuery q = bases[i];
      q.side = s;
      queries.push_back(std::move(q));
    }
  }
  Laws laws;
  laws.store = extreme_distributions(model, queries, options);
  std::size_t k = 0;
  for (std::size_t i = 0; i < bases.size(); ++i) {
    LawPair p;
    if (present[i]) {
      p.left = &laws.store[k++];
      p.right = &laws.store[k++];
    }
    laws.pairs.push_back(p);
  }
  return laws;
}

}  // namespace

ClaimReport verify_theorem1(const PercolationModel& model, const std::vector<Site>& a, const std::vector<Site>& b,
                            const std::vector<Site>& g, const OracleOptions& options) {
  const Lattice& lattice = model.lattice();
  const Slab s = slab_of(lattice, a, b);
  for (const Site& p : g) lattice.require_valid(p, "G");
  const std::vector<ExtremeQuery> bases{
      ExtremeQuery{a, b, Region::whole(s.m, s.n), Side::Left, std::nullopt},
      ExtremeQuery{a, b, strictly_left_region(g, s.m, s.n), Side::Left, std::nullopt},
      ExtremeQuery{a, b, strictly_right_region(g, s.m, s.n), Side::Left, std::nullopt},
  };
  std::vector<bool> present;
  for (const auto& q : bases) present.push_back(has_path(lattice, q.region, a, b));
  if (!present[0]) throw Error(ErrorCode::NoPath, "no path from " + describe(a) + " to " + describe(b));
  const Laws laws = laws_for(model, bases, present, options);
  const LawPair& whole = laws.pairs[0];
  const LawPair& left = laws.pairs[1];
  const LawPair& right = laws.pairs[2];

  ClaimReport report{"theorem1", {}};
  report.records.push_back(compare("mu_l(G) <= mu", "mu_l(G)", "mu", left.left, whole.left));
  report.records.push_back(compare("nu_l(G) <= nu", "nu_l(G)", "nu", left.right, whole.right));
  report.records.push_back(compare("mu_r(G) >= mu", "mu", "mu_r(G)", whole.left, right.left));
  report.records.push_back(compare("nu_r(G) >= nu", "nu", "nu_r(G)", whole.right, right.right));
  return report;
}

ClaimReport verify_proposition31(const PercolationModel& model, const BoundaryPath& tau1, const BoundaryPath& tau2,
                                 const BoundaryPath& tau3, const std::vector<Site>& a, const std::vector<Site>& b,
                                 const OracleOptions& options) {
  const Lattice& lattice = model.lattice();
  const Slab s = slab_of(lattice, a, b);
  for (const BoundaryPath* t : {&tau1, &tau2, &tau3}) {
    if (t->finite() && !lattice.valid_path(t->path())) throw Error(ErrorCode::InvalidSite, "tau is not a lattice path");
  }
  if (!path_leq(tau1, tau3) || !path_leq(tau3, tau2)) {
    throw Error(ErrorCode::NotStrictlyOrdered, "need tau1 <= tau3 <= tau2");
  }
  const Region outer = band(tau1, tau2, s.m, s.n);
  std::vector<ExtremeQuery> bases{ExtremeQuery{a, b, outer, Side::Left, std::nullopt}};
  std::vector<bool> present{has_path(lattice, outer, a, b)};
  if (!present[0]) throw Error(ErrorCode::NoPath, "no path from " + describe(a) + " to " + describe(b) + " in b(tau1,tau2)");
  // A band between equal boundaries is empty: the comparison has no content.
  for (const auto& [lo, hi] : {std::pair{&tau3, &tau2}, std::pair{&tau1, &tau3}}) {
    if (path_leq(*lo, *hi, true)) {
      Region r = band(*lo, *hi, s.m, s.n);
      present.push_back(has_path(lattice, r, a, b));
      bases.push_back(ExtremeQuery{a, b, std::move(r), Side::Left, std::nullopt});
    } else {
      present.push_back(false);
      bases.push_back(bases.front());
    }
  }
  const Laws laws = laws_for(model, bases, present, options);
  const LawPair& o = laws.pairs[0];
  const LawPair& r32 = laws.pairs[1];
  const LawPair& r13 = laws.pairs[2];

  ClaimReport report{"prop31", {}};
  report.records.push_back(compare("mu_b(t1,t2) <= mu_b(t3,t2)", "mu_b(t1,t2)", "mu_b(t3,t2)", o.left, r32.left));
  report.records.push_back(compare("nu_b(t1,t2) <= nu_b(t3,t2)", "nu_b(t1,t2)", "nu_b(t3,t2)", o.right, r32.right));
  report.records.push_back(compare("mu_b(t1,t3) <= mu_b(t1,t2)", "mu_b(t1,t3)", "mu_b(t1,t2)", r13.left, o.left));
  report.records.push_back(compare("nu_b(t1,t3) <= nu_b(t1,t2)", "nu_b(t1,t3)", "nu_b(t1,t2)", r13.right, o.right));
  return report;
}

ClaimReport verify_corollary2(const PercolationModel& model, const std::vector<Site>& a, const std::vector<Site>& b,
                              Site extra, End end, const OracleOptions& options) {
  const Lattice& lattice = model.lattice();
  const Slab s = slab_of(lattice, a, b);
  lattice.require_valid(extra, end == End::Start ? "a" : "b");
  const std::vector<Site>& set = end == End::Start ? a : b;
  if (extra.y != set.front().y) throw Error(ErrorCode::LevelMismatch, "the added point must share the level of its set");
  const auto [lo, hi] = std::minmax_element(set.begin(), set.end(), [](Site x, Site y) { return x.x < y.x; });
  const bool to_right = extra.x > hi->x;
  if (!to_right && extra.x >= lo->x) {
    throw Error(ErrorCode::NotStrictlySeparated, to_string(extra) + " is neither strictly left nor strictly right of " +
                                                     describe(set));
  }
  std::vector<Site> grown = set;
  grown.push_back(extra);
  std::sort(grown.begin(), grown.end());
  const Region whole = Region::whole(s.m, s.n);
  const std::vector<ExtremeQuery> bases{
      ExtremeQuery{a, b, whole, Side::Left, std::nullopt},
      end == End::Start ? ExtremeQuery{grown, b, whole, Side::Left, std::nullopt}
                        : ExtremeQuery{a, grown, whole, Side::Left, std::nullopt},
  };
  if (!has_path(lattice, whole, a, b)) throw Error(ErrorCode::NoPath, "no path from " + describe(a) + " to " + describe(b));
  const Laws laws = laws_for(model, bases, {true, true}, options);
  const LawPair& base = laws.pairs[0];
  const LawPair& more = laws.pairs[1];
  const std::string grown_name = end == End::Start ? "(A+a,B)" : "(A,B+b)";
  const std::string op = to_right ? " >= " : " <= ";

  ClaimReport report{"corollary2", {}};
  for (const auto& [name, x, y] : {std::tuple{std::string("mu"), base.left, more.left},
                                   std::tuple{std::string("nu"), base.right, more.right}}) {
    const std::string claim = name + grown_name + op + name + "(A,B)";
    if (to_right) {
      report.records.push_back(compare(claim, name + "(A,B)", name + grown_name, x, y));
    } else {
      report.records.push_back(compare(claim, name + grown_name, name + "(A,B)", y, x));
    }
  }
  return report;
}

}  // namespace perco
