#include "perco/inequalities.hpp"

#include "perco/enumerate.hpp"
#include "perco/error.hpp"
#include "perco/rng.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <set>
#include <thread>

namespace perco {

std::string_view to_string(Method m) {
  switch (m) {
    case Method::Auto:
      return "auto";
    case Method::Exact:
      return "exact";
    case Method::MonteCarlo:
      return "mc";
  }
  return "?";
}

std::pair<double, double> wilson_interval(std::int64_t k, std::int64_t n, double z) {
  if (n <= 0) return {0.0, 1.0};
  const double nn = static_cast<double>(n);
  const double p = static_cast<double>(k) / nn;
  const double z2 = z * z;
  const double centre = (p + z2 / (2 * nn)) / (1 + z2 / nn);
  const double half = z / (1 + z2 / nn) * std::sqrt(p * (1 - p) / nn + z2 / (4 * nn * nn));
  return {std::max(0.0, centre - half), std::min(1.0, centre + half)};
}

namespace {

bool exact_arithmetic(const PercolationModel& model, Arithmetic a) {
  if (a == Arithmetic::Float) return false;
  if (a == Arithmetic::Exact && !model.exact()) {
    throw Error(ErrorCode::InvalidModel, "exact arithmetic needs rational probabilities");
  }
  return model.exact();
}

}  // namespace

TruthTable::TruthTable(const PercolationModel& model, std::vector<ConnectionEvent> atoms, const EventOptions& options)
    : atoms_(atoms.size()) {
  if (atoms.size() > 20) throw Error(ErrorCode::SupportTooLarge, "at most 20 events per truth table");
  const Lattice& lattice = model.lattice();
  std::vector<Support> supports;
  for (const ConnectionEvent& e : atoms) {
    Support s = path_support(lattice, e.region, e.a, e.b);
    if (!s.empty()) supports.push_back(std::move(s));
  }
  const Universe universe(lattice, supports);
  const std::vector<Factor> factors = factors_for(model, universe);
  std::vector<SupportGraph> graphs;
  for (const ConnectionEvent& e : atoms) graphs.emplace_back(universe, e.region, e.a, e.b);
  auto truth = [&](std::span<const std::uint64_t> words) {
    std::uint64_t t = 0;
    for (std::size_t i = 0; i < graphs.size(); ++i) {
      if (graphs[i].connected(words)) t |= std::uint64_t{1} << i;
    }
    return t;
  };

  method_ = options.method;
  if (method_ == Method::Auto) method_ = universe.size() <= options.cap ? Method::Exact : Method::MonteCarlo;
  const std::size_t outcomes = std::size_t{1} << atoms.size();

  if (method_ == Method::Exact) {
    const bool exact = exact_arithmetic(model, options.arithmetic);
    const WeightTables tables = make_weight_tables(factors, universe.size(), exact, options.cap);
    const Tally t = tally(tables, {static_cast<int>(outcomes)}, [&] {
      return [&](std::uint64_t config, int* out) { out[0] = static_cast<int>(truth(std::span(&config, 1))); };
    }, options.threads);
    mass_.assign(t.mass[0].begin() + 1, t.mass[0].end());
    if (exact) {
      for (std::size_t v = 1; v <= outcomes; ++v) exact_.push_back(t.exact_mass(0, static_cast<int>(v) - 1));
    }
    return;
  }

  samples_ = options.budget;
  if (samples_ <= 0) throw Error(ErrorCode::InvalidModel, "Monte Carlo budget must be positive");
  const std::int64_t chunks = std::min<std::int64_t>(samples_, 256);
  std::vector<std::vector<std::int64_t>> partial(static_cast<std::size_t>(chunks), std::vector<std::int64_t>(outcomes, 0));
  std::atomic<std::int64_t> next{0};
  auto worker = [&] {
    std::vector<std::uint64_t> words;
    for (std::int64_t c = next++; c < chunks; c = next++) {
      auto& counts = partial[static_cast<std::size_t>(c)];
      for (std::int64_t i = samples_ * c / chunks; i < samples_ * (c + 1) / chunks; ++i) {
        StreamRng rng(options.seed, static_cast<std::uint64_t>(i));
        sample_configuration(factors, universe.size(), rng, words);
        ++counts[truth(words)];
      }
    }
  };
  const int n = std::max(1, std::min<int>(options.threads, static_cast<int>(chunks)));
  {
    std::vector<std::jthread> pool;
    for (int t = 1; t < n; ++t) pool.emplace_back(worker);
    worker();
  }
  counts_.assign(outcomes, 0);
  for (const auto& part : partial) {
    for (std::size_t v = 0; v < outcomes; ++v) counts_[v] += part[v];
  }
  for (std::int64_t c : counts_) mass_.push_back(static_cast<double>(c) / static_cast<double>(samples_));
}

namespace {

EstimateReport exact_report(double v, std::optional<Rational> q) {
  EstimateReport r;
  r.value = q ? to_double(*q) : v;
  r.method = Method::Exact;
  r.lo = r.hi = r.value;
  r.exact = std::move(q);
  return r;
}

EstimateReport mc_report(std::int64_t k, std::int64_t n) {
  EstimateReport r;
  r.method = Method::MonteCarlo;
  r.n = n;
  r.value = static_cast<double>(k) / static_cast<double>(n);
  r.stderr_ = std::sqrt(r.value * (1 - r.value) / static_cast<double>(n));
  std::tie(r.lo, r.hi) = wilson_interval(k, n);
  return r;
}

}  // namespace

EstimateReport TruthTable::probability(const Predicate& event) const {
  if (method_ == Method::MonteCarlo) {
    std::int64_t k = 0;
    for (std::size_t v = 0; v < counts_.size(); ++v) {
      if (event(v)) k += counts_[v];
    }
    return mc_report(k, samples_);
  }
  double p = 0.0;
  Rational q = 0;
  for (std::size_t v = 0; v < mass_.size(); ++v) {
    if (!event(v)) continue;
    p += mass_[v];
    if (!exact_.empty()) q += exact_[v];
  }
  return exact_report(p, exact_.empty() ? std::nullopt : std::optional<Rational>(q));
}

EstimateReport TruthTable::conditional(const Predicate& event, const Predicate& given) const {
  if (method_ == Method::MonteCarlo) {
    std::int64_t k = 0;
    std::int64_t n = 0;
    for (std::size_t v = 0; v < counts_.size(); ++v) {
      if (!given(v)) continue;
      n += counts_[v];
      if (event(v)) k += counts_[v];
    }
    if (n == 0) throw Error(ErrorCode::ZeroDenominator, "no sample satisfied the conditioning event");
    return mc_report(k, n);
  }
  double num = 0.0;
  double den = 0.0;
  Rational qn = 0;
  Rational qd = 0;
  for (std::size_t v = 0; v < mass_.size(); ++v) {
    if (!given(v)) continue;
    den += mass_[v];
    if (!exact_.empty()) qd += exact_[v];
    if (event(v)) {
      num += mass_[v];
      if (!exact_.empty()) qn += exact_[v];
    }
  }
  if (exact_.empty() ? !(den > 0.0) : qd == 0) {
    throw Error(ErrorCode::ZeroDenominator, "conditioning event has probability zero");
  }
  return exact_report(num / den, exact_.empty() ? std::nullopt : std::optional<Rational>(qn / qd));
}

bool TruthTable::positive(const Predicate& event) const {
  for (std::size_t v = 0; v < mass_.size(); ++v) {
    if (!event(v)) continue;
    if (!exact_.empty() ? exact_[v] > 0 : mass_[v] > 0.0) return true;
  }
  return false;
}

EstimateReport event_probability(const PercolationModel& model, const Event& event, const EventOptions& options) {
  const TruthTable table(model, event.atoms(), options);
  return table.probability([&](std::uint64_t t) { return event.eval(t); });
}

bool InequalityReport::all_hold() const noexcept {
  return std::all_of(records.begin(), records.end(), [](const InequalityRecord& r) { return r.holds; });
}

namespace {

/// Tolerance for the sign of a gap computed in floating point.
constexpr double kFloatGapTolerance = 1e-12;
constexpr double kSigmaLimit = 3.0;

enum class Dir { Ge, Le };

InequalityRecord make_record(std::string claim, EstimateReport lhs, EstimateReport rhs, Dir dir) {
  InequalityRecord r;
  r.claim = std::move(claim);
  r.gap = dir == Dir::Ge ? rhs.value - lhs.value : lhs.value - rhs.value;
  if (lhs.exact && rhs.exact) r.exact_gap = dir == Dir::Ge ? Rational(*rhs.exact - *lhs.exact) : Rational(*lhs.exact - *rhs.exact);
  const bool mc = lhs.method == Method::MonteCarlo || rhs.method == Method::MonteCarlo;
  r.method = mc ? Method::MonteCarlo : Method::Exact;
  r.n = std::max(lhs.n, rhs.n);
  if (r.exact_gap) {
    r.holds = *r.exact_gap <= 0;
  } else if (mc) {
    const double se = std::sqrt(lhs.stderr_ * lhs.stderr_ + rhs.stderr_ * rhs.stderr_);
    r.holds = r.gap <= kSigmaLimit * se + kFloatGapTolerance;
  } else {
    r.holds = r.gap <= kFloatGapTolerance;
  }
  r.lhs = std::move(lhs);
  r.rhs = std::move(rhs);
  return r;
}

InequalityRecord not_applicable(std::string claim) {
  InequalityRecord r;
  r.claim = std::move(claim);
  r.applicable = false;
  return r;
}

int span_min(const std::vector<Site>& s) {
  return std::min_element(s.begin(), s.end(), [](Site a, Site b) { return a.x < b.x; })->x;
}
int span_max(const std::vector<Site>& s) {
  return std::max_element(s.begin(), s.end(), [](Site a, Site b) { return a.x < b.x; })->x;
}

constexpr std::uint64_t kH1 = 1;
constexpr std::uint64_t kH2 = 2;
constexpr std::uint64_t kH3 = 4;

bool has(std::uint64_t t, std::uint64_t bit) { return (t & bit) != 0; }

struct Geometry {
  int m;
  int n;
};

Geometry check_geometry(const PercolationModel& model, const std::vector<Site>& a, const std::vector<Site>& b1,
                        const std::vector<Site>& b2, const std::vector<Site>& b3) {
  for (const auto* set : {&a, &b1, &b2, &b3}) {
    if (set->empty()) throw Error(ErrorCode::InvalidSite, "site sets must be nonempty");
    for (const Site& s : *set) model.lattice().require_valid(s, "site");
  }
  require_separated(b1, b2, b3);
  const Geometry g{common_level(a, "A"), common_level(b1, "B1")};
  if (g.n <= g.m) throw Error(ErrorCode::LevelMismatch, "targets must lie above A");
  return g;
}

}  // namespace

void require_separated(const std::vector<Site>& b1, const std::vector<Site>& b2, const std::vector<Site>& b3) {
  const int n1 = common_level(b1, "B1");
  if (common_level(b2, "B2") != n1 || common_level(b3, "B3") != n1) {
    throw Error(ErrorCode::LevelMismatch, "B1, B2, B3 must share a level");
  }
  if (!(span_max(b1) < span_min(b2)) || !(span_max(b2) < span_min(b3))) {
    throw Error(ErrorCode::NotStrictlySeparated, "need B1 strictly left of B2 strictly left of B3");
  }
}

InequalityReport verify_lemma61(const PercolationModel& model, const std::vector<Site>& a,
                                const std::vector<Site>& b1, const std::vector<Site>& b2,
                                const std::vector<Site>& b3, const EventOptions& options) {
  const Geometry geo = check_geometry(model, a, b1, b2, b3);
  const TruthTable table(model,
                         {ConnectionEvent::between(a, b1), ConnectionEvent::between(a, b2), ConnectionEvent::between(a, b3)},
                         options);
  auto h1 = [](std::uint64_t t) { return has(t, kH1); };
  auto h2 = [](std::uint64_t t) { return has(t, kH2); };
  auto h3 = [](std::uint64_t t) { return has(t, kH3); };
  auto h2_not3 = [](std::uint64_t t) { return has(t, kH2) && !has(t, kH3); };
  auto h2_and3 = [](std::uint64_t t) { return has(t, kH2) && has(t, kH3); };
  if (!table.positive(h2) || !table.positive(h3)) {
    throw Error(ErrorCode::ZeroDenominator, "H2 and H3 must have positive probability");
  }

  InequalityReport report{"lemma61", {}};
  const EstimateReport given2 = table.conditional(h1, h2);
  const std::string c1 = "P(H1|H2,not H3) >= P(H1|H2)";
  report.records.push_back(table.positive(h2_not3) ? make_record(c1, table.conditional(h1, h2_not3), given2, Dir::Ge)
                                                   : not_applicable(c1));
  const std::string c2 = "P(H1|H2) >= P(H1|H2,H3)";
  report.records.push_back(table.positive(h2_and3) ? make_record(c2, given2, table.conditional(h1, h2_and3), Dir::Ge)
                                                   : not_applicable(c2));
  report.records.push_back(make_record("P(H1|H2) >= P(H1|H3)", given2, table.conditional(h1, h3), Dir::Ge));

  if (a.size() != 1) return report;
  // Every start point on level m from which B2 can be reached.
  const Lattice& lattice = model.lattice();
  const int len = geo.n - geo.m;
  std::set<int> xs;
  for (const Site& b : b2) {
    for (int x = b.x - lattice.max_step() * len; x <= b.x - lattice.min_step() * len; ++x) {
      if (lattice.valid(Site{x, geo.m})) xs.insert(x);
    }
  }
  std::vector<std::pair<int, EstimateReport>> values;
  for (int x : xs) {
    const std::vector<Site> start{Site{x, geo.m}};
    const TruthTable t(model, {ConnectionEvent::between(start, b1), ConnectionEvent::between(start, b2)}, options);
    if (!t.positive(h2)) continue;
    values.emplace_back(x, t.conditional(h1, h2));
  }
  const std::string c4 = "P(H1|H2) nonincreasing in x";
  if (values.size() < 2) {
    report.records.push_back(not_applicable(c4));
    return report;
  }
  std::optional<InequalityRecord> worst;
  bool all = true;
  for (std::size_t i = 0; i + 1 < values.size(); ++i) {
    InequalityRecord r = make_record(c4, values[i].second, values[i + 1].second, Dir::Ge);
    all = all && r.holds;
    if (!worst || r.gap > worst->gap) worst = std::move(r);
  }
  worst->holds = all;
  report.records.push_back(std::move(*worst));
  return report;
}

InequalityReport verify_corollary62(const PercolationModel& model, const std::vector<Site>& a,
                                    const std::vector<Site>& b1, const std::vector<Site>& b2,
                                    const std::vector<Site>& b3, const EventOptions& options) {
  check_geometry(model, a, b1, b2, b3);
  const TruthTable table(model,
                         {ConnectionEvent::between(a, b1), ConnectionEvent::between(a, b2), ConnectionEvent::between(a, b3)},
                         options);
  auto h2 = [](std::uint64_t t) { return has(t, kH2); };
  if (!table.positive(h2)) throw Error(ErrorCode::ZeroDenominator, "H2 must have positive probability");
  const EstimateReport both = table.conditional([](std::uint64_t t) { return has(t, kH1) && has(t, kH3); }, h2);
  const EstimateReport p1 = table.conditional([](std::uint64_t t) { return has(t, kH1); }, h2);
  const EstimateReport p3 = table.conditional([](std::uint64_t t) { return has(t, kH3); }, h2);
  EstimateReport product;
  product.method = both.method;
  product.value = p1.value * p3.value;
  product.n = p1.n;
  product.stderr_ = std::sqrt(std::pow(p3.value * p1.stderr_, 2) + std::pow(p1.value * p3.stderr_, 2));
  product.lo = product.hi = product.value;
  if (p1.exact && p3.exact) product.exact = *p1.exact * *p3.exact;
  InequalityReport report{"corollary62", {}};
  report.records.push_back(make_record("P(H1,H3|H2) <= P(H1|H2) P(H3|H2)", both, product, Dir::Le));
  return report;
}

Corollary63Report verify_corollary63(const PercolationModel& model, int n, const EventOptions& options) {
  if (model.lattice().openness() != Openness::Bonds) {
    throw Error(ErrorCode::UnsupportedModel, "the |x-y| monotonicity uses the left-right symmetry of the bond lattice");
  }
  if (!model.translation_invariant()) {
    throw Error(ErrorCode::NonTranslationInvariantModel, "needs a single shared, left-right symmetric law");
  }
  if (n < 1) throw Error(ErrorCode::LevelMismatch, "n must be positive");
  Corollary63Report report;
  report.n = n;
  report.checks.name = "corollary63";
  const std::vector<Site> origin{Site{0, 0}};
  std::vector<int> ys;
  for (int y = n % 2; y <= n + 2; y += 2) ys.push_back(y);

  Method method = options.method;
  if (method == Method::Auto) method = n <= kCorollary63ExactLevels ? Method::Exact : Method::MonteCarlo;
  if (method == Method::Exact) {
    EventOptions per = options;
    per.method = Method::Exact;
    for (int y : ys) {
      const TruthTable t(model, {ConnectionEvent::between(origin, {Site{y, n}})}, per);
      report.rows.push_back({y, t.probability([](std::uint64_t v) { return v == 1; })});
    }
  } else {
    std::vector<ConnectionEvent> atoms;
    for (int y : ys) atoms.push_back(ConnectionEvent::between(origin, {Site{y, n}}));
    EventOptions mc = options;
    mc.method = Method::MonteCarlo;
    const TruthTable t(model, atoms, mc);
    for (std::size_t i = 0; i < ys.size(); ++i) {
      report.rows.push_back({ys[i], t.probability([i](std::uint64_t v) { return ((v >> i) & 1U) != 0; })});
    }
  }
  for (std::size_t i = 0; i + 1 < report.rows.size(); ++i) {
    const int y = report.rows[i].y;
    report.checks.records.push_back(make_record("P(0->(" + std::to_string(y) + "," + std::to_string(n) + ")) >= P(0->(" +
                                                    std::to_string(y + 2) + "," + std::to_string(n) + "))",
                                                report.rows[i].estimate, report.rows[i + 1].estimate, Dir::Ge));
  }
  return report;
}

}  // namespace perco
