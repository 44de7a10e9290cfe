#include "perco/chain.hpp"

#include "perco/error.hpp"
#include "perco/rng.hpp"

#include <array>
#include <bit>
#include <cmath>
#include <limits>
#include <ostream>
#include <unordered_map>

namespace perco {

Laterality laterality(const Universe& universe, int unit, const Path& gamma) {
  if (universe.openness() == Openness::Sites) {
    const Site s = universe.sites()[static_cast<std::size_t>(unit)];
    const int g = gamma.at(s.y);
    return s.x == g ? Laterality::On : (s.x < g ? Laterality::Left : Laterality::Right);
  }
  const Edge e = universe.edges()[static_cast<std::size_t>(unit)];
  const int g0 = gamma.at(e.from.y);
  const int g1 = gamma.at(e.from.y + 1);
  const int x0 = e.from.x;
  const int x1 = e.from.x + e.step;
  if (x0 == g0 && x1 == g1) return Laterality::On;
  if (x0 <= g0 && x1 <= g1) return Laterality::Left;
  return Laterality::Right;
}

bool keyed_open(std::uint64_t seed, std::uint64_t step, int half, std::uint64_t unit_key, double p) noexcept {
  return keyed_uniform(seed, step, static_cast<std::uint64_t>(half), unit_key) < p;
}

namespace {

void set_bit(std::vector<std::uint64_t>& words, int unit, bool value) {
  const std::uint64_t bit = std::uint64_t{1} << (unit & 63);
  auto& w = words[static_cast<std::size_t>(unit) >> 6];
  w = value ? (w | bit) : (w & ~bit);
}

std::size_t word_count(const Universe& u) { return std::max<std::size_t>(1, (static_cast<std::size_t>(u.size()) + 63) / 64); }

}  // namespace

BhkChain::BhkChain(const PercolationModel& model, std::shared_ptr<const Universe> universe, std::vector<Site> a,
                   std::vector<Site> b, Region region)
    : universe_(std::move(universe)), graph_(*universe_, region, a, b) {
  if (!model.within_pair_independent()) {
    throw Error(ErrorCode::UnsupportedModel, "the resampling chain needs independent bonds within each pair");
  }
  if (!graph_.has_paths()) throw Error(ErrorCode::NoPath, "no A -> B path in the region");
  if (universe_->openness() == Openness::Sites) {
    for (const Site& s : graph_.support().sites) own_.push_back(universe_->index_of(s));
    for (const Site& s : universe_->sites()) probs_.push_back(model.site_prob(s));
  } else {
    for (const Edge& e : graph_.support().edges) own_.push_back(universe_->index_of(e));
    for (const Edge& e : universe_->edges()) probs_.push_back(model.edge_prob(e));
  }
}

BhkChain BhkChain::on_support(const PercolationModel& model, std::vector<Site> a, std::vector<Site> b, Region region) {
  const Support s = path_support(model.lattice(), region, a, b);
  if (s.empty()) throw Error(ErrorCode::NoPath, "no A -> B path in the region");
  const Support supports[] = {s};
  auto universe = std::make_shared<const Universe>(model.lattice(), supports);
  return BhkChain(model, std::move(universe), std::move(a), std::move(b), std::move(region));
}

std::vector<int> BhkChain::resampled(std::span<const std::uint64_t> words, int half) const {
  const std::optional<Path> gamma = half == 1 ? graph_.leftmost(words) : graph_.rightmost(words);
  if (!gamma) throw Error(ErrorCode::NoPath, "chain state is outside T");
  const Laterality moving = half == 1 ? Laterality::Right : Laterality::Left;
  std::vector<int> out;
  for (int u : own_) {
    if (laterality(*universe_, u, *gamma) == moving) out.push_back(u);
  }
  return out;
}

void BhkChain::half_step(std::vector<std::uint64_t>& words, int half, const std::function<bool(int)>& open) const {
  for (int u : resampled(words, half)) set_bit(words, u, open(u));
}

void BhkChain::step(std::vector<std::uint64_t>& words, std::uint64_t seed, std::uint64_t step_index) const {
  for (int half : {1, 2}) {
    half_step(words, half, [&](int u) {
      return keyed_open(seed, step_index, half, universe_->unit_key(u), probs_[static_cast<std::size_t>(u)].value());
    });
  }
}

std::vector<std::uint64_t> BhkChain::only_path_open(const Path& path) const {
  std::vector<std::uint64_t> words(word_count(*universe_), 0);
  for (int k = path.first_level(); k <= path.last_level(); ++k) {
    int unit = -1;
    if (universe_->openness() == Openness::Sites) {
      unit = universe_->index_of(Site{path.at(k), k});
    } else if (k < path.last_level()) {
      unit = universe_->index_of(Edge{Site{path.at(k), k}, path.at(k + 1) - path.at(k)});
    } else {
      continue;
    }
    if (unit < 0) throw Error(ErrorCode::InvalidSite, "path leaves the chain's universe");
    set_bit(words, unit, true);
  }
  return words;
}

std::vector<std::uint64_t> BhkChain::all_open() const {
  std::vector<std::uint64_t> words(word_count(*universe_), 0);
  for (int u : own_) set_bit(words, u, true);
  return words;
}

ExactKernel::ExactKernel(const BhkChain& chain, int cap) : chain_(&chain), units_(chain.universe()->size()) {
  if (units_ > cap) throw Error(ErrorCode::SupportTooLarge, "exact kernel limited to " + std::to_string(cap) + " units");
  for (std::uint64_t c = 0; c < (std::uint64_t{1} << units_); ++c) {
    if (chain.in_t(std::span(&c, 1))) states_.push_back(c);
  }
}

template <>
double ExactKernel::unit_prob<double>(int unit, bool open) const {
  const double p = chain_->open_probs()[static_cast<std::size_t>(unit)].value();
  return open ? p : 1.0 - p;
}

template <>
Rational ExactKernel::unit_prob<Rational>(int unit, bool open) const {
  const auto& q = chain_->open_probs()[static_cast<std::size_t>(unit)].exact();
  if (!q) throw Error(ErrorCode::InvalidModel, "exact kernel needs rational probabilities");
  return open ? *q : Rational(1 - *q);
}

template <class S>
std::vector<S> ExactKernel::half(const std::vector<S>& v, int half) const {
  std::vector<S> out(v.size(), S(0));
  for (std::uint64_t c : states_) {
    if (v[c] == S(0)) continue;
    std::uint64_t mask = 0;
    for (int u : chain_->resampled(std::span(&c, 1), half)) mask |= std::uint64_t{1} << u;
    const std::uint64_t base = c & ~mask;
    std::uint64_t sub = 0;
    do {
      S w = v[c];
      for (std::uint64_t m = mask; m != 0; m &= m - 1) {
        const int u = std::countr_zero(m);
        w *= unit_prob<S>(u, (sub >> u) & 1U);
      }
      out[base | sub] += w;
      sub = (sub - mask) & mask;
    } while (sub != 0);
  }
  return out;
}

template <class S>
std::vector<S> ExactKernel::apply(const std::vector<S>& v) const {
  return half(half(v, 1), 2);
}

template <class S>
std::vector<S> ExactKernel::conditional_law() const {
  std::vector<S> out(std::size_t{1} << units_, S(0));
  S total(0);
  for (std::uint64_t c : states_) {
    S w(1);
    for (int u = 0; u < units_; ++u) w *= unit_prob<S>(u, (c >> u) & 1U);
    out[c] = w;
    total += w;
  }
  for (std::uint64_t c : states_) out[c] /= total;
  return out;
}

template std::vector<double> ExactKernel::apply(const std::vector<double>&) const;
template std::vector<Rational> ExactKernel::apply(const std::vector<Rational>&) const;
template std::vector<double> ExactKernel::conditional_law() const;
template std::vector<Rational> ExactKernel::conditional_law() const;

std::vector<std::vector<double>> ExactKernel::dense() const {
  std::unordered_map<std::uint64_t, std::size_t> index;
  for (std::size_t i = 0; i < states_.size(); ++i) index[states_[i]] = i;
  std::vector<std::vector<double>> k(states_.size(), std::vector<double>(states_.size(), 0.0));
  std::vector<double> e(std::size_t{1} << units_, 0.0);
  for (std::size_t i = 0; i < states_.size(); ++i) {
    e[states_[i]] = 1.0;
    const std::vector<double> row = apply(e);
    e[states_[i]] = 0.0;
    for (std::size_t c = 0; c < row.size(); ++c) {
      if (row[c] != 0.0) k[i][index.at(c)] = row[c];
    }
  }
  return k;
}

InvarianceReport check_invariance(const ExactKernel& kernel, bool exact) {
  InvarianceReport r;
  r.states = static_cast<int>(kernel.states().size());
  if (exact) {
    const auto pi = kernel.conditional_law<Rational>();
    const auto next = kernel.apply(pi);
    Rational tv = 0;
    for (std::size_t c = 0; c < pi.size(); ++c) tv += abs(next[c] - pi[c]);
    tv /= 2;
    r.exact_residual = tv;
    r.tv_residual = to_double(tv);
  } else {
    const auto pi = kernel.conditional_law<double>();
    const auto next = kernel.apply(pi);
    double tv = 0.0;
    for (std::size_t c = 0; c < pi.size(); ++c) tv += std::abs(next[c] - pi[c]);
    r.tv_residual = tv / 2;
  }
  return r;
}

ConvergenceReport check_convergence(const ExactKernel& kernel, double tol, int max_iterations) {
  const std::size_t n = kernel.states().size();
  if (n > 1024) throw Error(ErrorCode::SupportTooLarge, "convergence check limited to 1024 states");
  const auto k = kernel.dense();
  const auto law = kernel.conditional_law<double>();
  std::vector<double> pi;
  for (std::uint64_t c : kernel.states()) pi.push_back(law[c]);
  ConvergenceReport r;
  r.states = static_cast<int>(n);
  auto m = k;
  auto worst = [&] {
    double w = 0.0;
    for (const auto& row : m) {
      double tv = 0.0;
      for (std::size_t j = 0; j < n; ++j) tv += std::abs(row[j] - pi[j]);
      w = std::max(w, tv / 2);
    }
    return w;
  };
  for (r.iterations = 1; r.iterations <= max_iterations; ++r.iterations) {
    r.max_tv = worst();
    if (r.max_tv < tol) {
      r.converged = true;
      return r;
    }
    std::vector<std::vector<double>> next(n, std::vector<double>(n, 0.0));
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t l = 0; l < n; ++l) {
        const double x = m[i][l];
        if (x == 0.0) continue;
        for (std::size_t j = 0; j < n; ++j) next[i][j] += x * k[l][j];
      }
    }
    m = std::move(next);
  }
  r.iterations = max_iterations;
  return r;
}

void write_dense_csv(const ExactKernel& kernel, std::ostream& out) {
  const auto k = kernel.dense();
  const auto& states = kernel.states();
  out << "from";
  for (std::uint64_t s : states) out << "," << s;
  out << "\n";
  out.precision(17);
  for (std::size_t i = 0; i < states.size(); ++i) {
    out << states[i];
    for (double v : k[i]) out << "," << v;
    out << "\n";
  }
}

namespace {

std::shared_ptr<const Universe> union_universe(const Lattice& lattice, const std::vector<Site>& a,
                                               const std::vector<Site>& b, const Region& r1, const Region& r2) {
  std::vector<Support> supports;
  for (const Region* r : {&r1, &r2}) {
    Support s = path_support(lattice, *r, a, b);
    if (s.empty()) throw Error(ErrorCode::NoPath, "no A -> B path in one of the coupled regions");
    supports.push_back(std::move(s));
  }
  return std::make_shared<const Universe>(lattice, supports);
}

}  // namespace

CoupledChain::CoupledChain(const PercolationModel& model, std::vector<Site> a, std::vector<Site> b, Region upper,
                           Region lower)
    : universe_(union_universe(model.lattice(), a, b, upper, lower)),
      upper_(model, universe_, a, b, std::move(upper)),
      lower_(model, universe_, std::move(a), std::move(b), std::move(lower)) {}

bool CoupledChain::in_x(const State& s) const {
  const auto ul = upper_.graph().leftmost(s.upper);
  const auto ur = upper_.graph().rightmost(s.upper);
  const auto ll = lower_.graph().leftmost(s.lower);
  const auto lr = lower_.graph().rightmost(s.lower);
  return ul && ur && ll && lr && path_leq(*ll, *ul) && path_leq(*lr, *ur);
}

void CoupledChain::half_step(State& s, int half, const std::function<bool(int)>& open) const {
  upper_.half_step(s.upper, half, open);
  lower_.half_step(s.lower, half, open);
}

void CoupledChain::step(State& s, std::uint64_t seed, std::uint64_t step_index) const {
  for (int half : {1, 2}) {
    half_step(s, half, [&](int u) {
      return keyed_open(seed, step_index, half, universe_->unit_key(u),
                        upper_.open_probs()[static_cast<std::size_t>(u)].value());
    });
  }
}

double ChainSeries::z() const noexcept {
  if (!exact) return 0.0;
  const double d = mean - *exact;
  if (stderr_ > 0.0) return d / stderr_;
  return std::abs(d) < 1e-12 ? 0.0 : std::numeric_limits<double>::infinity();
}

namespace {

std::string xs_field(const std::optional<Path>& p) {
  std::string out;
  if (!p) return out;
  for (std::size_t i = 0; i < p->xs.size(); ++i) out += (i ? ";" : "") + std::to_string(p->xs[i]);
  return out;
}

struct BatchStat {
  std::vector<double> batch_sums;
  double total = 0.0;

  void add(std::size_t batch, double v) {
    batch_sums[batch] += v;
    total += v;
  }
};

}  // namespace

ChainEstimateReport chain_theorem1_estimate(const PercolationModel& model, const std::vector<Site>& a,
                                            const std::vector<Site>& b, const std::vector<Site>& g, Side side,
                                            const ChainOptions& options) {
  const int m = common_level(a, "A");
  const int n = common_level(b, "B");
  if (n <= m) throw Error(ErrorCode::LevelMismatch, "B must lie on a higher level than A");
  const Region whole = Region::whole(m, n);
  const Region restricted = side == Side::Left ? strictly_left_region(g, m, n) : strictly_right_region(g, m, n);
  const Region& upper_region = side == Side::Left ? whole : restricted;
  const Region& lower_region = side == Side::Left ? restricted : whole;
  const CoupledChain chain(model, a, b, upper_region, lower_region);

  ChainEstimateReport r;
  r.comparison = side == Side::Left ? "l(G)" : "r(G)";
  r.steps = options.steps;
  const int units = chain.upper().universe()->size();
  r.burn_in = options.burn_in >= 0 ? options.burn_in : 100 * static_cast<std::int64_t>(units);

  // Whole-slab paths generate the up-sets {gamma >= pi}.
  const SupportGraph& whole_graph = side == Side::Left ? chain.upper().graph() : chain.lower().graph();
  std::vector<Path> all = whole_graph.paths();
  std::vector<Path> generators;
  const std::size_t keep = std::min<std::size_t>(all.size(), 64);
  for (std::size_t i = 0; i < keep; ++i) generators.push_back(all[i * all.size() / keep]);
  auto phi = [&](const Path& p) {
    double c = 0;
    for (const Path& q : all) c += path_leq(q, p) ? 1.0 : 0.0;
    return c / static_cast<double>(all.size());
  };

  CoupledChain::State state;
  if (side == Side::Left) {
    state.upper = chain.upper().only_path_open(*chain.upper().graph().rightmost(chain.upper().all_open()));
    state.lower = chain.lower().all_open();
  } else {
    state.upper = chain.upper().all_open();
    state.lower = chain.lower().only_path_open(*chain.lower().graph().leftmost(chain.lower().all_open()));
  }

  const int batches = std::max(2, options.batches);
  const std::int64_t per_batch = std::max<std::int64_t>(1, options.steps / batches);
  std::vector<BatchStat> stats(4, BatchStat{std::vector<double>(static_cast<std::size_t>(batches), 0.0), 0.0});
  std::vector<std::array<double, 4>> upset_counts(generators.size(), {0, 0, 0, 0});
  std::int64_t samples = 0;

  if (options.trajectory) *options.trajectory << "step,upper_left,upper_right,lower_left,lower_right\n";
  const std::int64_t total_steps = r.burn_in + options.steps;
  for (std::int64_t t = 0; t <= total_steps; ++t) {
    if (t > 0) chain.step(state, options.seed, static_cast<std::uint64_t>(t));
    const auto ul = chain.upper().graph().leftmost(state.upper);
    const auto ur = chain.upper().graph().rightmost(state.upper);
    const auto ll = chain.lower().graph().leftmost(state.lower);
    const auto lr = chain.lower().graph().rightmost(state.lower);
    ++r.x_checks;
    const bool ok = ul && ur && ll && lr && path_leq(*ll, *ul) && path_leq(*lr, *ur);
    if (!ok) ++r.x_violations;
    if (options.trajectory) {
      *options.trajectory << t << "," << xs_field(ul) << "," << xs_field(ur) << "," << xs_field(ll) << ","
                          << xs_field(lr) << "\n";
    }
    if (t <= r.burn_in || !ok) continue;
    const std::size_t batch = static_cast<std::size_t>(std::min<std::int64_t>(samples / per_batch, batches - 1));
    const Path* current[4] = {&*ul, &*ur, &*ll, &*lr};
    for (std::size_t s = 0; s < 4; ++s) stats[s].add(batch, phi(*current[s]));
    for (std::size_t i = 0; i < generators.size(); ++i) {
      for (std::size_t s = 0; s < 4; ++s) upset_counts[i][s] += path_leq(generators[i], *current[s]) ? 1.0 : 0.0;
    }
    ++samples;
  }

  std::optional<std::array<double, 4>> exact;
  if (options.exact_reference && units <= 22) {
    const std::vector<ExtremeQuery> queries{
        ExtremeQuery{a, b, upper_region, Side::Left, std::nullopt},
        ExtremeQuery{a, b, upper_region, Side::Right, std::nullopt},
        ExtremeQuery{a, b, lower_region, Side::Left, std::nullopt},
        ExtremeQuery{a, b, lower_region, Side::Right, std::nullopt},
    };
    const auto laws = extreme_distributions(model, queries, OracleOptions{Arithmetic::Float});
    std::array<double, 4> e{};
    for (std::size_t s = 0; s < 4; ++s) {
      for (const PathWeight& w : laws[s].entries) e[s] += w.p * phi(w.path);
    }
    exact = e;
  }

  const char* names[4] = {"gamma_l(upper)", "gamma_r(upper)", "gamma_l(lower)", "gamma_r(lower)"};
  for (std::size_t s = 0; s < 4; ++s) {
    ChainSeries cs;
    cs.name = names[s];
    cs.mean = samples > 0 ? stats[s].total / static_cast<double>(samples) : 0.0;
    double acc = 0.0;
    std::vector<double> means;
    for (int k = 0; k < batches; ++k) {
      const std::int64_t size = k == batches - 1 ? samples - per_batch * (batches - 1) : per_batch;
      if (size > 0) means.push_back(stats[s].batch_sums[static_cast<std::size_t>(k)] / static_cast<double>(size));
    }
    for (double x : means) acc += (x - cs.mean) * (x - cs.mean);
    if (means.size() > 1) cs.stderr_ = std::sqrt(acc / static_cast<double>(means.size() - 1) / static_cast<double>(means.size()));
    if (exact) cs.exact = (*exact)[s];
    r.series.push_back(std::move(cs));
  }

  r.min_diff = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < generators.size(); ++i) {
    for (int which = 0; which < 2; ++which) {
      UpsetDifference d{generators[i], which == 0 ? "left" : "right",
                        upset_counts[i][static_cast<std::size_t>(which)] / static_cast<double>(std::max<std::int64_t>(1, samples)),
                        upset_counts[i][static_cast<std::size_t>(which + 2)] / static_cast<double>(std::max<std::int64_t>(1, samples))};
      r.min_diff = std::min(r.min_diff, d.diff());
      r.upsets.push_back(std::move(d));
    }
  }
  r.holds = r.x_violations == 0 && r.min_diff >= -options.diff_tolerance;
  for (const ChainSeries& s : r.series) {
    if (s.exact && !(std::abs(s.z()) <= options.z_limit)) r.holds = false;
  }
  return r;
}

}  // namespace perco
