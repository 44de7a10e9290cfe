#include "doctest.h"
#include "support/fixtures.hpp"

#include "perco/inequalities.hpp"
#include "perco/pathkit.hpp"

using namespace perco;
using fixtures::error_of;

namespace {

PercolationModel bond(const char* p) { return PercolationModel::independent_bond(Prob::parse(p)); }

ConnectionEvent conn(std::vector<Site> a, std::vector<Site> b) { return ConnectionEvent::between(std::move(a), std::move(b)); }

EventOptions exact_opts() {
  EventOptions o;
  o.method = Method::Exact;
  return o;
}

EventOptions mc_opts(std::int64_t budget, std::uint64_t seed = 1) {
  EventOptions o;
  o.method = Method::MonteCarlo;
  o.budget = budget;
  o.seed = seed;
  return o;
}

/// P(event) by brute force over the union of the atoms' path sets.
Rational brute_probability(const PercolationModel& model, const Event& e) {
  const Lattice& L = model.lattice();
  std::vector<Support> sups;
  for (const auto& atom : e.atoms()) {
    const auto s = path_support(L, atom.region, atom.a, atom.b);
    if (!s.empty()) sups.push_back(s);
  }
  const auto u = fixtures::universe_for(L, sups);
  std::vector<std::vector<Path>> paths;
  for (const auto& atom : e.atoms()) paths.push_back(fixtures::brute_paths(L, atom.a, atom.b, atom.region));
  Rational total = 0;
  for (std::uint64_t bits = 0; bits < (std::uint64_t{1} << u->size()); ++bits) {
    std::uint64_t truth = 0;
    for (std::size_t i = 0; i < paths.size(); ++i) {
      for (const Path& p : paths[i]) {
        if (fixtures::path_open(*u, bits, p)) {
          truth |= std::uint64_t{1} << i;
          break;
        }
      }
    }
    if (e.eval(truth)) total += fixtures::config_probability(model, *u, bits);
  }
  return total;
}

}  // namespace

TEST_CASE("event algebra") {
  const auto x = Event::atom(conn({{0, 0}}, {{0, 2}}));
  const auto y = Event::atom(conn({{0, 0}}, {{2, 2}}));
  const auto e = (x && !y) || Event::always();
  CHECK(e.atoms().size() == 2);
  CHECK(e.eval(0));
  const auto f = x && !y;
  CHECK(f.eval(0b01));
  CHECK_FALSE(f.eval(0b11));
  CHECK_FALSE(f.eval(0b00));
  CHECK((x || y).eval(0b10));
  CHECK(f.describe().find("not(") != std::string::npos);
}

TEST_CASE("connection probability examples") {
  const auto m = bond("0.5");
  const auto r = event_probability(m, Event::atom(conn({{0, 0}}, {{0, 2}})), exact_opts());
  CHECK(r.exact == Rational(7, 16));
  CHECK(r.value == 0.4375);
  CHECK(r.n == 0);
  CHECK(event_probability(m, Event::atom(conn({{0, 0}}, {{2, 2}})), exact_opts()).exact == Rational(1, 4));
  const auto none = event_probability(m, Event::atom(conn({{0, 0}}, {{4, 2}})), exact_opts());
  CHECK(none.value == 0.0);
  CHECK(none.exact == Rational(0));
}

TEST_CASE("event probabilities equal brute force") {
  std::mt19937_64 rng(51);
  const std::vector<PercolationModel> models{
      bond("0.35"), PercolationModel::correlated_pair_bond(PairLaw::from_correlation(Prob::parse("0.6"), 0.5)),
      PercolationModel::range_site(Prob::parse("0.55"), -1, 2)};
  for (const auto& m : models) {
    for (int trial = 0; trial < 15; ++trial) {
      const auto g = fixtures::random_geometry(rng, m.lattice(), 2, 1, 12);
      const auto b2 = fixtures::random_set(rng, m.lattice(), g.n, -3, 3, 2);
      const auto x = Event::atom(conn(g.a, g.b));
      const auto y = Event::atom(conn(g.a, b2));
      for (const Event& e : {x, x && y, x && !y, !x || y}) {
        const auto r = event_probability(m, e, exact_opts());
        REQUIRE(r.exact);
        CHECK(*r.exact == brute_probability(m, e));
      }
    }
  }
}

TEST_CASE("Monte Carlo estimates bracket the exact value") {
  const auto m = bond("0.5");
  const auto e = Event::atom(conn({{0, 0}}, {{0, 4}})) && !Event::atom(conn({{0, 0}}, {{4, 4}}));
  const auto exact = event_probability(m, e, exact_opts());
  const auto mc = event_probability(m, e, mc_opts(200000, 7));
  CHECK(mc.method == Method::MonteCarlo);
  CHECK(mc.n == 200000);
  CHECK(std::abs(mc.value - exact.value) <= 3 * mc.stderr_);
  CHECK(mc.lo <= exact.value);
  CHECK(exact.value <= mc.hi);
  auto one = mc_opts(50000, 3);
  one.threads = 1;
  auto many = mc_opts(50000, 3);
  many.threads = 3;
  CHECK(event_probability(m, e, one).value == event_probability(m, e, many).value);
}

TEST_CASE("wilson interval") {
  const auto [lo, hi] = wilson_interval(50, 100);
  CHECK(lo < 0.5);
  CHECK(hi > 0.5);
  CHECK(hi - lo < 0.3);
  const auto [z0, z1] = wilson_interval(0, 100);
  CHECK(z0 == 0.0);
  CHECK(z1 > 0.0);
}

TEST_CASE("conditional probabilities") {
  const auto m = bond("0.5");
  const TruthTable t(m, {conn({{0, 0}}, {{0, 2}}), conn({{0, 0}}, {{2, 2}}), conn({{0, 0}}, {{6, 2}})}, exact_opts());
  const auto c = t.conditional([](std::uint64_t v) { return (v & 1U) != 0; }, [](std::uint64_t v) { return (v & 2U) != 0; });
  // Given the right pair open, (0,0) -> (0,2) fails only if its last bond and the left pair fail.
  CHECK(c.exact == Rational(1, 2) + Rational(1, 2) * Rational(1, 4));
  CHECK(error_of([&] {
          (void)t.conditional([](std::uint64_t) { return true; }, [](std::uint64_t v) { return (v & 4U) != 0; });
        }) == ErrorCode::ZeroDenominator);
  CHECK_FALSE(t.positive([](std::uint64_t v) { return (v & 4U) != 0; }));
}

TEST_CASE("lemma chain examples") {
  const std::vector<Site> a{{0, 0}}, b1{{-2, 2}}, b2{{0, 2}}, b3{{2, 2}};
  for (const char* p : {"0.2", "0.5", "0.8"}) {
    const auto r = verify_lemma61(bond(p), a, b1, b2, b3, exact_opts());
    CHECK(r.all_hold());
    CHECK(r.records.size() == 4);
    for (const auto& rec : r.records) {
      if (rec.exact_gap) CHECK(*rec.exact_gap <= 0);
    }
    CHECK(verify_corollary62(bond(p), a, b1, b2, b3, exact_opts()).all_hold());
  }
  // Near p = 1 every conditional is close to 1, but conditioning on the rare
  // event {not H3} still moves P(H1 | .) by about 1 - p.
  const auto near = verify_lemma61(bond("0.999"), a, b1, b2, b3, exact_opts());
  CHECK(near.all_hold());
  for (const auto& rec : near.records) {
    CHECK(rec.lhs.value == doctest::Approx(1.0).epsilon(3e-3));
    CHECK(std::abs(rec.gap) < 3e-3);
  }
  const auto h1 = Event::atom(conn(a, b1));
  const auto h2 = Event::atom(conn(a, b2));
  const auto h3 = Event::atom(conn(a, b3));
  const Rational first = brute_probability(bond("0.999"), h1 && h2 && !h3) / brute_probability(bond("0.999"), h2 && !h3);
  CHECK(near.records[0].lhs.exact == first);
  CHECK(*near.records[0].exact_gap == -(first - brute_probability(bond("0.999"), h1 && h2) /
                                                    brute_probability(bond("0.999"), h2)));
  CHECK(error_of([&] { (void)verify_lemma61(bond("0.5"), a, b2, b2, b3); }) == ErrorCode::NotStrictlySeparated);
  CHECK(error_of([&] { (void)verify_lemma61(bond("0.5"), a, b1, {{1, 3}}, b3); }) == ErrorCode::LevelMismatch);
  CHECK(error_of([&] {
          (void)verify_lemma61(bond("0.5"), a, std::vector<Site>{{-8, 2}}, std::vector<Site>{{-6, 2}}, b3);
        }) == ErrorCode::ZeroDenominator);
}

TEST_CASE("negative correlation with an unreachable target") {
  const auto r = verify_corollary62(bond("0.5"), {{0, 0}}, {{-6, 2}}, {{0, 2}}, {{2, 2}}, exact_opts());
  REQUIRE(r.records.size() == 1);
  CHECK(r.all_hold());
  CHECK(r.records[0].exact_gap == Rational(0));
  CHECK(r.records[0].lhs.value == 0.0);
}

TEST_CASE("lemma chain in Monte Carlo mode") {
  const std::vector<Site> a{{0, 0}}, b1{{-2, 4}}, b2{{0, 4}}, b3{{2, 4}};
  const auto exact = verify_lemma61(bond("0.5"), a, b1, b2, b3, exact_opts());
  const auto mc = verify_lemma61(bond("0.5"), a, b1, b2, b3, mc_opts(200000, 11));
  CHECK(mc.all_hold());
  REQUIRE(mc.records.size() == exact.records.size());
  for (std::size_t i = 0; i < mc.records.size(); ++i) {
    CHECK(mc.records[i].method == Method::MonteCarlo);
    CHECK(std::abs(mc.records[i].lhs.value - exact.records[i].lhs.value) <= 3 * mc.records[i].lhs.stderr_ + 1e-12);
  }
}

TEST_CASE("connection profile") {
  const auto r = verify_corollary63(bond("0.5"), 2, exact_opts());
  REQUIRE(r.rows.size() == 3);
  CHECK(r.rows[0].y == 0);
  CHECK(r.rows[0].estimate.exact == Rational(7, 16));
  CHECK(r.rows[1].estimate.exact == Rational(1, 4));
  CHECK(r.rows[2].y == 4);
  CHECK(r.rows[2].estimate.value == 0.0);
  CHECK(r.checks.all_hold());
  const auto odd = verify_corollary63(bond("0.5"), 3, exact_opts());
  CHECK(odd.rows.front().y == 1);
  for (int tenth = 1; tenth <= 9; ++tenth) {
    const auto m = PercolationModel::independent_bond(Prob(Rational(tenth, 10)));
    for (int n = 1; n <= 4; ++n) {
      const auto rep = verify_corollary63(m, n, exact_opts());
      CHECK(rep.checks.all_hold());
      for (std::size_t i = 1; i < rep.rows.size(); ++i) CHECK(*rep.rows[i].estimate.exact <= *rep.rows[i - 1].estimate.exact);
    }
  }
  auto tilted = bond("0.5");
  tilted.set_edge_prob(Edge{{0, 0}, 1}, Prob::parse("0.9"));
  CHECK(error_of([&] { (void)verify_corollary63(tilted, 2); }) == ErrorCode::NonTranslationInvariantModel);
  CHECK(error_of([&] { (void)verify_corollary63(PercolationModel::independent_site(Prob::parse("0.5")), 2); }) ==
        ErrorCode::UnsupportedModel);
}
