#pragma once

#include "perco/event.hpp"
#include "perco/model.hpp"
#include "perco/oracle.hpp"

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace perco {

enum class Method { Auto, Exact, MonteCarlo };
std::string_view to_string(Method m);

inline constexpr double kWilsonZ99 = 2.5758293035489;

struct EventOptions {
  Method method = Method::Auto;  // Auto: exact when the support is enumerable
  std::int64_t budget = 1000000;  // Monte Carlo samples
  std::uint64_t seed = 1;
  Arithmetic arithmetic = Arithmetic::Auto;
  int cap = kDefaultEnumerationCap;
  int threads = default_threads();
};

struct EstimateReport {
  double value = 0.0;
  double stderr_ = 0.0;
  std::int64_t n = 0;  // samples behind the estimate; 0 when exact
  Method method = Method::Exact;
  double lo = 0.0;  // 99% interval
  double hi = 0.0;
  std::optional<Rational> exact;
};

/// Law of the joint truth vector of a list of connection events (bit i =
/// event i), either exact or as Monte Carlo counts.
class TruthTable {
 public:
  TruthTable(const PercolationModel& model, std::vector<ConnectionEvent> atoms, const EventOptions& options);

  using Predicate = std::function<bool(std::uint64_t)>;

  [[nodiscard]] Method method() const noexcept { return method_; }
  [[nodiscard]] EstimateReport probability(const Predicate& event) const;
  /// P(event | given); throws ZeroDenominator when P(given) = 0 (or no
  /// sample satisfied it).
  [[nodiscard]] EstimateReport conditional(const Predicate& event, const Predicate& given) const;
  [[nodiscard]] bool positive(const Predicate& event) const;

 private:
  Method method_;
  std::size_t atoms_;
  std::vector<double> mass_;
  std::vector<Rational> exact_;   // exact rational mode
  std::vector<std::int64_t> counts_;  // Monte Carlo
  std::int64_t samples_ = 0;
};

/// P(event) for a boolean combination of connection events.
EstimateReport event_probability(const PercolationModel& model, const Event& event, const EventOptions& options = {});

/// Wilson score interval for k successes in n trials.
std::pair<double, double> wilson_interval(std::int64_t k, std::int64_t n, double z = kWilsonZ99);

struct InequalityRecord {
  std::string claim;
  EstimateReport lhs;
  EstimateReport rhs;
  /// <= 0 iff the claim holds; exact in rational mode.
  double gap = 0.0;
  std::optional<Rational> exact_gap;
  Method method = Method::Exact;
  std::int64_t n = 0;
  bool applicable = true;
  bool holds = true;
};

struct InequalityReport {
  std::string name;
  std::vector<InequalityRecord> records;
  [[nodiscard]] bool all_hold() const noexcept;
};

/// Lemma chain for H_i = {A -> B_i}, B1 strictly left of B2 strictly left of B3:
/// P(H1|H2,not H3) >= P(H1|H2) >= P(H1|H2,H3), P(H1|H2) >= P(H1|H3), and,
/// when A is a single site, P(H1|H2) nonincreasing in its x over every start
/// point for which H2 is possible.
InequalityReport verify_lemma61(const PercolationModel& model, const std::vector<Site>& a,
                                const std::vector<Site>& b1, const std::vector<Site>& b2,
                                const std::vector<Site>& b3, const EventOptions& options = {});

/// P(H1 and H3 | H2) <= P(H1|H2) P(H3|H2).
InequalityReport verify_corollary62(const PercolationModel& model, const std::vector<Site>& a,
                                    const std::vector<Site>& b1, const std::vector<Site>& b2,
                                    const std::vector<Site>& b3, const EventOptions& options = {});

struct ConnectionRow {
  int y = 0;
  EstimateReport estimate;
};

struct Corollary63Report {
  int n = 0;
  std::vector<ConnectionRow> rows;  // y = n mod 2, ..., n, n + 2 (beyond reach)
  InequalityReport checks;
};

inline constexpr int kCorollary63ExactLevels = 5;

/// P((0,0) -> (y,n)) for y >= 0 and the claim that it is nonincreasing in
/// y.  Exact up to kCorollary63ExactLevels levels (Method::Auto), Monte Carlo
/// beyond.  Needs a translation-invariant bond model with a left-right
/// symmetric law.
Corollary63Report verify_corollary63(const PercolationModel& model, int n, const EventOptions& options = {});

/// Validates separation of three target sets on a common level.
void require_separated(const std::vector<Site>& b1, const std::vector<Site>& b2, const std::vector<Site>& b3);

}  // namespace perco
