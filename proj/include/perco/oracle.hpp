#pragma once

#include "perco/enumerate.hpp"
#include "perco/event.hpp"
#include "perco/lattice.hpp"
#include "perco/model.hpp"
#include "perco/path.hpp"

#include <optional>
#include <string>
#include <vector>

namespace perco {

enum class Side { Left, Right };
std::string_view to_string(Side s);
Side parse_side(std::string_view name);

enum class Arithmetic { Auto, Exact, Float };

struct OracleOptions {
  Arithmetic arithmetic = Arithmetic::Auto;
  int cap = kDefaultEnumerationCap;
  int threads = default_threads();
};

struct PathWeight {
  Path path;
  double p = 0.0;
  std::optional<Rational> exact;
};

/// Finitely supported law on the A -> B paths of a region.  Entries are in
/// path order and carry nonzero weight.
struct PathDistribution {
  std::vector<Site> a;
  std::vector<Site> b;
  Region region;
  std::vector<PathWeight> entries;

  [[nodiscard]] bool exact() const noexcept;
  [[nodiscard]] double prob(const Path& p) const;
  [[nodiscard]] std::optional<Rational> exact_prob(const Path& p) const;
  static PathDistribution point_mass(std::vector<Site> a, std::vector<Site> b, Region region, Path p);
};

/// One extreme-path law to compute: side of the extreme path, its base, and
/// an optional conditioning event (the event F of mu^F).
struct ExtremeQuery {
  std::vector<Site> a;
  std::vector<Site> b;
  Region region;
  Side side = Side::Left;
  std::optional<Event> condition;
};

/// Law of the leftmost (rightmost) open A -> B path in the region given that
/// one exists and the condition holds, by summing over every configuration.
/// Throws NoPath, SupportTooLarge or ZeroProbabilityCondition.
PathDistribution exact_extreme_distribution(const PercolationModel& model, const ExtremeQuery& query,
                                            const OracleOptions& options = {});
/// Several laws from a single pass over the union of their supports.
std::vector<PathDistribution> extreme_distributions(const PercolationModel& model,
                                                    std::span<const ExtremeQuery> queries,
                                                    const OracleOptions& options = {});

struct CouplingEntry {
  Path from;
  Path to;
  double mass = 0.0;
  std::optional<Rational> exact;
};

struct DominanceResult {
  bool holds = false;
  bool exact = false;
  double flow = 0.0;
  /// Transport plan on ordered pairs when holds.
  std::vector<CouplingEntry> coupling;
  /// An up-set with mu(U) > nu(U) when not holds.
  std::vector<Path> violating_up_set;
  double up_mu = 0.0;
  double up_nu = 0.0;
};

inline constexpr double kFlowTolerance = 1e-9;

/// mu <= nu in the stochastic order, decided by max-flow.  The two laws must
/// live on the same level span (IncompatibleBases otherwise).  Exact when
/// both laws are exact; otherwise a total flow within kFlowTolerance of 1.
DominanceResult stochastic_leq(const PathDistribution& mu, const PathDistribution& nu);

/// Independent check: mu(U) <= nu(U) for every up-set U of the paths in
/// either support.  Throws SupportTooLarge above `max_paths` paths.
bool upset_dominance(const PathDistribution& mu, const PathDistribution& nu, int max_paths = 20);

struct ClaimRecord {
  std::string claim;
  std::string lhs;
  std::string rhs;
  bool applicable = true;
  bool holds = true;
  DominanceResult detail;
};

struct ClaimReport {
  std::string name;
  std::vector<ClaimRecord> records;

  [[nodiscard]] bool all_hold() const noexcept;
  [[nodiscard]] int applicable_count() const noexcept;
};

/// mu_l(G) <= mu, nu_l(G) <= nu, mu_r(G) >= mu, nu_r(G) >= nu on the slab
/// between the levels of A and B.  An inequality whose restricted path set
/// is empty is reported as not applicable.
ClaimReport verify_theorem1(const PercolationModel& model, const std::vector<Site>& a,
                            const std::vector<Site>& b, const std::vector<Site>& g,
                            const OracleOptions& options = {});

/// Band comparisons for tau1 <= tau3 <= tau2:
/// mu_b(t1,t2) <= mu_b(t3,t2), nu likewise, and mu_b(t1,t3) <= mu_b(t1,t2), nu likewise.
ClaimReport verify_proposition31(const PercolationModel& model, const BoundaryPath& tau1,
                                 const BoundaryPath& tau2, const BoundaryPath& tau3, const std::vector<Site>& a,
                                 const std::vector<Site>& b, const OracleOptions& options = {});

enum class End { Start, Finish };

/// Adds `extra` to A (End::Start) or to B (End::Finish).  A point strictly to
/// the right pushes both laws right; strictly to the left pushes them left.
ClaimReport verify_corollary2(const PercolationModel& model, const std::vector<Site>& a,
                              const std::vector<Site>& b, Site extra, End end, const OracleOptions& options = {});

std::string describe(const std::vector<Site>& sites);
std::string describe(const BoundaryPath& p);

}  // namespace perco
