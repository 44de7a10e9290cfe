#pragma once

#include "perco/model.hpp"
#include "perco/oracle.hpp"
#include "perco/pathkit.hpp"
#include "perco/universe.hpp"

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <memory>
#include <optional>
#include <vector>

namespace perco {

enum class Laterality { Left, On, Right };

/// Position of a unit relative to a path spanning its levels.  An edge is
/// left when both endpoints are weakly left and it is not on the path.
Laterality laterality(const Universe& universe, int unit, const Path& gamma);

/// The two-half-step resampling chain on T, the configurations of a
/// universe with an open A -> B path in the region.  Half step 1 keeps the
/// units on or left of the leftmost open path and resamples the rest; half
/// step 2 keeps the units on or right of the new rightmost open path.
/// Units outside the region's own support are never touched.
class BhkChain {
 public:
  /// Throws UnsupportedModel for pair laws with within-pair correlation.
  BhkChain(const PercolationModel& model, std::shared_ptr<const Universe> universe, std::vector<Site> a,
           std::vector<Site> b, Region region);
  /// Chain on the support of the A -> B paths of the region.
  static BhkChain on_support(const PercolationModel& model, std::vector<Site> a, std::vector<Site> b,
                             Region region);

  [[nodiscard]] const std::shared_ptr<const Universe>& universe() const noexcept { return universe_; }
  [[nodiscard]] const SupportGraph& graph() const noexcept { return graph_; }
  [[nodiscard]] std::span<const int> own_units() const noexcept { return own_; }
  [[nodiscard]] const std::vector<Prob>& open_probs() const noexcept { return probs_; }

  [[nodiscard]] bool in_t(std::span<const std::uint64_t> words) const { return graph_.connected(words); }

  /// Units resampled by a half step from the given state (must be in T).
  [[nodiscard]] std::vector<int> resampled(std::span<const std::uint64_t> words, int half) const;
  /// Resamples in place; `open(unit)` decides the new state of each unit.
  void half_step(std::vector<std::uint64_t>& words, int half, const std::function<bool(int)>& open) const;
  /// One full step with counter-based draws keyed by (seed, step, half, unit).
  void step(std::vector<std::uint64_t>& words, std::uint64_t seed, std::uint64_t step_index) const;

  /// Only the units of `path` open (plus nothing else of the support).
  [[nodiscard]] std::vector<std::uint64_t> only_path_open(const Path& path) const;
  /// Every unit of the support open.
  [[nodiscard]] std::vector<std::uint64_t> all_open() const;

 private:
  std::shared_ptr<const Universe> universe_;
  SupportGraph graph_;
  std::vector<int> own_;
  std::vector<Prob> probs_;  // indexed by unit
};

/// Draw shared by every chain with the same seed: the unit is open iff
/// the keyed uniform falls below p.
bool keyed_open(std::uint64_t seed, std::uint64_t step, int half, std::uint64_t unit_key, double p) noexcept;

/// Exact transition kernel over all 2^|E| configurations of a small
/// universe (states outside T carry no mass).
class ExactKernel {
 public:
  static constexpr int kMaxUnits = 14;

  explicit ExactKernel(const BhkChain& chain, int cap = kMaxUnits);

  [[nodiscard]] int units() const noexcept { return units_; }
  /// The configurations in T, ascending.
  [[nodiscard]] const std::vector<std::uint64_t>& states() const noexcept { return states_; }

  /// Row vector times kernel, on distributions indexed by configuration.
  template <class S>
  [[nodiscard]] std::vector<S> apply(const std::vector<S>& v) const;
  /// P(. | T) indexed by configuration.
  template <class S>
  [[nodiscard]] std::vector<S> conditional_law() const;
  /// |T| x |T| matrix in the order of states().
  [[nodiscard]] std::vector<std::vector<double>> dense() const;

 private:
  template <class S>
  [[nodiscard]] std::vector<S> half(const std::vector<S>& v, int half) const;
  template <class S>
  [[nodiscard]] S unit_prob(int unit, bool open) const;

  const BhkChain* chain_;
  int units_;
  std::vector<std::uint64_t> states_;
};

struct InvarianceReport {
  int states = 0;
  double tv_residual = 0.0;
  std::optional<Rational> exact_residual;  // rational mode only
};

/// || pi K - pi ||_TV with pi = P(. | T).
InvarianceReport check_invariance(const ExactKernel& kernel, bool exact);

struct ConvergenceReport {
  int states = 0;
  int iterations = 0;
  double max_tv = 0.0;
  bool converged = false;
};

/// Powers of the dense kernel until every row is within `tol` of pi in total
/// variation.  Needs |T| <= 1024.
ConvergenceReport check_convergence(const ExactKernel& kernel, double tol = 1e-8, int max_iterations = 100000);

void write_dense_csv(const ExactKernel& kernel, std::ostream& out);

/// The coupled chain on pairs (upper, lower) over one universe.  Both
/// marginals use the same draw for the same unit; X requires
/// gamma_l(upper) >= gamma_l(lower) and gamma_r(upper) >= gamma_r(lower).
class CoupledChain {
 public:
  CoupledChain(const PercolationModel& model, std::vector<Site> a, std::vector<Site> b, Region upper,
               Region lower);

  [[nodiscard]] const BhkChain& upper() const noexcept { return upper_; }
  [[nodiscard]] const BhkChain& lower() const noexcept { return lower_; }

  struct State {
    std::vector<std::uint64_t> upper;
    std::vector<std::uint64_t> lower;
  };

  [[nodiscard]] bool in_x(const State& s) const;
  void step(State& s, std::uint64_t seed, std::uint64_t step_index) const;
  /// One half step driven by an explicit outcome per unit.
  void half_step(State& s, int half, const std::function<bool(int)>& open) const;

 private:
  std::shared_ptr<const Universe> universe_;
  BhkChain upper_;
  BhkChain lower_;
};

struct ChainSeries {
  std::string name;  // e.g. "gamma_l(upper)"
  double mean = 0.0;
  double stderr_ = 0.0;
  std::optional<double> exact;
  [[nodiscard]] double z() const noexcept;
};

struct UpsetDifference {
  Path generator;  // up-set {gamma >= generator}
  std::string extreme;  // "left" or "right"
  double upper_mean = 0.0;
  double lower_mean = 0.0;
  [[nodiscard]] double diff() const noexcept { return upper_mean - lower_mean; }
};

struct ChainEstimateReport {
  std::string comparison;  // "l(G)" or "r(G)"
  std::int64_t steps = 0;
  std::int64_t burn_in = 0;
  std::int64_t x_checks = 0;
  std::int64_t x_violations = 0;
  std::vector<ChainSeries> series;
  std::vector<UpsetDifference> upsets;
  double min_diff = 0.0;
  bool holds = false;
};

struct ChainOptions {
  std::int64_t steps = 100000;
  std::int64_t burn_in = -1;  // default 100 |E|
  std::uint64_t seed = 1;
  double diff_tolerance = 1e-2;
  double z_limit = 3.0;
  bool exact_reference = true;  // compare with the oracle when enumerable
  int batches = 50;
  std::ostream* trajectory = nullptr;  // CSV dump when set
};

/// Runs the coupled chain for l(G) (upper = whole slab, lower = l(G)) or
/// r(G) (upper = r(G), lower = whole slab).  The composite increasing
/// statistic of a path is the fraction of paths of the slab below it.
ChainEstimateReport chain_theorem1_estimate(const PercolationModel& model, const std::vector<Site>& a,
                                            const std::vector<Site>& b, const std::vector<Site>& g, Side side,
                                            const ChainOptions& options);

}  // namespace perco
