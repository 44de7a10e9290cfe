#pragma once

#include "perco/lattice.hpp"
#include "perco/prob.hpp"

#include "json.hpp"

#include <array>
#include <map>
#include <string_view>
#include <utility>

namespace perco {

enum class Variant { IndependentBond, CorrelatedPairBond, IndependentSite, RangeSite };

std::string_view to_string(Variant v);
Variant parse_variant(std::string_view name);

/// Joint law of the (left, right) bond pair leaving one site.  Outcome index
/// is 2*left + right, so q[1] = P(left closed, right open).
struct PairLaw {
  std::array<Prob, 4> q;

  static PairLaw independent(const Prob& left, const Prob& right);
  /// Both marginals p, correlation coefficient rho between the two bonds.
  static PairLaw from_correlation(const Prob& p, double rho);

  [[nodiscard]] Prob left_open() const;
  [[nodiscard]] Prob right_open() const;
  /// q11 * q00 == q10 * q01 (exactly when rational).
  [[nodiscard]] bool is_product() const;
  [[nodiscard]] bool is_symmetric() const;
  [[nodiscard]] bool is_exact() const;
  void validate() const;
};

/// Variant tag plus openness law.  Immutable once built; the set_* methods
/// are for construction only.
class PercolationModel {
 public:
  static PercolationModel independent_bond(const Prob& p);
  static PercolationModel correlated_pair_bond(const PairLaw& law);
  static PercolationModel independent_site(const Prob& p);
  static PercolationModel range_site(const Prob& p, int a, int b);

  PercolationModel& set_edge_prob(const Edge& e, const Prob& p);
  PercolationModel& set_site_prob(const Site& s, const Prob& p);
  PercolationModel& set_pair_law(const Site& s, const PairLaw& law);

  [[nodiscard]] Variant variant() const noexcept { return variant_; }
  [[nodiscard]] const Lattice& lattice() const noexcept { return lattice_; }
  [[nodiscard]] const Prob& p() const noexcept { return p_; }
  [[nodiscard]] std::pair<int, int> range() const noexcept { return range_; }

  /// Marginal probability that a bond is open (bond variants only).
  [[nodiscard]] Prob edge_prob(const Edge& e) const;
  /// Probability that a site is open (site variants only).
  [[nodiscard]] Prob site_prob(const Site& s) const;
  [[nodiscard]] PairLaw pair_law(const Site& s) const;
  [[nodiscard]] const PairLaw& default_pair_law() const noexcept { return pair_law_; }

  /// A single shared law, with left-right symmetry for pair laws.
  [[nodiscard]] bool translation_invariant() const;
  /// Every probability has an exact rational value.
  [[nodiscard]] bool exact() const;
  /// False only for pair laws with nonzero within-pair correlation.
  [[nodiscard]] bool within_pair_independent() const;

  [[nodiscard]] const std::map<Edge, Prob>& edge_overrides() const noexcept { return per_edge_; }
  [[nodiscard]] const std::map<Site, Prob>& site_overrides() const noexcept { return per_site_; }
  [[nodiscard]] const std::map<Site, PairLaw>& pair_overrides() const noexcept { return per_site_pair_; }

 private:
  PercolationModel(Variant v, Lattice l, Prob p) : variant_(v), lattice_(std::move(l)), p_(std::move(p)) {}

  Variant variant_;
  Lattice lattice_;
  Prob p_;
  PairLaw pair_law_{};
  std::pair<int, int> range_{-1, 1};
  std::map<Edge, Prob> per_edge_;
  std::map<Site, Prob> per_site_;
  std::map<Site, PairLaw> per_site_pair_;
};

/// {"variant": ..., "p": ..., "pair_law": [q00,q01,q10,q11]?, "range": [a,b]?,
///  "per_edge": [{"from":[x,y],"step":k,"p":q}]?, "per_site": [...]?}
/// Probabilities may be numbers or "num/den" strings.  Errors name the field.
PercolationModel model_from_json(const nlohmann::json& j);
nlohmann::json to_json(const PercolationModel& model);

}  // namespace perco
