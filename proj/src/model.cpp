#include "perco/model.hpp"

#include "perco/error.hpp"

#include <cmath>

namespace perco {

namespace {

constexpr double kFloatTol = 1e-12;

Prob make_prob(const std::optional<Rational>& exact, double approx) {
  if (exact) return Prob(*exact);
  return Prob::from_double(std::clamp(approx, 0.0, 1.0));
}

Prob times(const Prob& a, const Prob& b) {
  if (a.is_exact() && b.is_exact()) return Prob(*a.exact() * *b.exact());
  return Prob::from_double(a.value() * b.value());
}

Prob plus(const Prob& a, const Prob& b) {
  if (a.is_exact() && b.is_exact()) return Prob(*a.exact() + *b.exact());
  return Prob::from_double(std::min(1.0, a.value() + b.value()));
}

[[noreturn]] void bad_field(std::string_view field, const std::string& why) {
  throw Error(ErrorCode::InvalidModel, "field '" + std::string(field) + "': " + why);
}

Prob prob_from_json(const nlohmann::json& j, std::string_view field) {
  try {
    if (j.is_number()) return Prob::from_double(j.get<double>());
    if (j.is_string()) return Prob::parse(j.get<std::string>());
  } catch (const Error& e) {
    std::string why = e.what();
    const std::string prefix = std::string(to_string(e.code())) + ": ";
    if (why.starts_with(prefix)) why.erase(0, prefix.size());
    bad_field(field, why);
  }
  bad_field(field, "expected a probability (number or \"num/den\" string)");
}

nlohmann::json prob_to_json(const Prob& p) {
  if (p.is_exact() && boost::multiprecision::denominator(*p.exact()) != 1 &&
      Prob::from_double(p.value()).exact() != p.exact()) {
    return to_string(*p.exact());
  }
  return p.value();
}

Site site_from_json(const nlohmann::json& j, std::string_view field) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_number_integer() || !j[1].is_number_integer()) {
    bad_field(field, "expected [x, y]");
  }
  return Site{j[0].get<int>(), j[1].get<int>()};
}

PairLaw pair_law_from_json(const nlohmann::json& j, std::string_view field) {
  if (!j.is_array() || j.size() != 4) bad_field(field, "expected [q00, q01, q10, q11]");
  PairLaw law;
  for (std::size_t i = 0; i < 4; ++i) law.q[i] = prob_from_json(j[i], field);
  try {
    law.validate();
  } catch (const Error& e) {
    bad_field(field, e.what());
  }
  return law;
}

}  // namespace

std::string_view to_string(Variant v) {
  switch (v) {
    case Variant::IndependentBond: return "IndependentBond";
    case Variant::CorrelatedPairBond: return "CorrelatedPairBond";
    case Variant::IndependentSite: return "IndependentSite";
    case Variant::RangeSite: return "RangeSite";
  }
  return "?";
}

Variant parse_variant(std::string_view name) {
  for (Variant v : {Variant::IndependentBond, Variant::CorrelatedPairBond, Variant::IndependentSite,
                    Variant::RangeSite}) {
    if (name == to_string(v)) return v;
  }
  bad_field("variant", "unknown variant '" + std::string(name) + "'");
}

PairLaw PairLaw::independent(const Prob& left, const Prob& right) {
  PairLaw law;
  law.q[0] = times(left.complement(), right.complement());
  law.q[1] = times(left.complement(), right);
  law.q[2] = times(left, right.complement());
  law.q[3] = times(left, right);
  return law;
}

PairLaw PairLaw::from_correlation(const Prob& p, double rho) {
  if (!(rho >= -1.0 && rho <= 1.0)) throw Error(ErrorCode::InvalidModel, "correlation must lie in [-1,1]");
  PairLaw law;
  const auto rho_exact = exact_decimal(rho);
  if (p.is_exact() && rho_exact) {
    const Rational pp = *p.exact();
    const Rational var = pp * (1 - pp);
    const std::array<Rational, 4> q{(1 - pp) * (1 - pp) + *rho_exact * var, var * (1 - *rho_exact),
                                    var * (1 - *rho_exact), pp * pp + *rho_exact * var};
    for (std::size_t i = 0; i < 4; ++i) {
      if (q[i] < 0 || q[i] > 1) {
        throw Error(ErrorCode::InvalidModel, "correlation " + std::to_string(rho) + " infeasible at p = " +
                                                 std::to_string(p.value()));
      }
      law.q[i] = Prob(q[i]);
    }
    return law;
  }
  const double pp = p.value();
  const double var = pp * (1 - pp);
  const std::array<double, 4> q{(1 - pp) * (1 - pp) + rho * var, var * (1 - rho), var * (1 - rho),
                                pp * pp + rho * var};
  for (std::size_t i = 0; i < 4; ++i) {
    if (q[i] < -kFloatTol || q[i] > 1 + kFloatTol) {
      throw Error(ErrorCode::InvalidModel, "correlation " + std::to_string(rho) + " infeasible at p = " +
                                               std::to_string(pp));
    }
    law.q[i] = make_prob(std::nullopt, q[i]);
  }
  return law;
}

Prob PairLaw::left_open() const { return plus(q[2], q[3]); }
Prob PairLaw::right_open() const { return plus(q[1], q[3]); }

bool PairLaw::is_exact() const {
  return std::all_of(q.begin(), q.end(), [](const Prob& p) { return p.is_exact(); });
}

bool PairLaw::is_product() const {
  if (is_exact()) return *q[3].exact() * *q[0].exact() == *q[2].exact() * *q[1].exact();
  return std::abs(q[3].value() * q[0].value() - q[2].value() * q[1].value()) <= kFloatTol;
}

bool PairLaw::is_symmetric() const {
  if (is_exact()) return *q[1].exact() == *q[2].exact();
  return std::abs(q[1].value() - q[2].value()) <= kFloatTol;
}

void PairLaw::validate() const {
  if (is_exact()) {
    Rational sum = 0;
    for (const Prob& p : q) sum += *p.exact();
    if (sum != 1) throw Error(ErrorCode::InvalidModel, "pair law sums to " + to_string(sum) + ", not 1");
    return;
  }
  double sum = 0;
  for (const Prob& p : q) sum += p.value();
  if (std::abs(sum - 1.0) > kFloatTol) {
    throw Error(ErrorCode::InvalidModel, "pair law sums to " + std::to_string(sum) + ", not 1");
  }
}

PercolationModel PercolationModel::independent_bond(const Prob& p) {
  return PercolationModel(Variant::IndependentBond, Lattice::bond(), p);
}

PercolationModel PercolationModel::correlated_pair_bond(const PairLaw& law) {
  law.validate();
  PercolationModel m(Variant::CorrelatedPairBond, Lattice::bond(), law.left_open());
  m.pair_law_ = law;
  return m;
}

PercolationModel PercolationModel::independent_site(const Prob& p) {
  PercolationModel m(Variant::IndependentSite, Lattice::site(0, 1), p);
  m.range_ = {0, 1};
  return m;
}

PercolationModel PercolationModel::range_site(const Prob& p, int a, int b) {
  PercolationModel m(Variant::RangeSite, Lattice::site(a, b), p);
  m.range_ = {a, b};
  return m;
}

PercolationModel& PercolationModel::set_edge_prob(const Edge& e, const Prob& p) {
  if (variant_ != Variant::IndependentBond) {
    throw Error(ErrorCode::InvalidModel, "per-edge probabilities require IndependentBond");
  }
  lattice_.require_valid(e.from, "per_edge");
  if (!lattice_.valid_step(e.step)) throw Error(ErrorCode::InvalidModel, "per_edge step must be -1 or +1");
  per_edge_[e] = p;
  return *this;
}

PercolationModel& PercolationModel::set_site_prob(const Site& s, const Prob& p) {
  if (lattice_.openness() != Openness::Sites) {
    throw Error(ErrorCode::InvalidModel, "per-site probabilities require a site variant");
  }
  lattice_.require_valid(s, "per_site");
  per_site_[s] = p;
  return *this;
}

PercolationModel& PercolationModel::set_pair_law(const Site& s, const PairLaw& law) {
  if (variant_ != Variant::CorrelatedPairBond) {
    throw Error(ErrorCode::InvalidModel, "per-site pair laws require CorrelatedPairBond");
  }
  lattice_.require_valid(s, "per_site");
  law.validate();
  per_site_pair_[s] = law;
  return *this;
}

Prob PercolationModel::edge_prob(const Edge& e) const {
  switch (variant_) {
    case Variant::IndependentBond: {
      auto it = per_edge_.find(e);
      return it == per_edge_.end() ? p_ : it->second;
    }
    case Variant::CorrelatedPairBond: {
      const PairLaw law = pair_law(e.from);
      return e.step < 0 ? law.left_open() : law.right_open();
    }
    default: throw Error(ErrorCode::UnsupportedModel, "edge probabilities are undefined for site variants");
  }
}

Prob PercolationModel::site_prob(const Site& s) const {
  if (lattice_.openness() != Openness::Sites) {
    throw Error(ErrorCode::UnsupportedModel, "site probabilities are undefined for bond variants");
  }
  auto it = per_site_.find(s);
  return it == per_site_.end() ? p_ : it->second;
}

PairLaw PercolationModel::pair_law(const Site& s) const {
  if (variant_ != Variant::CorrelatedPairBond) return PairLaw::independent(p_, p_);
  auto it = per_site_pair_.find(s);
  return it == per_site_pair_.end() ? pair_law_ : it->second;
}

bool PercolationModel::translation_invariant() const {
  if (!per_edge_.empty() || !per_site_.empty() || !per_site_pair_.empty()) return false;
  return variant_ != Variant::CorrelatedPairBond || pair_law_.is_symmetric();
}

bool PercolationModel::exact() const {
  if (!p_.is_exact()) return false;
  if (variant_ == Variant::CorrelatedPairBond && !pair_law_.is_exact()) return false;
  for (const auto& [e, p] : per_edge_) {
    if (!p.is_exact()) return false;
  }
  for (const auto& [s, p] : per_site_) {
    if (!p.is_exact()) return false;
  }
  for (const auto& [s, law] : per_site_pair_) {
    if (!law.is_exact()) return false;
  }
  return true;
}

bool PercolationModel::within_pair_independent() const {
  if (variant_ != Variant::CorrelatedPairBond) return true;
  if (!pair_law_.is_product()) return false;
  return std::all_of(per_site_pair_.begin(), per_site_pair_.end(),
                     [](const auto& kv) { return kv.second.is_product(); });
}

PercolationModel model_from_json(const nlohmann::json& j) {
  if (!j.is_object()) bad_field("<root>", "model must be a JSON object");
  if (!j.contains("variant") || !j["variant"].is_string()) bad_field("variant", "missing or not a string");
  const Variant variant = parse_variant(j["variant"].get<std::string>());
  const bool has_p = j.contains("p");
  const Prob p = has_p ? prob_from_json(j["p"], "p") : Prob();

  auto model = [&]() {
    switch (variant) {
      case Variant::IndependentBond:
        if (!has_p) bad_field("p", "required for IndependentBond");
        return PercolationModel::independent_bond(p);
      case Variant::CorrelatedPairBond:
        if (j.contains("pair_law")) return PercolationModel::correlated_pair_bond(pair_law_from_json(j["pair_law"], "pair_law"));
        if (!has_p) bad_field("p", "CorrelatedPairBond needs pair_law or p");
        return PercolationModel::correlated_pair_bond(PairLaw::independent(p, p));
      case Variant::IndependentSite:
        if (!has_p) bad_field("p", "required for IndependentSite");
        return PercolationModel::independent_site(p);
      case Variant::RangeSite: {
        if (!has_p) bad_field("p", "required for RangeSite");
        if (!j.contains("range")) bad_field("range", "required for RangeSite");
        const auto& r = j["range"];
        if (!r.is_array() || r.size() != 2 || !r[0].is_number_integer() || !r[1].is_number_integer()) {
          bad_field("range", "expected [a, b]");
        }
        try {
          return PercolationModel::range_site(p, r[0].get<int>(), r[1].get<int>());
        } catch (const Error& e) {
          bad_field("range", e.what());
        }
      }
    }
    bad_field("variant", "unhandled");
  }();

  if (j.contains("range") && variant != Variant::RangeSite) bad_field("range", "only valid for RangeSite");
  if (j.contains("pair_law") && variant != Variant::CorrelatedPairBond) {
    bad_field("pair_law", "only valid for CorrelatedPairBond");
  }
  if (j.contains("per_edge")) {
    const auto& table = j["per_edge"];
    if (!table.is_array()) bad_field("per_edge", "expected an array");
    for (const auto& row : table) {
      if (!row.is_object() || !row.contains("from") || !row.contains("step") || !row.contains("p")) {
        bad_field("per_edge", "rows need from, step and p");
      }
      if (!row["step"].is_number_integer()) bad_field("per_edge", "step must be an integer");
      try {
        model.set_edge_prob(Edge{site_from_json(row["from"], "per_edge"), row["step"].get<int>()},
                            prob_from_json(row["p"], "per_edge"));
      } catch (const Error& e) {
        if (e.code() == ErrorCode::InvalidModel || e.code() == ErrorCode::InvalidSite) bad_field("per_edge", e.what());
        throw;
      }
    }
  }
  if (j.contains("per_site")) {
    const auto& table = j["per_site"];
    if (!table.is_array()) bad_field("per_site", "expected an array");
    for (const auto& row : table) {
      if (!row.is_object() || !row.contains("site")) bad_field("per_site", "rows need site");
      const Site s = site_from_json(row["site"], "per_site");
      try {
        if (row.contains("pair_law")) {
          model.set_pair_law(s, pair_law_from_json(row["pair_law"], "per_site"));
        } else if (row.contains("p")) {
          model.set_site_prob(s, prob_from_json(row["p"], "per_site"));
        } else {
          bad_field("per_site", "rows need p or pair_law");
        }
      } catch (const Error& e) {
        if (e.code() == ErrorCode::InvalidSite) bad_field("per_site", e.what());
        throw;
      }
    }
  }
  return model;
}

nlohmann::json to_json(const PercolationModel& model) {
  nlohmann::json j;
  j["variant"] = std::string(to_string(model.variant()));
  j["p"] = prob_to_json(model.p());
  if (model.variant() == Variant::CorrelatedPairBond) {
    auto& law = j["pair_law"] = nlohmann::json::array();
    for (const Prob& q : model.default_pair_law().q) law.push_back(prob_to_json(q));
  }
  if (model.variant() == Variant::RangeSite) j["range"] = {model.range().first, model.range().second};
  if (!model.edge_overrides().empty()) {
    auto& table = j["per_edge"] = nlohmann::json::array();
    for (const auto& [e, p] : model.edge_overrides()) {
      table.push_back({{"from", {e.from.x, e.from.y}}, {"step", e.step}, {"p", prob_to_json(p)}});
    }
  }
  if (!model.site_overrides().empty() || !model.pair_overrides().empty()) {
    auto& table = j["per_site"] = nlohmann::json::array();
    for (const auto& [s, p] : model.site_overrides()) table.push_back({{"site", {s.x, s.y}}, {"p", prob_to_json(p)}});
    for (const auto& [s, law] : model.pair_overrides()) {
      auto q = nlohmann::json::array();
      for (const Prob& v : law.q) q.push_back(prob_to_json(v));
      table.push_back({{"site", {s.x, s.y}}, {"pair_law", q}});
    }
  }
  return j;
}

}  // namespace perco
