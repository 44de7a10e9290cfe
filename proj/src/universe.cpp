#include "perco/universe.hpp"

#include "perco/error.hpp"

#include <algorithm>

namespace perco {

Universe::Universe(const Lattice& lattice, std::span<const Support> supports) : lattice_(lattice) {
  for (const Support& s : supports) {
    if (lattice_.openness() == Openness::Bonds) {
      edges_.insert(edges_.end(), s.edges.begin(), s.edges.end());
    } else {
      sites_.insert(sites_.end(), s.sites.begin(), s.sites.end());
    }
  }
  std::sort(edges_.begin(), edges_.end());
  edges_.erase(std::unique(edges_.begin(), edges_.end()), edges_.end());
  std::sort(sites_.begin(), sites_.end());
  sites_.erase(std::unique(sites_.begin(), sites_.end()), sites_.end());
}

int Universe::size() const noexcept {
  return static_cast<int>(lattice_.openness() == Openness::Bonds ? edges_.size() : sites_.size());
}

int Universe::index_of(const Edge& e) const {
  if (lattice_.openness() != Openness::Bonds) return -1;
  auto it = std::lower_bound(edges_.begin(), edges_.end(), e);
  return (it != edges_.end() && *it == e) ? static_cast<int>(it - edges_.begin()) : -1;
}

int Universe::index_of(const Site& s) const {
  if (lattice_.openness() != Openness::Sites) return -1;
  auto it = std::lower_bound(sites_.begin(), sites_.end(), s);
  return (it != sites_.end() && *it == s) ? static_cast<int>(it - sites_.begin()) : -1;
}

std::uint64_t Universe::unit_key(int unit) const {
  const auto u = static_cast<std::size_t>(unit);
  if (lattice_.openness() == Openness::Bonds) {
    const Edge& e = edges_.at(u);
    return mix(mix(static_cast<std::uint64_t>(static_cast<std::int64_t>(e.from.x)), static_cast<std::uint64_t>(e.from.y)),
               static_cast<std::uint64_t>(static_cast<std::int64_t>(e.step)) + 17);
  }
  const Site& s = sites_.at(u);
  return mix(static_cast<std::uint64_t>(static_cast<std::int64_t>(s.x)), static_cast<std::uint64_t>(s.y));
}

Configuration::Configuration(std::shared_ptr<const Universe> universe)
    : universe_(std::move(universe)), words_(static_cast<std::size_t>((universe_->size() + 63) / 64), 0) {
  if (words_.empty()) words_.push_back(0);
}

Configuration::Configuration(std::shared_ptr<const Universe> universe, std::vector<std::uint64_t> words)
    : universe_(std::move(universe)), words_(std::move(words)) {
  words_.resize(std::max<std::size_t>(1, static_cast<std::size_t>((universe_->size() + 63) / 64)), 0);
}

Configuration Configuration::from_bits(std::shared_ptr<const Universe> universe, std::uint64_t bits) {
  if (universe->size() > 64) throw Error(ErrorCode::SupportTooLarge, "from_bits needs at most 64 units");
  return Configuration(std::move(universe), std::vector<std::uint64_t>{bits});
}

Configuration Configuration::all_open(std::shared_ptr<const Universe> universe) {
  Configuration c(std::move(universe));
  for (int i = 0; i < c.size(); ++i) c.set(i, true);
  return c;
}

std::vector<Factor> factors_for(const PercolationModel& model, const Universe& universe) {
  std::vector<Factor> out;
  auto single = [&](int bit, const Prob& p) { out.push_back(Factor{bit, 1, {p.complement(), p}}); };

  if (universe.openness() == Openness::Sites) {
    const auto sites = universe.sites();
    for (std::size_t i = 0; i < sites.size(); ++i) single(static_cast<int>(i), model.site_prob(sites[i]));
    return out;
  }
  const auto edges = universe.edges();
  for (std::size_t i = 0; i < edges.size(); ++i) {
    const bool paired = model.variant() == Variant::CorrelatedPairBond && i + 1 < edges.size() &&
                        edges[i].from == edges[i + 1].from;
    if (!paired) {
      single(static_cast<int>(i), model.edge_prob(edges[i]));
      continue;
    }
    // Bit i is the left bond (step -1), bit i+1 the right bond.
    const PairLaw law = model.pair_law(edges[i].from);
    Factor f{static_cast<int>(i), 2, std::vector<Prob>(4)};
    for (int left = 0; left < 2; ++left) {
      for (int right = 0; right < 2; ++right) f.table[static_cast<std::size_t>(left + 2 * right)] = law.q[static_cast<std::size_t>(2 * left + right)];
    }
    out.push_back(std::move(f));
    ++i;
  }
  return out;
}

std::vector<double> unit_open_probabilities(const PercolationModel& model, const Universe& universe) {
  std::vector<double> out;
  if (universe.openness() == Openness::Sites) {
    for (const Site& s : universe.sites()) out.push_back(model.site_prob(s).value());
  } else {
    for (const Edge& e : universe.edges()) out.push_back(model.edge_prob(e).value());
  }
  return out;
}

void sample_configuration(std::span<const Factor> factors, int bits, StreamRng& rng,
                          std::vector<std::uint64_t>& words) {
  words.assign(std::max<std::size_t>(1, static_cast<std::size_t>((bits + 63) / 64)), 0);
  for (const Factor& f : factors) {
    const double u = rng.uniform();
    double acc = 0.0;
    std::size_t outcome = f.table.size() - 1;
    for (std::size_t k = 0; k + 1 < f.table.size(); ++k) {
      acc += f.table[k].value();
      if (u < acc) {
        outcome = k;
        break;
      }
    }
    for (int b = 0; b < f.width; ++b) {
      if ((outcome >> b) & 1U) {
        const int bit = f.first_bit + b;
        words[static_cast<std::size_t>(bit) >> 6] |= std::uint64_t{1} << (bit & 63);
      }
    }
  }
}

}  // namespace perco
