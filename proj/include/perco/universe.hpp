#pragma once

#include "perco/lattice.hpp"
#include "perco/model.hpp"
#include "perco/rng.hpp"

#include <cstdint>
#include <memory>
#include <span>
#include <vector>

namespace perco {

/// The ordered set of random units a computation ranges over: edges for the
/// bond variants, sites for the site variants.  Bit i of a configuration is
/// the state of unit i (open = 1).
class Universe {
 public:
  /// Union of the supports; units sorted by (level, x[, step]).
  Universe(const Lattice& lattice, std::span<const Support> supports);

  [[nodiscard]] const Lattice& lattice() const noexcept { return lattice_; }
  [[nodiscard]] Openness openness() const noexcept { return lattice_.openness(); }
  [[nodiscard]] int size() const noexcept;
  [[nodiscard]] std::span<const Edge> edges() const noexcept { return edges_; }
  [[nodiscard]] std::span<const Site> sites() const noexcept { return sites_; }

  /// Unit index, or -1 when the unit is not part of the universe (or the
  /// lattice does not randomize that kind of object).
  [[nodiscard]] int index_of(const Edge& e) const;
  [[nodiscard]] int index_of(const Site& s) const;

  /// Stable key used for counter-based randomness.
  [[nodiscard]] std::uint64_t unit_key(int unit) const;

 private:
  Lattice lattice_;
  std::vector<Edge> edges_;
  std::vector<Site> sites_;
};

/// Open/closed assignment on a universe, bit-packed (open = 1).
class Configuration {
 public:
  explicit Configuration(std::shared_ptr<const Universe> universe);
  Configuration(std::shared_ptr<const Universe> universe, std::vector<std::uint64_t> words);
  static Configuration from_bits(std::shared_ptr<const Universe> universe, std::uint64_t bits);
  static Configuration all_open(std::shared_ptr<const Universe> universe);

  [[nodiscard]] bool open(int unit) const noexcept {
    return (words_[static_cast<std::size_t>(unit) >> 6] >> (unit & 63)) & 1U;
  }
  void set(int unit, bool value) noexcept {
    const std::uint64_t bit = std::uint64_t{1} << (unit & 63);
    auto& w = words_[static_cast<std::size_t>(unit) >> 6];
    w = value ? (w | bit) : (w & ~bit);
  }

  [[nodiscard]] std::span<const std::uint64_t> words() const noexcept { return words_; }
  [[nodiscard]] const Universe& universe() const noexcept { return *universe_; }
  [[nodiscard]] const std::shared_ptr<const Universe>& universe_ptr() const noexcept { return universe_; }
  [[nodiscard]] int size() const noexcept { return universe_->size(); }
  /// Low 64 bits; the whole configuration when size() <= 64.
  [[nodiscard]] std::uint64_t bits() const noexcept { return words_.empty() ? 0 : words_[0]; }

  friend bool operator==(const Configuration& a, const Configuration& b) { return a.words_ == b.words_; }

 private:
  std::shared_ptr<const Universe> universe_;
  std::vector<std::uint64_t> words_;
};

/// One independent block of the law: `width` consecutive bits starting at
/// `first_bit`, with the probability of every joint outcome (index = sum of
/// bit_i << i).  Blocks of width 2 are the correlated bond pairs.
struct Factor {
  int first_bit = 0;
  int width = 1;
  std::vector<Prob> table;
};

/// Factorization of the model's law restricted to the universe.  Bond pairs
/// with only one member in the universe contribute their marginal.
std::vector<Factor> factors_for(const PercolationModel& model, const Universe& universe);

/// Marginal probability that each unit is open.
std::vector<double> unit_open_probabilities(const PercolationModel& model, const Universe& universe);

/// Draws one configuration from the law into `words` (resized as needed).
void sample_configuration(std::span<const Factor> factors, int bits, StreamRng& rng,
                          std::vector<std::uint64_t>& words);

}  // namespace perco
