#pragma once

#include "perco/lattice.hpp"
#include "perco/pathkit.hpp"
#include "perco/universe.hpp"

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

namespace perco {

/// {there is an open path from A to B inside the region}.
struct ConnectionEvent {
  std::vector<Site> a;
  std::vector<Site> b;
  Region region;

  /// On the whole slab between the levels of A and B.
  static ConnectionEvent between(std::vector<Site> a, std::vector<Site> b);
  [[nodiscard]] std::string describe() const;
};

/// Boolean combination of connection events.  Stored as a postfix program
/// over a list of atoms.
class Event {
 public:
  static Event always();
  static Event atom(ConnectionEvent e);

  friend Event operator!(const Event& e);
  friend Event operator&&(const Event& x, const Event& y);
  friend Event operator||(const Event& x, const Event& y);

  [[nodiscard]] const std::vector<ConnectionEvent>& atoms() const noexcept { return atoms_; }
  /// Value of the expression when atom i has truth value bit i of `truth`.
  [[nodiscard]] bool eval(std::uint64_t truth) const;
  [[nodiscard]] std::string describe() const;

 private:
  enum class Op { True, Atom, Not, And, Or };
  struct Instr {
    Op op;
    int atom = 0;
  };

  static Event join(const Event& x, const Event& y, bool conj);

  std::vector<ConnectionEvent> atoms_;
  std::vector<Instr> program_;
};

/// Supports of every atom of the event (empty supports are skipped).
std::vector<Support> event_supports(const Lattice& lattice, const Event& e);

/// An event bound to a universe that contains its atoms' supports.
class CompiledEvent {
 public:
  CompiledEvent(const Event& e, const Universe& universe);

  [[nodiscard]] std::uint64_t truth(std::span<const std::uint64_t> words) const;
  [[nodiscard]] bool holds(std::span<const std::uint64_t> words) const { return event_.eval(truth(words)); }
  [[nodiscard]] const Event& event() const noexcept { return event_; }

 private:
  Event event_;
  std::vector<SupportGraph> graphs_;
};

}  // namespace perco
