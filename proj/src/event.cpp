#include "perco/event.hpp"

#include "perco/error.hpp"


namespace perco {

namespace {

std::string site_set(const std::vector<Site>& s) {
  std::string out = "{";
  for (std::size_t i = 0; i < s.size(); ++i) out += (i ? "," : "") + to_string(s[i]);
  return out + "}";
}

}  // namespace

ConnectionEvent ConnectionEvent::between(std::vector<Site> a, std::vector<Site> b) {
  const int m = common_level(a, "A");
  const int n = common_level(b, "B");
  if (n <= m) throw Error(ErrorCode::LevelMismatch, "B must lie above A");
  return ConnectionEvent{std::move(a), std::move(b), Region::whole(m, n)};
}

std::string ConnectionEvent::describe() const { return site_set(a) + "->" + site_set(b); }

Event Event::always() {
  Event e;
  e.program_.push_back({Op::True, 0});
  return e;
}

Event Event::atom(ConnectionEvent c) {
  Event e;
  e.atoms_.push_back(std::move(c));
  e.program_.push_back({Op::Atom, 0});
  return e;
}

Event operator!(const Event& e) {
  Event out = e;
  out.program_.push_back({Event::Op::Not, 0});
  return out;
}

Event Event::join(const Event& x, const Event& y, bool conj) {
  Event out = x;
  const int shift = static_cast<int>(x.atoms_.size());
  out.atoms_.insert(out.atoms_.end(), y.atoms_.begin(), y.atoms_.end());
  for (Instr in : y.program_) {
    if (in.op == Op::Atom) in.atom += shift;
    out.program_.push_back(in);
  }
  out.program_.push_back({conj ? Op::And : Op::Or, 0});
  return out;
}

Event operator&&(const Event& x, const Event& y) { return Event::join(x, y, true); }
Event operator||(const Event& x, const Event& y) { return Event::join(x, y, false); }
bool Event::eval(std::uint64_t truth) const {
  std::vector<bool> stack;
  for (const Instr& in : program_) {
    switch (in.op) {
      case Op::True:
        stack.push_back(true);
        break;
      case Op::Atom:
        stack.push_back((truth >> in.atom) & 1U);
        break;
      case Op::Not:
        stack.back() = !stack.back();
        break;
      case Op::And:
      case Op::Or: {
        const bool r = stack.back();
        stack.pop_back();
        stack.back() = in.op == Op::And ? (stack.back() && r) : (stack.back() || r);
        break;
      }
    }
  }
  return stack.back();
}

std::string Event::describe() const {
  std::vector<std::string> stack;
  for (const Instr& in : program_) {
    switch (in.op) {
      case Op::True:
        stack.emplace_back("true");
        break;
      case Op::Atom:
        stack.push_back(atoms_[static_cast<std::size_t>(in.atom)].describe());
        break;
      case Op::Not:
        stack.back() = "not(" + stack.back() + ")";
        break;
      case Op::And:
      case Op::Or: {
        std::string r = std::move(stack.back());
        stack.pop_back();
        stack.back() = "(" + stack.back() + (in.op == Op::And ? " and " : " or ") + r + ")";
        break;
      }
    }
  }
  return stack.back();
}

std::vector<Support> event_supports(const Lattice& lattice, const Event& e) {
  std::vector<Support> out;
  for (const ConnectionEvent& c : e.atoms()) {
    Support s = path_support(lattice, c.region, c.a, c.b);
    if (!s.empty()) out.push_back(std::move(s));
  }
  return out;
}

CompiledEvent::CompiledEvent(const Event& e, const Universe& universe) : event_(e) {
  if (e.atoms().size() > 64) throw Error(ErrorCode::SupportTooLarge, "more than 64 atoms in one event");
  for (const ConnectionEvent& c : e.atoms()) graphs_.emplace_back(universe, c.region, c.a, c.b);
}

std::uint64_t CompiledEvent::truth(std::span<const std::uint64_t> words) const {
  std::uint64_t t = 0;
  for (std::size_t i = 0; i < graphs_.size(); ++i) {
    if (graphs_[i].connected(words)) t |= std::uint64_t{1} << i;
  }
  return t;
}

}  // namespace perco
