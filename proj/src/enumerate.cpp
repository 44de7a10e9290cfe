#include "perco/enumerate.hpp"

#include <cstdlib>
#include <string>

namespace perco {

int default_threads() noexcept {
  if (const char* env = std::getenv("PERCO_THREADS")) {
    const int n = std::atoi(env);
    if (n > 0) return n;
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(std::min(hw, 16U));
}

namespace {

struct ExactFactor {
  BigInt den;
  std::vector<BigInt> num;
};

ExactFactor exact_factor(const Factor& f) {
  ExactFactor out{1, {}};
  for (const Prob& p : f.table) {
    if (!p.exact()) throw Error(ErrorCode::InvalidModel, "exact enumeration needs rational probabilities");
    out.den = boost::multiprecision::lcm(out.den, boost::multiprecision::denominator(*p.exact()));
  }
  for (const Prob& p : f.table) {
    const Rational& q = *p.exact();
    out.num.push_back(boost::multiprecision::numerator(q) * (out.den / boost::multiprecision::denominator(q)));
  }
  return out;
}

template <class T, class Get>
std::vector<T> product_table(std::span<const Factor> factors, int first_bit, int width, T one, Get get) {
  std::vector<T> table(std::size_t{1} << width, one);
  for (std::size_t i = 0; i < factors.size(); ++i) {
    const Factor& f = factors[i];
    if (f.first_bit < first_bit || f.first_bit >= first_bit + width) continue;
    const int shift = f.first_bit - first_bit;
    const std::uint64_t mask = (std::uint64_t{1} << f.width) - 1;
    for (std::uint64_t c = 0; c < table.size(); ++c) table[c] *= get(i, (c >> shift) & mask);
  }
  return table;
}

}  // namespace

WeightTables make_weight_tables(std::span<const Factor> factors, int bits, bool exact, int cap) {
  if (bits > cap || bits > 62) {
    throw Error(ErrorCode::SupportTooLarge,
                std::to_string(bits) + " random units exceed the enumeration cap of " + std::to_string(cap));
  }
  WeightTables w;
  w.bits = bits;
  w.exact = exact;
  // Split at the factor boundary closest to the middle.
  int best = 0;
  for (const Factor& f : factors) {
    const int boundary = f.first_bit + f.width;
    if (std::abs(2 * boundary - bits) < std::abs(2 * best - bits)) best = boundary;
  }
  w.lo_bits = best;
  const int hi_bits = bits - best;

  w.lo = product_table<double>(factors, 0, best, 1.0,
                               [&](std::size_t i, std::uint64_t o) { return factors[i].table[o].value(); });
  w.hi = product_table<double>(factors, best, hi_bits, 1.0,
                               [&](std::size_t i, std::uint64_t o) { return factors[i].table[o].value(); });
  if (!exact) return w;

  std::vector<ExactFactor> ef;
  for (const Factor& f : factors) ef.push_back(exact_factor(f));
  for (const ExactFactor& e : ef) w.denominator *= e.den;
  auto get = [&](std::size_t i, std::uint64_t o) { return ef[i].num[o]; };
  w.lo_big = product_table<BigInt>(factors, 0, best, BigInt(1), get);
  w.hi_big = product_table<BigInt>(factors, best, hi_bits, BigInt(1), get);
  w.wide = boost::multiprecision::msb(w.denominator) >= 126;
  if (!w.wide) {
    for (const BigInt& v : w.lo_big) w.lo_num.push_back(static_cast<Int128>(v));
    for (const BigInt& v : w.hi_big) w.hi_num.push_back(static_cast<Int128>(v));
    w.lo_big.clear();
    w.hi_big.clear();
  }
  return w;
}

}  // namespace perco
