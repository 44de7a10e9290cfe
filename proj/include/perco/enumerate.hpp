#pragma once

#include "perco/error.hpp"
#include "perco/prob.hpp"
#include "perco/universe.hpp"

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <thread>
#include <variant>
#include <vector>

namespace perco {

/// Configurations are enumerated only up to this many units by default.
inline constexpr int kDefaultEnumerationCap = 26;

using Int128 = unsigned __int128;

/// Weights of all configurations as a product of two tables: one over the
/// low bits and one over the high bits, split at a factor boundary.  In exact
/// mode every weight is an integer numerator over the common denominator.
struct WeightTables {
  int bits = 0;
  int lo_bits = 0;
  std::vector<double> lo, hi;
  bool exact = false;
  bool wide = false;  // numerators need BigInt (denominator >= 2^126)
  std::vector<Int128> lo_num, hi_num;
  std::vector<BigInt> lo_big, hi_big;
  BigInt denominator = 1;
};

/// Throws SupportTooLarge above `cap` bits.  Exact mode requires every
/// factor probability to be exact.
WeightTables make_weight_tables(std::span<const Factor> factors, int bits, bool exact,
                                int cap = kDefaultEnumerationCap);

/// Mass per outcome value of every channel.  Channel c takes values in
/// [-1, sizes[c]); slot v + 1 holds the mass of value v.
struct Tally {
  std::vector<std::vector<double>> mass;
  bool exact = false;
  std::vector<std::vector<BigInt>> numerators;  // exact mode only
  BigInt denominator = 1;

  [[nodiscard]] Rational exact_mass(std::size_t channel, int value) const {
    return Rational(numerators[channel][static_cast<std::size_t>(value + 1)], denominator);
  }
};

int default_threads() noexcept;

namespace detail {

template <class Acc, class Eval>
void tally_chunk(const WeightTables& w, std::uint64_t hi_first, std::uint64_t hi_last,
                 std::span<const int> sizes, std::span<const std::size_t> offsets, Eval& eval,
                 std::vector<Acc>& acc) {
  std::vector<int> out(sizes.size());
  const std::uint64_t lo_count = std::uint64_t{1} << w.lo_bits;
  for (std::uint64_t hi = hi_first; hi < hi_last; ++hi) {
    for (std::uint64_t lo = 0; lo < lo_count; ++lo) {
      Acc weight;
      if constexpr (std::is_same_v<Acc, double>) {
        weight = w.lo[lo] * w.hi[hi];
        if (weight == 0.0) continue;
      } else if constexpr (std::is_same_v<Acc, Int128>) {
        weight = w.lo_num[lo] * w.hi_num[hi];
        if (weight == 0) continue;
      } else {
        if (w.lo_big[lo] == 0 || w.hi_big[hi] == 0) continue;
        weight = w.lo_big[lo] * w.hi_big[hi];
      }
      const std::uint64_t config = lo | (hi << w.lo_bits);
      eval(config, out.data());
      for (std::size_t c = 0; c < sizes.size(); ++c) acc[offsets[c] + static_cast<std::size_t>(out[c] + 1)] += weight;
    }
  }
}

inline BigInt to_big(Int128 v) {
  BigInt r = static_cast<std::uint64_t>(v >> 64);
  r <<= 64;
  r += static_cast<std::uint64_t>(v);
  return r;
}

template <class Acc, class MakeEval>
std::vector<Acc> tally_all(const WeightTables& w, std::span<const int> sizes, std::span<const std::size_t> offsets,
                           std::size_t cells, const MakeEval& make_eval, int threads) {
  const std::uint64_t hi_count = std::uint64_t{1} << (w.bits - w.lo_bits);
  // Fixed chunking keeps float sums independent of the thread count.
  const std::uint64_t chunks = std::min<std::uint64_t>(hi_count, 64);
  std::vector<std::vector<Acc>> partial(chunks, std::vector<Acc>(cells, Acc(0)));
  std::atomic<std::uint64_t> next{0};
  auto worker = [&] {
    auto eval = make_eval();
    for (std::uint64_t c = next++; c < chunks; c = next++) {
      tally_chunk<Acc>(w, hi_count * c / chunks, hi_count * (c + 1) / chunks, sizes, offsets, eval, partial[c]);
    }
  };
  const int n = std::max(1, std::min<int>(threads, static_cast<int>(chunks)));
  std::vector<std::jthread> pool;
  for (int t = 1; t < n; ++t) pool.emplace_back(worker);
  worker();
  pool.clear();
  std::vector<Acc> total(cells, Acc(0));
  for (const auto& part : partial) {
    for (std::size_t i = 0; i < cells; ++i) total[i] += part[i];
  }
  return total;
}

}  // namespace detail

/// Sums the law over every configuration of the tables' universe.  `make_eval`
/// builds one evaluator per worker; an evaluator maps a configuration (bit i =
/// unit i) to one value per channel.
template <class MakeEval>
Tally tally(const WeightTables& w, std::vector<int> sizes, const MakeEval& make_eval,
            int threads = default_threads()) {
  std::vector<std::size_t> offsets;
  std::size_t cells = 0;
  for (int s : sizes) {
    offsets.push_back(cells);
    cells += static_cast<std::size_t>(s) + 1;
  }
  Tally t;
  t.exact = w.exact;
  t.mass.resize(sizes.size());
  auto split = [&](auto&& flat, auto&& convert, auto& into) {
    into.resize(sizes.size());
    for (std::size_t c = 0; c < sizes.size(); ++c) {
      for (std::size_t i = 0; i <= static_cast<std::size_t>(sizes[c]); ++i) into[c].push_back(convert(flat[offsets[c] + i]));
    }
  };
  if (!w.exact) {
    auto flat = detail::tally_all<double>(w, sizes, offsets, cells, make_eval, threads);
    split(flat, [](double v) { return v; }, t.mass);
    return t;
  }
  t.denominator = w.denominator;
  if (w.wide) {
    auto flat = detail::tally_all<BigInt>(w, sizes, offsets, cells, make_eval, threads);
    split(flat, [](const BigInt& v) { return v; }, t.numerators);
  } else {
    auto flat = detail::tally_all<Int128>(w, sizes, offsets, cells, make_eval, threads);
    split(flat, [](Int128 v) { return detail::to_big(v); }, t.numerators);
  }
  for (std::size_t c = 0; c < sizes.size(); ++c) {
    for (const BigInt& n : t.numerators[c]) t.mass[c].push_back(to_double(Rational(n, t.denominator)));
  }
  return t;
}

}  // namespace perco
