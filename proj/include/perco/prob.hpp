#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <optional>
#include <string>
#include <string_view>

namespace perco {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

std::string to_string(const Rational& q);
double to_double(const Rational& q);
/// The exact rational equal to `v` if `v` is a decimal with at most 12
/// fractional digits (as written in JSON or on a command line).
std::optional<Rational> exact_decimal(double v);

/// A probability in [0,1] with an optional exact rational value.  The exact
/// value is present whenever the probability was given as a short decimal or
/// as a "num/den" string; it enables rational-arithmetic oracles.
class Prob {
 public:
  Prob() = default;
  explicit Prob(const Rational& q);

  /// Exact when `v` is a decimal with at most 12 fractional digits.
  static Prob from_double(double v);
  /// Accepts "0.25", "1/3", "1".
  static Prob parse(std::string_view text);

  [[nodiscard]] double value() const noexcept { return value_; }
  [[nodiscard]] const std::optional<Rational>& exact() const noexcept { return exact_; }
  [[nodiscard]] bool is_exact() const noexcept { return exact_.has_value(); }

  [[nodiscard]] Prob complement() const;

  friend bool operator==(const Prob& a, const Prob& b) { return a.value_ == b.value_ && a.exact_ == b.exact_; }

 private:
  double value_ = 0.0;
  std::optional<Rational> exact_;
};

}  // namespace perco
