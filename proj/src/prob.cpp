#include "perco/prob.hpp"

#include "perco/error.hpp"

#include <charconv>
#include <cmath>

namespace perco {

namespace {

void require_unit_interval(double v, std::string_view text) {
  if (!(v >= 0.0 && v <= 1.0)) {
    throw Error(ErrorCode::InvalidModel, "probability out of [0,1]: " + std::string(text));
  }
}

BigInt parse_integer(std::string_view digits, std::string_view text) {
  if (digits.empty()) throw Error(ErrorCode::InvalidModel, "malformed probability: " + std::string(text));
  BigInt v = 0;
  for (char c : digits) {
    if (c < '0' || c > '9') throw Error(ErrorCode::InvalidModel, "malformed probability: " + std::string(text));
    v = v * 10 + (c - '0');
  }
  return v;
}

}  // namespace

std::string to_string(const Rational& q) {
  const auto num = boost::multiprecision::numerator(q);
  const auto den = boost::multiprecision::denominator(q);
  if (den == 1) return num.str();
  return num.str() + "/" + den.str();
}

double to_double(const Rational& q) { return q.convert_to<double>(); }

Prob::Prob(const Rational& q) : value_(to_double(q)), exact_(q) {
  if (q < 0 || q > 1) throw Error(ErrorCode::InvalidModel, "probability out of [0,1]: " + to_string(q));
}

std::optional<Rational> exact_decimal(double v) {
  if (!std::isfinite(v) || std::abs(v) > 1e6) return std::nullopt;
  double scale = 1.0;
  for (int k = 0; k <= 12; ++k, scale *= 10.0) {
    const double r = std::round(v * scale);
    if (r / scale == v) {
      return Rational(BigInt(static_cast<long long>(r)), BigInt(static_cast<long long>(scale)));
    }
  }
  return std::nullopt;
}

Prob Prob::from_double(double v) {
  require_unit_interval(v, std::to_string(v));
  Prob out;
  out.value_ = v;
  out.exact_ = exact_decimal(v);
  return out;
}

Prob Prob::parse(std::string_view text) {
  if (auto slash = text.find('/'); slash != std::string_view::npos) {
    const BigInt num = parse_integer(text.substr(0, slash), text);
    const BigInt den = parse_integer(text.substr(slash + 1), text);
    if (den == 0) throw Error(ErrorCode::InvalidModel, "zero denominator in probability: " + std::string(text));
    return Prob(Rational(num, den));
  }
  const auto dot = text.find('.');
  const std::string_view whole = text.substr(0, dot);
  const std::string_view frac = dot == std::string_view::npos ? std::string_view{} : text.substr(dot + 1);
  BigInt num = parse_integer(whole.empty() ? std::string_view("0") : whole, text);
  BigInt den = 1;
  for (char c : frac) {
    if (c < '0' || c > '9') throw Error(ErrorCode::InvalidModel, "malformed probability: " + std::string(text));
    num = num * 10 + (c - '0');
    den *= 10;
  }
  return Prob(Rational(num, den));
}

Prob Prob::complement() const {
  if (exact_) return Prob(Rational(1) - *exact_);
  Prob out;
  out.value_ = 1.0 - value_;
  return out;
}

}  // namespace perco
