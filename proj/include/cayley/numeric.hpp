#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <string>
#include <string_view>

#include <json.hpp>

namespace cayley {

/// Counts start in a machine word and spill to limbs on demand.
using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

BigInt numerator_of(const Rational& q);
BigInt denominator_of(const Rational& q);

BigInt floor_of(const Rational& q);
BigInt ceil_of(const Rational& q);

/// Accepts "p/q", "p" and an optional leading sign. Throws Error(BadParams).
Rational parse_rational(std::string_view text);

/// Always "num/den" with den > 0, so "3" prints as "3/1".
std::string to_string(const Rational& q);
std::string to_string(const BigInt& n);

/// Natural log of a positive integer; exact enough for reporting growth rates.
double log_of(const BigInt& n);

bool fits_int64(const BigInt& n);
std::int64_t to_int64(const BigInt& n);

/// JSON number when the value fits in 64 bits, decimal string otherwise.
nlohmann::json to_json(const BigInt& n);
/// {"num": ..., "den": ...}
nlohmann::json to_json(const Rational& q);

}  // namespace cayley
