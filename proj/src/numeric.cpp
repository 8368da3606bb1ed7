#include "cayley/numeric.hpp"

#include "cayley/error.hpp"

#include <cmath>
#include <limits>

namespace cayley {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::UnknownKind: return "UnknownKind";
    case ErrorCode::InvalidParams: return "InvalidParams";
    case ErrorCode::MalformedElement: return "MalformedElement";
    case ErrorCode::NotSymmetric: return "NotSymmetric";
    case ErrorCode::ContainsIdentity: return "ContainsIdentity";
    case ErrorCode::Duplicate: return "Duplicate";
    case ErrorCode::MemoryBudgetExceeded: return "MemoryBudgetExceeded";
    case ErrorCode::HorizonExceeded: return "HorizonExceeded";
    case ErrorCode::RadiusOutOfRange: return "RadiusOutOfRange";
    case ErrorCode::EmptySet: return "EmptySet";
    case ErrorCode::BadParams: return "BadParams";
    case ErrorCode::ExitNotFound: return "ExitNotFound";
    case ErrorCode::PreconditionUnmet: return "PreconditionUnmet";
    case ErrorCode::NoFamilyForKind: return "NoFamilyForKind";
    case ErrorCode::NotApplicable: return "NotApplicable";
    case ErrorCode::InsufficientData: return "InsufficientData";
    case ErrorCode::EmptyGeneratingSet: return "EmptyGeneratingSet";
    case ErrorCode::Usage: return "Usage";
  }
  return "Unknown";
}

Error::Error(ErrorCode code, const std::string& message, std::optional<std::int64_t> last_radius)
    : std::runtime_error(std::string(to_string(code)) + ": " + message),
      code_(code),
      last_radius_(last_radius) {}

BigInt numerator_of(const Rational& q) { return boost::multiprecision::numerator(q); }
BigInt denominator_of(const Rational& q) { return boost::multiprecision::denominator(q); }

BigInt floor_of(const Rational& q) {
  const BigInt num = numerator_of(q);
  const BigInt den = denominator_of(q);
  BigInt quot = num / den;
  if (num % den != 0 && num < 0) --quot;
  return quot;
}

BigInt ceil_of(const Rational& q) {
  const BigInt num = numerator_of(q);
  const BigInt den = denominator_of(q);
  BigInt quot = num / den;
  if (num % den != 0 && num > 0) ++quot;
  return quot;
}

namespace {

BigInt parse_integer(std::string_view text, std::string_view whole) {
  if (text.empty()) throw Error(ErrorCode::BadParams, "malformed rational '" + std::string(whole) + "'");
  bool negative = false;
  std::size_t pos = 0;
  if (text[0] == '-' || text[0] == '+') {
    negative = text[0] == '-';
    pos = 1;
  }
  if (pos == text.size()) throw Error(ErrorCode::BadParams, "malformed rational '" + std::string(whole) + "'");
  BigInt value = 0;
  for (; pos < text.size(); ++pos) {
    const char c = text[pos];
    if (c < '0' || c > '9') {
      throw Error(ErrorCode::BadParams, "malformed rational '" + std::string(whole) + "'");
    }
    value = value * 10 + (c - '0');
  }
  return negative ? BigInt(-value) : value;
}

}  // namespace

Rational parse_rational(std::string_view text) {
  const auto slash = text.find('/');
  if (slash == std::string_view::npos) return Rational(parse_integer(text, text));
  const BigInt num = parse_integer(text.substr(0, slash), text);
  const BigInt den = parse_integer(text.substr(slash + 1), text);
  if (den == 0) throw Error(ErrorCode::BadParams, "zero denominator in '" + std::string(text) + "'");
  return Rational(num, den);
}

std::string to_string(const Rational& q) {
  return numerator_of(q).str() + "/" + denominator_of(q).str();
}

std::string to_string(const BigInt& n) { return n.str(); }

double log_of(const BigInt& n) {
  if (n <= 0) return -std::numeric_limits<double>::infinity();
  // Shift large values down so the double conversion cannot overflow.
  const std::size_t bits = boost::multiprecision::msb(n) + 1;
  if (bits <= 1000) return std::log(n.convert_to<double>());
  const std::size_t shift = bits - 64;
  const BigInt top = n >> shift;
  return std::log(top.convert_to<double>()) + static_cast<double>(shift) * std::log(2.0);
}

bool fits_int64(const BigInt& n) {
  return n >= std::numeric_limits<std::int64_t>::min() && n <= std::numeric_limits<std::int64_t>::max();
}

std::int64_t to_int64(const BigInt& n) {
  if (!fits_int64(n)) throw Error(ErrorCode::InvalidParams, "integer " + n.str() + " exceeds 64 bits");
  return n.convert_to<std::int64_t>();
}

nlohmann::json to_json(const BigInt& n) {
  if (fits_int64(n)) return n.convert_to<std::int64_t>();
  return n.str();
}

nlohmann::json to_json(const Rational& q) {
  return nlohmann::json{{"num", to_json(numerator_of(q))}, {"den", to_json(denominator_of(q))}};
}

}  // namespace cayley
