// Copyright 2026 The spircap authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//   http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <charconv>
#include <cstdint>
#include <limits>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "json.hpp"
#include "spir/error.hpp"

namespace spir {

using BigInt = boost::multiprecision::cpp_int;
// Always held in lowest terms with a positive denominator.
using Rational = boost::multiprecision::cpp_rational;

inline BigInt Numerator(const Rational& r) {
  return boost::multiprecision::numerator(r);
}
inline BigInt Denominator(const Rational& r) {
  return boost::multiprecision::denominator(r);
}

inline Rational MakeRational(std::int64_t num, std::int64_t den = 1) {
  SPIR_ENFORCE(den != 0, ErrorCode::kDivisionByZero, "zero denominator");
  return Rational(BigInt(num), BigInt(den));
}

// "p/q" or "p"; whitespace and floats are rejected.
inline Rational ParseRational(std::string_view text) {
  auto parse_int = [&](std::string_view s) -> BigInt {
    SPIR_ENFORCE(!s.empty(), ErrorCode::kParseError,
                 "empty integer in rational '" + std::string(text) + "'");
    std::size_t i = (s[0] == '-' || s[0] == '+') ? 1 : 0;
    SPIR_ENFORCE(i < s.size(), ErrorCode::kParseError,
                 "bad rational '" + std::string(text) + "'");
    for (std::size_t j = i; j < s.size(); ++j) {
      SPIR_ENFORCE(s[j] >= '0' && s[j] <= '9', ErrorCode::kParseError,
                   "bad rational '" + std::string(text) + "'");
    }
    BigInt v(std::string(s.substr(i)));
    return s[0] == '-' ? BigInt(-v) : v;
  };
  auto slash = text.find('/');
  if (slash == std::string_view::npos) {
    return Rational(parse_int(text));
  }
  BigInt num = parse_int(text.substr(0, slash));
  BigInt den = parse_int(text.substr(slash + 1));
  SPIR_ENFORCE(den != 0, ErrorCode::kDivisionByZero,
               "zero denominator in '" + std::string(text) + "'");
  return Rational(num, den);
}

inline std::string ToString(const Rational& r) {
  if (Denominator(r) == 1) {
    return Numerator(r).str();
  }
  return Numerator(r).str() + "/" + Denominator(r).str();
}

// Display only; never parsed back.
inline std::string ToDecimal(const Rational& r, int digits = 6) {
  BigInt num = Numerator(r);
  BigInt den = Denominator(r);
  bool negative = num < 0;
  if (negative) num = -num;
  BigInt whole = num / den;
  BigInt rem = num % den;
  std::string out = (negative ? "-" : "") + whole.str();
  if (digits > 0) {
    out += '.';
    for (int i = 0; i < digits; ++i) {
      rem *= 10;
      out += static_cast<char>('0' + static_cast<int>(rem / den));
      rem %= den;
    }
  }
  return out;
}

inline BigInt Lcm(const BigInt& a, const BigInt& b) {
  return boost::multiprecision::lcm(a, b);
}

inline Rational Sum(const std::vector<Rational>& values) {
  Rational total = 0;
  for (const auto& v : values) total += v;
  return total;
}

inline std::string JoinRationals(const std::vector<Rational>& values,
                                 std::string_view sep = ", ") {
  std::string out;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i) out += sep;
    out += ToString(values[i]);
  }
  return out;
}

namespace detail {
inline nlohmann::json BigIntToJson(const BigInt& v) {
  if (v >= std::numeric_limits<std::int64_t>::min() &&
      v <= std::numeric_limits<std::int64_t>::max()) {
    return v.convert_to<std::int64_t>();
  }
  return v.str();
}
inline BigInt BigIntFromJson(const nlohmann::json& j) {
  if (j.is_number_integer()) return BigInt(j.get<std::int64_t>());
  SPIR_ENFORCE(j.is_string(), ErrorCode::kParseError,
               "expected integer or integer string");
  return Numerator(ParseRational(j.get<std::string>()));
}
}  // namespace detail

// {"num", "den", "exact", "decimal"}; the decimal is for humans.
inline nlohmann::json RationalToJson(const Rational& r) {
  return {{"num", detail::BigIntToJson(Numerator(r))},
          {"den", detail::BigIntToJson(Denominator(r))},
          {"exact", ToString(r)},
          {"decimal", ToDecimal(r)}};
}

// Accepts the object form or a bare "num/den" string.
inline Rational RationalFromJson(const nlohmann::json& j) {
  if (j.is_string()) return ParseRational(j.get<std::string>());
  if (j.is_number_integer()) return Rational(j.get<std::int64_t>());
  SPIR_ENFORCE(j.is_object() && j.contains("num") && j.contains("den"),
               ErrorCode::kParseError, "rational must be {num, den}");
  BigInt den = detail::BigIntFromJson(j.at("den"));
  SPIR_ENFORCE(den != 0, ErrorCode::kDivisionByZero, "zero denominator");
  return Rational(detail::BigIntFromJson(j.at("num")), den);
}

}  // namespace spir
