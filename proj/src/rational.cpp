// Copyright 2026 The market_eq Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "market_eq/rational.hpp"

#include <cmath>
#include <cstdio>

namespace market_eq {

Rational parse_rational(std::string_view text) {
  std::string s(text);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.pop_back();
  size_t start = 0;
  while (start < s.size() && std::isspace(static_cast<unsigned char>(s[start]))) ++start;
  s = s.substr(start);
  if (s.empty()) throw PreconditionError("empty rational literal");
  auto dot = s.find('.');
  if (dot != std::string::npos) {
    if (s.find('/') != std::string::npos) {
      throw PreconditionError("malformed rational literal: " + s);
    }
    bool negative = s[0] == '-';
    std::string body = (negative || s[0] == '+') ? s.substr(1) : s;
    dot = body.find('.');
    std::string digits = body.substr(0, dot) + body.substr(dot + 1);
    if (digits.empty() || digits.find_first_not_of("0123456789") != std::string::npos) {
      throw PreconditionError("malformed rational literal: " + s);
    }
    mpz_class numerator(digits, 10);
    mpz_class denominator;
    mpz_ui_pow_ui(denominator.get_mpz_t(), 10, body.size() - dot - 1);
    Rational value(numerator, denominator);
    value.canonicalize();
    return negative ? Rational(-value) : value;
  }
  Rational value;
  if (value.set_str(s[0] == '+' ? s.substr(1) : s, 10) != 0) {
    throw PreconditionError("malformed rational literal: " + s);
  }
  if (value.get_den() == 0) throw PreconditionError("zero denominator: " + s);
  value.canonicalize();
  return value;
}

std::string to_string(const Rational& value) { return value.get_str(10); }

std::string to_decimal(const Rational& value, int significant_digits) {
  char buffer[64];
  std::snprintf(buffer, sizeof(buffer), "%.*g", significant_digits, value.get_d());
  return buffer;
}

Rational rationalize(double value, long denominator) {
  const double scaled = std::nearbyint(value * static_cast<double>(denominator));
  mpz_class numerator;
  mpz_set_d(numerator.get_mpz_t(), scaled);
  Rational result(numerator, denominator);
  result.canonicalize();
  return result;
}

Rational sum(const std::vector<Rational>& values) {
  Rational total = 0;
  for (const auto& v : values) total += v;
  return total;
}

}  // namespace market_eq
