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

#ifndef MARKET_EQ_RATIONAL_HPP_
#define MARKET_EQ_RATIONAL_HPP_

#include <gmpxx.h>

#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace market_eq {

// Exact arbitrary-precision rational. Every value, price and probability in
// the library is carried in this type.
using Rational = mpq_class;

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// An enumeration or state-space limit was exceeded.
class GuardError : public Error {
 public:
  using Error::Error;
};

// Inputs violate the documented preconditions of an operation.
class PreconditionError : public Error {
 public:
  using Error::Error;
};

// Accepts "p/q", "p", "-p/q" and plain decimals such as "0.125" (parsed
// exactly).
Rational parse_rational(std::string_view text);

// Canonical "p/q" (or "p" for integers).
std::string to_string(const Rational& value);

// Decimal rendering with the given number of significant digits.
std::string to_decimal(const Rational& value, int significant_digits = 12);

// Nearest rational with the given denominator.
Rational rationalize(double value, long denominator = 1000000);

Rational sum(const std::vector<Rational>& values);

// num/den in lowest terms. mpq_class(num, den) alone does not reduce, and GMP
// arithmetic requires reduced operands.
inline Rational ratio(long num, long den) {
  Rational r(num, den);
  r.canonicalize();
  return r;
}

}  // namespace market_eq

#endif  // MARKET_EQ_RATIONAL_HPP_
