// Copyright 2026 The coopnet Authors
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

#ifndef COOPNET_RATIONAL_HPP
#define COOPNET_RATIONAL_HPP

#include <cstdint>
#include <string>
#include <string_view>

#include <boost/multiprecision/gmp.hpp>

namespace coopnet {

/// Exact money. Arbitrary precision, always in lowest terms.
using Rational = boost::multiprecision::number<boost::multiprecision::gmp_rational,
                                               boost::multiprecision::et_off>;

/// Good quantities are whole units.
using Count = std::int64_t;

/// Parses "p/q", "-p/q" or an integer literal. Throws std::invalid_argument
/// on anything else (decimals and exponents included) or a zero denominator.
Rational parse_rational(std::string_view text);

/// Canonical text: "7", "-3/4". Never a decimal approximation.
std::string format_rational(const Rational& value);

inline Rational make_rational(std::int64_t num, std::int64_t den = 1) {
  return Rational(num) / Rational(den);
}

}  // namespace coopnet

#endif  // COOPNET_RATIONAL_HPP
