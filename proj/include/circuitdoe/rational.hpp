// Copyright 2026 The Authors.
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

#ifndef CIRCUITDOE_RATIONAL_HPP_
#define CIRCUITDOE_RATIONAL_HPP_

#include <cstdint>
#include <string>

#include <boost/rational.hpp>

namespace circuitdoe {

using Rational = boost::rational<int64_t>;

double to_double(const Rational& r);

// Decimal rendering with round-half-to-even at the given number of decimals,
// computed exactly. Trailing zeros are kept ("0.60").
std::string format_fixed(const Rational& r, int decimals);

// Same rounding applied to a double, via its exact binary value.
std::string format_fixed(double x, int decimals);

// Value scaled by 10^decimals and rounded half-to-even.
int64_t round_scaled(const Rational& r, int decimals);

}  // namespace circuitdoe

#endif  // CIRCUITDOE_RATIONAL_HPP_
