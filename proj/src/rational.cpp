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

#include "circuitdoe/rational.hpp"

#include <cstdio>
#include <cstdlib>
#include <stdexcept>

#include "circuitdoe/exact.hpp"

namespace circuitdoe {

double to_double(const Rational& r) {
  return static_cast<double>(r.numerator()) / static_cast<double>(r.denominator());
}

int64_t round_scaled(const Rational& r, int decimals) {
  if (decimals < 0) throw std::invalid_argument("round_scaled: negative decimals");
  int64_t scale = 1;
  for (int i = 0; i < decimals; ++i) scale = checked_mul(scale, 10);
  const int64_t num = checked_mul(r.numerator(), scale);
  const int64_t den = r.denominator();  // always positive
  int64_t q = num / den;
  int64_t rem = num % den;
  if (rem < 0) {
    rem += den;
    --q;
  }
  // q = floor(num / den), 0 <= rem < den
  const int64_t twice = checked_mul(rem, 2);
  if (twice > den || (twice == den && (q % 2 != 0))) ++q;
  return q;
}

std::string format_fixed(const Rational& r, int decimals) {
  const int64_t scaled = round_scaled(r, decimals);
  const bool negative = scaled < 0;
  std::string digits = std::to_string(negative ? -scaled : scaled);
  if (decimals > 0) {
    if (static_cast<int>(digits.size()) <= decimals) digits.insert(0, decimals + 1 - digits.size(), '0');
    digits.insert(digits.size() - decimals, ".");
  }
  return negative ? "-" + digits : digits;
}

std::string format_fixed(double x, int decimals) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", decimals, x);
  return buf;
}

}  // namespace circuitdoe
