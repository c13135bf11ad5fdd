/*
   Copyright 2026 the descentff authors

   Licensed under the Apache License, Version 2.0 (the "License");
   you may not use this file except in compliance with the License.
   You may obtain a copy of the License at

        http://www.apache.org/licenses/LICENSE-2.0

   Unless required by applicable law or agreed to in writing, software
   distributed under the License is distributed on an "AS IS" BASIS,
   WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
   See the License for the specific language governing permissions and
   limitations under the License.
*/

/**
 * @file rational.hpp
 * Exact small rationals on int64 with overflow checks.  Heights, divisor
 * coefficients and Gram entries in this library all have denominators
 * dividing 6, so int64 is ample; the checks guard against misuse.
 */

#ifndef DESCENTFF_RATIONAL_HPP
#define DESCENTFF_RATIONAL_HPP

#include <cstdint>
#include <numeric>
#include <string>

#include "descentff/errors.hpp"

namespace descentff {

struct Rat {
  int64_t num = 0;
  int64_t den = 1;  // always > 0, gcd(num, den) = 1

  Rat() = default;
  Rat(int64_t n) : num(n), den(1) {}
  Rat(int64_t n, int64_t d) : num(n), den(d) { normalize(); }

  void normalize() {
    if (den == 0) throw PreconditionUnmet("rational with zero denominator");
    if (den < 0) {
      den = -den;
      num = -num;
    }
    int64_t g = std::gcd(num < 0 ? -num : num, den);
    if (g > 1) {
      num /= g;
      den /= g;
    }
  }

  static Rat checked(__int128 n, __int128 d) {
    if (n > INT64_MAX || n < INT64_MIN || d > INT64_MAX || d < INT64_MIN)
      throw PreconditionUnmet("rational overflow");
    return Rat(static_cast<int64_t>(n), static_cast<int64_t>(d));
  }

  friend Rat operator+(Rat a, Rat b) {
    return checked(static_cast<__int128>(a.num) * b.den +
                       static_cast<__int128>(b.num) * a.den,
                   static_cast<__int128>(a.den) * b.den);
  }
  friend Rat operator-(Rat a, Rat b) {
    return checked(static_cast<__int128>(a.num) * b.den -
                       static_cast<__int128>(b.num) * a.den,
                   static_cast<__int128>(a.den) * b.den);
  }
  friend Rat operator*(Rat a, Rat b) {
    return checked(static_cast<__int128>(a.num) * b.num,
                   static_cast<__int128>(a.den) * b.den);
  }
  friend Rat operator/(Rat a, Rat b) {
    if (b.num == 0) throw PreconditionUnmet("rational division by zero");
    return checked(static_cast<__int128>(a.num) * b.den,
                   static_cast<__int128>(a.den) * b.num);
  }
  Rat operator-() const { return Rat(-num, den); }

  friend bool operator==(Rat a, Rat b) {
    return a.num == b.num && a.den == b.den;
  }
  friend bool operator!=(Rat a, Rat b) { return !(a == b); }
  friend bool operator<(Rat a, Rat b) {
    return static_cast<__int128>(a.num) * b.den <
           static_cast<__int128>(b.num) * a.den;
  }
  friend bool operator<=(Rat a, Rat b) { return a < b || a == b; }
  friend bool operator>(Rat a, Rat b) { return b < a; }
  friend bool operator>=(Rat a, Rat b) { return b <= a; }

  bool is_integer() const { return den == 1; }
  // Floor division toward minus infinity.
  int64_t floor() const {
    return num >= 0 ? num / den : -((-num + den - 1) / den);
  }
  int64_t ceil() const { return -(-*this).floor(); }
  Rat frac() const { return *this - Rat(floor()); }  // in [0, 1)

  std::string str() const {
    return den == 1 ? std::to_string(num)
                    : std::to_string(num) + "/" + std::to_string(den);
  }
};

}  // namespace descentff

#endif  // DESCENTFF_RATIONAL_HPP
