// Copyright 2026 The dkey Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Arbitrary-precision integer helpers: modular arithmetic, primality and
// decimal conversion.

#ifndef DKEY_INTEGER_HPP
#define DKEY_INTEGER_HPP

#include <algorithm>
#include <array>
#include <optional>
#include <vector>
#include <string>
#include <string_view>

#include <boost/multiprecision/cpp_int.hpp>

#include "dkey/errors.hpp"

namespace dkey {

using Integer = boost::multiprecision::cpp_int;

inline Integer mod_pow(const Integer& base, const Integer& exponent,
                       const Integer& modulus) {
  return boost::multiprecision::powm(base, exponent, modulus);
}

inline Integer gcd(const Integer& a, const Integer& b) {
  return boost::multiprecision::gcd(a, b);
}

/// Inverse of `a` modulo `m`, or nullopt when gcd(a, m) != 1.
inline std::optional<Integer> mod_inverse(const Integer& a, const Integer& m) {
  Integer old_r = a % m, r = m;
  Integer old_s = 1, s = 0;
  if (old_r < 0) old_r += m;
  while (r != 0) {
    Integer q = old_r / r;
    Integer tmp = old_r - q * r;
    old_r = r;
    r = tmp;
    tmp = old_s - q * s;
    old_s = s;
    s = tmp;
  }
  if (old_r != 1) return std::nullopt;
  old_s %= m;
  if (old_s < 0) old_s += m;
  return old_s;
}

namespace detail {

inline bool miller_rabin_round(const Integer& n, const Integer& d, unsigned s,
                               const Integer& base) {
  Integer x = mod_pow(base % n, d, n);
  if (x == 0 || x == 1 || x == n - 1) return true;
  for (unsigned i = 1; i < s; ++i) {
    x = (x * x) % n;
    if (x == n - 1) return true;
  }
  return false;
}

}  // namespace detail

/// Miller-Rabin with the first 13 prime bases. Exact for n < 3.3e24; above
/// that the result is still reproducible but only probabilistically correct.
inline bool is_prime(const Integer& n) {
  static constexpr std::array<unsigned, 13> kBases = {2,  3,  5,  7,  11, 13, 17,
                                                      19, 23, 29, 31, 37, 41};
  if (n < 2) return false;
  for (unsigned b : kBases) {
    if (n == b) return true;
    if (n % b == 0) return false;
  }
  Integer d = n - 1;
  unsigned s = 0;
  while ((d & 1) == 0) {
    d >>= 1;
    ++s;
  }
  for (unsigned b : kBases) {
    if (!detail::miller_rabin_round(n, d, s, Integer(b))) return false;
  }
  return true;
}

namespace detail {

// Brent's variant of Pollard's rho; returns a non-trivial factor of the
// composite `n`.
inline Integer pollard_rho(const Integer& n) {
  if (n % 2 == 0) return 2;
  for (Integer c = 1;; ++c) {
    auto step = [&](const Integer& x) { return (x * x + c) % n; };
    Integer y = 2, x = 2, g = 1, q = 1, ys;
    std::size_t r = 1;
    constexpr std::size_t kBatch = 64;
    do {
      x = y;
      for (std::size_t i = 0; i < r; ++i) y = step(y);
      std::size_t k = 0;
      do {
        ys = y;
        for (std::size_t i = 0; i < std::min(kBatch, r - k); ++i) {
          y = step(y);
          q = (q * (x > y ? x - y : y - x)) % n;
        }
        g = gcd(q, n);
        k += kBatch;
      } while (k < r && g == 1);
      r *= 2;
    } while (g == 1);
    if (g == n) {
      do {
        ys = step(ys);
        g = gcd(x > ys ? x - ys : ys - x, n);
      } while (g == 1);
    }
    if (g != n) return g;
  }
}

inline void collect_factors(const Integer& n, std::vector<Integer>& out) {
  if (n == 1) return;
  if (is_prime(n)) {
    out.push_back(n);
    return;
  }
  const Integer d = pollard_rho(n);
  collect_factors(d, out);
  collect_factors(n / d, out);
}

}  // namespace detail

/// Distinct prime factors of n >= 1, ascending.
inline std::vector<Integer> prime_factors(Integer n) {
  if (n < 1) throw UsageError("prime_factors needs n >= 1");
  std::vector<Integer> out;
  for (unsigned p = 2; p < 1000 && Integer(p) * p <= n; ++p) {
    if (n % p == 0) {
      out.push_back(p);
      while (n % p == 0) n /= p;
    }
  }
  detail::collect_factors(n, out);
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

/// Euler's totient.
inline Integer euler_phi(const Integer& n) {
  Integer phi = n;
  for (const auto& q : prime_factors(n)) phi = phi / q * (q - 1);
  return phi;
}

inline std::string to_decimal(const Integer& v) { return v.str(); }

/// Parses an optionally signed run of decimal digits; throws UsageError on
/// anything else.
inline Integer parse_decimal(std::string_view text) {
  if (text.empty()) throw UsageError("empty integer literal");
  std::size_t i = (text[0] == '-' || text[0] == '+') ? 1 : 0;
  if (i == text.size()) throw UsageError("integer literal has no digits");
  for (std::size_t j = i; j < text.size(); ++j) {
    if (text[j] < '0' || text[j] > '9') {
      throw UsageError("invalid integer literal '" + std::string(text) + "'");
    }
  }
  Integer v(std::string(text.substr(i)));
  return text[0] == '-' ? Integer(-v) : v;
}

}  // namespace dkey

#endif  // DKEY_INTEGER_HPP
