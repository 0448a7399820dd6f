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

/// @file
/// Commutative operator pair over the multiplicative group Z_p^*.
///
/// Alice's n-ary lock F and Bob's unary lock T must satisfy
///
///     T(F(O_1, ..., O_n)) == F(T(O_1), ..., T(O_n))
///
/// and F must change value when its arguments are reordered. The shipped
/// family is
///
///     F(O) = O_1^a_1 * ... * O_n^a_n  (mod p),  a_i pairwise distinct
///     T(x) = x^k                      (mod p),  gcd(k, p - 1) == 1
///
/// which commutes because (prod O_i^a_i)^k == prod (O_i^k)^a_i. T is a group
/// automorphism, so it is also multiplicative and invertible. Neither map is
/// one-way for small p; the protocol layers only rely on the algebraic laws,
/// and other families can be plugged in through `CommutativeFamily`.

#ifndef DKEY_ALGEBRA_HPP
#define DKEY_ALGEBRA_HPP

#include <concepts>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "dkey/errors.hpp"
#include "dkey/integer.hpp"
#include "dkey/random.hpp"

namespace dkey {

class GroupParams {
 public:
  /// Throws UsageError unless `modulus` is a prime >= 5.
  explicit GroupParams(Integer modulus) : modulus_(std::move(modulus)) {
    if (modulus_ < 5) {
      throw UsageError("modulus must be >= 5, got " + to_decimal(modulus_));
    }
    if (!is_prime(modulus_)) {
      throw UsageError("modulus " + to_decimal(modulus_) + " is not prime");
    }
  }

  const Integer& modulus() const noexcept { return modulus_; }

  /// Order of the multiplicative group, p - 1.
  Integer order() const { return modulus_ - 1; }

  bool contains(const Integer& v) const { return v >= 1 && v < modulus_; }

  friend bool operator==(const GroupParams&, const GroupParams&) = default;

 private:
  Integer modulus_;
};

class GroupElement {
 public:
  GroupElement(Integer value, GroupParams params)
      : value_(std::move(value)), params_(std::move(params)) {
    if (!params_.contains(value_)) {
      throw UsageError("group element " + to_decimal(value_) +
                       " outside [1, " + to_decimal(params_.modulus() - 1) +
                       "]");
    }
  }

  static GroupElement identity(const GroupParams& params) {
    return GroupElement(Integer(1), params);
  }

  const Integer& value() const noexcept { return value_; }
  const GroupParams& params() const noexcept { return params_; }
  bool is_identity() const { return value_ == 1; }

  GroupElement pow(const Integer& exponent) const {
    Integer e = exponent % params_.order();
    if (e < 0) e += params_.order();
    return GroupElement(mod_pow(value_, e, params_.modulus()), params_);
  }

  GroupElement inverse() const {
    return GroupElement(*mod_inverse(value_, params_.modulus()), params_);
  }

  friend GroupElement operator*(const GroupElement& a, const GroupElement& b) {
    if (a.params_ != b.params_) throw UsageError("mixing elements of different groups");
    return GroupElement((a.value_ * b.value_) % a.params_.modulus(), a.params_);
  }

  friend bool operator==(const GroupElement&, const GroupElement&) = default;

  std::string str() const { return to_decimal(value_); }

 private:
  Integer value_;
  GroupParams params_;
};

/// Builds elements from plain values; handy for fixtures and parsing.
inline std::vector<GroupElement> make_elements(const GroupParams& params,
                                               std::span<const Integer> values) {
  std::vector<GroupElement> out;
  out.reserve(values.size());
  for (const auto& v : values) out.emplace_back(v, params);
  return out;
}

inline std::vector<GroupElement> make_elements(
    const GroupParams& params, std::initializer_list<long long> values) {
  std::vector<GroupElement> out;
  out.reserve(values.size());
  for (long long v : values) out.emplace_back(Integer(v), params);
  return out;
}

/// Alice's lock: pairwise-distinct exponents a_1..a_n in [1, p - 2].
class LockKeyF {
 public:
  LockKeyF(GroupParams params, std::vector<Integer> exponents)
      : params_(std::move(params)), exponents_(std::move(exponents)) {
    if (exponents_.empty()) throw UsageError("F key needs at least one exponent");
    const Integer hi = params_.modulus() - 2;
    for (std::size_t i = 0; i < exponents_.size(); ++i) {
      if (exponents_[i] < 1 || exponents_[i] > hi) {
        throw UsageError("F exponent " + to_decimal(exponents_[i]) +
                         " outside [1, " + to_decimal(hi) + "]");
      }
      for (std::size_t j = 0; j < i; ++j) {
        if (exponents_[i] == exponents_[j]) {
          throw UsageError("F exponents must be pairwise distinct");
        }
      }
    }
  }

  const GroupParams& params() const noexcept { return params_; }
  std::size_t arity() const noexcept { return exponents_.size(); }
  std::span<const Integer> exponents() const noexcept { return exponents_; }

  friend bool operator==(const LockKeyF&, const LockKeyF&) = default;

 private:
  GroupParams params_;
  std::vector<Integer> exponents_;
};

/// Bob's lock: exponent k in [1, p - 2], invertible modulo p - 1.
class LockKeyT {
 public:
  LockKeyT(GroupParams params, Integer exponent)
      : params_(std::move(params)), exponent_(std::move(exponent)) {
    const Integer hi = params_.modulus() - 2;
    if (exponent_ < 1 || exponent_ > hi) {
      throw UsageError("T exponent " + to_decimal(exponent_) + " outside [1, " +
                       to_decimal(hi) + "]");
    }
    auto inv = mod_inverse(exponent_, params_.order());
    if (!inv) {
      throw UsageError("T exponent " + to_decimal(exponent_) +
                       " is not invertible modulo p - 1");
    }
    inverse_exponent_ = std::move(*inv);
  }

  const GroupParams& params() const noexcept { return params_; }
  const Integer& exponent() const noexcept { return exponent_; }
  /// k' with k * k' == 1 (mod p - 1).
  const Integer& inverse_exponent() const noexcept { return inverse_exponent_; }

  friend bool operator==(const LockKeyT&, const LockKeyT&) = default;

 private:
  GroupParams params_;
  Integer exponent_;
  Integer inverse_exponent_;
};

/// Ordered objects O_1..O_n: n >= 2, pairwise distinct, none equal to 1.
class Framework {
 public:
  explicit Framework(std::vector<GroupElement> objects)
      : objects_(std::move(objects)) {
    if (objects_.size() < 2) throw UsageError("framework needs at least 2 objects");
    for (std::size_t i = 0; i < objects_.size(); ++i) {
      if (objects_[i].params() != objects_[0].params()) {
        throw UsageError("framework objects must share one group");
      }
      if (objects_[i].is_identity()) {
        throw UsageError("framework objects must not be the identity");
      }
      for (std::size_t j = 0; j < i; ++j) {
        if (objects_[i] == objects_[j]) {
          throw UsageError("framework objects must be pairwise distinct");
        }
      }
    }
  }

  std::size_t size() const noexcept { return objects_.size(); }
  const GroupElement& operator[](std::size_t i) const { return objects_[i]; }
  std::span<const GroupElement> objects() const noexcept { return objects_; }
  const GroupParams& params() const { return objects_.front().params(); }

  friend bool operator==(const Framework&, const Framework&) = default;

 private:
  std::vector<GroupElement> objects_;
};

/// F over an arbitrary argument list (duplicates allowed); arity must match.
inline GroupElement eval_f(const LockKeyF& key, std::span<const GroupElement> args) {
  if (args.size() != key.arity()) {
    throw UsageError("F has arity " + std::to_string(key.arity()) + " but got " +
                     std::to_string(args.size()) + " arguments");
  }
  const Integer& p = key.params().modulus();
  Integer acc = 1;
  for (std::size_t i = 0; i < args.size(); ++i) {
    acc = (acc * mod_pow(args[i].value(), key.exponents()[i], p)) % p;
  }
  return GroupElement(std::move(acc), key.params());
}

inline GroupElement eval_f(const LockKeyF& key, const Framework& fw) {
  return eval_f(key, fw.objects());
}

inline GroupElement eval_t(const LockKeyT& key, const GroupElement& x) {
  return GroupElement(mod_pow(x.value(), key.exponent(), key.params().modulus()),
                      key.params());
}

inline GroupElement invert_t(const LockKeyT& key, const GroupElement& y) {
  return GroupElement(
      mod_pow(y.value(), key.inverse_exponent(), key.params().modulus()),
      key.params());
}

inline bool check_commutes(const LockKeyF& f, const LockKeyT& t,
                           std::span<const GroupElement> args) {
  std::vector<GroupElement> images;
  images.reserve(args.size());
  for (const auto& o : args) images.push_back(eval_t(t, o));
  return eval_t(t, eval_f(f, args)) == eval_f(f, images);
}

inline bool check_commutes(const LockKeyF& f, const LockKeyT& t, const Framework& fw) {
  return check_commutes(f, t, fw.objects());
}

/// n distinct non-identity elements, uniform by rejection.
inline Framework sample_framework(const GroupParams& params, std::size_t n, Rng& rng) {
  if (n < 2) throw UsageError("framework size must be >= 2");
  // Only p - 2 elements of Z_p^* differ from 1.
  if (Integer(n) > params.modulus() - 2) {
    throw UsageError("modulus " + to_decimal(params.modulus()) +
                     " too small for " + std::to_string(n) +
                     " distinct non-identity objects");
  }
  std::vector<GroupElement> objects;
  objects.reserve(n);
  while (objects.size() < n) {
    GroupElement candidate(uniform_integer(rng, 2, params.modulus() - 1), params);
    bool fresh = true;
    for (const auto& o : objects) fresh = fresh && !(o == candidate);
    if (fresh) objects.push_back(std::move(candidate));
  }
  return Framework(std::move(objects));
}

/// True when exchanging positions i and j leaves F unchanged, i.e.
/// (O_i / O_j)^(a_i - a_j) == 1.
inline bool swap_invariant(const LockKeyF& key, const Framework& fw, std::size_t i,
                           std::size_t j) {
  const auto ratio = fw[i] * fw[j].inverse();
  return ratio.pow(key.exponents()[i] - key.exponents()[j]).is_identity();
}

inline constexpr int kMaxFrameworkDraws = 10000;

/// Like sample_framework, but redraws until every transposition of two
/// positions changes the value of F under `key`.
inline Framework sample_framework(const GroupParams& params, const LockKeyF& key,
                                  Rng& rng) {
  for (int attempt = 0; attempt < kMaxFrameworkDraws; ++attempt) {
    Framework fw = sample_framework(params, key.arity(), rng);
    bool sensitive = true;
    for (std::size_t i = 0; i < fw.size() && sensitive; ++i) {
      for (std::size_t j = i + 1; j < fw.size() && sensitive; ++j) {
        sensitive = !swap_invariant(key, fw, i, j);
      }
    }
    if (sensitive) return fw;
  }
  throw UsageError("no order-sensitive framework found for modulus " +
                   to_decimal(params.modulus()));
}

inline LockKeyF sample_lock_f(const GroupParams& params, std::size_t n, Rng& rng) {
  if (Integer(n) > params.modulus() - 2) {
    throw UsageError("modulus too small for " + std::to_string(n) +
                     " distinct F exponents");
  }
  std::vector<Integer> exps;
  exps.reserve(n);
  while (exps.size() < n) {
    Integer a = uniform_integer(rng, 1, params.modulus() - 2);
    bool fresh = true;
    for (const auto& e : exps) fresh = fresh && e != a;
    if (fresh) exps.push_back(std::move(a));
  }
  return LockKeyF(params, std::move(exps));
}

inline LockKeyT sample_lock_t(const GroupParams& params, Rng& rng) {
  for (;;) {
    Integer k = uniform_integer(rng, 1, params.modulus() - 2);
    if (gcd(k, params.order()) == 1) return LockKeyT(params, std::move(k));
  }
}

/// An operator family usable by the protocol layers: an n-ary lock that
/// commutes with a unary invertible lock.
template <class F>
concept CommutativeFamily =
    requires(const typename F::KeyF& kf, const typename F::KeyT& kt,
             std::span<const GroupElement> args, const GroupElement& x,
             const GroupParams& params, std::size_t n, Rng& rng) {
      { F::arity(kf) } -> std::convertible_to<std::size_t>;
      { F::eval_f(kf, args) } -> std::same_as<GroupElement>;
      { F::eval_t(kt, x) } -> std::same_as<GroupElement>;
      { F::invert_t(kt, x) } -> std::same_as<GroupElement>;
      { F::sample_key_f(params, n, rng) } -> std::same_as<typename F::KeyF>;
      { F::sample_key_t(params, rng) } -> std::same_as<typename F::KeyT>;
      { F::sample_framework(params, kf, rng) } -> std::same_as<Framework>;
    };

/// Modular-exponentiation family.
struct PowerFamily {
  using KeyF = LockKeyF;
  using KeyT = LockKeyT;

  static std::size_t arity(const KeyF& k) { return k.arity(); }
  static GroupElement eval_f(const KeyF& k, std::span<const GroupElement> args) {
    return dkey::eval_f(k, args);
  }
  static GroupElement eval_t(const KeyT& k, const GroupElement& x) {
    return dkey::eval_t(k, x);
  }
  static GroupElement invert_t(const KeyT& k, const GroupElement& y) {
    return dkey::invert_t(k, y);
  }
  static KeyF sample_key_f(const GroupParams& p, std::size_t n, Rng& rng) {
    return sample_lock_f(p, n, rng);
  }
  static KeyT sample_key_t(const GroupParams& p, Rng& rng) {
    return sample_lock_t(p, rng);
  }
  static Framework sample_framework(const GroupParams& p, const KeyF& k, Rng& rng) {
    return dkey::sample_framework(p, k, rng);
  }
};

static_assert(CommutativeFamily<PowerFamily>);

}  // namespace dkey

#endif  // DKEY_ALGEBRA_HPP
