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
/// First protocol level: the "safe" exchange.
///
///   Alice -> Bob   O_1 .. O_n, O_{n+1} = F(O_1 .. O_n)
///   Bob   -> Alice T(O_{s_1}) .. T(O_{s_{n+1}}) for a secret permutation s
///
/// Alice tries every ordering of the returned list and keeps those whose
/// last element equals F of the first n. Because T commutes with F, Bob's
/// own permutation always passes.

#ifndef DKEY_LEVEL1_HPP
#define DKEY_LEVEL1_HPP

#include <algorithm>
#include <cstddef>
#include <numeric>
#include <optional>
#include <utility>
#include <vector>

#include "dkey/algebra.hpp"
#include "dkey/permutation.hpp"

namespace dkey {

inline constexpr std::size_t kDefaultMaxFrameworkSize = 6;

struct FrameworkMsg {
  std::vector<GroupElement> elements;  // O_1 .. O_n, O_{n+1}
  friend bool operator==(const FrameworkMsg&, const FrameworkMsg&) = default;
};

struct PermutedMsg {
  std::vector<GroupElement> elements;
  friend bool operator==(const PermutedMsg&, const PermutedMsg&) = default;
};

enum class AlicePhase { kSent, kRecovered, kAmbiguous, kNotFound };

template <CommutativeFamily Family = PowerFamily>
struct AliceL1State {
  typename Family::KeyF key_f;
  Framework framework;
  GroupElement o_next;
  bool genuine = true;  // o_next == F(framework)
  AlicePhase phase = AlicePhase::kSent;
};

template <CommutativeFamily Family = PowerFamily>
struct BobL1State {
  typename Family::KeyT key_t;
  PermutationIndex sigma;
};

template <CommutativeFamily Family = PowerFamily>
struct AliceInit {
  AliceL1State<Family> state;
  FrameworkMsg msg;
};

template <CommutativeFamily Family = PowerFamily>
struct BobResponse {
  BobL1State<Family> state;
  PermutedMsg msg;
};

inline void check_framework_size(std::size_t n, std::size_t max_n) {
  if (n < 2 || n > max_n) {
    throw UsageError("framework size " + std::to_string(n) + " outside [2, " +
                     std::to_string(max_n) + "]");
  }
}

/// Starts an exchange from an explicit framework.
template <CommutativeFamily Family = PowerFamily>
AliceInit<Family> alice_init_with(const typename Family::KeyF& key_f, Framework fw) {
  if (Family::arity(key_f) != fw.size()) {
    throw UsageError("F arity does not match framework size");
  }
  GroupElement o_next = Family::eval_f(key_f, fw.objects());
  FrameworkMsg msg{{fw.objects().begin(), fw.objects().end()}};
  msg.elements.push_back(o_next);
  return {AliceL1State<Family>{key_f, std::move(fw), std::move(o_next), true,
                               AlicePhase::kSent},
          std::move(msg)};
}

template <CommutativeFamily Family = PowerFamily>
AliceInit<Family> alice_init(const GroupParams& params,
                             const typename Family::KeyF& key_f, Rng& rng,
                             std::size_t max_n = kDefaultMaxFrameworkSize) {
  check_framework_size(Family::arity(key_f), max_n);
  return alice_init_with<Family>(key_f, Family::sample_framework(params, key_f, rng));
}

/// Same message shape, but O_{n+1} is drawn uniformly from the group minus
/// the value F would have produced, so no relation is in force.
template <CommutativeFamily Family = PowerFamily>
AliceInit<Family> alice_init_decoy(const GroupParams& params,
                                   const typename Family::KeyF& key_f, Rng& rng,
                                   std::size_t max_n = kDefaultMaxFrameworkSize) {
  check_framework_size(Family::arity(key_f), max_n);
  Framework fw = Family::sample_framework(params, key_f, rng);
  const GroupElement related = Family::eval_f(key_f, fw.objects());
  std::optional<GroupElement> o_next;
  while (!o_next) {
    GroupElement candidate(uniform_integer(rng, 1, params.modulus() - 1), params);
    if (!(candidate == related)) o_next = std::move(candidate);
  }
  FrameworkMsg msg{{fw.objects().begin(), fw.objects().end()}};
  msg.elements.push_back(*o_next);
  return {AliceL1State<Family>{key_f, std::move(fw), std::move(*o_next), false,
                               AlicePhase::kSent},
          std::move(msg)};
}

/// Applies T to every element and emits them in the order given by `sigma`:
/// out[j] = T(msg[perm_unrank(sigma)[j]]).
template <CommutativeFamily Family = PowerFamily>
BobResponse<Family> bob_respond_with(const typename Family::KeyT& key_t,
                                     const FrameworkMsg& msg, PermutationIndex sigma) {
  if (sigma.size() != msg.elements.size()) {
    throw UsageError("permutation size does not match message length");
  }
  const auto order = perm_unrank(sigma);
  PermutedMsg out;
  out.elements.reserve(order.size());
  for (std::size_t src : order) out.elements.push_back(Family::eval_t(key_t, msg.elements[src]));
  return {BobL1State<Family>{key_t, sigma}, std::move(out)};
}

template <CommutativeFamily Family = PowerFamily>
BobResponse<Family> bob_respond(const typename Family::KeyT& key_t,
                                const FrameworkMsg& msg, Rng& rng) {
  const std::size_t m = msg.elements.size();
  if (m < 3) throw UsageError("framework message too short");
  PermutationIndex sigma(uniform_u64(rng, 0, factorial(m) - 1), m);
  return bob_respond_with<Family>(key_t, msg, sigma);
}

enum class RecoveryOutcome { kUnique, kAmbiguous, kNotFound };

struct RecoveryResult {
  RecoveryOutcome outcome;
  std::vector<PermutationIndex> matches;  // ascending rank

  std::optional<PermutationIndex> unique() const {
    if (outcome != RecoveryOutcome::kUnique) return std::nullopt;
    return matches.front();
  }
};

/// Undoes the ordering `order` (as produced by bob_respond_with):
/// v[order[j]] = received[j].
inline std::vector<GroupElement> unpermute(std::span<const GroupElement> received,
                                           std::span<const std::size_t> order) {
  std::vector<GroupElement> v(received.begin(), received.end());
  for (std::size_t j = 0; j < order.size(); ++j) v[order[j]] = received[j];
  return v;
}

/// Exhaustive search over all (n+1)! orderings of Bob's reply.
template <CommutativeFamily Family = PowerFamily>
RecoveryResult alice_recover(AliceL1State<Family>& state, const PermutedMsg& msg) {
  if (state.phase != AlicePhase::kSent) {
    throw UsageError("alice_recover called twice on one exchange");
  }
  const std::size_t n = Family::arity(state.key_f);
  const std::size_t m = n + 1;
  if (msg.elements.size() != m) {
    throw UsageError("permuted message has wrong length");
  }
  RecoveryResult result{RecoveryOutcome::kNotFound, {}};
  std::vector<std::size_t> order(m);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::uint64_t rank = 0;
  do {
    const auto v = unpermute(msg.elements, order);
    if (Family::eval_f(state.key_f, std::span(v).first(n)) == v[n]) {
      result.matches.emplace_back(rank, m);
    }
    ++rank;
  } while (std::next_permutation(order.begin(), order.end()));

  if (result.matches.size() == 1) {
    result.outcome = RecoveryOutcome::kUnique;
    state.phase = AlicePhase::kRecovered;
  } else if (result.matches.empty()) {
    state.phase = AlicePhase::kNotFound;
  } else {
    result.outcome = RecoveryOutcome::kAmbiguous;
    state.phase = AlicePhase::kAmbiguous;
  }
  return result;
}

}  // namespace dkey

#endif  // DKEY_LEVEL1_HPP
