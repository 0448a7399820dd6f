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
/// Executable forms of the three cryptographic concepts.
///
///   secret key:  C = E(M),                    M = E^-1(C)
///   double key:  C1 = A(S)                    Alice -> Bob
///                C2 = B(A(S) + L)             Bob -> Alice
///                C3 = A^-1(C2) = B(S) + A^-1(B(L))
///                C4 = B(S)                    safe part, split off by tag
///   public key:  double key with L empty
///
/// "+" is concatenation of tagged element lists. Tags mark which elements
/// belong to Alice's safe; they are known to Alice only and never appear in
/// the eavesdropper's view.

#ifndef DKEY_EQUATIONS_HPP
#define DKEY_EQUATIONS_HPP

#include <optional>
#include <utility>
#include <vector>

#include "dkey/algebra.hpp"

namespace dkey {

/// Invertible unary operator: identity or x -> x^k.
class UnaryOperator {
 public:
  static UnaryOperator identity(const GroupParams& params) {
    return UnaryOperator(params, std::nullopt);
  }
  static UnaryOperator power(const LockKeyT& key) {
    return UnaryOperator(key.params(), key);
  }

  bool is_identity() const noexcept { return !key_.has_value(); }
  const GroupParams& params() const noexcept { return params_; }

  GroupElement apply(const GroupElement& x) const {
    return key_ ? eval_t(*key_, x) : x;
  }
  GroupElement apply_inverse(const GroupElement& y) const {
    return key_ ? invert_t(*key_, y) : y;
  }

 private:
  UnaryOperator(GroupParams params, std::optional<LockKeyT> key)
      : params_(std::move(params)), key_(std::move(key)) {}

  GroupParams params_;
  std::optional<LockKeyT> key_;
};

enum class PartTag { kSafe, kLetter };

struct TaggedElement {
  GroupElement element;
  PartTag tag;

  friend bool operator==(const TaggedElement&, const TaggedElement&) = default;
};

/// Tagged element list; the symbolic "+" of the definitive equations.
class Payload {
 public:
  Payload() = default;
  explicit Payload(std::vector<TaggedElement> items) : items_(std::move(items)) {}

  static Payload tagged(const std::vector<GroupElement>& elements, PartTag tag) {
    std::vector<TaggedElement> items;
    items.reserve(elements.size());
    for (const auto& e : elements) items.push_back({e, tag});
    return Payload(std::move(items));
  }

  const std::vector<TaggedElement>& items() const noexcept { return items_; }
  std::size_t size() const noexcept { return items_.size(); }
  bool empty() const noexcept { return items_.empty(); }

  /// Elements only; what an observer of the channel sees.
  std::vector<GroupElement> untagged() const {
    std::vector<GroupElement> out;
    out.reserve(items_.size());
    for (const auto& it : items_) out.push_back(it.element);
    return out;
  }

  Payload part(PartTag tag) const {
    std::vector<TaggedElement> out;
    for (const auto& it : items_) {
      if (it.tag == tag) out.push_back(it);
    }
    return Payload(std::move(out));
  }

  Payload apply(const UnaryOperator& op) const {
    std::vector<TaggedElement> out;
    out.reserve(items_.size());
    for (const auto& it : items_) out.push_back({op.apply(it.element), it.tag});
    return Payload(std::move(out));
  }

  Payload apply_inverse(const UnaryOperator& op) const {
    std::vector<TaggedElement> out;
    out.reserve(items_.size());
    for (const auto& it : items_) out.push_back({op.apply_inverse(it.element), it.tag});
    return Payload(std::move(out));
  }

  friend Payload operator+(const Payload& a, const Payload& b) {
    std::vector<TaggedElement> out = a.items_;
    out.insert(out.end(), b.items_.begin(), b.items_.end());
    return Payload(std::move(out));
  }

  friend bool operator==(const Payload&, const Payload&) = default;

 private:
  std::vector<TaggedElement> items_;
};

struct SecretKeyRun {
  Payload cipher;
  Payload recovered;
};

struct EveFlowView {
  std::vector<GroupElement> c1;
  std::vector<GroupElement> c2;

  friend bool operator==(const EveFlowView&, const EveFlowView&) = default;
};

struct FlowRecord {
  Payload c1;                 // A(S)
  Payload c2;                 // B(A(S) + L)
  Payload c3;                 // A^-1(C2)
  std::optional<Payload> c4;  // B(S), when the safe part could be separated
  Payload recovered_letter;   // A^-1(B(L))

  EveFlowView eve_view() const { return {c1.untagged(), c2.untagged()}; }

  friend bool operator==(const FlowRecord&, const FlowRecord&) = default;
};

inline SecretKeyRun run_secret_key(const UnaryOperator& e, const Payload& m) {
  Payload cipher = m.apply(e);
  Payload recovered = cipher.apply_inverse(e);
  return {std::move(cipher), std::move(recovered)};
}

/// `s` and `l` are retagged as safe and letter parts respectively.
inline FlowRecord run_double_key(const UnaryOperator& a, const UnaryOperator& b,
                                 const Payload& s, const Payload& l) {
  const Payload safe = Payload::tagged(s.untagged(), PartTag::kSafe);
  const Payload letter = Payload::tagged(l.untagged(), PartTag::kLetter);

  FlowRecord rec;
  rec.c1 = safe.apply(a);
  rec.c2 = (rec.c1 + letter).apply(b);
  rec.c3 = rec.c2.apply_inverse(a);
  Payload safe_part = rec.c3.part(PartTag::kSafe);
  if (safe_part.size() == safe.size()) rec.c4 = std::move(safe_part);
  rec.recovered_letter = rec.c3.part(PartTag::kLetter);
  return rec;
}

inline FlowRecord run_public_key(const UnaryOperator& a, const UnaryOperator& b,
                                 const Payload& s) {
  return run_double_key(a, b, s, Payload{});
}

/// With A = B and S empty the double-key flow must collapse to Bob sending
/// E(L) and Alice reading L back.
inline bool check_secret_specialization(const UnaryOperator& b, const Payload& l) {
  const SecretKeyRun secret = run_secret_key(b, l);
  const FlowRecord flow = run_double_key(b, b, Payload{}, l);
  return flow.c1.empty() && flow.c2.untagged() == secret.cipher.untagged() &&
         flow.recovered_letter.untagged() == secret.recovered.untagged() &&
         secret.recovered.untagged() == l.untagged();
}

}  // namespace dkey

#endif  // DKEY_EQUATIONS_HPP
