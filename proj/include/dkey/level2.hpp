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
/// Second protocol level. Each plaintext bit becomes a w-bit codeword whose
/// ones-count parity carries the bit (all-ones words are decoys), and each
/// codeword bit rides one first-level exchange:
///
///   bit 1: O_{n+1} = F(...); Alice recovers Bob's permutation and announces
///          its rank.
///   bit 0: O_{n+1} is random; Alice announces a random rank.
///
/// Bob reads 1 iff the announced rank equals his own. A 0 is misread as 1
/// with probability 1/(n+1)!, which is accepted and reported.

#ifndef DKEY_LEVEL2_HPP
#define DKEY_LEVEL2_HPP

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "dkey/level1.hpp"

namespace dkey {

inline constexpr std::size_t kDefaultRetryBudget = 8;

class Codeword {
 public:
  explicit Codeword(std::vector<std::uint8_t> bits) : bits_(std::move(bits)) {
    if (bits_.size() < 2) throw UsageError("codeword width must be >= 2");
    for (auto b : bits_) {
      if (b > 1) throw UsageError("codeword digits must be 0 or 1");
    }
  }

  static Codeword parse(std::string_view text) {
    std::vector<std::uint8_t> bits;
    for (char c : text) {
      if (c != '0' && c != '1') throw UsageError("codeword digits must be 0 or 1");
      bits.push_back(static_cast<std::uint8_t>(c - '0'));
    }
    return Codeword(std::move(bits));
  }

  std::size_t width() const noexcept { return bits_.size(); }
  std::span<const std::uint8_t> bits() const noexcept { return bits_; }

  std::size_t weight() const {
    std::size_t w = 0;
    for (auto b : bits_) w += b;
    return w;
  }

  std::string str() const {
    std::string s;
    for (auto b : bits_) s.push_back(static_cast<char>('0' + b));
    return s;
  }

  friend bool operator==(const Codeword&, const Codeword&) = default;

 private:
  std::vector<std::uint8_t> bits_;
};

enum class WordClass { kZero, kOne, kDecoy };

inline WordClass classify_word(const Codeword& word) {
  const std::size_t weight = word.weight();
  if (weight == word.width()) return WordClass::kDecoy;
  return weight % 2 == 0 ? WordClass::kZero : WordClass::kOne;
}

/// 8 bits per character, most significant first. The agreed code is 7-bit
/// ASCII; bytes >= 0x80 are rejected.
inline std::string text_to_binary(std::string_view plaintext) {
  std::string out;
  out.reserve(plaintext.size() * 8);
  for (char ch : plaintext) {
    const auto byte = static_cast<unsigned char>(ch);
    if (byte >= 0x80) {
      throw UsageError("character 0x" + std::to_string(byte) +
                       " is outside the 7-bit ASCII code");
    }
    for (int bit = 7; bit >= 0; --bit) out.push_back(((byte >> bit) & 1) ? '1' : '0');
  }
  return out;
}

inline std::string binary_to_text(std::string_view binary) {
  if (binary.size() % 8 != 0) {
    throw FramingError("bit count " + std::to_string(binary.size()) +
                       " is not a multiple of 8");
  }
  std::string out;
  for (std::size_t i = 0; i < binary.size(); i += 8) {
    unsigned byte = 0;
    for (std::size_t j = 0; j < 8; ++j) {
      const char c = binary[i + j];
      if (c != '0' && c != '1') throw UsageError("binary text must be 0/1 digits");
      byte = (byte << 1) | static_cast<unsigned>(c - '0');
    }
    out.push_back(static_cast<char>(byte));
  }
  return out;
}

struct EncodedBit {
  std::vector<Codeword> decoys;  // all-ones draws, in draw order
  Codeword word;
};

/// Draws uniformly from the parity class of `bit`; every all-ones draw is
/// kept as a decoy and the draw is repeated.
inline EncodedBit encode_bit(int bit, std::size_t width, Rng& rng) {
  if (width < 2) throw UsageError("codeword width must be >= 2");
  if (bit != 0 && bit != 1) throw UsageError("bit must be 0 or 1");
  std::vector<Codeword> decoys;
  for (;;) {
    std::vector<std::uint8_t> bits(width);
    std::size_t ones = 0;
    for (std::size_t i = 0; i + 1 < width; ++i) {
      bits[i] = static_cast<std::uint8_t>(uniform_bit(rng));
      ones += bits[i];
    }
    bits[width - 1] = static_cast<std::uint8_t>((ones + static_cast<std::size_t>(bit)) % 2);
    Codeword word(std::move(bits));
    if (classify_word(word) == WordClass::kDecoy) {
      decoys.push_back(std::move(word));
      continue;
    }
    return {std::move(decoys), std::move(word)};
  }
}

/// One exchange abandoned because Alice's recovery was ambiguous.
struct AbortedExchange {
  FrameworkMsg framework_msg;
  PermutedMsg permuted_msg;
};

struct BitExchangeRecord {
  FrameworkMsg framework_msg;
  PermutedMsg permuted_msg;
  PermutationIndex announced_index;
  bool genuine;                  // Alice-private: F relation in force
  PermutationIndex bob_sigma;    // Bob-private
  int decoded;                   // Bob's reading
  std::vector<AbortedExchange> aborted;

  int sent_bit() const { return genuine ? 1 : 0; }
};

struct ProtocolOptions {
  std::size_t width = 4;          // codeword width w
  std::size_t repetition = 1;     // r, odd
  std::size_t max_retries = kDefaultRetryBudget;
  std::size_t max_framework = kDefaultMaxFrameworkSize;
};

template <CommutativeFamily Family = PowerFamily>
BitExchangeRecord transmit_bit(const typename Family::KeyF& key_f,
                               const typename Family::KeyT& key_t, int bit,
                               const GroupParams& params, Rng& rng,
                               std::size_t max_retries = kDefaultRetryBudget,
                               std::size_t max_n = kDefaultMaxFrameworkSize) {
  if (bit != 0 && bit != 1) throw UsageError("bit must be 0 or 1");
  const std::size_t m = Family::arity(key_f) + 1;
  std::vector<AbortedExchange> aborted;
  if (bit == 0) {
    auto alice = alice_init_decoy<Family>(params, key_f, rng, max_n);
    auto bob = bob_respond<Family>(key_t, alice.msg, rng);
    PermutationIndex announced(uniform_u64(rng, 0, factorial(m) - 1), m);
    const int decoded = announced == bob.state.sigma ? 1 : 0;
    return {std::move(alice.msg), std::move(bob.msg), announced, false,
            bob.state.sigma, decoded, std::move(aborted)};
  }
  for (std::size_t attempt = 0; attempt < max_retries; ++attempt) {
    auto alice = alice_init<Family>(params, key_f, rng, max_n);
    auto bob = bob_respond<Family>(key_t, alice.msg, rng);
    const RecoveryResult rec = alice_recover<Family>(alice.state, bob.msg);
    if (rec.outcome == RecoveryOutcome::kNotFound) {
      throw ProtocolFault("genuine framework failed verification; F and T do not commute");
    }
    if (auto sigma = rec.unique()) {
      const int decoded = *sigma == bob.state.sigma ? 1 : 0;
      return {std::move(alice.msg), std::move(bob.msg), *sigma, true,
              bob.state.sigma, decoded, std::move(aborted)};
    }
    aborted.push_back({std::move(alice.msg), std::move(bob.msg)});
  }
  throw ProtocolFault("permutation recovery ambiguous after " +
                      std::to_string(max_retries) + " attempts");
}

struct MessageJob {
  std::string plaintext;
  std::string binary;
  std::vector<Codeword> codewords;  // transmission order, decoys included
  std::vector<BitExchangeRecord> bit_records;
  ProtocolOptions options;

  std::size_t decoy_count() const {
    std::size_t c = 0;
    for (const auto& w : codewords) c += classify_word(w) == WordClass::kDecoy;
    return c;
  }

  std::size_t bit_errors() const {
    std::size_t e = 0;
    for (const auto& r : bit_records) e += r.decoded != r.sent_bit();
    return e;
  }
};

inline void check_options(const ProtocolOptions& opt) {
  if (opt.width < 2) throw UsageError("codeword width must be >= 2");
  if (opt.repetition == 0 || opt.repetition % 2 == 0) {
    throw UsageError("repetition factor must be odd");
  }
  if (opt.max_retries == 0) throw UsageError("retry budget must be positive");
}

template <CommutativeFamily Family = PowerFamily>
MessageJob send_message(std::string_view plaintext, const typename Family::KeyF& key_f,
                        const typename Family::KeyT& key_t, const GroupParams& params,
                        const ProtocolOptions& opt, Rng& rng) {
  check_options(opt);
  check_framework_size(Family::arity(key_f), opt.max_framework);
  MessageJob job;
  job.plaintext = std::string(plaintext);
  job.binary = text_to_binary(plaintext);
  job.options = opt;
  for (char digit : job.binary) {
    EncodedBit enc = encode_bit(digit - '0', opt.width, rng);
    for (auto& d : enc.decoys) job.codewords.push_back(std::move(d));
    job.codewords.push_back(std::move(enc.word));
  }
  for (const auto& word : job.codewords) {
    for (auto b : word.bits()) {
      for (std::size_t rep = 0; rep < opt.repetition; ++rep) {
        job.bit_records.push_back(transmit_bit<Family>(
            key_f, key_t, b, params, rng, opt.max_retries, opt.max_framework));
      }
    }
  }
  return job;
}

/// Codeword bit stream (after majority vote) -> plaintext bit string.
inline std::string decode_codeword_stream(std::span<const int> stream, std::size_t width) {
  if (width < 2) throw UsageError("codeword width must be >= 2");
  if (stream.size() % width != 0) {
    throw FramingError("received " + std::to_string(stream.size()) +
                       " bits, not a whole number of " + std::to_string(width) +
                       "-bit codewords");
  }
  std::string binary;
  for (std::size_t i = 0; i < stream.size(); i += width) {
    std::vector<std::uint8_t> bits;
    for (std::size_t j = 0; j < width; ++j) bits.push_back(static_cast<std::uint8_t>(stream[i + j]));
    switch (classify_word(Codeword(std::move(bits)))) {
      case WordClass::kDecoy: break;
      case WordClass::kZero: binary.push_back('0'); break;
      case WordClass::kOne: binary.push_back('1'); break;
    }
  }
  return binary;
}

/// Bob's side: only the decoded bit of each record is used.
inline std::string receive_message(std::span<const int> decoded_bits,
                                   std::size_t width, std::size_t repetition = 1) {
  if (repetition == 0 || repetition % 2 == 0) {
    throw UsageError("repetition factor must be odd");
  }
  if (decoded_bits.size() % repetition != 0) {
    throw FramingError("exchange count is not a multiple of the repetition factor");
  }
  std::vector<int> stream;
  for (std::size_t i = 0; i < decoded_bits.size(); i += repetition) {
    std::size_t ones = 0;
    for (std::size_t j = 0; j < repetition; ++j) ones += decoded_bits[i + j] == 1;
    stream.push_back(2 * ones > repetition ? 1 : 0);
  }
  return binary_to_text(decode_codeword_stream(stream, width));
}

inline std::string receive_message(std::span<const BitExchangeRecord> records,
                                   std::size_t width, std::size_t repetition = 1) {
  std::vector<int> decoded;
  decoded.reserve(records.size());
  for (const auto& r : records) decoded.push_back(r.decoded);
  return receive_message(std::span<const int>(decoded), width, repetition);
}

}  // namespace dkey

#endif  // DKEY_LEVEL2_HPP
