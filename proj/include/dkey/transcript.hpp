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
/// What crosses the simulated channel, and its text form.
///
/// File layout:
///
///     dkey-transcript 1
///     p=1000003            <- header, key=value, config echo
///     n=4
///     entries
///     0 A->B L1.framework 812 77 ... 5521
///     1 B->A L1.permuted 9 ... 4410
///     2 A->B L2.announce 17
///
/// Values are decimal. Nothing private (keys, permutations, which bits were
/// genuine) is ever written.

#ifndef DKEY_TRANSCRIPT_HPP
#define DKEY_TRANSCRIPT_HPP

#include <cstdint>
#include <istream>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "dkey/level2.hpp"

namespace dkey {

enum class Direction { kAliceToBob, kBobToAlice };

inline constexpr std::string_view kLabelFramework = "L1.framework";
inline constexpr std::string_view kLabelPermuted = "L1.permuted";
inline constexpr std::string_view kLabelAnnounce = "L2.announce";
inline constexpr std::string_view kLabelRetry = "L2.retry";

struct TranscriptEntry {
  std::uint64_t sequence;
  Direction direction;
  std::string label;
  std::vector<Integer> values;

  friend bool operator==(const TranscriptEntry&, const TranscriptEntry&) = default;
};

class Transcript {
 public:
  void append(Direction dir, std::string_view label, std::vector<Integer> values) {
    entries_.push_back({entries_.size(), dir, std::string(label), std::move(values)});
  }

  const std::vector<TranscriptEntry>& entries() const noexcept { return entries_; }
  std::size_t size() const noexcept { return entries_.size(); }

  /// For deserialization; sequence numbers must run 0, 1, 2, ...
  void push_entry(TranscriptEntry e) {
    if (e.sequence != entries_.size()) {
      throw UsageError("transcript sequence numbers must be consecutive from 0");
    }
    entries_.push_back(std::move(e));
  }

  friend bool operator==(const Transcript&, const Transcript&) = default;

 private:
  std::vector<TranscriptEntry> entries_;
};

namespace detail {

inline std::vector<Integer> values_of(const std::vector<GroupElement>& xs) {
  std::vector<Integer> out;
  out.reserve(xs.size());
  for (const auto& x : xs) out.push_back(x.value());
  return out;
}

}  // namespace detail

/// Records one first-level exchange (2 entries).
inline void eavesdrop(Transcript& t, const FrameworkMsg& fm, const PermutedMsg& pm) {
  t.append(Direction::kAliceToBob, kLabelFramework, detail::values_of(fm.elements));
  t.append(Direction::kBobToAlice, kLabelPermuted, detail::values_of(pm.elements));
}

/// Records one second-level bit (3 entries, plus 3 per aborted attempt).
inline void eavesdrop(Transcript& t, const BitExchangeRecord& rec) {
  for (const auto& a : rec.aborted) {
    eavesdrop(t, a.framework_msg, a.permuted_msg);
    t.append(Direction::kAliceToBob, kLabelRetry, {});
  }
  eavesdrop(t, rec.framework_msg, rec.permuted_msg);
  t.append(Direction::kAliceToBob, kLabelAnnounce, {Integer(rec.announced_index.index())});
}

inline Transcript eavesdrop(const FrameworkMsg& fm, const PermutedMsg& pm) {
  Transcript t;
  eavesdrop(t, fm, pm);
  return t;
}

inline Transcript eavesdrop(std::span<const BitExchangeRecord> records) {
  Transcript t;
  for (const auto& r : records) eavesdrop(t, r);
  return t;
}

inline Transcript eavesdrop(const MessageJob& job) { return eavesdrop(job.bit_records); }

/// One completed exchange as seen on the wire. `announced` is empty for a
/// bare first-level exchange.
struct ExchangeView {
  std::vector<Integer> sent;
  std::vector<Integer> returned;
  std::optional<std::uint64_t> announced;
};

/// Groups entries into exchanges, dropping ones that ended in a retry.
inline std::vector<ExchangeView> exchanges(const Transcript& t) {
  std::vector<ExchangeView> out;
  const auto& es = t.entries();
  std::size_t i = 0;
  auto fault = [](const std::string& why) { throw ProtocolFault("inconsistent transcript: " + why); };
  while (i < es.size()) {
    if (es[i].label != kLabelFramework) fault("expected " + std::string(kLabelFramework));
    if (i + 1 >= es.size() || es[i + 1].label != kLabelPermuted) {
      fault("framework without reply");
    }
    ExchangeView v{es[i].values, es[i + 1].values, std::nullopt};
    if (v.sent.size() != v.returned.size()) fault("reply length differs from framework");
    i += 2;
    if (i < es.size() && es[i].label == kLabelRetry) {
      ++i;
      continue;
    }
    if (i < es.size() && es[i].label == kLabelAnnounce) {
      if (es[i].values.size() != 1 || es[i].values[0] < 0) fault("bad announcement");
      v.announced = static_cast<std::uint64_t>(es[i].values[0]);
      ++i;
    }
    out.push_back(std::move(v));
  }
  return out;
}

using TranscriptHeader = std::vector<std::pair<std::string, std::string>>;

struct TranscriptFile {
  TranscriptHeader header;
  Transcript transcript;

  std::optional<std::string> get(std::string_view key) const {
    for (const auto& [k, v] : header) {
      if (k == key) return v;
    }
    return std::nullopt;
  }
};

inline constexpr std::string_view kTranscriptMagic = "dkey-transcript 1";

inline std::string_view direction_token(Direction d) {
  return d == Direction::kAliceToBob ? "A->B" : "B->A";
}

inline void write_transcript(std::ostream& os, const TranscriptFile& file) {
  os << kTranscriptMagic << '\n';
  for (const auto& [k, v] : file.header) os << k << '=' << v << '\n';
  os << "entries\n";
  for (const auto& e : file.transcript.entries()) {
    os << e.sequence << ' ' << direction_token(e.direction) << ' ' << e.label;
    for (const auto& v : e.values) os << ' ' << v;
    os << '\n';
  }
}

inline TranscriptFile read_transcript(std::istream& is) {
  TranscriptFile file;
  std::string line;
  std::size_t lineno = 0;
  if (!std::getline(is, line) || (++lineno, line != kTranscriptMagic)) {
    throw ParseError(1, "missing '" + std::string(kTranscriptMagic) + "' header");
  }
  bool in_entries = false;
  while (std::getline(is, line)) {
    ++lineno;
    if (line.empty()) continue;
    if (!in_entries) {
      if (line == "entries") {
        in_entries = true;
        continue;
      }
      const auto eq = line.find('=');
      if (eq == std::string::npos || eq == 0) throw ParseError(lineno, "expected key=value");
      file.header.emplace_back(line.substr(0, eq), line.substr(eq + 1));
      continue;
    }
    std::istringstream ls(line);
    std::string seq, dir, label, tok;
    if (!(ls >> seq >> dir >> label)) throw ParseError(lineno, "truncated entry");
    TranscriptEntry e;
    try {
      const Integer s = parse_decimal(seq);
      if (s < 0) throw UsageError("negative sequence");
      e.sequence = static_cast<std::uint64_t>(s);
      if (dir == "A->B") {
        e.direction = Direction::kAliceToBob;
      } else if (dir == "B->A") {
        e.direction = Direction::kBobToAlice;
      } else {
        throw UsageError("unknown direction '" + dir + "'");
      }
      e.label = label;
      while (ls >> tok) e.values.push_back(parse_decimal(tok));
      file.transcript.push_entry(std::move(e));
    } catch (const UsageError& err) {
      throw ParseError(lineno, err.what());
    }
  }
  if (!in_entries) throw ParseError(lineno, "missing 'entries' section");
  return file;
}

}  // namespace dkey

#endif  // DKEY_TRANSCRIPT_HPP
