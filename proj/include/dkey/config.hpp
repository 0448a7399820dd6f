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

// Session configuration and key material files. Both are flat key=value
// text; '#' starts a comment.

#ifndef DKEY_CONFIG_HPP
#define DKEY_CONFIG_HPP

#include <cstdint>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "dkey/algebra.hpp"
#include "dkey/level2.hpp"
#include "dkey/transcript.hpp"

namespace dkey {

inline constexpr std::size_t kMaxConfigFrameworkSize = 6;

struct SessionConfig {
  Integer p{1000003};
  std::size_t n = 4;
  std::size_t w = 4;
  std::size_t r = 1;
  std::uint64_t seed = 1;
  std::size_t max_retries = kDefaultRetryBudget;

  /// Throws UsageError on a hard violation.
  void validate() const {
    GroupParams check(p);
    if (n < 2 || n > kMaxConfigFrameworkSize) {
      throw UsageError("n must be in [2, " + std::to_string(kMaxConfigFrameworkSize) + "]");
    }
    if (Integer(n) + 1 >= p) throw UsageError("p must exceed n + 1");
    if (w < 2) throw UsageError("w must be >= 2");
    if (r == 0 || r % 2 == 0) throw UsageError("r must be odd");
    if (max_retries == 0) throw UsageError("max_retries must be positive");
  }

  /// Soft problems worth telling the user about.
  std::vector<std::string> warnings() const {
    std::vector<std::string> out;
    if (p <= Integer(factorial(n + 1)) * 100) {
      out.push_back("p <= (n+1)! * 100: spurious permutation matches will be frequent");
    }
    return out;
  }

  ProtocolOptions protocol_options() const {
    return {w, r, max_retries, kMaxConfigFrameworkSize};
  }

  std::uint64_t key_seed() const { return derive_seed(seed, 0); }
  std::uint64_t session_seed() const { return derive_seed(seed, 1); }

  TranscriptHeader to_header() const {
    return {{"p", to_decimal(p)},
            {"n", std::to_string(n)},
            {"w", std::to_string(w)},
            {"r", std::to_string(r)},
            {"seed", std::to_string(seed)},
            {"max_retries", std::to_string(max_retries)}};
  }
};

namespace detail {

inline std::uint64_t parse_u64(const std::string& text) {
  const Integer v = parse_decimal(text);
  if (v < 0 || v > std::numeric_limits<std::uint64_t>::max()) {
    throw UsageError("'" + text + "' is not a 64-bit unsigned integer");
  }
  return static_cast<std::uint64_t>(v);
}

}  // namespace detail

/// Applies one key=value setting; unknown keys throw UsageError.
inline void apply_setting(SessionConfig& cfg, const std::string& key, const std::string& value) {
  if (key == "p") {
    cfg.p = parse_decimal(value);
  } else if (key == "n") {
    cfg.n = detail::parse_u64(value);
  } else if (key == "w") {
    cfg.w = detail::parse_u64(value);
  } else if (key == "r") {
    cfg.r = detail::parse_u64(value);
  } else if (key == "seed") {
    cfg.seed = detail::parse_u64(value);
  } else if (key == "max_retries") {
    cfg.max_retries = detail::parse_u64(value);
  } else {
    throw UsageError("unknown config key '" + key + "'");
  }
}

namespace detail {

inline std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

}  // namespace detail

/// Reads key=value lines over `cfg`. Malformed lines throw ParseError.
inline void read_config(std::istream& is, SessionConfig& cfg) {
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    if (auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
    line = detail::trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ParseError(lineno, "expected key=value");
    try {
      apply_setting(cfg, detail::trim(line.substr(0, eq)), detail::trim(line.substr(eq + 1)));
    } catch (const UsageError& e) {
      throw ParseError(lineno, e.what());
    }
  }
}

inline SessionConfig config_from_header(const TranscriptFile& file) {
  SessionConfig cfg;
  for (const auto& [k, v] : file.header) {
    try {
      apply_setting(cfg, k, v);
    } catch (const UsageError& e) {
      throw ParseError(0, std::string("transcript header: ") + e.what());
    }
  }
  return cfg;
}

struct KeyMaterial {
  LockKeyF alice;
  LockKeyT bob;
};

inline KeyMaterial generate_keys(const SessionConfig& cfg) {
  cfg.validate();
  const GroupParams params(cfg.p);
  Rng rng(cfg.key_seed());
  auto f = sample_lock_f(params, cfg.n, rng);
  auto t = sample_lock_t(params, rng);
  return {std::move(f), std::move(t)};
}

inline constexpr std::string_view kKeysMagic = "dkey-keys 1";

inline void write_keys(std::ostream& os, const KeyMaterial& keys) {
  os << kKeysMagic << '\n';
  os << "p=" << keys.alice.params().modulus() << '\n';
  os << "n=" << keys.alice.arity() << '\n';
  os << "alice.f=";
  for (std::size_t i = 0; i < keys.alice.arity(); ++i) {
    os << (i ? " " : "") << keys.alice.exponents()[i];
  }
  os << '\n' << "bob.t=" << keys.bob.exponent() << '\n';
}

inline KeyMaterial read_keys(std::istream& is) {
  std::string line;
  std::size_t lineno = 1;
  if (!std::getline(is, line) || detail::trim(line) != kKeysMagic) {
    throw ParseError(1, "missing '" + std::string(kKeysMagic) + "' header");
  }
  std::optional<Integer> p;
  std::optional<std::size_t> n;
  std::vector<Integer> f;
  std::optional<Integer> t;
  std::size_t f_line = 0, t_line = 0;
  while (std::getline(is, line)) {
    ++lineno;
    line = detail::trim(line);
    if (line.empty() || line[0] == '#') continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ParseError(lineno, "expected key=value");
    const std::string key = line.substr(0, eq), value = line.substr(eq + 1);
    try {
      if (key == "p") {
        p = parse_decimal(value);
      } else if (key == "n") {
        n = detail::parse_u64(value);
      } else if (key == "alice.f") {
        std::istringstream vs(value);
        for (std::string tok; vs >> tok;) f.push_back(parse_decimal(tok));
        f_line = lineno;
      } else if (key == "bob.t") {
        t = parse_decimal(value);
        t_line = lineno;
      } else {
        throw UsageError("unknown key '" + key + "'");
      }
    } catch (const UsageError& e) {
      throw ParseError(lineno, e.what());
    }
  }
  if (!p || !n || f.empty() || !t) throw ParseError(lineno, "key file is incomplete");
  if (f.size() != *n) throw ParseError(f_line, "alice.f has wrong number of exponents");
  try {
    GroupParams params(*p);
    LockKeyF alice(params, std::move(f));
    try {
      return {std::move(alice), LockKeyT(params, *t)};
    } catch (const UsageError& e) {
      throw ParseError(t_line, e.what());
    }
  } catch (const UsageError& e) {
    throw ParseError(f_line, e.what());
  }
}

}  // namespace dkey

#endif  // DKEY_CONFIG_HPP
