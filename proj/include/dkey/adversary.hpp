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
/// Passive attacker. Everything here reads a Transcript and nothing else.
///
/// A first-level exchange is attacked by searching Bob's key space: a
/// hypothesis is a pair (k, s) of T-exponent and permutation rank, and it is
/// consistent when returned[j] == sent[s_j]^k for every j. Knowing the
/// surviving permutations is enough to read a second-level bit, since Bob
/// reads 1 exactly when Alice's announced rank equals his permutation.
///
/// Attacks run under a budget of elementary operations. Hypotheses that were
/// never examined are never discarded, so the true key always survives and
/// the surviving set can only shrink as the budget grows. The decipherer's
/// output D is the set of bit strings Bob could have read given the
/// surviving hypotheses, weighted uniformly, and
///
///     I_k(M; C) = H(M) - H(D).

#ifndef DKEY_ADVERSARY_HPP
#define DKEY_ADVERSARY_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <numeric>
#include <optional>
#include <string>
#include <string_view>
#include <thread>
#include <vector>

#include "dkey/entropy.hpp"
#include "dkey/transcript.hpp"

namespace dkey {

enum class Strategy {
  kRandomGuess,  // examines nothing
  kBruteForce,   // every (k, s) in order, one operation each
  kDiscreteLog,  // tabulates powers of the first sent element; small p only
};

inline std::string_view strategy_name(Strategy s) {
  switch (s) {
    case Strategy::kRandomGuess: return "random-guess";
    case Strategy::kBruteForce: return "brute-force";
    case Strategy::kDiscreteLog: return "discrete-log";
  }
  return "?";
}

inline Strategy parse_strategy(std::string_view name) {
  for (Strategy s : {Strategy::kRandomGuess, Strategy::kBruteForce, Strategy::kDiscreteLog}) {
    if (strategy_name(s) == name) return s;
  }
  throw UsageError("unknown attack strategy '" + std::string(name) + "'");
}

/// Cap on elementary attack operations; unlimited means run to completion.
class AttackBudget {
 public:
  static AttackBudget unlimited() { return AttackBudget(std::nullopt); }
  static AttackBudget of(std::uint64_t ops) { return AttackBudget(ops); }

  bool is_unlimited() const noexcept { return !limit_.has_value(); }
  std::uint64_t limit() const noexcept {
    return limit_.value_or(std::numeric_limits<std::uint64_t>::max());
  }

  std::string str() const { return limit_ ? std::to_string(*limit_) : "inf"; }

  friend bool operator==(const AttackBudget&, const AttackBudget&) = default;

 private:
  explicit AttackBudget(std::optional<std::uint64_t> limit) : limit_(limit) {}
  std::optional<std::uint64_t> limit_;
};

class BudgetMeter {
 public:
  explicit BudgetMeter(const AttackBudget& budget) : remaining_(budget.limit()) {}

  std::uint64_t available() const noexcept { return remaining_; }
  std::uint64_t spent() const noexcept { return spent_; }

  void spend(std::uint64_t ops) {
    remaining_ -= ops;
    spent_ += ops;
  }

 private:
  std::uint64_t remaining_;
  std::uint64_t spent_ = 0;
};

struct L1Hypothesis {
  Integer t_exponent;
  std::uint64_t sigma;

  friend bool operator==(const L1Hypothesis&, const L1Hypothesis&) = default;
};

/// Uniformly weighted hypotheses: those examined and found consistent, plus
/// a count of those never examined.
template <class H>
struct CandidateSet {
  std::vector<H> confirmed;
  Integer unexplored = 0;

  Integer size() const { return Integer(confirmed.size()) + unexplored; }
  double entropy_bits() const { return std::log2(size().template convert_to<double>()); }
};

/// Attack outcome for one exchange.
struct ExchangeAnalysis {
  std::uint64_t evaluations = 0;
  bool complete = false;
  CandidateSet<L1Hypothesis> keys;
  bool all_sigmas = true;
  std::vector<std::uint64_t> sigmas;  // sorted; valid when !all_sigmas
  std::optional<std::uint64_t> announced;
  bool one_possible = true;
  bool zero_possible = true;

  std::size_t bit_options() const {
    return static_cast<std::size_t>(one_possible) + static_cast<std::size_t>(zero_possible);
  }
};

namespace detail {

/// Ranks (ascending) of every permutation s with returned[j] == images[s_j].
inline std::vector<std::uint64_t> matching_sigmas(const std::vector<Integer>& images,
                                                  const std::vector<Integer>& returned) {
  const std::size_t m = images.size();
  std::vector<std::vector<std::size_t>> options(m);
  for (std::size_t j = 0; j < m; ++j) {
    for (std::size_t i = 0; i < m; ++i) {
      if (images[i] == returned[j]) options[j].push_back(i);
    }
    if (options[j].empty()) return {};
  }
  std::vector<std::uint64_t> out;
  std::vector<std::size_t> perm(m);
  std::vector<bool> used(m, false);
  auto rec = [&](auto&& self, std::size_t j) -> void {
    if (j == m) {
      out.push_back(perm_rank(perm).index());
      return;
    }
    for (std::size_t i : options[j]) {
      if (used[i]) continue;
      used[i] = true;
      perm[j] = i;
      self(self, j + 1);
      used[i] = false;
    }
  };
  rec(rec, 0);
  return out;
}

inline bool sigma_consistent(const std::vector<Integer>& images,
                             const std::vector<Integer>& returned,
                             const std::vector<std::size_t>& order) {
  for (std::size_t j = 0; j < order.size(); ++j) {
    if (images[order[j]] != returned[j]) return false;
  }
  return true;
}

inline void check_view(const ExchangeView& v, const GroupParams& params) {
  if (v.sent.size() < 3 || v.sent.size() != v.returned.size()) {
    throw ProtocolFault("inconsistent transcript: malformed exchange");
  }
  for (const auto* list : {&v.sent, &v.returned}) {
    for (const auto& x : *list) {
      if (!params.contains(x)) throw ProtocolFault("inconsistent transcript: value outside group");
    }
  }
}

/// Fills sigma set and bit options once the key candidates are known.
inline void finish_analysis(ExchangeAnalysis& a, std::size_t m) {
  if (a.complete && a.keys.confirmed.empty()) {
    throw ProtocolFault("inconsistent transcript: no key explains the exchange");
  }
  if (!a.all_sigmas) {
    std::sort(a.sigmas.begin(), a.sigmas.end());
    a.sigmas.erase(std::unique(a.sigmas.begin(), a.sigmas.end()), a.sigmas.end());
  }
  if (!a.announced) return;
  const std::uint64_t ann = *a.announced;
  if (a.all_sigmas) {
    a.one_possible = ann < factorial(m);
    a.zero_possible = factorial(m) > 1;
  } else {
    a.one_possible = std::binary_search(a.sigmas.begin(), a.sigmas.end(), ann);
    a.zero_possible = a.sigmas.size() > (a.one_possible ? 1u : 0u);
  }
}

}  // namespace detail

/// Size of Bob's key space for one exchange: phi(p - 1) exponents times
/// (n+1)! permutations.
inline Integer level1_hypothesis_count(const GroupParams& params, std::size_t m) {
  return euler_phi(params.order()) * Integer(factorial(m));
}

/// Exhaustive (k, s) search in ascending order of k, then rank.
inline ExchangeAnalysis brute_force_exchange(const ExchangeView& v, const GroupParams& params,
                                             BudgetMeter& meter) {
  detail::check_view(v, params);
  const std::size_t m = v.sent.size();
  const std::uint64_t mf = factorial(m);
  const Integer& p = params.modulus();
  const Integer order = params.order();
  const Integer total = level1_hypothesis_count(params, m);

  ExchangeAnalysis a;
  a.announced = v.announced;
  std::vector<Integer> images(m, Integer(1));
  Integer evaluated = 0;
  std::optional<std::uint64_t> partial_stop;  // first unexamined rank in a cut block
  bool ran_out = false;
  for (Integer k = 1; k <= p - 2; ++k) {
    for (std::size_t i = 0; i < m; ++i) images[i] = (images[i] * v.sent[i]) % p;
    if (gcd(k, order) != 1) continue;
    const std::uint64_t avail = meter.available();
    if (avail == 0) {
      ran_out = true;
      break;
    }
    if (avail >= mf) {
      for (auto s : detail::matching_sigmas(images, v.returned)) a.keys.confirmed.push_back({k, s});
      meter.spend(mf);
      evaluated += mf;
      continue;
    }
    std::vector<std::size_t> ord(m);
    std::iota(ord.begin(), ord.end(), std::size_t{0});
    for (std::uint64_t r = 0; r < avail; ++r) {
      if (detail::sigma_consistent(images, v.returned, ord)) a.keys.confirmed.push_back({k, r});
      std::next_permutation(ord.begin(), ord.end());
    }
    meter.spend(avail);
    evaluated += avail;
    partial_stop = avail;
    ran_out = true;
    break;
  }
  a.evaluations = static_cast<std::uint64_t>(evaluated);
  a.complete = !ran_out;
  a.keys.unexplored = total - evaluated;

  // Every unexplored hypothesis beyond the cut block could carry any rank.
  const Integer beyond_block =
      a.keys.unexplored - (partial_stop ? Integer(mf - *partial_stop) : Integer(0));
  a.all_sigmas = beyond_block > 0;
  if (!a.all_sigmas) {
    for (const auto& h : a.keys.confirmed) a.sigmas.push_back(h.sigma);
    if (partial_stop) {
      for (std::uint64_t r = *partial_stop; r < mf; ++r) a.sigmas.push_back(r);
    }
  }
  detail::finish_analysis(a, m);
  return a;
}

/// Tabulates x^e for the first sent element x, one operation per entry, then
/// checks only the exponents that send x into the returned list, one
/// operation per exponent.
inline ExchangeAnalysis discrete_log_exchange(const ExchangeView& v, const GroupParams& params,
                                              BudgetMeter& meter) {
  detail::check_view(v, params);
  const std::size_t m = v.sent.size();
  const std::uint64_t mf = factorial(m);
  const Integer& p = params.modulus();
  const Integer order = params.order();
  const Integer total = level1_hypothesis_count(params, m);

  ExchangeAnalysis a;
  a.announced = v.announced;
  a.keys.unexplored = total;

  std::map<Integer, Integer> table;  // x^e -> e, e in [0, ord(x))
  Integer power = 1;
  Integer e = 0;
  for (;;) {
    if (meter.available() == 0) {
      detail::finish_analysis(a, m);
      return a;
    }
    meter.spend(1);
    ++a.evaluations;
    table.emplace(power, e);
    power = (power * v.sent[0]) % p;
    ++e;
    if (power == 1) break;
  }
  const Integer element_order = e;

  std::vector<Integer> ks;
  for (const auto& y : v.returned) {
    auto it = table.find(y);
    if (it == table.end()) continue;
    for (Integer k = it->second; k <= p - 2; k += element_order) {
      if (k >= 1 && gcd(k, order) == 1) ks.push_back(k);
    }
  }
  std::sort(ks.begin(), ks.end());
  ks.erase(std::unique(ks.begin(), ks.end()), ks.end());

  std::size_t checked = 0;
  for (; checked < ks.size(); ++checked) {
    if (meter.available() == 0) break;
    meter.spend(1);
    ++a.evaluations;
    std::vector<Integer> images;
    for (const auto& s : v.sent) images.push_back(mod_pow(s, ks[checked], p));
    for (auto s : detail::matching_sigmas(images, v.returned)) {
      a.keys.confirmed.push_back({ks[checked], s});
    }
  }
  const std::size_t unchecked = ks.size() - checked;
  a.complete = unchecked == 0;
  a.keys.unexplored = Integer(unchecked) * mf;
  a.all_sigmas = unchecked > 0;
  if (!a.all_sigmas) {
    for (const auto& h : a.keys.confirmed) a.sigmas.push_back(h.sigma);
  }
  detail::finish_analysis(a, m);
  return a;
}

inline ExchangeAnalysis analyze_exchange(const ExchangeView& v, const GroupParams& params,
                                         Strategy strategy, BudgetMeter& meter) {
  switch (strategy) {
    case Strategy::kBruteForce: return brute_force_exchange(v, params, meter);
    case Strategy::kDiscreteLog: return discrete_log_exchange(v, params, meter);
    case Strategy::kRandomGuess: break;
  }
  detail::check_view(v, params);
  ExchangeAnalysis a;
  a.announced = v.announced;
  a.keys.unexplored = level1_hypothesis_count(params, v.sent.size());
  detail::finish_analysis(a, v.sent.size());
  return a;
}

/// Key candidates for the first exchange of `t`.
inline CandidateSet<L1Hypothesis> brute_force_level1(const Transcript& t, const GroupParams& params,
                                                     const AttackBudget& budget) {
  const auto views = exchanges(t);
  if (views.empty()) throw UsageError("transcript holds no first-level exchange");
  BudgetMeter meter(budget);
  return brute_force_exchange(views.front(), params, meter).keys;
}

/// D = Delta_k(C): the bit strings (one bit per announced exchange) that
/// Bob could have read, as a product of per-position options.
struct DecipherResult {
  Strategy strategy;
  AttackBudget budget;
  std::uint64_t evaluations = 0;
  std::vector<ExchangeAnalysis> exchanges;

  Integer candidate_count() const {
    Integer c = 1;
    for (const auto& x : exchanges) c *= x.bit_options();
    return c;
  }

  double entropy_bits() const {
    double h = 0.0;
    for (const auto& x : exchanges) h += std::log2(static_cast<double>(x.bit_options()));
    return h;
  }

  std::optional<std::string> unique() const {
    std::string bits;
    for (const auto& x : exchanges) {
      if (x.bit_options() != 1) return std::nullopt;
      bits.push_back(x.one_possible ? '1' : '0');
    }
    return bits;
  }

  /// All candidates in lexicographic order; throws when there are more
  /// than `limit`.
  std::vector<std::string> enumerate(std::size_t limit = 1u << 20) const {
    if (candidate_count() > limit) throw UsageError("candidate set too large to enumerate");
    std::vector<std::string> out{""};
    for (const auto& x : exchanges) {
      std::vector<std::string> next;
      for (const auto& prefix : out) {
        if (x.zero_possible) next.push_back(prefix + '0');
        if (x.one_possible) next.push_back(prefix + '1');
      }
      out = std::move(next);
    }
    return out;
  }
};

/// Runs `strategy` over every announced exchange in order; the budget is
/// shared, so later exchanges only get what earlier ones left over.
inline DecipherResult universal_decipher_k(const Transcript& t, const GroupParams& params,
                                           const AttackBudget& budget, Strategy strategy) {
  DecipherResult r{strategy, budget, 0, {}};
  BudgetMeter meter(budget);
  for (const auto& v : exchanges(t)) {
    if (!v.announced) continue;
    r.exchanges.push_back(analyze_exchange(v, params, strategy, meter));
  }
  r.evaluations = meter.spent();
  return r;
}

/// I_k(M; C) = H(M) - H(Delta_k(C)); negative values are legitimate.
inline double compute_I_k(const FiniteDistribution& message_space, const Transcript& t,
                          const GroupParams& params, const AttackBudget& budget,
                          Strategy strategy) {
  return entropy(message_space) -
         universal_decipher_k(t, params, budget, strategy).entropy_bits();
}

struct SweepRow {
  AttackBudget budget;
  std::uint64_t evaluations;
  Integer candidates;
  double entropy_d;
  double information;
};

struct UnbreakabilityReport {
  double message_entropy;
  std::vector<SweepRow> rows;
  bool monotone;
  /// I at infinite budget is an algorithmic limit; only the sampled budgets
  /// above were measured.
  static constexpr std::string_view kCaveat =
      "I_inf not decidable: only the sampled budgets are reported";
};

inline UnbreakabilityReport unbreakability_report(const FiniteDistribution& message_space,
                                                  const Transcript& t,
                                                  const GroupParams& params, Strategy strategy,
                                                  const std::vector<AttackBudget>& sweep) {
  UnbreakabilityReport rep{entropy(message_space), {}, true};
  for (const auto& b : sweep) {
    const auto d = universal_decipher_k(t, params, b, strategy);
    const double hd = d.entropy_bits();
    rep.rows.push_back({b, d.evaluations, d.candidate_count(), hd, rep.message_entropy - hd});
  }
  for (std::size_t i = 1; i < rep.rows.size(); ++i) {
    const bool ordered = rep.rows[i - 1].budget.limit() <= rep.rows[i].budget.limit();
    if (ordered && rep.rows[i].entropy_d > rep.rows[i - 1].entropy_d) rep.monotone = false;
  }
  return rep;
}

struct DistinguisherConfig {
  Integer modulus;
  std::size_t n = 4;
  std::size_t trials = 1000;
  Strategy strategy = Strategy::kBruteForce;
  AttackBudget budget = AttackBudget::unlimited();  // per trial
  std::uint64_t seed = 0;
  std::size_t threads = 0;  // 0: hardware concurrency
};

struct TrialRecord {
  std::size_t trial;
  int truth;
  int guess;
  std::uint64_t budget_spent;
};

struct DistinguisherReport {
  std::vector<TrialRecord> records;
  std::size_t correct = 0;
  double accuracy = 0.0;
  double advantage = 0.0;   // |2 * accuracy - 1|
  double std_error = 0.0;   // of the advantage
  double ci_low = 0.0;      // 95% normal interval, clipped to [0, 1]
  double ci_high = 0.0;
};

/// One trial: fresh keys, a uniformly random bit, Eve's guess. Eve guesses
/// the forced value when only one bit survives and flips a coin otherwise.
inline TrialRecord distinguisher_trial(const GroupParams& params, const DistinguisherConfig& cfg,
                                       std::size_t trial) {
  Rng rng(derive_seed(cfg.seed, 2 * trial));
  Rng eve_rng(derive_seed(cfg.seed, 2 * trial + 1));
  const auto key_f = sample_lock_f(params, cfg.n, rng);
  const auto key_t = sample_lock_t(params, rng);
  const int bit = uniform_bit(rng);
  const auto rec = transmit_bit(key_f, key_t, bit, params, rng);
  const auto view = exchanges(eavesdrop(std::span(&rec, 1))).back();
  BudgetMeter meter(cfg.budget);
  const auto a = analyze_exchange(view, params, cfg.strategy, meter);
  int guess;
  if (a.bit_options() == 1) {
    guess = a.one_possible ? 1 : 0;
  } else {
    guess = uniform_bit(eve_rng);
  }
  return {trial, bit, guess, meter.spent()};
}

inline DistinguisherReport distinguisher_experiment(const DistinguisherConfig& cfg) {
  if (cfg.trials == 0) throw UsageError("need at least one trial");
  const GroupParams params(cfg.modulus);
  DistinguisherReport rep;
  rep.records.resize(cfg.trials);

  std::size_t workers = cfg.threads ? cfg.threads : std::max(1u, std::thread::hardware_concurrency());
  workers = std::min(workers, cfg.trials);
  std::vector<std::exception_ptr> errors(workers);
  {
    std::vector<std::jthread> pool;
    for (std::size_t w = 0; w < workers; ++w) {
      pool.emplace_back([&, w] {
        try {
          for (std::size_t i = w; i < cfg.trials; i += workers) {
            rep.records[i] = distinguisher_trial(params, cfg, i);
          }
        } catch (...) {
          errors[w] = std::current_exception();
        }
      });
    }
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }

  for (const auto& r : rep.records) rep.correct += r.truth == r.guess;
  const double n = static_cast<double>(cfg.trials);
  rep.accuracy = static_cast<double>(rep.correct) / n;
  rep.advantage = std::abs(2.0 * rep.accuracy - 1.0);
  rep.std_error = 2.0 * std::sqrt(rep.accuracy * (1.0 - rep.accuracy) / n);
  rep.ci_low = std::max(0.0, rep.advantage - 1.96 * rep.std_error);
  rep.ci_high = std::min(1.0, rep.advantage + 1.96 * rep.std_error);
  return rep;
}

}  // namespace dkey

#endif  // DKEY_ADVERSARY_HPP
