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

// Acceptance suite. Prints one PASS/FAIL line per criterion and exits
// non-zero if any criterion fails. Tolerances are fixed below.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <set>
#include <sstream>
#include <string>

#include "dkey/dkey.hpp"
#include "oracle.hpp"

namespace {

using namespace dkey;

constexpr double kCommuteSeconds = 5.0;   // criterion 1 runtime cap
constexpr double kAmbiguousRate = 0.01;   // criterion 3
constexpr std::size_t kBitZeroTrials = 20000;  // criterion 4
constexpr double kSigmas = 3.0;           // criteria 4 and 7
constexpr double kAdvantageFloor = 0.95;  // criterion 7, "advantage close to 1"
constexpr double kEntropyTol = 1e-9;      // criterion 8
constexpr unsigned kPadBits = 12;         // criterion 8
constexpr std::size_t kSweepTranscripts = 20;  // criterion 9

const Integer kLargeP{1000003};
// Safe prime (p - 1 = 2q): every exponent class mod q has a single odd,
// invertible representative, so one exchange pins k down.
const Integer kSmallP{9887};

struct Verdict {
  bool pass;
  std::string detail;
};

std::vector<GroupElement> random_elements(const GroupParams& g, std::size_t count, Rng& rng) {
  std::vector<GroupElement> out;
  for (std::size_t i = 0; i < count; ++i) {
    out.emplace_back(uniform_integer(rng, 1, g.modulus() - 1), g);
  }
  return out;
}

std::vector<LockKeyT> all_t_keys(const GroupParams& g) {
  std::vector<LockKeyT> out;
  for (Integer k = 1; k <= g.modulus() - 2; ++k) {
    if (gcd(k, g.order()) == 1) out.emplace_back(g, k);
  }
  return out;
}

Verdict commutativity() {
  const auto start = std::chrono::steady_clock::now();
  std::size_t checks = 0, failures = 0;
  const GroupParams big(kLargeP);
  Rng rng(101);
  for (int i = 0; i < 1000; ++i) {
    const std::size_t n = uniform_u64(rng, 2, 6);
    const auto f = sample_lock_f(big, n, rng);
    const auto t = sample_lock_t(big, rng);
    const auto fw = sample_framework(big, f, rng);
    ++checks;
    failures += !check_commutes(f, t, fw);
  }
  const GroupParams small(Integer(11));
  for (const auto& t : all_t_keys(small)) {
    for (int a1 = 1; a1 <= 9; ++a1) {
      for (int a2 = 1; a2 <= 9; ++a2) {
        if (a1 == a2) continue;
        const LockKeyF f(small, {Integer(a1), Integer(a2)});
        for (int x = 1; x < 11; ++x) {
          for (int y = 1; y < 11; ++y) {
            ++checks;
            failures += !check_commutes(f, t, make_elements(small, {x, y}));
          }
        }
      }
    }
  }
  const double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  std::ostringstream d;
  d << checks << " checks, " << failures << " failures, " << secs << " s (cap "
    << kCommuteSeconds << " s)";
  return {failures == 0 && secs < kCommuteSeconds, d.str()};
}

Verdict homomorphism() {
  std::size_t checks = 0, failures = 0;
  const GroupParams small(Integer(11));
  for (const auto& t : all_t_keys(small)) {
    for (long long x = 1; x < 11; ++x) {
      const GroupElement ex(Integer(x), small);
      for (long long y = 1; y < 11; ++y) {
        const GroupElement ey(Integer(y), small);
        ++checks;
        failures += !(eval_t(t, ex) * eval_t(t, ey) == eval_t(t, ex * ey));
      }
      ++checks;
      failures += !(invert_t(t, eval_t(t, ex)) == ex);
    }
  }
  const GroupParams big(kLargeP);
  Rng rng(202);
  for (int i = 0; i < 1000; ++i) {
    const auto t = sample_lock_t(big, rng);
    const auto xy = random_elements(big, 2, rng);
    checks += 2;
    failures += !(eval_t(t, xy[0]) * eval_t(t, xy[1]) == eval_t(t, xy[0] * xy[1]));
    failures += !(invert_t(t, eval_t(t, xy[0])) == xy[0]);
  }
  std::ostringstream d;
  d << checks << " checks, " << failures << " failures";
  return {failures == 0, d.str()};
}

Verdict level1_recovery() {
  const GroupParams g(kLargeP);
  std::size_t wrong = 0, ambiguous = 0, not_found = 0;
  const std::size_t sessions = 1000;
  for (std::uint64_t s = 0; s < sessions; ++s) {
    Rng rng(derive_seed(303, s));
    const auto f = sample_lock_f(g, 4, rng);
    const auto t = sample_lock_t(g, rng);
    auto alice = alice_init(g, f, rng);
    const auto bob = bob_respond(t, alice.msg, rng);
    const auto rec = alice_recover(alice.state, bob.msg);
    switch (rec.outcome) {
      case RecoveryOutcome::kUnique: wrong += !(*rec.unique() == bob.state.sigma); break;
      case RecoveryOutcome::kAmbiguous: ++ambiguous; break;
      case RecoveryOutcome::kNotFound: ++not_found; break;
    }
  }
  const double rate = static_cast<double>(ambiguous) / sessions;
  std::ostringstream d;
  d << sessions << " sessions, " << wrong << " wrong, " << not_found << " not found, ambiguous rate "
    << rate << " (limit " << kAmbiguousRate << ")";
  return {wrong == 0 && not_found == 0 && rate < kAmbiguousRate, d.str()};
}

Verdict bit_zero_error_rate() {
  const GroupParams g(kLargeP);
  Rng rng(404);
  const auto f = sample_lock_f(g, 4, rng);
  const auto t = sample_lock_t(g, rng);
  std::size_t ones = 0;
  for (std::size_t i = 0; i < kBitZeroTrials; ++i) ones += transmit_bit(f, t, 0, g, rng).decoded;
  const double expected = 1.0 / 120.0;
  const double rate = static_cast<double>(ones) / kBitZeroTrials;
  const double sigma = std::sqrt(expected * (1 - expected) / kBitZeroTrials);
  std::ostringstream d;
  d << kBitZeroTrials << " exchanges, rate " << rate << ", expected " << expected << " +/- "
    << kSigmas * sigma;
  return {std::abs(rate - expected) <= kSigmas * sigma, d.str()};
}

Verdict end_to_end() {
  const bool encoding = text_to_binary("No") == "0100111001101111";
  const GroupParams g(kLargeP);
  Rng rng(505);
  const auto f = sample_lock_f(g, 4, rng);
  const auto t = sample_lock_t(g, rng);
  const auto job = send_message("No", f, t, g, ProtocolOptions{}, rng);
  const std::string back = receive_message(std::span<const BitExchangeRecord>(job.bit_records), 4);

  std::set<std::string> cls[3];
  for (unsigned v = 0; v < 16; ++v) {
    std::string s;
    for (int i = 3; i >= 0; --i) s.push_back(((v >> i) & 1) ? '1' : '0');
    cls[static_cast<int>(classify_word(Codeword::parse(s)))].insert(s);
  }
  const std::set<std::string> zero{"0011", "0101", "0110", "1001", "1010", "1100", "0000"};
  const std::set<std::string> one{"0001", "0010", "0100", "1000", "0111", "1011", "1101", "1110"};
  const bool classes = cls[static_cast<int>(WordClass::kZero)] == zero &&
                       cls[static_cast<int>(WordClass::kOne)] == one &&
                       cls[static_cast<int>(WordClass::kDecoy)] == std::set<std::string>{"1111"};
  std::ostringstream d;
  d << "encoding " << (encoding ? "ok" : "WRONG") << ", round trip \"" << back << "\" over "
    << job.bit_records.size() << " exchanges, classes " << cls[0].size() << "/" << cls[1].size()
    << "/" << cls[2].size();
  return {encoding && back == "No" && classes, d.str()};
}

Verdict specializations() {
  const GroupParams big(kLargeP);
  Rng rng(606);
  std::size_t failures = 0, checks = 0;
  for (int i = 0; i < 100; ++i) {
    const auto a = UnaryOperator::power(sample_lock_t(big, rng));
    const auto b = UnaryOperator::power(sample_lock_t(big, rng));
    const auto s = Payload::tagged(random_elements(big, uniform_u64(rng, 1, 5), rng), PartTag::kSafe);
    ++checks;
    failures += !(run_public_key(a, b, s) == run_double_key(a, b, s, Payload{}));
  }
  const GroupParams small(Integer(11));
  for (const auto& t : all_t_keys(small)) {
    const auto e = UnaryOperator::power(t);
    for (long long x = 1; x < 11; ++x) {
      const auto m = Payload::tagged(make_elements(small, {x}), PartTag::kLetter);
      checks += 2;
      failures += !(run_secret_key(e, m).recovered == m);
      failures += !check_secret_specialization(e, m);
    }
  }
  std::ostringstream d;
  d << checks << " checks, " << failures << " failures";
  return {failures == 0, d.str()};
}

Verdict brute_force_attack() {
  const GroupParams g(kSmallP);
  const std::size_t trials = 100;
  std::size_t recovered = 0;
  for (std::size_t i = 0; i < trials; ++i) {
    Rng rng(derive_seed(707, i));
    const auto f = sample_lock_f(g, 4, rng);
    const auto t = sample_lock_t(g, rng);
    const auto rec = transmit_bit(f, t, uniform_bit(rng), g, rng);
    const auto view = exchanges(eavesdrop(std::span(&rec, 1))).back();
    BudgetMeter meter(AttackBudget::unlimited());
    const auto a = brute_force_exchange(view, g, meter);
    const L1Hypothesis truth{t.exponent(), rec.bob_sigma.index()};
    recovered += a.keys.size() == 1 && a.keys.confirmed.front() == truth;
  }

  DistinguisherConfig cfg{kSmallP, 4, 400};
  cfg.seed = 708;
  const auto full = distinguisher_experiment(cfg);
  cfg.budget = AttackBudget::of(0);
  const auto starved = distinguisher_experiment(cfg);
  // Under no information the guess is a fair coin: sd of 2*acc - 1 is 1/sqrt(N).
  const double null_sd = 1.0 / std::sqrt(static_cast<double>(cfg.trials));

  std::ostringstream d;
  d << "p=" << kSmallP << ", key recovered " << recovered << "/" << trials << ", advantage " << full.advantage
    << " (floor " << kAdvantageFloor << "), starved advantage " << starved.advantage
    << " (limit " << kSigmas * null_sd << ")";
  return {recovered == trials && full.advantage >= kAdvantageFloor &&
              starved.advantage <= kSigmas * null_sd,
          d.str()};
}

std::vector<std::vector<double>> random_joint(Rng& rng, std::size_t r, std::size_t c) {
  std::vector<std::vector<double>> m(r, std::vector<double>(c));
  double total = 0.0;
  for (auto& row : m) {
    for (auto& v : row) total += v = static_cast<double>(uniform_u64(rng, 0, 1000));
  }
  for (auto& row : m) {
    for (auto& v : row) v /= total;
  }
  return m;
}

Verdict entropy_identities() {
  Rng rng(808);
  double worst = 0.0;
  for (int i = 0; i < 100; ++i) {
    const JointDistribution xb(random_joint(rng, uniform_u64(rng, 2, 6), uniform_u64(rng, 2, 6)));
    const JointDistribution xe(random_joint(rng, uniform_u64(rng, 2, 6), xb.cols()));
    const double loss = loss_for_perfect_secrecy(xe);
    worst = std::max(worst, std::abs(bob_information_with_loss(xb, xe) -
                                     bob_information_with_explicit_loss(xb, loss)));
    worst = std::max(worst, std::abs(eve_information_with_loss(xe, loss)));
  }
  double pad = 0.0;
  for (unsigned bits = 1; bits <= kPadBits; ++bits) {
    pad = std::max(pad, mutual_information(JointDistribution(oracle::one_time_pad_joint(bits))));
  }
  std::ostringstream d;
  d << "max identity gap " << worst << ", max pad I(M;C) " << pad << " up to " << kPadBits
    << " bits (tol " << kEntropyTol << ")";
  return {worst <= kEntropyTol && pad <= kEntropyTol, d.str()};
}

std::vector<oracle::u64> u64s(const std::vector<Integer>& xs) {
  std::vector<oracle::u64> out;
  for (const auto& x : xs) out.push_back(static_cast<oracle::u64>(x));
  return out;
}

Verdict budget_sweep() {
  const GroupParams g(Integer(1009));
  const std::vector<std::uint64_t> budgets{0, 1, 24, 100, 1000, 5000, 20000, 100000, 1000000};
  std::size_t non_monotone = 0, oracle_mismatch = 0, full_mismatch = 0;
  for (std::size_t i = 0; i < kSweepTranscripts; ++i) {
    Rng rng(derive_seed(909, i));
    const auto f = sample_lock_f(g, 3, rng);
    const auto t = sample_lock_t(g, rng);
    const auto job = send_message("a", f, t, g, ProtocolOptions{}, rng);
    const Transcript tr = eavesdrop(job);
    const auto views = exchanges(tr);
    const auto message_space = FiniteDistribution::uniform(std::size_t{1} << 8);

    std::vector<AttackBudget> sweep;
    for (auto b : budgets) sweep.push_back(AttackBudget::of(b));
    sweep.push_back(AttackBudget::unlimited());
    const auto rep = unbreakability_report(message_space, tr, g, Strategy::kBruteForce, sweep);
    for (std::size_t r = 1; r < rep.rows.size(); ++r) {
      non_monotone += rep.rows[r].entropy_d > rep.rows[r - 1].entropy_d ||
                      rep.rows[r].information < rep.rows[r - 1].information;
    }

    for (std::size_t r = 0; r < sweep.size(); ++r) {
      std::optional<std::uint64_t> left;
      if (!sweep[r].is_unlimited()) left = sweep[r].limit();
      const oracle::u64 mf = oracle::factorial(views.front().sent.size());
      double h = 0.0;
      for (const auto& v : views) {
        const auto o = oracle::bit_options_under_budget(1009, u64s(v.sent), u64s(v.returned),
                                                        *v.announced, left);
        h += std::log2(static_cast<double>(o.zero + o.one));
        if (left) {
          // Every exchange is charged its full hypothesis count until the budget runs out.
          std::uint64_t ks = 0;
          for (oracle::u64 k = 1; k + 1 < 1009; ++k) ks += std::gcd(k, oracle::u64{1008}) == 1;
          *left -= std::min<std::uint64_t>(*left, ks * mf);
        }
      }
      const double oracle_i = entropy(message_space) - h;
      if (rep.rows[r].information != oracle_i) {
        ++oracle_mismatch;
        if (sweep[r].is_unlimited()) ++full_mismatch;
      }
    }
  }
  std::ostringstream d;
  d << kSweepTranscripts << " transcripts x " << budgets.size() + 1 << " budgets, "
    << non_monotone << " monotonicity violations, " << oracle_mismatch
    << " oracle mismatches (" << full_mismatch << " at full enumeration)";
  return {non_monotone == 0 && oracle_mismatch == 0, d.str()};
}

}  // namespace

int main() {
  struct Criterion {
    int id;
    const char* name;
    std::function<Verdict()> run;
  };
  const std::vector<Criterion> criteria{
      {1, "commutativity", commutativity},
      {2, "homomorphism", homomorphism},
      {3, "level-1 recovery", level1_recovery},
      {4, "level-2 bit-0 error rate", bit_zero_error_rate},
      {5, "end-to-end encoding", end_to_end},
      {6, "specialization identities", specializations},
      {7, "brute-force attack", brute_force_attack},
      {8, "entropy identities", entropy_identities},
      {9, "budget sweep", budget_sweep},
  };
  int failed = 0;
  for (const auto& c : criteria) {
    Verdict v;
    try {
      v = c.run();
    } catch (const std::exception& e) {
      v = {false, std::string("exception: ") + e.what()};
    }
    std::printf("[%s] %d %s: %s\n", v.pass ? "PASS" : "FAIL", c.id, c.name, v.detail.c_str());
    std::fflush(stdout);
    failed += !v.pass;
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failed,
              criteria.size());
  return failed == 0 ? 0 : 1;
}
