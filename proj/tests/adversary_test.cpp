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

#include <numeric>

#include <gtest/gtest.h>

#include "dkey/adversary.hpp"
#include "oracle.hpp"

namespace dkey {
namespace {

const GroupParams kP11{Integer(11)};

std::vector<oracle::u64> u64s(const std::vector<Integer>& xs) {
  std::vector<oracle::u64> out;
  for (const auto& x : xs) out.push_back(static_cast<oracle::u64>(x));
  return out;
}

Transcript micro_transcript() {
  Transcript t;
  t.append(Direction::kAliceToBob, kLabelFramework, {Integer(2), Integer(3), Integer(7)});
  t.append(Direction::kBobToAlice, kLabelPermuted, {Integer(8), Integer(5), Integer(2)});
  t.append(Direction::kAliceToBob, kLabelAnnounce, {Integer(0)});
  return t;
}

struct Session {
  GroupParams params;
  LockKeyF f;
  LockKeyT t;
  MessageJob job;
  Transcript transcript;
};

Session make_session(std::uint64_t seed, const Integer& p, std::size_t n, std::string_view text) {
  const GroupParams g(p);
  Rng rng(seed);
  auto f = sample_lock_f(g, n, rng);
  auto t = sample_lock_t(g, rng);
  auto job = send_message(text, f, t, g, ProtocolOptions{}, rng);
  Transcript tr = eavesdrop(job);
  return {g, std::move(f), std::move(t), std::move(job), std::move(tr)};
}

TEST(Strategy, Names) {
  for (Strategy s : {Strategy::kRandomGuess, Strategy::kBruteForce, Strategy::kDiscreteLog}) {
    EXPECT_EQ(parse_strategy(strategy_name(s)), s);
  }
  EXPECT_THROW(parse_strategy("relation-search"), UsageError);
}

TEST(Budget, Display) {
  EXPECT_EQ(AttackBudget::unlimited().str(), "inf");
  EXPECT_EQ(AttackBudget::of(12).str(), "12");
  EXPECT_TRUE(AttackBudget::unlimited().is_unlimited());
}

TEST(BruteForce, MicroExampleIsUnique) {
  const auto c = brute_force_level1(micro_transcript(), kP11, AttackBudget::unlimited());
  ASSERT_EQ(c.size(), 1);
  EXPECT_EQ(c.confirmed.front(), (L1Hypothesis{Integer(3), 0}));
  EXPECT_NEAR(c.entropy_bits(), 0.0, 1e-12);
  EXPECT_EQ(oracle::consistent_keys(11, {2, 3, 7}, {8, 5, 2}),
            (std::vector<std::pair<oracle::u64, oracle::u64>>{{3, 0}}));
}

TEST(BruteForce, ZeroBudgetKeepsWholeSpace) {
  const auto c = brute_force_level1(micro_transcript(), kP11, AttackBudget::of(0));
  EXPECT_TRUE(c.confirmed.empty());
  EXPECT_EQ(c.size(), 24);
  EXPECT_EQ(level1_hypothesis_count(kP11, 3), 24);
}

TEST(BruteForce, PartialBudgetNeverDropsUnexamined) {
  for (std::uint64_t b = 0; b <= 24; ++b) {
    const auto c = brute_force_level1(micro_transcript(), kP11, AttackBudget::of(b));
    // k = 3 is the second exponent in order, so the truth is examined at op 7.
    EXPECT_EQ(c.size(), b < 7 ? Integer(24 - b) : Integer(1 + 24 - std::min<std::uint64_t>(b, 24)));
    EXPECT_GE(c.size(), 1);
  }
}

TEST(BruteForce, TruthAlwaysSurvives) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto s = make_session(seed, Integer(1009), 3, "k");
    const auto views = exchanges(s.transcript);
    for (std::size_t i = 0; i < views.size(); ++i) {
      BudgetMeter meter(AttackBudget::unlimited());
      const auto a = brute_force_exchange(views[i], s.params, meter);
      const L1Hypothesis truth{s.t.exponent(), s.job.bit_records[i].bob_sigma.index()};
      EXPECT_NE(std::find(a.keys.confirmed.begin(), a.keys.confirmed.end(), truth),
                a.keys.confirmed.end());
      EXPECT_TRUE(a.complete);
      EXPECT_EQ(a.evaluations, static_cast<std::uint64_t>(level1_hypothesis_count(s.params, 4)));
    }
  }
}

TEST(BruteForce, MatchesOracleKeySet) {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const auto s = make_session(seed, Integer(101), 2, "");
    Rng rng(seed);
    const auto alice = alice_init(s.params, s.f, rng);
    const auto bob = bob_respond(s.t, alice.msg, rng);
    const auto tr = eavesdrop(alice.msg, bob.msg);
    const auto c = brute_force_level1(tr, s.params, AttackBudget::unlimited());
    const auto view = exchanges(tr).front();
    const auto expected = oracle::consistent_keys(101, u64s(view.sent), u64s(view.returned));
    ASSERT_EQ(c.confirmed.size(), expected.size());
    for (std::size_t i = 0; i < expected.size(); ++i) {
      EXPECT_EQ(c.confirmed[i].t_exponent, expected[i].first);
      EXPECT_EQ(c.confirmed[i].sigma, expected[i].second);
    }
  }
}

// When every sent element lies in a proper subgroup of order d, exponents
// congruent mod d act identically on the transcript: the permutation is still
// unique but k is only known mod d.
TEST(BruteForce, SubgroupAmbiguityOnlyModuloOrder) {
  const GroupParams g(Integer(9973));
  std::size_t ambiguous = 0;
  for (std::size_t i = 0; i < 100; ++i) {
    Rng rng(derive_seed(707, i));
    const auto f = sample_lock_f(g, 4, rng);
    const auto t = sample_lock_t(g, rng);
    const auto rec = transmit_bit(f, t, uniform_bit(rng), g, rng);
    const auto view = exchanges(eavesdrop(std::span(&rec, 1))).back();
    BudgetMeter meter(AttackBudget::unlimited());
    const auto a = brute_force_exchange(view, g, meter);
    if (a.keys.size() == 1) continue;
    ++ambiguous;
    const auto sent = u64s(view.sent);
    oracle::u64 d = 1;
    for (auto x : sent) {
      oracle::u64 ord = 1;
      for (oracle::u64 y = x; y != 1; y = oracle::mulmod(y, x, 9973)) ++ord;
      d = std::lcm(d, ord);
    }
    EXPECT_LT(d, 9972u);
    for (const auto& h : a.keys.confirmed) {
      EXPECT_EQ(h.sigma, rec.bob_sigma.index());
      EXPECT_EQ(static_cast<oracle::u64>(h.t_exponent) % d,
                static_cast<oracle::u64>(t.exponent()) % d);
    }
  }
  EXPECT_GT(ambiguous, 0u);
}

TEST(BruteForce, SafePrimePinsExponent) {
  const GroupParams g(Integer(9887));
  for (std::size_t i = 0; i < 30; ++i) {
    Rng rng(derive_seed(11, i));
    const auto f = sample_lock_f(g, 4, rng);
    const auto t = sample_lock_t(g, rng);
    const auto rec = transmit_bit(f, t, uniform_bit(rng), g, rng);
    const auto view = exchanges(eavesdrop(std::span(&rec, 1))).back();
    BudgetMeter meter(AttackBudget::unlimited());
    const auto a = brute_force_exchange(view, g, meter);
    ASSERT_EQ(a.keys.size(), 1);
    EXPECT_EQ(a.keys.confirmed.front(), (L1Hypothesis{t.exponent(), rec.bob_sigma.index()}));
  }
}

TEST(DiscreteLog, AgreesWithBruteForce) {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const auto s = make_session(seed, Integer(9973), 3, "z");
    const auto bf = universal_decipher_k(s.transcript, s.params, AttackBudget::unlimited(),
                                         Strategy::kBruteForce);
    const auto dl = universal_decipher_k(s.transcript, s.params, AttackBudget::unlimited(),
                                         Strategy::kDiscreteLog);
    ASSERT_EQ(bf.exchanges.size(), dl.exchanges.size());
    for (std::size_t i = 0; i < bf.exchanges.size(); ++i) {
      EXPECT_EQ(bf.exchanges[i].keys.confirmed, dl.exchanges[i].keys.confirmed);
      EXPECT_EQ(bf.exchanges[i].sigmas, dl.exchanges[i].sigmas);
    }
    EXPECT_EQ(bf.unique(), dl.unique());
    EXPECT_LT(dl.evaluations, bf.evaluations);
  }
}

TEST(Decipher, FullBudgetRecoversDecodedBits) {
  const auto s = make_session(3, Integer(9973), 3, "Hi");
  const auto d = universal_decipher_k(s.transcript, s.params, AttackBudget::unlimited(),
                                      Strategy::kBruteForce);
  std::string decoded;
  for (const auto& r : s.job.bit_records) decoded.push_back(r.decoded ? '1' : '0');
  ASSERT_TRUE(d.unique().has_value());
  EXPECT_EQ(*d.unique(), decoded);
  EXPECT_EQ(d.enumerate(), std::vector<std::string>{decoded});
  const auto m = FiniteDistribution::uniform(std::size_t{1} << 16);
  EXPECT_NEAR(compute_I_k(m, s.transcript, s.params, AttackBudget::unlimited(),
                          Strategy::kBruteForce),
              16.0, 1e-9);
}

TEST(Decipher, ZeroBudgetLearnsNothing) {
  const auto s = make_session(4, Integer(9973), 3, "A");
  const auto d = universal_decipher_k(s.transcript, s.params, AttackBudget::of(0),
                                      Strategy::kBruteForce);
  EXPECT_EQ(d.evaluations, 0u);
  EXPECT_NEAR(d.entropy_bits(), static_cast<double>(d.exchanges.size()), 1e-12);
  const auto rg = universal_decipher_k(s.transcript, s.params, AttackBudget::unlimited(),
                                       Strategy::kRandomGuess);
  EXPECT_EQ(rg.candidate_count(), d.candidate_count());
  EXPECT_THROW(d.enumerate(16), UsageError);
}

TEST(Decipher, SweepIsMonotone) {
  const auto s = make_session(5, Integer(1009), 3, "a");
  const double h_m = static_cast<double>(exchanges(s.transcript).size());
  std::vector<AttackBudget> sweep;
  for (std::uint64_t b : {0u, 1u, 10u, 100u, 1000u, 10000u, 100000u, 1000000u}) {
    sweep.push_back(AttackBudget::of(b));
  }
  sweep.push_back(AttackBudget::unlimited());
  const auto rep = unbreakability_report(FiniteDistribution::uniform(std::size_t{1} << 20),
                                         s.transcript, s.params, Strategy::kBruteForce, sweep);
  EXPECT_TRUE(rep.monotone);
  for (std::size_t i = 1; i < rep.rows.size(); ++i) {
    EXPECT_LE(rep.rows[i].entropy_d, rep.rows[i - 1].entropy_d + 1e-12);
    EXPECT_GE(rep.rows[i].information, rep.rows[i - 1].information - 1e-12);
  }
  EXPECT_NEAR(rep.rows.front().entropy_d, h_m, 1e-12);
  EXPECT_NEAR(rep.rows.back().entropy_d, 0.0, 1e-12);
}

TEST(Decipher, BudgetedMatchesOracle) {
  const auto s = make_session(6, Integer(103), 2, "x");
  const auto views = exchanges(s.transcript);
  for (std::uint64_t b : {0u, 5u, 6u, 50u, 300u, 1000u, 5000u}) {
    const auto d = universal_decipher_k(s.transcript, s.params, AttackBudget::of(b),
                                        Strategy::kBruteForce);
    std::uint64_t left = b;
    for (std::size_t i = 0; i < views.size(); ++i) {
      const auto o = oracle::bit_options_under_budget(103, u64s(views[i].sent),
                                                      u64s(views[i].returned),
                                                      *views[i].announced, left);
      EXPECT_EQ(d.exchanges[i].one_possible, o.one) << "budget " << b << " exchange " << i;
      EXPECT_EQ(d.exchanges[i].zero_possible, o.zero) << "budget " << b << " exchange " << i;
      left -= std::min(left, d.exchanges[i].evaluations);
    }
  }
}

TEST(Decipher, CorruptTranscriptIsFault) {
  Transcript t;
  t.append(Direction::kAliceToBob, kLabelFramework, {Integer(2), Integer(3), Integer(7)});
  t.append(Direction::kBobToAlice, kLabelPermuted, {Integer(9), Integer(9), Integer(9)});
  t.append(Direction::kAliceToBob, kLabelAnnounce, {Integer(0)});
  EXPECT_THROW(universal_decipher_k(t, kP11, AttackBudget::unlimited(), Strategy::kBruteForce),
               ProtocolFault);
  Transcript u;
  u.append(Direction::kAliceToBob, kLabelFramework, {Integer(2), Integer(3), Integer(70)});
  u.append(Direction::kBobToAlice, kLabelPermuted, {Integer(8), Integer(5), Integer(2)});
  u.append(Direction::kAliceToBob, kLabelAnnounce, {Integer(0)});
  EXPECT_THROW(universal_decipher_k(u, kP11, AttackBudget::unlimited(), Strategy::kBruteForce),
               ProtocolFault);
}

TEST(Distinguisher, FullBudgetWinsStarvedGuesses) {
  DistinguisherConfig cfg{Integer(9973), 4, 200};
  cfg.seed = 1;
  const auto full = distinguisher_experiment(cfg);
  EXPECT_GE(full.advantage, 0.95);
  cfg.budget = AttackBudget::of(0);
  const auto starved = distinguisher_experiment(cfg);
  EXPECT_LE(starved.advantage, 3.0 / std::sqrt(200.0));
  for (const auto& r : starved.records) EXPECT_EQ(r.budget_spent, 0u);
}

TEST(Distinguisher, ThreadCountDoesNotMatter) {
  DistinguisherConfig cfg{Integer(1009), 2, 40};
  cfg.threads = 1;
  const auto a = distinguisher_experiment(cfg);
  cfg.threads = 4;
  const auto b = distinguisher_experiment(cfg);
  ASSERT_EQ(a.records.size(), b.records.size());
  for (std::size_t i = 0; i < a.records.size(); ++i) {
    EXPECT_EQ(a.records[i].truth, b.records[i].truth);
    EXPECT_EQ(a.records[i].guess, b.records[i].guess);
  }
}

}  // namespace
}  // namespace dkey
