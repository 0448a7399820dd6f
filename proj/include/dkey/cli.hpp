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
/// `dkey` command line: keygen, simulate, attack, entropy, demo.
///
/// Machine-readable output is one JSON object per line; human-readable
/// summary lines start with "# ". Exit codes: 0 success, 1 usage or config
/// error, 2 protocol fault, 3 parse error.

#ifndef DKEY_CLI_HPP
#define DKEY_CLI_HPP

#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "dkey/adversary.hpp"
#include "dkey/config.hpp"
#include "dkey/entropy.hpp"
#include "dkey/level2.hpp"
#include "dkey/transcript.hpp"

namespace dkey::cli {

enum ExitCode : int { kOk = 0, kUsage = 1, kProtocol = 2, kParse = 3 };

using nlohmann::json;

struct ConfigFlags {
  std::string config_path;
  std::optional<std::string> p;
  std::optional<std::size_t> n, w, r, max_retries;
  std::optional<std::uint64_t> seed;

  void add_to(CLI::App& app) {
    app.add_option("-c,--config", config_path, "key=value session config file");
    app.add_option("--p", p, "prime modulus");
    app.add_option("--n", n, "framework size");
    app.add_option("--w", w, "codeword width");
    app.add_option("--r", r, "repetition factor (odd)");
    app.add_option("--seed", seed, "64-bit seed");
    app.add_option("--max-retries", max_retries, "retry budget for ambiguous recovery");
  }

  SessionConfig resolve() const {
    SessionConfig cfg;
    if (!config_path.empty()) {
      std::ifstream in(config_path);
      if (!in) throw UsageError("cannot open config file " + config_path);
      read_config(in, cfg);
    }
    if (p) cfg.p = parse_decimal(*p);
    if (n) cfg.n = *n;
    if (w) cfg.w = *w;
    if (r) cfg.r = *r;
    if (seed) cfg.seed = *seed;
    if (max_retries) cfg.max_retries = *max_retries;
    cfg.validate();
    return cfg;
  }
};

inline AttackBudget parse_budget(const std::string& text) {
  if (text == "inf" || text == "unlimited") return AttackBudget::unlimited();
  return AttackBudget::of(detail::parse_u64(text));
}

/// Output target: a file path, or the given stream when the path is empty
/// or "-".
class Sink {
 public:
  Sink(const std::string& path, std::ostream& fallback) : os_(&fallback) {
    if (!path.empty() && path != "-") {
      file_.open(path);
      if (!file_) throw UsageError("cannot write " + path);
      os_ = &file_;
    }
  }
  std::ostream& stream() { return *os_; }

 private:
  std::ofstream file_;
  std::ostream* os_;
};

inline std::ifstream open_input(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot open " + path);
  return in;
}

struct SimulationOutcome {
  MessageJob job;
  TranscriptFile transcript;
  json result;
};

/// Runs one message through both protocol levels.
inline SimulationOutcome simulate(const SessionConfig& cfg, const KeyMaterial& keys,
                                  const std::string& message) {
  const GroupParams params(cfg.p);
  if (keys.alice.params() != params || keys.alice.arity() != cfg.n) {
    throw UsageError("key material does not match the session config");
  }
  Rng rng(cfg.session_seed());
  SimulationOutcome out{send_message(message, keys.alice, keys.bob, params,
                                     cfg.protocol_options(), rng),
                        {cfg.to_header(), {}},
                        {}};
  out.transcript.transcript = eavesdrop(out.job);

  std::size_t retries = 0;
  for (const auto& rec : out.job.bit_records) retries += rec.aborted.size();
  json& res = out.result;
  res["record"] = "result";
  res["plaintext"] = message;
  res["binary"] = out.job.binary;
  res["codewords"] = out.job.codewords.size();
  res["decoys"] = out.job.decoy_count();
  res["bit_exchanges"] = out.job.bit_records.size();
  res["bit_errors"] = out.job.bit_errors();
  res["retries"] = retries;
  try {
    res["recovered"] = receive_message(out.job.bit_records, cfg.w, cfg.r);
  } catch (const FramingError& e) {
    res["recovered"] = nullptr;
    res["framing_error"] = e.what();
  }
  return out;
}

struct AttackOutcome {
  DecipherResult decipher;
  std::vector<json> records;
};

inline AttackOutcome attack(const TranscriptFile& file, Strategy strategy,
                            const AttackBudget& budget,
                            const std::optional<FiniteDistribution>& message_space) {
  const SessionConfig cfg = config_from_header(file);
  const GroupParams params(cfg.p);
  AttackOutcome out{universal_decipher_k(file.transcript, params, budget, strategy), {}};
  const auto& d = out.decipher;
  for (std::size_t i = 0; i < d.exchanges.size(); ++i) {
    const auto& x = d.exchanges[i];
    std::string bits;
    if (x.zero_possible) bits += '0';
    if (x.one_possible) bits += '1';
    out.records.push_back({{"record", "exchange"},
                           {"index", i},
                           {"evaluations", x.evaluations},
                           {"complete", x.complete},
                           {"key_candidates", to_decimal(x.keys.size())},
                           {"possible_bits", bits}});
  }
  const double h_m = message_space ? entropy(*message_space)
                                   : static_cast<double>(d.exchanges.size());
  const double h_d = d.entropy_bits();
  json summary{{"record", "summary"},
               {"strategy", strategy_name(strategy)},
               {"budget", budget.str()},
               {"evaluations", d.evaluations},
               {"exchanges", d.exchanges.size()},
               {"candidates", to_decimal(d.candidate_count())},
               {"H_M", h_m},
               {"H_D", h_d},
               {"I_k", h_m - h_d}};
  const auto bits = d.unique();
  summary["broken"] = bits.has_value();
  if (bits) {
    summary["recovered_bits"] = *bits;
    std::vector<int> stream;
    for (char c : *bits) stream.push_back(c - '0');
    try {
      summary["recovered_plaintext"] = receive_message(std::span<const int>(stream), cfg.w, cfg.r);
    } catch (const FramingError&) {
      summary["recovered_plaintext"] = nullptr;
    }
  }
  out.records.push_back(std::move(summary));
  return out;
}

inline std::vector<json> entropy_metrics(const std::string& name, const DistributionTable& table) {
  std::vector<json> out;
  if (const auto* d = std::get_if<FiniteDistribution>(&table)) {
    out.push_back({{"record", "distribution"}, {"file", name}, {"outcomes", d->size()},
                   {"H", entropy(*d)}});
  } else {
    const auto& j = std::get<JointDistribution>(table);
    const double i = mutual_information(j);
    out.push_back({{"record", "joint"},
                   {"file", name},
                   {"H_X", entropy(j.row_marginal())},
                   {"H_Y", entropy(j.col_marginal())},
                   {"H_XY", joint_entropy(j)},
                   {"H_X_given_Y", conditional_entropy(j)},
                   {"I", i},
                   {"perfect_secrecy", perfect_secrecy_check(j, 1e-9)}});
  }
  return out;
}

// Misread bits can yield bytes outside ASCII; those are replaced, not fatal.
inline void emit(std::ostream& os, const json& record) {
  os << record.dump(-1, ' ', false, json::error_handler_t::replace) << '\n';
}

inline int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Double-key protocol simulator", "dkey"};
  app.require_subcommand(1);

  ConfigFlags keygen_flags;
  std::string keygen_out;
  auto* keygen = app.add_subcommand("keygen", "generate Alice's and Bob's key material");
  keygen_flags.add_to(*keygen);
  keygen->add_option("-o,--out", keygen_out, "key file (default stdout)");

  ConfigFlags sim_flags;
  std::string sim_keys, sim_message, sim_transcript, sim_result;
  auto* sim = app.add_subcommand("simulate", "send a message through both protocol levels");
  sim_flags.add_to(*sim);
  sim->add_option("-m,--message", sim_message, "plaintext (7-bit ASCII)")->required();
  sim->add_option("-k,--keys", sim_keys, "key file (default: derived from seed)");
  sim->add_option("-t,--transcript", sim_transcript, "transcript output file");
  sim->add_option("--result", sim_result, "result record output (default stdout)");

  std::string atk_transcript, atk_strategy = "brute-force", atk_budget = "inf", atk_space;
  auto* atk = app.add_subcommand("attack", "run the eavesdropper on a transcript");
  atk->add_option("-t,--transcript", atk_transcript, "transcript file")->required();
  atk->add_option("-s,--strategy", atk_strategy, "random-guess | brute-force | discrete-log");
  atk->add_option("-b,--budget", atk_budget, "elementary operations, or 'inf'");
  atk->add_option("--message-space", atk_space,
                  "distribution file for H(M) (default: uniform over the exchanged bits)");

  std::vector<std::string> ent_files;
  auto* ent = app.add_subcommand("entropy", "information measures of distribution tables");
  ent->add_option("files", ent_files, "distribution or joint table files")->required();

  ConfigFlags demo_flags;
  std::string demo_message = "No";
  auto* demo = app.add_subcommand("demo", "two correspondents exchange a secret message");
  demo_flags.add_to(*demo);
  demo->add_option("-m,--message", demo_message, "plaintext");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp& e) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  }

  try {
    if (keygen->parsed()) {
      const auto cfg = keygen_flags.resolve();
      for (const auto& w : cfg.warnings()) err << "warning: " << w << '\n';
      Sink sink(keygen_out, out);
      write_keys(sink.stream(), generate_keys(cfg));
      return kOk;
    }

    if (sim->parsed()) {
      const auto cfg = sim_flags.resolve();
      for (const auto& w : cfg.warnings()) err << "warning: " << w << '\n';
      KeyMaterial keys = [&] {
        if (sim_keys.empty()) return generate_keys(cfg);
        auto in = open_input(sim_keys);
        return read_keys(in);
      }();
      auto outcome = simulate(cfg, keys, sim_message);
      if (!sim_transcript.empty()) {
        Sink t(sim_transcript, out);
        write_transcript(t.stream(), outcome.transcript);
      }
      Sink r(sim_result, out);
      emit(r.stream(), outcome.result);
      r.stream() << "# sent " << std::quoted(sim_message) << ", Bob read "
                 << (outcome.result["recovered"].is_null()
                         ? std::string("<framing error>")
                         : outcome.result["recovered"].get<std::string>())
                 << " (" << outcome.result["bit_errors"].get<std::size_t>() << " bit errors, "
                 << outcome.result["decoys"].get<std::size_t>() << " decoys)\n";
      return kOk;
    }

    if (atk->parsed()) {
      const Strategy strategy = parse_strategy(atk_strategy);
      const AttackBudget budget = parse_budget(atk_budget);
      auto in = open_input(atk_transcript);
      const auto file = read_transcript(in);
      std::optional<FiniteDistribution> space;
      if (!atk_space.empty()) {
        auto sin = open_input(atk_space);
        auto table = read_distribution_table(sin);
        if (!std::holds_alternative<FiniteDistribution>(table)) {
          throw UsageError("message space must be a single distribution");
        }
        space = std::get<FiniteDistribution>(std::move(table));
      }
      const auto result = attack(file, strategy, budget, space);
      for (const auto& rec : result.records) emit(out, rec);
      const auto& s = result.records.back();
      out << "# " << s["strategy"].get<std::string>() << " with budget "
          << s["budget"].get<std::string>() << ": I_k = " << s["I_k"].get<double>()
          << " bits, " << (s["broken"].get<bool>() ? "broken" : "not broken") << '\n';
      return kOk;
    }

    if (ent->parsed()) {
      for (const auto& path : ent_files) {
        auto in = open_input(path);
        DistributionTable table = [&] {
          try {
            return read_distribution_table(in);
          } catch (const ParseError& e) {
            throw ParseError(e.line(), path + ": " + e.what());
          }
        }();
        for (const auto& rec : entropy_metrics(path, table)) {
          emit(out, rec);
          if (rec.contains("H")) {
            out << "# " << path << ": H = " << rec["H"].get<double>() << " bits\n";
          } else {
            out << "# " << path << ": I(X;Y) = " << rec["I"].get<double>() << " bits\n";
          }
        }
      }
      return kOk;
    }

    if (demo->parsed()) {
      const auto cfg = demo_flags.resolve();
      const auto keys = generate_keys(cfg);
      out << "# Alice and Bob agree in the open on p=" << cfg.p << ", n=" << cfg.n
          << ", w=" << cfg.w << ", r=" << cfg.r << "\n";
      out << "# Alice keeps F exponents to herself; Bob keeps his T exponent\n";
      auto outcome = simulate(cfg, keys, demo_message);
      out << "# plaintext " << std::quoted(demo_message) << " -> " << outcome.job.binary << '\n';
      out << "# " << outcome.job.codewords.size() << " codewords ("
          << outcome.job.decoy_count() << " decoys) -> " << outcome.job.bit_records.size()
          << " first-level exchanges, " << outcome.transcript.transcript.size()
          << " messages seen by Eve\n";
      const auto& rec = outcome.job.bit_records.front();
      out << "# first exchange: Alice sends";
      for (const auto& e : rec.framework_msg.elements) out << ' ' << e.str();
      out << "\n#                 Bob returns";
      for (const auto& e : rec.permuted_msg.elements) out << ' ' << e.str();
      out << "\n#                 Alice announces permutation " << rec.announced_index.index()
          << '\n';
      emit(out, outcome.result);
      out << "# Bob read "
          << (outcome.result["recovered"].is_null()
                  ? std::string("<framing error>")
                  : outcome.result["recovered"].get<std::string>())
          << '\n';
      return kOk;
    }
  } catch (const ParseError& e) {
    err << "parse error: " << e.what() << '\n';
    return kParse;
  } catch (const ProtocolFault& e) {
    err << "protocol fault: " << e.what() << '\n';
    return kProtocol;
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  }
  return kUsage;
}

}  // namespace dkey::cli

#endif  // DKEY_CLI_HPP
