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
/// Finite-distribution information measures, in bits.
///
/// Joint tables are indexed [row][col]. Throughout, rows hold the variable
/// whose information is measured (X, M, X_B, X_E) and columns hold what it
/// is conditioned on (Y, C, M).
///
/// Channel accounting with a loss term L:
///
///     I_B = H(X_B) - H(X_B|M) - L
///     I_E = H(X_E) - H(X_E|C) - L
///
/// I_E = 0 forces L = H(X_E) - H(X_E|C), which gives
///
///     I_B = (H(X_B) - H(X_B|M)) - (H(X_E) - H(X_E|M))
///
/// whenever Eve's space relates to C as it does to M.

#ifndef DKEY_ENTROPY_HPP
#define DKEY_ENTROPY_HPP

#include <cmath>
#include <cstddef>
#include <istream>
#include <sstream>
#include <string>
#include <unordered_set>
#include <variant>
#include <vector>

#include "dkey/errors.hpp"

namespace dkey {

inline constexpr double kProbabilityTolerance = 1e-12;

namespace detail {

inline void check_probabilities(const std::vector<double>& probs) {
  if (probs.empty()) throw UsageError("distribution has no outcomes");
  double sum = 0.0;
  for (double p : probs) {
    if (!std::isfinite(p) || p < 0.0) throw UsageError("probabilities must be finite and >= 0");
    sum += p;
  }
  if (std::abs(sum - 1.0) > kProbabilityTolerance) {
    std::ostringstream os;
    os.precision(17);
    os << "probabilities sum to " << sum << ", not 1";
    throw UsageError(os.str());
  }
}

inline void check_unique(const std::vector<std::string>& labels) {
  std::unordered_set<std::string> seen;
  for (const auto& l : labels) {
    if (!seen.insert(l).second) throw UsageError("duplicate outcome label '" + l + "'");
  }
}

inline double plogp_sum(const std::vector<double>& probs) {
  double h = 0.0;
  for (double p : probs) {
    if (p > 0.0) h -= p * std::log2(p);
  }
  return h;
}

}  // namespace detail

class FiniteDistribution {
 public:
  FiniteDistribution(std::vector<std::string> labels, std::vector<double> probs)
      : labels_(std::move(labels)), probs_(std::move(probs)) {
    if (labels_.size() != probs_.size()) throw UsageError("label/probability count mismatch");
    detail::check_probabilities(probs_);
    detail::check_unique(labels_);
  }

  /// Unlabeled convenience constructor; outcomes are named "0", "1", ...
  explicit FiniteDistribution(const std::vector<double>& probs)
      : FiniteDistribution(default_labels(probs.size()), probs) {}

  static FiniteDistribution uniform(std::size_t count) {
    if (count == 0) throw UsageError("uniform distribution over nothing");
    return FiniteDistribution(std::vector<double>(count, 1.0 / static_cast<double>(count)));
  }

  std::size_t size() const noexcept { return probs_.size(); }
  const std::vector<std::string>& labels() const noexcept { return labels_; }
  const std::vector<double>& probabilities() const noexcept { return probs_; }

 private:
  static std::vector<std::string> default_labels(std::size_t n) {
    std::vector<std::string> out;
    for (std::size_t i = 0; i < n; ++i) out.push_back(std::to_string(i));
    return out;
  }

  std::vector<std::string> labels_;
  std::vector<double> probs_;
};

class JointDistribution {
 public:
  JointDistribution(std::vector<std::string> row_labels, std::vector<std::string> col_labels,
                    std::vector<std::vector<double>> matrix)
      : rows_(std::move(row_labels)), cols_(std::move(col_labels)), matrix_(std::move(matrix)) {
    if (matrix_.size() != rows_.size()) throw UsageError("joint row count mismatch");
    std::vector<double> flat;
    for (const auto& row : matrix_) {
      if (row.size() != cols_.size()) throw UsageError("joint column count mismatch");
      flat.insert(flat.end(), row.begin(), row.end());
    }
    detail::check_probabilities(flat);
    detail::check_unique(rows_);
    detail::check_unique(cols_);
  }

  explicit JointDistribution(const std::vector<std::vector<double>>& matrix)
      : JointDistribution(labels(matrix.size()),
                          labels(matrix.empty() ? 0 : matrix.front().size()), matrix) {}

  std::size_t rows() const noexcept { return rows_.size(); }
  std::size_t cols() const noexcept { return cols_.size(); }
  double at(std::size_t r, std::size_t c) const { return matrix_[r][c]; }
  const std::vector<std::string>& row_labels() const noexcept { return rows_; }
  const std::vector<std::string>& col_labels() const noexcept { return cols_; }
  const std::vector<std::vector<double>>& matrix() const noexcept { return matrix_; }

  FiniteDistribution row_marginal() const {
    std::vector<double> m(rows(), 0.0);
    for (std::size_t r = 0; r < rows(); ++r) {
      for (double p : matrix_[r]) m[r] += p;
    }
    return FiniteDistribution(rows_, renormalized(std::move(m)));
  }

  FiniteDistribution col_marginal() const {
    std::vector<double> m(cols(), 0.0);
    for (const auto& row : matrix_) {
      for (std::size_t c = 0; c < cols(); ++c) m[c] += row[c];
    }
    return FiniteDistribution(cols_, renormalized(std::move(m)));
  }

  JointDistribution transposed() const {
    std::vector<std::vector<double>> t(cols(), std::vector<double>(rows()));
    for (std::size_t r = 0; r < rows(); ++r) {
      for (std::size_t c = 0; c < cols(); ++c) t[c][r] = matrix_[r][c];
    }
    return JointDistribution(cols_, rows_, std::move(t));
  }

 private:
  static std::vector<std::string> labels(std::size_t n) {
    std::vector<std::string> out;
    for (std::size_t i = 0; i < n; ++i) out.push_back(std::to_string(i));
    return out;
  }

  // Marginal sums can drift by an ulp per term; pull them back onto the simplex.
  static std::vector<double> renormalized(std::vector<double> m) {
    double s = 0.0;
    for (double p : m) s += p;
    for (double& p : m) p /= s;
    return m;
  }

  std::vector<std::string> rows_;
  std::vector<std::string> cols_;
  std::vector<std::vector<double>> matrix_;
};

/// Conditional table P(X = col | given = row); each row sums to 1.
class ConditionalTable {
 public:
  explicit ConditionalTable(std::vector<std::vector<double>> rows) : rows_(std::move(rows)) {
    if (rows_.empty()) throw UsageError("conditional table has no rows");
    for (const auto& r : rows_) {
      if (r.size() != rows_.front().size()) throw UsageError("ragged conditional table");
      detail::check_probabilities(r);
    }
  }

  std::size_t given_count() const noexcept { return rows_.size(); }
  std::size_t outcome_count() const noexcept { return rows_.front().size(); }
  double at(std::size_t given, std::size_t outcome) const { return rows_[given][outcome]; }

 private:
  std::vector<std::vector<double>> rows_;
};

inline double entropy(const FiniteDistribution& d) { return detail::plogp_sum(d.probabilities()); }

/// H(rows, cols).
inline double joint_entropy(const JointDistribution& j) {
  std::vector<double> flat;
  for (const auto& row : j.matrix()) flat.insert(flat.end(), row.begin(), row.end());
  return detail::plogp_sum(flat);
}

/// H(X | Y) with X on rows and Y on columns.
inline double conditional_entropy(const JointDistribution& j) {
  const auto py = j.col_marginal().probabilities();
  double h = 0.0;
  for (std::size_t r = 0; r < j.rows(); ++r) {
    for (std::size_t c = 0; c < j.cols(); ++c) {
      const double p = j.at(r, c);
      if (p > 0.0) h += p * std::log2(py[c] / p);
    }
  }
  return h < 0.0 ? 0.0 : h;
}

inline double mutual_information(const JointDistribution& j) {
  return entropy(j.row_marginal()) - conditional_entropy(j);
}

/// I = H(X) - H(X|M) for a correspondent's information space X; rows X,
/// columns M. Covers I_A, I_B and (with C on the columns) I_E.
inline double correspondent_information(const JointDistribution& x_and_m) {
  return mutual_information(x_and_m);
}

/// Same, from X's marginal, the message distribution and P(X | M). Throws
/// UsageError if the three are inconsistent.
inline double correspondent_information(const FiniteDistribution& x,
                                        const FiniteDistribution& m,
                                        const ConditionalTable& x_given_m,
                                        double tol = 1e-9) {
  if (x_given_m.given_count() != m.size() || x_given_m.outcome_count() != x.size()) {
    throw UsageError("conditional table shape does not match the distributions");
  }
  std::vector<std::vector<double>> joint(x.size(), std::vector<double>(m.size()));
  for (std::size_t xi = 0; xi < x.size(); ++xi) {
    double implied = 0.0;
    for (std::size_t mi = 0; mi < m.size(); ++mi) {
      joint[xi][mi] = m.probabilities()[mi] * x_given_m.at(mi, xi);
      implied += joint[xi][mi];
    }
    if (std::abs(implied - x.probabilities()[xi]) > tol) {
      throw UsageError("marginal of '" + x.labels()[xi] +
                       "' disagrees with the conditional table");
    }
  }
  return correspondent_information(JointDistribution(x.labels(), m.labels(), std::move(joint)));
}

/// Loss L that zeroes Eve's information: H(X_E) - H(X_E|C).
inline double loss_for_perfect_secrecy(const JointDistribution& xe_and_c) {
  return entropy(xe_and_c.row_marginal()) - conditional_entropy(xe_and_c);
}

/// I_E = H(X_E) - H(X_E|C) - L.
inline double eve_information_with_loss(const JointDistribution& xe_and_c, double loss) {
  return entropy(xe_and_c.row_marginal()) - conditional_entropy(xe_and_c) - loss;
}

/// I_B = H(X_B) - H(X_B|M) - L.
inline double bob_information_with_explicit_loss(const JointDistribution& xb_and_m,
                                                 double loss) {
  return entropy(xb_and_m.row_marginal()) - conditional_entropy(xb_and_m) - loss;
}

/// I_B = (H(X_B) - H(X_B|M)) - (H(X_E) - H(X_E|M)).
inline double bob_information_with_loss(const JointDistribution& xb_and_m,
                                        const JointDistribution& xe_and_m) {
  return (entropy(xb_and_m.row_marginal()) - conditional_entropy(xb_and_m)) -
         (entropy(xe_and_m.row_marginal()) - conditional_entropy(xe_and_m));
}

/// I(M;C) <= tol, with M on rows and C on columns.
inline bool perfect_secrecy_check(const JointDistribution& m_and_c, double tol) {
  return mutual_information(m_and_c) <= tol;
}

/// Parsed distribution table: a single distribution or a joint.
using DistributionTable = std::variant<FiniteDistribution, JointDistribution>;

/// Reads
///
///     # comment
///     label probability
///
/// or a joint,
///
///     joint
///     cols c1 c2 ...
///     row_label p11 p12 ...
///
/// Throws ParseError carrying the offending line number.
inline DistributionTable read_distribution_table(std::istream& is) {
  std::string line;
  std::size_t lineno = 0;
  bool joint = false, have_cols = false, any = false;
  std::vector<std::string> labels, cols;
  std::vector<double> probs;
  std::vector<std::vector<double>> matrix;

  auto parse_prob = [&](const std::string& tok) {
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(tok, &used);
    } catch (const std::exception&) {
      throw ParseError(lineno, "'" + tok + "' is not a number");
    }
    if (used != tok.size()) throw ParseError(lineno, "'" + tok + "' is not a number");
    return v;
  };

  while (std::getline(is, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    std::istringstream ls(line);
    std::vector<std::string> toks;
    for (std::string t; ls >> t;) toks.push_back(t);
    if (toks.empty()) continue;

    if (!any) {
      any = true;
      if (toks.size() == 1 && toks[0] == "joint") {
        joint = true;
        continue;
      }
    }
    if (joint && !have_cols) {
      if (toks[0] != "cols" || toks.size() < 2) throw ParseError(lineno, "expected 'cols <labels...>'");
      cols.assign(toks.begin() + 1, toks.end());
      have_cols = true;
      continue;
    }
    if (joint) {
      if (toks.size() != cols.size() + 1) {
        throw ParseError(lineno, "expected " + std::to_string(cols.size()) + " probabilities");
      }
      labels.push_back(toks[0]);
      std::vector<double> row;
      for (std::size_t i = 1; i < toks.size(); ++i) row.push_back(parse_prob(toks[i]));
      matrix.push_back(std::move(row));
      continue;
    }
    if (toks.size() != 2) throw ParseError(lineno, "expected '<label> <probability>'");
    labels.push_back(toks[0]);
    probs.push_back(parse_prob(toks[1]));
  }

  try {
    if (joint) {
      if (!have_cols) throw ParseError(lineno, "joint table without 'cols' line");
      return JointDistribution(std::move(labels), std::move(cols), std::move(matrix));
    }
    return FiniteDistribution(std::move(labels), std::move(probs));
  } catch (const UsageError& e) {
    throw ParseError(0, e.what());
  }
}

}  // namespace dkey

#endif  // DKEY_ENTROPY_HPP
