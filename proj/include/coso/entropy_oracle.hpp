#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "coso/galois.hpp"
#include "coso/rational.hpp"
#include "coso/user_set.hpp"

namespace coso {

enum class SourceModel { kTable, kBits, kLinear };

std::string to_string(SourceModel model);

// Entropy function H: 2^V -> Q>=0 over a ground set of user ids.
//
// Values are tabulated for every subset at construction, so the oracle is an
// immutable lookup table afterwards and safe to share between threads. The
// source description (bit labels or GF(q) rows) is retained for the packet
// simulator.
class EntropyOracle {
 public:
  static constexpr int kMaxUsers = 20;

  // `values[mask]` is H of the subset with that position mask; must hold
  // exactly 2^|users| entries.
  static EntropyOracle from_table(std::vector<int> users, std::vector<Rational> values);

  // H(X) = number of distinct labels held by the users in X.
  static EntropyOracle from_bits(std::vector<int> users, std::vector<std::vector<std::string>> labels);

  // H(X) = rank over GF(field) of the stacked rows of the users in X. All
  // rows share one column count.
  static EntropyOracle from_linear(std::vector<int> users, std::vector<std::vector<Row>> rows, unsigned field);

  SourceModel model() const { return model_; }
  int size() const { return static_cast<int>(users_.size()); }
  UserSet ground() const { return UserSet::first(size()); }
  const std::vector<int>& users() const { return users_; }
  int user_id(int index) const { return users_.at(static_cast<std::size_t>(index)); }
  // Position of a user id in the ground set; throws DomainError if absent.
  int index_of(int user_id) const;
  UserSet set_of(const std::vector<int>& user_ids) const;
  std::vector<int> ids_of(UserSet set) const;

  // H(X). Throws DomainError if X is not a subset of V.
  const Rational& entropy(UserSet x) const;
  const Rational& total() const { return values_.back(); }

  // H(C | Y) = H(C u Y) - H(Y).
  Rational conditional_entropy(UserSet c, UserSet y) const;

  // The oracle of the subsystem X: same model, users restricted to X (in
  // ground order), entropies unchanged.
  EntropyOracle restrict_to(UserSet x) const;

  // Source descriptions; empty unless the model matches.
  const std::vector<std::vector<std::string>>& bit_labels() const { return labels_; }
  const std::vector<std::vector<Row>>& linear_rows() const { return rows_; }
  unsigned linear_field() const { return field_; }
  std::size_t linear_columns() const { return columns_; }

 private:
  EntropyOracle() = default;
  void check_users() const;

  SourceModel model_ = SourceModel::kTable;
  std::vector<int> users_;
  std::map<int, int> index_;
  std::vector<Rational> values_;
  std::vector<std::vector<std::string>> labels_;
  std::vector<std::vector<Row>> rows_;
  unsigned field_ = 2;
  std::size_t columns_ = 0;
};

enum class ViolationKind { kNormalization, kMonotonicity, kSubmodularity };

struct Violation {
  ViolationKind kind;
  UserSet x;
  UserSet y;
  std::string detail;
};

struct OracleReport {
  std::vector<Violation> violations;
  bool ok() const { return violations.empty(); }
};

// Exhaustive polymatroid check. Uses the local forms
//   H(X - i) <= H(X)  and  H(X+i) + H(X+j) >= H(X+i+j) + H(X),
// which are equivalent to global monotonicity and submodularity. Throws
// LimitError when |V| exceeds `limit`.
OracleReport validate_oracle(const EntropyOracle& oracle, int limit);
OracleReport validate_oracle(const EntropyOracle& oracle);

}  // namespace coso
