#include "coso/entropy_oracle.hpp"

#include <cstdlib>
#include <set>

#include <boost/dynamic_bitset.hpp>

#include "coso/errors.hpp"
#include "coso/limits.hpp"

namespace coso {

int exhaustive_limit() {
  if (const char* env = std::getenv("COSO_EXHAUSTIVE_LIMIT")) {
    const int v = std::atoi(env);
    if (v > 0) return v;
  }
  return 12;
}

int par_user_limit() {
  const int e = exhaustive_limit();
  return e > 16 ? e : 16;
}

std::string to_string(SourceModel model) {
  switch (model) {
    case SourceModel::kTable: return "table";
    case SourceModel::kBits: return "bits";
    case SourceModel::kLinear: return "linear";
  }
  return "?";
}

void EntropyOracle::check_users() const {
  if (users_.size() < 2) throw InstanceError("a system needs at least two users");
  if (users_.size() > static_cast<std::size_t>(kMaxUsers)) {
    throw LimitError("at most " + std::to_string(kMaxUsers) + " users are supported");
  }
  std::set<int> seen(users_.begin(), users_.end());
  if (seen.size() != users_.size()) throw InstanceError("duplicate user id");
}

EntropyOracle EntropyOracle::from_table(std::vector<int> users, std::vector<Rational> values) {
  EntropyOracle o;
  o.users_ = std::move(users);
  o.check_users();
  const std::size_t full = std::size_t{1} << o.users_.size();
  if (values.size() != full) {
    throw InstanceError("entropy table must cover all " + std::to_string(full) + " subsets");
  }
  for (const Rational& v : values) {
    if (v < 0) throw InstanceError("negative entropy value");
  }
  o.model_ = SourceModel::kTable;
  o.values_ = std::move(values);
  for (std::size_t i = 0; i < o.users_.size(); ++i) o.index_[o.users_[i]] = static_cast<int>(i);
  return o;
}

EntropyOracle EntropyOracle::from_bits(std::vector<int> users, std::vector<std::vector<std::string>> labels) {
  EntropyOracle o;
  o.users_ = std::move(users);
  o.check_users();
  if (labels.size() != o.users_.size()) throw InstanceError("bits model needs one label list per user");
  std::map<std::string, std::size_t> label_index;
  for (auto& list : labels) {
    for (auto& l : list) label_index.emplace(l, label_index.size());
  }
  const std::size_t n = o.users_.size();
  std::vector<boost::dynamic_bitset<>> held(n, boost::dynamic_bitset<>(label_index.size()));
  for (std::size_t i = 0; i < n; ++i) {
    for (auto& l : labels[i]) held[i].set(label_index[l]);
  }
  const std::size_t full = std::size_t{1} << n;
  o.values_.resize(full);
  std::vector<boost::dynamic_bitset<>> unions(full, boost::dynamic_bitset<>(label_index.size()));
  for (std::size_t mask = 1; mask < full; ++mask) {
    const int low = std::countr_zero(static_cast<unsigned>(mask));
    unions[mask] = unions[mask & (mask - 1)] | held[static_cast<std::size_t>(low)];
    o.values_[mask] = Rational(static_cast<long>(unions[mask].count()));
  }
  o.model_ = SourceModel::kBits;
  o.labels_ = std::move(labels);
  for (std::size_t i = 0; i < n; ++i) o.index_[o.users_[i]] = static_cast<int>(i);
  return o;
}

EntropyOracle EntropyOracle::from_linear(std::vector<int> users, std::vector<std::vector<Row>> rows, unsigned field) {
  EntropyOracle o;
  o.users_ = std::move(users);
  o.check_users();
  if (rows.size() != o.users_.size()) throw InstanceError("linear model needs one matrix per user");
  const GaloisField& f = galois_field(field);
  std::size_t columns = 0;
  bool have_columns = false;
  for (auto& m : rows) {
    for (auto& r : m) {
      if (!have_columns) {
        columns = r.size();
        have_columns = true;
      }
      if (r.size() != columns) throw InstanceError("linear model rows have different lengths");
      for (auto& v : r) {
        if (v >= f.order()) throw InstanceError("matrix entry outside GF(" + std::to_string(field) + ")");
      }
    }
  }
  const std::size_t n = o.users_.size();
  const std::size_t full = std::size_t{1} << n;
  o.values_.resize(full);
  for (std::size_t mask = 1; mask < full; ++mask) {
    Subspace s(f, columns);
    for (std::size_t i = 0; i < n; ++i) {
      if (mask >> i & 1U) {
        for (auto& r : rows[i]) s.insert(r);
      }
    }
    o.values_[mask] = Rational(static_cast<long>(s.rank()));
  }
  o.model_ = SourceModel::kLinear;
  o.rows_ = std::move(rows);
  o.field_ = field;
  o.columns_ = columns;
  for (std::size_t i = 0; i < n; ++i) o.index_[o.users_[i]] = static_cast<int>(i);
  return o;
}

int EntropyOracle::index_of(int user_id) const {
  auto it = index_.find(user_id);
  if (it == index_.end()) throw DomainError("unknown user id " + std::to_string(user_id));
  return it->second;
}

UserSet EntropyOracle::set_of(const std::vector<int>& user_ids) const {
  UserSet s;
  for (int id : user_ids) s = s.with(index_of(id));
  return s;
}

std::vector<int> EntropyOracle::ids_of(UserSet set) const {
  std::vector<int> out;
  set.for_each([&](int i) { out.push_back(user_id(i)); });
  return out;
}

const Rational& EntropyOracle::entropy(UserSet x) const {
  if (!x.subset_of(ground())) throw DomainError("subset is not contained in the ground set");
  return values_[x.mask()];
}

Rational EntropyOracle::conditional_entropy(UserSet c, UserSet y) const {
  return entropy(c | y) - entropy(y);
}

EntropyOracle EntropyOracle::restrict_to(UserSet x) const {
  if (!x.subset_of(ground())) throw DomainError("restriction set is not contained in the ground set");
  const std::vector<int> positions = x.members();
  std::vector<int> ids;
  for (int p : positions) ids.push_back(user_id(p));
  switch (model_) {
    case SourceModel::kBits: {
      std::vector<std::vector<std::string>> labels;
      for (int p : positions) labels.push_back(labels_[static_cast<std::size_t>(p)]);
      return from_bits(std::move(ids), std::move(labels));
    }
    case SourceModel::kLinear: {
      std::vector<std::vector<Row>> rows;
      for (int p : positions) rows.push_back(rows_[static_cast<std::size_t>(p)]);
      EntropyOracle o = from_linear(std::move(ids), std::move(rows), field_);
      o.columns_ = columns_;
      return o;
    }
    case SourceModel::kTable:
      break;
  }
  const std::size_t k = positions.size();
  std::vector<Rational> values(std::size_t{1} << k);
  for (std::size_t local = 0; local < values.size(); ++local) {
    UserSet::Mask global = 0;
    for (std::size_t b = 0; b < k; ++b) {
      if (local >> b & 1U) global |= UserSet::Mask{1} << positions[b];
    }
    values[local] = values_[global];
  }
  return from_table(std::move(ids), std::move(values));
}

OracleReport validate_oracle(const EntropyOracle& oracle) { return validate_oracle(oracle, exhaustive_limit()); }

OracleReport validate_oracle(const EntropyOracle& oracle, int limit) {
  const int n = oracle.size();
  if (n > limit) {
    throw LimitError("exhaustive oracle check limited to " + std::to_string(limit) + " users");
  }
  OracleReport report;
  if (oracle.entropy(UserSet{}) != 0) {
    report.violations.push_back({ViolationKind::kNormalization, UserSet{}, UserSet{}, "H(empty) != 0"});
  }
  const UserSet::Mask full = UserSet::first(n).mask();
  for (UserSet::Mask m = 0; m <= full; ++m) {
    const UserSet x(m);
    const Rational& hx = oracle.entropy(x);
    for (int i = 0; i < n; ++i) {
      if (!x.contains(i)) continue;
      const UserSet smaller = x.without(i);
      if (oracle.entropy(smaller) > hx) {
        report.violations.push_back({ViolationKind::kMonotonicity, smaller, x,
                                     "H(" + std::to_string(smaller.mask()) + ") > H(" + std::to_string(m) + ")"});
      }
    }
    for (int i = 0; i < n; ++i) {
      if (x.contains(i)) continue;
      for (int j = i + 1; j < n; ++j) {
        if (x.contains(j)) continue;
        const Rational lhs = oracle.entropy(x.with(i)) + oracle.entropy(x.with(j));
        const Rational rhs = oracle.entropy(x.with(i).with(j)) + hx;
        if (lhs < rhs) {
          report.violations.push_back({ViolationKind::kSubmodularity, x.with(i), x.with(j), "local submodularity fails"});
        }
      }
    }
    if (m == full) break;
  }
  return report;
}

}  // namespace coso
