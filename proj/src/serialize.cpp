#include "coso/serialize.hpp"

#include <algorithm>
#include <fstream>
#include <regex>
#include <sstream>

#include "coso/errors.hpp"

namespace coso {

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InstanceError("cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Json rational_json(const Rational& v) { return to_string(v); }

Rational rational_from(const Json& v) {
  if (v.is_string()) return parse_rational(v.get<std::string>());
  if (v.is_number_integer()) return Rational(v.get<long long>());
  if (v.is_number_float()) throw InstanceError("write non-integer values as \"p/q\" strings");
  throw InstanceError("expected a rational, got " + v.dump());
}

namespace {

int parse_id(const std::string& key) {
  std::size_t used = 0;
  int id = 0;
  try {
    id = std::stoi(key, &used);
  } catch (const std::exception&) {
    throw InstanceError("bad user id '" + key + "'");
  }
  if (used != key.size()) throw InstanceError("bad user id '" + key + "'");
  return id;
}

std::vector<int> parse_id_list(const std::string& key) {
  static const std::regex digits(R"(-?[0-9]+)");
  static const std::regex shape(R"(^\s*[\[{(]?\s*(-?[0-9]+\s*(,\s*-?[0-9]+\s*)*)?[\]})]?\s*$)");
  if (!std::regex_match(key, shape)) throw InstanceError("bad subset key '" + key + "'");
  std::vector<int> out;
  for (auto it = std::sregex_iterator(key.begin(), key.end(), digits); it != std::sregex_iterator(); ++it) {
    out.push_back(std::stoi(it->str()));
  }
  return out;
}

const Json& field(const Json& doc, const char* name) {
  if (!doc.contains(name)) throw InstanceError(std::string("instance lacks \"") + name + "\"");
  return doc.at(name);
}

std::vector<int> sorted_ids(const EntropyOracle& oracle, UserSet s) {
  auto ids = oracle.ids_of(s);
  std::sort(ids.begin(), ids.end());
  return ids;
}

}  // namespace

EntropyOracle load_instance(const Json& doc) {
  try {
    if (!doc.is_object()) throw InstanceError("instance must be a JSON object");
    const Json& users_j = field(doc, "users");
    if (!users_j.is_array()) throw InstanceError("\"users\" must be a list of ids");
    std::vector<int> users;
    for (const auto& u : users_j) {
      if (!u.is_number_integer()) throw InstanceError("user ids must be integers");
      users.push_back(u.get<int>());
    }
    const std::string model = field(doc, "model").get<std::string>();
    if (model == "bits") {
      const Json& bits = field(doc, "bits");
      std::vector<std::vector<std::string>> labels(users.size());
      for (auto it = bits.begin(); it != bits.end(); ++it) {
        const int id = parse_id(it.key());
        auto pos = std::find(users.begin(), users.end(), id);
        if (pos == users.end()) throw InstanceError("bits given for unknown user " + it.key());
        for (const auto& l : it.value()) {
          labels[static_cast<std::size_t>(pos - users.begin())].push_back(l.is_string() ? l.get<std::string>()
                                                                                         : l.dump());
        }
      }
      return EntropyOracle::from_bits(users, labels);
    }
    if (model == "table") {
      if (doc.value("partial", false)) throw InstanceError("partial entropy tables are not accepted");
      const Json& table = field(doc, "table");
      if (users.size() > static_cast<std::size_t>(EntropyOracle::kMaxUsers)) {
        throw InstanceError("too many users for a table instance");
      }
      const std::size_t count = std::size_t{1} << users.size();
      std::vector<Rational> values(count);
      std::vector<bool> seen(count, false);
      for (auto it = table.begin(); it != table.end(); ++it) {
        std::size_t mask = 0;
        for (int id : parse_id_list(it.key())) {
          auto pos = std::find(users.begin(), users.end(), id);
          if (pos == users.end()) throw InstanceError("table entry names unknown user " + std::to_string(id));
          mask |= std::size_t{1} << (pos - users.begin());
        }
        if (seen[mask]) throw InstanceError("table lists subset " + it.key() + " twice");
        seen[mask] = true;
        values[mask] = rational_from(it.value());
      }
      const auto missing = std::count(seen.begin(), seen.end(), false);
      if (missing > 0) throw InstanceError("entropy table is missing " + std::to_string(missing) + " subsets");
      return EntropyOracle::from_table(users, values);
    }
    if (model == "linear") {
      const Json& lin = field(doc, "linear");
      const unsigned q = lin.value("field", 2U);
      std::vector<std::vector<Row>> rows(users.size());
      for (auto it = lin.begin(); it != lin.end(); ++it) {
        if (it.key() == "field") continue;
        const int id = parse_id(it.key());
        auto pos = std::find(users.begin(), users.end(), id);
        if (pos == users.end()) throw InstanceError("rows given for unknown user " + it.key());
        for (const auto& r : it.value()) {
          Row row;
          for (const auto& x : r) {
            const long long v = x.get<long long>();
            if (v < 0 || v >= static_cast<long long>(q)) throw InstanceError("matrix entry outside GF(q)");
            row.push_back(static_cast<GaloisField::Element>(v));
          }
          rows[static_cast<std::size_t>(pos - users.begin())].push_back(std::move(row));
        }
      }
      return EntropyOracle::from_linear(users, rows, q);
    }
    throw InstanceError("unknown model '" + model + "'");
  } catch (const nlohmann::json::exception& e) {
    throw InstanceError(std::string("malformed instance: ") + e.what());
  } catch (const DomainError& e) {
    throw InstanceError(e.what());
  }
}

EntropyOracle load_instance_text(const std::string& text) {
  Json doc;
  try {
    doc = Json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw InstanceError(std::string("instance is not valid JSON: ") + e.what());
  }
  return load_instance(doc);
}

EntropyOracle load_instance_file(const std::string& path) { return load_instance_text(read_file(path)); }

Json instance_to_json(const EntropyOracle& oracle) {
  Json doc;
  doc["users"] = oracle.users();
  doc["model"] = to_string(oracle.model());
  switch (oracle.model()) {
    case SourceModel::kBits: {
      Json bits = Json::object();
      for (int i = 0; i < oracle.size(); ++i) bits[std::to_string(oracle.user_id(i))] = oracle.bit_labels()[i];
      doc["bits"] = bits;
      break;
    }
    case SourceModel::kLinear: {
      Json lin = Json::object();
      for (int i = 0; i < oracle.size(); ++i) lin[std::to_string(oracle.user_id(i))] = oracle.linear_rows()[i];
      lin["field"] = oracle.linear_field();
      doc["linear"] = lin;
      break;
    }
    case SourceModel::kTable: {
      Json table = Json::object();
      const UserSet::Mask full = oracle.ground().mask();
      for (UserSet::Mask m = 0; m <= full; ++m) {
        table[Json(sorted_ids(oracle, UserSet(m))).dump()] = rational_json(oracle.entropy(UserSet(m)));
        if (m == full) break;
      }
      doc["table"] = table;
      break;
    }
  }
  return doc;
}

Json set_json(const EntropyOracle& oracle, UserSet s) { return sorted_ids(oracle, s); }

UserSet set_from(const EntropyOracle& oracle, const Json& v) {
  if (!v.is_array()) throw InstanceError("expected a list of user ids");
  std::vector<int> ids;
  for (const auto& x : v) ids.push_back(x.get<int>());
  try {
    return oracle.set_of(ids);
  } catch (const DomainError& e) {
    throw InstanceError(e.what());
  }
}

Json partition_json(const EntropyOracle& oracle, const Partition& p) {
  std::vector<std::vector<int>> blocks;
  for (auto b : p.blocks()) blocks.push_back(sorted_ids(oracle, b));
  std::sort(blocks.begin(), blocks.end());
  return blocks;
}

Json rates_json(const EntropyOracle& oracle, const RateVector& r, UserSet carrier) {
  Json out = Json::object();
  for (int id : sorted_ids(oracle, carrier)) {
    out[std::to_string(id)] = rational_json(r.at(static_cast<std::size_t>(oracle.index_of(id))));
  }
  return out;
}

Json rates_json(const EntropyOracle& oracle, const RateVector& r) { return rates_json(oracle, r, oracle.ground()); }

RateVector rates_from(const EntropyOracle& oracle, const Json& v) {
  if (!v.is_object()) throw InstanceError("rates must be an object of id -> rate");
  RateVector r(static_cast<std::size_t>(oracle.size()), Rational(0));
  for (auto it = v.begin(); it != v.end(); ++it) {
    int pos = 0;
    try {
      pos = oracle.index_of(parse_id(it.key()));
    } catch (const DomainError& e) {
      throw InstanceError(e.what());
    }
    r[static_cast<std::size_t>(pos)] = rational_from(it.value());
  }
  return r;
}

Json ids_json(const EntropyOracle& oracle, const std::vector<int>& positions) {
  Json out = Json::array();
  for (int i : positions) out.push_back(oracle.user_id(i));
  return out;
}

Json pwl_json(const PwlFn& f) {
  Json out = Json::array();
  for (std::size_t j = 0; j < f.pieces(); ++j) {
    out.push_back({{"interval", {rational_json(f.piece_lo(j)), rational_json(f.piece_hi(j))}},
                   {"slope", rational_json(f.part(j).slope)},
                   {"intercept", rational_json(f.part(j).intercept)}});
  }
  return out;
}

Json segmented_json(const EntropyOracle& oracle, const Segmented<Partition>& q) {
  Json out = Json::array();
  for (std::size_t j = 0; j < q.pieces(); ++j) {
    out.push_back({{"interval", {rational_json(q.piece_lo(j)), rational_json(q.piece_hi(j))}},
                   {"partition", partition_json(oracle, q.value(j))}});
  }
  return out;
}

Json psp_json(const EntropyOracle& oracle, const Psp& psp) {
  Json out;
  out["p"] = psp.p();
  Json crit = Json::array();
  for (const auto& a : psp.critical_points()) crit.push_back(rational_json(a));
  out["critical_points"] = crit;
  Json chain = Json::array();
  for (std::size_t j = psp.p() + 1; j-- > 0;) {
    chain.push_back({{"j", j}, {"alpha", rational_json(psp.alphas[j])}, {"partition", partition_json(oracle, psp.partitions[j])}});
  }
  out["chain"] = chain;
  out["min_sum_rate_aco"] = rational_json(psp.min_sum_rate());
  out["fundamental_partition"] = partition_json(oracle, psp.fundamental());
  return out;
}

Json par_json(const EntropyOracle& oracle, const ParOutput& out) {
  Json doc;
  doc["ordering"] = ids_json(oracle, out.ordering);
  Json rates = Json::object();
  for (int id : sorted_ids(oracle, oracle.ground())) {
    rates[std::to_string(id)] = pwl_json(out.rates[static_cast<std::size_t>(oracle.index_of(id))]);
  }
  doc["rates"] = rates;
  doc["partition"] = segmented_json(oracle, out.partition);
  doc["psp"] = psp_json(oracle, extract_psp(out));
  doc["families_per_step"] = out.stats.families;
  doc["envelopes_per_step"] = out.stats.envelopes;
  return doc;
}

Json oracle_report_json(const EntropyOracle& oracle, const OracleReport& report) {
  Json out;
  out["ok"] = report.ok();
  Json vs = Json::array();
  for (const auto& v : report.violations) {
    const char* kind = v.kind == ViolationKind::kNormalization   ? "normalization"
                       : v.kind == ViolationKind::kMonotonicity ? "monotonicity"
                                                                : "submodularity";
    vs.push_back({{"kind", kind}, {"x", set_json(oracle, v.x)}, {"y", set_json(oracle, v.y)}, {"detail", v.detail}});
  }
  out["violations"] = vs;
  return out;
}

Json two_stage_json(const EntropyOracle& oracle, const TwoStageResult& res, Model model) {
  Json out;
  out["model"] = to_string(model);
  out["alpha_lb"] = rational_json(res.alpha_lb);
  out["found"] = res.found;
  if (res.found) {
    out["step"] = res.step;
    out["subset"] = set_json(oracle, res.subset);
    out["alpha_hat"] = rational_json(res.alpha_hat);
    out["rates"] = rates_json(oracle, res.rates, res.subset);
  } else {
    const Psp psp = extract_psp(*res.global);
    Rational r = psp.min_sum_rate();
    if (model == Model::kNco) r = ceil(r);
    out["min_sum_rate"] = rational_json(r);
    out["rates"] = rates_json(oracle, res.global->rates_at(r));
  }
  return out;
}

Json plan_json(const EntropyOracle& oracle, const SoPlan& plan) {
  Json out;
  out["model"] = to_string(plan.model);
  out["ordering"] = ids_json(oracle, plan.ordering);
  if (!plan.rerun_ordering.empty()) out["rerun_ordering"] = ids_json(oracle, plan.rerun_ordering);
  out["policy"] = to_string(plan.policy);
  if (plan.policy.kind == DeltaPolicy::Kind::kRandom) out["seed"] = plan.policy.seed;
  Json stages = Json::array();
  for (const auto& st : plan.stages) {
    Json targets = Json::array();
    std::vector<std::vector<int>> ts;
    for (auto c : st.targets) ts.push_back(sorted_ids(oracle, c));
    std::sort(ts.begin(), ts.end());
    for (const auto& t : ts) targets.push_back(t);
    stages.push_back({{"alpha", rational_json(st.alpha)}, {"targets", targets}, {"cumulative_rates", rates_json(oracle, st.rates)}});
  }
  out["stages"] = stages;
  return out;
}

SoPlan plan_from(const EntropyOracle& oracle, const Json& doc) {
  try {
    SoPlan plan;
    plan.model = parse_model(field(doc, "model").get<std::string>());
    auto positions = [&](const Json& ids) {
      std::vector<int> out;
      for (const auto& id : ids) out.push_back(oracle.index_of(id.get<int>()));
      return out;
    };
    if (doc.contains("ordering")) plan.ordering = positions(doc.at("ordering"));
    if (doc.contains("rerun_ordering")) plan.rerun_ordering = positions(doc.at("rerun_ordering"));
    if (doc.contains("policy")) plan.policy = parse_policy(doc.at("policy").get<std::string>(), doc.value("seed", 0ULL));
    for (const auto& s : field(doc, "stages")) {
      SoStage st;
      for (const auto& t : field(s, "targets")) st.targets.push_back(set_from(oracle, t));
      st.rates = rates_from(oracle, field(s, "cumulative_rates"));
      if (s.contains("alpha")) st.alpha = rational_from(s.at("alpha"));
      plan.stages.push_back(std::move(st));
    }
    return plan;
  } catch (const nlohmann::json::exception& e) {
    throw InstanceError(std::string("malformed plan: ") + e.what());
  } catch (const DomainError& e) {
    throw InstanceError(std::string("malformed plan: ") + e.what());
  }
}

Json report_json(const PlanReport& report) {
  Json out;
  out["ok"] = report.ok();
  Json checks = Json::array();
  for (const auto& c : report.checks) {
    Json j{{"name", c.name}, {"pass", c.pass}};
    if (!c.pass) j["detail"] = c.detail;
    checks.push_back(j);
  }
  out["checks"] = checks;
  return out;
}

Json tree_json(const SoTree& tree) {
  Json out;
  out["model"] = to_string(tree.model);
  Json nodes = Json::array();
  for (const auto& n : tree.nodes) {
    nodes.push_back({{"name", n.name}, {"members", n.members}, {"stage", n.stage}, {"alpha", rational_json(n.alpha)}});
  }
  out["nodes"] = nodes;
  Json edges = Json::array();
  for (const auto& e : tree.edges) {
    edges.push_back({{"child", e.child}, {"parent", e.parent}, {"stage", e.stage}, {"rate", rational_json(e.rate)}});
  }
  out["edges"] = edges;
  return out;
}

namespace {

Json pairs_json(const std::vector<std::pair<int, std::size_t>>& v) {
  Json out = Json::object();
  for (const auto& [id, n] : v) out[std::to_string(id)] = n;
  return out;
}

}  // namespace

Json sim_json(const SimReport& report) {
  Json out;
  out["block_length"] = report.block;
  out["decoded"] = report.decoded;
  out["transmissions"] = report.transmissions;
  out["expected"] = rational_json(report.expected);
  Json stages = Json::array();
  for (const auto& s : report.stages) {
    Json targets = Json::array();
    for (const auto& t : s.targets) {
      targets.push_back({{"target", t.target}, {"rows_sent", pairs_json(t.sent)}, {"decoded", t.decoded}});
    }
    stages.push_back({{"stage", s.stage}, {"rows", s.rows}, {"targets", targets}, {"per_user_rank", pairs_json(s.ranks)}});
  }
  out["stages"] = stages;
  return out;
}

Json trace_json(const RecursiveTrace& trace) {
  Json out;
  out["omniscient"] = trace.omniscient;
  out["transmissions"] = trace.transmissions;
  Json rounds = Json::array();
  for (const auto& r : trace.rounds) {
    Json rates = Json::object();
    for (const auto& [id, v] : r.rates) rates[std::to_string(id)] = rational_json(v);
    rounds.push_back({{"nodes", r.nodes},
                      {"global", r.global},
                      {"subset", r.subset},
                      {"alpha", rational_json(r.alpha)},
                      {"rates", rates},
                      {"rows", r.rows},
                      {"decoded", r.decoded}});
  }
  out["rounds"] = rounds;
  return out;
}

}  // namespace coso
