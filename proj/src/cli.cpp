#include "coso/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <optional>
#include <sstream>

#include "coso/ccde_sim.hpp"
#include "coso/errors.hpp"
#include "coso/omniscience.hpp"
#include "coso/par_engine.hpp"
#include "coso/plan_validate.hpp"
#include "coso/serialize.hpp"
#include "coso/so_planner.hpp"
#include "coso/so_tree.hpp"

namespace coso {

namespace {

struct Config {
  std::string instance;
  std::string model = "aco";
  std::string ordering;
  std::string policy = "min-rate";
  std::string alpha_lb;
  std::string subset;
  std::string rates;
  std::string plan;
  std::string coding = "deterministic";
  std::string method = "psp";
  std::size_t block = 0;
  std::uint64_t seed = 0;
  std::string format = "human";
  bool recursive = false;
  bool reuse = false;
};

// Thrown for bad flag values found after CLI11 has parsed.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::vector<int> parse_ids(const std::string& text) {
  std::vector<int> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      out.push_back(std::stoi(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw UsageError("bad id '" + item + "' in list '" + text + "'");
    }
  }
  return out;
}

std::string show(const Rational& v) {
  if (is_integer(v)) return to_string(v);
  return to_string(v) + " (" + to_decimal(v) + ")";
}

std::string show_set(const EntropyOracle& o, UserSet s) {
  std::string out = "{";
  const auto ids = set_json(o, s).get<std::vector<int>>();
  for (std::size_t k = 0; k < ids.size(); ++k) out += (k ? "," : "") + std::to_string(ids[k]);
  return out + "}";
}

std::string show_partition(const EntropyOracle& o, const Partition& p) {
  std::string out;
  for (const auto& b : partition_json(o, p)) {
    std::string s = "{";
    for (std::size_t k = 0; k < b.size(); ++k) s += (k ? "," : "") + std::to_string(b[k].get<int>());
    out += (out.empty() ? "" : " ") + s + "}";
  }
  return out;
}

std::string show_rates(const EntropyOracle& o, const RateVector& r, UserSet carrier) {
  std::string out = "(";
  bool first = true;
  const Json doc = rates_json(o, r, carrier);
  for (const auto& [id, v] : doc.items()) {
    out += (first ? "" : ", ") + id + ": " + v.get<std::string>();
    first = false;
  }
  return out + ")";
}

class Runner {
 public:
  Runner(const Config& cfg, std::ostream& out) : cfg_(cfg), out_(out), oracle_(load_instance_file(cfg.instance)) {}

  Model model() const { return parse_model(cfg_.model); }
  bool json() const { return cfg_.format == "json"; }

  std::vector<int> ordering() const {
    if (cfg_.ordering.empty()) return identity_ordering(oracle_);
    return ordering_from_ids(oracle_, parse_ids(cfg_.ordering));
  }

  UserSet subset() const {
    if (cfg_.subset.empty()) return oracle_.ground();
    return oracle_.set_of(parse_ids(cfg_.subset));
  }

  std::optional<Rational> alpha_lb() const {
    if (cfg_.alpha_lb.empty()) return std::nullopt;
    try {
      return parse_rational(cfg_.alpha_lb);
    } catch (const Error&) {
      throw UsageError("bad --alpha-lb '" + cfg_.alpha_lb + "'");
    }
  }

  void emit(const Json& doc) { out_ << doc.dump(2) << "\n"; }

  SoPlan plan() const {
    if (!cfg_.plan.empty()) return plan_from(oracle_, Json::parse(read_file(cfg_.plan), nullptr, false));
    DeltaPolicy policy;
    try {
      policy = parse_policy(cfg_.policy, cfg_.seed);
    } catch (const DomainError& e) {
      throw UsageError(e.what());
    }
    return model() == Model::kAco ? multi_stage_aco(oracle_, ordering(), policy)
                                  : multi_stage_nco(oracle_, ordering(), policy, {cfg_.reuse});
  }

  int psp() {
    const ParOutput res = par(oracle_, ordering());
    const Psp p = extract_psp(res);
    if (json()) {
      emit(par_json(oracle_, res));
      return 0;
    }
    out_ << "H(V) = " << show(oracle_.total()) << "\n";
    out_ << "critical points:";
    for (const auto& a : p.critical_points()) out_ << " " << to_string(a);
    out_ << "\n";
    for (std::size_t j = p.p() + 1; j-- > 0;) {
      const Rational lo = j == p.p() ? Rational(0) : p.alphas[j + 1];
      out_ << "P^(" << j << ") on " << (j == p.p() ? "[" : "(") << to_string(lo) << ", " << to_string(p.alphas[j])
           << "]: " << show_partition(oracle_, p.partitions[j]) << "\n";
    }
    out_ << "R_ACO(V) = " << show(p.min_sum_rate()) << "\n";
    out_ << "fundamental partition: " << show_partition(oracle_, p.fundamental()) << "\n";
    return 0;
  }

  int minrate() {
    const UserSet x = subset();
    const Method method = cfg_.method == "bruteforce" ? Method::kBruteForce : Method::kPsp;
    const MinSumRate aco = min_sum_rate_aco(oracle_, x, method);
    const Rational value = model() == Model::kAco ? aco.value : ceil(aco.value);
    const RateVector r = optimal_rate_vector(oracle_, x, model(), ordering());
    if (json()) {
      emit({{"model", to_string(model())},
            {"subset", set_json(oracle_, x)},
            {"min_sum_rate", rational_json(value)},
            {"finest_maximizer", partition_json(oracle_, aco.finest)},
            {"optimal_rates", rates_json(oracle_, r, x)}});
      return 0;
    }
    out_ << "R_" << (model() == Model::kAco ? "ACO" : "NCO") << show_set(oracle_, x) << " = " << show(value) << "\n";
    out_ << "finest maximizer: " << show_partition(oracle_, aco.finest) << "\n";
    out_ << "optimal rates: " << show_rates(oracle_, r, x) << "\n";
    return 0;
  }

  int region_check() {
    const UserSet x = subset();
    RateVector r(static_cast<std::size_t>(oracle_.size()), Rational(0));
    std::stringstream ss(cfg_.rates);
    std::string item;
    while (std::getline(ss, item, ',')) {
      const auto eq = item.find('=');
      if (eq == std::string::npos) throw UsageError("rates are written id=p/q, got '" + item + "'");
      const int id = parse_ids(item.substr(0, eq)).front();
      if (!x.contains(oracle_.index_of(id))) throw DomainError("user " + std::to_string(id) + " is outside the subset");
      r[static_cast<std::size_t>(oracle_.index_of(id))] = parse_rational(item.substr(eq + 1));
    }
    const bool inside = in_co_region(oracle_, x, r);
    const Rational sum = sum_over(r, x);
    const Rational minimum = min_sum_rate(oracle_, x, model());
    const bool optimal = inside && sum == minimum;
    if (json()) {
      emit({{"subset", set_json(oracle_, x)},
            {"rates", rates_json(oracle_, r, x)},
            {"in_co_region", inside},
            {"sum_rate", rational_json(sum)},
            {"min_sum_rate", rational_json(minimum)},
            {"optimal", optimal}});
      return 0;
    }
    out_ << (inside ? "inside" : "outside") << " the CO region of " << show_set(oracle_, x) << "\n";
    out_ << "sum-rate " << show(sum) << ", minimum " << show(minimum) << (optimal ? ", optimal" : "") << "\n";
    return 0;
  }

  int two_stage_cmd() {
    const TwoStageResult res = two_stage(oracle_, ordering(), model(), alpha_lb());
    if (json()) {
      emit(two_stage_json(oracle_, res, model()));
      return 0;
    }
    out_ << "lower bound " << show(res.alpha_lb) << "\n";
    if (res.found) {
      out_ << "complimentary subset " << show_set(oracle_, res.subset) << " at step " << res.step << "\n";
      out_ << "alpha-hat = " << show(res.alpha_hat) << "\n";
      out_ << "local rates: " << show_rates(oracle_, res.rates, res.subset) << "\n";
    } else {
      Rational r = extract_psp(*res.global).min_sum_rate();
      if (model() == Model::kNco) r = ceil(r);
      out_ << "no complimentary subset; global omniscience at sum-rate " << show(r) << "\n";
      out_ << "rates: " << show_rates(oracle_, res.global->rates_at(r), oracle_.ground()) << "\n";
    }
    return 0;
  }

  int multi_stage() {
    const SoPlan p = plan();
    if (json()) {
      emit(plan_json(oracle_, p));
      return 0;
    }
    out_ << to_string(p.model) << " plan, policy " << to_string(p.policy) << "\n";
    if (!p.rerun_ordering.empty()) {
      out_ << "rerun ordering:";
      for (int i : p.rerun_ordering) out_ << " " << oracle_.user_id(i);
      out_ << "\n";
    }
    for (std::size_t k = 0; k < p.stages.size(); ++k) {
      const auto& st = p.stages[k];
      out_ << "stage " << k + 1 << " at alpha " << show(st.alpha) << ":";
      for (auto c : st.targets) out_ << " " << show_set(oracle_, c);
      out_ << "  r = " << show_rates(oracle_, st.rates, oracle_.ground()) << "\n";
    }
    return 0;
  }

  int complimentary() {
    const auto lb = alpha_lb();
    std::vector<UserSet> sets = lb ? detect_complimentary(oracle_, *lb, model()) : complimentary_oracle(oracle_, model());
    if (json()) {
      Json list = Json::array();
      for (auto s : sets) list.push_back(set_json(oracle_, s));
      Json doc{{"model", to_string(model())}, {"method", lb ? "sufficient" : "exact"}};
      if (lb) doc["alpha_lb"] = rational_json(*lb);
      doc["subsets"] = list;
      emit(doc);
      return 0;
    }
    out_ << (lb ? "detected at lower bound " + show(*lb) : std::string("exact")) << ", " << sets.size()
         << " subset" << (sets.size() == 1 ? "" : "s") << "\n";
    for (auto s : sets) out_ << show_set(oracle_, s) << "\n";
    return 0;
  }

  int validate() {
    if (cfg_.plan.empty()) {
      const OracleReport rep = validate_oracle(oracle_);
      if (json()) {
        emit(oracle_report_json(oracle_, rep));
      } else {
        out_ << (rep.ok() ? "entropy function is a polymatroid rank function" : "entropy function violations:")
             << "\n";
        for (const auto& v : rep.violations) out_ << "  " << v.detail << "\n";
      }
      return rep.ok() ? 0 : 1;
    }
    const PlanReport rep = validate_plan(oracle_, plan());
    if (json()) {
      emit(report_json(rep));
    } else {
      for (const auto& c : rep.checks) {
        out_ << (c.pass ? "pass " : "FAIL ") << c.name << (c.pass ? "" : ": " + c.detail) << "\n";
      }
    }
    return rep.ok() ? 0 : 1;
  }

  int simulate() {
    const Coding coding = cfg_.coding == "random" ? Coding::kRandom : Coding::kDeterministic;
    if (cfg_.recursive) {
      PacketSystem sys = instantiate(oracle_, cfg_.block == 0 ? 1 : cfg_.block);
      const RecursiveTrace trace = recursive_two_stage(sys, coding, cfg_.seed);
      if (json()) {
        emit(trace_json(trace));
      } else {
        for (std::size_t k = 0; k < trace.rounds.size(); ++k) {
          const auto& r = trace.rounds[k];
          out_ << "round " << k + 1 << (r.global ? " (global)" : "") << ": nodes";
          for (int id : r.nodes) out_ << " " << id;
          out_ << ", omniscience in";
          for (int id : r.subset) out_ << " " << id;
          out_ << " at alpha " << show(r.alpha) << ", " << r.rows << " rows, "
               << (r.decoded ? "decoded" : "NOT decoded") << "\n";
        }
        out_ << "total transmissions " << trace.transmissions << (trace.omniscient ? ", omniscient" : ", incomplete")
             << "\n";
      }
      return trace.omniscient ? 0 : 1;
    }
    const SoPlan p = plan();
    const std::size_t n = cfg_.block == 0 ? block_length_for(p) : cfg_.block;
    PacketSystem sys = instantiate(oracle_, n);
    const SimReport rep = simulate_plan(sys, oracle_, p, coding, cfg_.seed);
    if (json()) {
      emit(sim_json(rep));
    } else {
      out_ << "block length " << rep.block << "\n";
      for (const auto& s : rep.stages) {
        out_ << "stage " << s.stage << ": " << s.rows << " rows";
        for (const auto& t : s.targets) {
          out_ << ", target";
          for (int id : t.target) out_ << " " << id;
          out_ << (t.decoded ? " decoded" : " NOT decoded");
        }
        out_ << "\n";
      }
      out_ << "total transmissions " << rep.transmissions << " (n * sum-rate = " << to_string(rep.expected) << ")\n";
    }
    if (!rep.decoded) throw DomainError("decoding failed; the plan does not match the source");
    return 0;
  }

  int export_tree() {
    const SoTree tree = build_tree(oracle_, plan());
    if (json()) {
      emit(tree_json(tree));
    } else {
      out_ << to_dot(tree);
    }
    return 0;
  }

 private:
  const Config& cfg_;
  std::ostream& out_;
  EntropyOracle oracle_;
};

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Communication for omniscience and successive omniscience planner", "coso"};
  app.require_subcommand(1);
  Config cfg;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("instance", cfg.instance, "Instance document (JSON)")->required();
    sub->add_option("--format", cfg.format, "Output format")->check(CLI::IsMember({"human", "json", "dot"}));
  };
  auto add_model = [&](CLI::App* sub) {
    sub->add_option("--model", cfg.model, "Rate model")->check(CLI::IsMember({"aco", "nco"}));
  };
  auto add_ordering = [&](CLI::App* sub) {
    sub->add_option("--ordering", cfg.ordering, "Linear ordering of user ids, e.g. 4,5,2,3,1");
  };
  auto add_planning = [&](CLI::App* sub) {
    add_model(sub);
    add_ordering(sub);
    sub->add_option("--policy", cfg.policy, "min-rate, smallest-index, explicit:ids or random");
    sub->add_option("--seed", cfg.seed, "Seed for random choices");
    sub->add_flag("--reuse-first-run", cfg.reuse, "nco: skip the second run when the first is already monotone");
  };

  auto* psp = app.add_subcommand("psp", "Principal sequence of partitions and rate profile");
  add_common(psp);
  add_ordering(psp);

  auto* minrate = app.add_subcommand("minrate", "Minimum sum-rate and an optimal rate vector");
  add_common(minrate);
  add_model(minrate);
  add_ordering(minrate);
  minrate->add_option("--subset", cfg.subset, "User ids of the subsystem (default: all)");
  minrate->add_option("--method", cfg.method, "psp or bruteforce")->check(CLI::IsMember({"psp", "bruteforce"}));

  auto* region = app.add_subcommand("region-check", "Test a rate vector against the CO region");
  add_common(region);
  add_model(region);
  region->add_option("--rates", cfg.rates, "Rates as id=p/q,...")->required();
  region->add_option("--subset", cfg.subset, "User ids of the subsystem (default: all)");

  auto* two = app.add_subcommand("two-stage", "Search a complimentary subset prefix by prefix");
  add_common(two);
  add_model(two);
  add_ordering(two);
  two->add_option("--alpha-lb", cfg.alpha_lb, "Lower bound on the minimum sum-rate (p/q)");

  auto* multi = app.add_subcommand("multi-stage", "Multi-stage SO plan");
  add_common(multi);
  add_planning(multi);

  auto* compl_ = app.add_subcommand("complimentary", "Complimentary subsets (exact, or sufficient test with --alpha-lb)");
  add_common(compl_);
  add_model(compl_);
  compl_->add_option("--alpha-lb", cfg.alpha_lb, "Lower bound for the sufficient test (p/q)");

  auto* validate = app.add_subcommand("validate", "Check a plan, or the entropy function when no plan is given");
  add_common(validate);
  validate->add_option("--plan", cfg.plan, "Plan document (JSON)");

  auto* simulate = app.add_subcommand("simulate", "Packet-level execution of a plan");
  add_common(simulate);
  add_planning(simulate);
  simulate->add_option("--plan", cfg.plan, "Plan document; built from --model/--ordering/--policy otherwise");
  simulate->add_option("--block", cfg.block, "Block length n (default: smallest making rates integral)");
  simulate->add_option("--coding", cfg.coding, "deterministic or random")
      ->check(CLI::IsMember({"deterministic", "random"}));
  simulate->add_flag("--recursive", cfg.recursive, "Recursive two-stage SO with super-user fusion");

  auto* tree = app.add_subcommand("export-tree", "SO tree of a plan (DOT or JSON)");
  add_common(tree);
  add_planning(tree);
  tree->add_option("--plan", cfg.plan, "Plan document; built from --model/--ordering/--policy otherwise");

  std::vector<const char*> argv{"coso"};
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "coso: " << e.what() << "\n";
    return 2;
  }

  try {
    CLI::App* sub = app.get_subcommands().front();
    const std::string name = sub->get_name();
    if (cfg.format == "dot" && name != "export-tree") throw UsageError("--format dot is only for export-tree");
    if (name == "export-tree" && cfg.format == "human") cfg.format = "dot";
    Runner run(cfg, out);
    if (name == "psp") return run.psp();
    if (name == "minrate") return run.minrate();
    if (name == "region-check") return run.region_check();
    if (name == "two-stage") return run.two_stage_cmd();
    if (name == "multi-stage") return run.multi_stage();
    if (name == "complimentary") return run.complimentary();
    if (name == "validate") return run.validate();
    if (name == "simulate") return run.simulate();
    return run.export_tree();
  } catch (const UsageError& e) {
    err << "coso: " << e.what() << "\n";
    return 2;
  } catch (const Error& e) {
    err << "coso: " << e.what() << "\n";
    return 1;
  } catch (const nlohmann::json::exception& e) {
    err << "coso: " << e.what() << "\n";
    return 1;
  }
}

}  // namespace coso
