#include "coso/ccde_sim.hpp"

#include <algorithm>
#include <map>
#include <random>
#include <set>

#include "coso/errors.hpp"
#include "coso/so_tree.hpp"

namespace coso {

std::size_t PacketSystem::index_of(int node_id) const {
  for (std::size_t k = 0; k < nodes.size(); ++k) {
    if (nodes[k].id == node_id) return k;
  }
  throw DomainError("no node with id " + std::to_string(node_id));
}

Subspace PacketSystem::universe() const {
  Subspace u(gf(), dim);
  for (const auto& node : nodes) u = u.sum(node.source);
  return u;
}

EntropyOracle PacketSystem::derived_oracle() const {
  const int n = static_cast<int>(nodes.size());
  if (n > 12) throw LimitError("derived oracle over more than 12 nodes");
  std::vector<Subspace> joint(std::size_t{1} << n, Subspace(gf(), dim));
  std::vector<Rational> values(joint.size());
  std::vector<int> ids;
  for (const auto& node : nodes) ids.push_back(node.id);
  for (std::size_t m = 1; m < joint.size(); ++m) {
    const int low = std::countr_zero(m);
    joint[m] = joint[m & (m - 1)].sum(nodes[static_cast<std::size_t>(low)].knowledge);
    values[m] = Rational(static_cast<long long>(joint[m].rank()), static_cast<long long>(block));
  }
  return EntropyOracle::from_table(ids, values);
}

PacketSystem instantiate(const EntropyOracle& oracle, std::size_t block) {
  if (block < 1) throw DomainError("block length must be at least 1");
  PacketSystem sys;
  sys.block = block;
  std::vector<std::vector<Row>> rows;  // per user, before replication
  std::size_t width = 0;
  switch (oracle.model()) {
    case SourceModel::kTable:
      throw DomainError("table oracles have no packet realization");
    case SourceModel::kBits: {
      std::set<std::string> all;
      for (const auto& ls : oracle.bit_labels()) all.insert(ls.begin(), ls.end());
      std::map<std::string, std::size_t> col;
      for (const auto& l : all) col.emplace(l, col.size());
      width = all.size();
      for (const auto& ls : oracle.bit_labels()) {
        std::vector<Row> user;
        for (const auto& l : ls) {
          Row r(width, 0);
          r[col[l]] = 1;
          user.push_back(std::move(r));
        }
        rows.push_back(std::move(user));
      }
      break;
    }
    case SourceModel::kLinear:
      sys.field = oracle.linear_field() == 2 ? 256 : oracle.linear_field();
      width = oracle.linear_columns();
      rows = oracle.linear_rows();
      break;
  }
  sys.dim = width * block;
  for (int i = 0; i < oracle.size(); ++i) {
    Subspace src(sys.gf(), sys.dim);
    for (const auto& r : rows[static_cast<std::size_t>(i)]) {
      for (std::size_t t = 0; t < block; ++t) {
        Row lifted(sys.dim, 0);
        for (std::size_t c = 0; c < width; ++c) lifted[c * block + t] = r[c];
        src.insert(std::move(lifted));
      }
    }
    const int id = oracle.user_id(i);
    sys.nodes.push_back({id, node_name({id}, false), {id}, src, src});
  }
  return sys;
}

namespace {

std::uint64_t splitmix(std::uint64_t& x) {
  std::uint64_t z = (x += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

Row combine(const GaloisField& gf, const std::vector<Row>& basis, std::size_t dim, std::uint64_t& state) {
  Row out(dim, 0);
  for (const auto& b : basis) {
    const auto c = static_cast<GaloisField::Element>(1 + splitmix(state) % (gf.order() - 1));
    for (std::size_t j = 0; j < dim; ++j) out[j] = gf.add(out[j], gf.mul(c, b[j]));
  }
  return out;
}

constexpr int kGreedyCombos = 8;

// Picks the row the sender transmits next.
Row next_row(const PacketSystem& sys, std::size_t sender, const std::vector<std::size_t>& target,
             const Subspace& span, Coding coding, std::mt19937_64& rng, std::uint64_t tag) {
  const Subspace avail = sys.nodes[sender].knowledge.intersect(span);
  if (avail.rank() == 0) return Row(sys.dim, 0);
  if (coding == Coding::kRandom) {
    std::uint64_t state = rng();
    return combine(sys.gf(), avail.basis(), sys.dim, state);
  }
  // Uncoded basis rows can be innovative for everyone yet waste capacity, so
  // only coded combinations compete once there is a choice.
  if (avail.rank() == 1) return avail.basis().front();
  std::vector<Row> cands;
  std::uint64_t state = tag;
  for (int k = 0; k < kGreedyCombos; ++k) {
    cands.push_back(combine(sys.gf(), avail.basis(), sys.dim, state));
  }
  std::size_t best = 0;
  int best_score = -1;
  for (std::size_t c = 0; c < cands.size(); ++c) {
    int score = 0;
    for (auto j : target) {
      if (j != sender && !sys.nodes[j].knowledge.contains(cands[c])) ++score;
    }
    if (score > best_score) {
      best_score = score;
      best = c;
    }
  }
  return cands[best];
}

// One stage: each target broadcasts its quota, everyone overhears.
StageResult run_stage(PacketSystem& sys, int stage, const std::vector<std::vector<std::size_t>>& targets,
                      const std::vector<std::size_t>& quota, Coding coding, std::mt19937_64& rng) {
  StageResult res;
  res.stage = stage;
  for (const auto& target : targets) {
    TargetResult tr;
    Subspace span(sys.gf(), sys.dim);
    std::vector<std::size_t> members = target;
    std::sort(members.begin(), members.end(), [&](auto a, auto b) { return sys.nodes[a].id < sys.nodes[b].id; });
    for (auto j : members) {
      span = span.sum(sys.nodes[j].source);
      tr.target.push_back(sys.nodes[j].id);
    }
    std::vector<std::size_t> left;
    for (auto j : members) left.push_back(quota[j]);
    std::vector<std::size_t> sent(members.size(), 0);
    bool more = true;
    while (more) {
      more = false;
      for (std::size_t s = 0; s < members.size(); ++s) {
        if (left[s] == 0) continue;
        const std::size_t j = members[s];
        const std::uint64_t tag = (static_cast<std::uint64_t>(stage) << 40) ^
                                  (static_cast<std::uint64_t>(sys.nodes[j].id) << 20) ^ sys.transcript.size();
        Row row = next_row(sys, j, members, span, coding, rng, tag);
        for (auto& node : sys.nodes) node.knowledge.insert(row);
        sys.transcript.push_back({stage, sys.nodes[j].id, std::move(row)});
        --left[s];
        ++sent[s];
        ++res.rows;
        more = more || left[s] > 0;
      }
    }
    for (std::size_t s = 0; s < members.size(); ++s) {
      if (sent[s] > 0) tr.sent.emplace_back(sys.nodes[members[s]].id, sent[s]);
    }
    tr.decoded = std::all_of(members.begin(), members.end(),
                             [&](auto j) { return sys.nodes[j].knowledge.contains(span); });
    res.targets.push_back(std::move(tr));
  }
  for (const auto& node : sys.nodes) res.ranks.emplace_back(node.id, node.knowledge.rank());
  return res;
}

std::size_t scaled(const Rational& rate, std::size_t block) {
  const Rational v = rate * static_cast<long long>(block);
  if (!is_integer(v)) {
    throw DomainError("rate " + to_string(rate) + " times block length " + std::to_string(block) +
                      " is not an integer");
  }
  if (v < 0) throw DomainError("negative rate increment");
  return static_cast<std::size_t>(numerator(v));
}

}  // namespace

std::size_t block_length_for(const SoPlan& plan) {
  BigInt n = 1;
  for (const auto& st : plan.stages) {
    for (const auto& r : st.rates) n = boost::multiprecision::lcm(n, denominator(r));
  }
  return static_cast<std::size_t>(n);
}

SimReport simulate_plan(PacketSystem& system, const EntropyOracle& oracle, const SoPlan& plan, Coding coding,
                        std::uint64_t seed) {
  if (system.nodes.size() != static_cast<std::size_t>(oracle.size())) {
    throw DomainError("packet system does not match the plan's users");
  }
  for (int i = 0; i < oracle.size(); ++i) {
    if (system.nodes[static_cast<std::size_t>(i)].id != oracle.user_id(i)) {
      throw DomainError("packet system does not match the plan's users");
    }
  }
  std::mt19937_64 rng(seed);
  SimReport rep;
  rep.block = system.block;
  RateVector prev(static_cast<std::size_t>(oracle.size()), Rational(0));
  for (std::size_t k = 0; k < plan.stages.size(); ++k) {
    const SoStage& st = plan.stages[k];
    std::vector<std::size_t> quota(prev.size());
    for (std::size_t i = 0; i < prev.size(); ++i) quota[i] = scaled(st.rates[i] - prev[i], system.block);
    std::vector<std::vector<std::size_t>> targets;
    UserSet covered;
    for (auto c : st.targets) {
      std::vector<std::size_t> t;
      c.for_each([&](int i) { t.push_back(static_cast<std::size_t>(i)); });
      targets.push_back(std::move(t));
      covered |= c;
    }
    for (std::size_t i = 0; i < quota.size(); ++i) {
      if (quota[i] > 0 && !covered.contains(static_cast<int>(i))) {
        throw DomainError("stage " + std::to_string(k + 1) + " assigns rate to a user outside its targets");
      }
    }
    rep.stages.push_back(run_stage(system, static_cast<int>(k + 1), targets, quota, coding, rng));
    rep.transmissions += rep.stages.back().rows;
    prev = st.rates;
  }
  rep.expected = sum_over(prev, oracle.ground()) * static_cast<long long>(system.block);
  rep.decoded = !rep.stages.empty();
  for (const auto& s : rep.stages) {
    for (const auto& t : s.targets) rep.decoded = rep.decoded && t.decoded;
  }
  return rep;
}

PacketSystem fuse_superuser(const PacketSystem& system, const std::vector<int>& members) {
  if (members.empty()) throw DomainError("nothing to fuse");
  if (members.size() == 1) {
    system.index_of(members.front());
    return system;
  }
  std::vector<std::size_t> idx;
  for (int id : members) idx.push_back(system.index_of(id));
  Subspace source(system.gf(), system.dim);
  Subspace knowledge(system.gf(), system.dim);
  std::vector<int> users;
  for (auto k : idx) {
    source = source.sum(system.nodes[k].source);
    knowledge = knowledge.sum(system.nodes[k].knowledge);
    users.insert(users.end(), system.nodes[k].users.begin(), system.nodes[k].users.end());
  }
  for (auto k : idx) {
    if (!system.nodes[k].knowledge.contains(source)) {
      throw DomainError("node " + system.nodes[k].name + " has not attained local omniscience");
    }
  }
  std::sort(users.begin(), users.end());
  PacketSystem out = system;
  out.nodes.clear();
  for (std::size_t k = 0; k < system.nodes.size(); ++k) {
    if (std::find(idx.begin(), idx.end(), k) == idx.end()) out.nodes.push_back(system.nodes[k]);
  }
  out.nodes.push_back({users.front(), node_name(users, true), users, source, knowledge});
  std::sort(out.nodes.begin(), out.nodes.end(), [](const SimNode& a, const SimNode& b) { return a.id < b.id; });
  return out;
}

RecursiveTrace recursive_two_stage(PacketSystem system, Coding coding, std::uint64_t seed) {
  RecursiveTrace trace;
  std::mt19937_64 rng(seed);
  const Subspace universe = system.universe();
  auto omniscient = [&] {
    return std::all_of(system.nodes.begin(), system.nodes.end(),
                       [&](const SimNode& n) { return n.knowledge.contains(universe); });
  };
  int stage = 0;
  while (!omniscient()) {
    const EntropyOracle oracle = system.derived_oracle();
    const TwoStageResult res = two_stage(oracle, identity_ordering(oracle), Model::kAco);
    RecursiveRound round;
    for (const auto& n : system.nodes) round.nodes.push_back(n.id);
    UserSet target;
    RateVector rates;
    if (res.found && res.subset != oracle.ground()) {
      target = res.subset;
      round.alpha = res.alpha_hat;
      rates = res.rates;
    } else {
      round.global = true;
      target = oracle.ground();
      if (res.found) {
        round.alpha = res.alpha_hat;
        rates = res.rates;
      } else {
        round.alpha = extract_psp(*res.global).min_sum_rate();
        rates = res.global->rates_at(round.alpha);
      }
    }
    std::vector<std::size_t> quota(rates.size(), 0);
    std::vector<std::size_t> members;
    target.for_each([&](int i) {
      members.push_back(static_cast<std::size_t>(i));
      quota[static_cast<std::size_t>(i)] = scaled(rates[static_cast<std::size_t>(i)], system.block);
      round.subset.push_back(oracle.user_id(i));
      round.rates.emplace_back(oracle.user_id(i), rates[static_cast<std::size_t>(i)]);
    });
    StageResult sr = run_stage(system, ++stage, {members}, quota, coding, rng);
    round.rows = sr.rows;
    round.decoded = sr.targets.front().decoded;
    trace.transmissions += sr.rows;
    trace.rounds.push_back(round);
    if (!round.decoded) break;
    if (round.global) break;
    system = fuse_superuser(system, round.subset);
  }
  trace.omniscient = omniscient();
  return trace;
}

}  // namespace coso
