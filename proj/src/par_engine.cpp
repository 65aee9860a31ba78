#include "coso/par_engine.hpp"

#include <algorithm>

#include "coso/errors.hpp"
#include "coso/limits.hpp"

namespace coso {

PwlFn residual_entropy(const EntropyOracle& oracle, UserSet x) {
  return PwlFn::affine(Rational(1), oracle.entropy(x) - oracle.total(), Rational(0), oracle.total());
}

std::vector<Rational> ParOutput::rates_at(const Rational& alpha) const {
  std::vector<Rational> out;
  out.reserve(rates.size());
  for (const auto& r : rates) out.push_back(r(alpha));
  return out;
}

Rational ParOutput::sum_at(UserSet x, const Rational& alpha) const {
  Rational s;
  x.for_each([&](int i) { s += rate(i, alpha); });
  return s;
}

std::vector<int> identity_ordering(const EntropyOracle& oracle) {
  std::vector<int> out(static_cast<std::size_t>(oracle.size()));
  for (int i = 0; i < oracle.size(); ++i) out[static_cast<std::size_t>(i)] = i;
  return out;
}

std::vector<int> ordering_from_ids(const EntropyOracle& oracle, const std::vector<int>& ids) {
  std::vector<int> out;
  UserSet seen;
  for (int id : ids) {
    const int i = oracle.index_of(id);
    if (seen.contains(i)) throw DomainError("ordering repeats user " + std::to_string(id));
    seen = seen.with(i);
    out.push_back(i);
  }
  if (seen != oracle.ground()) throw DomainError("ordering is not a permutation of the users");
  return out;
}

PwlFn fusion_cost(const EntropyOracle& oracle, const std::vector<PwlFn>& rates, int phi,
                  const std::vector<UserSet>& family) {
  if (std::find(family.begin(), family.end(), UserSet::single(phi)) == family.end()) {
    throw DomainError("fusion family must contain the singleton of the incoming user");
  }
  UserSet u;
  for (auto b : family) u |= b;
  PwlFn cost = residual_entropy(oracle, u);
  u.for_each([&](int j) { cost = cost - rates.at(static_cast<std::size_t>(j)); });
  return cost;
}

TruncationValue dilworth_truncation_bruteforce(const EntropyOracle& oracle, UserSet x, const Rational& alpha,
                                               Exec exec) {
  return dilworth_bruteforce(oracle, x, alpha, exec);
}

ParEngine::ParEngine(const EntropyOracle& oracle, std::vector<int> ordering, Exec exec)
    : oracle_(&oracle), exec_(exec) {
  if (oracle.size() > par_user_limit()) {
    throw LimitError("fusion-family search over " + std::to_string(oracle.size()) + " users exceeds the limit of " +
                     std::to_string(par_user_limit()));
  }
  UserSet seen;
  for (int i : ordering) {
    if (i < 0 || i >= oracle.size() || seen.contains(i)) throw DomainError("ordering is not a permutation of V");
    seen = seen.with(i);
  }
  if (seen != oracle.ground()) throw DomainError("ordering is not a permutation of V");
  out_.ordering = std::move(ordering);

  const Rational lo(0);
  const Rational& hi = oracle.total();
  out_.rates.assign(static_cast<std::size_t>(oracle.size()), PwlFn::affine(Rational(1), -hi, lo, hi));
  const int first = out_.ordering.front();
  out_.rates[static_cast<std::size_t>(first)] = residual_entropy(oracle, UserSet::single(first));
  const UserSet prefix = UserSet::single(first);
  out_.partition = Segmented<Partition>(lo, hi, Partition::singletons(prefix));
  out_.snapshots.push_back({prefix, out_.partition, out_.rates});
  out_.stats.families.push_back(1);
  out_.stats.envelopes.push_back(0);
}

namespace {

// Minimal union among the witnesses; it must lie inside every other one.
std::size_t minimal_witness(const std::vector<std::size_t>& ws, const std::vector<UserSet>& unions) {
  std::size_t best = ws.front();
  for (auto s : ws) {
    if (unions[s].size() < unions[best].size()) best = s;
  }
  for (auto s : ws) {
    if (!unions[best].subset_of(unions[s])) {
      throw InternalError("fusion minimizers have no inclusion-minimal union");
    }
  }
  return best;
}

}  // namespace

void ParEngine::advance() {
  if (done()) throw DomainError("all users already processed");
  const EntropyOracle& oracle = *oracle_;
  const std::size_t i = step();
  const int phi = out_.ordering[i];
  const Segmented<Partition>& q = out_.partition;
  const Rational& lo = q.lo();

  std::vector<Rational> nb{lo};
  std::vector<Partition> np;
  std::vector<Rational> ib{lo};
  std::vector<Affine> ip;
  std::size_t families = 0;

  for (std::size_t piece = 0; piece < q.pieces(); ++piece) {
    const Rational& a = q.piece_lo(piece);
    const Rational& b = q.piece_hi(piece);
    const Partition& p = q.value(piece);
    const std::vector<UserSet>& blocks = p.blocks();

    std::vector<PwlFn> rr(out_.rates.size());
    p.carrier().with(phi).for_each(
        [&](int j) { rr[static_cast<std::size_t>(j)] = out_.rates[static_cast<std::size_t>(j)].restrict(a, b); });
    std::vector<PwlFn> costs = fusion_cost_table(oracle, phi, blocks, rr, exec_);
    families += costs.size();

    std::vector<UserSet> unions(costs.size());
    std::vector<std::pair<std::size_t, PwlFn>> cands;
    cands.reserve(costs.size());
    for (std::size_t s = 0; s < costs.size(); ++s) {
      UserSet u = UserSet::single(phi);
      for (std::size_t k = 0; k < blocks.size(); ++k) {
        if ((s >> k) & 1U) u |= blocks[k];
      }
      unions[s] = u;
      cands.emplace_back(s, std::move(costs[s]));
    }
    auto env = lower_envelope_with_witnesses(cands);

    const Partition grown = p.extended(phi);
    for (const auto& [span, ws] : env.witnesses) {
      // The left end of a later segment belongs to the segment before it.
      if (piece > 0 && span.is_point() && span.lo == a) continue;
      const std::size_t s = minimal_witness(ws, unions);
      std::vector<UserSet> fused{UserSet::single(phi)};
      for (std::size_t k = 0; k < blocks.size(); ++k) {
        if ((s >> k) & 1U) fused.push_back(blocks[k]);
      }
      Partition next = grown.merged(fused);
      if (span.is_point()) {
        if (np.empty()) {
          nb.push_back(span.lo);
          np.push_back(std::move(next));
        } else if (np.back() != next) {
          throw InternalError("tie point resolves differently from the segment on its left");
        }
        continue;
      }
      nb.push_back(span.hi);
      np.push_back(std::move(next));
    }

    const PwlFn& v = env.value;
    for (std::size_t j = 0; j < v.pieces(); ++j) {
      if (v.piece_lo(j) == v.piece_hi(j) && (piece > 0 || j > 0)) continue;
      ib.push_back(v.piece_hi(j));
      ip.push_back(v.part(j));
    }
  }

  PwlFn inc = PwlFn::from_pieces(std::move(ib), std::move(ip));
  auto& r = out_.rates[static_cast<std::size_t>(phi)];
  r = r + inc;
  if (!r.is_continuous()) throw InternalError("rate profile lost continuity");

  out_.partition = Segmented<Partition>::from_pieces(std::move(nb), std::move(np));
  const UserSet prefix = out_.snapshots.back().prefix.with(phi);
  out_.snapshots.push_back({prefix, out_.partition, out_.rates});
  out_.stats.families.push_back(families);
  out_.stats.envelopes.push_back(q.pieces());
}

ParOutput ParEngine::finish() {
  while (!done()) advance();
  return out_;
}

ParOutput par(const EntropyOracle& oracle, const std::vector<int>& ordering, Exec exec) {
  return ParEngine(oracle, ordering, exec).finish();
}

std::vector<Rational> Psp::critical_points() const {
  std::vector<Rational> out(alphas.begin() + 1, alphas.end());
  std::reverse(out.begin(), out.end());
  return out;
}

Psp psp_from_segments(const Segmented<Partition>& q, const Rational& top) {
  Psp psp;
  const Partition whole = Partition::whole(q.value(0).carrier());
  // Coarsest first.
  for (std::size_t j = q.pieces(); j-- > 0;) {
    psp.alphas.push_back(q.piece_hi(j));
    psp.partitions.push_back(q.value(j));
  }
  if (psp.partitions.front() != whole) {
    psp.alphas.insert(psp.alphas.begin(), top);
    psp.partitions.insert(psp.partitions.begin(), whole);
  }
  psp.alphas.front() = top;
  return psp;
}

Psp extract_psp(const ParOutput& out) {
  return psp_from_segments(out.partition, out.partition.hi());
}

}  // namespace coso
