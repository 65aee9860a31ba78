#pragma once

// Template part of lower_envelope_with_witnesses; included from pwl.hpp.

namespace coso {

namespace detail {

// Merges adjacent spans with equal witness sets. Values are not kept.
void merge_spans(std::vector<EnvelopeSpan>& spans);

// Union of all bounds, keeping a doubled lower bound if any function has a
// degenerate first piece.
std::vector<Rational> merged_bounds(const std::vector<const PwlFn*>& fns);

// Assembles the envelope value from unmerged spans.
PwlFn envelope_value(const std::vector<EnvelopeSpan>& spans);

}  // namespace detail

template <typename W>
Envelope<W> lower_envelope_with_witnesses(const std::vector<std::pair<W, PwlFn>>& candidates) {
  if (candidates.empty()) throw DomainError("lower envelope of an empty candidate list");
  std::vector<const PwlFn*> fns;
  for (const auto& c : candidates) {
    if (c.second.lo() != candidates.front().second.lo() || c.second.hi() != candidates.front().second.hi()) {
      throw DomainError("envelope candidates have different domains");
    }
    fns.push_back(&c.second);
  }
  const std::vector<Rational> bounds = detail::merged_bounds(fns);
  std::vector<EnvelopeSpan> all;
  for (std::size_t e = 0; e + 1 < bounds.size(); ++e) {
    const Rational& a = bounds[e];
    const Rational& b = bounds[e + 1];
    // Each candidate is a single affine part here: the one owning b.
    std::vector<Affine> lines;
    lines.reserve(candidates.size());
    for (const auto* f : fns) lines.push_back(f->part(f->locate(b)));
    auto spans = affine_envelope(Span{a, b, e == 0, true}, lines);
    all.insert(all.end(), spans.begin(), spans.end());
  }

  Envelope<W> out;
  out.value = detail::envelope_value(all);
  detail::merge_spans(all);
  for (const auto& s : all) {
    std::vector<W> ws;
    ws.reserve(s.witnesses.size());
    for (auto idx : s.witnesses) ws.push_back(candidates[idx].first);
    out.witnesses.emplace_back(s.span, std::move(ws));
  }
  return out;
}

}  // namespace coso
