#include "coso/pwl.hpp"

#include <algorithm>

namespace coso {

PieceLayout::PieceLayout(Rational lo, Rational hi) : bounds_{std::move(lo), std::move(hi)} {
  if (bounds_[1] < bounds_[0]) throw DomainError("empty domain");
}

std::size_t PieceLayout::locate(const Rational& alpha) const {
  if (!in_domain(alpha)) {
    throw DomainError("alpha " + to_string(alpha) + " outside [" + to_string(lo()) + ", " + to_string(hi()) + "]");
  }
  auto it = std::lower_bound(bounds_.begin() + 1, bounds_.end(), alpha);
  return static_cast<std::size_t>(it - (bounds_.begin() + 1));
}

PwlFn PwlFn::affine(const Rational& slope, const Rational& intercept, const Rational& lo, const Rational& hi) {
  return from_pieces({lo, hi}, {Affine{slope, intercept}});
}

PwlFn PwlFn::from_pieces(std::vector<Rational> bounds, std::vector<Affine> parts) {
  if (parts.empty() || bounds.size() != parts.size() + 1) throw DomainError("piece layout mismatch");
  if (bounds[1] < bounds[0]) throw DomainError("piece bounds must increase");
  for (std::size_t j = 1; j + 1 < bounds.size(); ++j) {
    if (!(bounds[j] < bounds[j + 1])) throw DomainError("piece bounds must increase");
  }
  PwlFn f;
  f.bounds_ = std::move(bounds);
  f.parts_ = std::move(parts);
  f.canonicalize();
  return f;
}

void PwlFn::canonicalize() {
  std::vector<Rational> b{bounds_.front()};
  std::vector<Affine> p;
  for (std::size_t j = 0; j < parts_.size(); ++j) {
    const Rational& lo = bounds_[j];
    if (!p.empty()) {
      bool merge = p.back() == parts_[j];
      // A degenerate first piece only matters if it changes the value at lo.
      if (!merge && p.size() == 1 && b[0] == b[1] && p.back()(lo) == parts_[j](lo)) {
        p.back() = parts_[j];
        merge = true;
      }
      if (merge) {
        b.back() = bounds_[j + 1];
        continue;
      }
    }
    p.push_back(parts_[j]);
    b.push_back(bounds_[j + 1]);
  }
  bounds_ = std::move(b);
  parts_ = std::move(p);
}

bool PwlFn::is_continuous() const {
  for (std::size_t j = 1; j < parts_.size(); ++j) {
    if (parts_[j - 1](bounds_[j]) != parts_[j](bounds_[j])) return false;
  }
  return true;
}

std::vector<Rational> PwlFn::breakpoints() const {
  return std::vector<Rational>(bounds_.begin() + 1, bounds_.end() - 1);
}

namespace {

PwlFn combine(const PwlFn& f, const PwlFn& g, bool subtract) {
  if (f.lo() != g.lo() || f.hi() != g.hi()) throw DomainError("pwl domain mismatch");
  std::vector<Rational> bounds = detail::merged_bounds({&f, &g});
  std::vector<Affine> parts;
  for (std::size_t e = 0; e + 1 < bounds.size(); ++e) {
    const Rational& b = bounds[e + 1];
    const Affine& x = f.part(f.locate(b));
    const Affine& y = g.part(g.locate(b));
    parts.push_back(subtract ? x - y : x + y);
  }
  return PwlFn::from_pieces(std::move(bounds), std::move(parts));
}

}  // namespace

PwlFn operator+(const PwlFn& f, const PwlFn& g) { return combine(f, g, false); }
PwlFn operator-(const PwlFn& f, const PwlFn& g) { return combine(f, g, true); }

PwlFn PwlFn::restrict(const Rational& lo, const Rational& hi) const {
  if (hi < lo || !in_domain(lo) || !in_domain(hi)) throw DomainError("restriction outside domain");
  std::vector<Rational> b{lo};
  std::vector<Affine> p;
  for (std::size_t j = locate(lo); j < parts_.size(); ++j) {
    const Rational end = std::min(bounds_[j + 1], hi);
    if (!p.empty() && end == b.back()) break;
    p.push_back(parts_[j]);
    b.push_back(end);
    if (end == hi) break;
  }
  return from_pieces(std::move(b), std::move(p));
}

std::vector<EnvelopeSpan> affine_envelope(const Span& span, const std::vector<Affine>& lines) {
  if (lines.empty()) throw DomainError("lower envelope of an empty candidate list");
  std::vector<EnvelopeSpan> out;

  auto at_point = [&](const Rational& x) {
    EnvelopeSpan s{Span{x, x, true, true}, {}, {}};
    Rational best = lines[0](x);
    for (std::size_t i = 1; i < lines.size(); ++i) best = std::min(best, lines[i](x));
    for (std::size_t i = 0; i < lines.size(); ++i) {
      if (lines[i](x) == best) s.witnesses.push_back(i);
    }
    s.value = Affine{Rational(0), best};
    return s;
  };

  Rational x = span.lo;
  if (span.lo_closed || span.is_point()) out.push_back(at_point(x));
  if (span.is_point()) return out;

  while (x < span.hi) {
    // Just right of x the minimum is the smallest-slope line among those
    // tied at x.
    EnvelopeSpan p = at_point(x);
    std::size_t cur = p.witnesses.front();
    for (auto i : p.witnesses) {
      if (lines[i].slope < lines[cur].slope) cur = i;
    }
    const Affine& c = lines[cur];
    Rational next = span.hi;
    for (const auto& l : lines) {
      if (l.slope < c.slope) {
        Rational t = (l.intercept - c.intercept) / (c.slope - l.slope);
        if (t > x && t < next) next = t;
      }
    }
    EnvelopeSpan open{Span{x, next, false, false}, {}, c};
    for (std::size_t i = 0; i < lines.size(); ++i) {
      if (lines[i] == c) open.witnesses.push_back(i);
    }
    out.push_back(std::move(open));
    out.push_back(at_point(next));
    x = next;
  }
  return out;
}

namespace detail {

void merge_spans(std::vector<EnvelopeSpan>& spans) {
  std::vector<EnvelopeSpan> out;
  for (auto& s : spans) {
    if (!out.empty() && out.back().witnesses == s.witnesses) {
      out.back().span.hi = s.span.hi;
      out.back().span.hi_closed = s.span.hi_closed;
      continue;
    }
    out.push_back(std::move(s));
  }
  spans = std::move(out);
}

std::vector<Rational> merged_bounds(const std::vector<const PwlFn*>& fns) {
  std::vector<Rational> all;
  bool degenerate = false;
  for (const auto* f : fns) {
    all.insert(all.end(), f->bounds().begin(), f->bounds().end());
    if (f->pieces() > 1 && f->piece_lo(0) == f->piece_hi(0)) degenerate = true;
  }
  std::sort(all.begin(), all.end());
  all.erase(std::unique(all.begin(), all.end()), all.end());
  if (all.size() == 1 || degenerate) all.insert(all.begin(), all.front());
  return all;
}

PwlFn envelope_value(const std::vector<EnvelopeSpan>& spans) {
  const Rational& lo = spans.front().span.lo;
  std::vector<Rational> b{lo};
  std::vector<Affine> p;
  for (std::size_t k = 0; k < spans.size(); ++k) {
    const auto& s = spans[k];
    if (!s.span.is_point()) {
      b.push_back(s.span.hi);
      p.push_back(s.value);
    } else if (k == 0) {
      // Value pinned at lo; canonicalize drops it when it matches.
      b.push_back(lo);
      p.push_back(s.value);
    }
  }
  return PwlFn::from_pieces(std::move(b), std::move(p));
}

}  // namespace detail

}  // namespace coso
