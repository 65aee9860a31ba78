#pragma once

#include <algorithm>
#include <cstddef>
#include <utility>
#include <vector>

#include "coso/errors.hpp"
#include "coso/rational.hpp"

namespace coso {

// slope * alpha + intercept
struct Affine {
  Rational slope;
  Rational intercept;

  Rational operator()(const Rational& alpha) const { return slope * alpha + intercept; }
  Affine operator+(const Affine& o) const { return {slope + o.slope, intercept + o.intercept}; }
  Affine operator-(const Affine& o) const { return {slope - o.slope, intercept - o.intercept}; }
  Affine& operator+=(const Affine& o) {
    slope += o.slope;
    intercept += o.intercept;
    return *this;
  }
  Affine& operator-=(const Affine& o) {
    slope -= o.slope;
    intercept -= o.intercept;
    return *this;
  }
  bool operator==(const Affine&) const = default;
};

// Breakpoint layout shared by PwlFn and Segmented: bounds b_0 <= b_1 < ... < b_m.
// Piece 0 covers the closed [b_0, b_1]; piece j > 0 covers (b_j, b_{j+1}].
// Only piece 0 may be degenerate (b_0 == b_1), which Segmented uses to pin a
// value to the single point alpha = b_0.
class PieceLayout {
 public:
  PieceLayout() = default;
  PieceLayout(Rational lo, Rational hi);

  const Rational& lo() const { return bounds_.front(); }
  const Rational& hi() const { return bounds_.back(); }
  std::size_t pieces() const { return bounds_.size() - 1; }
  const Rational& piece_lo(std::size_t j) const { return bounds_[j]; }
  const Rational& piece_hi(std::size_t j) const { return bounds_[j + 1]; }
  const std::vector<Rational>& bounds() const { return bounds_; }
  bool in_domain(const Rational& alpha) const { return alpha >= lo() && alpha <= hi(); }

  // Index of the piece containing alpha; throws DomainError outside.
  std::size_t locate(const Rational& alpha) const;

 protected:
  std::vector<Rational> bounds_{Rational(0), Rational(0)};
};

// Exact piecewise-linear function on a closed rational interval, kept in
// canonical form (adjacent pieces with identical affine parts merged).
class PwlFn : public PieceLayout {
 public:
  PwlFn() : PieceLayout(), parts_{Affine{}} {}
  static PwlFn affine(const Rational& slope, const Rational& intercept, const Rational& lo, const Rational& hi);
  static PwlFn constant(const Rational& value, const Rational& lo, const Rational& hi) {
    return affine(Rational(0), value, lo, hi);
  }
  // Builds from explicit bounds (size m+1) and parts (size m), then canonicalizes.
  static PwlFn from_pieces(std::vector<Rational> bounds, std::vector<Affine> parts);

  const Affine& part(std::size_t j) const { return parts_[j]; }
  const std::vector<Affine>& parts() const { return parts_; }

  Rational operator()(const Rational& alpha) const { return parts_[locate(alpha)](alpha); }
  Rational eval(const Rational& alpha) const { return (*this)(alpha); }

  // Left limit at interior points equals the value from the piece on the right.
  bool is_continuous() const;

  // Interior bounds b_1 .. b_{m-1}.
  std::vector<Rational> breakpoints() const;

  friend PwlFn operator+(const PwlFn& f, const PwlFn& g);
  friend PwlFn operator-(const PwlFn& f, const PwlFn& g);
  PwlFn& operator+=(const PwlFn& g) { return *this = *this + g; }

  // Restriction to [lo, hi], which must lie inside the domain.
  PwlFn restrict(const Rational& lo, const Rational& hi) const;

  bool operator==(const PwlFn& other) const { return bounds_ == other.bounds_ && parts_ == other.parts_; }

  // Re-applies canonical merging; idempotent.
  void canonicalize();

 private:
  std::vector<Affine> parts_;
};

// A value of type W attached to each piece of the domain.
template <typename W>
class Segmented : public PieceLayout {
 public:
  Segmented() = default;
  Segmented(const Rational& lo, const Rational& hi, W value) : PieceLayout(lo, hi), values_{std::move(value)} {}

  static Segmented from_pieces(std::vector<Rational> bounds, std::vector<W> values) {
    if (bounds.size() != values.size() + 1 || values.empty()) throw DomainError("segment layout mismatch");
    for (std::size_t j = 1; j + 1 < bounds.size(); ++j) {
      if (!(bounds[j] < bounds[j + 1])) throw DomainError("segment bounds must increase");
    }
    if (bounds[1] < bounds[0]) throw DomainError("segment bounds must increase");
    Segmented s;
    s.bounds_ = std::move(bounds);
    s.values_ = std::move(values);
    s.canonicalize();
    return s;
  }

  const W& value(std::size_t j) const { return values_[j]; }
  const std::vector<W>& values() const { return values_; }
  const W& at(const Rational& alpha) const { return values_[locate(alpha)]; }

  void canonicalize() {
    std::vector<Rational> b{bounds_.front()};
    std::vector<W> v;
    for (std::size_t j = 0; j < values_.size(); ++j) {
      // A degenerate first piece survives only when its value differs.
      if (!v.empty() && v.back() == values_[j]) {
        b.back() = bounds_[j + 1];
      } else {
        v.push_back(values_[j]);
        b.push_back(bounds_[j + 1]);
      }
    }
    bounds_ = std::move(b);
    values_ = std::move(v);
  }

  bool operator==(const Segmented& o) const { return bounds_ == o.bounds_ && values_ == o.values_; }

 private:
  std::vector<W> values_;
};

// Span of the domain with explicit open/closed ends, used for envelope
// witnesses where tie points are reported on their own.
struct Span {
  Rational lo;
  Rational hi;
  bool lo_closed = true;
  bool hi_closed = true;

  bool is_point() const { return lo == hi; }
  bool operator==(const Span&) const = default;
};

// Witness-set span of an affine lower envelope: `witnesses` are indices into
// the candidate list, ascending.
struct EnvelopeSpan {
  Span span;
  std::vector<std::size_t> witnesses;
  Affine value;
};

// Lower envelope of affine candidates over `span`, tiling it with open spans
// between tie points and point spans at each tie. Every span lists all
// candidates attaining the minimum there. `lines` must be nonempty.
std::vector<EnvelopeSpan> affine_envelope(const Span& span, const std::vector<Affine>& lines);

template <typename W>
struct Envelope {
  PwlFn value;
  // Tiles the domain; ties at crossing points appear as point spans.
  std::vector<std::pair<Span, std::vector<W>>> witnesses;
};

// Pointwise minimum of piecewise-linear candidates sharing one domain,
// together with the full set of minimizing witnesses on each maximal span.
template <typename W>
Envelope<W> lower_envelope_with_witnesses(const std::vector<std::pair<W, PwlFn>>& candidates);

}  // namespace coso

#include "coso/pwl_envelope.ipp"
