#pragma once

#include <array>
#include <cstdint>
#include <vector>

namespace coso {

// Arithmetic over GF(p) for a prime p < 256, or over GF(2^8) with the AES
// reduction polynomial x^8 + x^4 + x^3 + x + 1.
class GaloisField {
 public:
  using Element = std::uint16_t;

  // q must be a prime below 256 or exactly 256.
  explicit GaloisField(unsigned q);

  unsigned order() const { return q_; }
  bool is_binary_extension() const { return q_ == 256; }

  Element add(Element a, Element b) const {
    return binary_ ? static_cast<Element>(a ^ b) : static_cast<Element>((a + b) % q_);
  }
  Element sub(Element a, Element b) const {
    return binary_ ? static_cast<Element>(a ^ b) : static_cast<Element>((a + q_ - b) % q_);
  }
  Element mul(Element a, Element b) const;
  Element inv(Element a) const;

  bool operator==(const GaloisField& other) const { return q_ == other.q_; }

 private:
  unsigned q_;
  bool binary_;
  std::array<std::uint8_t, 512> exp_{};
  std::array<std::uint8_t, 256> log_{};
};

using Row = std::vector<GaloisField::Element>;

// A subspace of GF(q)^dim kept as a reduced row-echelon basis.
class Subspace {
 public:
  Subspace(const GaloisField& field, std::size_t dim);

  const GaloisField& field() const { return *field_; }
  std::size_t dim() const { return dim_; }
  std::size_t rank() const { return basis_.size(); }
  const std::vector<Row>& basis() const { return basis_; }

  // Returns true when the row was not already in the span.
  bool insert(Row row);
  bool contains(const Row& row) const;
  bool contains(const Subspace& other) const;

  // Reduces `row` against the basis; the result is zero iff row is in span.
  Row reduce(Row row) const;

  Subspace sum(const Subspace& other) const;
  Subspace intersect(const Subspace& other) const;

 private:
  const GaloisField* field_;
  std::size_t dim_;
  std::vector<Row> basis_;          // sorted by pivot column
  std::vector<std::size_t> pivots_;
};

// Rank of a list of rows over the field.
std::size_t matrix_rank(const GaloisField& field, const std::vector<Row>& rows, std::size_t dim);

// Shared field instances; Subspace keeps a pointer so fields must outlive it.
const GaloisField& galois_field(unsigned q);

}  // namespace coso
