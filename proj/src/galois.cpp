#include "coso/galois.hpp"

#include <algorithm>
#include <map>
#include <memory>
#include <mutex>

#include "coso/errors.hpp"

namespace coso {

namespace {

bool is_prime(unsigned n) {
  if (n < 2) return false;
  for (unsigned d = 2; d * d <= n; ++d) {
    if (n % d == 0) return false;
  }
  return true;
}

}  // namespace

GaloisField::GaloisField(unsigned q) : q_(q), binary_(q == 256) {
  if (!binary_ && !(q < 256 && is_prime(q))) {
    throw DomainError("unsupported field size " + std::to_string(q) + " (need a prime below 256, or 256)");
  }
  if (binary_) {
    // 3 generates the multiplicative group for the AES polynomial.
    unsigned x = 1;
    for (int i = 0; i < 255; ++i) {
      exp_[i] = static_cast<std::uint8_t>(x);
      log_[x] = static_cast<std::uint8_t>(i);
      unsigned doubled = x << 1;
      if (doubled & 0x100) doubled ^= 0x11B;
      x = doubled ^ x;
    }
    for (int i = 255; i < 512; ++i) exp_[i] = exp_[i - 255];
  }
}

GaloisField::Element GaloisField::mul(Element a, Element b) const {
  if (a == 0 || b == 0) return 0;
  if (binary_) return exp_[log_[a] + log_[b]];
  return static_cast<Element>((static_cast<unsigned>(a) * b) % q_);
}

GaloisField::Element GaloisField::inv(Element a) const {
  if (a == 0) throw DomainError("inverse of zero");
  if (binary_) return exp_[255 - log_[a]];
  // Fermat: a^(p-2)
  unsigned result = 1;
  unsigned base = a;
  for (unsigned e = q_ - 2; e > 0; e >>= 1) {
    if (e & 1U) result = result * base % q_;
    base = base * base % q_;
  }
  return static_cast<Element>(result);
}

const GaloisField& galois_field(unsigned q) {
  static std::mutex mutex;
  static std::map<unsigned, std::unique_ptr<GaloisField>> fields;
  std::lock_guard lock(mutex);
  auto& slot = fields[q];
  if (!slot) slot = std::make_unique<GaloisField>(q);
  return *slot;
}

Subspace::Subspace(const GaloisField& field, std::size_t dim) : field_(&field), dim_(dim) {}

Row Subspace::reduce(Row row) const {
  if (row.size() != dim_) throw DomainError("row length does not match subspace dimension");
  const GaloisField& f = *field_;
  for (std::size_t k = 0; k < basis_.size(); ++k) {
    const std::size_t p = pivots_[k];
    const auto c = row[p];
    if (c == 0) continue;
    const Row& b = basis_[k];
    for (std::size_t j = p; j < dim_; ++j) {
      if (b[j] != 0) row[j] = f.sub(row[j], f.mul(c, b[j]));
    }
  }
  return row;
}

bool Subspace::insert(Row row) {
  row = reduce(std::move(row));
  auto lead = std::find_if(row.begin(), row.end(), [](auto v) { return v != 0; });
  if (lead == row.end()) return false;
  const GaloisField& f = *field_;
  const std::size_t p = static_cast<std::size_t>(lead - row.begin());
  const auto scale = f.inv(row[p]);
  for (std::size_t j = p; j < dim_; ++j) row[j] = f.mul(row[j], scale);
  // Keep the basis fully reduced: clear column p in the existing rows.
  for (Row& b : basis_) {
    const auto c = b[p];
    if (c == 0) continue;
    for (std::size_t j = p; j < dim_; ++j) {
      if (row[j] != 0) b[j] = f.sub(b[j], f.mul(c, row[j]));
    }
  }
  auto pos = std::lower_bound(pivots_.begin(), pivots_.end(), p);
  const auto idx = pos - pivots_.begin();
  pivots_.insert(pos, p);
  basis_.insert(basis_.begin() + idx, std::move(row));
  return true;
}

bool Subspace::contains(const Row& row) const {
  const Row r = reduce(row);
  return std::all_of(r.begin(), r.end(), [](auto v) { return v == 0; });
}

bool Subspace::contains(const Subspace& other) const {
  return std::all_of(other.basis_.begin(), other.basis_.end(), [&](const Row& r) { return contains(r); });
}

Subspace Subspace::sum(const Subspace& other) const {
  if (other.dim_ != dim_ || !(*other.field_ == *field_)) throw DomainError("subspace shape mismatch");
  Subspace out = *this;
  for (const Row& r : other.basis_) out.insert(r);
  return out;
}

// Zassenhaus: reduce [a | a] and [b | 0]; rows of the echelon form whose left
// half vanishes span the intersection.
Subspace Subspace::intersect(const Subspace& other) const {
  if (other.dim_ != dim_ || !(*other.field_ == *field_)) throw DomainError("subspace shape mismatch");
  Subspace joint(*field_, 2 * dim_);
  for (const Row& a : basis_) {
    Row r(2 * dim_, 0);
    std::copy(a.begin(), a.end(), r.begin());
    std::copy(a.begin(), a.end(), r.begin() + static_cast<std::ptrdiff_t>(dim_));
    joint.insert(std::move(r));
  }
  for (const Row& b : other.basis_) {
    Row r(2 * dim_, 0);
    std::copy(b.begin(), b.end(), r.begin());
    joint.insert(std::move(r));
  }
  Subspace out(*field_, dim_);
  for (std::size_t k = 0; k < joint.basis_.size(); ++k) {
    if (joint.pivots_[k] >= dim_) {
      out.insert(Row(joint.basis_[k].begin() + static_cast<std::ptrdiff_t>(dim_), joint.basis_[k].end()));
    }
  }
  return out;
}

std::size_t matrix_rank(const GaloisField& field, const std::vector<Row>& rows, std::size_t dim) {
  Subspace s(field, dim);
  for (const Row& r : rows) s.insert(r);
  return s.rank();
}

}  // namespace coso
