#ifndef SPS_ALGEBRA_HPP
#define SPS_ALGEBRA_HPP

#include <compare>
#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace sps {

class FieldError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class DimensionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Canonical element of F_{p^e}. For e = 1 the residue itself; for e > 1 the
/// base-p packing sum c_i p^i of the residue-polynomial coefficients.
struct Elem {
  std::uint64_t raw = 0;
  constexpr auto operator<=>(const Elem&) const = default;
};

using Vector = std::vector<Elem>;

/// Finite field F_{p^e}. Cheap to copy; the modulus and multiplication tables
/// are shared between copies.
class Field {
 public:
  /// Prime field when e = 1, otherwise the lexicographically least monic
  /// irreducible of degree e (coefficients compared from x^{e-1} down to x^0).
  static Field make(std::uint64_t p, unsigned e = 1);

  std::uint64_t characteristic() const { return p_; }
  unsigned degree() const { return e_; }
  std::uint64_t order() const { return q_; }
  /// Monic modulus, constant term first, length e + 1. {0, 1} for prime fields.
  const std::vector<std::uint64_t>& modulus() const;

  Elem zero() const { return Elem{0}; }
  Elem one() const { return Elem{1}; }
  /// Image of an integer in the prime subfield.
  Elem from_int(std::int64_t v) const;
  Elem from_coeffs(std::span<const std::uint64_t> c) const;
  std::vector<std::uint64_t> coeffs(Elem a) const;
  bool valid(Elem a) const { return a.raw < q_; }
  /// Elements enumerate as raw indices 0..q-1.
  Elem element(std::uint64_t index) const;

  Elem add(Elem a, Elem b) const {
    if (e_ == 1) {
      std::uint64_t s = a.raw + b.raw;
      return Elem{s >= p_ ? s - p_ : s};
    }
    return add_ext(a, b);
  }
  Elem neg(Elem a) const {
    if (e_ == 1) return Elem{a.raw == 0 ? 0 : p_ - a.raw};
    return neg_ext(a);
  }
  Elem sub(Elem a, Elem b) const { return add(a, neg(b)); }
  Elem mul(Elem a, Elem b) const {
    if (e_ == 1) return Elem{(a.raw * b.raw) % p_};
    return mul_ext(a, b);
  }
  Elem inv(Elem a) const;
  Elem div(Elem a, Elem b) const { return mul(a, inv(b)); }
  Elem pow(Elem a, std::uint64_t k) const;

  bool operator==(const Field& o) const;
  std::string name() const;

 private:
  struct Impl;
  Field(std::uint64_t p, unsigned e, std::shared_ptr<const Impl> impl);

  Elem add_ext(Elem a, Elem b) const;
  Elem neg_ext(Elem a) const;
  Elem mul_ext(Elem a, Elem b) const;

  std::uint64_t p_ = 2;
  unsigned e_ = 1;
  std::uint64_t q_ = 2;
  std::shared_ptr<const Impl> impl_;
};

bool is_prime(std::uint64_t p);

/// Ring embedding of `small` into `big`; requires equal characteristic and
/// small.degree() | big.degree().
class Embedding {
 public:
  Embedding(const Field& small, const Field& big);
  Elem operator()(Elem a) const;
  const Field& source() const { return small_; }
  const Field& target() const { return big_; }

 private:
  Field small_;
  Field big_;
  std::vector<Elem> root_powers_;
};

// Vector helpers over an explicit field.
bool is_zero(const Vector& v);
Vector scale(const Field& f, const Vector& v, Elem c);
Vector add(const Field& f, const Vector& a, const Vector& b);
Vector sub(const Field& f, const Vector& a, const Vector& b);
/// a + c * b
Vector axpy(const Field& f, const Vector& a, Elem c, const Vector& b);
std::optional<std::size_t> leading_index(const Vector& v);

/// Row space in reduced row echelon form (pivot entries equal to one).
class SpanBasis {
 public:
  SpanBasis(Field f, std::size_t n);

  const Field& field() const { return field_; }
  std::size_t dim() const { return n_; }
  std::size_t rank() const { return rows_.size(); }
  const std::vector<Vector>& rows() const { return rows_; }
  const std::vector<std::size_t>& pivots() const { return pivots_; }

  /// Canonical representative of v modulo the span: pivot coordinates are zero.
  Vector reduce(const Vector& v) const;
  bool contains(const Vector& v) const;
  /// Coefficients of v in terms of rows(), or nullopt if v is not in the span.
  std::optional<Vector> coordinates(const Vector& v) const;
  /// Returns true iff v extended the span.
  bool insert(const Vector& v);
  /// Inserts every row of `other`; returns the number of new dimensions.
  std::size_t absorb(const SpanBasis& other);

  bool operator==(const SpanBasis& o) const;

 private:
  void check_dim(const Vector& v) const;

  Field field_;
  std::size_t n_;
  std::vector<Vector> rows_;  // sorted by pivot
  std::vector<std::size_t> pivots_;
};

std::pair<SpanBasis, bool> span_insert(const SpanBasis& b, const Vector& v);

/// Prefix orthogonality: every basis meets the span of the ones before it
/// only in zero.
bool spans_orthogonal(std::span<const SpanBasis> bases);

}  // namespace sps

#endif  // SPS_ALGEBRA_HPP
