#include "sps/algebra.hpp"

#include <algorithm>
#include <limits>
#include <sstream>

namespace sps {

namespace {

using Poly = std::vector<std::uint64_t>;  // constant term first, mod p

constexpr std::uint64_t kMaxPrime = std::uint64_t{1} << 31;
constexpr std::uint64_t kMaxOrder = std::uint64_t{1} << 62;
constexpr std::uint64_t kTableOrder = std::uint64_t{1} << 16;
constexpr std::uint64_t kIrreducibleSearchBudget = 2'000'000;

void trim(Poly& a) {
  while (!a.empty() && a.back() == 0) a.pop_back();
}

std::uint64_t inv_mod(std::uint64_t a, std::uint64_t p) {
  // Fermat: p is prime.
  std::uint64_t result = 1, base = a % p, k = p - 2;
  while (k) {
    if (k & 1) result = result * base % p;
    base = base * base % p;
    k >>= 1;
  }
  return result;
}

Poly poly_mul_mod(const Poly& a, const Poly& b, const Poly& f, std::uint64_t p) {
  if (a.empty() || b.empty()) return {};
  Poly prod(a.size() + b.size() - 1, 0);
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] == 0) continue;
    for (std::size_t j = 0; j < b.size(); ++j)
      prod[i + j] = (prod[i + j] + a[i] * b[j]) % p;
  }
  // f is monic of degree e.
  const std::size_t e = f.size() - 1;
  for (std::size_t top = prod.size(); top-- > e;) {
    std::uint64_t c = prod[top];
    if (c == 0) continue;
    for (std::size_t i = 0; i < e; ++i)
      prod[top - e + i] = (prod[top - e + i] + (p - c) * f[i]) % p;
    prod[top] = 0;
  }
  trim(prod);
  return prod;
}

Poly poly_pow_mod(Poly base, std::uint64_t k, const Poly& f, std::uint64_t p) {
  Poly result{1};
  while (k) {
    if (k & 1) result = poly_mul_mod(result, base, f, p);
    base = poly_mul_mod(base, base, f, p);
    k >>= 1;
  }
  return result;
}

Poly poly_rem(Poly a, const Poly& b, std::uint64_t p) {
  trim(a);
  const std::size_t db = b.size() - 1;
  const std::uint64_t lead_inv = inv_mod(b.back(), p);
  while (a.size() >= b.size()) {
    std::uint64_t c = a.back() * lead_inv % p;
    std::size_t shift = a.size() - b.size();
    for (std::size_t i = 0; i <= db; ++i)
      a[shift + i] = (a[shift + i] + (p - c) * b[i]) % p;
    trim(a);
  }
  return a;
}

Poly poly_gcd(Poly a, Poly b, std::uint64_t p) {
  trim(a);
  trim(b);
  while (!b.empty()) {
    Poly r = poly_rem(a, b, p);
    a = std::move(b);
    b = std::move(r);
  }
  return a;
}

std::vector<std::uint64_t> prime_factors(std::uint64_t n) {
  std::vector<std::uint64_t> out;
  for (std::uint64_t t = 2; t * t <= n; ++t) {
    if (n % t == 0) {
      out.push_back(t);
      while (n % t == 0) n /= t;
    }
  }
  if (n > 1) out.push_back(n);
  return out;
}

// Rabin's irreducibility test for a monic f of degree e.
bool irreducible(const Poly& f, std::uint64_t p) {
  const std::size_t e = f.size() - 1;
  if (e == 1) return true;
  if (f[0] == 0) return false;
  const Poly x{0, 1};
  std::vector<Poly> frob(e + 1);  // frob[j] = x^{p^j} mod f
  frob[0] = x;
  for (std::size_t j = 1; j <= e; ++j) frob[j] = poly_pow_mod(frob[j - 1], p, f, p);
  if (frob[e] != x) return false;
  for (std::uint64_t t : prime_factors(e)) {
    Poly h = frob[e / t];
    h.resize(std::max<std::size_t>(h.size(), 2), 0);
    h[1] = (h[1] + p - 1) % p;
    Poly g = poly_gcd(f, h, p);
    if (g.size() != 1) return false;
  }
  return true;
}

}  // namespace

bool is_prime(std::uint64_t p) {
  if (p < 2) return false;
  for (std::uint64_t t = 2; t * t <= p; ++t)
    if (p % t == 0) return false;
  return true;
}

struct Field::Impl {
  Poly modulus;
  std::vector<std::uint64_t> pow_p;  // p^i, i < e
  // Discrete log tables for small extension fields; empty otherwise.
  std::vector<std::uint32_t> exp_table;
  std::vector<std::uint32_t> log_table;
};

Field::Field(std::uint64_t p, unsigned e, std::shared_ptr<const Impl> impl)
    : p_(p), e_(e), impl_(std::move(impl)) {
  q_ = 1;
  for (unsigned i = 0; i < e_; ++i) q_ *= p_;
}

Field Field::make(std::uint64_t p, unsigned e) {
  if (!is_prime(p)) throw FieldError("characteristic " + std::to_string(p) + " is not prime");
  if (e < 1) throw FieldError("extension degree must be at least 1");
  if (p >= kMaxPrime) throw FieldError("characteristic exceeds 2^31");
  std::uint64_t q = 1;
  for (unsigned i = 0; i < e; ++i) {
    if (q > kMaxOrder / p) throw FieldError("field order exceeds 2^62");
    q *= p;
  }

  auto impl = std::make_shared<Impl>();
  impl->pow_p.resize(e);
  impl->pow_p[0] = 1;
  for (unsigned i = 1; i < e; ++i) impl->pow_p[i] = impl->pow_p[i - 1] * p;

  if (e == 1) {
    impl->modulus = {0, 1};
    return Field(p, e, impl);
  }

  // Candidates in ascending base-p index of the non-leading coefficients.
  const std::uint64_t candidates = q;
  bool found = false;
  for (std::uint64_t idx = 0; idx < candidates; ++idx) {
    if (idx >= kIrreducibleSearchBudget) throw FieldError("irreducible search budget exceeded");
    if (idx % p == 0) continue;  // zero constant term
    Poly f(e + 1);
    std::uint64_t rest = idx;
    for (unsigned i = 0; i < e; ++i) {
      f[i] = rest % p;
      rest /= p;
    }
    f[e] = 1;
    if (irreducible(f, p)) {
      impl->modulus = std::move(f);
      found = true;
      break;
    }
  }
  if (!found) throw FieldError("no irreducible polynomial found");

  Field field(p, e, impl);
  if (q <= kTableOrder) {
    // Find a generator of the multiplicative group, then tabulate.
    const auto factors = prime_factors(q - 1);
    std::uint64_t gen = 0;
    for (std::uint64_t g = 2; g < q && gen == 0; ++g) {
      bool ok = true;
      for (std::uint64_t t : factors) {
        if (field.pow(Elem{g}, (q - 1) / t) == field.one()) {
          ok = false;
          break;
        }
      }
      if (ok) gen = g;
    }
    if (q == 2) gen = 1;
    std::vector<std::uint32_t> exp_table(2 * (q - 1)), log_table(q, 0);
    Elem cur = field.one();
    for (std::uint64_t i = 0; i < q - 1; ++i) {
      exp_table[i] = static_cast<std::uint32_t>(cur.raw);
      exp_table[i + q - 1] = static_cast<std::uint32_t>(cur.raw);
      log_table[cur.raw] = static_cast<std::uint32_t>(i);
      cur = field.mul(cur, Elem{gen});
    }
    impl->exp_table = std::move(exp_table);
    impl->log_table = std::move(log_table);
  }
  return field;
}

const std::vector<std::uint64_t>& Field::modulus() const { return impl_->modulus; }

Elem Field::from_int(std::int64_t v) const {
  std::int64_t r = v % static_cast<std::int64_t>(p_);
  if (r < 0) r += static_cast<std::int64_t>(p_);
  return Elem{static_cast<std::uint64_t>(r)};
}

Elem Field::from_coeffs(std::span<const std::uint64_t> c) const {
  if (c.size() != e_) throw FieldError("element needs " + std::to_string(e_) + " coefficients");
  std::uint64_t raw = 0;
  for (unsigned i = 0; i < e_; ++i) {
    if (c[i] >= p_) throw FieldError("coefficient out of range");
    raw += c[i] * impl_->pow_p[i];
  }
  return Elem{raw};
}

std::vector<std::uint64_t> Field::coeffs(Elem a) const {
  std::vector<std::uint64_t> out(e_);
  std::uint64_t rest = a.raw;
  for (unsigned i = 0; i < e_; ++i) {
    out[i] = rest % p_;
    rest /= p_;
  }
  return out;
}

Elem Field::element(std::uint64_t index) const {
  if (index >= q_) throw FieldError("element index out of range");
  return Elem{index};
}

Elem Field::add_ext(Elem a, Elem b) const {
  std::uint64_t x = a.raw, y = b.raw, out = 0;
  for (unsigned i = 0; i < e_; ++i) {
    std::uint64_t s = x % p_ + y % p_;
    if (s >= p_) s -= p_;
    out += s * impl_->pow_p[i];
    x /= p_;
    y /= p_;
  }
  return Elem{out};
}

Elem Field::neg_ext(Elem a) const {
  std::uint64_t x = a.raw, out = 0;
  for (unsigned i = 0; i < e_; ++i) {
    std::uint64_t c = x % p_;
    out += (c == 0 ? 0 : p_ - c) * impl_->pow_p[i];
    x /= p_;
  }
  return Elem{out};
}

Elem Field::mul_ext(Elem a, Elem b) const {
  if (a.raw == 0 || b.raw == 0) return zero();
  if (!impl_->exp_table.empty())
    return Elem{impl_->exp_table[impl_->log_table[a.raw] + impl_->log_table[b.raw]]};
  Poly pa = coeffs(a), pb = coeffs(b);
  trim(pa);
  trim(pb);
  Poly prod = poly_mul_mod(pa, pb, impl_->modulus, p_);
  prod.resize(e_, 0);
  return from_coeffs(prod);
}

Elem Field::inv(Elem a) const {
  if (a.raw == 0) throw FieldError("inverse of zero");
  if (e_ == 1) return Elem{inv_mod(a.raw, p_)};
  if (!impl_->exp_table.empty()) {
    std::uint64_t l = impl_->log_table[a.raw];
    return Elem{impl_->exp_table[(q_ - 1 - l) % (q_ - 1)]};
  }
  return pow(a, q_ - 2);
}

Elem Field::pow(Elem a, std::uint64_t k) const {
  Elem result = one();
  while (k) {
    if (k & 1) result = mul(result, a);
    a = mul(a, a);
    k >>= 1;
  }
  return result;
}

bool Field::operator==(const Field& o) const {
  return p_ == o.p_ && e_ == o.e_ && (impl_ == o.impl_ || impl_->modulus == o.impl_->modulus);
}

std::string Field::name() const {
  std::ostringstream os;
  os << "F_" << p_;
  if (e_ > 1) os << "^" << e_;
  return os.str();
}

Embedding::Embedding(const Field& small, const Field& big) : small_(small), big_(big) {
  if (small.characteristic() != big.characteristic() || big.degree() % small.degree() != 0)
    throw FieldError("no embedding of " + small.name() + " into " + big.name());
  const unsigned e = small.degree();
  Elem root = big.zero();
  if (e == 1) {
    root = big.zero();
  } else if (small == big) {
    root = Elem{small.characteristic()};  // the residue x itself
  } else {
    if (big.order() > (std::uint64_t{1} << 26))
      throw FieldError("embedding search too large for " + big.name());
    const auto& m = small.modulus();
    bool found = false;
    for (std::uint64_t i = 1; i < big.order() && !found; ++i) {
      Elem b{i};
      Elem acc = big.zero();
      for (std::size_t j = m.size(); j-- > 0;)
        acc = big.add(big.mul(acc, b), big.from_int(static_cast<std::int64_t>(m[j])));
      if (acc == big.zero()) {
        root = b;
        found = true;
      }
    }
    if (!found) throw FieldError("modulus has no root in " + big.name());
  }
  root_powers_.resize(e);
  root_powers_[0] = big.one();
  for (unsigned i = 1; i < e; ++i) root_powers_[i] = big.mul(root_powers_[i - 1], root);
}

Elem Embedding::operator()(Elem a) const {
  if (small_.degree() == 1) return big_.from_int(static_cast<std::int64_t>(a.raw));
  const auto c = small_.coeffs(a);
  Elem acc = big_.zero();
  for (std::size_t i = 0; i < c.size(); ++i)
    if (c[i]) acc = big_.add(acc, big_.mul(big_.from_int(static_cast<std::int64_t>(c[i])), root_powers_[i]));
  return acc;
}

bool is_zero(const Vector& v) {
  return std::all_of(v.begin(), v.end(), [](Elem x) { return x.raw == 0; });
}

Vector scale(const Field& f, const Vector& v, Elem c) {
  Vector out(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) out[i] = f.mul(v[i], c);
  return out;
}

Vector add(const Field& f, const Vector& a, const Vector& b) {
  if (a.size() != b.size()) throw DimensionError("vector length mismatch");
  Vector out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = f.add(a[i], b[i]);
  return out;
}

Vector sub(const Field& f, const Vector& a, const Vector& b) {
  if (a.size() != b.size()) throw DimensionError("vector length mismatch");
  Vector out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = f.sub(a[i], b[i]);
  return out;
}

Vector axpy(const Field& f, const Vector& a, Elem c, const Vector& b) {
  if (a.size() != b.size()) throw DimensionError("vector length mismatch");
  Vector out(a);
  if (c.raw == 0) return out;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (b[i].raw) out[i] = f.add(out[i], f.mul(c, b[i]));
  return out;
}

std::optional<std::size_t> leading_index(const Vector& v) {
  for (std::size_t i = 0; i < v.size(); ++i)
    if (v[i].raw) return i;
  return std::nullopt;
}

SpanBasis::SpanBasis(Field f, std::size_t n) : field_(std::move(f)), n_(n) {}

void SpanBasis::check_dim(const Vector& v) const {
  if (v.size() != n_)
    throw DimensionError("vector of length " + std::to_string(v.size()) + " in ambient dimension " +
                         std::to_string(n_));
}

Vector SpanBasis::reduce(const Vector& v) const {
  check_dim(v);
  Vector out(v);
  for (std::size_t r = 0; r < rows_.size(); ++r) {
    Elem c = out[pivots_[r]];
    if (c.raw == 0) continue;
    const Elem nc = field_.neg(c);
    const Vector& row = rows_[r];
    for (std::size_t i = pivots_[r]; i < n_; ++i)
      if (row[i].raw) out[i] = field_.add(out[i], field_.mul(nc, row[i]));
  }
  return out;
}

bool SpanBasis::contains(const Vector& v) const { return is_zero(reduce(v)); }

std::optional<Vector> SpanBasis::coordinates(const Vector& v) const {
  if (!contains(v)) return std::nullopt;
  Vector c(rows_.size());
  for (std::size_t r = 0; r < rows_.size(); ++r) c[r] = v[pivots_[r]];
  return c;
}

bool SpanBasis::insert(const Vector& v) {
  Vector red = reduce(v);
  auto lead = leading_index(red);
  if (!lead) return false;
  const std::size_t piv = *lead;
  red = scale(field_, red, field_.inv(red[piv]));
  for (auto& row : rows_) {
    Elem c = row[piv];
    if (c.raw) row = axpy(field_, row, field_.neg(c), red);
  }
  auto pos = std::lower_bound(pivots_.begin(), pivots_.end(), piv) - pivots_.begin();
  pivots_.insert(pivots_.begin() + pos, piv);
  rows_.insert(rows_.begin() + pos, std::move(red));
  return true;
}

std::size_t SpanBasis::absorb(const SpanBasis& other) {
  std::size_t added = 0;
  for (const auto& row : other.rows_) added += insert(row) ? 1 : 0;
  return added;
}

bool SpanBasis::operator==(const SpanBasis& o) const {
  return field_ == o.field_ && n_ == o.n_ && pivots_ == o.pivots_ && rows_ == o.rows_;
}

std::pair<SpanBasis, bool> span_insert(const SpanBasis& b, const Vector& v) {
  SpanBasis out(b);
  bool inserted = out.insert(v);
  return {std::move(out), inserted};
}

bool spans_orthogonal(std::span<const SpanBasis> bases) {
  if (bases.empty()) return true;
  SpanBasis acc(bases.front().field(), bases.front().dim());
  std::size_t expected = 0;
  for (const auto& b : bases) {
    if (b.dim() != acc.dim()) throw DimensionError("orthogonality check across dimensions");
    expected += b.rank();
    acc.absorb(b);
    if (acc.rank() != expected) return false;
  }
  return true;
}

}  // namespace sps
