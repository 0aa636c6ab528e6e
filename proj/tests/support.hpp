#ifndef SPS_TESTS_SUPPORT_HPP
#define SPS_TESTS_SUPPORT_HPP

#include <algorithm>
#include <numeric>
#include <random>
#include <vector>

#include "sps/chain.hpp"
#include "sps/families.hpp"

namespace testing_support {

using namespace sps;
using Rng = std::mt19937_64;

/// Prime-field form from its residues.
inline LinearForm lf(std::initializer_list<std::uint64_t> c) {
  LinearForm l;
  for (auto x : c) l.push_back(Elem{x});
  return l;
}

inline Elem rand_elem(const Field& f, Rng& rng) {
  return f.element(std::uniform_int_distribution<std::uint64_t>(0, f.order() - 1)(rng));
}

inline Elem rand_nonzero(const Field& f, Rng& rng) {
  return f.element(std::uniform_int_distribution<std::uint64_t>(1, f.order() - 1)(rng));
}

inline std::size_t rand_below(std::size_t n, Rng& rng) {
  return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng);
}

inline LinearForm rand_form(const Field& f, std::size_t n, Rng& rng) {
  while (true) {
    LinearForm l(n);
    for (auto& a : l) a = rand_elem(f, rng);
    if (!is_zero(l)) return l;
  }
}

inline LinearForm rand_in_span(const Field& f, const SpanBasis& b, Rng& rng) {
  LinearForm l(b.dim(), f.zero());
  for (const auto& row : b.rows()) l = axpy(f, l, rand_elem(f, rng), row);
  return l;
}

/// Random ideal with g independent generators.
inline FormIdeal rand_ideal(const Field& f, std::size_t n, std::size_t g, Rng& rng) {
  FormList gens;
  SpanBasis b(f, n);
  while (gens.size() < g) {
    LinearForm l = rand_form(f, n, rng);
    if (b.insert(l)) gens.push_back(l);
  }
  if (gens.empty()) return FormIdeal::zero(f, n);
  return FormIdeal(f, n, gens);
}

/// Random invertible n x n matrix.
inline std::vector<Vector> rand_invertible(const Field& f, std::size_t n, Rng& rng) {
  while (true) {
    std::vector<Vector> a;
    SpanBasis b(f, n);
    for (std::size_t i = 0; i < n; ++i) {
      a.push_back(rand_form(f, n, rng));
      b.insert(a.back());
    }
    if (b.rank() == n) return a;
  }
}

/// Basis of {x : g . x = 0 for all generators g}.
inline std::vector<Vector> kernel_basis(const FormIdeal& ideal) {
  const Field& f = ideal.field();
  const std::size_t n = ideal.dim();
  const SpanBasis& b = ideal.span();
  std::vector<bool> pivot(n, false);
  for (std::size_t p : b.pivots()) pivot[p] = true;
  std::vector<Vector> out;
  for (std::size_t j = 0; j < n; ++j) {
    if (pivot[j]) continue;
    Vector x(n, f.zero());
    x[j] = f.one();
    for (std::size_t r = 0; r < b.rank(); ++r) x[b.pivots()[r]] = f.neg(b.rows()[r][j]);
    out.push_back(std::move(x));
  }
  return out;
}

inline Elem dot(const Field& f, const Vector& a, const Vector& b) {
  Elem s = f.zero();
  for (std::size_t i = 0; i < a.size(); ++i) s = f.add(s, f.mul(a[i], b[i]));
  return s;
}

/// The polynomial sum of (coef, forms) pairs restricted to the kernel of the
/// ideal, expanded in kernel coordinates. Zero iff the sum lies in (I).
inline SparsePoly restricted_sum(const Field& f, const std::vector<Term>& terms, const FormIdeal& ideal) {
  const auto ker = kernel_basis(ideal);
  SparsePoly acc{f, ker.size(), {}};
  for (const auto& t : terms) {
    FormList forms;
    for (const auto& l : t.forms) {
      LinearForm r;
      for (const auto& k : ker) r.push_back(dot(f, l, k));
      forms.push_back(std::move(r));
    }
    acc = acc + expand_product(f, ker.size(), t.coef, forms);
  }
  return acc;
}

inline bool zero_mod_oracle(const Circuit& c, const FormIdeal& ideal) {
  return restricted_sum(c.field, c.terms, ideal).is_zero();
}

inline bool expanded_zero(const Circuit& c) { return expand(c).is_zero(); }

inline std::vector<std::size_t> rand_perm(std::size_t n, Rng& rng) {
  std::vector<std::size_t> p(n);
  std::iota(p.begin(), p.end(), 0);
  std::shuffle(p.begin(), p.end(), rng);
  return p;
}

/// Edge image c u + w with w drawn from the prefix span at a random level
/// where u is not yet spanned. u must lie outside sp(I).
inline LinearForm ordered_image(const Field& f, const LinearForm& u, const FormIdeal& ideal, Rng& rng) {
  std::vector<std::size_t> levels;
  for (std::size_t j = 0; j <= ideal.size(); ++j)
    if (!ideal.prefix(j).contains(u)) levels.push_back(j);
  const std::size_t j = levels[rand_below(levels.size(), rng)];
  return add(f, scale(f, u, rand_nonzero(f, rng)), rand_in_span(f, ideal.prefix(j), rng));
}

inline FormList forms_outside(const Field& f, std::size_t n, std::size_t count, const FormIdeal& ideal, Rng& rng) {
  FormList out;
  while (out.size() < count) {
    LinearForm l = rand_form(f, n, rng);
    if (!ideal.span().contains(l)) out.push_back(std::move(l));
  }
  return out;
}

/// Random ordered matching from u by the ideal; u must avoid sp(I).
inline OrderedMatching rand_ordered_matching(const FormList& u, const FormIdeal& ideal, Rng& rng) {
  const Field& f = ideal.field();
  auto sigma = rand_perm(u.size(), rng);
  FormList v(u.size());
  for (std::size_t i = 0; i < u.size(); ++i) v[sigma[i]] = ordered_image(f, u[i], ideal, rng);
  return OrderedMatching::make(ideal, u, v, sigma, true);
}

inline Circuit rand_circuit(const Field& f, std::size_t n, std::size_t k, std::size_t d, Rng& rng) {
  Circuit c{f, n, {}};
  for (std::size_t q = 0; q < k; ++q) {
    Term t{rand_nonzero(f, rng), {}};
    for (std::size_t i = 0; i < d; ++i) t.forms.push_back(rand_form(f, n, rng));
    c.terms.push_back(std::move(t));
  }
  return c;
}

/// T - T' with T' a rescaled permutation of T, split over two terms.
inline Circuit rand_cancelling_pair(const Field& f, std::size_t n, std::size_t d, Rng& rng) {
  Circuit c = rand_circuit(f, n, 1, d, rng);
  Term t{f.zero(), {}};
  Elem prod = f.one();
  for (std::size_t i : rand_perm(d, rng)) {
    Elem s = rand_nonzero(f, rng);
    prod = f.mul(prod, s);
    t.forms.push_back(scale(f, c.terms[0].forms[i], s));
  }
  t.coef = f.neg(f.div(c.terms[0].coef, prod));
  c.terms.push_back(std::move(t));
  return c;
}

/// (a + b)^p - a^p - b^p times a common random factor, over F_p.
inline Circuit rand_frobenius_identity(const Field& f, std::size_t n, std::size_t extra, Rng& rng) {
  const std::size_t p = f.characteristic();
  LinearForm a = rand_form(f, n, rng), b = rand_form(f, n, rng);
  while (is_zero(add(f, a, b))) b = rand_form(f, n, rng);
  FormList common;
  for (std::size_t i = 0; i < extra; ++i) common.push_back(rand_form(f, n, rng));
  auto term = [&](Elem coef, const LinearForm& l) {
    Term t{coef, FormList(p, l)};
    t.forms.insert(t.forms.end(), common.begin(), common.end());
    return t;
  };
  const Elem s = rand_nonzero(f, rng);
  return Circuit{f, n, {term(s, add(f, a, b)), term(f.neg(s), a), term(f.neg(s), b)}};
}

/// gen_ks(r) under a random invertible change of variables.
inline Circuit rand_ks_identity(std::size_t r, Rng& rng) {
  Circuit c = gen_ks(r);
  return change_variables(c, rand_invertible(c.field, c.n, rng));
}

/// Changes one coefficient of one form, keeping the form nonzero. Drops a
/// term when no such change turns up.
inline Circuit perturb(const Circuit& c, Rng& rng) {
  Circuit out = c;
  for (int attempt = 0;; ++attempt) {
    if (attempt == 64 && out.k() > 1) {
      out.terms.erase(out.terms.begin() + static_cast<std::ptrdiff_t>(rand_below(out.k(), rng)));
      return out;
    }
    Term& t = out.terms[rand_below(out.k(), rng)];
    if (t.forms.empty()) {
      t.coef = rand_nonzero(out.field, rng);
      return out;
    }
    LinearForm& l = t.forms[rand_below(t.forms.size(), rng)];
    LinearForm old = l;
    l[rand_below(l.size(), rng)] = rand_elem(out.field, rng);
    if (!is_zero(l) && l != old) return out;
    l = old;
  }
}

}  // namespace testing_support

#endif  // SPS_TESTS_SUPPORT_HPP
