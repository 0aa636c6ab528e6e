#include "sps/forms.hpp"

#include <algorithm>
#include <map>
#include <sstream>

namespace sps {

std::size_t Circuit::max_degree() const {
  std::size_t d = 0;
  for (const auto& t : terms) d = std::max(d, t.degree());
  return d;
}

bool Circuit::homogeneous() const {
  return std::all_of(terms.begin(), terms.end(),
                     [&](const Term& t) { return t.degree() == terms.front().degree(); });
}

void Circuit::validate() const {
  if (terms.empty()) throw CircuitError("circuit has no terms");
  for (std::size_t i = 0; i < terms.size(); ++i) {
    const auto& t = terms[i];
    if (t.coef.raw == 0 || !field.valid(t.coef))
      throw CircuitError("term " + std::to_string(i + 1) + " has an invalid constant");
    for (const auto& l : t.forms) {
      if (l.size() != n) throw CircuitError("form dimension differs from n");
      for (Elem c : l)
        if (!field.valid(c)) throw CircuitError("coefficient outside the field");
      if (is_zero(l)) throw CircuitError("term " + std::to_string(i + 1) + " has a zero form");
    }
  }
}

Normalized normalize(const Field& f, const LinearForm& l) {
  auto lead = leading_index(l);
  if (!lead) throw CircuitError("cannot normalize the zero form");
  Elem s = l[*lead];
  return {scale(f, l, f.inv(s)), s};
}

std::optional<Elem> similar(const Field& f, const LinearForm& a, const LinearForm& b) {
  if (a.size() != b.size()) throw DimensionError("form dimension mismatch");
  auto la = leading_index(a), lb = leading_index(b);
  if (!la && !lb) return f.one();
  if (!la || !lb || *la != *lb) return std::nullopt;
  Elem c = f.div(a[*la], b[*lb]);
  for (std::size_t i = *la; i < a.size(); ++i)
    if (a[i] != f.mul(c, b[i])) return std::nullopt;
  return c;
}

FormList simi(const Field& f, const LinearForm& l, const FormList& s) {
  if (is_zero(l)) throw CircuitError("simi of the zero form");
  FormList out;
  for (const auto& m : s)
    if (similar(f, m, l)) out.push_back(m);
  return out;
}

std::optional<std::vector<std::size_t>> lists_similar(const Field& f, const FormList& u,
                                                      const FormList& v) {
  if (u.size() != v.size()) return std::nullopt;
  std::map<Vector, std::vector<std::size_t>> slots;
  for (std::size_t j = v.size(); j-- > 0;) slots[normalize(f, v[j]).canonical].push_back(j);
  std::vector<std::size_t> perm(u.size());
  for (std::size_t i = 0; i < u.size(); ++i) {
    auto it = slots.find(normalize(f, u[i]).canonical);
    if (it == slots.end() || it->second.empty()) return std::nullopt;
    perm[i] = it->second.back();
    it->second.pop_back();
  }
  return perm;
}

bool lists_coprime(const Field& f, const FormList& u, const FormList& v) {
  std::map<Vector, int> keys;
  for (const auto& l : u) keys[normalize(f, l).canonical] = 1;
  for (const auto& l : v)
    if (keys.count(normalize(f, l).canonical)) return false;
  return true;
}

Circuit homogenize(const Field& f, const std::vector<AffineTerm>& terms, std::size_t n) {
  if (terms.empty()) throw CircuitError("homogenize needs at least one term");
  Circuit out{f, n + 1, {}};
  std::size_t dmax = 0;
  for (const auto& t : terms) dmax = std::max(dmax, t.forms.size());
  const LinearForm fresh = unit_form(f, n + 1, n);
  for (const auto& t : terms) {
    Term h{t.coef, {}};
    for (const auto& a : t.forms) {
      if (a.coeffs.size() != n) throw DimensionError("affine form dimension differs from n");
      LinearForm l(a.coeffs);
      l.push_back(a.constant);
      h.forms.push_back(std::move(l));
    }
    while (h.forms.size() < dmax) h.forms.push_back(fresh);
    out.terms.push_back(std::move(h));
  }
  out.validate();
  return out;
}

LinearForm unit_form(const Field& f, std::size_t n, std::size_t i) {
  LinearForm l(n, f.zero());
  l.at(i) = f.one();
  return l;
}

std::string form_to_string(const Field& f, const LinearForm& l) {
  std::ostringstream os;
  bool first = true;
  for (std::size_t i = 0; i < l.size(); ++i) {
    if (l[i].raw == 0) continue;
    if (!first) os << " + ";
    first = false;
    if (l[i] != f.one()) {
      if (f.degree() == 1) {
        os << l[i].raw;
      } else {
        os << "[";
        auto c = f.coeffs(l[i]);
        for (std::size_t j = 0; j < c.size(); ++j) os << (j ? "," : "") << c[j];
        os << "]";
      }
    }
    os << "x" << (i + 1);
  }
  if (first) os << "0";
  return os.str();
}

}  // namespace sps
