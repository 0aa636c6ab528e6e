#include "sps/families.hpp"

#include <bit>
#include <boost/multiprecision/cpp_int.hpp>

namespace sps {

namespace {

// b . (x_1..x_m) + [with_last] x_n, b packed with b_1 in the lowest bit.
LinearForm bit_form(const Field& f, std::size_t n, std::size_t m, std::uint64_t b, bool with_last) {
  LinearForm l(n, f.zero());
  for (std::size_t i = 0; i < m; ++i)
    if ((b >> i) & 1) l[i] = f.one();
  if (with_last) l[n - 1] = f.one();
  return l;
}

LinearForm shifted(const Field& f, const LinearForm& l, std::size_t n, std::size_t offset) {
  LinearForm out(n, f.zero());
  for (std::size_t i = 0; i < l.size(); ++i) out[offset + i] = l[i];
  return out;
}

Term product(const Field& f, Elem coef, std::size_t n, const Term& a, std::size_t off_a, const Term& b,
             std::size_t off_b) {
  Term t{f.mul(coef, f.mul(a.coef, b.coef)), {}};
  for (const auto& l : a.forms) t.forms.push_back(shifted(f, l, n, off_a));
  for (const auto& l : b.forms) t.forms.push_back(shifted(f, l, n, off_b));
  return t;
}

}  // namespace

Circuit gen_ks(std::size_t r) {
  if (r < 2) throw CircuitError("gen_ks needs r >= 2");
  if (r > 24) throw BudgetExceeded("gen_ks: r too large");
  Field f = Field::make(2);
  Circuit c{f, r, {}};
  const std::size_t m = r - 1;
  Term t1{f.one(), {}}, t2{f.one(), {}}, t3{f.one(), {}};
  for (std::uint64_t b = 0; b < (std::uint64_t{1} << m); ++b) {
    const bool odd = std::popcount(b) % 2 == 1;
    if (odd) {
      t1.forms.push_back(bit_form(f, r, m, b, false));
      t3.forms.push_back(bit_form(f, r, m, b, true));
    } else {
      t2.forms.push_back(bit_form(f, r, m, b, true));
    }
  }
  c.terms = {std::move(t1), std::move(t2), std::move(t3)};
  return c;
}

Circuit gen_joined(const Circuit& d, const Circuit& base, bool verify) {
  d.validate();
  base.validate();
  if (!(d.field == base.field)) throw CircuitError("join needs one field");
  if (base.k() != 3) throw CircuitError("join base must have three terms");
  if (d.k() < 2) throw CircuitError("join needs at least two terms in D");
  const Field& f = d.field;
  OracleConfig cfg;
  cfg.mode = OracleConfig::Mode::randomized;
  cfg.trials = 20;
  if (verify && !is_identity(d, cfg)) throw CircuitError("join input is not an identity");

  const std::size_t n = d.n + base.n;
  Circuit out{f, n, {}};
  const std::size_t k = d.k();
  for (std::size_t j = 0; j + 1 < k; ++j) out.terms.push_back(product(f, f.one(), n, d.terms[j], 0, base.terms[0], d.n));
  const Elem minus = f.neg(f.one());
  out.terms.push_back(product(f, minus, n, d.terms[k - 1], 0, base.terms[1], d.n));
  out.terms.push_back(product(f, minus, n, d.terms[k - 1], 0, base.terms[2], d.n));

  if (verify) {
    if (!is_simple(out)) throw CircuitError("joined circuit is not simple");
    if (!is_identity(out, cfg)) throw CircuitError("joined circuit is not an identity");
    if (!is_minimal(out, cfg)) throw CircuitError("joined circuit is not minimal");
  }
  return out;
}

Circuit gen_family(std::size_t r, std::size_t i, std::size_t form_budget) {
  const Circuit base = gen_ks(r);
  const std::size_t d = base.max_degree();
  // Total forms of D_i: (i + 3) terms of degree (i + 1) d.
  if ((i + 3) * (i + 1) * d > form_budget) throw BudgetExceeded("gen_family: too many forms");
  Circuit cur = base;
  for (std::size_t j = 0; j < i; ++j) cur = gen_joined(cur, base, false);
  return cur;
}

bool family_rank_inequality(std::size_t rank, std::size_t k, std::size_t d) {
  using boost::multiprecision::cpp_int;
  const cpp_int lhs = cpp_int(1) << (3 * rank);
  const cpp_int rhs = boost::multiprecision::pow(cpp_int(d), static_cast<unsigned>(k));
  return lhs > rhs;
}

TightLists gen_tight_lists(std::size_t s, std::uint64_t p) {
  if (s < 3) throw CircuitError("gen_tight_lists needs s >= 3");
  if (s > 24) throw BudgetExceeded("gen_tight_lists: s too large");
  if (p < 5 || !is_prime(p)) throw CircuitError("gen_tight_lists needs a prime p >= 5");
  Field f = Field::make(p);
  TightLists t{f, s, {}, {}, {}, {}, {}, {}};
  const std::size_t m = s - 1;
  for (std::uint64_t b = 0; b < (std::uint64_t{1} << m); ++b)
    (std::popcount(b) % 2 == 0 ? t.u : t.v).push_back(bit_form(f, s, m, b, true));
  for (std::size_t i = 0; i < m; ++i) t.claimed.emplace_back(f, s, FormList{unit_form(f, s, i)});
  LinearForm g(s, f.one());
  g[s - 1] = f.from_int(2);
  t.claimed.emplace_back(f, s, FormList{g});
  for (std::size_t i = 0; i < t.claimed.size(); ++i) {
    auto pi = find_matching(t.u, t.v, t.claimed[i]);
    if (!pi) continue;
    t.ideals.push_back(t.claimed[i]);
    t.matchings.push_back(std::move(*pi));
    t.verified_index.push_back(i);
  }
  return t;
}

std::pair<Circuit, Circuit> gen_intro_counterexamples(std::size_t d, std::uint64_t p) {
  if (d < 1) throw CircuitError("counterexamples need d >= 1");
  Field f = Field::make(p);
  const Elem minus = f.neg(f.one());

  Circuit nonsimple{f, d, {}};
  Term t{f.one(), {}};
  for (std::size_t i = 0; i < d; ++i) t.forms.push_back(unit_form(f, d, i));
  nonsimple.terms = {t, Term{minus, t.forms}};

  // Variables: y_1..y_d, z_1..z_d, x_1, x_2.
  const std::size_t n = 2 * d + 2;
  Circuit nonminimal{f, n, {}};
  Term ty{f.one(), {}}, tz{f.one(), {}};
  for (std::size_t i = 0; i < d; ++i) {
    ty.forms.push_back(unit_form(f, n, i));
    tz.forms.push_back(unit_form(f, n, d + i));
  }
  ty.forms.push_back(unit_form(f, n, 2 * d));
  tz.forms.push_back(unit_form(f, n, 2 * d + 1));
  nonminimal.terms = {ty, Term{minus, ty.forms}, tz, Term{minus, tz.forms}};
  return {std::move(nonsimple), std::move(nonminimal)};
}

nlohmann::json lists_to_json(const Field& f, std::size_t n, const FormList& u, const FormList& v,
                             const std::vector<FormIdeal>& ideals) {
  auto forms = [&](const FormList& l) {
    nlohmann::json a = nlohmann::json::array();
    for (const auto& x : l) a.push_back(form_to_json(f, x));
    return a;
  };
  nlohmann::json ids = nlohmann::json::array();
  for (const auto& i : ideals) ids.push_back(forms(i.gens()));
  return {{"p", f.characteristic()}, {"e", f.degree()}, {"n", n}, {"U", forms(u)}, {"V", forms(v)}, {"ideals", ids}};
}

ListsInput lists_from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw CircuitError("lists must be a JSON object");
  for (const char* key : {"p", "n", "U", "V", "ideals"})
    if (!j.contains(key)) throw CircuitError(std::string("missing key \"") + key + "\"");
  Field f = Field::make(j.at("p").get<std::uint64_t>(), j.value("e", 1u));
  const auto n = j.at("n").get<std::size_t>();
  ListsInput in{f, n, {}, {}, {}};
  for (const auto& l : j.at("U")) in.u.push_back(form_from_json(f, n, l));
  for (const auto& l : j.at("V")) in.v.push_back(form_from_json(f, n, l));
  for (const auto& gens : j.at("ideals")) {
    FormList g;
    for (const auto& l : gens) g.push_back(form_from_json(f, n, l));
    in.ideals.emplace_back(f, n, g);
  }
  return in;
}

}  // namespace sps
