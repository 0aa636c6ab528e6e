#include "sps/circuit.hpp"

#include <algorithm>
#include <bit>
#include <cstdlib>
#include <limits>
#include <mutex>
#include <random>
#include <set>

namespace sps {

namespace {

constexpr std::uint64_t kSaturated = std::numeric_limits<std::uint64_t>::max() / 4;

std::uint64_t sat_add(std::uint64_t a, std::uint64_t b) {
  return (a >= kSaturated || b >= kSaturated || a + b >= kSaturated) ? kSaturated : a + b;
}

// Degree-t monomial counts in m variables, saturating at kSaturated.
class MonomialCounts {
 public:
  MonomialCounts(std::size_t max_vars, std::size_t max_deg)
      : table_(max_vars + 1, std::vector<std::uint64_t>(max_deg + 1, 0)) {
    table_[0][0] = 1;
    for (std::size_t m = 1; m <= max_vars; ++m) {
      table_[m][0] = 1;
      for (std::size_t t = 1; t <= max_deg; ++t) table_[m][t] = sat_add(table_[m][t - 1], table_[m - 1][t]);
    }
  }
  std::uint64_t operator()(std::size_t m, std::size_t t) const { return table_[m][t]; }

 private:
  std::vector<std::vector<std::uint64_t>> table_;
};

// Dense homogeneous polynomials in m variables. Degree-j layout: blocks by the
// exponent e of the first variable, descending; block e holds the degree j-e
// part in the remaining variables and starts at H(m, j-e-1).
void mul_linear(const Field& f, const Elem* in, std::size_t j, const Elem* a, const unsigned char* rest_nz,
                std::size_t m, Elem* out, const MonomialCounts& h) {
  if (m == 1) {
    if (a[0].raw) out[0] = f.add(out[0], f.mul(a[0], in[0]));
    return;
  }
  for (std::size_t e = 0; e <= j; ++e) {
    const std::size_t t = j - e;
    const Elem* blk = in + (t == 0 ? 0 : h(m, t - 1));
    const std::uint64_t size = h(m - 1, t);
    if (a[0].raw) {
      Elem* dst = out + (t == 0 ? 0 : h(m, t - 1));
      for (std::uint64_t i = 0; i < size; ++i)
        if (blk[i].raw) dst[i] = f.add(dst[i], f.mul(a[0], blk[i]));
    }
    if (rest_nz[1]) mul_linear(f, blk, t, a + 1, rest_nz + 1, m - 1, out + h(m, t), h);
  }
}

std::uint64_t splitmix(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

Field cached_field(std::uint64_t p, unsigned e) {
  static std::mutex mu;
  static std::map<std::pair<std::uint64_t, unsigned>, Field> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find({p, e});
  if (it != cache.end()) return it->second;
  Field f = Field::make(p, e);
  cache.emplace(std::make_pair(p, e), f);
  return f;
}

Field default_eval_field(const Field& f, std::size_t d) {
  const std::uint64_t need = 2 * static_cast<std::uint64_t>(std::max<std::size_t>(d, 1));
  if (f.order() > need) return f;
  unsigned e = f.degree();
  std::uint64_t q = f.order();
  while (q <= 2 * need) {
    e += f.degree();
    for (unsigned i = 0; i < f.degree(); ++i) q *= f.characteristic();
  }
  return cached_field(f.characteristic(), e);
}

std::vector<std::size_t> mask_to_indices(std::uint32_t mask) {
  std::vector<std::size_t> q;
  for (std::size_t i = 0; i < 32; ++i)
    if (mask >> i & 1U) q.push_back(i);
  return q;
}

}  // namespace

std::uint64_t expansion_budget_from_env() {
  if (const char* v = std::getenv("SPS_BUDGET")) {
    char* end = nullptr;
    unsigned long long b = std::strtoull(v, &end, 10);
    if (end != v && *end == '\0' && b > 0) return b;
  }
  return kDefaultExpansionBudget;
}

SparsePoly SparsePoly::constant(const Field& f, std::size_t vars, Elem c) {
  SparsePoly p{f, vars, {}};
  if (c.raw) p.coeffs[std::vector<unsigned>(vars, 0)] = c;
  return p;
}

SparsePoly SparsePoly::linear(const Field& f, const LinearForm& l) {
  SparsePoly p{f, l.size(), {}};
  for (std::size_t i = 0; i < l.size(); ++i) {
    if (!l[i].raw) continue;
    std::vector<unsigned> mono(l.size(), 0);
    mono[i] = 1;
    p.coeffs[mono] = l[i];
  }
  return p;
}

SparsePoly SparsePoly::operator+(const SparsePoly& o) const {
  if (vars != o.vars) throw DimensionError("polynomial variable counts differ");
  SparsePoly out(*this);
  for (const auto& [mono, c] : o.coeffs) {
    auto [it, fresh] = out.coeffs.emplace(mono, c);
    if (!fresh) {
      it->second = field.add(it->second, c);
      if (!it->second.raw) out.coeffs.erase(it);
    }
  }
  return out;
}

SparsePoly SparsePoly::operator-(const SparsePoly& o) const { return *this + o.scaled(field.neg(field.one())); }

SparsePoly SparsePoly::operator*(const SparsePoly& o) const {
  if (vars != o.vars) throw DimensionError("polynomial variable counts differ");
  SparsePoly out{field, vars, {}};
  for (const auto& [ma, ca] : coeffs) {
    for (const auto& [mb, cb] : o.coeffs) {
      std::vector<unsigned> mono(ma);
      for (std::size_t i = 0; i < vars; ++i) mono[i] += mb[i];
      Elem c = field.mul(ca, cb);
      auto [it, fresh] = out.coeffs.emplace(std::move(mono), c);
      if (!fresh) {
        it->second = field.add(it->second, c);
        if (!it->second.raw) out.coeffs.erase(it);
      }
    }
  }
  return out;
}

SparsePoly SparsePoly::scaled(Elem c) const {
  SparsePoly out{field, vars, {}};
  if (!c.raw) return out;
  for (const auto& [mono, v] : coeffs) out.coeffs[mono] = field.mul(v, c);
  return out;
}

SparsePoly expand_product(const Field& f, std::size_t n, Elem coef, const FormList& forms) {
  SparsePoly p = SparsePoly::constant(f, n, coef);
  for (const auto& l : forms) p = p * SparsePoly::linear(f, l);
  return p;
}

SparsePoly expand(const Circuit& c) {
  SparsePoly acc{c.field, c.n, {}};
  for (const auto& t : c.terms) acc = acc + expand_product(c.field, c.n, t.coef, t.forms);
  return acc;
}

FormList circuit_L(const Circuit& c) {
  FormList out;
  for (const auto& t : c.terms) out.insert(out.end(), t.forms.begin(), t.forms.end());
  return out;
}

SpanBasis span_of(const Field& f, std::size_t n, const FormList& forms) {
  SpanBasis b(f, n);
  for (const auto& l : forms) b.insert(l);
  return b;
}

std::size_t circuit_rank(const Circuit& c) { return span_of(c.field, c.n, circuit_L(c)).rank(); }

std::uint64_t expansion_cost(const Circuit& c) {
  const std::size_t r = circuit_rank(c);
  const MonomialCounts h(r, c.max_degree());
  std::set<std::size_t> degrees;
  for (const auto& t : c.terms) degrees.insert(t.degree());
  std::uint64_t cost = 0;
  for (std::size_t d : degrees) cost = sat_add(cost, h(r, d));
  return cost;
}

bool zero_test_exact(const Circuit& c, std::uint64_t budget) {
  c.validate();
  const Field& f = c.field;
  const SpanBasis basis = span_of(f, c.n, circuit_L(c));
  const std::size_t r = basis.rank();
  const std::size_t dmax = c.max_degree();
  const MonomialCounts h(r, dmax);

  std::map<std::size_t, std::vector<std::size_t>> by_degree;
  for (std::size_t i = 0; i < c.k(); ++i) by_degree[c.terms[i].degree()].push_back(i);
  std::uint64_t cost = 0;
  for (const auto& [d, idx] : by_degree) cost = sat_add(cost, h(r, d));
  if (cost > budget)
    throw BudgetExceeded("exact expansion needs " + std::to_string(cost) + " monomials, budget " +
                         std::to_string(budget));

  if (r == 0) {
    Elem sum = f.zero();
    for (const auto& t : c.terms) sum = f.add(sum, t.coef);
    return sum.raw == 0;
  }

  const auto& pivots = basis.pivots();
  std::vector<Elem> coords(r);
  std::vector<unsigned char> nz(r + 1);
  for (const auto& [d, idx] : by_degree) {
    std::vector<Elem> acc(h(r, d), f.zero());
    for (std::size_t ti : idx) {
      const Term& t = c.terms[ti];
      std::vector<Elem> cur{t.coef};
      for (std::size_t j = 0; j < t.forms.size(); ++j) {
        for (std::size_t i = 0; i < r; ++i) coords[i] = t.forms[j][pivots[i]];
        nz[r] = 0;
        for (std::size_t i = r; i-- > 0;) nz[i] = nz[i + 1] || coords[i].raw != 0;
        std::vector<Elem> next(h(r, j + 1), f.zero());
        mul_linear(f, cur.data(), j, coords.data(), nz.data(), r,
                   next.data(), h);
        cur.swap(next);
      }
      for (std::size_t i = 0; i < acc.size(); ++i) acc[i] = f.add(acc[i], cur[i]);
    }
    for (Elem e : acc)
      if (e.raw) return false;
  }
  return true;
}

bool zero_test_random(const Circuit& c, unsigned trials, std::uint64_t seed, const std::optional<Field>& eval) {
  c.validate();
  if (trials == 0) throw std::invalid_argument("zero_test_random needs at least one trial");
  const Field ef = eval ? *eval : default_eval_field(c.field, c.max_degree());
  const Embedding emb(c.field, ef);
  std::vector<Elem> coefs;
  std::vector<std::vector<Vector>> forms;
  for (const auto& t : c.terms) {
    coefs.push_back(emb(t.coef));
    std::vector<Vector> fs;
    for (const auto& l : t.forms) {
      Vector v(l.size());
      for (std::size_t i = 0; i < l.size(); ++i) v[i] = emb(l[i]);
      fs.push_back(std::move(v));
    }
    forms.push_back(std::move(fs));
  }
  Vector point(c.n);
  for (unsigned trial = 0; trial < trials; ++trial) {
    std::mt19937_64 rng(splitmix(seed ^ splitmix(trial + 1)));
    std::uniform_int_distribution<std::uint64_t> dist(0, ef.order() - 1);
    for (auto& x : point) x = Elem{dist(rng)};
    Elem total = ef.zero();
    for (std::size_t ti = 0; ti < coefs.size(); ++ti) {
      Elem prod = coefs[ti];
      for (const auto& v : forms[ti]) {
        Elem s = ef.zero();
        for (std::size_t i = 0; i < v.size(); ++i)
          if (v[i].raw) s = ef.add(s, ef.mul(v[i], point[i]));
        prod = ef.mul(prod, s);
        if (!prod.raw) break;
      }
      total = ef.add(total, prod);
    }
    if (total.raw) return false;
  }
  return true;
}

bool is_identity(const Circuit& c, const OracleConfig& cfg) {
  using Mode = OracleConfig::Mode;
  if (cfg.mode == Mode::randomized) return zero_test_random(c, cfg.trials, cfg.seed, cfg.eval_field);
  if (cfg.mode == Mode::automatic && expansion_cost(c) > cfg.budget)
    return zero_test_random(c, cfg.trials, cfg.seed, cfg.eval_field);
  if (!zero_test_random(c, 2, cfg.seed, cfg.eval_field)) return false;
  return zero_test_exact(c, cfg.budget);
}

bool is_simple(const Circuit& c) {
  c.validate();
  std::map<Vector, std::size_t> seen;  // class -> number of terms containing it
  for (const auto& t : c.terms) {
    std::set<Vector> keys;
    for (const auto& l : t.forms) keys.insert(normalize(c.field, l).canonical);
    for (const auto& k : keys) ++seen[k];
  }
  for (const auto& [k, count] : seen)
    if (count == c.k()) return false;
  return true;
}

bool is_minimal(const Circuit& c, const OracleConfig& cfg) {
  c.validate();
  if (c.k() > 16) throw CircuitError("is_minimal supports at most 16 terms");
  const std::uint32_t full = (1U << c.k()) - 1;
  for (std::uint32_t mask = 1; mask < full; ++mask) {
    if (std::popcount(mask) < 2) continue;
    OracleConfig sub_cfg = cfg;
    sub_cfg.seed = splitmix(cfg.seed ^ (static_cast<std::uint64_t>(mask) << 20));
    if (is_identity(subcircuit(c, mask_to_indices(mask)), sub_cfg)) return false;
  }
  return true;
}

Circuit subcircuit(const Circuit& c, const std::vector<std::size_t>& q) {
  if (q.empty()) throw CircuitError("empty term subset");
  Circuit out{c.field, c.n, {}};
  for (std::size_t i = 0; i < q.size(); ++i) {
    if (q[i] >= c.k()) throw CircuitError("term index out of range");
    if (i > 0 && q[i] <= q[i - 1]) throw CircuitError("term subset must be ascending");
    out.terms.push_back(c.terms[q[i]]);
  }
  return out;
}

FormList linear_factors(const Circuit& c, const OracleConfig& cfg, std::uint64_t budget) {
  c.validate();
  const Field& f = c.field;
  if (f.degree() != 1) throw CircuitError("linear_factors needs a prime field");
  const std::uint64_t p = f.characteristic();
  std::uint64_t total = 0, block = 1;  // block = p^(n-1-i)
  for (std::size_t i = 0; i < c.n; ++i) {
    total = sat_add(total, block);
    if (block > budget) break;
    block = block > kSaturated / p ? kSaturated : block * p;
  }
  if (total > budget)
    throw BudgetExceeded(std::to_string(total) + " candidate forms exceed the budget of " +
                         std::to_string(budget));

  FormList out;
  std::uint64_t candidate = 0;
  for (std::size_t lead = 0; lead < c.n; ++lead) {
    const std::size_t tail = c.n - 1 - lead;
    std::uint64_t count = 1;
    for (std::size_t i = 0; i < tail; ++i) count *= p;
    for (std::uint64_t idx = 0; idx < count; ++idx, ++candidate) {
      LinearForm q(c.n, f.zero());
      q[lead] = f.one();
      std::uint64_t rest = idx;
      for (std::size_t j = lead + 1; j < c.n; ++j) {
        q[j] = Elem{rest % p};
        rest /= p;
      }
      Circuit reduced{f, c.n, {}};
      for (const auto& t : c.terms) {
        Term rt{t.coef, {}};
        bool vanishes = false;
        for (const auto& l : t.forms) {
          LinearForm m = axpy(f, l, f.neg(l[lead]), q);
          if (is_zero(m)) {
            vanishes = true;
            break;
          }
          rt.forms.push_back(std::move(m));
        }
        if (!vanishes) reduced.terms.push_back(std::move(rt));
      }
      bool divides = reduced.terms.empty();
      if (!divides) {
        OracleConfig sub = cfg;
        sub.seed = splitmix(cfg.seed + candidate);
        divides = is_identity(reduced, sub);
      }
      if (divides) out.push_back(std::move(q));
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

LinearForm transform_form(const Field& f, const LinearForm& l, const std::vector<Vector>& a) {
  if (a.size() != l.size()) throw DimensionError("change of variables has the wrong size");
  LinearForm out(l.size(), f.zero());
  for (std::size_t i = 0; i < l.size(); ++i)
    if (l[i].raw) out = axpy(f, out, l[i], a[i]);
  return out;
}

Circuit change_variables(const Circuit& c, const std::vector<Vector>& a) {
  Circuit out{c.field, c.n, {}};
  for (const auto& t : c.terms) {
    Term nt{t.coef, {}};
    for (const auto& l : t.forms) nt.forms.push_back(transform_form(c.field, l, a));
    out.terms.push_back(std::move(nt));
  }
  return out;
}

nlohmann::json element_to_json(const Field& f, Elem a) {
  if (f.degree() == 1) return a.raw;
  return f.coeffs(a);
}

Elem element_from_json(const Field& f, const nlohmann::json& j) {
  if (f.degree() == 1) {
    if (!j.is_number_integer()) throw CircuitError("field element must be an integer");
    auto v = j.get<std::int64_t>();
    if (v < 0 || static_cast<std::uint64_t>(v) >= f.characteristic())
      throw CircuitError("field element " + std::to_string(v) + " out of range");
    return Elem{static_cast<std::uint64_t>(v)};
  }
  if (!j.is_array() || j.size() != f.degree())
    throw CircuitError("extension element must be an array of length " + std::to_string(f.degree()));
  std::vector<std::uint64_t> c;
  for (const auto& x : j) {
    if (!x.is_number_integer() || x.get<std::int64_t>() < 0) throw CircuitError("bad coefficient");
    c.push_back(x.get<std::uint64_t>());
  }
  try {
    return f.from_coeffs(c);
  } catch (const FieldError& e) {
    throw CircuitError(e.what());
  }
}

nlohmann::json form_to_json(const Field& f, const LinearForm& l) {
  nlohmann::json arr = nlohmann::json::array();
  for (Elem a : l) arr.push_back(element_to_json(f, a));
  return arr;
}

LinearForm form_from_json(const Field& f, std::size_t n, const nlohmann::json& j) {
  if (!j.is_array() || j.size() != n) throw CircuitError("form must be an array of length " + std::to_string(n));
  LinearForm l;
  for (const auto& x : j) l.push_back(element_from_json(f, x));
  return l;
}

nlohmann::json circuit_to_json(const Circuit& c) {
  nlohmann::json terms = nlohmann::json::array();
  for (const auto& t : c.terms) {
    nlohmann::json forms = nlohmann::json::array();
    for (const auto& l : t.forms) forms.push_back(form_to_json(c.field, l));
    terms.push_back({{"coef", element_to_json(c.field, t.coef)}, {"forms", forms}});
  }
  return {{"p", c.field.characteristic()}, {"e", c.field.degree()}, {"n", c.n}, {"terms", terms}};
}

Circuit circuit_from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw CircuitError("circuit must be a JSON object");
  for (const char* key : {"p", "e", "n", "terms"})
    if (!j.contains(key)) throw CircuitError(std::string("missing key \"") + key + "\"");
  const auto p = j.at("p").get<std::uint64_t>();
  const auto e = j.at("e").get<unsigned>();
  const auto n = j.at("n").get<std::size_t>();
  Field f = Field::make(p, e);
  Circuit c{f, n, {}};
  if (!j.at("terms").is_array()) throw CircuitError("\"terms\" must be an array");
  for (const auto& t : j.at("terms")) {
    Term term{element_from_json(f, t.at("coef")), {}};
    for (const auto& l : t.at("forms")) term.forms.push_back(form_from_json(f, n, l));
    c.terms.push_back(std::move(term));
  }
  c.validate();
  return c;
}

std::string emit_circuit(const Circuit& c) { return circuit_to_json(c).dump(); }

Circuit parse_circuit(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw CircuitError(std::string("invalid JSON: ") + e.what());
  }
  try {
    return circuit_from_json(j);
  } catch (const nlohmann::json::exception& e) {
    throw CircuitError(std::string("malformed circuit: ") + e.what());
  }
}

}  // namespace sps
