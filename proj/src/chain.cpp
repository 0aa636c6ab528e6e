#include "sps/chain.hpp"

#include <algorithm>
#include <boost/multiprecision/cpp_int.hpp>
#include <map>
#include <set>
#include <string>

namespace sps {

namespace {

using boost::multiprecision::cpp_int;

// floor(c * log2 d) for d >= 1.
std::size_t floor_c_log2(std::size_t c, std::size_t d) {
  if (d <= 1 || c == 0) return 0;
  cpp_int x = boost::multiprecision::pow(cpp_int(d), static_cast<unsigned>(c));
  return static_cast<std::size_t>(boost::multiprecision::msb(x));
}

FormList pick_forms(const FormList& l, const std::vector<std::size_t>& pos) {
  FormList out;
  for (std::size_t p : pos) out.push_back(l.at(p));
  return out;
}

std::vector<std::size_t> identity_perm(std::size_t n) {
  std::vector<std::size_t> s(n);
  for (std::size_t i = 0; i < n; ++i) s[i] = i;
  return s;
}

}  // namespace

FormList MData::v_q(const Circuit& c, std::size_t idx) const { return pick_forms(c.terms.at(q.at(idx)).forms, v_pos.at(idx)); }
FormList MData::v_q0(const Circuit& c, std::size_t idx) const { return pick_forms(c.terms.at(q.at(idx)).forms, v0_pos.at(idx)); }
FormList MData::v_q1(const Circuit& c, std::size_t idx) const { return pick_forms(c.terms.at(q.at(idx)).forms, v1_pos.at(idx)); }

RoundResult single_round(const Circuit& c, const SpanBasis& s, const OracleConfig& cfg) {
  c.validate();
  const Field& f = c.field;
  const std::size_t k = c.k();
  if (k < 3) throw CircuitError("a round needs at least three terms");

  FormIdeal ideal = FormIdeal::zero(f, c.n);
  SpanBasis si = s;  // sp(S u I)
  std::vector<std::size_t> alive(k);
  std::vector<std::vector<std::size_t>> rem(k), vpos(k);
  for (std::size_t q = 0; q < k; ++q) {
    alive[q] = q;
    rem[q] = identity_perm(c.terms[q].degree());
  }
  FormList v;
  std::size_t iterations = 0;

  while (true) {
    // Step 1: first form of E outside sp(S u I), terms in index order.
    std::optional<LinearForm> pick;
    for (std::size_t q : alive) {
      for (std::size_t p : rem[q]) {
        if (!si.contains(c.terms[q].forms[p])) {
          pick = c.terms[q].forms[p];
          break;
        }
      }
      if (pick) break;
    }
    if (!pick) {
      if (iterations == 0) throw CircuitError("every form of the circuit lies in sp(S)");
      throw ChainError("no form outside sp(S u I) although the round did not stop");
    }
    // Step 2.
    ideal = ideal.extended(*pick);
    si.insert(*pick);
    ++iterations;
    if (iterations > k - 2) throw ChainError("round exceeded k - 2 iterations");

    // Step 3: surviving terms of E modulo I.
    std::vector<std::size_t> next;
    for (std::size_t q : alive) {
      bool vanishes = false;
      for (std::size_t p : rem[q])
        if (ideal.span().contains(c.terms[q].forms[p])) {
          vanishes = true;
          break;
        }
      if (!vanishes) next.push_back(q);
    }
    if (next.size() < 2) throw ChainError("fewer than two terms survive; the input is not an identity");
    alive = std::move(next);

    // Step 4: gcd data of E modulo I.
    Circuit e{f, c.n, {}};
    for (std::size_t q : alive) {
      Term t{f.one(), pick_forms(c.terms[q].forms, rem[q])};
      e.terms.push_back(std::move(t));
    }
    GcdData g = gcd_data(e, ideal);
    v.insert(v.end(), g.u.begin(), g.u.end());
    for (std::size_t j = 0; j < alive.size(); ++j) {
      const std::size_t q = alive[j];
      for (std::size_t p : g.u_pos[j]) vpos[q].push_back(rem[q][p]);
      std::vector<std::size_t> rest;
      for (std::size_t p : g.rest_pos[j]) rest.push_back(rem[q][p]);
      rem[q] = std::move(rest);
    }

    // Step 5.
    if (alive.size() == 2) {
      for (std::size_t q : alive)
        if (!rem[q].empty()) throw ChainError("fanin-2 quotient is not a common-factor identity");
      break;
    }
    // Step 6.
    bool spanned = true;
    for (std::size_t q : alive)
      for (std::size_t p : rem[q])
        if (!si.contains(c.terms[q].forms[p])) spanned = false;
    if (spanned) break;
  }

  // Trim forms of sp(S u I) \ sp(I) out of V and every V_q.
  auto trimmed = [&](const LinearForm& l) { return si.contains(l) && !ideal.span().contains(l); };
  std::vector<std::size_t> keep;
  for (std::size_t i = 0; i < v.size(); ++i) {
    const bool drop = trimmed(v[i]);
    for (std::size_t q : alive)
      if (trimmed(c.terms[q].forms[vpos[q][i]]) != drop) throw ChainError("matched forms disagree on trimming");
    if (!drop) keep.push_back(i);
  }

  MData md{{}, {}, {}, {}, {}, {}, {}, {}, Circuit{f, c.n, {}}, 0, false};
  md.q = alive;
  for (std::size_t i : keep) md.v.push_back(v[i]);
  for (std::size_t i = 0; i < md.v.size(); ++i) {
    if (ideal.span().contains(md.v[i]))
      md.v0.push_back(i);
    else if (!si.contains(md.v[i]))
      md.v1.push_back(i);
    else
      throw ChainError("V form left in sp(S u I) \\ sp(I)");
  }
  for (std::size_t q : alive) {
    std::vector<std::size_t> pos;
    for (std::size_t i : keep) pos.push_back(vpos[q][i]);
    auto tau = OrderedMatching::certify(ideal, md.v, pick_forms(c.terms[q].forms, pos), identity_perm(pos.size()), true);
    if (!tau) throw ChainError("matching data is not an ordered matching");
    std::vector<std::size_t> p0, p1;
    for (std::size_t p : pos) {
      const LinearForm& l = c.terms[q].forms[p];
      if (ideal.span().contains(l))
        p0.push_back(p);
      else if (!si.contains(l))
        p1.push_back(p);
      else
        throw ChainError("V_q form left in sp(S u I) \\ sp(I)");
    }
    const Elem scale_q = sc(*tau);
    std::vector<char> used(c.terms[q].degree(), 0);
    for (std::size_t p : pos) used[p] = 1;
    Term res{f.mul(scale_q, c.terms[q].coef), {}};
    for (std::size_t p = 0; p < used.size(); ++p) {
      if (used[p]) continue;
      const LinearForm& l = c.terms[q].forms[p];
      if (!trimmed(l)) throw ChainError("residual form outside sp(S u I) \\ sp(I)");
      res.forms.push_back(l);
    }
    md.residual.terms.push_back(std::move(res));
    md.tau.push_back(std::move(*tau));
    md.v_pos.push_back(std::move(pos));
    md.v0_pos.push_back(std::move(p0));
    md.v1_pos.push_back(std::move(p1));
  }
  if (md.q.size() < 2 || md.q.size() >= k) throw ChainError("blocking subset size out of range");
  if (!is_regular(md.residual, ideal)) throw ChainError("residual circuit is not regular modulo I");
  if (!is_identity_mod(md.residual, ideal, cfg)) throw ChainError("residual circuit is not an identity modulo I");
  return RoundResult{std::move(ideal), std::move(md), iterations};
}

ChainBounds chain_bounds(std::size_t k, std::size_t d) {
  ChainBounds b;
  b.k = k;
  b.d = d;
  b.log_bounds_apply = d >= 2;
  const std::size_t c2 = k * (k - 1) / 2;
  const std::size_t l = floor_c_log2(c2, d);
  b.chain_length = 3 * c2 + (k - 1) + l;
  b.type1 = 2 * c2 + l;
  b.type2 = c2;
  b.type3 = k - 1;
  return b;
}

std::size_t factor_rank_bound(std::size_t k, std::size_t d) { return floor_c_log2(k * k * k, d); }

int classify_mdata(const Circuit& c, const MData& md) {
  const Field& f = c.field;
  const FormList first1 = md.v_q1(c, 0);
  for (std::size_t i = 1; i < md.q.size(); ++i)
    if (!lists_similar(f, md.v_q1(c, i), first1)) return 1;
  const FormList first = md.v_q(c, 0);
  for (std::size_t i = 1; i < md.q.size(); ++i)
    if (!lists_similar(f, md.v_q(c, i), first)) return 2;
  return 3;
}

Chain build_chain(const Circuit& c, const ChainOptions& opts) {
  c.validate();
  if (c.k() < 3) throw CircuitError("chains need at least three terms");
  if (!c.homogeneous()) throw CircuitError("chains need terms of equal degree");
  const Field& f = c.field;
  const std::size_t k = c.k(), d = c.max_degree();
  if (opts.verify_input) {
    if (!is_simple(c)) throw CircuitError("circuit is not simple");
    if (!is_identity(c, opts.oracle)) throw CircuitError("circuit is not an identity");
    if (!is_minimal(c, opts.oracle)) throw CircuitError("circuit is not minimal");
  }

  Chain chain;
  const FormList all = circuit_L(c);
  SpanBasis s(f, c.n);
  auto covered = [&] {
    return std::all_of(all.begin(), all.end(), [&](const LinearForm& l) { return s.contains(l); });
  };
  while (!covered()) {
    OracleConfig cfg = opts.oracle;
    cfg.seed = opts.oracle.seed + 7919 * (chain.links.size() + 1);
    RoundResult r = single_round(c, s, cfg);
    std::vector<SpanBasis> pair{s, r.ideal.span()};
    if (!spans_orthogonal(pair)) throw ChainError("round ideal is not orthogonal to S");
    SpanBasis next = s;
    next.absorb(r.ideal.span());
    ChainLink link{s, r.ideal, std::move(r.mdata), next.rank()};
    chain.links.push_back(std::move(link));
    s = std::move(next);
  }

  ChainSummary& sum = chain.summary;
  sum.m = chain.links.size();
  sum.rank = circuit_rank(c);
  sum.bounds = chain_bounds(k, d);
  sum.maximal = covered();

  chain.forest_parent = identity_perm(k);
  auto root = [&](std::size_t x) {
    while (chain.forest_parent[x] != x) x = chain.forest_parent[x];
    return x;
  };
  for (std::size_t i = 0; i < chain.links.size(); ++i) {
    ChainLink& link = chain.links[i];
    link.mdata.type = classify_mdata(c, link.mdata);
    if (link.mdata.type == 1) ++sum.n1;
    if (link.mdata.type == 2) ++sum.n2;
    if (link.mdata.type != 3) continue;
    ++sum.n3;

    // The simple part of C_Q is an identity mod I and lies in sp(S u I).
    const Circuit simc = sim_part(subcircuit(c, link.mdata.q), FormIdeal::zero(f, c.n));
    SpanBasis si = link.s;
    si.absorb(link.ideal.span());
    for (const auto& l : circuit_L(simc))
      if (!si.contains(l)) {
        sum.violations.push_back("round " + std::to_string(i + 1) + ": sim(C_Q) has a form outside sp(S u I)");
        break;
      }
    OracleConfig cfg = opts.oracle;
    cfg.seed = opts.oracle.seed + 104729 * (i + 1);
    if (!is_identity_mod(simc, link.ideal, cfg))
      sum.violations.push_back("round " + std::to_string(i + 1) + ": sim(C_Q) is not an identity modulo I");

    std::set<std::size_t> roots;
    for (std::size_t q : link.mdata.q) roots.insert(root(q));
    if (roots.size() == 1) {
      ++sum.internal;
      sum.violations.push_back("round " + std::to_string(i + 1) + ": internal trivial matching data");
      continue;
    }
    link.mdata.external = true;
    ++sum.external;
    const std::size_t node = chain.forest_parent.size();
    chain.forest_parent.push_back(node);
    chain.forest_label.push_back(i);
    for (std::size_t r : roots) chain.forest_parent[r] = node;
  }

  const ChainBounds& b = sum.bounds;
  if (!sum.maximal) sum.violations.push_back("chain is not maximal");
  if (sum.rank > (k - 2) * sum.m)
    sum.violations.push_back("rank " + std::to_string(sum.rank) + " exceeds (k-2)m = " + std::to_string((k - 2) * sum.m));
  if (sum.external > k - 1) sum.violations.push_back("more than k-1 external links");
  auto check = [&](std::size_t value, std::size_t bound, const char* what) {
    if (value <= bound) return;
    std::string msg = std::string(what) + " = " + std::to_string(value) + " exceeds " + std::to_string(bound);
    if (b.log_bounds_apply)
      sum.violations.push_back(msg);
    else
      sum.notes.push_back(msg + " (d < 2, not enforced)");
  };
  check(sum.m, b.chain_length, "chain length");
  check(sum.n1, b.type1, "#N1");
  check(sum.n2, b.type2, "#N2");
  check(sum.n3, b.type3, "#N3");
  if (!b.log_bounds_apply) sum.notes.push_back("d < 2: logarithmic bounds reported but not enforced");
  sum.ok = sum.violations.empty();
  if (!sum.ok && opts.throw_on_violation) {
    std::string msg = "bound violation:";
    for (const auto& v : sum.violations) msg += " " + v + ";";
    throw BoundViolation(msg);
  }
  return chain;
}

nlohmann::json summary_to_json(const ChainSummary& s) {
  nlohmann::json j = {{"m", s.m},
                      {"rank", s.rank},
                      {"bound", s.bounds.chain_length},
                      {"N1", s.n1},
                      {"N2", s.n2},
                      {"N3", s.n3},
                      {"external", s.external},
                      {"internal", s.internal},
                      {"maximal", s.maximal},
                      {"ok", s.ok}};
  if (!s.violations.empty()) j["violations"] = s.violations;
  return j;
}

std::vector<nlohmann::json> chain_trace(const Circuit& c, const Chain& chain) {
  std::vector<nlohmann::json> out;
  for (std::size_t i = 0; i < chain.links.size(); ++i) {
    const ChainLink& link = chain.links[i];
    nlohmann::json ideal = nlohmann::json::array();
    for (const auto& g : link.ideal.gens()) ideal.push_back(form_to_json(c.field, g));
    nlohmann::json q = nlohmann::json::array();
    nlohmann::json sizes = nlohmann::json::object();
    for (std::size_t j = 0; j < link.mdata.q.size(); ++j) {
      q.push_back(link.mdata.q[j] + 1);
      sizes[std::to_string(link.mdata.q[j] + 1)] = link.mdata.v_pos[j].size();
    }
    out.push_back({{"round", i + 1},
                   {"ideal", ideal},
                   {"Q", q},
                   {"V_q_sizes", sizes},
                   {"type", link.mdata.type},
                   {"external", link.mdata.external},
                   {"green_rank", link.green_rank}});
  }
  out.push_back(summary_to_json(chain.summary));
  return out;
}

}  // namespace sps
