#include "sps/matching.hpp"

#include <algorithm>
#include <bit>
#include <map>

namespace sps {

namespace {

std::optional<MatchEdge> edge_at(const FormIdeal& ideal, const LinearForm& l, const LinearForm& m,
                                 std::size_t j) {
  const Field& f = ideal.field();
  const SpanBasis& sp = ideal.prefix(j);
  const LinearForm rl = sp.reduce(l);
  if (is_zero(rl)) return std::nullopt;
  auto c = similar(f, sp.reduce(m), rl);
  if (!c || !c->raw) return std::nullopt;
  return MatchEdge{0, *c, axpy(f, m, f.neg(*c), l), j};
}

std::optional<MatchEdge> certify_edge(const FormIdeal& ideal, const LinearForm& l, const LinearForm& m,
                                      bool ordered) {
  const std::size_t r = ideal.size();
  if (ordered) {
    for (std::size_t j = 0; j <= r; ++j)
      if (auto e = edge_at(ideal, l, m, j)) return e;
    return std::nullopt;
  }
  if (auto e = edge_at(ideal, l, m, r)) return e;
  const Field& f = ideal.field();
  if (ideal.span().contains(l) && ideal.span().contains(m)) {
    Elem c = f.one();
    if (auto s = similar(f, m, l); s && s->raw) c = *s;
    return MatchEdge{0, c, axpy(f, m, f.neg(c), l), r};
  }
  return std::nullopt;
}

std::vector<std::size_t> complement(std::size_t n, const std::vector<std::size_t>& sub) {
  std::vector<char> in(n, 0);
  for (std::size_t i : sub) in.at(i) = 1;
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < n; ++i)
    if (!in[i]) out.push_back(i);
  return out;
}

FormList pick(const FormList& l, const std::vector<std::size_t>& pos) {
  FormList out;
  for (std::size_t i : pos) out.push_back(l.at(i));
  return out;
}

void check_same_ideal(const OrderedMatching& a, const OrderedMatching& b) {
  if (!(a.ideal() == b.ideal())) throw MatchingError("matchings use different ideals");
}

}  // namespace

std::optional<OrderedMatching> OrderedMatching::certify(const FormIdeal& ideal, FormList u, FormList v,
                                                        std::vector<std::size_t> sigma, bool ordered) {
  if (u.size() != v.size() || sigma.size() != u.size()) return std::nullopt;
  std::vector<char> hit(v.size(), 0);
  std::vector<MatchEdge> edges;
  edges.reserve(u.size());
  for (std::size_t i = 0; i < u.size(); ++i) {
    if (sigma[i] >= v.size() || hit[sigma[i]]) return std::nullopt;
    hit[sigma[i]] = 1;
    if (u[i].size() != ideal.dim() || v[sigma[i]].size() != ideal.dim()) return std::nullopt;
    auto e = certify_edge(ideal, u[i], v[sigma[i]], ordered);
    if (!e) return std::nullopt;
    e->target = sigma[i];
    edges.push_back(std::move(*e));
  }
  return OrderedMatching(ideal, std::move(u), std::move(v), std::move(edges), ordered);
}

OrderedMatching OrderedMatching::make(const FormIdeal& ideal, FormList u, FormList v, std::vector<std::size_t> sigma,
                                      bool ordered) {
  auto m = certify(ideal, std::move(u), std::move(v), std::move(sigma), ordered);
  if (!m) throw MatchingError(ordered ? "not an ordered matching" : "not an ideal matching");
  return std::move(*m);
}

std::vector<std::size_t> OrderedMatching::sigma() const {
  std::vector<std::size_t> s;
  s.reserve(edges_.size());
  for (const auto& e : edges_) s.push_back(e.target);
  return s;
}

bool OrderedMatching::verify() const {
  auto again = certify(ideal_, u_, v_, sigma(), ordered_);
  if (!again) return false;
  const Field& f = ideal_.field();
  for (std::size_t i = 0; i < edges_.size(); ++i) {
    const auto& e = edges_[i];
    const auto& g = again->edges_[i];
    if (e.c != g.c || e.level != g.level || e.w != g.w || !e.c.raw) return false;
    if (add(f, scale(f, u_[i], e.c), e.w) != v_[e.target]) return false;
    if (!ideal_.prefix(e.level).contains(e.w)) return false;
    if (ordered_ && ideal_.prefix(e.level).contains(u_[i])) return false;
  }
  return true;
}

std::optional<OrderedMatching> find_matching(const FormList& u, const FormList& v, const FormIdeal& ideal) {
  if (u.size() != v.size()) return std::nullopt;
  std::map<Vector, std::vector<std::size_t>> slots;
  for (std::size_t j = v.size(); j-- > 0;) slots[class_key(v[j], ideal)].push_back(j);
  std::vector<std::size_t> sigma(u.size());
  for (std::size_t i = 0; i < u.size(); ++i) {
    auto it = slots.find(class_key(u[i], ideal));
    if (it == slots.end() || it->second.empty()) return std::nullopt;
    sigma[i] = it->second.back();
    it->second.pop_back();
  }
  if (auto m = OrderedMatching::certify(ideal, u, v, sigma, true)) return m;
  return OrderedMatching::certify(ideal, u, v, sigma, false);
}

Elem sc(const OrderedMatching& pi) {
  if (!pi.ordered()) throw MatchingError("scaling factor needs an ordered matching");
  const Field& f = pi.ideal().field();
  Elem s = f.one();
  for (const auto& e : pi.edges()) s = f.mul(s, e.c);
  return s;
}

OrderedMatching invert(const OrderedMatching& pi) {
  std::vector<std::size_t> inv(pi.size());
  for (std::size_t i = 0; i < pi.size(); ++i) inv[pi.edges()[i].target] = i;
  return OrderedMatching::make(pi.ideal(), pi.codomain(), pi.domain(), inv, pi.ordered());
}

OrderedMatching disjoint_union(const OrderedMatching& a, const OrderedMatching& b) {
  check_same_ideal(a, b);
  FormList u = a.domain(), v = a.codomain();
  u.insert(u.end(), b.domain().begin(), b.domain().end());
  v.insert(v.end(), b.codomain().begin(), b.codomain().end());
  std::vector<std::size_t> sigma = a.sigma();
  for (std::size_t t : b.sigma()) sigma.push_back(t + a.size());
  return OrderedMatching::make(a.ideal(), std::move(u), std::move(v), std::move(sigma),
                               a.ordered() && b.ordered());
}

OrderedMatching compose(const OrderedMatching& second, const OrderedMatching& first) {
  check_same_ideal(first, second);
  if (first.codomain() != second.domain()) throw MatchingError("composition needs matching middle lists");
  std::vector<std::size_t> sigma(first.size());
  for (std::size_t i = 0; i < first.size(); ++i) sigma[i] = second.edges()[first.edges()[i].target].target;
  return OrderedMatching::make(first.ideal(), first.domain(), second.codomain(), std::move(sigma),
                               first.ordered() && second.ordered());
}

OrderedMatching restrict_to(const OrderedMatching& pi, const std::vector<std::size_t>& keep) {
  std::vector<std::size_t> images;
  for (std::size_t i : keep) images.push_back(pi.edges().at(i).target);
  std::vector<std::size_t> targets = images;
  std::sort(targets.begin(), targets.end());
  std::vector<std::size_t> sigma;
  for (std::size_t t : images)
    sigma.push_back(static_cast<std::size_t>(std::lower_bound(targets.begin(), targets.end(), t) - targets.begin()));
  return OrderedMatching::make(pi.ideal(), pick(pi.domain(), keep), pick(pi.codomain(), targets), std::move(sigma),
                               pi.ordered());
}

OrderedMatching unscramble(const OrderedMatching& pi, const std::vector<std::size_t>& u_sub,
                           const std::vector<std::size_t>& v_sub) {
  const Field& f = pi.ideal().field();
  const FormList& u = pi.domain();
  const FormList& v = pi.codomain();
  if (!lists_similar(f, pick(u, u_sub), pick(v, v_sub))) throw MatchingError("sublists are not similar");

  std::vector<std::size_t> sigma = pi.sigma();
  std::vector<std::size_t> inv(sigma.size());
  for (std::size_t i = 0; i < sigma.size(); ++i) inv[sigma[i]] = i;
  std::vector<char> in_vsub(v.size(), 0), in_usub(u.size(), 0), good(u.size(), 0);
  for (std::size_t t : v_sub) in_vsub[t] = 1;
  for (std::size_t i : u_sub) in_usub[i] = 1;
  auto is_good = [&](std::size_t i) { return in_vsub[sigma[i]] && similar(f, v[sigma[i]], u[i]).has_value(); };
  for (std::size_t i : u_sub) good[i] = is_good(i);

  for (std::size_t i : u_sub) {
    if (good[i]) continue;
    std::optional<std::size_t> slot;
    for (std::size_t t : v_sub) {
      const std::size_t owner = inv[t];
      if (in_usub[owner] && good[owner]) continue;
      if (similar(f, v[t], u[i])) {
        slot = t;
        break;
      }
    }
    if (!slot) throw MatchingError("unscramble found no free similar slot");
    const std::size_t other = inv[*slot];
    std::swap(sigma[i], sigma[other]);
    inv[sigma[i]] = i;
    inv[sigma[other]] = other;
    good[i] = 1;
  }
  return OrderedMatching::make(pi.ideal(), u, v, std::move(sigma), pi.ordered());
}

OrderedMatching trivialize(const OrderedMatching& pi) {
  std::vector<std::size_t> all(pi.size());
  for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
  return unscramble(pi, all, all);
}

std::string to_string(DoublingVerdict v) {
  switch (v) {
    case DoublingVerdict::similar:
      return "SIMILAR";
    case DoublingVerdict::bound_ok:
      return "BOUND_OK";
    case DoublingVerdict::contradiction:
      return "CONTRADICTION";
  }
  return "?";
}

DoublingReport doubling_check(const FormList& u, const FormList& v, const std::vector<FormIdeal>& ideals,
                              const std::vector<OrderedMatching>& matchings) {
  if (u.empty() || u.size() != v.size()) throw MatchingError("doubling check needs two nonempty lists of equal size");
  if (ideals.size() != matchings.size()) throw MatchingError("one matching per ideal is required");
  if (ideals.empty()) throw MatchingError("doubling check needs at least one ideal");
  const Field& f = ideals.front().field();
  const std::size_t n = u.front().size();
  {
    std::vector<SpanBasis> spans;
    for (const auto& I : ideals) spans.push_back(I.span());
    if (!spans_orthogonal(spans)) throw MatchingError("ideals are not orthogonal");
  }
  for (std::size_t i = 0; i < matchings.size(); ++i) {
    const auto& m = matchings[i];
    if (!(m.ideal() == ideals[i]) || m.domain() != u || m.codomain() != v || !m.verify())
      throw MatchingError("matching " + std::to_string(i + 1) + " is not a valid matching between the lists");
  }

  DoublingReport rep;
  rep.d = u.size();
  rep.r = ideals.size();

  // Maximal similar sublists, taken class by class in list order.
  std::map<Vector, std::size_t> quota;
  {
    std::map<Vector, std::size_t> cu, cv;
    for (const auto& l : u) ++cu[normalize(f, l).canonical];
    for (const auto& l : v) ++cv[normalize(f, l).canonical];
    for (const auto& [k, c] : cu)
      if (cv.count(k)) quota[k] = std::min(c, cv[k]);
  }
  auto take = [&](const FormList& l) {
    std::map<Vector, std::size_t> left = quota;
    std::vector<std::size_t> pos;
    for (std::size_t i = 0; i < l.size(); ++i) {
      auto it = left.find(normalize(f, l[i]).canonical);
      if (it != left.end() && it->second > 0) {
        --it->second;
        pos.push_back(i);
      }
    }
    return pos;
  };
  const auto u1 = take(u), v1 = take(v);
  const auto u_rest = complement(u.size(), u1), v_rest = complement(v.size(), v1);
  rep.d_prime = u_rest.size();
  if (rep.d_prime == 0) {
    rep.verdict = DoublingVerdict::similar;
    return rep;
  }

  for (std::size_t i = 0; i < matchings.size(); ++i) {
    OrderedMatching p = restrict_to(unscramble(matchings[i], u1, v1), u_rest);
    if (p.codomain() != pick(v, v_rest))
      rep.failures.push_back("matching " + std::to_string(i + 1) + " does not restrict to the leftover lists");
  }

  const FormList ur = pick(u, u_rest), vr = pick(v, v_rest);
  const LinearForm& seed = ur.front();
  SpanBasis b(f, n);
  b.insert(seed);
  auto count = [&](const FormList& l) {
    return static_cast<std::size_t>(std::count_if(l.begin(), l.end(), [&](const LinearForm& x) { return b.contains(x); }));
  };
  rep.initial_green = count(ur) + count(vr);

  rep.i0 = rep.r + 1;
  {
    SpanBasis j(f, n);
    for (std::size_t i = 0; i < ideals.size(); ++i) {
      j.absorb(ideals[i].span());
      if (j.contains(seed)) {
        rep.i0 = i + 1;
        break;
      }
    }
  }

  std::size_t prev_total = rep.initial_green;
  for (std::size_t i = 0; i < ideals.size(); ++i) {
    b.absorb(ideals[i].span());
    DoublingRound round;
    round.round = i + 1;
    round.green_u = count(ur);
    round.green_v = count(vr);
    const std::size_t total = round.green_u + round.green_v;
    round.doubling_required = round.round != 1 && round.round != rep.i0;
    round.doubled = total >= 2 * prev_total;
    if (round.green_u != round.green_v)
      rep.failures.push_back("round " + std::to_string(round.round) + ": green counts differ");
    if (round.doubling_required && !round.doubled)
      rep.failures.push_back("round " + std::to_string(round.round) + ": green count did not double");
    rep.rounds.push_back(round);
    prev_total = total;
  }

  const auto bits = static_cast<std::size_t>(std::bit_width(rep.d_prime) - 1);  // floor(log2 d')
  if (rep.r > 2 && rep.r - 2 > bits)
    rep.failures.push_back("r - 2 exceeds log2 d'");
  rep.verdict = rep.failures.empty() ? DoublingVerdict::bound_ok : DoublingVerdict::contradiction;
  return rep;
}

}  // namespace sps
