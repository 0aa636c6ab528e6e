#include "doctest.h"
#include "support.hpp"

using namespace testing_support;

namespace {

OracleConfig exact_cfg() {
  OracleConfig c;
  c.mode = OracleConfig::Mode::exact;
  return c;
}

SpanBasis basis_of(const Field& f, std::size_t n, const FormList& forms) {
  SpanBasis b(f, n);
  for (const auto& l : forms) b.insert(l);
  return b;
}

std::size_t total_links(const ChainSummary& s) { return s.n1 + s.n2 + s.n3; }

void check_chain_invariants(const Circuit& c, const Chain& ch) {
  const auto& s = ch.summary;
  CHECK(s.ok);
  CHECK(s.maximal);
  CHECK(s.internal == 0);
  CHECK(s.m == ch.links.size());
  CHECK(total_links(s) == s.m);
  CHECK(s.rank == circuit_rank(c));
  CHECK(s.rank <= (c.k() - 2) * s.m);
  CHECK(s.m <= s.bounds.chain_length);
  CHECK(s.n1 <= s.bounds.type1);
  CHECK(s.n2 <= s.bounds.type2);
  CHECK(s.n3 <= s.bounds.type3);
  CHECK(s.external <= c.k() - 1);
  SpanBasis seen(c.field, c.n);
  for (std::size_t i = 0; i < ch.links.size(); ++i) {
    const auto& link = ch.links[i];
    CHECK(link.s == seen);
    {
      std::vector<SpanBasis> pair{link.s, link.ideal.span()};
      CHECK(spans_orthogonal(pair));
    }
    CHECK(link.mdata.q.size() >= 2);
    CHECK(link.mdata.q.size() < c.k());
    for (const auto& g : link.ideal.gens()) seen.insert(g);
    CHECK(link.green_rank == seen.rank());
  }
  for (const auto& l : circuit_L(c)) CHECK(seen.contains(l));
}

}  // namespace

TEST_CASE("single round on the three-variable identity") {
  Circuit ks = gen_ks(3);
  const Field& f = ks.field;
  auto r1 = single_round(ks, SpanBasis(f, 3), exact_cfg());
  CHECK(r1.ideal.gens() == FormList{lf({1, 0, 0})});
  CHECK(r1.mdata.q == std::vector<std::size_t>{1, 2});
  REQUIRE(r1.mdata.v_pos.size() == 2);
  CHECK(r1.mdata.v_q(ks, 0).size() == 2);
  CHECK(r1.mdata.v_q(ks, 1).size() == 2);
  // x3 and x3 + x2 per term after reducing by x1.
  CHECK(r1.mdata.v.size() == 2);

  auto r3 = single_round(ks, basis_of(f, 3, {lf({1, 0, 0}), lf({0, 1, 0})}), exact_cfg());
  CHECK(r3.ideal.gens() == FormList{lf({0, 0, 1})});
  CHECK(r3.mdata.q == std::vector<std::size_t>{0, 2});
  CHECK(r3.mdata.v.empty());
  CHECK(r3.mdata.v_q(ks, 0).empty());
  CHECK(r3.mdata.v_q(ks, 1).empty());
  CHECK(r3.mdata.residual.k() == 2);
  CHECK(zero_mod_oracle(r3.mdata.residual, r3.ideal));

  CHECK_THROWS(single_round(ks, basis_of(f, 3, {lf({1, 0, 0}), lf({0, 1, 0}), lf({0, 0, 1})}), exact_cfg()));
}

TEST_CASE("chain on the three-variable identity") {
  Circuit ks = gen_ks(3);
  auto ch = build_chain(ks);
  check_chain_invariants(ks, ch);
  REQUIRE(ch.links.size() == 3);
  CHECK(ch.links[0].ideal.gens() == FormList{lf({1, 0, 0})});
  CHECK(ch.links[1].ideal.gens() == FormList{lf({0, 1, 0})});
  CHECK(ch.links[2].ideal.gens() == FormList{lf({0, 0, 1})});
  CHECK(ch.summary.bounds.chain_length == 14);
  CHECK(ch.links[0].mdata.type == 1);
  CHECK(ch.links[2].mdata.type == 3);
  CHECK(ch.links[2].mdata.external);
  // Terms 1 and 3 now hang under a new root.
  REQUIRE(ch.forest_parent.size() >= 4);
  CHECK(ch.forest_parent[0] == ch.forest_parent[2]);
  CHECK(ch.forest_parent[0] >= 3);
}

TEST_CASE("first-round classification by hand") {
  // Over F_2 no scalar sends x3 to x3 + x1, so (x3, x3+x1+x2) and (x3+x1, x3+x2) differ.
  Field f2 = Field::make(2);
  CHECK_FALSE(lists_similar(f2, {lf({0, 0, 1}), lf({1, 1, 1})}, {lf({1, 0, 1}), lf({0, 1, 1})}));
  Circuit ks = gen_ks(3);
  auto r1 = single_round(ks, SpanBasis(f2, 3), exact_cfg());
  CHECK(classify_mdata(ks, r1.mdata) == 1);
}

TEST_CASE("chains on larger identities") {
  for (std::size_t r = 4; r <= 6; ++r) {
    Circuit ks = gen_ks(r);
    auto ch = build_chain(ks);
    check_chain_invariants(ks, ch);
    if (r == 4) CHECK(ch.summary.m <= 17);
  }
  Circuit d1 = gen_family(3, 1);
  auto ch = build_chain(d1);
  check_chain_invariants(d1, ch);
  const auto b = chain_bounds(4, d1.max_degree());
  CHECK(ch.summary.m <= b.chain_length);
}

TEST_CASE("chains on random changes of variables") {
  Rng rng(83);
  for (int t = 0; t < 10; ++t) {
    Circuit c = rand_ks_identity(3 + rand_below(3, rng), rng);
    auto ch = build_chain(c);
    check_chain_invariants(c, ch);
  }
}

TEST_CASE("bound values") {
  auto b = chain_bounds(3, 4);
  CHECK(b.chain_length == 17);
  CHECK(b.type1 == 12);
  CHECK(b.type2 == 3);
  CHECK(b.type3 == 2);
  CHECK(b.log_bounds_apply);
  // log2 3 = 1.58...: C(4,2) log2 3 = 9.5..
  auto c = chain_bounds(4, 3);
  CHECK(c.chain_length == 18 + 3 + 9);
  CHECK(c.type1 == 12 + 9);
  CHECK_FALSE(chain_bounds(3, 1).log_bounds_apply);
  CHECK(factor_rank_bound(3, 4) == 54);
  CHECK(factor_rank_bound(2, 3) == 12);
}

TEST_CASE("input verification") {
  Field f2 = Field::make(2);
  auto [nonsimple, nonminimal] = gen_intro_counterexamples(2);
  CHECK_THROWS_AS(build_chain(nonsimple), CircuitError);
  CHECK_THROWS_AS(build_chain(nonminimal), CircuitError);
  Circuit two{f2, 2, {Term{Elem{1}, {lf({1, 0})}}, Term{Elem{1}, {lf({0, 1})}}}};
  CHECK_THROWS(build_chain(two));
  Circuit ks = gen_ks(3);
  ks.terms[0].forms[0] = lf({1, 1, 0});
  CHECK_THROWS_AS(build_chain(ks), CircuitError);
}

TEST_CASE("traces are deterministic") {
  Circuit ks = gen_ks(4);
  auto a = chain_trace(ks, build_chain(ks)), b = chain_trace(ks, build_chain(ks));
  REQUIRE(a.size() == b.size());
  for (std::size_t i = 0; i < a.size(); ++i) CHECK(a[i].dump() == b[i].dump());
  CHECK(a.back().contains("N1"));
  CHECK(a.front().contains("green_rank"));
}

TEST_CASE("search for a second-type link") {
  Rng rng(89);
  std::size_t found = 0, chains = 0;
  for (int t = 0; t < 20; ++t) {
    Circuit c = t % 2 ? rand_ks_identity(3 + rand_below(3, rng), rng) : gen_family(3 + rand_below(2, rng), 1);
    if (t % 4 == 0) c = change_variables(c, rand_invertible(c.field, c.n, rng));
    auto ch = build_chain(c);
    ++chains;
    found += ch.summary.n2;
  }
  MESSAGE("second-type links found: " << found << " over " << chains << " chains");
  CHECK(chains == 20);
}
