#include "doctest.h"
#include "support.hpp"

using namespace testing_support;

namespace {

FormIdeal ideal_of(const Field& f, std::size_t n, FormList gens) { return FormIdeal(f, n, gens); }

}  // namespace

TEST_CASE("find_matching") {
  Field f5 = Field::make(5);
  auto x3 = ideal_of(f5, 3, {lf({0, 0, 1})});
  auto pi = find_matching({lf({0, 1, 0}), lf({1, 1, 0})}, {lf({0, 1, 1}), lf({1, 1, 2})}, x3);
  REQUIRE(pi);
  CHECK(pi->ordered());
  CHECK(pi->verify());
  for (const auto& e : pi->edges()) CHECK(e.c == Elem{1});
  CHECK(pi->sigma() == std::vector<std::size_t>{0, 1});
  CHECK_FALSE(find_matching({lf({1, 0, 0})}, {lf({0, 1, 0})}, x3));

  FormList u{lf({1, 2, 0}), lf({0, 1, 4})};
  auto id = find_matching(u, u, x3);
  REQUIRE(id);
  for (const auto& e : id->edges()) {
    CHECK(e.c == Elem{1});
    CHECK(e.level == 0);
  }
}

TEST_CASE("certificates") {
  Field f5 = Field::make(5);
  auto I = ideal_of(f5, 3, {lf({0, 0, 1}), lf({0, 1, 0})});
  // x1 -> x1 + x2 needs level 2.
  auto pi = OrderedMatching::certify(I, {lf({1, 0, 0})}, {lf({1, 1, 0})}, {0});
  REQUIRE(pi);
  CHECK(pi->edges()[0].level == 2);
  // x3 -> x3 + x2 is a plain edge only, since x3 lies in sp_2.
  CHECK_FALSE(OrderedMatching::certify(I, {lf({0, 0, 1})}, {lf({0, 1, 1})}, {0}));
  auto plain = OrderedMatching::certify(I, {lf({0, 0, 1})}, {lf({0, 1, 1})}, {0}, false);
  REQUIRE(plain);
  CHECK_FALSE(plain->ordered());
  CHECK_THROWS_AS(sc(*plain), MatchingError);
  CHECK_FALSE(OrderedMatching::certify(I, {lf({1, 0, 0})}, {lf({0, 1, 0})}, {0}));
  CHECK_THROWS_AS(OrderedMatching::make(I, {lf({1, 0, 0})}, {lf({0, 1, 0})}, {0}), MatchingError);
  CHECK_THROWS(OrderedMatching::make(I, {lf({1, 0, 0})}, {lf({1, 0, 0})}, {1}));
}

TEST_CASE("scaling factors") {
  Field f5 = Field::make(5), f7 = Field::make(7);
  auto x3 = ideal_of(f5, 3, {lf({0, 0, 1})});
  auto one = OrderedMatching::make(x3, {lf({1, 0, 0})}, {lf({2, 0, 1})}, {0});
  CHECK(sc(one) == Elem{2});
  auto empty = OrderedMatching::make(x3, {}, {}, {});
  CHECK(sc(empty) == Elem{1});
  auto y3 = ideal_of(f7, 3, {lf({0, 0, 1})});
  auto two = OrderedMatching::make(y3, {lf({1, 0, 0}), lf({0, 1, 0})}, {lf({0, 3, 1}), lf({2, 0, 0})}, {1, 0});
  CHECK(sc(two) == Elem{6});
  CHECK(sc(disjoint_union(one, empty)) == sc(one));
  auto round = compose(one, invert(one));
  CHECK(sc(round) == Elem{1});
  CHECK(round.sigma() == std::vector<std::size_t>{0});
  CHECK(round.edges()[0].c == Elem{1});
}

TEST_CASE("algebra of scaling factors on random ordered matchings") {
  Rng rng(71);
  Field f = Field::make(5);
  for (int t = 0; t < 200; ++t) {
    const std::size_t n = 2 + rand_below(5, rng);
    auto I = rand_ideal(f, n, 1 + rand_below(n - 1, rng), rng);
    FormList u = forms_outside(f, n, rand_below(9, rng), I, rng);
    auto pi = rand_ordered_matching(u, I, rng);
    CHECK(pi.verify());
    CHECK(sc(invert(pi)) == f.inv(sc(pi)));
    auto rho = rand_ordered_matching(forms_outside(f, n, rand_below(5, rng), I, rng), I, rng);
    CHECK(sc(disjoint_union(pi, rho)) == f.mul(sc(pi), sc(rho)));
    auto second = rand_ordered_matching(pi.codomain(), I, rng);
    auto comp = compose(second, pi);
    CHECK(comp.ordered());
    CHECK(comp.verify());
    CHECK(sc(comp) == f.mul(sc(pi), sc(second)));
  }
}

TEST_CASE("restriction keeps certificates") {
  Rng rng(73);
  Field f = Field::make(5);
  for (int t = 0; t < 50; ++t) {
    auto I = rand_ideal(f, 4, 2, rng);
    auto pi = rand_ordered_matching(forms_outside(f, 4, 6, I, rng), I, rng);
    std::vector<std::size_t> keep;
    for (std::size_t i = 0; i < 6; ++i)
      if (rng() & 1) keep.push_back(i);
    auto r = restrict_to(pi, keep);
    CHECK(r.verify());
    CHECK(r.size() == keep.size());
    Elem prod = f.one();
    for (std::size_t i : keep) prod = f.mul(prod, pi.edges()[i].c);
    CHECK(sc(r) == prod);
  }
}

TEST_CASE("unscramble") {
  Field f5 = Field::make(5);
  auto x3 = ideal_of(f5, 3, {lf({0, 0, 1})});
  auto pi = OrderedMatching::make(x3, {lf({1, 0, 0}), lf({1, 0, 0})}, {lf({1, 0, 1}), lf({1, 0, 0})}, {0, 1});
  auto fixed = unscramble(pi, {0}, {1});
  CHECK(fixed.sigma() == std::vector<std::size_t>{1, 0});
  CHECK(fixed.verify());
  CHECK(similar(f5, fixed.codomain()[fixed.sigma()[0]], fixed.domain()[0]));
  CHECK(unscramble(pi, {}, {}).sigma() == pi.sigma());
  CHECK(unscramble(pi, {1}, {1}).sigma() == pi.sigma());
  CHECK_THROWS_AS(unscramble(pi, {0}, {0}), MatchingError);
}

TEST_CASE("trivialize") {
  Field f5 = Field::make(5);
  auto x3 = ideal_of(f5, 3, {lf({0, 0, 1})});
  auto pi = OrderedMatching::make(x3, {lf({1, 0, 0})}, {lf({2, 0, 0})}, {0});
  auto t = trivialize(pi);
  CHECK(t.sigma() == pi.sigma());
  CHECK(sc(t) == Elem{2});

  // Each form is sent to the image similar to the other one.
  auto I = ideal_of(f5, 3, {lf({0, 0, 1})});
  FormList u{lf({1, 0, 0}), lf({1, 0, 1})};
  FormList v{lf({3, 0, 3}), lf({2, 0, 0})};
  auto scr = OrderedMatching::make(I, u, v, {0, 1});
  auto triv = trivialize(scr);
  CHECK(triv.sigma() == std::vector<std::size_t>{1, 0});
  CHECK(sc(triv) == sc(scr));
}

TEST_CASE("trivialized matchings give M(V) = sc M(U) on random similar lists") {
  Rng rng(79);
  Field f = Field::make(5);
  for (int t = 0; t < 100; ++t) {
    const std::size_t n = 3 + rand_below(3, rng);
    auto I = rand_ideal(f, n, 1 + rand_below(2, rng), rng);
    // Lists with several forms per residue class so that scrambling happens.
    FormList base = forms_outside(f, n, 1 + rand_below(3, rng), I, rng), u;
    const std::size_t m = 2 + rand_below(5, rng);
    for (std::size_t i = 0; i < m; ++i)
      u.push_back(add(f, base[rand_below(base.size(), rng)], rand_in_span(f, I.span(), rng)));
    auto perm = rand_perm(m, rng);
    FormList v(m);
    for (std::size_t i = 0; i < m; ++i) v[perm[i]] = scale(f, u[i], rand_nonzero(f, rng));
    // Random class-respecting bijection.
    std::vector<std::size_t> sigma(m);
    std::vector<bool> used(m, false);
    for (std::size_t i = 0; i < m; ++i) {
      std::vector<std::size_t> options;
      for (std::size_t j = 0; j < m; ++j)
        if (!used[j] && class_key(u[i], I) == class_key(v[j], I)) options.push_back(j);
      REQUIRE_FALSE(options.empty());
      sigma[i] = options[rand_below(options.size(), rng)];
      used[sigma[i]] = true;
    }
    auto pi = OrderedMatching::certify(I, u, v, sigma, true);
    if (!pi) {
      pi = find_matching(u, v, I);
      REQUIRE(pi);
    }
    if (!pi->ordered()) continue;
    auto triv = trivialize(*pi);
    CHECK(sc(triv) == sc(*pi));
    for (std::size_t i = 0; i < m; ++i) CHECK(similar(f, v[triv.sigma()[i]], u[i]));
    SparsePoly mv = expand_product(f, n, f.one(), v);
    SparsePoly mu = expand_product(f, n, sc(*pi), u);
    CHECK(mv == mu);
  }
}

TEST_CASE("doubling check") {
  auto t = gen_tight_lists(4);
  REQUIRE(t.ideals.size() == 4);
  auto rep = doubling_check(t.u, t.v, t.ideals, t.matchings);
  CHECK(rep.verdict == DoublingVerdict::bound_ok);
  CHECK(rep.r == 4);

  Field f5 = Field::make(5);
  FormList u{lf({1, 0, 0}), lf({0, 1, 0})};
  auto I1 = ideal_of(f5, 3, {lf({0, 0, 1})}), I2 = ideal_of(f5, 3, {lf({1, 1, 1})});
  std::vector<OrderedMatching> ms{*find_matching(u, u, I1), *find_matching(u, u, I2)};
  CHECK(doubling_check(u, u, {I1, I2}, ms).verdict == DoublingVerdict::similar);

  auto x1 = ideal_of(f5, 3, {lf({1, 0, 0})});
  FormList a{lf({0, 0, 1})}, b{lf({1, 0, 1})};
  auto single = doubling_check(a, b, {x1}, {*find_matching(a, b, x1)});
  CHECK(single.verdict == DoublingVerdict::bound_ok);
  CHECK(single.r == 1);

  auto y = ideal_of(f5, 3, {lf({1, 0, 0}), lf({0, 1, 0})}), z = ideal_of(f5, 3, {lf({1, 1, 0})});
  FormList c{lf({0, 0, 1})}, d{lf({1, 1, 1})};
  auto my = find_matching(c, d, y), mz = find_matching(c, d, z);
  REQUIRE(my);
  REQUIRE(mz);
  CHECK_THROWS_AS(doubling_check(c, d, {y, z}, {*my, *mz}), MatchingError);
  CHECK(to_string(DoublingVerdict::contradiction) == "CONTRADICTION");
}
