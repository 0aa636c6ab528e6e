#include "doctest.h"
#include "support.hpp"

using namespace testing_support;

TEST_CASE("normalize") {
  Field f5 = Field::make(5), f2 = Field::make(2);
  auto n1 = normalize(f5, lf({3, 2}));
  CHECK(n1.canonical == lf({1, 4}));
  CHECK(n1.scalar == Elem{3});
  auto n2 = normalize(f2, lf({0, 1}));
  CHECK(n2.canonical == lf({0, 1}));
  CHECK(n2.scalar == Elem{1});
  auto n3 = normalize(f5, lf({0, 0, 2}));
  CHECK(n3.canonical == lf({0, 0, 1}));
  CHECK(n3.scalar == Elem{2});
}

TEST_CASE("similar forms") {
  Field f5 = Field::make(5), f2 = Field::make(2);
  CHECK(similar(f5, lf({2, 2}), lf({1, 1})) == Elem{2});
  CHECK_FALSE(similar(f5, lf({1, 0}), lf({0, 1})));
  CHECK(similar(f2, lf({1, 1}), lf({1, 1})) == Elem{1});
}

TEST_CASE("simi") {
  Field f5 = Field::make(5), f2 = Field::make(2);
  auto s = simi(f5, lf({1, 0}), {lf({1, 0}), lf({2, 0}), lf({0, 1})});
  CHECK(s == FormList{lf({1, 0}), lf({2, 0})});
  CHECK(simi(f5, lf({0, 0, 1}), {lf({1, 0, 0}), lf({0, 1, 0})}).empty());
  CHECK(simi(f2, lf({1, 1}), {lf({1, 1})}).size() == 1);
}

TEST_CASE("similar lists") {
  Field f5 = Field::make(5);
  auto p = lists_similar(f5, {lf({1, 0}), lf({0, 1})}, {lf({0, 2}), lf({3, 0})});
  REQUIRE(p);
  CHECK(*p == std::vector<std::size_t>{1, 0});
  CHECK_FALSE(lists_similar(f5, {lf({1, 0}), lf({1, 0})}, {lf({1, 0}), lf({0, 1})}));
  auto e = lists_similar(f5, {}, {});
  REQUIRE(e);
  CHECK(e->empty());
  CHECK_FALSE(lists_similar(f5, {lf({1, 0})}, {}));
}

TEST_CASE("similar lists witness is a valid bijection on random inputs") {
  Rng rng(17);
  Field f = Field::make(5);
  for (int t = 0; t < 200; ++t) {
    FormList u;
    const std::size_t m = rand_below(7, rng);
    for (std::size_t i = 0; i < m; ++i) u.push_back(rand_form(f, 3, rng));
    auto perm = rand_perm(m, rng);
    FormList v(m);
    for (std::size_t i = 0; i < m; ++i) v[perm[i]] = scale(f, u[i], rand_nonzero(f, rng));
    auto w = lists_similar(f, u, v);
    REQUIRE(w);
    std::vector<bool> hit(m, false);
    for (std::size_t i = 0; i < m; ++i) {
      CHECK(similar(f, v[(*w)[i]], u[i]));
      hit[(*w)[i]] = true;
    }
    CHECK(std::all_of(hit.begin(), hit.end(), [](bool b) { return b; }));
    if (m > 0) {
      v[0] = add(f, v[0], unit_form(f, 3, 0));
      if (!is_zero(v[0]) && !lists_similar(f, u, v)) {
        // The multiset of classes changed.
        std::vector<Vector> a, b;
        for (auto& x : u) a.push_back(normalize(f, x).canonical);
        for (auto& x : v) b.push_back(normalize(f, x).canonical);
        std::sort(a.begin(), a.end());
        std::sort(b.begin(), b.end());
        CHECK(a != b);
      }
    }
  }
}

TEST_CASE("coprime lists") {
  Field f5 = Field::make(5);
  CHECK(lists_coprime(f5, {lf({1, 0})}, {lf({0, 1})}));
  CHECK_FALSE(lists_coprime(f5, {lf({1, 0})}, {lf({2, 0})}));
  CHECK(lists_coprime(f5, {}, {lf({1, 1})}));
}

TEST_CASE("homogenization") {
  Field f5 = Field::make(5);
  // (x1 + 1) - (x1 + 1) over F_5 in one variable.
  AffineForm a{lf({1}), Elem{1}};
  auto c = homogenize(f5, {AffineTerm{Elem{1}, {a}}, AffineTerm{Elem{4}, {a}}}, 1);
  CHECK(c.n == 2);
  REQUIRE(c.k() == 2);
  CHECK(c.terms[0].forms == FormList{lf({1, 1})});
  CHECK(c.terms[1].forms == FormList{lf({1, 1})});
  CHECK(zero_test_exact(c));

  // x1 x2 + (x3 + 2) over F_5.
  AffineForm x1{lf({1, 0, 0}), Elem{0}}, x2{lf({0, 1, 0}), Elem{0}}, x3p2{lf({0, 0, 1}), Elem{2}};
  auto h = homogenize(f5, {AffineTerm{Elem{1}, {x1, x2}}, AffineTerm{Elem{1}, {x3p2}}}, 3);
  CHECK(h.n == 4);
  CHECK(h.homogeneous());
  CHECK(h.terms[0].forms == FormList{lf({1, 0, 0, 0}), lf({0, 1, 0, 0})});
  CHECK(h.terms[1].forms == FormList{lf({0, 0, 1, 2}), lf({0, 0, 0, 1})});

  // Already homogeneous input only gains the unused variable.
  AffineForm y1{lf({1, 0}), Elem{0}}, y2{lf({0, 1}), Elem{0}};
  auto g = homogenize(f5, {AffineTerm{Elem{2}, {y1, y2}}, AffineTerm{Elem{3}, {y2, y2}}}, 2);
  CHECK(g.n == 3);
  CHECK(g.terms[0].forms == FormList{lf({1, 0, 0}), lf({0, 1, 0})});
  CHECK(g.terms[1].coef == Elem{3});
}

TEST_CASE("circuit validation and accessors") {
  Field f5 = Field::make(5);
  Circuit c{f5, 2, {Term{Elem{1}, {lf({1, 0}), lf({0, 1})}}, Term{Elem{4}, {lf({1, 0})}}}};
  CHECK(c.k() == 2);
  CHECK(c.max_degree() == 2);
  CHECK_FALSE(c.homogeneous());
  CHECK_NOTHROW(c.validate());
  Circuit z{f5, 2, {Term{Elem{0}, {lf({1, 0})}}}};
  CHECK_THROWS_AS(z.validate(), CircuitError);
  Circuit zf{f5, 2, {Term{Elem{1}, {lf({0, 0})}}}};
  CHECK_THROWS_AS(zf.validate(), CircuitError);
  Circuit dim{f5, 3, {Term{Elem{1}, {lf({1, 0})}}}};
  CHECK_THROWS_AS(dim.validate(), CircuitError);
  CHECK_THROWS_AS((Circuit{f5, 2, {}}.validate()), CircuitError);
}

TEST_CASE("form printing") {
  Field f5 = Field::make(5);
  CHECK(form_to_string(f5, lf({1, 0, 3})) == "x1 + 3x3");
  CHECK(form_to_string(f5, lf({0, 1})) == "x2");
}
