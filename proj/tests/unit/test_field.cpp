#include <cmath>
#include <random>

#include "doctest.h"
#include "rmlift/error.hpp"
#include "rmlift/field.hpp"

using namespace rmlift;

TEST_CASE("make_field picks the least monic irreducible") {
  CHECK(make_field(2, 1).modulus() == std::vector<std::uint32_t>{0, 1});
  CHECK(make_field(2, 2).modulus() == std::vector<std::uint32_t>{1, 1, 1});
  CHECK(make_field(2, 3).modulus() == std::vector<std::uint32_t>{1, 1, 0, 1});
  CHECK(make_field(3, 2).modulus() == std::vector<std::uint32_t>{1, 0, 1});
  CHECK(make_field(5, 1).q() == 5);
  CHECK_THROWS_AS(make_field(4, 1), Error);
  CHECK_THROWS_AS(Field(2, 2, {1, 0, 1}), Error);
}

TEST_CASE("field axioms on random triples") {
  std::mt19937 rng(1);
  for (auto [p, m] : std::vector<std::pair<int, int>>{{2, 1}, {2, 4}, {3, 3}, {5, 2}, {7, 1}, {41, 1}, {2, 8}, {3, 5}}) {
    Field f = make_field(p, m);
    std::uniform_int_distribution<elem> d(0, f.q() - 1);
    for (int it = 0; it < 500; ++it) {
      elem a = d(rng), b = d(rng), c = d(rng);
      CHECK(f.mul(a, f.mul(b, c)) == f.mul(f.mul(a, b), c));
      CHECK(f.add(a, f.add(b, c)) == f.add(f.add(a, b), c));
      CHECK(f.mul(a, f.add(b, c)) == f.add(f.mul(a, b), f.mul(a, c)));
      CHECK(f.add(a, f.neg(a)) == 0);
      if (a) CHECK(f.mul(a, f.inv(a)) == 1);
    }
  }
}

TEST_CASE("prime field arithmetic matches integers") {
  Field f = make_field(7, 1);
  CHECK(f.mul(3, 5) == 1);
  CHECK(f.add(4, 5) == 2);
  CHECK(f.from_int(-1) == 6);
}

TEST_CASE("GF(4) multiplication table") {
  Field f = make_field(2, 2);  // w = 2 with w^2 = w + 1
  CHECK(f.mul(2, 2) == 3);
  CHECK(f.mul(2, 3) == 1);
  CHECK(f.mul(3, 3) == 2);
}

TEST_CASE("field_trace") {
  Field f4 = make_field(2, 2);
  CHECK(field_trace(f4, 0, 1) == 0);
  CHECK(field_trace(f4, 2, 1) == 1);
  CHECK(field_trace(f4, 1, 1) == 0);
  Field f2 = make_field(2, 1);
  CHECK(field_trace(f2, 1, 1) == 1);
  CHECK_THROWS_AS(field_trace(make_field(2, 3), 1, 2), Error);
}

TEST_CASE("trace is linear and surjective onto the subfield") {
  for (auto [p, m, d] : std::vector<std::tuple<int, int, int>>{{2, 4, 2}, {2, 6, 3}, {3, 4, 2}, {2, 8, 1}, {2, 8, 4}}) {
    Field f = make_field(p, m);
    SubfieldView v(f, d);
    std::vector<int> hit(v.small().q(), 0);
    for (elem x = 0; x < f.q(); ++x) {
      elem tx = field_trace(f, x, d);
      REQUIRE(v.in_subfield(tx));
      hit[v.restrict(tx)] = 1;
      for (elem y = 0; y < f.q(); y += 7) CHECK(field_trace(f, f.add(x, y), d) == f.add(tx, field_trace(f, y, d)));
      for (elem s = 0; s < v.small().q(); ++s) {
        elem c = v.embed(s);
        CHECK(field_trace(f, f.mul(c, x), d) == f.mul(c, tx));
      }
    }
    for (int h : hit) CHECK(h == 1);
  }
}

TEST_CASE("subfield functional") {
  Field f4 = make_field(2, 2);
  SubfieldView v(f4, 1);
  CHECK(subfield_functional(v, 1) == 1);
  CHECK(subfield_functional(v, 2) == 0);
  CHECK(subfield_functional(v, 3) == 1);
  SubfieldView id(make_field(2, 1), 1);
  CHECK(subfield_functional(id, 1) == 1);
  CHECK(subfield_functional(id, 0) == 0);
  Field f16 = make_field(2, 4);
  SubfieldView v4(f16, 2);
  for (elem s = 0; s < 4; ++s) CHECK(v4.restrict(v4.embed(s)) == s);
  for (elem x = 0; x < 16; ++x) {
    auto c = v4.coords(x);
    CHECK(v4.from_coords(c) == x);
    for (elem s = 0; s < 4; ++s)
      CHECK(subfield_functional(v4, f16.mul(v4.embed(s), x)) == v4.small().mul(s, subfield_functional(v4, x)));
  }
}

TEST_CASE("characters") {
  CHECK(std::abs(character_eval({2, {0}}, {1}) - 1.0) < 1e-12);
  CHECK(std::abs(character_eval({2, {1}}, {1}) + 1.0) < 1e-12);
  auto z = character_eval({3, {1}}, {2});
  CHECK(std::abs(z - std::polar(1.0, 4 * std::acos(-1.0) / 3)) < 1e-12);
  CHECK_THROWS_AS(character_eval({3, {1, 2}}, {2}), Error);
  // orthogonality and multiplicativity on F_3^3
  for (std::uint32_t ai = 1; ai < 27; ++ai) {
    Character chi{3, {ai % 3, ai / 3 % 3, ai / 9}};
    std::complex<double> s = 0;
    for (std::uint32_t xi = 0; xi < 27; ++xi) {
      std::vector<std::uint32_t> x{xi % 3, xi / 3 % 3, xi / 9};
      s += character_eval(chi, x);
      std::vector<std::uint32_t> y{(xi + 1) % 3, 2, xi / 9}, xy(3);
      for (int k = 0; k < 3; ++k) xy[k] = (x[k] + y[k]) % 3;
      CHECK(std::abs(character_eval(chi, xy) - character_eval(chi, x) * character_eval(chi, y)) < 1e-10);
    }
    CHECK(std::abs(s) < 1e-9);
  }
}
