#include <random>

#include "doctest.h"
#include "rmlift/error.hpp"
#include "rmlift/poly.hpp"

using namespace rmlift;

namespace {

Vec prefix(std::size_t n) {
  Vec v(n);
  for (std::size_t i = 0; i < n; ++i) v[i] = static_cast<elem>(i);
  return v;
}

}  // namespace

TEST_CASE("evaluate") {
  Field f5 = make_field(5, 1);
  auto one = Polynomial::constant(f5, 1, 1);
  CHECK(evaluate_univariate(f5, one, prefix(5)) == Vec{1, 1, 1, 1, 1});
  auto x = Polynomial::variable(f5, 1, 0);
  CHECK(evaluate_univariate(f5, x, prefix(5)) == Vec{0, 1, 2, 3, 4});
  Field f7 = make_field(7, 1);
  auto x2 = Polynomial::variable(f7, 1, 0).pow(2);
  CHECK(evaluate_univariate(f7, x2, {1, 2, 3}) == Vec{1, 4, 2});
  CHECK_THROWS_AS(evaluate_univariate(f7, x2, {1, 2}, {1, 0}), Error);
  CHECK_THROWS_AS(evaluate(x2, {{1, 2}}), Error);
}

TEST_CASE("rs_code examples") {
  Field f5 = make_field(5, 1);
  auto c = rs_code(f5, prefix(5), {}, 2);
  CHECK(c.code.dimension() == 2);
  CHECK(min_distance_enumerate(c.code, 1000) == 4);
  CHECK(rs_code(f5, prefix(5), {}, 5).code == LinearCode::full(f5, 5));
  auto s = rs_code(f5, {1, 2, 3, 4}, {}, 2, {0});
  CHECK(s.code.dimension() == 1);
  CHECK(s.code.contains(Vec{1, 2, 3, 4}));
  CHECK_THROWS_AS(rs_code(f5, {1, 2, 3}, {}, 2, {1}), Error);
  CHECK_THROWS_AS(rs_code(f5, {1, 2, 3}, {}, 4), Error);
}

TEST_CASE("rs_dual") {
  Field f5 = make_field(5, 1);
  Vec beta = rs_dual(f5, prefix(5), {}, 2);
  CHECK(beta[0] == 1);
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 3; ++j) {
      elem s = 0;
      for (elem e = 0; e < 5; ++e) s = f5.add(s, f5.mul(beta[e], f5.pow(e, i + j)));
      CHECK(s == 0);
    }
  // for E = F_q, alpha = 1 the dual of RS is RS with constant twist
  for (elem b : beta) CHECK(b == 1);
  Field f8 = make_field(2, 3);
  std::mt19937 rng(3);
  for (std::uint32_t n = 1; n <= 8; ++n)
    for (std::uint32_t m = 0; m <= n; ++m) {
      Vec alpha(n);
      for (auto& a : alpha) a = 1 + rng() % 7;
      Vec b = rs_dual(f8, prefix(n), alpha, m);
      auto c = rs_code(f8, prefix(n), alpha, m).code;
      auto d = rs_code(f8, prefix(n), b, n - m).code;
      CHECK(c.dual() == d);
    }
}

TEST_CASE("shortened RS is a twisted RS code") {
  Field f7 = make_field(7, 1);
  Vec pts{1, 2, 3, 4}, alpha{1, 3, 5, 6};
  auto s = rs_code(f7, pts, alpha, 3, {0, 5});
  Vec beta = shortened_twist(f7, pts, alpha, {0, 5});
  CHECK(s.code == rs_code(f7, pts, beta, 1).code);
}

TEST_CASE("RS distance by subsets oracle") {
  for (auto [p, m] : std::vector<std::pair<int, int>>{{2, 3}, {3, 2}, {7, 1}}) {
    Field f = make_field(p, m);
    for (std::uint32_t n = 1; n <= std::min<std::uint32_t>(8, f.q()); ++n)
      for (std::uint32_t ell = 1; ell <= n; ++ell) {
        auto c = rs_code(f, prefix(n), {}, ell).code;
        CHECK(min_distance_subsets(c) == n - ell + 1);
      }
  }
}

TEST_CASE("star products") {
  Field f7 = make_field(7, 1);
  Vec c{1, 2, 3, 4, 5};
  CHECK(star_product(f7, c, Vec(5, 1)) == c);
  CHECK_THROWS_AS(star_product(f7, c, Vec(4, 1)), Error);
  auto r2 = rs_code(f7, prefix(6), {}, 2).code;
  CHECK(span_star(r2, r2) == rs_code(f7, prefix(6), {}, 3).code);
  auto full = LinearCode::full(f7, 4);
  CHECK(span_star(full, full) == full);
}

TEST_CASE("interpolate_grid") {
  Field f5 = make_field(5, 1);
  auto p = interpolate_grid(f5, {prefix(5)}, Vec{0, 1, 2, 3, 4});
  CHECK(p == Polynomial::variable(f5, 1, 0));
  auto c = interpolate_grid(f5, {prefix(3), prefix(2)}, Vec(6, 4));
  CHECK(c == Polynomial::constant(f5, 2, 4));
  Field f2 = make_field(2, 1);
  auto a = interpolate_grid(f2, {prefix(2), prefix(2)}, Vec{0, 0, 0, 1});
  CHECK(a == Polynomial::monomial(f2, {1, 1}));
  // round trips
  Field f9 = make_field(3, 2);
  std::mt19937 rng(4);
  std::vector<Vec> axes{{1, 4, 7}, {0, 2, 5, 8}, {3, 6}};
  Vec vals(24);
  for (auto& v : vals) v = rng() % 9;
  auto q = interpolate_grid(f9, axes, vals);
  std::size_t idx = 0;
  for (elem x : axes[0])
    for (elem y : axes[1])
      for (elem z : axes[2]) CHECK(q.eval({x, y, z}) == vals[idx++]);
  CHECK(q.degree_in(0) < 3);
  CHECK(q.degree_in(1) < 4);
  CHECK_THROWS_AS(interpolate_grid(f9, axes, Vec(5)), Error);
}

TEST_CASE("truncate_high_degree") {
  Field f5 = make_field(5, 1);
  auto x = Polynomial::variable(f5, 1, 0);
  auto p = x.pow(2) + x;
  CHECK(truncate_high_degree(p, {{0}}, {kInfinity}) == p);
  CHECK(truncate_high_degree(p, {{0}}, {2}) == x);
  auto y = Polynomial::variable(f5, 3, 0), z = Polynomial::variable(f5, 3, 1), w = Polynomial::variable(f5, 3, 2);
  auto q = y * z + y.pow(2) * w + w.pow(3);
  auto t = truncate_high_degree(q, {{0, 1}, {2}}, {3, 3});
  CHECK(t == y * z + y.pow(2) * w);
  CHECK(truncate_high_degree(q, {{0, 1}, {2}}, {2, 3}) == Polynomial(f5, 3));
  CHECK_THROWS_AS(truncate_high_degree(q, {{0, 1}}, {2}), Error);
}

TEST_CASE("shortening identity on random codes") {
  std::mt19937 rng(9);
  for (auto [p, m] : std::vector<std::pair<int, int>>{{2, 1}, {3, 1}, {2, 2}, {7, 1}, {2, 3}}) {
    Field f = make_field(p, m);
    for (int it = 0; it < 10; ++it) {
      std::size_t n = 2 + rng() % 11, k = 1 + rng() % n;
      std::vector<Triplet> t;
      for (std::uint32_t i = 0; i < k; ++i)
        for (std::uint32_t j = 0; j < n; ++j) t.emplace_back(i, j, rng() % f.q());
      auto c = LinearCode::from_generator(f, SparseMatrix::from_triplets(f, k, n, t));
      std::vector<char> in_a(n);
      for (auto& x : in_a) x = rng() % 2;
      std::vector<std::uint32_t> ac;
      for (std::uint32_t j = 0; j < n; ++j)
        if (!in_a[j]) ac.push_back(j);
      // C restricted to A^c after vanishing on A: kernel of the A-columns combination
      SparseMatrix g = c.generator();
      std::vector<Triplet> at;
      for (std::uint32_t i = 0; i < g.rows(); ++i)
        for (auto [j, v] : g.row(i))
          if (in_a[j]) at.emplace_back(i, j, v);
      auto combos = kernel(f, SparseMatrix::from_triplets(f, g.rows(), n, at).transpose());
      std::vector<Triplet> st, dt;
      std::uint32_t r = 0;
      for (auto& comb : combos) {
        Vec w(n, 0);
        for (auto [i, coef] : comb)
          for (auto [j, v] : g.row(i)) w[j] = f.add(w[j], f.mul(coef, v));
        for (std::uint32_t jj = 0; jj < ac.size(); ++jj) st.emplace_back(r, jj, w[ac[jj]]);
        ++r;
      }
      auto shortened = LinearCode::from_generator(f, SparseMatrix::from_triplets(f, r, ac.size(), st));
      SparseMatrix h = c.parity();
      for (std::uint32_t i = 0; i < h.rows(); ++i)
        for (auto [j, v] : h.row(i)) {
          auto pos = std::find(ac.begin(), ac.end(), j);
          if (pos != ac.end()) dt.emplace_back(i, static_cast<std::uint32_t>(pos - ac.begin()), v);
        }
      auto punctured_dual = LinearCode::from_generator(f, SparseMatrix::from_triplets(f, h.rows(), ac.size(), dt));
      CHECK(shortened.dual() == punctured_dual);
    }
  }
}
