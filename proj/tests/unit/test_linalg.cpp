#include <random>

#include "doctest.h"
#include "rmlift/linalg.hpp"

using namespace rmlift;

namespace {

SparseMatrix random_matrix(const Field& f, std::size_t r, std::size_t c, double density, std::mt19937& rng) {
  std::vector<Triplet> t;
  std::uniform_real_distribution<double> u(0, 1);
  std::uniform_int_distribution<elem> d(1, f.q() - 1);
  for (std::uint32_t i = 0; i < r; ++i)
    for (std::uint32_t j = 0; j < c; ++j)
      if (u(rng) < density) t.emplace_back(i, j, d(rng));
  return SparseMatrix::from_triplets(f, r, c, t);
}

// number of vectors x with A x = 0, by enumeration
std::size_t kernel_size_brute(const Field& f, const SparseMatrix& a) {
  std::size_t n = a.cols(), total = 1, count = 0;
  for (std::size_t i = 0; i < n; ++i) total *= f.q();
  Vec x(n, 0);
  for (std::size_t idx = 0; idx < total; ++idx) {
    std::size_t v = idx;
    for (std::size_t i = 0; i < n; ++i) {
      x[i] = static_cast<elem>(v % f.q());
      v /= f.q();
    }
    if (weight(a.apply(f, x)) == 0) ++count;
  }
  return count;
}

}  // namespace

TEST_CASE("rank and kernel agree with enumeration") {
  std::mt19937 rng(11);
  for (auto [p, m] : std::vector<std::pair<int, int>>{{2, 1}, {3, 1}, {2, 2}, {5, 1}}) {
    Field f = make_field(p, m);
    for (int it = 0; it < 20; ++it) {
      std::size_t r = 1 + rng() % 6, c = 1 + rng() % 6;
      auto a = random_matrix(f, r, c, 0.5, rng);
      std::size_t rk = rank(f, a);
      std::size_t ks = kernel_size_brute(f, a), pw = 1;
      for (std::size_t i = 0; i < c - rk; ++i) pw *= f.q();
      CHECK(ks == pw);
      auto ker = kernel(f, a);
      CHECK(ker.size() == c - rk);
      for (auto& v : ker) CHECK(a.apply(f, v).empty());
      CHECK(rank(f, a.transpose()) == rk);
      CHECK(dense_rank(f, a.to_dense()) == rk);
    }
  }
}

TEST_CASE("echelon basis reduction is canonical") {
  std::mt19937 rng(5);
  Field f = make_field(3, 1);
  auto a = random_matrix(f, 4, 8, 0.6, rng);
  EchelonBasis eb(f, 8, weight_order(a));
  for (std::size_t i = 0; i < 4; ++i) eb.insert(a.row(i));
  auto b = SparseMatrix::from_dense({{1, 2, 0, 1, 0, 0, 2, 1}}, 8);
  SparseVec v = b.row(0);
  SparseVec w = v;
  for (std::size_t i = 0; i < 4; ++i) w = axpy(f, w, static_cast<elem>(i % 3), a.row(i));
  CHECK(eb.reduce(v) == eb.reduce(w));
  for (std::size_t i = 0; i < 4; ++i) CHECK(eb.contains(a.row(i)));
  auto comp = eb.complement_kernel();
  CHECK(comp.size() == 8 - eb.rank());
  for (auto& c : comp)
    for (std::size_t i = 0; i < 4; ++i) CHECK(dot(f, c, a.row(i)) == 0);
  auto basis = eb.basis();
  CHECK(basis.size() == eb.rank());
}

TEST_CASE("dense inverse and solve") {
  Field f = make_field(5, 1);
  Mat a{{1, 2}, {3, 4}};
  auto inv = dense_inverse(f, a);
  REQUIRE(inv);
  auto id = dense_multiply(f, a, *inv);
  CHECK(id == Mat{{1, 0}, {0, 1}});
  CHECK(!dense_inverse(f, Mat{{1, 2}, {2, 4}}));
  auto x = dense_solve(f, a, {1, 1});
  REQUIRE(x);
  CHECK(SparseMatrix::from_dense(a, 2).apply(f, *x) == Vec{1, 1});
  CHECK(!dense_solve(f, Mat{{1, 2}, {2, 4}}, {1, 0}));
}

TEST_CASE("sparse products") {
  Field f = make_field(7, 1);
  auto a = SparseMatrix::from_dense({{1, 2}, {0, 3}}, 2);
  auto b = SparseMatrix::from_dense({{4, 0}, {5, 6}}, 2);
  CHECK(a.multiply(f, b).to_dense() == Mat{{0, 5}, {1, 4}});
  auto k = a.kron(f, b);
  CHECK(k.rows() == 4);
  CHECK(k.at(1, 3) == f.mul(2, 6));
  CHECK(a.max_col_weight() == 2);
  CHECK(a.transpose().at(1, 0) == 2);
}
