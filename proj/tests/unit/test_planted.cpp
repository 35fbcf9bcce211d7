#include <random>

#include <nlohmann/json.hpp>

#include "doctest.h"
#include "rmlift/error.hpp"
#include "rmlift/planted.hpp"

using namespace rmlift;

namespace {

LiftedGraph make_lift(std::uint32_t p, std::uint32_t m, std::size_t n0, std::size_t delta, std::size_t t,
                      std::uint64_t seed) {
  Field f = make_field(p, m);
  MultiGraph base = build_base_graph(f, n0, delta);
  std::mt19937_64 rng(seed);
  VertexLabeling lab;
  lab.t = t;
  for (std::size_t v = 0; v < base.num_vertices(); ++v) {
    Vec l(t);
    for (auto& x : l) x = static_cast<elem>(rng() % f.q());
    lab.labels.push_back(l);
  }
  return LiftedGraph(base, lab);
}

std::uint64_t binom(std::uint64_t n, std::uint64_t k) {
  std::uint64_t r = 1;
  for (std::uint64_t i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

struct Instance {
  std::uint32_t p, m;
  std::size_t n0, delta, t;
  std::uint32_t ell;
};

const std::vector<Instance> kInstances = {
    {5, 1, 1, 2, 1, 1}, {5, 1, 1, 3, 1, 2}, {7, 1, 1, 4, 1, 2}, {2, 3, 2, 4, 1, 2}, {3, 2, 1, 4, 2, 2}, {5, 1, 2, 2, 1, 1},
};

}  // namespace

TEST_CASE("local matrices of the three kinds") {
  Field f = make_field(7, 1);
  MultiGraph base = build_base_graph(f, 1, 5);
  for (int kind = 1; kind <= 3; ++kind)
    for (std::uint32_t ell = 0; ell <= 5; ++ell) {
      Mat h = planted_local_matrix(base, 0, ell, kind);
      std::size_t m = kind == 2 ? ell : 5 - ell;
      CHECK(h.size() == m);
      CHECK(dense_rank(f, h) == m);
    }
  CHECK_THROWS_AS(planted_local_matrix(base, 0, 6, 1), Error);
  CHECK_THROWS_AS(planted_local_matrix(base, 0, 1, 4), Error);
}

TEST_CASE("planted complexes are valid and carry the translation action") {
  for (const auto& in : kInstances)
    for (int kind = 1; kind <= 3; ++kind) {
      auto lift = make_lift(in.p, in.m, in.n0, in.delta, in.t, 7);
      auto cx = rm_planted_complex(lift, in.ell, kind);
      CHECK(cx.complex.is_valid());
      CHECK(cx.complex.dim(1) == lift.lifted().num_edges());
      CHECK(cx.complex.dim(0) == lift.lifted().num_vertices() * cx.local_dim());
      CHECK(locality(cx.complex) <= 2 * in.delta);
      CHECK_NOTHROW(planted_action(cx).validate(cx.complex));
    }
}

TEST_CASE("tiny kind-1 instance") {
  auto lift = make_lift(5, 1, 1, 2, 1, 3);
  auto cx = rm_planted_complex(lift, 1, 1);
  const Field& f = lift.field();
  for (const auto& h : cx.base_h) CHECK(2 - dense_rank(f, h) == 1);
  CHECK(cx.local_dim() == 1);
  auto zero = rm_planted_complex(lift, 0, 1);
  CHECK(kernel(f, zero.complex.boundary(1)).empty());
}

TEST_CASE("kind-2 with ell = Delta gives consistent edge assignments") {
  auto lift = make_lift(5, 1, 1, 3, 1, 5);
  auto cx = rm_planted_complex(lift, 3, 2);
  CHECK(kernel(lift.field(), cx.complex.coboundary(0)).size() == lift.lifted().num_edges());
}

TEST_CASE("iota maps") {
  auto lift = make_lift(5, 1, 1, 3, 1, 9);
  const Field& f = lift.field();
  auto cx = rm_planted_complex(lift, 2, 2);
  Polynomial zero(f, 2);
  Vec z = iota0(cx, zero);
  CHECK(weight(z) == 0);
  Vec c = iota0(cx, Polynomial::constant(f, 2, 3));
  SparseMatrix d = cx.complex.boundary(1);
  // the signed local images equal the constant on every incident edge
  for (std::uint64_t vb = 0; vb < lift.lifted().num_vertices(); ++vb)
    for (auto eb : lift.lifted().incident(vb)) {
      elem acc = 0;
      for (std::size_t j = 0; j < cx.local_dim(); ++j) acc = f.add(acc, f.mul(d.at(vb * 2 + j, eb), c[vb * 2 + j]));
      elem sign = lift.lifted().edge(eb).v0 == vb ? 1 : f.neg(1);
      CHECK(acc == f.mul(sign, 3));
    }
  Polynomial x1 = Polynomial::variable(f, 2, 1);
  Vec v = iota0(cx, x1);
  CHECK(weight(cx.complex.coboundary(0).apply(f, v)) == 0);
  CHECK(weight(v) > 0);
  Vec ev = iota1(lift, x1);
  for (std::uint64_t eb = 0; eb < ev.size(); ++eb) CHECK(ev[eb] == edge_point(lift, eb)[1]);
  CHECK_THROWS_AS(iota0(cx, x1 * x1), Error);
  CHECK_THROWS_AS(iota0(rm_planted_complex(lift, 2, 1), x1), Error);
}

TEST_CASE("planting lemma on tiny instances") {
  int passed[4] = {0, 0, 0, 0};
  for (const auto& in : kInstances)
    for (int kind = 1; kind <= 3; ++kind) {
      auto lift = make_lift(in.p, in.m, in.n0, in.delta, in.t, 11);
      auto cx = rm_planted_complex(lift, in.ell, kind);
      auto rep = planting_check(cx);
      CHECK_MESSAGE(rep.ok, rep.detail);
      if (rep.ok) ++passed[kind];
      if (kind == 1) {
        CHECK(kernel(lift.field(), cx.complex.boundary(1)).size() >= binom(in.ell + in.t, in.t + 1));
      }
      if (kind == 2) CHECK(rep.injective_rank == binom(in.ell - 1 + in.t, in.t));
      if (kind == 3) CHECK(rep.max_degree < static_cast<std::int64_t>(rep.degree_bound));
    }
  for (int kind = 1; kind <= 3; ++kind) CHECK(passed[kind] >= 3);
}

TEST_CASE("planting check detects violations") {
  auto lift = make_lift(5, 1, 1, 3, 1, 13);
  auto k1 = rm_planted_complex(lift, 1, 1);
  k1.ell = 2;
  CHECK_FALSE(planting_check(k1).ok);
  auto k3 = rm_planted_complex(lift, 1, 3);
  auto honest = planting_check(k3);
  REQUIRE(honest.ok);
  // lower the bound below the degree actually reached
  k3.ell = static_cast<std::uint32_t>(1 + (honest.degree_bound - honest.max_degree));
  CHECK_FALSE(planting_check(k3).ok);
}

TEST_CASE("grid reordering") {
  auto lift = make_lift(3, 1, 1, 2, 2, 1);
  const Field& f = lift.field();
  Polynomial p = Polynomial::variable(f, 3, 0) * Polynomial::variable(f, 3, 2) + Polynomial::variable(f, 3, 1);
  Polynomial back = interpolate_grid(f, edge_grid_axes(lift), edges_to_grid(lift, iota1(lift, p)));
  CHECK(back == p);
}

TEST_CASE("planted JSON round trip") {
  auto lift = make_lift(5, 1, 1, 3, 1, 17);
  auto cx = rm_planted_complex(lift, 2, 3, {0.1, 0.3, 0.5});
  auto j = planted_to_json(cx);
  auto back = planted_from_json(j);
  CHECK(back.kind == 3);
  CHECK(back.params.delta == doctest::Approx(0.3));
  CHECK(planted_to_json(back) == j);
  j["complex"]["levels"][0] = 1;
  CHECK_THROWS_AS(planted_from_json(j), Error);
}
