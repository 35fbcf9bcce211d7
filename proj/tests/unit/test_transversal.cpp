#include <random>

#include "doctest.h"
#include "rmlift/error.hpp"
#include "rmlift/transversal.hpp"

using namespace rmlift;

namespace {

LiftedGraph make_lift(std::uint32_t p, std::size_t n0, std::size_t delta, std::size_t t, std::uint64_t seed) {
  Field f = make_field(p, 1);
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

// q = 5, Delta = 3, ell = 2, ell' = 1, a = 1
ProductCodeFamily tiny_family() { return build_family(make_lift(5, 1, 3, 1, 21), 2, 2, 1, 1); }
// q = 5, Delta = 5, ell = 4, ell' = 1, a = 1, feasible for r = 3
ProductCodeFamily cubic_family() { return build_family(make_lift(5, 1, 5, 1, 23), 3, 4, 1, 1); }
// q = 7, Delta = 7, ell = 6, ell' = 2, a = 2
ProductCodeFamily small_family() { return build_family(make_lift(7, 1, 7, 1, 22), 2, 6, 2, 2); }

Vec random_vec(const Field& f, std::size_t n, std::mt19937_64& rng) {
  Vec v(n);
  for (auto& x : v) x = static_cast<elem>(rng() % f.q());
  return v;
}

SlotCochain random_cochain(const ProductCodeFamily& fam, std::size_t h, std::mt19937_64& rng) {
  const Field& f = fam.lift.field();
  SlotCochain c;
  for (std::size_t n = 0; n < 3; ++n) {
    TensorTerm term;
    term.dir = rng() % fam.r;
    term.coef = static_cast<elem>(1 + rng() % (f.q() - 1));
    for (std::size_t k = 0; k < fam.r; ++k) {
      const FactorData& d = fam.data(h, k);
      term.parts.push_back(random_vec(f, k == term.dir ? d.ne : d.nv * d.m, rng));
    }
    c.terms.push_back(std::move(term));
  }
  return c;
}

}  // namespace

TEST_CASE("feasibility names the violated inequality") {
  auto lift = make_lift(5, 1, 3, 1, 21);
  auto rep = family_feasibility(lift, 2, 2, 1);
  CHECK_FALSE(rep.ok);
  CHECK(rep.a == 0);
  REQUIRE_FALSE(rep.violated.empty());
  CHECK(rep.violated[0] == "a = ⌊ℓ/10rt⌋ ≥ 1");
  try {
    build_family(lift, 2, 2, 1);
    FAIL("expected infeasible");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::infeasible);
    CHECK(std::string(e.what()).find("a = ⌊ℓ/10rt⌋ ≥ 1") != std::string::npos);
  }
  CHECK(family_feasibility(lift, 2, 2, 1, 1).ok);
  CHECK(family_feasibility(lift, 2, 2, 1, 1).threshold == 6);
  CHECK_THROWS_AS(family_feasibility(lift, 1, 2, 1, 1), Error);
  CHECK_FALSE(family_feasibility(lift, 3, 2, 1, 1).ok);
}

TEST_CASE("family complexes, indexing and coboundaries") {
  for (auto fam : {tiny_family(), cubic_family()}) {
    const std::size_t r = fam.r;
    REQUIRE(fam.materialized());
    CHECK(fam.complexes.size() == r);
    for (std::size_t h = 0; h < r; ++h) {
      const ChainComplex& c = fam.complexes[h];
      CHECK(c.is_valid());
      CHECK(c.dim(1) == fam.n_qudits);
      CHECK(family_qudits(fam) == fam.n_qudits);
      // vertex coboundaries through cell_index match the materialized coboundary
      std::mt19937_64 rng(5 + h);
      SparseMatrix d = c.boundary(1);
      for (int n = 0; n < 20; ++n) {
        std::vector<std::uint64_t> idx(r);
        std::uint64_t flat = 0;
        for (std::size_t k = 0; k < r; ++k) {
          const FactorData& fd = fam.data(h, k);
          idx[k] = rng() % (fd.nv * fd.m);
        }
        std::vector<int> zero(r, 0);
        flat = cell_index(fam, h, zero, idx);
        CHECK(materialize(fam, h, vertex_coboundary(fam, h, idx)) == to_dense(d.row(flat), fam.n_qudits));
      }
    }
    for (std::size_t h = 1; h < r; ++h) {
      auto iso = family_isomorphism(fam, 0, h);
      CHECK(verify_isomorphism(fam.complexes[0], fam.complexes[h], iso));
      // dropping the Koszul signs breaks the chain map when r = 3
      if (r == 3) {
        auto bad = iso;
        for (auto& level : bad.sign)
          for (auto& s : level) s = 1;
        CHECK_FALSE(verify_isomorphism(fam.complexes[0], fam.complexes[h], bad));
      }
    }
  }
}

TEST_CASE("H' generators are cocycles") {
  auto fam = small_family();
  for (std::size_t h = 0; h < fam.r; ++h) {
    auto gens = hprime_generators(fam, h);
    CHECK(gens.size() == 4);
    SparseMatrix cob = fam.complexes[h].coboundary(1);
    for (const auto& g : gens) {
      Vec v = materialize(fam, h, g.cochain);
      CHECK(weight(v) > 0);
      CHECK(weight(to_dense(cob.apply(fam.lift.field(), to_sparse(v)), cob.rows())) == 0);
    }
  }
}

TEST_CASE("local cup product") {
  Field f = make_field(5, 1);
  CHECK(permutation_sign({0, 1, 2}) == 1);
  CHECK(permutation_sign({1, 0, 2}) == -1);
  auto path = xi_loc(3, {2, 0, 1});
  CHECK(path[0].start == 0);
  CHECK(path[1].start == 4);
  CHECK(path[2].start == 5);
  CHECK(path[2].dir == 1);
  CHECK_THROWS_AS(xi_loc(3, {0, 0, 1}), Error);
  // r = 2: x(0,dir0) y(1,dir1) - x(0,dir1) y(2,dir0)
  Vec x(4, 0), y(4, 0);
  x[local_edge_index(2, {0, 0})] = 2;
  y[local_edge_index(2, {1, 1})] = 3;
  CHECK(xi_loc_eval(f, 2, {x, y}) == 1);
  x.assign(4, 0);
  y.assign(4, 0);
  x[local_edge_index(2, {0, 1})] = 1;
  y[local_edge_index(2, {2, 0})] = 1;
  CHECK(xi_loc_eval(f, 2, {x, y}) == f.neg(1));
}

TEST_CASE("alpha factorizes over the cube coordinates") {
  for (auto fam : {tiny_family(), small_family()}) {
    const Field& f = fam.lift.field();
    Vec slot = alpha_slot(fam);
    Vec cubes = alpha_explicit(fam, std::uint64_t{1} << 40);
    const std::size_t ne = fam.num_edges();
    REQUIRE(cubes.size() == ne * ne);
    bool all = true;
    for (std::size_t a = 0; a < ne; ++a)
      for (std::size_t b = 0; b < ne; ++b) all &= cubes[a * ne + b] == f.mul(slot[a], slot[b]);
    CHECK(all);
    CHECK(weight(slot) > 0);
    // above the top degree nothing survives
    std::uint64_t top = fam.lift.base().num_edges() - 1 + fam.lift.t() * (f.q() - 1);
    CHECK(weight(alpha_slot(fam, top + 1)) == 0);
  }
}

TEST_CASE("factored zeta agrees with the explicit cube sum") {
  for (auto fam : {tiny_family(), small_family()}) {
    const Field& f = fam.lift.field();
    Vec slot = alpha_slot(fam);
    Vec cubes = alpha_explicit(fam, std::uint64_t{1} << 40);
    std::mt19937_64 rng(77);
    MultilinearForm form = zeta_entries(fam, slot, 100000000);
    CHECK(zeta_locality(form) <= zeta_locality_bound(fam));
    int nonzero = 0;
    for (int n = 0; n < 6; ++n) {
      std::vector<SlotCochain> sc;
      std::vector<Vec> dense;
      for (std::size_t h = 0; h < fam.r; ++h) {
        sc.push_back(random_cochain(fam, h, rng));
        dense.push_back(materialize(fam, h, sc.back()));
      }
      elem z = zeta_eval(fam, slot, sc);
      CHECK(z == zeta_explicit(fam, cubes, dense));
      CHECK(z == form.eval(dense));
      nonzero += z != 0;
    }
    CHECK(nonzero > 0);
    (void)f;
  }
}

TEST_CASE("coboundary invariance, factored and explicit") {
  auto fam = tiny_family();
  Vec slot = alpha_slot(fam);
  auto rep = coboundary_invariance_check(fam, slot, std::uint64_t{1} << 34);
  CHECK_MESSAGE(rep.ok, rep.witness);
  CHECK(rep.complete);
  CHECK(rep.subsets == 3);
  auto ex = coboundary_invariance_explicit(fam, 20000);
  CHECK_MESSAGE(ex.ok, ex.witness);
  CHECK(ex.complete);
  CHECK(ex.tuples == rep.tuples);
  // without truncation the functional is not coboundary invariant
  auto plain = fam;
  plain.threshold = 0;
  CHECK_FALSE(coboundary_invariance_check(plain, alpha_slot(plain), std::uint64_t{1} << 34).ok);
  CHECK_FALSE(coboundary_invariance_explicit(plain, 20000).ok);

  auto fam2 = small_family();
  auto rep2 = coboundary_invariance_check(fam2, alpha_slot(fam2), std::uint64_t{1} << 34);
  CHECK_MESSAGE(rep2.ok, rep2.witness);
  CHECK(rep2.complete);
}

TEST_CASE("subrank certificate") {
  auto fam = small_family();
  Vec slot = alpha_slot(fam);
  auto rep = subrank_certificate(fam, slot, 1000, 3);
  CHECK_MESSAGE(rep.ok, rep.witness);
  CHECK(rep.s == 4);
  CHECK(rep.exhaustive);
  CHECK(rep.checked == 16);
  // the certificate vectors are cocycles and agree with the materialized form
  MultilinearForm form = zeta_entries(fam, slot, 100000000);
  auto vecs = subrank_vectors(fam);
  for (std::size_t i = 0; i < rep.s; ++i)
    for (std::size_t j = 0; j < rep.s; ++j) {
      Vec a = materialize(fam, 0, vecs[0][i]), b = materialize(fam, 1, vecs[1][j]);
      CHECK(form.eval({a, b}) == (i == j ? 1u : 0u));
    }
  SparseMatrix cob = fam.complexes[0].coboundary(1);
  CHECK(weight(to_dense(cob.apply(fam.lift.field(), to_sparse(materialize(fam, 0, vecs[0][0]))), cob.rows())) == 0);
  // a wrong functional is caught
  Vec scaled = slot;
  for (auto& x : scaled) x = fam.lift.field().mul(x, 2);
  CHECK_FALSE(subrank_certificate(fam, scaled, 1000, 3).ok);
  // the seeded sampling path, forced by a zero exhaustive limit
  auto sampled = subrank_certificate(fam, slot, 1000, 5, 0);
  CHECK_MESSAGE(sampled.ok, sampled.witness);
  CHECK_FALSE(sampled.exhaustive);
  CHECK(sampled.checked == 1000);
  CHECK(sampled.seed == 5);
  auto again = subrank_certificate(fam, slot, 1000, 5, 0);
  CHECK(again.checked == sampled.checked);
  CHECK_FALSE(subrank_certificate(fam, scaled, 1000, 5, 0).ok);
}

TEST_CASE("r = 3 family: invariance, entries and subrank") {
  auto fam = cubic_family();
  Vec slot = alpha_slot(fam);
  auto rep = coboundary_invariance_check(fam, slot, std::uint64_t{1} << 34);
  CHECK_MESSAGE(rep.ok, rep.witness);
  CHECK(rep.complete);
  CHECK(rep.subsets == 7);
  auto plain = fam;
  plain.threshold = 0;
  CHECK_FALSE(coboundary_invariance_check(plain, alpha_slot(plain), std::uint64_t{1} << 34).ok);
  MultilinearForm form = zeta_entries(fam, slot, 100000000);
  CHECK(zeta_locality(form) <= zeta_locality_bound(fam));
  std::mt19937_64 rng(78);
  for (int n = 0; n < 3; ++n) {
    std::vector<SlotCochain> sc;
    std::vector<Vec> dense;
    for (std::size_t h = 0; h < fam.r; ++h) {
      sc.push_back(random_cochain(fam, h, rng));
      dense.push_back(materialize(fam, h, sc.back()));
    }
    CHECK(zeta_eval(fam, slot, sc) == form.eval(dense));
  }
  auto sr = subrank_certificate(fam, slot, 1000, 4);
  CHECK_MESSAGE(sr.ok, sr.witness);
  CHECK(sr.s == 1);
}
