#include <random>

#include <nlohmann/json.hpp>

#include "doctest.h"
#include "rmlift/complex.hpp"
#include "rmlift/error.hpp"

using namespace rmlift;

namespace {

MultiGraph complete_bipartite(std::size_t n, std::size_t mult) {
  std::vector<Edge> edges;
  for (std::uint32_t a = 0; a < n; ++a)
    for (std::uint32_t b = 0; b < n; ++b)
      for (std::size_t k = 0; k < mult; ++k) edges.push_back({a, static_cast<std::uint32_t>(n + b)});
  return MultiGraph(2 * n, edges, n);
}

MultiGraph cycle(std::size_t n) {
  std::vector<Edge> edges;
  for (std::uint32_t k = 0; k < n; ++k) edges.push_back({k, static_cast<std::uint32_t>((k + 1) % n)});
  return MultiGraph(n, edges);
}

// incidence complex with trivial one-dimensional local spaces
ChainComplex graph_complex(const Field& f, const MultiGraph& g) {
  IncidenceComplex inc = incidence_from_graph(g);
  LocalSystem loc;
  loc.dims = {std::vector<std::size_t>(g.num_vertices(), 1), std::vector<std::size_t>(g.num_edges(), 1)};
  loc.maps = {std::vector<Mat>(inc.relations[0].size(), Mat{{1}})};
  return sheaf_complex(f, inc, loc);
}

SparseMatrix random_matrix(const Field& f, std::size_t rows, std::size_t cols, double density, std::mt19937& rng) {
  std::uniform_real_distribution<double> u(0, 1);
  std::uniform_int_distribution<elem> val(1, f.q() - 1);
  std::vector<Triplet> t;
  for (std::uint32_t i = 0; i < rows; ++i)
    for (std::uint32_t j = 0; j < cols; ++j)
      if (u(rng) < density) t.emplace_back(i, j, val(rng));
  return SparseMatrix::from_triplets(f, rows, cols, t);
}

std::vector<Vec> all_vectors(const Field& f, std::size_t n) {
  std::vector<Vec> out;
  Vec x(n, 0);
  while (true) {
    out.push_back(x);
    std::size_t i = 0;
    while (i < n && ++x[i] == f.q()) x[i++] = 0;
    if (i == n) break;
  }
  return out;
}

// min weight over Z_i \ B_i by scanning the whole level
std::uint64_t brute_systolic(const ChainComplex& c, std::size_t i) {
  const Field& f = c.field();
  std::uint64_t best = kInfinity;
  for (const auto& x : all_vectors(f, c.dim(i))) {
    SparseVec s = to_sparse(x);
    if (s.empty() || !is_cycle(c, i, s) || is_boundary(c, i, s)) continue;
    best = std::min<std::uint64_t>(best, weight(x));
  }
  return best;
}

// min over non-kernel x of |Mx| / min_{z in ker} |x - z|
double brute_expansion(const Field& f, const SparseMatrix& m) {
  auto vs = all_vectors(f, m.cols());
  std::vector<Vec> ker;
  for (const auto& x : vs)
    if (weight(m.apply(f, x)) == 0) ker.push_back(x);
  double best = std::numeric_limits<double>::infinity();
  for (const auto& x : vs) {
    std::size_t wy = weight(m.apply(f, x));
    if (wy == 0) continue;
    std::size_t dist = x.size();
    for (const auto& z : ker) {
      std::size_t d = 0;
      for (std::size_t j = 0; j < x.size(); ++j) d += x[j] != z[j];
      dist = std::min(dist, d);
    }
    best = std::min(best, static_cast<double>(wy) / static_cast<double>(dist));
  }
  return best;
}

}  // namespace

TEST_CASE("incidence complex of a graph") {
  auto inc = incidence_from_graph(MultiGraph(2, {{0, 1}}, 1));
  REQUIRE(inc.relations[0].size() == 2);
  CHECK(inc.relations[0][0].lo == 0);
  CHECK(inc.relations[0][0].sign == 1);
  CHECK(inc.relations[0][1].lo == 1);
  CHECK(inc.relations[0][1].sign == -1);
  CHECK(inc.types[0] == std::vector<std::string>{"0", "1"});
  CHECK(incidence_from_graph(MultiGraph(3, {})).relations[0].empty());
  auto dbl = incidence_from_graph(MultiGraph(2, {{0, 1}, {0, 1}}));
  CHECK(dbl.relations[0].size() == 4);
  CHECK(dbl.relations[0][2].lo == 0);
  CHECK(dbl.relations[0][3].sign == -1);
}

TEST_CASE("sheaf complex with trivial local data") {
  Field f = make_field(3, 1);
  ChainComplex c = graph_complex(f, MultiGraph(2, {{0, 1}}));
  SparseMatrix d = c.boundary(1);
  CHECK(d.at(0, 0) == 1);
  CHECK(d.at(1, 0) == 2);
  CHECK(cohomology_dim(c, 0) == 1);
  CHECK(cohomology_dim(c, 1) == 0);
  CHECK(homology_dim(c, 0) == 1);

  IncidenceComplex inc = incidence_from_graph(MultiGraph(2, {{0, 1}}));
  LocalSystem zero;
  zero.dims = {{2, 2}, {1}};
  zero.maps = {{Mat{{0, 0}}, Mat{{0, 0}}}};
  CHECK(sheaf_complex(f, inc, zero).boundary(1).is_zero());
}

TEST_CASE("composition law violations are detected") {
  // a single square: vertices 0..3, edges a=(0,1), b=(2,3), c=(0,2), d=(1,3), face
  Field f = make_field(5, 1);
  IncidenceComplex inc;
  inc.sizes = {4, 4, 1};
  inc.relations = {{{0, 0, 1}, {0, 1, -1}, {1, 2, 1}, {1, 3, -1}, {2, 0, 1}, {2, 2, -1}, {3, 1, 1}, {3, 3, -1}},
                   {{0, 0, 1}, {0, 1, -1}, {0, 2, -1}, {0, 3, 1}}};
  inc.validate();
  LocalSystem loc;
  loc.dims = {{1, 1, 1, 1}, {1, 1, 1, 1}, {1}};
  loc.maps = {std::vector<Mat>(8, Mat{{1}}), std::vector<Mat>(4, Mat{{1}})};
  ChainComplex ok = sheaf_complex(f, inc, loc);
  CHECK(ok.is_valid());
  CHECK(homology_dim(ok, 0) == 1);
  CHECK(homology_dim(ok, 1) == 0);
  CHECK(homology_dim(ok, 2) == 0);
  loc.maps[0][0] = Mat{{2}};
  CHECK_THROWS_AS(check_composition(f, inc, loc), Error);
  inc.relations[1][3].sign = -1;
  CHECK_THROWS_AS(inc.validate(), Error);
}

TEST_CASE("Sipser-Spielman complexes") {
  Field f = make_field(2, 1);
  auto g = complete_bipartite(2, 1);
  Mat id = {{1, 0}, {0, 1}};
  ChainComplex full = sipser_spielman(f, g, std::vector<Mat>(4, id));
  CHECK(kernel(f, full.boundary(1)).empty());
  CHECK(full.is_valid());

  Field f3 = make_field(3, 1);
  auto g3 = complete_bipartite(3, 1);
  ChainComplex par = sipser_spielman(f3, g3, std::vector<Mat>(6, Mat{{1, 1, 1}}));
  // Z_1: edge values summing to zero at every vertex, counted directly
  std::size_t count = 0;
  for (const auto& x : all_vectors(f3, 9)) {
    bool okv = true;
    for (std::size_t v = 0; v < 6 && okv; ++v) {
      elem s = 0;
      for (auto e : g3.incident(v)) s = f3.add(s, x[e]);
      okv = s == 0;
    }
    count += okv;
  }
  std::size_t expect = 1;
  for (std::size_t k = 0; k < kernel(f3, par.boundary(1)).size(); ++k) expect *= 3;
  CHECK(count == expect);
  CHECK(par.types()[1][0] == "*");
  CHECK(par.types()[0][4] == "1");

  CHECK_THROWS_AS(sipser_spielman(f, g, std::vector<Mat>(4, Mat{{1, 1}, {1, 1}})), Error);
  CHECK_THROWS_AS(sipser_spielman(f, MultiGraph(3, {{0, 1}, {1, 2}}), std::vector<Mat>(3, Mat{{1}})), Error);
}

TEST_CASE("homology examples") {
  Field f2 = make_field(2, 1);
  ChainComplex z(f2, {3, 2}, {SparseMatrix(3, 2)});
  CHECK(homology_dim(z, 0) == 3);
  CHECK(homology_dim(z, 1) == 2);
  ChainComplex k22 = graph_complex(f2, complete_bipartite(2, 1));
  CHECK(homology_dim(k22, 1) == 1);
  CHECK(cohomology_dim(k22, 1) == 1);
  CHECK(homology_dim(k22, 0) == 1);
  std::mt19937 rng(5);
  Field f9 = make_field(3, 2);
  for (int it = 0; it < 10; ++it) {
    ChainComplex a(f9, {4, 5}, {random_matrix(f9, 4, 5, 0.4, rng)});
    ChainComplex b(f9, {3, 4}, {random_matrix(f9, 3, 4, 0.4, rng)});
    ChainComplex c = tensor_product(a, b);
    for (std::size_t i = 0; i <= c.top(); ++i) {
      CHECK(homology_dim(c, i) == cohomology_dim(c, i));
      CHECK(homology_basis(c, i).size() == homology_dim(c, i));
    }
    std::int64_t chi = 0;
    for (std::size_t i = 0; i <= c.top(); ++i) chi += (i % 2 ? -1 : 1) * static_cast<std::int64_t>(homology_dim(c, i));
    CHECK(chi == euler_characteristic(c));
    CHECK(euler_characteristic(c) == euler_characteristic(a) * euler_characteristic(b));
  }
}

TEST_CASE("systolic distances") {
  Field f2 = make_field(2, 1);
  ChainComplex edge = graph_complex(f2, MultiGraph(2, {{0, 1}}));
  CHECK(cosystolic_distance(edge, 0, DistanceMode::exact, 1 << 20).value == 2);
  CHECK(cosystolic_distance(edge, 1, DistanceMode::exact, 1 << 20).value == kInfinity);

  // repetition code as ker of the path checks
  std::size_t n = 7;
  std::vector<Triplet> t;
  for (std::uint32_t i = 0; i + 1 < n; ++i) t.emplace_back(i, i, 1), t.emplace_back(i, i + 1, 1);
  ChainComplex rep = complex_from_parity(f2, SparseMatrix::from_triplets(f2, n - 1, n, t));
  CHECK(cosystolic_distance(rep, 0, DistanceMode::exact, 1 << 20).value == n);
  // forcing the support search path
  auto viasub = cosystolic_distance(rep, 0, DistanceMode::exact, 1);
  CHECK(viasub.value == n);
  CHECK(viasub.method == "support search");
  auto lb = cosystolic_distance(rep, 0, DistanceMode::lower_bound, 1);
  CHECK_FALSE(lb.exact);
  CHECK(lb.value >= 1);
  CHECK(lb.value <= n);
  // enumeration is preferred whenever it fits the budget
  auto lb100 = cosystolic_distance(rep, 0, DistanceMode::lower_bound, 100);
  CHECK(lb100.exact);
  CHECK(lb100.value == n);

  std::mt19937 rng(11);
  for (Field f : {make_field(2, 1), make_field(3, 1), make_field(2, 2)}) {
    for (int it = 0; it < 6; ++it) {
      ChainComplex a(f, {3, 4}, {random_matrix(f, 3, 4, 0.5, rng)});
      ChainComplex b(f, {2, 3}, {random_matrix(f, 2, 3, 0.5, rng)});
      ChainComplex c = f.q() == 4 ? a : tensor_product(a, b);
      for (std::size_t i = 0; i <= c.top(); ++i) {
        if (c.dim(i) > 12) continue;
        CHECK(systolic_distance(c, i, DistanceMode::exact, 1 << 22).value == brute_systolic(c, i));
        if (c.dim(i) <= 10) {
          auto s = systolic_distance(c, i, DistanceMode::exact, 1);
          CHECK(s.value == brute_systolic(c, i));
        }
        CHECK(cosystolic_distance(c, i, DistanceMode::exact, 1 << 22).value ==
              brute_systolic(dual_complex(c), c.top() - i));
      }
    }
  }
  CHECK_THROWS_AS(systolic_distance(ChainComplex(f2, {30}, {}), 0, DistanceMode::exact, 10), Error);
}

TEST_CASE("block norm distances") {
  Field f2 = make_field(2, 1);
  auto g = complete_bipartite(2, 1);
  Mat id = {{1, 0}, {0, 1}};
  ChainComplex c = sipser_spielman(f2, g, std::vector<Mat>(4, id));
  // a 0-cocycle copies each edge value to both endpoints
  CHECK(cosystolic_distance(c, 0, DistanceMode::exact, 1 << 20).value == 2);
  CHECK(cosystolic_distance(c, 0, DistanceMode::exact, 1 << 20, true).value == 2);
  ChainComplex p = sipser_spielman(f2, g, std::vector<Mat>(4, Mat{{1, 1}}));
  auto plain = cosystolic_distance(p, 0, DistanceMode::exact, 1 << 20, false);
  auto block = cosystolic_distance(p, 0, DistanceMode::exact, 1 << 20, true);
  CHECK(plain.value == 4);
  CHECK(block.value == 4);
  CHECK(block.value <= plain.value);
}

TEST_CASE("expansion oracle against brute force") {
  Field f2 = make_field(2, 1);
  std::size_t n = 5;
  std::vector<Triplet> t;
  for (std::uint32_t i = 0; i + 1 < n; ++i) t.emplace_back(i, i, 1), t.emplace_back(i, i + 1, 1);
  SparseMatrix path = SparseMatrix::from_triplets(f2, n - 1, n, t);
  ChainComplex rep = complex_from_parity(f2, path);
  Ratio r = cocycle_expansion(rep, 0, 1 << 20);
  CHECK(r.value() == doctest::Approx(brute_expansion(f2, path)));
  // the worst word is a half/half split: one violated check against distance floor(n/2)
  CHECK(r == Ratio{1, 2});

  SparseMatrix one = SparseMatrix::from_triplets(f2, 3, 1, {{0, 0, 1}, {2, 0, 1}});
  CHECK(kernel_expansion(f2, one, 100) == Ratio{2, 1});
  CHECK(kernel_expansion(f2, SparseMatrix(2, 3), 100).infinite());
  CHECK_THROWS_AS(kernel_expansion(f2, SparseMatrix(2, 30), 1000), Error);

  std::mt19937 rng(3);
  Field f3 = make_field(3, 1);
  for (int it = 0; it < 8; ++it) {
    SparseMatrix m = random_matrix(f3, 4, 5, 0.4, rng);
    CHECK(kernel_expansion(f3, m, 1 << 20).value() == doctest::Approx(brute_expansion(f3, m)));
  }
}

TEST_CASE("Sipser-Spielman bound formulas") {
  auto vac = ss_distance_bound(5.0, 6, 12, 3, 3);
  CHECK(vac.d1_vacuous);
  CHECK(vac.d0_vacuous);
  auto b = ss_distance_bound(0.0, 8, 10, 4, 8);
  CHECK(b.d1 == doctest::Approx(10.0 * 8 / 8));
  CHECK(b.d0 == doctest::Approx(10.0));
  CHECK_FALSE(b.d1_vacuous);

  // compare the bounds with oracle distances on K_{3,3} with RS-like local codes over GF(5)
  Field f5 = make_field(5, 1);
  auto g = complete_bipartite(3, 1);
  Mat h = {{1, 1, 1}};  // local code: sum zero, distance 2; dual distance 3
  ChainComplex c = sipser_spielman(f5, g, std::vector<Mat>(6, h));
  auto bound = ss_distance_bound(g, 2, 3);
  auto d1 = systolic_distance(c, 1, DistanceMode::exact, 1 << 22).value;
  auto d0 = cosystolic_distance(c, 0, DistanceMode::exact, 1 << 22, true).value;
  CHECK(static_cast<double>(d1) >= bound.d1 - 1e-9);
  CHECK(static_cast<double>(d0) >= bound.d0 - 1e-9);
}

TEST_CASE("tensor products") {
  Field f = make_field(3, 1);
  ChainComplex e = graph_complex(f, MultiGraph(2, {{0, 1}}, 1));
  ChainComplex sq = tensor_product(e, e);
  CHECK(sq.dims() == std::vector<std::size_t>{4, 4, 1});
  CHECK(sq.is_valid());
  CHECK(sq.types()[1][0] == "0*");
  CHECK(sq.types()[2][0] == "**");
  CHECK(sq.labels().empty());
  // second factor carries the sign (-1)^j: face -> edge (0,*) block has the negated d^B
  SparseMatrix d2 = sq.boundary(2);
  std::size_t off = tensor_offset(e, e, 1, 0);
  CHECK(d2.at(off + 0, 0) == 1);
  std::size_t off1 = tensor_offset(e, e, 1, 1);
  CHECK(d2.at(off1 + 0, 0) == f.neg(1));

  ChainComplex point(f, {1}, {});
  ChainComplex same = tensor_product(e, point);
  CHECK(same.dims() == e.dims());
  CHECK(same.boundary(1).to_dense() == e.boundary(1).to_dense());

  CHECK(locality(graph_complex(f, complete_bipartite(3, 1))) == 3);
  CHECK(locality(graph_complex(f, MultiGraph(2, {{0, 1}}))) == 2);
  CHECK(locality(ChainComplex(f, {2, 2}, {SparseMatrix(2, 2)})) == 0);
}

TEST_CASE("Kunneth formula and product distance on random pairs") {
  std::mt19937 rng(17);
  Field f3 = make_field(3, 1);
  int checked = 0;
  for (int it = 0; it < 12; ++it) {
    ChainComplex a(f3, {2, 3}, {random_matrix(f3, 2, 3, 0.5, rng)});
    ChainComplex b(f3, {3, 2}, {random_matrix(f3, 3, 2, 0.5, rng)});
    for (std::size_t i = 0; i <= 2; ++i) {
      CHECK(kunneth_check(a, b, i));
      auto rep = product_distance_check(a, b, i, 1 << 22);
      CHECK(rep.ok);
      ++checked;
    }
  }
  CHECK(checked == 36);
  Field f2 = make_field(2, 1);
  ChainComplex k22 = graph_complex(f2, complete_bipartite(2, 1));
  ChainComplex k33 = graph_complex(f2, complete_bipartite(3, 1));
  CHECK(kunneth_check(k22, k33, 1));
  CHECK(cohomology_dim(tensor_product(k22, k33), 1) == 1 * 1 + 1 * 4);
}

TEST_CASE("balanced products") {
  Field f = make_field(3, 1);
  VectorGroup trivial(f, 0);
  ChainComplex e = graph_complex(f, MultiGraph(2, {{0, 1}}, 1));
  GroupAction id{trivial, {{0, 1}, {0}}};
  ChainComplex bp = balanced_product(e, id, e, id);
  ChainComplex tp = tensor_product(e, e);
  CHECK(bp.dims() == tp.dims());
  for (std::size_t i = 1; i <= 2; ++i) CHECK(bp.boundary(i).to_dense() == tp.boundary(i).to_dense());

  // Z/3 rotating a 6-cycle by two steps
  VectorGroup z3(f, 1);
  ChainComplex c6 = graph_complex(f, cycle(6));
  GroupAction rot{z3, {std::vector<std::uint32_t>(18), std::vector<std::uint32_t>(18)}};
  for (std::uint32_t g = 0; g < 3; ++g)
    for (std::uint32_t v = 0; v < 6; ++v) rot.perm[0][g * 6 + v] = rot.perm[1][g * 6 + v] = (v + 2 * g) % 6;
  rot.validate(c6);
  ChainComplex b = balanced_product(c6, rot, c6, rot);
  CHECK(b.is_valid());
  CHECK(b.dims() == std::vector<std::size_t>{12, 24, 12});
  CHECK(euler_characteristic(b) * 3 == euler_characteristic(c6) * euler_characteristic(c6));

  GroupAction bad = rot;
  for (std::uint32_t v = 0; v < 6; ++v) bad.perm[1][6 + v] = v;
  CHECK_THROWS_AS(bad.validate(c6), Error);
  GroupAction fixed{z3, {std::vector<std::uint32_t>(18), std::vector<std::uint32_t>(18)}};
  for (std::uint32_t g = 0; g < 3; ++g)
    for (std::uint32_t v = 0; v < 6; ++v) fixed.perm[0][g * 6 + v] = fixed.perm[1][g * 6 + v] = v;
  CHECK_THROWS_AS(fixed.validate(c6), Error);
  GroupAction other{VectorGroup(make_field(5, 1), 1), rot.perm};
  CHECK_THROWS_AS(balanced_product(c6, rot, c6, other), Error);
}

TEST_CASE("complex JSON round trip") {
  Field f = make_field(2, 2);
  ChainComplex sq = tensor_product(graph_complex(f, MultiGraph(2, {{0, 1}}, 1)), graph_complex(f, MultiGraph(2, {{0, 1}}, 1)));
  auto j = complex_to_json(sq);
  CHECK(j.at("schema") == "rmlift.complex/1");
  ChainComplex back = complex_from_json(j);
  CHECK(back.dims() == sq.dims());
  CHECK(back.types() == sq.types());
  for (std::size_t i = 1; i <= 2; ++i) CHECK(back.boundary(i).to_dense() == sq.boundary(i).to_dense());
  CHECK(complex_to_json(back) == j);
}

TEST_CASE("cubical types") {
  CHECK(CubicalType{"0*1"}.valid(1));
  CHECK_FALSE(CubicalType{"0*1"}.valid(2));
  CHECK_FALSE(CubicalType{"0x"}.valid(0));
  Field f = make_field(2, 1);
  ChainComplex c(f, {1, 1}, {SparseMatrix(1, 1)});
  CHECK_THROWS_AS(c.set_types({{"*"}, {"*"}}), Error);
  CHECK_THROWS_AS(c.set_labels({{"a"}, {}}), Error);
}
