#include <cmath>
#include <random>

#include <nlohmann/json.hpp>

#include "doctest.h"
#include "rmlift/error.hpp"
#include "rmlift/graph.hpp"

using namespace rmlift;

namespace {

MultiGraph complete_bipartite(std::size_t n, std::size_t mult) {
  std::vector<Edge> edges;
  for (std::uint32_t a = 0; a < n; ++a)
    for (std::uint32_t b = 0; b < n; ++b)
      for (std::size_t k = 0; k < mult; ++k) edges.push_back({a, static_cast<std::uint32_t>(n + b)});
  return MultiGraph(2 * n, edges, n);
}

MultiGraph random_regular(std::size_t n, std::size_t d, std::mt19937& rng) {
  // configuration model, retried until loop-free
  while (true) {
    std::vector<std::uint32_t> stubs;
    for (std::uint32_t v = 0; v < n; ++v)
      for (std::size_t i = 0; i < d; ++i) stubs.push_back(v);
    std::shuffle(stubs.begin(), stubs.end(), rng);
    std::vector<Edge> edges;
    bool ok = true;
    for (std::size_t i = 0; i < stubs.size(); i += 2) {
      if (stubs[i] == stubs[i + 1]) ok = false;
      edges.push_back({stubs[i], stubs[i + 1]});
    }
    if (ok) return MultiGraph(n, edges);
  }
}

}  // namespace

TEST_CASE("lambda2 examples") {
  CHECK(std::abs(lambda2(complete_bipartite(3, 2))) < 1e-8);
  CHECK(std::abs(lambda2(MultiGraph(2, {{0, 1}})) + 1) < 1e-8);
  MultiGraph two(6, {{0, 1}, {1, 2}, {2, 0}, {3, 4}, {4, 5}, {5, 3}});
  CHECK(std::abs(lambda2(two) - 2) < 1e-8);
  CHECK_THROWS_AS(lambda2(MultiGraph(1, {})), Error);
}

TEST_CASE("Lanczos agrees with the dense eigensolver") {
  std::mt19937 rng(2);
  for (int it = 0; it < 5; ++it) {
    auto g = random_regular(60, 4, rng);
    CHECK(std::abs(lambda2_lanczos(g) - lambda2(g)) < 1e-6);
  }
  MultiGraph two(6, {{0, 1}, {1, 2}, {2, 0}, {3, 4}, {4, 5}, {5, 3}});
  CHECK(std::abs(lambda2_lanczos(two) - 2) < 1e-6);
}

TEST_CASE("mixing lemma") {
  auto k = complete_bipartite(3, 2);
  auto [l0, r0] = mixing_check(k, {});
  CHECK(l0 == 0);
  CHECK(r0 == 0);
  auto [l1, r1] = mixing_check(k, {0, 1, 2, 3, 4, 5});
  CHECK(std::abs(l1 - 36) < 1e-9);
  CHECK(std::abs(r1 - 36) < 1e-6);
  std::mt19937 rng(7);
  auto g = random_regular(20, 3, rng);
  for (int it = 0; it < 50; ++it) {
    std::vector<std::uint32_t> s;
    for (std::uint32_t v = 0; v < 20; ++v)
      if (rng() % 2) s.push_back(v);
    auto [l, r] = mixing_check(g, s);
    CHECK(l <= r + 1e-6);
  }
  CHECK_THROWS_AS(mixing_check(MultiGraph(3, {{0, 1}}), {0}), Error);
}

TEST_CASE("abelian lifts and signed adjacency") {
  Field f2 = make_field(2, 1);
  VectorGroup g1(f2, 1), g0(f2, 0);
  MultiGraph e(2, {{0, 1}}, 1);
  auto same = abelian_lift(e, g0, {0});
  CHECK(same.num_vertices() == 2);
  auto cover = abelian_lift(e, g1, {1});
  CHECK(cover.num_vertices() == 4);
  CHECK(cover.edge(0).v1 == 3);
  CHECK(cover.edge(1).v1 == 2);
  auto copies = abelian_lift(e, g1, {0});
  CHECK(copies.edge(0).v1 == 2);
  CHECK(copies.edge(1).v1 == 3);
  auto a = signed_adjacency(e, g1, {1}, group_character(g1, 1));
  CHECK(std::abs(a[0][1] + 1.0) < 1e-12);
  MultiGraph dbl(2, {{0, 1}, {0, 1}}, 1);
  auto b = signed_adjacency(dbl, g1, {0, 1}, group_character(g1, 1));
  CHECK(std::abs(b[0][1]) < 1e-12);
  auto triv = signed_adjacency(dbl, g1, {0, 1}, group_character(g1, 0));
  CHECK(std::abs(triv[1][0] - 2.0) < 1e-12);
}

TEST_CASE("spectrum union on small lifts") {
  std::mt19937 rng(8);
  Field f3 = make_field(3, 1);
  VectorGroup g(f3, 1);
  MultiGraph e(2, {{0, 1}}, 1);
  CHECK(spectrum_union_check(e, g, {1}).ok);
  auto k = complete_bipartite(2, 1);
  Field f2 = make_field(2, 1);
  VectorGroup g2(f2, 2);
  std::vector<std::uint64_t> lab(k.num_edges());
  for (auto& l : lab) l = rng() % 4;
  CHECK(spectrum_union_check(k, g2, lab).ok);
}

TEST_CASE("walk trace equals matrix power trace") {
  Field f5 = make_field(5, 1);
  VectorGroup g(f5, 1);
  auto k = complete_bipartite(2, 1);
  std::vector<std::uint64_t> lab{1, 2, 3, 4};
  for (std::uint64_t c = 0; c < 5; ++c) {
    auto chi = group_character(g, c);
    auto a = signed_adjacency(k, g, lab, chi);
    for (std::size_t kk = 1; kk <= 3; ++kk)
      CHECK(std::abs(walk_trace(k, g, lab, chi, kk) - matrix_power_trace(a, 2 * kk)) < 1e-6);
  }
  // path has no closed walks of length 2k beyond backtracking
  MultiGraph path(3, {{0, 1}, {1, 2}});
  VectorGroup g0(f5, 0);
  auto chi0 = group_character(g0, 0);
  CHECK(std::abs(walk_trace(path, g0, {0, 0}, chi0, 1) - 4.0) < 1e-9);
}

TEST_CASE("redundant walk counts") {
  auto k = complete_bipartite(2, 2);
  CHECK(count_redundant_walks(k, 1) == 4 * 4);
  CHECK(count_redundant_walks(MultiGraph(2, {{0, 1}}), 1) == 2);
  CHECK(count_redundant_walks(MultiGraph(3, {}), 2) == 0);
}

TEST_CASE("low-bias sets") {
  CHECK(exact_bias(2, 2, {{0, 0}, {1, 0}, {0, 1}, {1, 1}}) < 1e-12);
  CHECK(std::abs(exact_bias(2, 2, {{0, 0}}) - 1) < 1e-12);
  CHECK(std::abs(exact_bias(2, 2, {{1, 0}, {0, 1}, {1, 1}}) - 1.0 / 3) < 1e-12);
  std::mt19937_64 rng(3);
  auto s = low_bias_set(3, 4, 0.3, 1u << 12, rng);
  CHECK(s.certified_bias <= 0.3);
  CHECK(std::abs(exact_bias(3, 4, s.elements) - s.certified_bias) < 1e-12);
  auto full = low_bias_set(2, 3, 0.0, 1u << 12, rng);
  CHECK(full.full_group);
  CHECK(full.certified_bias < 1e-9);
}

TEST_CASE("base graph") {
  Field f8 = make_field(2, 3);
  auto one = build_base_graph(f8, 1, 1);
  CHECK(one.num_edges() == 1);
  auto g = build_base_graph(f8, 2, 4);
  CHECK(g.num_edges() == 8);
  CHECK(g.regular_degree() == 4u);
  std::size_t pair01 = 0;
  for (auto& e : g.edges())
    if (e.v0 == 0 && e.v1 == 3) ++pair01;
  CHECK(pair01 == 2);
  auto fullq = build_base_graph(f8, 2, 4);
  CHECK(fullq.edge_values().back() == 7);
  CHECK_THROWS_AS(build_base_graph(f8, 3, 3), Error);
}

TEST_CASE("lifted graph construction") {
  Field f5 = make_field(5, 1);
  auto base = build_base_graph(f5, 1, 2);
  VertexLabeling l0{0, {{}, {}}};
  LiftedGraph t0(base, l0);
  CHECK(t0.lifted().num_vertices() == 2);
  CHECK(t0.lifted().num_edges() == 2);
  VertexLabeling l{1, {{1}, {3}}};
  LiftedGraph lg(base, l);
  CHECK(lg.verify_isomorphism());
  CHECK(lg.verify_free_action());
  CHECK(lg.lifted().regular_degree() == 2u);
  // edge valued 0 has a zero lift label
  CHECK(lg.lift_labels()[0] == 0);
  VertexLabeling same{1, {{2}, {2}}};
  LiftedGraph disc(base, same);
  for (auto x : disc.lift_labels()) CHECK(x == 0);
  CHECK(std::abs(lambda2(disc.lifted()) - 2) < 1e-8);
  // endpoints lie on the stated lines
  for (std::uint64_t eb = 0; eb < lg.lifted().num_edges(); ++eb)
    for (int b = 0; b < 2; ++b) CHECK(lg.edge_on_line(lg.endpoint(eb, b), lg.base_edge(eb)) == eb);
  Field f9 = make_field(3, 2);
  auto base9 = build_base_graph(f9, 2, 4);
  std::mt19937 rng(1);
  VertexLabeling l9{2, {}};
  for (int v = 0; v < 4; ++v) l9.labels.push_back({static_cast<elem>(rng() % 9), static_cast<elem>(rng() % 9)});
  LiftedGraph lg9(base9, l9);
  CHECK(lg9.verify_isomorphism());
  CHECK(lg9.verify_free_action());
  CHECK(std::abs(lifted_lambda2(base9, lg9.group(), lg9.lift_labels()) - lambda2(lg9.lifted())) < 1e-8);
}

TEST_CASE("label search") {
  Field f2 = make_field(2, 1);
  MultiGraph base(2, {{0, 1}, {0, 1}}, 1);
  base.set_edge_values(f2, {0, 1});
  std::vector<VertexLabeling> all;
  for (elem a = 0; a < 2; ++a)
    for (elem b = 0; b < 2; ++b) all.push_back({1, {{a}, {b}}});
  auto single = search_labels(base, {all[2]}, 1.0);
  CHECK(single.best == 0);
  auto r = search_labels(base, all, 1.0);
  double best = 1e9;
  for (auto& c : all) best = std::min(best, lambda2(LiftedGraph(base, c).lifted()));
  CHECK(std::abs(r.lambda2 - best) < 1e-9);
  CHECK(r.success);
}

TEST_CASE("graph json round trip") {
  Field f9 = make_field(3, 2);
  auto g = build_base_graph(f9, 2, 2);
  auto h = graph_from_json(graph_to_json(g));
  CHECK(h.num_edges() == g.num_edges());
  CHECK(h.edge_values() == g.edge_values());
  VertexLabeling l{2, {{1, 2}, {3, 4}, {5, 6}, {7, 8}}};
  auto l2 = labeling_from_json(f9, labeling_to_json(f9, l));
  CHECK(l2.labels == l.labels);
}
