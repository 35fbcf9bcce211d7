#include "rmlift/planted.hpp"

#include <algorithm>

#include <nlohmann/json.hpp>

#include "rmlift/error.hpp"

namespace rmlift {

namespace {

Vec incident_values(const MultiGraph& base, std::uint32_t v) {
  Vec pts;
  for (auto e : base.incident(v)) pts.push_back(base.edge_value(e));
  return pts;
}

// rows alpha_e e^j for j < dim
Mat twisted_rows(const Field& f, const Vec& points, const Vec& alpha, std::size_t dim) {
  Mat h(dim, Vec(points.size()));
  for (std::size_t k = 0; k < points.size(); ++k) {
    elem p = alpha.empty() ? 1 : alpha[k];
    for (std::size_t j = 0; j < dim; ++j) {
      h[j][k] = p;
      p = f.mul(p, points[k]);
    }
  }
  return h;
}

void verify_local(const MultiGraph& base, std::uint32_t v, std::uint32_t ell, int kind, const Mat& h) {
  const Field& f = base.value_field();
  Vec pts = incident_values(base, v);
  std::size_t delta = pts.size();
  SparseMatrix hs = SparseMatrix::from_dense(h, delta);
  bool ok = true;
  if (kind == 1) {
    ok = LinearCode::from_parity(f, hs) == rs_code(f, pts, {}, ell).code;
  } else if (kind == 2) {
    ok = LinearCode::from_generator(f, hs) == rs_code(f, pts, {}, ell).code;
  } else {
    // each row extended by zeros off E(v) must be a degree < |E| - ell evaluation on all of E
    Vec all = base.edge_values();
    LinearCode big = rs_code(f, all, {}, static_cast<std::uint32_t>(all.size() - ell)).code;
    ok = dense_rank(f, h) == delta - ell;
    for (const auto& row : h) {
      Vec ext(all.size(), 0);
      const auto& inc = base.incident(v);
      for (std::size_t k = 0; k < inc.size(); ++k) ext[inc[k]] = row[k];
      ok = ok && big.contains(ext);
    }
  }
  if (!ok)
    fail(ErrorKind::internal, "LocalCodeMismatch",
         "local matrix of kind " + std::to_string(kind) + " at vertex " + std::to_string(v) + " has the wrong code");
}

}  // namespace

Mat planted_local_matrix(const MultiGraph& base, std::uint32_t v, std::uint32_t ell, int kind) {
  require(kind >= 1 && kind <= 3, "BadKind", "planted kind must be 1, 2 or 3");
  require(base.has_edge_values() && base.value_field().valid(), "MissingEdgeValues", "base graph needs edge values");
  const Field& f = base.value_field();
  Vec pts = incident_values(base, v);
  std::size_t delta = pts.size();
  require(ell <= delta, "BadEll", "need 0 <= ell <= Delta");
  Mat h;
  if (kind == 1) {
    Vec beta = rs_dual(f, pts, {}, ell);
    h = twisted_rows(f, pts, beta, delta - ell);
  } else if (kind == 2) {
    h = twisted_rows(f, pts, {}, ell);
  } else {
    std::size_t total = base.num_edges();
    // |E| - ell >= |E \ E(v)| holds exactly when ell <= Delta
    if (total - ell < total - delta)
      fail(ErrorKind::infeasible, "InfeasibleShortening", "|E| - ell must be at least |E \\ E(v)|");
    Vec roots;
    const auto& inc = base.incident(v);
    for (std::uint32_t e = 0; e < total; ++e)
      if (std::find(inc.begin(), inc.end(), e) == inc.end()) roots.push_back(base.edge_value(e));
    Vec beta = shortened_twist(f, pts, {}, roots);
    h = twisted_rows(f, pts, beta, delta - ell);
  }
  verify_local(base, v, ell, kind, h);
  return h;
}

RMPlantedComplex rm_planted_complex(const LiftedGraph& lift, std::uint32_t ell, int kind, PlantedParams params) {
  const MultiGraph& base = lift.base();
  auto delta = base.regular_degree();
  require(delta.has_value(), "NotRegular", "base graph must be regular");
  require(ell <= *delta, "BadEll", "need 0 <= ell <= Delta");
  RMPlantedComplex cx;
  cx.kind = kind;
  cx.ell = ell;
  cx.params = params;
  cx.lift = lift;
  for (std::uint32_t v = 0; v < base.num_vertices(); ++v) cx.base_h.push_back(planted_local_matrix(base, v, ell, kind));
  // copy h_v to every line over v, matching lifted edges to base edges by projection
  const MultiGraph& g = lift.lifted();
  std::vector<Mat> h(g.num_vertices());
  for (std::uint64_t vb = 0; vb < g.num_vertices(); ++vb) {
    std::uint32_t v = lift.base_vertex(vb);
    const Mat& hv = cx.base_h[v];
    const auto& binc = base.incident(v);
    const auto& linc = g.incident(vb);
    h[vb] = Mat(hv.size(), Vec(linc.size()));
    for (std::size_t k = 0; k < linc.size(); ++k) {
      std::uint32_t e = lift.base_edge(linc[k]);
      auto pos = static_cast<std::size_t>(std::find(binc.begin(), binc.end(), e) - binc.begin());
      for (std::size_t j = 0; j < hv.size(); ++j) h[vb][j][k] = hv[j][pos];
    }
  }
  cx.complex = sipser_spielman(base.value_field(), g, h);
  return cx;
}

GroupAction planted_action(const RMPlantedComplex& cx) {
  const LiftedGraph& lift = cx.lift;
  GroupAction ga;
  ga.group = lift.group();
  std::uint64_t order = ga.group.size();
  std::size_t m = cx.local_dim();
  std::size_t nv = lift.lifted().num_vertices(), ne = lift.lifted().num_edges();
  ga.perm.assign(2, {});
  ga.perm[0].resize(order * nv * m);
  ga.perm[1].resize(order * ne);
  for (std::uint64_t g = 0; g < order; ++g) {
    for (std::uint64_t vb = 0; vb < nv; ++vb) {
      std::uint64_t to = lift.act_vertex(g, vb);
      for (std::size_t j = 0; j < m; ++j)
        ga.perm[0][g * nv * m + vb * m + j] = static_cast<std::uint32_t>(to * m + j);
    }
    for (std::uint64_t eb = 0; eb < ne; ++eb)
      ga.perm[1][g * ne + eb] = static_cast<std::uint32_t>(lift.act_edge(g, eb));
  }
  return ga;
}

Point edge_point(const LiftedGraph& lift, std::uint64_t ebar) {
  Point p{lift.base().edge_value(lift.base_edge(ebar))};
  Vec x = lift.group().decode(lift.offset(ebar));
  p.insert(p.end(), x.begin(), x.end());
  return p;
}

Vec iota1(const LiftedGraph& lift, const Polynomial& f) {
  require(f.num_vars() == lift.t() + 1, "DimensionMismatch", "polynomial must have t + 1 variables");
  std::size_t ne = lift.lifted().num_edges();
  Vec out(ne);
  for (std::uint64_t eb = 0; eb < ne; ++eb) out[eb] = f.eval(edge_point(lift, eb));
  return out;
}

Vec iota0(const RMPlantedComplex& cx, const Polynomial& f) {
  require(cx.kind == 2, "BadKind", "iota0 is defined for kind-2 complexes");
  require(f.num_vars() == cx.lift.t() + 1, "DimensionMismatch", "polynomial must have t + 1 variables");
  if (f.degree() >= static_cast<std::int64_t>(cx.ell))
    fail(ErrorKind::invalid_argument, "DegreeTooHigh", "iota0 needs deg f < ell");
  const LiftedGraph& lift = cx.lift;
  const MultiGraph& g = lift.lifted();
  const Field& fld = lift.field();
  std::size_t m = cx.local_dim();
  Vec out(g.num_vertices() * m, 0);
  if (m == 0 || f.is_zero()) return out;
  SparseMatrix d = cx.complex.boundary(1);
  for (std::uint64_t vb = 0; vb < g.num_vertices(); ++vb) {
    const auto& linc = g.incident(vb);
    // h^T as a deg x m system, read back from the boundary rows of this vertex
    Mat ht(linc.size(), Vec(m));
    Vec rhs(linc.size());
    elem sign = 1;
    for (std::size_t k = 0; k < linc.size(); ++k) {
      rhs[k] = f.eval(edge_point(lift, linc[k]));
      sign = g.edge(linc[k]).v0 == vb ? 1 : fld.neg(1);
      elem unsign = fld.inv(sign);
      for (std::size_t j = 0; j < m; ++j) ht[k][j] = fld.mul(unsign, d.at(vb * m + j, linc[k]));
    }
    auto y = dense_solve(fld, ht, rhs);
    if (!y) fail(ErrorKind::check_failed, "NoPreimage", "line restriction is not in the local image at vertex " + std::to_string(vb));
    for (std::size_t j = 0; j < m; ++j) out[vb * m + j] = (*y)[j];
  }
  return out;
}

std::vector<Vec> edge_grid_axes(const LiftedGraph& lift) {
  const Field& f = lift.field();
  std::vector<Vec> axes{lift.base().edge_values()};
  Vec all(f.q());
  for (elem a = 0; a < f.q(); ++a) all[a] = a;
  for (std::size_t i = 0; i < lift.t(); ++i) axes.push_back(all);
  return axes;
}

Vec edges_to_grid(const LiftedGraph& lift, const Vec& on_edges) {
  std::uint64_t gs = lift.group().size();
  std::size_t t = lift.t();
  std::uint32_t q = lift.field().q();
  require(on_edges.size() == lift.lifted().num_edges(), "DimensionMismatch", "vector must cover every lifted edge");
  Vec grid(on_edges.size());
  for (std::uint64_t eb = 0; eb < on_edges.size(); ++eb) {
    std::uint64_t e = eb / gs, x = eb % gs;
    // group index has the first coordinate fastest; the grid has the last coordinate fastest
    std::uint64_t idx = e;
    std::vector<std::uint64_t> digits(t);
    for (std::size_t i = 0; i < t; ++i) digits[i] = x % q, x /= q;
    for (std::size_t i = 0; i < t; ++i) idx = idx * q + digits[i];
    grid[idx] = on_edges[eb];
  }
  return grid;
}

PlantingReport planting_check(const RMPlantedComplex& cx) {
  const LiftedGraph& lift = cx.lift;
  const Field& f = lift.field();
  std::size_t t = lift.t();
  PlantingReport rep;
  rep.kind = cx.kind;
  rep.ok = true;
  if (cx.kind == 1) {
    SparseMatrix d = cx.complex.boundary(1);
    for (const auto& e : monomials_below(t + 1, cx.ell)) {
      Vec ev = iota1(lift, Polynomial::monomial(f, e));
      ++rep.checked;
      if (weight(d.apply(f, ev)) != 0) {
        rep.ok = false;
        rep.detail = "monomial evaluation is not a cycle";
        break;
      }
    }
  } else if (cx.kind == 2) {
    SparseMatrix delta0 = cx.complex.coboundary(0);
    std::vector<Vec> free_images;
    for (const auto& e : monomials_below(t + 1, cx.ell)) {
      Vec img = iota0(cx, Polynomial::monomial(f, e));
      ++rep.checked;
      if (weight(delta0.apply(f, img)) != 0) {
        rep.ok = false;
        rep.detail = "iota0 image is not a cocycle";
        break;
      }
      if (e[0] == 0) free_images.push_back(img);
    }
    if (rep.ok) {
      rep.injective_rank = dense_rank(f, free_images);
      if (rep.injective_rank != free_images.size()) {
        rep.ok = false;
        rep.detail = "iota0 is not injective on polynomials without X_0";
      }
    }
  } else {
    std::size_t total = lift.base().num_edges();
    rep.degree_bound = t * (f.q() - 1) + total - cx.ell;
    auto axes = edge_grid_axes(lift);
    SparseMatrix d = cx.complex.boundary(1);
    std::size_t ne = lift.lifted().num_edges();
    for (std::size_t r = 0; r < d.rows(); ++r) {
      Polynomial p = interpolate_grid(f, axes, edges_to_grid(lift, to_dense(d.row(r), ne)));
      ++rep.checked;
      rep.max_degree = std::max(rep.max_degree, p.degree());
      if (p.degree() >= static_cast<std::int64_t>(rep.degree_bound)) {
        rep.ok = false;
        rep.detail = "coboundary of basis vector " + std::to_string(r) + " has degree " + std::to_string(p.degree());
        break;
      }
    }
  }
  return rep;
}

nlohmann::json planted_to_json(const RMPlantedComplex& cx) {
  const Field& f = cx.lift.field();
  nlohmann::json j;
  j["schema"] = "rmlift.planted/1";
  j["kind"] = cx.kind;
  j["ell"] = cx.ell;
  j["params"] = {{"nu", cx.params.nu}, {"delta", cx.params.delta}, {"eta", cx.params.eta}};
  j["base"] = graph_to_json(cx.lift.base());
  j["labeling"] = labeling_to_json(f, cx.lift.labeling());
  j["complex"] = complex_to_json(cx.complex);
  return j;
}

RMPlantedComplex planted_from_json(const nlohmann::json& j) {
  MultiGraph base = graph_from_json(j.at("base"));
  VertexLabeling lab = labeling_from_json(base.value_field(), j.at("labeling"));
  PlantedParams params;
  if (j.contains("params")) {
    params.nu = j["params"].value("nu", 0.0);
    params.delta = j["params"].value("delta", 0.0);
    params.eta = j["params"].value("eta", 0.0);
  }
  RMPlantedComplex cx = rm_planted_complex(LiftedGraph(base, lab), j.at("ell").get<std::uint32_t>(),
                                           j.at("kind").get<int>(), params);
  if (j.contains("complex") && complex_to_json(cx.complex) != j.at("complex"))
    fail(ErrorKind::check_failed, "ComplexMismatch", "stored complex differs from the rebuilt one");
  return cx;
}

}  // namespace rmlift
