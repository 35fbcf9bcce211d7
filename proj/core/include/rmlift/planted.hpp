#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "rmlift/complex.hpp"
#include "rmlift/graph.hpp"
#include "rmlift/poly.hpp"

namespace rmlift {

// optional record of the expander schedule the instance was drawn from
struct PlantedParams {
  double nu = 0, delta = 0, eta = 0;
};

// Sipser-Spielman complex on a lifted graph whose local matrices come from Reed-Solomon codes:
//   kind 1: ker h_v = ev_{E(v)}(deg < ell), m = Delta - ell
//   kind 2: im h_v^T = ev_{E(v)}(deg < ell), m = ell
//   kind 3: im h_v^T = ev_{E(v)}(F_q[X]^{<|E|-ell} vanishing on E \ E(v)), m = Delta - ell
struct RMPlantedComplex {
  int kind = 1;
  std::uint32_t ell = 0;
  PlantedParams params;
  LiftedGraph lift;
  std::vector<Mat> base_h;  // per base vertex, columns in base incidence order
  ChainComplex complex;     // level 0 = (vertex, local coordinate), level 1 = lifted edges

  std::size_t local_dim() const { return base_h.empty() ? 0 : base_h[0].size(); }
};

// local matrix of a base vertex for the given kind
Mat planted_local_matrix(const MultiGraph& base, std::uint32_t v, std::uint32_t ell, int kind);

RMPlantedComplex rm_planted_complex(const LiftedGraph& lift, std::uint32_t ell, int kind, PlantedParams params = {});

// the F_q^t translation action on both levels of the complex
GroupAction planted_action(const RMPlantedComplex& cx);

// point (e, x_1, ..., x_t) of a lifted edge
Point edge_point(const LiftedGraph& lift, std::uint64_t ebar);

// evaluation of f on every lifted edge, in edge order
Vec iota1(const LiftedGraph& lift, const Polynomial& f);
// per-vertex preimages of the line restrictions of f (kind 2 only)
Vec iota0(const RMPlantedComplex& cx, const Polynomial& f);

// grid E x F_q^t in the layout of interpolate_grid: axis 0 = edge values in base edge order
std::vector<Vec> edge_grid_axes(const LiftedGraph& lift);
// reorders a vector over lifted edges into grid order
Vec edges_to_grid(const LiftedGraph& lift, const Vec& on_edges);

struct PlantingReport {
  int kind = 0;
  bool ok = false;
  std::size_t checked = 0;
  std::string detail;
  // kind 2: rank of the images of the X_0-free monomials
  std::size_t injective_rank = 0;
  // kind 3: maximal total degree seen and the bound it must stay under
  std::int64_t max_degree = -1;
  std::uint64_t degree_bound = 0;
};

PlantingReport planting_check(const RMPlantedComplex& cx);

nlohmann::json planted_to_json(const RMPlantedComplex& cx);
RMPlantedComplex planted_from_json(const nlohmann::json& j);

}  // namespace rmlift
