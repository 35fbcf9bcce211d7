#pragma once

#include <complex>
#include <cstdint>
#include <optional>
#include <random>
#include <utility>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "rmlift/field.hpp"
#include "rmlift/linalg.hpp"

namespace rmlift {

struct Edge {
  std::uint32_t v0 = 0, v1 = 0;
};

class MultiGraph {
 public:
  MultiGraph() = default;
  // vertices [0, n0) form V0 when n0 is given
  MultiGraph(std::size_t num_vertices, std::vector<Edge> edges, std::optional<std::size_t> n0 = std::nullopt);

  std::size_t num_vertices() const { return n_; }
  std::size_t num_edges() const { return edges_.size(); }
  const Edge& edge(std::size_t i) const { return edges_[i]; }
  const std::vector<Edge>& edges() const { return edges_; }
  bool bipartite() const { return n0_.has_value(); }
  std::size_t part0_size() const { return n0_.value_or(0); }
  const std::vector<std::uint32_t>& incident(std::size_t v) const { return incident_[v]; }
  std::size_t degree(std::size_t v) const { return incident_[v].size(); }
  // common degree, or nothing when irregular
  std::optional<std::size_t> regular_degree() const;
  std::uint32_t other_end(std::uint32_t e, std::uint32_t v) const;

  // injective F_q-valued edge labels
  void set_edge_values(const Field& f, Vec values);
  bool has_edge_values() const { return !values_.empty() || edges_.empty(); }
  const Field& value_field() const { return f_; }
  const Vec& edge_values() const { return values_; }
  elem edge_value(std::size_t e) const { return values_[e]; }

 private:
  std::size_t n_ = 0;
  std::vector<Edge> edges_;
  std::optional<std::size_t> n0_;
  std::vector<std::vector<std::uint32_t>> incident_;
  Field f_;
  Vec values_;
};

// additive group F_q^t with elements indexed by the mixed radix sum x_0 + x_1 q + ...
class VectorGroup {
 public:
  VectorGroup() = default;
  VectorGroup(const Field& f, std::size_t t);

  const Field& field() const { return f_; }
  std::size_t dim() const { return t_; }
  std::uint64_t size() const { return size_; }
  std::uint64_t encode(const Vec& x) const;
  Vec decode(std::uint64_t g) const;
  std::uint64_t add(std::uint64_t a, std::uint64_t b) const;
  std::uint64_t neg(std::uint64_t a) const;
  std::uint64_t sub(std::uint64_t a, std::uint64_t b) const { return add(a, neg(b)); }
  std::uint64_t scale(elem c, std::uint64_t a) const;
  // coordinates over the prime field, length t*m
  std::vector<std::uint32_t> prime_coords(std::uint64_t g) const;

 private:
  Field f_;
  std::size_t t_ = 0;
  std::uint64_t size_ = 1;
};

using ComplexMat = std::vector<std::vector<std::complex<double>>>;

struct VertexLabeling {
  std::size_t t = 0;
  std::vector<Vec> labels;  // labels[v] in F_q^t
};

double lambda2(const MultiGraph& g);
// eigenvalues in ascending order (dense symmetric eigensolve)
std::vector<double> adjacency_spectrum(const MultiGraph& g);
std::vector<std::vector<double>> adjacency_matrix(const MultiGraph& g);
// second largest eigenvalue by deflated Lanczos with full reorthogonalization
double lambda2_lanczos(const MultiGraph& g, std::uint64_t seed = 1);

std::pair<double, double> mixing_check(const MultiGraph& g, const std::vector<std::uint32_t>& subset);

MultiGraph abelian_lift(const MultiGraph& g, const VectorGroup& grp, const std::vector<std::uint64_t>& labels);
ComplexMat signed_adjacency(const MultiGraph& g, const VectorGroup& grp, const std::vector<std::uint64_t>& labels,
                            const Character& chi);
std::vector<double> hermitian_spectrum(const ComplexMat& a);
Character group_character(const VectorGroup& grp, std::uint64_t index);

struct SpectrumUnionReport {
  bool ok = false;
  double max_diff = 0;
  std::size_t count = 0;
};
SpectrumUnionReport spectrum_union_check(const MultiGraph& g, const VectorGroup& grp,
                                         const std::vector<std::uint64_t>& labels, double tol = 1e-6);

// sum over closed length-2k walks of the product of character phases
std::complex<double> walk_trace(const MultiGraph& g, const VectorGroup& grp, const std::vector<std::uint64_t>& labels,
                                const Character& chi, std::size_t k);
std::complex<double> matrix_power_trace(const ComplexMat& a, std::size_t power);
std::uint64_t count_redundant_walks(const MultiGraph& g, std::size_t k);
// (Delta * 3k / |V|^{1/4})^{2k}
double redundant_walk_bound(std::size_t delta, std::size_t num_vertices, std::size_t k);
// q^t (4k / (eta |V|^{1/4}))^{2k}
double expansion_failure_bound(std::uint64_t group_size, std::size_t num_vertices, std::size_t k, double eta);

// multiset of elements of F_p^dim given by prime-field coordinate vectors
struct LowBiasSet {
  std::uint32_t p = 2;
  std::size_t dim = 0;
  std::vector<std::vector<std::uint32_t>> elements;
  double certified_bias = 1;
  bool full_group = false;
};
// max over nontrivial characters of |sum chi(s)| / |S|, exact over the whole character group
double exact_bias(std::uint32_t p, std::size_t dim, const std::vector<std::vector<std::uint32_t>>& elements);
LowBiasSet low_bias_set(std::uint32_t p, std::size_t dim, double target_bias, std::uint64_t budget, std::mt19937_64& rng);

// complete bipartite multigraph with n0 vertices per side, Delta/n0 parallel edges per pair,
// edge values 0, 1, ..., n0*Delta - 1 in enumeration order
MultiGraph build_base_graph(const Field& f, std::size_t n0, std::size_t delta);

class LiftedGraph {
 public:
  LiftedGraph() = default;
  LiftedGraph(const MultiGraph& base, const VertexLabeling& labeling);

  const MultiGraph& base() const { return base_; }
  const VertexLabeling& labeling() const { return labeling_; }
  const Field& field() const { return base_.value_field(); }
  const VectorGroup& group() const { return grp_; }
  std::size_t t() const { return labeling_.t; }
  const MultiGraph& lifted() const { return lifted_; }

  // lifted vertex (v, x) is the coset (0, x) + span{(1, L_V(v))}
  std::uint64_t vertex_index(std::uint32_t v, std::uint64_t x) const { return v * grp_.size() + x; }
  std::uint64_t edge_index(std::uint32_t e, std::uint64_t x) const { return e * grp_.size() + x; }
  std::uint32_t base_vertex(std::uint64_t vbar) const { return static_cast<std::uint32_t>(vbar / grp_.size()); }
  std::uint32_t base_edge(std::uint64_t ebar) const { return static_cast<std::uint32_t>(ebar / grp_.size()); }
  std::uint64_t offset(std::uint64_t idx) const { return idx % grp_.size(); }
  // coset of the point (e, x) along the line direction of v
  std::uint64_t line_through(std::uint32_t v, elem e, std::uint64_t x) const;
  std::uint64_t endpoint(std::uint64_t ebar, int b) const;
  // the lifted edge at value coordinate e of the line vbar
  std::uint64_t edge_on_line(std::uint64_t vbar, std::uint32_t e) const;
  std::uint64_t act_vertex(std::uint64_t y, std::uint64_t vbar) const;
  std::uint64_t act_edge(std::uint64_t y, std::uint64_t ebar) const;

  // e * (L_V(v0(e)) - L_V(v1(e)))
  std::vector<std::uint64_t> lift_labels() const;
  bool verify_isomorphism() const;
  bool verify_free_action(std::uint64_t max_edges = 100000) const;

 private:
  MultiGraph base_;
  VertexLabeling labeling_;
  VectorGroup grp_;
  std::vector<std::uint64_t> label_idx_;
  MultiGraph lifted_;
};

// lambda_2 of a lift from the character decomposition of its spectrum
double lifted_lambda2(const MultiGraph& base, const VectorGroup& grp, const std::vector<std::uint64_t>& labels);

struct SearchResult {
  std::size_t best = 0;
  VertexLabeling labeling;
  double lambda2 = 0;
  bool success = false;
  std::vector<double> values;
};
SearchResult search_labels(const MultiGraph& base, const std::vector<VertexLabeling>& candidates, double eta);
// one labeling per element of a low-bias set over (F_q^t)^V
std::vector<VertexLabeling> labelings_from_set(const Field& f, std::size_t t, std::size_t num_vertices,
                                               const LowBiasSet& set);

nlohmann::json graph_to_json(const MultiGraph& g);
MultiGraph graph_from_json(const nlohmann::json& j);
nlohmann::json labeling_to_json(const Field& f, const VertexLabeling& l);
VertexLabeling labeling_from_json(const Field& f, const nlohmann::json& j);

}  // namespace rmlift
