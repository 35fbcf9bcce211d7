#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "rmlift/field.hpp"
#include "rmlift/graph.hpp"
#include "rmlift/linalg.hpp"
#include "rmlift/poly.hpp"

namespace rmlift {

// Chain complex C_0 <- C_1 <- ... <- C_r over GF(q) with chosen bases.
// boundary(i) is the dim(i-1) x dim(i) matrix of d_i; coboundary(i) = boundary(i+1)^T.
// Optional per-level metadata: basis labels, block ids (the incidence element owning each
// basis vector, used by the block Hamming norm) and cubical types in {0,1,*}^r.
class ChainComplex {
 public:
  ChainComplex() = default;
  ChainComplex(const Field& f, std::vector<std::size_t> dims, std::vector<SparseMatrix> boundaries);

  const Field& field() const { return f_; }
  std::size_t top() const { return dims_.empty() ? 0 : dims_.size() - 1; }
  std::size_t num_levels() const { return dims_.size(); }
  std::size_t dim(std::size_t i) const { return i < dims_.size() ? dims_[i] : 0; }
  const std::vector<std::size_t>& dims() const { return dims_; }
  // zero matrix of the right shape outside 1..top
  SparseMatrix boundary(std::size_t i) const;
  SparseMatrix coboundary(std::size_t i) const { return boundary(i + 1).transpose(); }

  void set_labels(std::vector<std::vector<std::string>> labels);
  void set_blocks(std::vector<std::vector<std::uint32_t>> blocks);
  void set_types(std::vector<std::vector<std::string>> types);
  bool has_labels() const { return !labels_.empty(); }
  bool has_blocks() const { return !blocks_.empty(); }
  bool has_types() const { return !types_.empty(); }
  std::string label(std::size_t level, std::size_t i) const;
  std::uint32_t block(std::size_t level, std::size_t i) const;
  const std::string& type(std::size_t level, std::size_t i) const { return types_.at(level).at(i); }
  const std::vector<std::vector<std::string>>& labels() const { return labels_; }
  const std::vector<std::vector<std::uint32_t>>& blocks() const { return blocks_; }
  const std::vector<std::vector<std::string>>& types() const { return types_; }

  // throws CheckFailed when some d_i d_{i+1} is nonzero
  void validate() const;
  bool is_valid() const;

 private:
  Field f_;
  std::vector<std::size_t> dims_;
  std::vector<SparseMatrix> bd_;  // bd_[i-1] = d_i
  std::vector<std::vector<std::string>> labels_;
  std::vector<std::vector<std::uint32_t>> blocks_;
  std::vector<std::vector<std::string>> types_;
};

// cochain complex read as a chain complex: level j of the dual is level r-j
ChainComplex dual_complex(const ChainComplex& c);

// 1-dimensional cochain complex of a parity check matrix: C^0 = F^n, C^1 = F^m, delta_0 = H
ChainComplex complex_from_parity(const Field& f, const SparseMatrix& h);
// 2-dimensional cochain complex of a CSS pair: delta_0 = H_X^T, delta_1 = H_Z
ChainComplex complex_from_css(const Field& f, const SparseMatrix& hx, const SparseMatrix& hz);

struct Incidence {
  std::uint32_t hi = 0, lo = 0;  // hi in X(i+1), lo in X(i)
  int sign = 1;
};

struct IncidenceComplex {
  std::vector<std::size_t> sizes;                // |X(i)|
  std::vector<std::vector<Incidence>> relations;  // relations[i] between X(i+1) and X(i)
  std::vector<std::vector<std::string>> types;    // optional cubical types per element

  // incidence numbers in {-1,1} and delta delta = 0 over the integers
  void validate() const;
};

IncidenceComplex incidence_from_graph(const MultiGraph& g);

// F_x dimensions per element and the maps F_{x'<-x} (dim F_x' x dim F_x) aligned with relations
struct LocalSystem {
  std::vector<std::vector<std::size_t>> dims;
  std::vector<std::vector<Mat>> maps;
};

// composition law on every length-2 chain: all paths x'' > x' > x give the same map
void check_composition(const Field& f, const IncidenceComplex& inc, const LocalSystem& loc);

ChainComplex sheaf_complex(const Field& f, const IncidenceComplex& inc, const LocalSystem& loc);

// h[v] is m_v x deg(v) with columns ordered as g.incident(v)
ChainComplex sipser_spielman(const Field& f, const MultiGraph& g, const std::vector<Mat>& h);

std::size_t homology_dim(const ChainComplex& c, std::size_t i);
std::size_t cohomology_dim(const ChainComplex& c, std::size_t i);
// cycles of level i completing a basis of B_i to a basis of Z_i
std::vector<SparseVec> homology_basis(const ChainComplex& c, std::size_t i);
std::vector<SparseVec> cohomology_basis(const ChainComplex& c, std::size_t i);
bool is_cycle(const ChainComplex& c, std::size_t i, const SparseVec& v);
bool is_boundary(const ChainComplex& c, std::size_t i, const SparseVec& v);
bool is_cocycle(const ChainComplex& c, std::size_t i, const SparseVec& v);
bool is_coboundary(const ChainComplex& c, std::size_t i, const SparseVec& v);
std::int64_t euler_characteristic(const ChainComplex& c);

enum class DistanceMode { exact, lower_bound };

struct DistanceResult {
  std::uint64_t value = kInfinity;  // exact distance, or a lower bound when !exact
  bool exact = true;
  std::string method;
};

// min weight of Z_i \ B_i; block_norm counts distinct blocks instead of coordinates
DistanceResult systolic_distance(const ChainComplex& c, std::size_t i, DistanceMode mode, std::uint64_t budget,
                                 bool block_norm = false);
DistanceResult cosystolic_distance(const ChainComplex& c, std::size_t i, DistanceMode mode, std::uint64_t budget,
                                   bool block_norm = false);

// exact ratio num/den; den == 0 marks an empty minimization domain
struct Ratio {
  std::uint64_t num = 0, den = 0;
  bool infinite() const { return den == 0; }
  double value() const;
  bool operator<(const Ratio& o) const;
  bool operator==(const Ratio& o) const { return num * o.den == o.num * den && infinite() == o.infinite(); }
};

// min over x outside ker M of |M x| / dist(x, ker M), exhaustive over F_q^{cols}
Ratio kernel_expansion(const Field& f, const SparseMatrix& m, std::uint64_t budget);
Ratio cycle_expansion(const ChainComplex& c, std::size_t i, std::uint64_t budget);
Ratio cocycle_expansion(const ChainComplex& c, std::size_t i, std::uint64_t budget);

struct SSBound {
  double d1 = 0, d0 = 0;
  bool d1_vacuous = true, d0_vacuous = true;
};
SSBound ss_distance_bound(double lambda2, std::size_t delta, std::size_t num_vertices, std::uint64_t d_loc,
                          std::uint64_t d_loc_dual);
SSBound ss_distance_bound(const MultiGraph& g, std::uint64_t d_loc, std::uint64_t d_loc_dual);

// start of block A_j (x) B_{i-j} inside level i of A (x) B
std::size_t tensor_offset(const ChainComplex& a, const ChainComplex& b, std::size_t i, std::size_t j);
ChainComplex tensor_product(const ChainComplex& a, const ChainComplex& b);

// Free action of F_q^t on the bases: perm[level][g * dim + x] is the image of x under g.
struct GroupAction {
  VectorGroup group;
  std::vector<std::vector<std::uint32_t>> perm;

  std::uint32_t act(std::size_t level, std::uint64_t g, std::uint32_t x) const;
  // permutations, homomorphism on prime-field generators, freeness, commutation with d
  void validate(const ChainComplex& c) const;
};

// balanced product; basis elements are the lexicographically least pair of each orbit
ChainComplex balanced_product(const ChainComplex& a, const GroupAction& ga, const ChainComplex& b,
                              const GroupAction& gb);

bool kunneth_check(const ChainComplex& a, const ChainComplex& b, std::size_t i);

struct ProductDistanceReport {
  bool ok = false;
  std::uint64_t product = kInfinity;
  std::uint64_t bound = kInfinity;
};
// cosystolic distance of A (x) B at level i against min_j max(d^j(A), d^{i-j}(B))
ProductDistanceReport product_distance_check(const ChainComplex& a, const ChainComplex& b, std::size_t i,
                                             std::uint64_t budget);

std::size_t locality(const ChainComplex& c);

// a vector in {0,1,*}^r with as many stars as the cell level
struct CubicalType {
  std::string t;
  std::size_t level() const;
  bool valid(std::size_t expected_level) const;
};

nlohmann::json complex_to_json(const ChainComplex& c);
ChainComplex complex_from_json(const nlohmann::json& j);

}  // namespace rmlift
