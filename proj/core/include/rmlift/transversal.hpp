#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "rmlift/complex.hpp"
#include "rmlift/planted.hpp"

namespace rmlift {

// Product code family C^(h) = F'^{(x) h-1} (x) F (x) F'^{(x) r-h}
//   F  = kind-3 planted complex with ell, F' = kind-2 planted complex with ell'
// Cells of the cube complex Y = Xbar^r are tuples (x_1, ..., x_r) of lifted vertices
// and edges; the level-1 cochains live on cells with exactly one edge coordinate.

struct FamilyFeasibility {
  bool ok = true;
  std::uint32_t a = 0;
  std::uint64_t threshold = 0;  // t(q-1) + |E| - ell + (r-1) ell'
  std::vector<std::string> violated;
  std::string detail;
};

// numeric check of every degree inequality the construction relies on
FamilyFeasibility family_feasibility(const LiftedGraph& lift, std::size_t r, std::uint32_t ell, std::uint32_t ell_prime,
                                     std::optional<std::uint32_t> a = std::nullopt);

// restriction data of a 1-dimensional factor complex
struct FactorData {
  std::size_t m = 0, nv = 0, ne = 0;
  std::array<std::vector<std::uint32_t>, 2> ends;  // ends[b][y] = endpoint b of lifted edge y
  std::array<Vec, 2> h;                            // h[b][y*m+j] = h_{ends[b][y]}[j][pos of y]
  SparseMatrix bd;                                 // boundary(1): (vertex, j) x edges, signed
};

FactorData factor_data(const RMPlantedComplex& cx);

struct ProductCodeFamily {
  std::size_t r = 2;
  std::uint32_t ell = 0, ell_prime = 0, a = 0;
  std::uint64_t threshold = 0;
  LiftedGraph lift;
  RMPlantedComplex big, small;  // kind 3 with ell, kind 2 with ell'
  FactorData big_data, small_data;
  std::vector<Vec> a_sets;  // A_0 (one nonzero edge value), A_1..A_t (a nonzero field elements each)
  std::vector<ChainComplex> complexes;  // C^(1..r); empty when too large to materialize
  std::uint64_t n_qudits = 0;           // dim of level 1
  FamilyFeasibility feasibility;

  const RMPlantedComplex& factor(std::size_t h, std::size_t k) const { return h == k ? big : small; }
  const FactorData& data(std::size_t h, std::size_t k) const { return h == k ? big_data : small_data; }
  bool materialized() const { return !complexes.empty(); }
  // |E| q^t
  std::size_t num_edges() const { return big_data.ne; }
};

// throws infeasible (naming the violated inequality) unless the degree conditions hold;
// the r tensor products are materialized when their total size is within the budget
ProductCodeFamily build_family(const LiftedGraph& lift, std::size_t r, std::uint32_t ell, std::uint32_t ell_prime,
                               std::optional<std::uint32_t> a = std::nullopt, std::uint64_t materialize_budget = 400000);

// closed-form level-1 dimension of C^(h)
std::uint64_t family_qudits(const ProductCodeFamily& fam);
// Kuenneth lower bound C(ell+t, t) C(ell'-1+t, t)^{r-1} on dim H^1
std::uint64_t family_dimension_bound(const ProductCodeFamily& fam);

// index of a cell of C^(h): levels[k] in {0,1}, idx[k] indexes level levels[k] of factor (h, k)
std::uint64_t cell_index(const ProductCodeFamily& fam, std::size_t h, const std::vector<int>& levels,
                         const std::vector<std::uint64_t>& idx);

// signed permutation P with P d = d' P carrying C^(h1) to C^(h2) by reordering tensor factors;
// perm[level][x] = image index, sign[level][x] = +-1
struct ComplexIsomorphism {
  std::vector<std::vector<std::uint64_t>> perm;
  std::vector<std::vector<int>> sign;
};
ComplexIsomorphism family_isomorphism(const ProductCodeFamily& fam, std::size_t h1, std::size_t h2);
bool verify_isomorphism(const ChainComplex& a, const ChainComplex& b, const ComplexIsomorphism& iso);

// A level-1 cochain of C^(h) as a sum of pure tensors. A term with direction d lives on
// cells whose coordinate d is an edge: parts[d] is a vector over lifted edges and parts[k]
// (k != d) a vector over level 0 of the factor complex.
struct TensorTerm {
  std::size_t dir = 0;
  elem coef = 1;
  std::vector<Vec> parts;
};
struct SlotCochain {
  std::vector<TensorTerm> terms;
};

Vec materialize(const ProductCodeFamily& fam, std::size_t h, const SlotCochain& c);
// delta_0 of the level-0 basis vector with factor indices idx[k] (vertex * m + j)
SlotCochain vertex_coboundary(const ProductCodeFamily& fam, std::size_t h, const std::vector<std::uint64_t>& idx);

// generators (x)_k iota^{[k = h]}(f_k) with f_k in L^{[k = h]}
struct HPrimeGenerator {
  std::vector<Exponent> monomials;  // f_k per coordinate, in variables U_0..U_t
  SlotCochain cochain;
};
std::vector<HPrimeGenerator> hprime_generators(const ProductCodeFamily& fam, std::size_t h);
// M = U_0^{|E|-1} prod_i U_i^{q - floor(ell/2t)}
Exponent family_monomial_m(const ProductCodeFamily& fam);

// Local cup product on the r-cube

struct LocalEdge {
  std::uint32_t start = 0;  // bit k set when coordinate k is 1
  std::size_t dir = 0;
};
int permutation_sign(const std::vector<std::size_t>& perm);
// edges of the monotone path 0^r -> 1^r flipping coordinates perm[0], perm[1], ...
std::vector<LocalEdge> xi_loc(std::size_t r, const std::vector<std::size_t>& perm);
// local edge index dir * 2^{r-1} + (start without bit dir)
std::size_t local_edge_index(std::size_t r, const LocalEdge& e);
// sum over permutations of sign * prod_i values[i][edge i of the path]
elem xi_loc_eval(const Field& f, std::size_t r, const std::vector<Vec>& values);

// The form zeta = alpha o xi

// alpha is a product of one functional per cube coordinate; this is that functional over
// lifted edges: interpolate on E x F_q^t, keep monomials of total degree >= threshold,
// sum over A
Vec alpha_slot(const ProductCodeFamily& fam);
// the same functional with an explicit threshold (0 keeps everything)
Vec alpha_slot(const ProductCodeFamily& fam, std::uint64_t threshold);

// zeta on pure-tensor cochains by per-coordinate contraction
elem zeta_eval(const ProductCodeFamily& fam, const Vec& alpha, const std::vector<SlotCochain>& cochains);

// explicit path over materialized families: xi over cubes (slot 0 slowest, edge order per
// coordinate), alpha over cubes by full interpolation of every indicator vector
Vec xi_explicit(const ProductCodeFamily& fam, const std::vector<Vec>& cochains);
Vec alpha_explicit(const ProductCodeFamily& fam, std::uint64_t budget);
elem zeta_explicit(const ProductCodeFamily& fam, const Vec& alpha_cubes, const std::vector<Vec>& cochains);

// Multilinear forms given by entries

struct MultilinearForm {
  Field field;
  std::vector<std::size_t> dims;
  std::map<std::vector<std::uint32_t>, elem> entries;  // nonzero coefficients only

  std::size_t r() const { return dims.size(); }
  elem eval(const std::vector<Vec>& c) const;
  void add(const std::vector<std::uint32_t>& idx, elem v);
};

// zeta of a materialized family as an entries form
MultilinearForm zeta_entries(const ProductCodeFamily& fam, const Vec& alpha, std::uint64_t budget);
// max over slots and basis elements of the number of entries containing it
std::size_t zeta_locality(const MultilinearForm& form);
// locality bound from the cube structure: Delta^{r-1} (r-1)! times the largest local dimension product
std::uint64_t zeta_locality_bound(const ProductCodeFamily& fam);

// sum_j prod_h <lambda[j][h], c_h>
MultilinearForm sum_of_products(const Field& f, const std::vector<std::size_t>& dims,
                                const std::vector<std::vector<Vec>>& lambda);

// Coboundary invariance and subrank

struct InvarianceReport {
  bool ok = true;
  std::uint64_t tuples = 0;  // generator tuples covered
  std::size_t subsets = 0;   // slot subsets S examined
  bool complete = true;      // every nonempty S was covered within the budget
  std::string witness;
};

// every tuple with single-vertex coboundaries in a nonempty set S of slots and H'
// generators elsewhere; each S is decided exactly by a factored zero test
InvarianceReport coboundary_invariance_check(const ProductCodeFamily& fam, const Vec& alpha, std::uint64_t budget);
// the same tuples evaluated one by one through materialized cochains
InvarianceReport coboundary_invariance_explicit(const ProductCodeFamily& fam, std::uint64_t budget);

struct SubrankReport {
  bool ok = true;
  std::size_t s = 0;
  std::uint64_t checked = 0;
  bool exhaustive = true;
  std::uint64_t seed = 0;
  std::string witness;
};

// phi^(h)(1_y) for y in A^r, in the order of A^r (slot 0 slowest)
std::vector<std::vector<SlotCochain>> subrank_vectors(const ProductCodeFamily& fam);
// zeta(phi(1_y1), ..., phi(1_yr)) = [y1 = ... = yr]; exhaustive when s^r <= exhaustive_limit,
// else seeded samples
SubrankReport subrank_certificate(const ProductCodeFamily& fam, const Vec& alpha, std::uint64_t samples,
                                  std::uint64_t seed, std::uint64_t exhaustive_limit = 100000);

// Generic instances: complexes, a form on level `level`, H' generators and a certificate

struct FormInstance {
  std::vector<ChainComplex> complexes;
  std::size_t level = 1;
  MultilinearForm form;
  std::vector<std::vector<Vec>> hprime;       // cocycles spanning H' per slot
  std::vector<std::vector<Vec>> certificate;  // s cocycles per slot
};

InvarianceReport coboundary_invariance_entries(const FormInstance& inst, std::uint64_t budget);
SubrankReport subrank_check_entries(const FormInstance& inst);

// form sum_j prod_h <lambda_j^(h), c_h> with cycles lambda dual to cocycle representatives
FormInstance diagonal_form(const std::vector<ChainComplex>& complexes, std::size_t level, std::size_t s);

struct RelationReport {
  bool ok = true;
  std::vector<std::pair<std::string, bool>> relations;
  std::string detail;
};

// view over GF(p^d) inside the base field: coordinates (x, i) over the basis 1, theta, ...,
// and zeta~ = phi o zeta
FormInstance alphabet_reduce(const FormInstance& inst, std::uint32_t sub_degree);
RelationReport alphabet_relations(const FormInstance& before, const FormInstance& after, std::uint64_t budget);

// 2-dimensional complexes: spread each level-`level` coordinate over w copies tied by
// repetition checks, so that every copy enters at most one entry of the form
FormInstance locality_reduce(const FormInstance& inst);
RelationReport locality_relations(const FormInstance& before, const FormInstance& after, std::uint64_t budget);

// CSS codes

struct CSSCode {
  Field field;
  SparseMatrix hx, hz;
  std::size_t n() const { return hx.cols(); }
};

// H_X = d_i, H_Z = d_{i+1}^T; the code of level i of the cochain complex
CSSCode css_extract(const ChainComplex& c, std::size_t level);
ChainComplex css_complex(const CSSCode& code);

struct CSSParams {
  std::size_t n = 0, k = 0;
  std::uint64_t d = kInfinity, dx = kInfinity, dz = kInfinity;
  bool exact = true;
};
CSSParams css_params(const CSSCode& code, std::uint64_t budget);

nlohmann::json css_to_json(const CSSCode& code);
CSSCode css_from_json(const nlohmann::json& j);

struct StatevectorReport {
  bool ok = true;
  double max_error = 0;
  std::size_t amplitudes = 0;
  std::size_t trials = 0;
};

// encodes random logical states into the r codes, applies one C^{r-1}Z^a gate per form
// entry, and compares with encoding after logical C^{r-1}Z on the certificate pairs
StatevectorReport statevector_oracle(const std::vector<CSSCode>& codes, const MultilinearForm& form,
                                     const std::vector<std::vector<Vec>>& certificate, std::size_t trials,
                                     std::uint64_t seed, double tol = 1e-8);

nlohmann::json form_to_json(const MultilinearForm& form);
MultilinearForm form_from_json(const nlohmann::json& j);
// factored description of zeta: r copies of the per-coordinate alpha functional
nlohmann::json factored_form_to_json(const ProductCodeFamily& fam, const Vec& alpha);

}  // namespace rmlift
