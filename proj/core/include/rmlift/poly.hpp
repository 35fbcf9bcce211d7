#pragma once

#include <cstdint>
#include <limits>
#include <map>
#include <optional>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "rmlift/field.hpp"
#include "rmlift/linalg.hpp"

namespace rmlift {

using Exponent = std::vector<std::uint32_t>;
using Point = std::vector<elem>;

std::uint64_t total_degree(const Exponent& e);

// graded-lex: by total degree, then lexicographically
struct GradedLex {
  bool operator()(const Exponent& a, const Exponent& b) const;
};

class Polynomial {
 public:
  using Terms = std::map<Exponent, elem, GradedLex>;

  Polynomial() = default;
  Polynomial(const Field& f, std::size_t num_vars) : f_(f), t_(num_vars) {}
  static Polynomial constant(const Field& f, std::size_t num_vars, elem c);
  static Polynomial monomial(const Field& f, const Exponent& e, elem c = 1);
  // X_i as a polynomial in num_vars variables
  static Polynomial variable(const Field& f, std::size_t num_vars, std::size_t i);

  const Field& field() const { return f_; }
  std::size_t num_vars() const { return t_; }
  const Terms& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  // -1 for the zero polynomial
  std::int64_t degree() const;
  std::uint32_t degree_in(std::size_t var) const;
  elem coef(const Exponent& e) const;

  void add_term(const Exponent& e, elem c);
  elem eval(const Point& x) const;

  Polynomial operator+(const Polynomial& o) const;
  Polynomial operator-(const Polynomial& o) const;
  Polynomial operator*(const Polynomial& o) const;
  Polynomial scaled(elem c) const;
  Polynomial pow(std::uint32_t e) const;
  // substitute polynomials (all in a common ring) for the variables
  Polynomial compose(const std::vector<Polynomial>& subs) const;
  bool operator==(const Polynomial& o) const { return t_ == o.t_ && terms_ == o.terms_; }

 private:
  Field f_;
  std::size_t t_ = 0;
  Terms terms_;
};

// exponents of total degree < bound in graded-lex order
std::vector<Exponent> monomials_below(std::size_t num_vars, std::uint32_t bound);
// exponents with e_i < caps[i] in graded-lex order
std::vector<Exponent> monomials_in_box(const std::vector<std::uint32_t>& caps);

// (alpha_i f(E_i))_i; an empty alpha means all ones
Vec evaluate(const Polynomial& f, const std::vector<Point>& points, const Vec& alpha = {});
Vec evaluate_univariate(const Field& fld, const Polynomial& f, const Vec& points, const Vec& alpha = {});

class LinearCode {
 public:
  enum class Form { generator, parity };

  LinearCode() = default;
  // rows are rank-reduced; dimension is verified against the matrix rank
  static LinearCode from_generator(const Field& f, const SparseMatrix& g);
  static LinearCode from_parity(const Field& f, const SparseMatrix& h);
  static LinearCode full(const Field& f, std::size_t n);
  static LinearCode zero(const Field& f, std::size_t n);

  const Field& field() const { return f_; }
  std::size_t length() const { return n_; }
  std::size_t dimension() const { return k_; }
  Form form() const { return form_; }
  const SparseMatrix& matrix() const { return m_; }

  SparseMatrix generator() const;
  SparseMatrix parity() const;
  LinearCode dual() const;
  bool contains(const SparseVec& v) const;
  bool contains(const Vec& v) const { return contains(to_sparse(v)); }
  bool contains(const LinearCode& sub) const;
  bool operator==(const LinearCode& o) const;

 private:
  Field f_;
  std::size_t n_ = 0, k_ = 0;
  Form form_ = Form::generator;
  SparseMatrix m_;
};

inline constexpr std::uint64_t kInfinity = std::numeric_limits<std::uint64_t>::max();

// minimum nonzero weight by enumerating q^k codewords; kInfinity for the zero code
std::uint64_t min_distance_enumerate(const LinearCode& c, std::uint64_t budget);
// minimum weight as n - max{|S| : rank(G_S) < k} over column subsets S (n <= 20)
std::uint64_t min_distance_subsets(const LinearCode& c);

struct EvaluationCode {
  Field field;
  Vec points;  // univariate evaluation set E
  Vec alpha;
  std::uint32_t ell = 0;
  Vec roots;  // Z
  LinearCode code;
};

// ev_{E,alpha}(F_q[X]^{<ell}_Z) with basis rows ev(P_Z X^j), j < ell - |Z|
EvaluationCode rs_code(const Field& f, const Vec& points, const Vec& alpha, std::uint32_t ell, const Vec& roots = {});

// beta with ev_{E,alpha}(deg < m)^perp = ev_{E,beta}(deg < |E| - m), normalized beta_0 = 1
Vec rs_dual(const Field& f, const Vec& points, const Vec& alpha, std::uint32_t m);

// beta with ev_{E,alpha}(F_q[X]^{<m}_Z) = ev_{E,beta}(F_q[X]^{<m-|Z|})
Vec shortened_twist(const Field& f, const Vec& points, const Vec& alpha, const Vec& roots);

Vec star_product(const Field& f, const Vec& a, const Vec& b);
SparseVec star_product(const Field& f, const SparseVec& a, const SparseVec& b);
LinearCode span_star(const LinearCode& a, const LinearCode& b);

// inverse of the Vandermonde matrix V[x][k] = points[x]^k, so coefficients = Vinv * values
Mat inverse_vandermonde(const Field& f, const Vec& points);

// unique polynomial with deg_{X_j} < |axes[j]| matching values on the grid; values are
// row-major with the last axis fastest
Polynomial interpolate_grid(const Field& f, const std::vector<Vec>& axes, const Vec& values);

// drop every monomial whose degree within some group reaches that group's threshold
Polynomial truncate_high_degree(const Polynomial& p, const std::vector<std::vector<std::size_t>>& groups,
                                const std::vector<std::uint64_t>& thresholds);

nlohmann::json poly_to_json(const Polynomial& p);
Polynomial poly_from_json(const Field& f, std::size_t num_vars, const nlohmann::json& j);

}  // namespace rmlift
