#include "rmlift/poly.hpp"

#include <algorithm>
#include <numeric>

#include <nlohmann/json.hpp>

#include "rmlift/error.hpp"

namespace rmlift {

std::uint64_t total_degree(const Exponent& e) { return std::accumulate(e.begin(), e.end(), std::uint64_t{0}); }

bool GradedLex::operator()(const Exponent& a, const Exponent& b) const {
  auto da = total_degree(a), db = total_degree(b);
  if (da != db) return da < db;
  return a < b;
}

Polynomial Polynomial::constant(const Field& f, std::size_t num_vars, elem c) {
  Polynomial p(f, num_vars);
  p.add_term(Exponent(num_vars, 0), c);
  return p;
}

Polynomial Polynomial::monomial(const Field& f, const Exponent& e, elem c) {
  Polynomial p(f, e.size());
  p.add_term(e, c);
  return p;
}

Polynomial Polynomial::variable(const Field& f, std::size_t num_vars, std::size_t i) {
  require(i < num_vars, "DimensionMismatch", "variable index out of range");
  Exponent e(num_vars, 0);
  e[i] = 1;
  return monomial(f, e);
}

std::int64_t Polynomial::degree() const {
  if (terms_.empty()) return -1;
  return static_cast<std::int64_t>(total_degree(terms_.rbegin()->first));
}

std::uint32_t Polynomial::degree_in(std::size_t var) const {
  std::uint32_t d = 0;
  for (auto& [e, c] : terms_) d = std::max(d, e[var]);
  return d;
}

elem Polynomial::coef(const Exponent& e) const {
  auto it = terms_.find(e);
  return it == terms_.end() ? 0 : it->second;
}

void Polynomial::add_term(const Exponent& e, elem c) {
  require(e.size() == t_, "DimensionMismatch", "exponent length differs from number of variables");
  if (c == 0) return;
  auto [it, inserted] = terms_.emplace(e, c);
  if (!inserted) {
    it->second = f_.add(it->second, c);
    if (it->second == 0) terms_.erase(it);
  }
}

elem Polynomial::eval(const Point& x) const {
  require(x.size() == t_, "DimensionMismatch", "point dimension differs from number of variables");
  elem acc = 0;
  for (auto& [e, c] : terms_) {
    elem v = c;
    for (std::size_t i = 0; i < t_ && v; ++i)
      if (e[i]) v = f_.mul(v, f_.pow(x[i], e[i]));
    acc = f_.add(acc, v);
  }
  return acc;
}

Polynomial Polynomial::operator+(const Polynomial& o) const {
  require(t_ == o.t_, "DimensionMismatch", "polynomials in different rings");
  Polynomial r = *this;
  for (auto& [e, c] : o.terms_) r.add_term(e, c);
  return r;
}

Polynomial Polynomial::operator-(const Polynomial& o) const { return *this + o.scaled(f_.neg(1)); }

Polynomial Polynomial::operator*(const Polynomial& o) const {
  require(t_ == o.t_, "DimensionMismatch", "polynomials in different rings");
  Polynomial r(f_, t_);
  for (auto& [e1, c1] : terms_)
    for (auto& [e2, c2] : o.terms_) {
      Exponent e(t_);
      for (std::size_t i = 0; i < t_; ++i) e[i] = e1[i] + e2[i];
      r.add_term(e, f_.mul(c1, c2));
    }
  return r;
}

Polynomial Polynomial::scaled(elem c) const {
  Polynomial r(f_, t_);
  if (c == 0) return r;
  for (auto& [e, v] : terms_) r.terms_.emplace(e, f_.mul(v, c));
  return r;
}

Polynomial Polynomial::pow(std::uint32_t e) const {
  Polynomial r = constant(f_, t_, 1), b = *this;
  while (e) {
    if (e & 1) r = r * b;
    e >>= 1;
    if (e) b = b * b;
  }
  return r;
}

Polynomial Polynomial::compose(const std::vector<Polynomial>& subs) const {
  require(subs.size() == t_, "DimensionMismatch", "substitution count differs from number of variables");
  std::size_t nt = subs.empty() ? 0 : subs[0].num_vars();
  Polynomial r(f_, nt);
  for (auto& [e, c] : terms_) {
    Polynomial term = constant(f_, nt, c);
    for (std::size_t i = 0; i < t_; ++i)
      if (e[i]) term = term * subs[i].pow(e[i]);
    r = r + term;
  }
  return r;
}

namespace {

void gen_below(std::size_t t, std::uint32_t bound, Exponent& cur, std::size_t i, std::uint32_t used,
               std::vector<Exponent>& out) {
  if (i == t) {
    out.push_back(cur);
    return;
  }
  for (std::uint32_t d = 0; used + d < bound; ++d) {
    cur[i] = d;
    gen_below(t, bound, cur, i + 1, used + d, out);
  }
  cur[i] = 0;
}

}  // namespace

std::vector<Exponent> monomials_below(std::size_t num_vars, std::uint32_t bound) {
  std::vector<Exponent> out;
  if (bound == 0) return out;
  if (num_vars == 0) return {Exponent{}};
  Exponent cur(num_vars, 0);
  gen_below(num_vars, bound, cur, 0, 0, out);
  std::sort(out.begin(), out.end(), GradedLex{});
  return out;
}

std::vector<Exponent> monomials_in_box(const std::vector<std::uint32_t>& caps) {
  std::vector<Exponent> out;
  for (auto c : caps)
    if (c == 0) return out;
  Exponent cur(caps.size(), 0);
  while (true) {
    out.push_back(cur);
    std::size_t i = 0;
    while (i < caps.size() && ++cur[i] == caps[i]) cur[i++] = 0;
    if (i == caps.size()) break;
  }
  std::sort(out.begin(), out.end(), GradedLex{});
  return out;
}

Vec evaluate(const Polynomial& f, const std::vector<Point>& points, const Vec& alpha) {
  require(alpha.empty() || alpha.size() == points.size(), "DimensionMismatch", "twist length differs from point count");
  Vec out(points.size());
  const Field& fld = f.field();
  for (std::size_t i = 0; i < points.size(); ++i) {
    require(points[i].size() == f.num_vars(), "DimensionMismatch", "point dimension differs from number of variables");
    elem a = alpha.empty() ? 1 : alpha[i];
    require(a != 0, "ZeroTwist", "twist coefficients must be nonzero");
    out[i] = fld.mul(a, f.eval(points[i]));
  }
  return out;
}

Vec evaluate_univariate(const Field& fld, const Polynomial& f, const Vec& points, const Vec& alpha) {
  std::vector<Point> pts;
  for (elem e : points) pts.push_back({e});
  (void)fld;
  return evaluate(f, pts, alpha);
}

namespace {

SparseMatrix independent_rows(const Field& f, const SparseMatrix& m, std::size_t& rk) {
  EchelonBasis eb(f, m.cols());
  std::vector<SparseVec> keep;
  for (std::size_t i = 0; i < m.rows(); ++i)
    if (eb.insert(m.row(i))) keep.push_back(m.row(i));
  rk = keep.size();
  SparseMatrix out(keep.size(), m.cols());
  for (std::size_t i = 0; i < keep.size(); ++i) out.set_row(i, keep[i]);
  return out;
}

SparseMatrix rows_matrix(const std::vector<SparseVec>& rows, std::size_t n) {
  SparseMatrix m(rows.size(), n);
  for (std::size_t i = 0; i < rows.size(); ++i) m.set_row(i, rows[i]);
  return m;
}

}  // namespace

LinearCode LinearCode::from_generator(const Field& f, const SparseMatrix& g) {
  LinearCode c;
  c.f_ = f;
  c.n_ = g.cols();
  c.form_ = Form::generator;
  c.m_ = independent_rows(f, g, c.k_);
  if (rank(f, c.m_) != c.k_) fail(ErrorKind::internal, "RankMismatch", "generator rank differs from row count");
  return c;
}

LinearCode LinearCode::from_parity(const Field& f, const SparseMatrix& h) {
  LinearCode c;
  c.f_ = f;
  c.n_ = h.cols();
  c.form_ = Form::parity;
  std::size_t rk = 0;
  c.m_ = independent_rows(f, h, rk);
  c.k_ = c.n_ - rk;
  return c;
}

LinearCode LinearCode::full(const Field& f, std::size_t n) { return from_generator(f, SparseMatrix::identity(n)); }

LinearCode LinearCode::zero(const Field& f, std::size_t n) { return from_generator(f, SparseMatrix(0, n)); }

SparseMatrix LinearCode::generator() const {
  if (form_ == Form::generator) return m_;
  return rows_matrix(kernel(f_, m_), n_);
}

SparseMatrix LinearCode::parity() const {
  if (form_ == Form::parity) return m_;
  return rows_matrix(kernel(f_, m_), n_);
}

LinearCode LinearCode::dual() const { return from_generator(f_, parity()); }

bool LinearCode::contains(const SparseVec& v) const {
  if (form_ == Form::parity) return m_.apply(f_, v).empty();
  return in_row_space(f_, m_, v);
}

bool LinearCode::contains(const LinearCode& sub) const {
  require(sub.n_ == n_, "LengthMismatch", "codes of different length");
  SparseMatrix g = sub.generator();
  if (form_ == Form::parity) return m_.multiply(f_, g.transpose()).is_zero();
  EchelonBasis eb(f_, n_);
  for (std::size_t i = 0; i < m_.rows(); ++i) eb.insert(m_.row(i));
  for (std::size_t i = 0; i < g.rows(); ++i)
    if (!eb.contains(g.row(i))) return false;
  return true;
}

bool LinearCode::operator==(const LinearCode& o) const { return n_ == o.n_ && k_ == o.k_ && contains(o); }

std::uint64_t min_distance_enumerate(const LinearCode& c, std::uint64_t budget) {
  SparseMatrix g = c.generator();
  const Field& f = c.field();
  std::size_t k = g.rows(), n = c.length();
  if (k == 0) return kInfinity;
  std::uint64_t total = 1;
  for (std::size_t i = 0; i < k; ++i) {
    if (total > budget / f.q()) fail(ErrorKind::budget_exceeded, "BudgetExceeded", "codeword enumeration exceeds budget");
    total *= f.q();
  }
  Mat rows(k);
  for (std::size_t i = 0; i < k; ++i) rows[i] = to_dense(g.row(i), n);
  Vec word(n, 0);
  std::vector<elem> digit(k, 0);
  std::uint64_t best = kInfinity;
  for (std::uint64_t it = 1; it < total; ++it) {
    // increment mixed-radix counter and update the codeword incrementally
    std::size_t i = 0;
    while (true) {
      elem old = digit[i];
      elem nw = (old + 1 == f.q()) ? 0 : old + 1;
      digit[i] = nw;
      elem delta = f.sub(nw, old);
      for (std::size_t j = 0; j < n; ++j)
        if (rows[i][j]) word[j] = f.add(word[j], f.mul(delta, rows[i][j]));
      if (nw != 0) break;
      ++i;
    }
    best = std::min<std::uint64_t>(best, weight(word));
  }
  return best;
}

std::uint64_t min_distance_subsets(const LinearCode& c) {
  std::size_t n = c.length(), k = c.dimension();
  require(n <= 24, "BudgetExceeded", "subset oracle limited to length 24");
  if (k == 0) return kInfinity;
  Mat g = c.generator().to_dense();
  const Field& f = c.field();
  for (std::size_t w = 1; w <= n; ++w) {
    // support of size w exists iff the generator restricted to the complement has rank < k
    std::vector<char> sel(n, 0);
    std::fill(sel.begin(), sel.begin() + static_cast<std::ptrdiff_t>(w), 1);
    std::sort(sel.begin(), sel.end());
    do {
      Mat sub(k);
      for (std::size_t i = 0; i < k; ++i)
        for (std::size_t j = 0; j < n; ++j)
          if (!sel[j]) sub[i].push_back(g[i][j]);
      std::size_t rk = (n == w) ? 0 : dense_rank(f, sub);
      if (rk < k) return w;
    } while (std::next_permutation(sel.begin(), sel.end()));
  }
  return kInfinity;
}

namespace {

void check_points(const Field& f, const Vec& points, const Vec& alpha) {
  require(alpha.empty() || alpha.size() == points.size(), "DimensionMismatch", "twist length differs from point count");
  for (elem a : alpha) require(a != 0, "ZeroTwist", "twist coefficients must be nonzero");
  Vec s = points;
  std::sort(s.begin(), s.end());
  require(std::adjacent_find(s.begin(), s.end()) == s.end(), "DuplicatePoints", "evaluation points must be distinct");
  for (elem e : points) require(e < f.q(), "NotAFieldElement", "evaluation point outside the field");
}

Polynomial vanishing_poly(const Field& f, const Vec& roots) {
  Polynomial p = Polynomial::constant(f, 1, 1);
  for (elem z : roots) {
    Polynomial lin(f, 1);
    lin.add_term({1}, 1);
    lin.add_term({0}, f.neg(z));
    p = p * lin;
  }
  return p;
}

SparseMatrix rs_generator(const Field& f, const Vec& points, const Vec& alpha, std::uint32_t ell) {
  std::vector<Triplet> t;
  for (std::uint32_t j = 0; j < ell; ++j)
    for (std::uint32_t i = 0; i < points.size(); ++i) {
      elem a = alpha.empty() ? 1 : alpha[i];
      t.emplace_back(j, i, f.mul(a, f.pow(points[i], j)));
    }
  return SparseMatrix::from_triplets(f, ell, points.size(), t);
}

}  // namespace

EvaluationCode rs_code(const Field& f, const Vec& points, const Vec& alpha, std::uint32_t ell, const Vec& roots) {
  check_points(f, points, alpha);
  require(roots.size() <= ell && ell <= points.size(), "BadDegree", "need |Z| <= ell <= |E|");
  for (elem z : roots)
    require(std::find(points.begin(), points.end(), z) == points.end(), "OverlappingRoots",
            "root set must be disjoint from the evaluation set");
  Polynomial pz = vanishing_poly(f, roots);
  std::size_t dim = ell - roots.size();
  SparseMatrix g(dim, points.size());
  for (std::size_t j = 0; j < dim; ++j) {
    Exponent e{static_cast<std::uint32_t>(j)};
    Vec row = evaluate_univariate(f, pz * Polynomial::monomial(f, e), points, alpha);
    g.set_row(j, to_sparse(row));
  }
  EvaluationCode ec;
  ec.field = f;
  ec.points = points;
  ec.alpha = alpha.empty() ? Vec(points.size(), 1) : alpha;
  ec.ell = ell;
  ec.roots = roots;
  ec.code = LinearCode::from_generator(f, g);
  if (ec.code.dimension() != dim) fail(ErrorKind::internal, "RankMismatch", "RS generator is rank deficient");
  return ec;
}

Vec rs_dual(const Field& f, const Vec& points, const Vec& alpha, std::uint32_t m) {
  check_points(f, points, alpha);
  std::size_t n = points.size();
  require(m <= n, "BadDegree", "need 0 <= m <= |E|");
  require(n >= 1, "BadDegree", "empty evaluation set");
  auto ker = kernel(f, rs_generator(f, points, alpha, static_cast<std::uint32_t>(n - 1)));
  if (ker.size() != 1) fail(ErrorKind::internal, "NoValidBeta", "dual twist space is not one-dimensional");
  Vec beta = to_dense(ker[0], n);
  for (elem b : beta)
    if (b == 0) fail(ErrorKind::internal, "NoValidBeta", "dual twist has a zero coordinate");
  elem s = f.inv(beta[0]);
  for (auto& b : beta) b = f.mul(b, s);
  SparseMatrix g1 = rs_generator(f, points, alpha, m);
  SparseMatrix g2 = rs_generator(f, points, beta, static_cast<std::uint32_t>(n - m));
  if (!g1.multiply(f, g2.transpose()).is_zero())
    fail(ErrorKind::internal, "NoValidBeta", "dual twist fails orthogonality");
  return beta;
}

Vec shortened_twist(const Field& f, const Vec& points, const Vec& alpha, const Vec& roots) {
  check_points(f, points, alpha);
  Polynomial pz = vanishing_poly(f, roots);
  Vec beta(points.size());
  for (std::size_t i = 0; i < points.size(); ++i) {
    beta[i] = f.mul(alpha.empty() ? 1 : alpha[i], pz.eval({points[i]}));
    require(beta[i] != 0, "OverlappingRoots", "root set must be disjoint from the evaluation set");
  }
  return beta;
}

Vec star_product(const Field& f, const Vec& a, const Vec& b) {
  require(a.size() == b.size(), "LengthMismatch", "star product of vectors of different length");
  Vec c(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) c[i] = f.mul(a[i], b[i]);
  return c;
}

SparseVec star_product(const Field& f, const SparseVec& a, const SparseVec& b) {
  SparseVec c;
  std::size_t i = 0, j = 0;
  while (i < a.size() && j < b.size()) {
    if (a[i].first < b[j].first) {
      ++i;
    } else if (b[j].first < a[i].first) {
      ++j;
    } else {
      c.emplace_back(a[i].first, f.mul(a[i].second, b[j].second));
      ++i;
      ++j;
    }
  }
  return c;
}

LinearCode span_star(const LinearCode& a, const LinearCode& b) {
  require(a.length() == b.length(), "LengthMismatch", "codes of different length");
  require(a.field() == b.field(), "FieldMismatch", "codes over different fields");
  const Field& f = a.field();
  SparseMatrix ga = a.generator(), gb = b.generator();
  std::vector<SparseVec> prods;
  for (std::size_t i = 0; i < ga.rows(); ++i)
    for (std::size_t j = 0; j < gb.rows(); ++j) prods.push_back(star_product(f, ga.row(i), gb.row(j)));
  SparseMatrix m = rows_matrix(prods, a.length());
  EchelonBasis eb(f, a.length(), weight_order(m));
  for (auto& p : prods) eb.insert(p);
  return LinearCode::from_generator(f, rows_matrix(eb.basis(), a.length()));
}

Mat inverse_vandermonde(const Field& f, const Vec& points) {
  std::size_t n = points.size();
  Mat v(n, Vec(n));
  for (std::size_t x = 0; x < n; ++x)
    for (std::size_t k = 0; k < n; ++k) v[x][k] = f.pow(points[x], k);
  auto inv = dense_inverse(f, v);
  require(inv.has_value(), "DuplicatePoints", "Vandermonde matrix is singular");
  return *inv;
}

Polynomial interpolate_grid(const Field& f, const std::vector<Vec>& axes, const Vec& values) {
  std::size_t total = 1;
  for (auto& a : axes) total *= a.size();
  require(values.size() == total, "NotAGrid", "value tensor size differs from the grid size");
  Vec coef = values;
  std::size_t inner = total;
  for (std::size_t ax = 0; ax < axes.size(); ++ax) {
    std::size_t n = axes[ax].size();
    Mat vinv = inverse_vandermonde(f, axes[ax]);
    inner /= n;
    std::size_t outer = total / (inner * n);
    Vec next(total, 0);
    for (std::size_t o = 0; o < outer; ++o)
      for (std::size_t in = 0; in < inner; ++in)
        for (std::size_t k = 0; k < n; ++k) {
          elem acc = 0;
          for (std::size_t x = 0; x < n; ++x) {
            elem v = coef[(o * n + x) * inner + in];
            if (v && vinv[k][x]) acc = f.add(acc, f.mul(vinv[k][x], v));
          }
          next[(o * n + k) * inner + in] = acc;
        }
    coef = std::move(next);
  }
  Polynomial p(f, axes.size());
  Exponent e(axes.size(), 0);
  for (std::size_t idx = 0; idx < total; ++idx) {
    std::size_t v = idx;
    for (std::size_t ax = axes.size(); ax-- > 0;) {
      e[ax] = static_cast<std::uint32_t>(v % axes[ax].size());
      v /= axes[ax].size();
    }
    p.add_term(e, coef[idx]);
  }
  return p;
}

Polynomial truncate_high_degree(const Polynomial& p, const std::vector<std::vector<std::size_t>>& groups,
                                const std::vector<std::uint64_t>& thresholds) {
  require(groups.size() == thresholds.size(), "BadPartition", "one threshold per group required");
  std::vector<int> seen(p.num_vars(), 0);
  for (auto& g : groups)
    for (auto v : g) {
      require(v < p.num_vars() && !seen[v], "BadPartition", "groups must partition the variables");
      seen[v] = 1;
    }
  for (int s : seen) require(s == 1, "BadPartition", "groups must partition the variables");
  Polynomial r(p.field(), p.num_vars());
  for (auto& [e, c] : p.terms()) {
    bool keep = true;
    for (std::size_t g = 0; g < groups.size() && keep; ++g) {
      std::uint64_t d = 0;
      for (auto v : groups[g]) d += e[v];
      if (d >= thresholds[g]) keep = false;
    }
    if (keep) r.add_term(e, c);
  }
  return r;
}

nlohmann::json poly_to_json(const Polynomial& p) {
  nlohmann::json j = nlohmann::json::array();
  for (auto& [e, c] : p.terms()) j.push_back({{"exp", e}, {"coef", p.field().coords(c)}});
  return j;
}

Polynomial poly_from_json(const Field& f, std::size_t num_vars, const nlohmann::json& j) {
  Polynomial p(f, num_vars);
  for (auto& t : j) p.add_term(t.at("exp").get<Exponent>(), f.from_coords(t.at("coef").get<std::vector<std::uint32_t>>()));
  return p;
}

}  // namespace rmlift
