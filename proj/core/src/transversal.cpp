#include "rmlift/transversal.hpp"

#include <algorithm>
#include <functional>
#include <numeric>
#include <random>
#include <sstream>
#include <unordered_map>

#include "rmlift/error.hpp"

namespace rmlift {

namespace {

std::uint64_t binom(std::uint64_t n, std::uint64_t k) {
  if (k > n) return 0;
  std::uint64_t r = 1;
  for (std::uint64_t i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

std::uint64_t ipow(std::uint64_t b, std::uint64_t e) {
  std::uint64_t r = 1;
  while (e--) r *= b;
  return r;
}

std::uint64_t factorial(std::uint64_t n) { return n <= 1 ? 1 : n * factorial(n - 1); }

// dims of level 0 and 1 of factor (h, k)
std::array<std::uint64_t, 2> factor_dims(const ProductCodeFamily& fam, std::size_t h, std::size_t k) {
  const FactorData& d = fam.data(h, k);
  return {d.nv * d.m, d.ne};
}

elem sign_elem(const Field& f, int b) { return b == 0 ? 1 : f.neg(1); }

// values over lifted edges of one coordinate of a pure tensor: the edge part itself, or the
// restriction of a level-0 part through endpoint b
Vec coordinate_values(const Field& f, const FactorData& d, const Vec& part, bool edge_part, int b) {
  if (edge_part) return part;
  Vec out(d.ne, 0);
  if (d.m == 0) return out;
  for (std::size_t y = 0; y < d.ne; ++y) {
    std::size_t base = static_cast<std::size_t>(d.ends[b][y]) * d.m;
    elem acc = 0;
    for (std::size_t j = 0; j < d.m; ++j) {
      elem p = part[base + j];
      if (p) acc = f.add(acc, f.mul(p, d.h[b][y * d.m + j]));
    }
    out[y] = acc;
  }
  return out;
}

std::vector<std::vector<std::size_t>> all_permutations(std::size_t r) {
  std::vector<std::size_t> p(r);
  std::iota(p.begin(), p.end(), 0);
  std::vector<std::vector<std::size_t>> out;
  do out.push_back(p);
  while (std::next_permutation(p.begin(), p.end()));
  return out;
}

// start vertex of edge h of the path for perm: coordinates perm[0..h-1] set
std::uint32_t path_start(const std::vector<std::size_t>& perm, std::size_t h) {
  std::uint32_t b = 0;
  for (std::size_t i = 0; i < h; ++i) b |= 1u << perm[i];
  return b;
}

Polynomial lagrange(const Field& f, std::size_t num_vars, std::size_t var, const Vec& points, elem at) {
  Polynomial p = Polynomial::constant(f, num_vars, 1);
  Polynomial x = Polynomial::variable(f, num_vars, var);
  for (elem u : points) {
    if (u == at) continue;
    elem inv = f.inv(f.sub(at, u));
    p = p * (x - Polynomial::constant(f, num_vars, u)).scaled(inv);
  }
  return p;
}

// the points of A = A_0 x ... x A_t, first coordinate slowest
std::vector<Point> a_points(const ProductCodeFamily& fam) {
  std::vector<Point> pts{{}};
  for (const auto& set : fam.a_sets) {
    std::vector<Point> next;
    for (const auto& p : pts)
      for (elem u : set) {
        Point q = p;
        q.push_back(u);
        next.push_back(std::move(q));
      }
    pts = std::move(next);
  }
  return pts;
}

}  // namespace

FamilyFeasibility family_feasibility(const LiftedGraph& lift, std::size_t r, std::uint32_t ell, std::uint32_t ell_prime,
                                     std::optional<std::uint32_t> a) {
  const MultiGraph& base = lift.base();
  auto delta = base.regular_degree();
  require(delta.has_value(), "NotRegular", "base graph must be regular");
  require(r >= 2, "BadArity", "need r >= 2");
  require(ell <= *delta && ell_prime <= *delta, "BadEll", "need ell, ell' <= Delta");
  const std::int64_t q = lift.field().q();
  const std::int64_t t = static_cast<std::int64_t>(lift.t());
  require(t >= 1, "BadLift", "need t >= 1");
  const std::int64_t ne = static_cast<std::int64_t>(base.num_edges());
  const std::int64_t R = static_cast<std::int64_t>(r);
  const std::int64_t l = ell, lp = ell_prime;
  FamilyFeasibility rep;
  rep.a = a.value_or(static_cast<std::uint32_t>(l / (10 * R * t)));
  const std::int64_t A = rep.a;
  const std::int64_t half = l / (2 * t);
  const std::int64_t thr = t * (q - 1) + ne - l + (R - 1) * lp;
  rep.threshold = static_cast<std::uint64_t>(std::max<std::int64_t>(thr, 0));
  std::ostringstream det;
  auto check = [&](bool ok, const std::string& name, const std::string& numbers) {
    det << name << " [" << numbers << "] " << (ok ? "holds" : "violated") << "; ";
    if (!ok) {
      rep.ok = false;
      rep.violated.push_back(name);
    }
  };
  auto s = [](std::int64_t x) { return std::to_string(x); };
  check(A >= 1, "a = ⌊ℓ/10rt⌋ ≥ 1", "a = " + s(A));
  check(A <= q - 1, "a ≤ q - 1", s(A) + " <= " + s(q - 1));
  bool has_nonzero = false;
  for (auto v : base.edge_values()) has_nonzero |= v != 0;
  check(has_nonzero, "E \\ {0} nonempty", "|E| = " + s(ne));
  check(t * (A - 1) < lp, "t(a-1) < ℓ'", s(t * (A - 1)) + " < " + s(lp));
  check(half <= q, "⌊ℓ/2t⌋ ≤ q", s(half) + " <= " + s(q));
  check(ne - 1 + t * (q - half) >= thr, "|E|-1+t(q-⌊ℓ/2t⌋) ≥ t(q-1)+|E|-ℓ+(r-1)ℓ'",
        s(ne - 1 + t * (q - half)) + " >= " + s(thr));
  check(R * (A - 1) < half, "r(a-1) < ⌊ℓ/2t⌋", s(R * (A - 1)) + " < " + s(half));
  std::int64_t worst = 0;
  for (std::int64_t sz = 1; sz <= R; ++sz)
    worst = std::max(worst, t * (q - 1) + (ne - l - 1) + (sz - 1) * (lp - 1) + (R - sz) * t * (A - 1));
  check(worst < thr, "t(q-1)+(|E|-ℓ-1)+(|S|-1)(ℓ'-1)+(r-|S|)t(a-1) < t(q-1)+|E|-ℓ+(r-1)ℓ'",
        s(worst) + " < " + s(thr));
  rep.detail = det.str();
  return rep;
}

FactorData factor_data(const RMPlantedComplex& cx) {
  const MultiGraph& g = cx.lift.lifted();
  const Field& f = cx.lift.field();
  FactorData d;
  d.m = cx.local_dim();
  d.nv = g.num_vertices();
  d.ne = g.num_edges();
  d.bd = cx.complex.boundary(1);
  SparseMatrix cob = d.bd.transpose();
  for (int b = 0; b < 2; ++b) {
    d.ends[b].resize(d.ne);
    d.h[b].assign(d.ne * d.m, 0);
  }
  for (std::size_t y = 0; y < d.ne; ++y) {
    d.ends[0][y] = g.edge(y).v0;
    d.ends[1][y] = g.edge(y).v1;
    for (auto [col, v] : cob.row(y)) {
      std::size_t w = col / d.m, j = col % d.m;
      int b = w == d.ends[0][y] ? 0 : 1;
      d.h[b][y * d.m + j] = f.mul(sign_elem(f, b), v);
    }
  }
  return d;
}

std::uint64_t family_qudits(const ProductCodeFamily& fam) {
  std::uint64_t total = 0;
  for (std::size_t d = 0; d < fam.r; ++d) {
    std::uint64_t p = 1;
    for (std::size_t k = 0; k < fam.r; ++k) p *= factor_dims(fam, 0, k)[k == d ? 1 : 0];
    total += p;
  }
  return total;
}

std::uint64_t family_dimension_bound(const ProductCodeFamily& fam) {
  std::uint64_t t = fam.lift.t();
  return binom(fam.ell + t, t) * ipow(binom(fam.ell_prime - 1 + t, t), fam.r - 1);
}

ProductCodeFamily build_family(const LiftedGraph& lift, std::size_t r, std::uint32_t ell, std::uint32_t ell_prime,
                               std::optional<std::uint32_t> a, std::uint64_t materialize_budget) {
  ProductCodeFamily fam;
  fam.feasibility = family_feasibility(lift, r, ell, ell_prime, a);
  if (!fam.feasibility.ok) {
    std::string names;
    for (const auto& v : fam.feasibility.violated) names += (names.empty() ? "" : ", ") + v;
    fail(ErrorKind::infeasible, "Infeasible", "violated: " + names + " (" + fam.feasibility.detail + ")");
  }
  fam.r = r;
  fam.ell = ell;
  fam.ell_prime = ell_prime;
  fam.a = fam.feasibility.a;
  fam.threshold = fam.feasibility.threshold;
  fam.lift = lift;
  fam.big = rm_planted_complex(lift, ell, 3);
  fam.small = rm_planted_complex(lift, ell_prime, 2);
  fam.big_data = factor_data(fam.big);
  fam.small_data = factor_data(fam.small);
  // lexicographically first choices: the least nonzero edge value, and the a least nonzero elements
  Vec e_sorted = lift.base().edge_values();
  std::sort(e_sorted.begin(), e_sorted.end());
  fam.a_sets.push_back({*std::find_if(e_sorted.begin(), e_sorted.end(), [](elem v) { return v != 0; })});
  for (std::size_t i = 0; i < lift.t(); ++i) {
    Vec s(fam.a);
    std::iota(s.begin(), s.end(), elem{1});
    fam.a_sets.push_back(s);
  }
  fam.n_qudits = family_qudits(fam);
  // total size of all levels of all r products
  std::uint64_t total = 0;
  for (std::size_t h = 0; h < r; ++h) {
    std::vector<std::uint64_t> dims{1};
    for (std::size_t k = 0; k < r; ++k) {
      auto fd = factor_dims(fam, h, k);
      std::vector<std::uint64_t> next(dims.size() + 1, 0);
      for (std::size_t i = 0; i < dims.size(); ++i) {
        next[i] += dims[i] * fd[0];
        next[i + 1] += dims[i] * fd[1];
      }
      dims = std::move(next);
    }
    for (auto x : dims) total += x;
  }
  if (total <= materialize_budget) {
    for (std::size_t h = 0; h < r; ++h) {
      ChainComplex c = fam.factor(h, 0).complex;
      for (std::size_t k = 1; k < r; ++k) c = tensor_product(c, fam.factor(h, k).complex);
      fam.complexes.push_back(std::move(c));
    }
  }
  return fam;
}

std::uint64_t cell_index(const ProductCodeFamily& fam, std::size_t h, const std::vector<int>& levels,
                         const std::vector<std::uint64_t>& idx) {
  auto fd0 = factor_dims(fam, h, 0);
  std::vector<std::uint64_t> dims{fd0[0], fd0[1]};
  std::uint64_t acc = idx[0];
  std::size_t lev = static_cast<std::size_t>(levels[0]);
  for (std::size_t k = 1; k < fam.r; ++k) {
    auto fd = factor_dims(fam, h, k);
    std::size_t L = lev + static_cast<std::size_t>(levels[k]);
    std::size_t lo = L >= 1 ? L - 1 : 0;
    std::uint64_t off = 0;
    for (std::size_t j = lo; j < lev; ++j) off += dims[j] * fd[L - j];
    acc = off + acc * fd[levels[k]] + idx[k];
    std::vector<std::uint64_t> next(dims.size() + 1, 0);
    for (std::size_t i = 0; i < dims.size(); ++i) {
      next[i] += dims[i] * fd[0];
      next[i + 1] += dims[i] * fd[1];
    }
    dims = std::move(next);
    lev = L;
  }
  return acc;
}

ComplexIsomorphism family_isomorphism(const ProductCodeFamily& fam, std::size_t h1, std::size_t h2) {
  require(h1 < fam.r && h2 < fam.r, "BadSlot", "slot out of range");
  const std::size_t r = fam.r;
  std::vector<std::size_t> sigma(r);
  std::iota(sigma.begin(), sigma.end(), 0);
  std::swap(sigma[h1], sigma[h2]);
  ComplexIsomorphism iso;
  iso.perm.resize(r + 1);
  iso.sign.resize(r + 1);
  std::vector<std::uint64_t> level_dims(r + 1, 0);
  // enumerate cells by level pattern and factor indices
  for (std::uint32_t mask = 0; mask < (1u << r); ++mask) {
    std::vector<int> levels(r);
    for (std::size_t k = 0; k < r; ++k) levels[k] = (mask >> k) & 1;
    std::size_t L = static_cast<std::size_t>(std::popcount(mask));
    std::vector<std::uint64_t> sizes(r);
    std::uint64_t count = 1;
    for (std::size_t k = 0; k < r; ++k) count *= sizes[k] = factor_dims(fam, h1, k)[levels[k]];
    if (iso.perm[L].empty()) {
      std::uint64_t dimL = 0;
      for (std::uint32_t m2 = 0; m2 < (1u << r); ++m2) {
        if (static_cast<std::size_t>(std::popcount(m2)) != L) continue;
        std::uint64_t c = 1;
        for (std::size_t k = 0; k < r; ++k) c *= factor_dims(fam, h1, k)[(m2 >> k) & 1];
        dimL += c;
      }
      iso.perm[L].assign(dimL, 0);
      iso.sign[L].assign(dimL, 1);
    }
    // Koszul sign of the reordering: one factor per inverted pair of odd elements
    int sgn = 1;
    for (std::size_t i = 0; i < r; ++i)
      for (std::size_t j = i + 1; j < r; ++j)
        if (sigma[i] > sigma[j] && levels[sigma[i]] && levels[sigma[j]]) sgn = -sgn;
    std::vector<int> new_levels(r);
    for (std::size_t k = 0; k < r; ++k) new_levels[k] = levels[sigma[k]];
    std::vector<std::uint64_t> idx(r, 0), nidx(r);
    for (std::uint64_t c = 0; c < count; ++c) {
      std::uint64_t v = c;
      for (std::size_t k = r; k-- > 0;) idx[k] = v % sizes[k], v /= sizes[k];
      for (std::size_t k = 0; k < r; ++k) nidx[k] = idx[sigma[k]];
      std::uint64_t from = cell_index(fam, h1, levels, idx);
      iso.perm[L][from] = cell_index(fam, h2, new_levels, nidx);
      iso.sign[L][from] = sgn;
    }
  }
  return iso;
}

bool verify_isomorphism(const ChainComplex& a, const ChainComplex& b, const ComplexIsomorphism& iso) {
  if (a.dims() != b.dims() || iso.perm.size() != a.num_levels()) return false;
  const Field& f = a.field();
  for (std::size_t i = 0; i < a.num_levels(); ++i) {
    std::vector<char> seen(a.dim(i), 0);
    for (auto p : iso.perm[i]) {
      if (p >= a.dim(i) || seen[p]) return false;
      seen[p] = 1;
    }
  }
  for (std::size_t i = 1; i < a.num_levels(); ++i) {
    SparseMatrix da = a.boundary(i).transpose(), db = b.boundary(i).transpose();
    for (std::size_t x = 0; x < a.dim(i); ++x) {
      // P d x
      std::vector<Triplet> lhs;
      for (auto [y, v] : da.row(x)) {
        elem s = iso.sign[i - 1][y] == 1 ? v : f.neg(v);
        lhs.emplace_back(0, static_cast<std::uint32_t>(iso.perm[i - 1][y]), s);
      }
      // d' P x
      std::vector<Triplet> rhs;
      for (auto [y, v] : db.row(iso.perm[i][x])) rhs.emplace_back(0, y, iso.sign[i][x] == 1 ? v : f.neg(v));
      auto l = SparseMatrix::from_triplets(f, 1, a.dim(i - 1), lhs).row(0);
      auto rr = SparseMatrix::from_triplets(f, 1, a.dim(i - 1), rhs).row(0);
      if (l != rr) return false;
    }
  }
  return true;
}

Vec materialize(const ProductCodeFamily& fam, std::size_t h, const SlotCochain& c) {
  require(fam.n_qudits <= (std::uint64_t{1} << 27), "BudgetExceeded", "level 1 too large to materialize");
  const Field& f = fam.lift.field();
  Vec out(fam.n_qudits, 0);
  for (const auto& term : c.terms) {
    std::vector<int> levels(fam.r, 0);
    levels[term.dir] = 1;
    std::vector<SparseVec> nz;
    for (const auto& p : term.parts) nz.push_back(to_sparse(p));
    std::vector<std::uint64_t> idx(fam.r);
    std::function<void(std::size_t, elem)> rec = [&](std::size_t k, elem acc) {
      if (k == fam.r) {
        std::uint64_t at = cell_index(fam, h, levels, idx);
        out[at] = f.add(out[at], acc);
        return;
      }
      for (auto [i, v] : nz[k]) {
        idx[k] = i;
        rec(k + 1, f.mul(acc, v));
      }
    };
    rec(0, term.coef);
  }
  return out;
}

SlotCochain vertex_coboundary(const ProductCodeFamily& fam, std::size_t h, const std::vector<std::uint64_t>& idx) {
  require(idx.size() == fam.r, "DimensionMismatch", "one factor index per coordinate");
  SlotCochain c;
  for (std::size_t d = 0; d < fam.r; ++d) {
    TensorTerm term;
    term.dir = d;
    for (std::size_t k = 0; k < fam.r; ++k) {
      const FactorData& fd = fam.data(h, k);
      if (k == d) {
        Vec col(fd.ne, 0);
        for (auto [y, v] : fd.bd.row(idx[k])) col[y] = v;
        term.parts.push_back(std::move(col));
      } else {
        Vec unit(fd.nv * fd.m, 0);
        unit.at(idx[k]) = 1;
        term.parts.push_back(std::move(unit));
      }
    }
    c.terms.push_back(std::move(term));
  }
  return c;
}

Exponent family_monomial_m(const ProductCodeFamily& fam) {
  std::size_t t = fam.lift.t();
  std::uint32_t q = fam.lift.field().q();
  Exponent e(t + 1, q - fam.ell / static_cast<std::uint32_t>(2 * t));
  e[0] = static_cast<std::uint32_t>(fam.lift.base().num_edges() - 1);
  return e;
}

std::vector<HPrimeGenerator> hprime_generators(const ProductCodeFamily& fam, std::size_t h) {
  const Field& f = fam.lift.field();
  std::size_t t = fam.lift.t();
  std::vector<std::uint32_t> caps(t + 1, fam.a);
  caps[0] = 1;
  std::vector<Exponent> l0 = monomials_in_box(caps);
  Exponent mexp = family_monomial_m(fam);
  // iota images of the monomials, computed once per coordinate kind
  std::vector<Vec> low, high;
  std::vector<Exponent> l1;
  for (const auto& e : l0) {
    low.push_back(iota0(fam.small, Polynomial::monomial(f, e)));
    Exponent me = e;
    for (std::size_t i = 0; i <= t; ++i) me[i] += mexp[i];
    l1.push_back(me);
    high.push_back(iota1(fam.lift, Polynomial::monomial(f, me)));
  }
  std::vector<HPrimeGenerator> out;
  std::size_t n = l0.size();
  std::uint64_t total = ipow(n, fam.r);
  for (std::uint64_t c = 0; c < total; ++c) {
    HPrimeGenerator g;
    TensorTerm term;
    term.dir = h;
    std::uint64_t v = c;
    std::vector<std::size_t> choice(fam.r);
    for (std::size_t k = fam.r; k-- > 0;) choice[k] = v % n, v /= n;
    for (std::size_t k = 0; k < fam.r; ++k) {
      g.monomials.push_back(k == h ? l1[choice[k]] : l0[choice[k]]);
      term.parts.push_back(k == h ? high[choice[k]] : low[choice[k]]);
    }
    g.cochain.terms.push_back(std::move(term));
    out.push_back(std::move(g));
  }
  return out;
}

int permutation_sign(const std::vector<std::size_t>& perm) {
  int s = 1;
  for (std::size_t i = 0; i < perm.size(); ++i)
    for (std::size_t j = i + 1; j < perm.size(); ++j)
      if (perm[i] > perm[j]) s = -s;
  return s;
}

std::vector<LocalEdge> xi_loc(std::size_t r, const std::vector<std::size_t>& perm) {
  require(perm.size() == r, "DimensionMismatch", "permutation of [r] required");
  std::vector<char> seen(r, 0);
  for (auto p : perm) {
    require(p < r && !seen[p], "NotAPermutation", "permutation of [r] required");
    seen[p] = 1;
  }
  std::vector<LocalEdge> path;
  std::uint32_t b = 0;
  for (auto d : perm) {
    path.push_back({b, d});
    b |= 1u << d;
  }
  return path;
}

std::size_t local_edge_index(std::size_t r, const LocalEdge& e) {
  std::uint32_t low = e.start & ((1u << e.dir) - 1);
  std::uint32_t high = (e.start >> (e.dir + 1)) << e.dir;
  return e.dir * (std::size_t{1} << (r - 1)) + (low | high);
}

elem xi_loc_eval(const Field& f, std::size_t r, const std::vector<Vec>& values) {
  require(values.size() == r, "DimensionMismatch", "one cochain per slot");
  for (const auto& v : values)
    require(v.size() == r * (std::size_t{1} << (r - 1)), "DimensionMismatch", "values on every edge of the cube");
  elem acc = 0;
  for (const auto& perm : all_permutations(r)) {
    auto path = xi_loc(r, perm);
    elem term = 1;
    for (std::size_t i = 0; i < r && term; ++i) term = f.mul(term, values[i][local_edge_index(r, path[i])]);
    acc = permutation_sign(perm) == 1 ? f.add(acc, term) : f.sub(acc, term);
  }
  return acc;
}

Vec alpha_slot(const ProductCodeFamily& fam) { return alpha_slot(fam, fam.threshold); }

Vec alpha_slot(const ProductCodeFamily& fam, std::uint64_t threshold) {
  const Field& f = fam.lift.field();
  const LiftedGraph& lift = fam.lift;
  std::size_t t = lift.t();
  auto axes = edge_grid_axes(lift);
  // w[i][x][k] = (coefficient of U_i^k in the Lagrange polynomial of x) * sum_{u in A_i} u^k
  std::vector<std::vector<Vec>> w(t + 1);
  for (std::size_t i = 0; i <= t; ++i) {
    Mat vinv = inverse_vandermonde(f, axes[i]);
    std::size_t n = axes[i].size();
    Vec power_sums(n, 0);
    for (std::size_t k = 0; k < n; ++k)
      for (elem u : fam.a_sets[i]) power_sums[k] = f.add(power_sums[k], f.pow(u, k));
    w[i].assign(n, Vec(n));
    for (std::size_t x = 0; x < n; ++x)
      for (std::size_t k = 0; k < n; ++k) w[i][x][k] = f.mul(vinv[k][x], power_sums[k]);
  }
  // convolution of the group axes for every group element
  const VectorGroup& grp = lift.group();
  std::size_t q = f.q();
  std::size_t tail_len = t * (q - 1) + 1;
  std::vector<Vec> tail(grp.size());
  for (std::uint64_t g = 0; g < grp.size(); ++g) {
    Vec coords = grp.decode(g);
    Vec acc{1};
    for (std::size_t i = 1; i <= t; ++i) {
      const Vec& wi = w[i][coords[i - 1]];
      Vec next(acc.size() + q - 1, 0);
      for (std::size_t s = 0; s < acc.size(); ++s)
        if (acc[s])
          for (std::size_t k = 0; k < q; ++k) next[s + k] = f.add(next[s + k], f.mul(acc[s], wi[k]));
      acc = std::move(next);
    }
    acc.resize(tail_len, 0);
    // suffix sums: tail[g][s] = sum_{s' >= s} acc[s']
    for (std::size_t s = tail_len - 1; s-- > 0;) acc[s] = f.add(acc[s], acc[s + 1]);
    tail[g] = std::move(acc);
  }
  std::size_t ne_base = lift.base().num_edges();
  Vec out(fam.num_edges(), 0);
  for (std::size_t y = 0; y < out.size(); ++y) {
    std::size_t e = lift.base_edge(y);
    std::uint64_t g = lift.offset(y);
    elem acc = 0;
    for (std::size_t k0 = 0; k0 < ne_base; ++k0) {
      elem c = w[0][e][k0];
      if (!c) continue;
      std::uint64_t need = threshold > k0 ? threshold - k0 : 0;
      if (need >= tail_len) continue;
      acc = f.add(acc, f.mul(c, tail[g][need]));
    }
    out[y] = acc;
  }
  return out;
}

elem zeta_eval(const ProductCodeFamily& fam, const Vec& alpha, const std::vector<SlotCochain>& cochains) {
  require(cochains.size() == fam.r, "DimensionMismatch", "one cochain per slot");
  const Field& f = fam.lift.field();
  const std::size_t r = fam.r;
  elem total = 0;
  for (const auto& perm : all_permutations(r)) {
    // candidate terms per slot: direction must be perm[h]
    std::vector<std::vector<const TensorTerm*>> cand(r);
    bool empty = false;
    for (std::size_t h = 0; h < r; ++h) {
      for (const auto& term : cochains[h].terms)
        if (term.dir == perm[h]) cand[h].push_back(&term);
      empty |= cand[h].empty();
    }
    if (empty) continue;
    std::vector<std::size_t> choice(r, 0);
    while (true) {
      elem value = permutation_sign(perm) == 1 ? 1 : f.neg(1);
      for (std::size_t h = 0; h < r; ++h) value = f.mul(value, cand[h][choice[h]]->coef);
      for (std::size_t k = 0; k < r && value; ++k) {
        Vec prod = alpha;
        for (std::size_t h = 0; h < r; ++h) {
          const TensorTerm& term = *cand[h][choice[h]];
          int b = (path_start(perm, h) >> k) & 1;
          Vec vals = coordinate_values(f, fam.data(h, k), term.parts[k], k == term.dir, b);
          for (std::size_t y = 0; y < prod.size(); ++y) prod[y] = f.mul(prod[y], vals[y]);
        }
        elem s = 0;
        for (auto v : prod) s = f.add(s, v);
        value = f.mul(value, s);
      }
      total = f.add(total, value);
      std::size_t h = 0;
      while (h < r && ++choice[h] == cand[h].size()) choice[h++] = 0;
      if (h == r) break;
    }
  }
  return total;
}

Vec xi_explicit(const ProductCodeFamily& fam, const std::vector<Vec>& cochains) {
  require(cochains.size() == fam.r, "DimensionMismatch", "one cochain per slot");
  const Field& f = fam.lift.field();
  const std::size_t r = fam.r, ne = fam.num_edges();
  std::uint64_t cubes = ipow(ne, r);
  require(cubes <= 10000000, "BudgetExceeded", "too many cubes");
  const std::size_t nloc = r * (std::size_t{1} << (r - 1));
  Vec out(cubes, 0);
  std::vector<std::uint64_t> y(r);
  std::vector<Vec> local(r, Vec(nloc));
  for (std::uint64_t c = 0; c < cubes; ++c) {
    std::uint64_t v = c;
    for (std::size_t k = r; k-- > 0;) y[k] = v % ne, v /= ne;
    for (std::size_t h = 0; h < r; ++h)
      for (std::size_t d = 0; d < r; ++d)
        for (std::uint32_t start = 0; start < (1u << r); ++start) {
          if ((start >> d) & 1) continue;
          // restriction of the cell at (start, d) to the cube: contract every vertex coordinate
          std::vector<int> levels(r, 0);
          levels[d] = 1;
          std::vector<std::uint64_t> idx(r);
          std::vector<std::size_t> ms(r, 1);
          for (std::size_t k = 0; k < r; ++k) ms[k] = k == d ? 1 : fam.data(h, k).m;
          std::size_t combos = 1;
          for (auto m : ms) combos *= m;
          elem acc = 0;
          for (std::size_t j = 0; j < combos; ++j) {
            std::size_t jv = j;
            elem coef = 1;
            for (std::size_t k = r; k-- > 0;) {
              std::size_t jk = jv % ms[k];
              jv /= ms[k];
              if (k == d) {
                idx[k] = y[k];
              } else {
                const FactorData& fd = fam.data(h, k);
                int b = (start >> k) & 1;
                idx[k] = static_cast<std::uint64_t>(fd.ends[b][y[k]]) * fd.m + jk;
                coef = f.mul(coef, fd.h[b][y[k] * fd.m + jk]);
              }
            }
            if (!coef) continue;
            elem val = cochains[h][cell_index(fam, h, levels, idx)];
            if (val) acc = f.add(acc, f.mul(coef, val));
          }
          local[h][local_edge_index(r, {start, d})] = acc;
        }
    out[c] = xi_loc_eval(f, r, local);
  }
  return out;
}

Vec alpha_explicit(const ProductCodeFamily& fam, std::uint64_t budget) {
  const Field& f = fam.lift.field();
  const LiftedGraph& lift = fam.lift;
  const std::size_t r = fam.r, ne = fam.num_edges(), t = lift.t();
  std::uint64_t cubes = ipow(ne, r);
  require(cubes * cubes <= budget, "BudgetExceeded", "explicit alpha needs |Y(r)|^2 work");
  // grid position of every lifted edge within one coordinate block
  Vec ids(ne);
  std::iota(ids.begin(), ids.end(), elem{0});
  Vec grid_of_slot = edges_to_grid(lift, ids);  // grid position -> edge
  std::vector<std::uint64_t> pos(ne);
  for (std::size_t g = 0; g < ne; ++g) pos[grid_of_slot[g]] = g;
  std::vector<Vec> axes;
  for (std::size_t h = 0; h < r; ++h)
    for (const auto& ax : edge_grid_axes(lift)) axes.push_back(ax);
  // points of A^r in variable order
  std::vector<Point> apts = a_points(fam), pts{{}};
  for (std::size_t h = 0; h < r; ++h) {
    std::vector<Point> next;
    for (const auto& p : pts)
      for (const auto& ap : apts) {
        Point x = p;
        x.insert(x.end(), ap.begin(), ap.end());
        next.push_back(std::move(x));
      }
    pts = std::move(next);
  }
  Vec out(cubes, 0);
  std::vector<std::uint64_t> y(r);
  for (std::uint64_t c = 0; c < cubes; ++c) {
    std::uint64_t v = c, g = 0;
    for (std::size_t k = r; k-- > 0;) y[k] = v % ne, v /= ne;
    for (std::size_t k = 0; k < r; ++k) g = g * ne + pos[y[k]];
    Vec values(cubes, 0);
    values[g] = 1;
    Polynomial p = interpolate_grid(f, axes, values);
    elem acc = 0;
    for (const auto& [e, coef] : p.terms()) {
      bool keep = true;
      for (std::size_t h = 0; h < r && keep; ++h) {
        std::uint64_t deg = 0;
        for (std::size_t i = 0; i <= t; ++i) deg += e[h * (t + 1) + i];
        keep = deg >= fam.threshold;
      }
      if (!keep) continue;
      for (const auto& pt : pts) {
        elem m = coef;
        for (std::size_t i = 0; i < pt.size() && m; ++i) m = f.mul(m, f.pow(pt[i], e[i]));
        acc = f.add(acc, m);
      }
    }
    out[c] = acc;
  }
  return out;
}

elem zeta_explicit(const ProductCodeFamily& fam, const Vec& alpha_cubes, const std::vector<Vec>& cochains) {
  const Field& f = fam.lift.field();
  Vec xi = xi_explicit(fam, cochains);
  require(xi.size() == alpha_cubes.size(), "DimensionMismatch", "alpha must cover every cube");
  elem acc = 0;
  for (std::size_t c = 0; c < xi.size(); ++c)
    if (xi[c] && alpha_cubes[c]) acc = f.add(acc, f.mul(xi[c], alpha_cubes[c]));
  return acc;
}

MultilinearForm zeta_entries(const ProductCodeFamily& fam, const Vec& alpha, std::uint64_t budget) {
  require(fam.n_qudits < (std::uint64_t{1} << 32), "BudgetExceeded", "level 1 too large for entry indices");
  const Field& f = fam.lift.field();
  const std::size_t r = fam.r, ne = fam.num_edges();
  MultilinearForm form;
  form.field = f;
  form.dims.assign(r, fam.n_qudits);
  std::uint64_t cubes = ipow(ne, r), work = 0;
  std::vector<std::uint64_t> y(r);
  auto perms = all_permutations(r);
  for (std::uint64_t c = 0; c < cubes; ++c) {
    std::uint64_t v = c;
    for (std::size_t k = r; k-- > 0;) y[k] = v % ne, v /= ne;
    elem ay = 1;
    for (std::size_t k = 0; k < r && ay; ++k) ay = f.mul(ay, alpha[y[k]]);
    if (!ay) continue;
    for (const auto& perm : perms) {
      elem base = permutation_sign(perm) == 1 ? ay : f.neg(ay);
      // (index, coefficient) of the basis elements of each slot at its path edge
      std::vector<std::vector<std::pair<std::uint32_t, elem>>> opts(r);
      for (std::size_t h = 0; h < r; ++h) {
        std::size_t d = perm[h];
        std::uint32_t start = path_start(perm, h);
        std::vector<int> levels(r, 0);
        levels[d] = 1;
        std::vector<std::pair<std::vector<std::uint64_t>, elem>> partial{{{}, 1}};
        for (std::size_t k = 0; k < r; ++k) {
          std::vector<std::pair<std::vector<std::uint64_t>, elem>> next;
          for (auto& [idx, coef] : partial) {
            if (k == d) {
              auto i2 = idx;
              i2.push_back(y[k]);
              next.emplace_back(std::move(i2), coef);
              continue;
            }
            const FactorData& fd = fam.data(h, k);
            int b = (start >> k) & 1;
            for (std::size_t j = 0; j < fd.m; ++j) {
              elem hv = fd.h[b][y[k] * fd.m + j];
              if (!hv) continue;
              auto i2 = idx;
              i2.push_back(static_cast<std::uint64_t>(fd.ends[b][y[k]]) * fd.m + j);
              next.emplace_back(std::move(i2), f.mul(coef, hv));
            }
          }
          partial = std::move(next);
        }
        for (auto& [idx, coef] : partial)
          opts[h].emplace_back(static_cast<std::uint32_t>(cell_index(fam, h, levels, idx)), coef);
      }
      std::vector<std::uint32_t> key(r);
      std::function<void(std::size_t, elem)> rec = [&](std::size_t h, elem acc) {
        if (h == r) {
          form.add(key, acc);
          if (++work > budget) fail(ErrorKind::budget_exceeded, "BudgetExceeded", "zeta entry enumeration");
          return;
        }
        for (auto [i, cf] : opts[h]) {
          key[h] = i;
          rec(h + 1, f.mul(acc, cf));
        }
      };
      rec(0, base);
    }
  }
  return form;
}

std::uint64_t zeta_locality_bound(const ProductCodeFamily& fam) {
  const std::size_t r = fam.r;
  std::size_t delta = *fam.lift.base().regular_degree();
  std::vector<std::uint64_t> maxloc(r, 0);
  for (std::size_t h = 0; h < r; ++h)
    for (std::size_t d = 0; d < r; ++d) {
      std::uint64_t p = 1;
      for (std::size_t k = 0; k < r; ++k)
        if (k != d) p *= fam.data(h, k).m;
      maxloc[h] = std::max(maxloc[h], p);
    }
  std::uint64_t best = 0;
  for (std::size_t h = 0; h < r; ++h) {
    std::uint64_t b = ipow(delta, r - 1) * factorial(r - 1);
    for (std::size_t h2 = 0; h2 < r; ++h2)
      if (h2 != h) b *= maxloc[h2];
    best = std::max(best, b);
  }
  return best;
}

namespace {

// sparse tensor over combined keys, sorted, no zeros
using SparseTensor = std::vector<std::pair<std::uint64_t, elem>>;

SparseTensor finish(const Field& f, std::unordered_map<std::uint64_t, elem>& acc) {
  SparseTensor out;
  out.reserve(acc.size());
  for (auto [k, v] : acc)
    if (v) out.emplace_back(k, v);
  std::sort(out.begin(), out.end());
  (void)f;
  return out;
}

// a + c b
SparseTensor tensor_axpy(const Field& f, const SparseTensor& a, elem c, const SparseTensor& b) {
  SparseTensor out;
  out.reserve(a.size() + b.size());
  std::size_t i = 0, j = 0;
  while (i < a.size() || j < b.size()) {
    if (j == b.size() || (i < a.size() && a[i].first < b[j].first)) {
      out.push_back(a[i++]);
    } else if (i == a.size() || b[j].first < a[i].first) {
      elem v = f.mul(c, b[j].second);
      if (v) out.emplace_back(b[j].first, v);
      ++j;
    } else {
      elem v = f.add(a[i].second, f.mul(c, b[j].second));
      if (v) out.emplace_back(a[i].first, v);
      ++i, ++j;
    }
  }
  return out;
}

struct KronTerm {
  elem coef;
  std::vector<const SparseTensor*> parts;
};

// decides sum_p coef_p (x)_k parts_p[k] == 0 by eliminating one tensor factor at a time
bool kron_sum_is_zero(const Field& f, const std::vector<KronTerm>& terms, std::size_t k) {
  std::vector<KronTerm> live;
  for (const auto& t : terms)
    if (t.coef) live.push_back(t);
  if (live.empty()) return true;
  const std::size_t last = live[0].parts.size() - 1;
  if (k == last) {
    SparseTensor acc;
    for (const auto& t : live) acc = tensor_axpy(f, acc, t.coef, *t.parts[k]);
    return acc.empty();
  }
  // express every factor k as a combination of an independent subset
  struct Row {
    SparseTensor v;
    std::vector<elem> combo;  // over indices of live
  };
  std::vector<Row> ech;
  std::vector<std::size_t> basis;                                  // live indices that are independent
  std::vector<std::vector<elem>> expr(live.size());                // over basis positions
  for (std::size_t p = 0; p < live.size(); ++p) {
    SparseTensor v = *live[p].parts[k];
    std::vector<elem> combo(live.size(), 0);
    combo[p] = 1;
    for (const auto& row : ech) {
      auto it = std::lower_bound(v.begin(), v.end(), std::make_pair(row.v[0].first, elem{0}));
      if (it == v.end() || it->first != row.v[0].first) continue;
      elem c = f.neg(f.div(it->second, row.v[0].second));
      v = tensor_axpy(f, v, c, row.v);
      for (std::size_t i = 0; i < combo.size(); ++i) combo[i] = f.add(combo[i], f.mul(c, row.combo[i]));
    }
    if (!v.empty()) {
      basis.push_back(p);
      ech.push_back({std::move(v), std::move(combo)});
      // keep rows ordered by pivot so later reductions see each pivot once
      std::sort(ech.begin(), ech.end(), [](const Row& a, const Row& b) { return a.v[0].first < b.v[0].first; });
      expr[p].assign(live.size(), 0);
      expr[p][p] = 1;
    } else {
      // sum_i combo_i T_i = 0 with combo_p = 1, so T_p = -sum_{i != p} combo_i T_i
      expr[p].assign(live.size(), 0);
      for (std::size_t i = 0; i < live.size(); ++i)
        if (i != p) expr[p][i] = f.neg(combo[i]);
    }
  }
  // combos of dependent rows refer only to earlier independent rows; resolve to basis members
  for (std::size_t bi : basis) {
    std::vector<KronTerm> sub;
    for (std::size_t p = 0; p < live.size(); ++p) {
      elem c = expr[p][bi];
      if (!c) continue;
      sub.push_back({f.mul(live[p].coef, c), live[p].parts});
    }
    if (!kron_sum_is_zero(f, sub, k + 1)) return false;
  }
  return true;
}

}  // namespace

InvarianceReport coboundary_invariance_check(const ProductCodeFamily& fam, const Vec& alpha, std::uint64_t budget) {
  const Field& f = fam.lift.field();
  const std::size_t r = fam.r, ne = fam.num_edges();
  InvarianceReport rep;
  std::vector<std::vector<HPrimeGenerator>> gens(r);
  for (std::size_t h = 0; h < r; ++h) gens[h] = hprime_generators(fam, h);
  auto perms = all_permutations(r);
  for (std::uint32_t S = 1; S < (1u << r); ++S) {
    std::vector<std::size_t> in_s, out_s;
    for (std::size_t h = 0; h < r; ++h) ((S >> h) & 1 ? in_s : out_s).push_back(h);
    // work estimate: edges times the local options of every S slot, per perm and coordinate
    std::uint64_t work = ne * perms.size() * r;
    for (std::size_t h : in_s) {
      std::size_t mm = 0;
      for (std::size_t k = 0; k < r; ++k) mm = std::max(mm, fam.data(h, k).m);
      work *= 2 * std::max<std::size_t>(mm, 1);
    }
    std::uint64_t choices = 1;
    for (std::size_t h : out_s) choices *= gens[h].size();
    if (work * choices > budget) {
      rep.complete = false;
      continue;
    }
    ++rep.subsets;
    std::uint64_t vertex_tuples = 1;
    for (std::size_t h : in_s)
      for (std::size_t k = 0; k < r; ++k) vertex_tuples *= fam.data(h, k).nv * fam.data(h, k).m;
    for (std::uint64_t ch = 0; ch < choices; ++ch) {
      std::vector<const SlotCochain*> fixed(r, nullptr);
      std::uint64_t v = ch;
      for (std::size_t h : out_s) {
        fixed[h] = &gens[h][v % gens[h].size()].cochain;
        v /= gens[h].size();
      }
      std::vector<std::vector<SparseTensor>> store;
      std::vector<KronTerm> terms;
      store.reserve(perms.size() * 4);
      for (const auto& perm : perms) {
        // H' generators carry one term each, in their own direction
        bool fits = true;
        for (std::size_t h : out_s) fits &= fixed[h]->terms.size() == 1 && fixed[h]->terms[0].dir == perm[h];
        if (!fits) continue;
        std::vector<SparseTensor> parts(r);
        for (std::size_t k = 0; k < r; ++k) {
          // fixed slots contribute a scalar per edge
          Vec base = alpha;
          for (std::size_t h : out_s) {
            const TensorTerm& term = fixed[h]->terms[0];
            int b = (path_start(perm, h) >> k) & 1;
            Vec vals = coordinate_values(f, fam.data(h, k), term.parts[k], k == term.dir, b);
            for (std::size_t y = 0; y < ne; ++y) base[y] = f.mul(base[y], vals[y]);
          }
          std::unordered_map<std::uint64_t, elem> acc;
          for (std::size_t y = 0; y < ne; ++y) {
            if (!base[y]) continue;
            // options (local basis index, coefficient) per S slot
            std::vector<std::vector<std::pair<std::uint64_t, elem>>> opts;
            for (std::size_t h : in_s) {
              const FactorData& fd = fam.data(h, k);
              std::vector<std::pair<std::uint64_t, elem>> o;
              if (perm[h] == k) {
                for (int b = 0; b < 2; ++b)
                  for (std::size_t j = 0; j < fd.m; ++j) {
                    elem hv = fd.h[b][y * fd.m + j];
                    if (hv) o.emplace_back(static_cast<std::uint64_t>(fd.ends[b][y]) * fd.m + j, f.mul(sign_elem(f, b), hv));
                  }
              } else {
                int b = (path_start(perm, h) >> k) & 1;
                for (std::size_t j = 0; j < fd.m; ++j) {
                  elem hv = fd.h[b][y * fd.m + j];
                  if (hv) o.emplace_back(static_cast<std::uint64_t>(fd.ends[b][y]) * fd.m + j, hv);
                }
              }
              opts.push_back(std::move(o));
            }
            std::function<void(std::size_t, std::uint64_t, elem)> rec = [&](std::size_t i, std::uint64_t key, elem c) {
              if (i == opts.size()) {
                elem& slot = acc[key];
                slot = f.add(slot, c);
                return;
              }
              const FactorData& fd = fam.data(in_s[i], k);
              std::uint64_t radix = fd.nv * fd.m;
              for (auto [idx, cf] : opts[i]) rec(i + 1, key * radix + idx, f.mul(c, cf));
            };
            rec(0, 0, base[y]);
          }
          parts[k] = finish(f, acc);
        }
        store.push_back(std::move(parts));
        KronTerm kt;
        kt.coef = permutation_sign(perm) == 1 ? 1 : f.neg(1);
        for (const auto& p : store.back()) kt.parts.push_back(&p);
        terms.push_back(std::move(kt));
      }
      rep.tuples += vertex_tuples;
      if (!kron_sum_is_zero(f, terms, 0)) {
        rep.ok = false;
        std::ostringstream w;
        w << "S = {";
        for (std::size_t i = 0; i < in_s.size(); ++i) w << (i ? "," : "") << in_s[i] + 1;
        w << "}, generator choice " << ch;
        if (rep.witness.empty()) rep.witness = w.str();
      }
    }
  }
  return rep;
}

InvarianceReport coboundary_invariance_explicit(const ProductCodeFamily& fam, std::uint64_t budget) {
  require(fam.materialized(), "NotMaterialized", "explicit check needs the materialized complexes");
  const std::size_t r = fam.r;
  Vec alpha_cubes = alpha_explicit(fam, std::uint64_t{1} << 40);
  std::vector<std::vector<Vec>> gens(r), cob(r);
  for (std::size_t h = 0; h < r; ++h) {
    for (const auto& g : hprime_generators(fam, h)) gens[h].push_back(materialize(fam, h, g.cochain));
    SparseMatrix d0 = fam.complexes[h].boundary(1);  // rows: level 0, columns: level 1
    for (std::size_t x = 0; x < d0.rows(); ++x) cob[h].push_back(to_dense(d0.row(x), fam.n_qudits));
  }
  InvarianceReport rep;
  for (std::uint32_t S = 1; S < (1u << r); ++S) {
    std::uint64_t count = 1;
    for (std::size_t h = 0; h < r; ++h) count *= ((S >> h) & 1) ? cob[h].size() : gens[h].size();
    if (count > budget) {
      rep.complete = false;
      continue;
    }
    ++rep.subsets;
    for (std::uint64_t c = 0; c < count; ++c) {
      std::uint64_t v = c;
      std::vector<Vec> tuple(r);
      for (std::size_t h = r; h-- > 0;) {
        const auto& pool = ((S >> h) & 1) ? cob[h] : gens[h];
        tuple[h] = pool[v % pool.size()];
        v /= pool.size();
      }
      ++rep.tuples;
      if (zeta_explicit(fam, alpha_cubes, tuple) != 0) {
        rep.ok = false;
        if (rep.witness.empty()) rep.witness = "S mask " + std::to_string(S) + ", tuple " + std::to_string(c);
      }
    }
  }
  return rep;
}

std::vector<std::vector<SlotCochain>> subrank_vectors(const ProductCodeFamily& fam) {
  const Field& f = fam.lift.field();
  const std::size_t r = fam.r, t = fam.lift.t();
  std::vector<Point> apts = a_points(fam);
  // Lagrange polynomial over A for each point of A (the A_0 factor is constant)
  std::vector<Polynomial> lag;
  for (const auto& p : apts) {
    Polynomial l = Polynomial::constant(f, t + 1, 1);
    for (std::size_t i = 1; i <= t; ++i) l = l * lagrange(f, t + 1, i, fam.a_sets[i], p[i]);
    lag.push_back(l);
  }
  Exponent mexp = family_monomial_m(fam);
  Polynomial mpoly = Polynomial::monomial(f, mexp);
  std::vector<Vec> low, high;
  for (std::size_t i = 0; i < apts.size(); ++i) {
    low.push_back(iota0(fam.small, lag[i]));
    Polynomial top = (mpoly * lag[i]).scaled(f.inv(mpoly.eval(apts[i])));
    high.push_back(iota1(fam.lift, top));
  }
  std::uint64_t s = ipow(apts.size(), r);
  std::vector<std::vector<SlotCochain>> out(r);
  for (std::size_t h = 0; h < r; ++h)
    for (std::uint64_t c = 0; c < s; ++c) {
      std::uint64_t v = c;
      std::vector<std::size_t> ys(r);
      for (std::size_t k = r; k-- > 0;) ys[k] = v % apts.size(), v /= apts.size();
      TensorTerm term;
      term.dir = h;
      for (std::size_t k = 0; k < r; ++k) term.parts.push_back(k == h ? high[ys[k]] : low[ys[k]]);
      SlotCochain sc;
      sc.terms.push_back(std::move(term));
      out[h].push_back(std::move(sc));
    }
  return out;
}

SubrankReport subrank_certificate(const ProductCodeFamily& fam, const Vec& alpha, std::uint64_t samples,
                                  std::uint64_t seed, std::uint64_t exhaustive_limit) {
  const Field& f = fam.lift.field();
  const std::size_t r = fam.r;
  auto vecs = subrank_vectors(fam);
  SubrankReport rep;
  rep.s = vecs[0].size();
  rep.seed = seed;
  // every vector carries one pure term in its own direction, so only the identity path
  // contributes and zeta factors into per-coordinate sums; cache the coordinate values
  const std::size_t ne = fam.num_edges();
  std::vector<std::vector<std::vector<Vec>>> vals(r, std::vector<std::vector<Vec>>(rep.s));
  std::vector<std::size_t> id(r);
  std::iota(id.begin(), id.end(), 0);
  for (std::size_t h = 0; h < r; ++h)
    for (std::size_t j = 0; j < rep.s; ++j)
      for (std::size_t k = 0; k < r; ++k) {
        const TensorTerm& term = vecs[h][j].terms[0];
        int b = (path_start(id, h) >> k) & 1;
        vals[h][j].push_back(coordinate_values(f, fam.data(h, k), term.parts[k], k == term.dir, b));
      }
  auto eval = [&](const std::vector<std::size_t>& js) {
    elem value = 1;
    for (std::size_t k = 0; k < r && value; ++k) {
      elem s = 0;
      for (std::size_t y = 0; y < ne; ++y) {
        elem p = alpha[y];
        for (std::size_t h = 0; h < r && p; ++h) p = f.mul(p, vals[h][js[h]][k][y]);
        s = f.add(s, p);
      }
      value = f.mul(value, s);
    }
    return value;
  };
  auto check = [&](const std::vector<std::size_t>& js) {
    bool diag = std::all_of(js.begin(), js.end(), [&](std::size_t j) { return j == js[0]; });
    elem got = eval(js);
    ++rep.checked;
    if (got != (diag ? 1u : 0u)) {
      rep.ok = false;
      if (rep.witness.empty()) {
        std::ostringstream w;
        w << "tuple (";
        for (std::size_t i = 0; i < r; ++i) w << (i ? "," : "") << js[i];
        w << ") gives " << got;
        rep.witness = w.str();
      }
    }
  };
  std::uint64_t total = ipow(rep.s, r);
  std::vector<std::size_t> js(r);
  if (total <= exhaustive_limit) {
    rep.exhaustive = true;
    for (std::uint64_t c = 0; c < total; ++c) {
      std::uint64_t v = c;
      for (std::size_t k = r; k-- > 0;) js[k] = v % rep.s, v /= rep.s;
      check(js);
    }
  } else {
    rep.exhaustive = false;
    std::mt19937_64 rng(seed);
    for (std::uint64_t n = 0; n < samples; ++n) {
      // half of the samples on the diagonal, where the value must be 1
      if (n % 2 == 0) {
        std::size_t j = rng() % rep.s;
        std::fill(js.begin(), js.end(), j);
      } else {
        for (auto& j : js) j = rng() % rep.s;
      }
      check(js);
    }
  }
  return rep;
}

}  // namespace rmlift
