#include "rmlift/complex.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <unordered_map>

#include <nlohmann/json.hpp>

#include "rmlift/error.hpp"

namespace rmlift {

ChainComplex::ChainComplex(const Field& f, std::vector<std::size_t> dims, std::vector<SparseMatrix> boundaries)
    : f_(f), dims_(std::move(dims)), bd_(std::move(boundaries)) {
  require(!dims_.empty(), "DimensionMismatch", "complex needs at least one level");
  require(bd_.size() + 1 == dims_.size(), "DimensionMismatch", "need one boundary map per positive level");
  for (std::size_t i = 1; i < dims_.size(); ++i) {
    const SparseMatrix& d = bd_[i - 1];
    require(d.rows() == dims_[i - 1] && d.cols() == dims_[i], "DimensionMismatch",
            "boundary " + std::to_string(i) + " has the wrong shape");
  }
}

SparseMatrix ChainComplex::boundary(std::size_t i) const {
  if (i >= 1 && i < dims_.size()) return bd_[i - 1];
  return SparseMatrix(i == 0 ? 0 : dim(i - 1), dim(i));
}

void ChainComplex::set_labels(std::vector<std::vector<std::string>> labels) {
  require(labels.size() == dims_.size(), "DimensionMismatch", "one label list per level");
  for (std::size_t i = 0; i < labels.size(); ++i) {
    require(labels[i].size() == dims_[i], "DimensionMismatch", "label count differs from level dimension");
    std::vector<std::string> s = labels[i];
    std::sort(s.begin(), s.end());
    require(std::adjacent_find(s.begin(), s.end()) == s.end(), "DuplicateLabel", "basis labels must be unique");
  }
  labels_ = std::move(labels);
}

void ChainComplex::set_blocks(std::vector<std::vector<std::uint32_t>> blocks) {
  require(blocks.size() == dims_.size(), "DimensionMismatch", "one block list per level");
  for (std::size_t i = 0; i < blocks.size(); ++i)
    require(blocks[i].size() == dims_[i], "DimensionMismatch", "block count differs from level dimension");
  blocks_ = std::move(blocks);
}

void ChainComplex::set_types(std::vector<std::vector<std::string>> types) {
  require(types.size() == dims_.size(), "DimensionMismatch", "one type list per level");
  for (std::size_t i = 0; i < types.size(); ++i) {
    require(types[i].size() == dims_[i], "DimensionMismatch", "type count differs from level dimension");
    for (const auto& t : types[i])
      require(CubicalType{t}.valid(i), "BadType", "cubical type '" + t + "' does not match level " + std::to_string(i));
  }
  types_ = std::move(types);
}

std::string ChainComplex::label(std::size_t level, std::size_t i) const {
  if (labels_.empty()) return std::to_string(i);
  return labels_.at(level).at(i);
}

std::uint32_t ChainComplex::block(std::size_t level, std::size_t i) const {
  if (blocks_.empty()) return static_cast<std::uint32_t>(i);
  return blocks_.at(level).at(i);
}

void ChainComplex::validate() const {
  for (std::size_t i = 1; i + 1 < dims_.size(); ++i) {
    if (!bd_[i - 1].multiply(f_, bd_[i]).is_zero())
      fail(ErrorKind::check_failed, "BoundarySquareNonzero",
           "d_" + std::to_string(i) + " d_" + std::to_string(i + 1) + " != 0");
  }
}

bool ChainComplex::is_valid() const {
  try {
    validate();
    return true;
  } catch (const Error&) {
    return false;
  }
}

namespace {

template <typename T>
std::vector<T> reversed(std::vector<T> v) {
  std::reverse(v.begin(), v.end());
  return v;
}

}  // namespace

ChainComplex dual_complex(const ChainComplex& c) {
  std::size_t r = c.top();
  std::vector<std::size_t> dims = reversed(c.dims());
  std::vector<SparseMatrix> bd;
  // level j of the dual is level r - j; its boundary is delta_{r-j}
  for (std::size_t j = 1; j <= r; ++j) bd.push_back(c.coboundary(r - j));
  ChainComplex d(c.field(), dims, std::move(bd));
  if (c.has_labels()) d.set_labels(reversed(c.labels()));
  if (c.has_blocks()) d.set_blocks(reversed(c.blocks()));
  return d;
}

ChainComplex complex_from_parity(const Field& f, const SparseMatrix& h) {
  return ChainComplex(f, {h.cols(), h.rows()}, {h.transpose()});
}

ChainComplex complex_from_css(const Field& f, const SparseMatrix& hx, const SparseMatrix& hz) {
  require(hx.cols() == hz.cols(), "DimensionMismatch", "H_X and H_Z lengths differ");
  ChainComplex c(f, {hx.rows(), hx.cols(), hz.rows()}, {hx, hz.transpose()});
  c.validate();
  return c;
}

void IncidenceComplex::validate() const {
  require(relations.size() + 1 == sizes.size(), "DimensionMismatch", "one relation list per positive level");
  for (std::size_t i = 0; i < relations.size(); ++i)
    for (const auto& r : relations[i]) {
      require(r.hi < sizes[i + 1] && r.lo < sizes[i], "IndexOutOfRange", "incidence outside the poset");
      require(r.sign == 1 || r.sign == -1, "BadIncidence", "incidence numbers must be +1 or -1");
    }
  for (std::size_t i = 0; i + 1 < relations.size(); ++i) {
    std::vector<std::vector<std::pair<std::uint32_t, int>>> down(sizes[i + 1]);
    for (const auto& r : relations[i]) down[r.hi].emplace_back(r.lo, r.sign);
    std::map<std::pair<std::uint32_t, std::uint32_t>, int> acc;
    for (const auto& r : relations[i + 1])
      for (auto [lo, s] : down[r.lo]) acc[{r.hi, lo}] += r.sign * s;
    for (const auto& [k, v] : acc)
      if (v != 0) fail(ErrorKind::check_failed, "BoundarySquareNonzero", "integer coboundaries do not compose to zero");
  }
}

IncidenceComplex incidence_from_graph(const MultiGraph& g) {
  IncidenceComplex inc;
  inc.sizes = {g.num_vertices(), g.num_edges()};
  inc.relations.resize(1);
  for (std::size_t e = 0; e < g.num_edges(); ++e) {
    auto id = static_cast<std::uint32_t>(e);
    inc.relations[0].push_back({id, g.edge(e).v0, 1});
    inc.relations[0].push_back({id, g.edge(e).v1, -1});
  }
  if (g.bipartite()) {
    std::vector<std::string> vt(g.num_vertices());
    for (std::size_t v = 0; v < vt.size(); ++v) vt[v] = v < g.part0_size() ? "0" : "1";
    inc.types = {vt, std::vector<std::string>(g.num_edges(), "*")};
  }
  return inc;
}

namespace {

void check_local_shapes(const IncidenceComplex& inc, const LocalSystem& loc) {
  require(loc.dims.size() == inc.sizes.size(), "DimensionMismatch", "local dimensions per level");
  for (std::size_t i = 0; i < inc.sizes.size(); ++i)
    require(loc.dims[i].size() == inc.sizes[i], "DimensionMismatch", "one local dimension per element");
  require(loc.maps.size() == inc.relations.size(), "DimensionMismatch", "local maps per level");
  for (std::size_t i = 0; i < inc.relations.size(); ++i) {
    require(loc.maps[i].size() == inc.relations[i].size(), "DimensionMismatch", "one local map per incidence");
    for (std::size_t k = 0; k < inc.relations[i].size(); ++k) {
      const auto& r = inc.relations[i][k];
      const Mat& m = loc.maps[i][k];
      require(m.size() == loc.dims[i + 1][r.hi], "DimensionMismatch", "local map row count");
      for (const auto& row : m) require(row.size() == loc.dims[i][r.lo], "DimensionMismatch", "local map column count");
    }
  }
}

}  // namespace

void check_composition(const Field& f, const IncidenceComplex& inc, const LocalSystem& loc) {
  check_local_shapes(inc, loc);
  for (std::size_t i = 0; i + 1 < inc.relations.size(); ++i) {
    std::vector<std::vector<std::size_t>> down(inc.sizes[i + 1]);
    for (std::size_t k = 0; k < inc.relations[i].size(); ++k) down[inc.relations[i][k].hi].push_back(k);
    std::map<std::pair<std::uint32_t, std::uint32_t>, Mat> seen;
    for (std::size_t k2 = 0; k2 < inc.relations[i + 1].size(); ++k2) {
      const auto& r2 = inc.relations[i + 1][k2];
      for (std::size_t k1 : down[r2.lo]) {
        const auto& r1 = inc.relations[i][k1];
        Mat comp = loc.dims[i][r1.lo] == 0 || loc.dims[i + 2][r2.hi] == 0
                       ? Mat(loc.dims[i + 2][r2.hi], Vec(loc.dims[i][r1.lo], 0))
                       : dense_multiply(f, loc.maps[i + 1][k2], loc.maps[i][k1]);
        auto [it, fresh] = seen.emplace(std::make_pair(r2.hi, r1.lo), comp);
        if (!fresh && it->second != comp)
          fail(ErrorKind::check_failed, "CompositionLawViolated",
               "paths from element " + std::to_string(r1.lo) + " at level " + std::to_string(i) + " to element " +
                   std::to_string(r2.hi) + " disagree");
      }
    }
  }
}

ChainComplex sheaf_complex(const Field& f, const IncidenceComplex& inc, const LocalSystem& loc) {
  inc.validate();
  check_composition(f, inc, loc);
  std::size_t levels = inc.sizes.size();
  std::vector<std::vector<std::size_t>> off(levels);
  std::vector<std::size_t> dims(levels, 0);
  std::vector<std::vector<std::uint32_t>> blocks(levels);
  for (std::size_t i = 0; i < levels; ++i) {
    off[i].resize(inc.sizes[i]);
    for (std::size_t x = 0; x < inc.sizes[i]; ++x) {
      off[i][x] = dims[i];
      dims[i] += loc.dims[i][x];
      blocks[i].insert(blocks[i].end(), loc.dims[i][x], static_cast<std::uint32_t>(x));
    }
  }
  std::vector<SparseMatrix> bd;
  for (std::size_t i = 0; i + 1 < levels; ++i) {
    std::vector<Triplet> t;
    for (std::size_t k = 0; k < inc.relations[i].size(); ++k) {
      const auto& r = inc.relations[i][k];
      elem s = f.from_int(r.sign);
      const Mat& m = loc.maps[i][k];
      for (std::size_t a = 0; a < m.size(); ++a)
        for (std::size_t b = 0; b < m[a].size(); ++b)
          if (m[a][b])
            t.emplace_back(static_cast<std::uint32_t>(off[i][r.lo] + b), static_cast<std::uint32_t>(off[i + 1][r.hi] + a),
                           f.mul(s, m[a][b]));
    }
    bd.push_back(SparseMatrix::from_triplets(f, dims[i], dims[i + 1], t));
  }
  ChainComplex c(f, dims, std::move(bd));
  c.set_blocks(blocks);
  if (!inc.types.empty()) {
    std::vector<std::vector<std::string>> types(levels);
    for (std::size_t i = 0; i < levels; ++i)
      for (std::size_t x = 0; x < inc.sizes[i]; ++x) types[i].insert(types[i].end(), loc.dims[i][x], inc.types[i][x]);
    c.set_types(types);
  }
  c.validate();
  return c;
}

ChainComplex sipser_spielman(const Field& f, const MultiGraph& g, const std::vector<Mat>& h) {
  require(g.regular_degree().has_value(), "NotRegular", "Sipser-Spielman complexes need a regular graph");
  require(h.size() == g.num_vertices(), "DimensionMismatch", "one local matrix per vertex");
  IncidenceComplex inc = incidence_from_graph(g);
  LocalSystem loc;
  loc.dims = {std::vector<std::size_t>(g.num_vertices()), std::vector<std::size_t>(g.num_edges(), 1)};
  for (std::size_t v = 0; v < g.num_vertices(); ++v) {
    loc.dims[0][v] = h[v].size();
    for (const auto& row : h[v]) require(row.size() == g.degree(v), "DimensionMismatch", "local matrix width must equal the degree");
    require(h[v].size() <= g.degree(v), "RankDeficient", "local matrix has more rows than edges");
    require(dense_rank(f, h[v]) == h[v].size(), "RankDeficient", "local matrix at vertex " + std::to_string(v) + " is not full rank");
  }
  // position of each edge inside the incidence list of each endpoint
  std::vector<std::uint32_t> pos0(g.num_edges()), pos1(g.num_edges());
  for (std::size_t v = 0; v < g.num_vertices(); ++v) {
    const auto& inc_v = g.incident(v);
    for (std::size_t k = 0; k < inc_v.size(); ++k) {
      std::uint32_t e = inc_v[k];
      (g.edge(e).v0 == v ? pos0 : pos1)[e] = static_cast<std::uint32_t>(k);
    }
  }
  loc.maps.resize(1);
  for (const auto& r : inc.relations[0]) {
    std::uint32_t pos = r.sign == 1 ? pos0[r.hi] : pos1[r.hi];
    const Mat& hv = h[r.lo];
    Mat m(1, Vec(hv.size()));
    for (std::size_t j = 0; j < hv.size(); ++j) m[0][j] = hv[j][pos];
    loc.maps[0].push_back(std::move(m));
  }
  return sheaf_complex(f, inc, loc);
}

std::size_t homology_dim(const ChainComplex& c, std::size_t i) {
  const Field& f = c.field();
  return c.dim(i) - rank(f, c.boundary(i)) - rank(f, c.boundary(i + 1));
}

std::size_t cohomology_dim(const ChainComplex& c, std::size_t i) {
  const Field& f = c.field();
  std::size_t rd = rank(f, c.coboundary(i));
  std::size_t rb = i == 0 ? 0 : rank(f, c.coboundary(i - 1));
  return c.dim(i) - rd - rb;
}

std::vector<SparseVec> homology_basis(const ChainComplex& c, std::size_t i) {
  const Field& f = c.field();
  EchelonBasis eb(f, c.dim(i));
  SparseMatrix bt = c.boundary(i + 1).transpose();
  for (std::size_t k = 0; k < bt.rows(); ++k) eb.insert(bt.row(k));
  std::vector<SparseVec> out;
  for (const auto& z : kernel(f, c.boundary(i)))
    if (eb.insert(z)) out.push_back(z);
  return out;
}

std::vector<SparseVec> cohomology_basis(const ChainComplex& c, std::size_t i) {
  return homology_basis(dual_complex(c), c.top() - i);
}

bool is_cycle(const ChainComplex& c, std::size_t i, const SparseVec& v) {
  return c.boundary(i).apply(c.field(), v).empty();
}

bool is_boundary(const ChainComplex& c, std::size_t i, const SparseVec& v) {
  return in_row_space(c.field(), c.boundary(i + 1).transpose(), v);
}

bool is_cocycle(const ChainComplex& c, std::size_t i, const SparseVec& v) {
  return c.coboundary(i).apply(c.field(), v).empty();
}

bool is_coboundary(const ChainComplex& c, std::size_t i, const SparseVec& v) {
  if (i == 0) return v.empty();
  return in_row_space(c.field(), c.boundary(i), v);
}

std::int64_t euler_characteristic(const ChainComplex& c) {
  std::int64_t chi = 0;
  for (std::size_t i = 0; i < c.num_levels(); ++i)
    chi += (i % 2 == 0 ? 1 : -1) * static_cast<std::int64_t>(c.dim(i));
  return chi;
}

namespace {

// weight tracker under the coordinate or block norm
struct WeightTracker {
  std::vector<std::uint32_t> block;  // empty for the coordinate norm
  std::vector<std::uint32_t> count;
  std::uint64_t w = 0;

  void change(std::uint32_t j, bool was_nonzero, bool now_nonzero) {
    if (was_nonzero == now_nonzero) return;
    if (block.empty()) {
      w += now_nonzero ? 1 : -1;
      return;
    }
    std::uint32_t b = block[j];
    if (now_nonzero) {
      if (count[b]++ == 0) ++w;
    } else if (--count[b] == 0) {
      --w;
    }
  }
};

std::uint64_t checked_power(std::uint64_t q, std::size_t k, std::uint64_t budget) {
  std::uint64_t total = 1;
  for (std::size_t i = 0; i < k; ++i) {
    if (total > budget / q) return 0;
    total *= q;
  }
  return total;
}

// min weight of sum a_j h_j + sum c_i b_i over nonzero a, enumerating all coefficients
std::uint64_t enumerate_coset_min(const Field& f, std::size_t n, const std::vector<SparseVec>& b,
                                  const std::vector<SparseVec>& h, const std::vector<std::uint32_t>& blocks,
                                  std::uint64_t total) {
  std::vector<SparseVec> rows = b;
  rows.insert(rows.end(), h.begin(), h.end());
  std::size_t k = rows.size(), nb = b.size();
  WeightTracker wt;
  if (!blocks.empty()) {
    wt.block = blocks;
    wt.count.assign(*std::max_element(blocks.begin(), blocks.end()) + 1, 0);
  }
  Vec word(n, 0);
  std::vector<elem> digit(k, 0);
  std::size_t nonzero_high = 0;
  std::uint64_t best = kInfinity;
  for (std::uint64_t it = 1; it < total; ++it) {
    std::size_t i = 0;
    while (true) {
      elem old = digit[i];
      elem nw = (old + 1 == f.q()) ? 0 : old + 1;
      digit[i] = nw;
      if (i >= nb) nonzero_high += (nw != 0) - (old != 0);
      elem delta = f.sub(nw, old);
      for (auto [j, v] : rows[i]) {
        elem before = word[j];
        word[j] = f.add(before, f.mul(delta, v));
        wt.change(j, before != 0, word[j] != 0);
      }
      if (nw != 0) break;
      ++i;
    }
    if (nonzero_high > 0) best = std::min(best, wt.w);
  }
  return best;
}

struct SubsetSearch {
  std::uint64_t found = kInfinity;  // weight of the lightest nontrivial class found
  std::uint64_t checked_below = 0;  // every weight < this was excluded
};

// smallest w such that some union of w units supports a class in Z \ B
SubsetSearch subset_search(const Field& f, const SparseMatrix& d, const std::vector<SparseVec>& bbasis,
                           const std::vector<std::vector<std::uint32_t>>& units, std::uint64_t budget) {
  std::size_t n = d.cols(), u = units.size();
  Mat dd = d.to_dense();
  Mat bd(bbasis.size());
  for (std::size_t i = 0; i < bbasis.size(); ++i) bd[i] = to_dense(bbasis[i], n);
  std::size_t dim_b = bbasis.size();
  SubsetSearch res;
  res.checked_below = 1;
  std::uint64_t spent = 0;
  for (std::size_t w = 1; w <= u; ++w) {
    std::vector<char> sel(u, 0);
    std::fill(sel.end() - static_cast<std::ptrdiff_t>(w), sel.end(), 1);
    do {
      if (++spent > budget) return res;
      std::vector<char> in(n, 0);
      std::size_t size = 0;
      for (std::size_t k = 0; k < u; ++k)
        if (sel[k])
          for (auto j : units[k]) in[j] = 1, ++size;
      Mat ds(dd.size()), bc(dim_b);
      for (std::size_t r = 0; r < dd.size(); ++r)
        for (std::size_t j = 0; j < n; ++j)
          if (in[j]) ds[r].push_back(dd[r][j]);
      for (std::size_t r = 0; r < dim_b; ++r)
        for (std::size_t j = 0; j < n; ++j)
          if (!in[j]) bc[r].push_back(bd[r][j]);
      std::size_t dim_z = size - (ds.empty() || size == 0 ? 0 : dense_rank(f, ds));
      std::size_t dim_bs = dim_b - (bc.empty() || size == n ? 0 : dense_rank(f, bc));
      if (dim_z > dim_bs) {
        res.found = w;
        return res;
      }
    } while (std::next_permutation(sel.begin(), sel.end()));
    res.checked_below = w + 1;
  }
  return res;
}

}  // namespace

DistanceResult systolic_distance(const ChainComplex& c, std::size_t i, DistanceMode mode, std::uint64_t budget,
                                 bool block_norm) {
  const Field& f = c.field();
  require(i < c.num_levels(), "BadLevel", "level outside the complex");
  std::size_t n = c.dim(i);
  SparseMatrix d = c.boundary(i);
  std::vector<SparseVec> bbasis = row_space(f, c.boundary(i + 1).transpose());
  std::vector<SparseVec> hbasis = homology_basis(c, i);
  DistanceResult res;
  if (hbasis.empty()) {
    res.method = "trivial";
    return res;
  }
  std::vector<std::uint32_t> blocks;
  if (block_norm && c.has_blocks()) blocks = c.blocks()[i];
  std::uint64_t total = checked_power(f.q(), bbasis.size() + hbasis.size(), budget);
  if (total != 0) {
    res.value = enumerate_coset_min(f, n, bbasis, hbasis, blocks, total);
    res.method = "enumeration";
    return res;
  }
  std::vector<std::vector<std::uint32_t>> units;
  if (blocks.empty()) {
    for (std::uint32_t j = 0; j < n; ++j) units.push_back({j});
  } else {
    std::map<std::uint32_t, std::vector<std::uint32_t>> by_block;
    for (std::uint32_t j = 0; j < n; ++j) by_block[blocks[j]].push_back(j);
    for (auto& [b, js] : by_block) units.push_back(js);
  }
  if (mode == DistanceMode::exact && units.size() > 24)
    fail(ErrorKind::budget_exceeded, "BudgetExceeded", "exact distance needs q^dim Z within budget or at most 24 units");
  // exact mode over at most 24 units is always affordable; the budget caps bounded searches
  SubsetSearch s = subset_search(f, d, bbasis, units, mode == DistanceMode::exact ? kInfinity : budget);
  res.method = "support search";
  if (s.found != kInfinity) {
    res.value = s.found;
    return res;
  }
  if (mode == DistanceMode::exact)
    fail(ErrorKind::budget_exceeded, "BudgetExceeded", "support search exceeded budget");
  res.value = s.checked_below;
  res.exact = false;
  return res;
}

DistanceResult cosystolic_distance(const ChainComplex& c, std::size_t i, DistanceMode mode, std::uint64_t budget,
                                   bool block_norm) {
  require(i < c.num_levels(), "BadLevel", "level outside the complex");
  return systolic_distance(dual_complex(c), c.top() - i, mode, budget, block_norm);
}

double Ratio::value() const {
  if (infinite()) return std::numeric_limits<double>::infinity();
  return static_cast<double>(num) / static_cast<double>(den);
}

bool Ratio::operator<(const Ratio& o) const {
  if (infinite()) return false;
  if (o.infinite()) return true;
  return num * o.den < o.num * den;
}

Ratio kernel_expansion(const Field& f, const SparseMatrix& m, std::uint64_t budget) {
  std::size_t n = m.cols();
  std::uint64_t total = checked_power(f.q(), n, budget);
  if (total == 0) fail(ErrorKind::budget_exceeded, "BudgetExceeded", "expansion oracle exceeds budget");
  SparseMatrix mt = m.transpose();
  Vec x(n, 0), y(m.rows(), 0);
  std::uint64_t wx = 0, wy = 0;
  // cosets of ker M are indexed by the image M x
  std::unordered_map<std::string, std::pair<std::uint64_t, std::uint64_t>> coset;
  auto key = [&]() {
    std::string s(y.size() * sizeof(elem), '\0');
    std::copy(reinterpret_cast<const char*>(y.data()), reinterpret_cast<const char*>(y.data() + y.size()), s.begin());
    return s;
  };
  for (std::uint64_t it = 1; it < total; ++it) {
    std::size_t i = 0;
    while (true) {
      elem old = x[i];
      elem nw = (old + 1 == f.q()) ? 0 : old + 1;
      x[i] = nw;
      wx += (nw != 0) - (old != 0);
      elem delta = f.sub(nw, old);
      for (auto [r, v] : mt.row(i)) {
        elem before = y[r];
        y[r] = f.add(before, f.mul(delta, v));
        wy += (y[r] != 0) - (before != 0);
      }
      if (nw != 0) break;
      ++i;
    }
    if (wy == 0) continue;
    auto [pos, fresh] = coset.emplace(key(), std::make_pair(wx, wy));
    if (!fresh) pos->second.first = std::min(pos->second.first, wx);
  }
  Ratio best;
  for (const auto& [k, v] : coset) {
    Ratio r{v.second, v.first};
    if (r < best) best = r;
  }
  return best;
}

Ratio cycle_expansion(const ChainComplex& c, std::size_t i, std::uint64_t budget) {
  return kernel_expansion(c.field(), c.boundary(i), budget);
}

Ratio cocycle_expansion(const ChainComplex& c, std::size_t i, std::uint64_t budget) {
  return kernel_expansion(c.field(), c.coboundary(i), budget);
}

SSBound ss_distance_bound(double lambda2, std::size_t delta, std::size_t num_vertices, std::uint64_t d_loc,
                          std::uint64_t d_loc_dual) {
  require(delta > 0, "BadDegree", "degree must be positive");
  SSBound b;
  double dv = static_cast<double>(d_loc), dd = static_cast<double>(d_loc_dual), nv = static_cast<double>(num_vertices);
  double dl = static_cast<double>(delta);
  b.d1 = (dv - lambda2) * dv / (2 * dl) * nv;
  b.d0 = (dd - lambda2) / dl * nv;
  b.d1_vacuous = b.d1 <= 0;
  b.d0_vacuous = b.d0 <= 0;
  return b;
}

SSBound ss_distance_bound(const MultiGraph& g, std::uint64_t d_loc, std::uint64_t d_loc_dual) {
  auto delta = g.regular_degree();
  require(delta.has_value(), "NotRegular", "distance bound needs a regular graph");
  return ss_distance_bound(lambda2(g), *delta, g.num_vertices(), d_loc, d_loc_dual);
}

namespace {

std::pair<std::size_t, std::size_t> block_range(const ChainComplex& a, const ChainComplex& b, std::size_t i) {
  std::size_t lo = i > b.top() ? i - b.top() : 0;
  std::size_t hi = std::min(i, a.top());
  return {lo, hi};
}

elem sign_of(const Field& f, std::size_t j) { return j % 2 == 0 ? 1 : f.neg(1); }

// assigns dense ids to (j, block_a, block_b) keys in first-seen order
struct BlockIds {
  std::map<std::tuple<std::size_t, std::uint32_t, std::uint32_t>, std::uint32_t> ids;
  std::uint32_t get(std::size_t j, std::uint32_t x, std::uint32_t y) {
    auto [it, fresh] = ids.emplace(std::make_tuple(j, x, y), static_cast<std::uint32_t>(ids.size()));
    return it->second;
  }
};

}  // namespace

std::size_t tensor_offset(const ChainComplex& a, const ChainComplex& b, std::size_t i, std::size_t j) {
  auto [lo, hi] = block_range(a, b, i);
  require(j >= lo && j <= hi, "BadLevel", "block outside the tensor level");
  std::size_t off = 0;
  for (std::size_t k = lo; k < j; ++k) off += a.dim(k) * b.dim(i - k);
  return off;
}

ChainComplex tensor_product(const ChainComplex& a, const ChainComplex& b) {
  require(a.field() == b.field(), "FieldMismatch", "factors over different fields");
  const Field& f = a.field();
  std::size_t r = a.top() + b.top();
  std::vector<std::size_t> dims(r + 1, 0);
  for (std::size_t i = 0; i <= r; ++i) {
    auto [lo, hi] = block_range(a, b, i);
    for (std::size_t j = lo; j <= hi; ++j) dims[i] += a.dim(j) * b.dim(i - j);
  }
  std::vector<SparseMatrix> bd;
  for (std::size_t i = 1; i <= r; ++i) {
    std::vector<Triplet> t;
    auto [lo, hi] = block_range(a, b, i);
    for (std::size_t j = lo; j <= hi; ++j) {
      std::size_t src = tensor_offset(a, b, i, j);
      std::size_t nb = b.dim(i - j);
      if (j >= 1) {
        // d^A (x) I into block j-1 of level i-1
        std::size_t dst = tensor_offset(a, b, i - 1, j - 1);
        SparseMatrix da = a.boundary(j);
        for (std::size_t x = 0; x < da.rows(); ++x)
          for (auto [y, v] : da.row(x))
            for (std::size_t z = 0; z < nb; ++z)
              t.emplace_back(static_cast<std::uint32_t>(dst + x * nb + z), static_cast<std::uint32_t>(src + y * nb + z), v);
      }
      if (i - j >= 1) {
        // (-1)^j I (x) d^B into block j of level i-1
        std::size_t dst = tensor_offset(a, b, i - 1, j);
        SparseMatrix db = b.boundary(i - j);
        elem s = sign_of(f, j);
        std::size_t nb2 = b.dim(i - j - 1);
        for (std::size_t x = 0; x < a.dim(j); ++x)
          for (std::size_t z = 0; z < db.rows(); ++z)
            for (auto [y, v] : db.row(z))
              t.emplace_back(static_cast<std::uint32_t>(dst + x * nb2 + z), static_cast<std::uint32_t>(src + x * nb + y),
                             f.mul(s, v));
      }
    }
    bd.push_back(SparseMatrix::from_triplets(f, dims[i - 1], dims[i], t));
  }
  ChainComplex c(f, dims, std::move(bd));
  std::vector<std::vector<std::string>> labels(r + 1), types(r + 1);
  std::vector<std::vector<std::uint32_t>> blocks(r + 1);
  for (std::size_t i = 0; i <= r; ++i) {
    auto [lo, hi] = block_range(a, b, i);
    BlockIds ids;
    for (std::size_t j = lo; j <= hi; ++j)
      for (std::size_t x = 0; x < a.dim(j); ++x)
        for (std::size_t y = 0; y < b.dim(i - j); ++y) {
          if (a.has_labels() && b.has_labels()) labels[i].push_back("(" + a.label(j, x) + "," + b.label(i - j, y) + ")");
          if (a.has_types() && b.has_types()) types[i].push_back(a.type(j, x) + b.type(i - j, y));
          blocks[i].push_back(ids.get(j, a.block(j, x), b.block(i - j, y)));
        }
  }
  if (a.has_labels() && b.has_labels()) c.set_labels(std::move(labels));
  if (a.has_types() && b.has_types()) c.set_types(std::move(types));
  if (a.has_blocks() || b.has_blocks()) c.set_blocks(std::move(blocks));
  c.validate();
  return c;
}

std::uint32_t GroupAction::act(std::size_t level, std::uint64_t g, std::uint32_t x) const {
  const auto& p = perm.at(level);
  std::size_t dim = p.size() / group.size();
  return p[g * dim + x];
}

namespace {

std::vector<std::uint64_t> prime_generators(const VectorGroup& grp) {
  std::vector<std::uint64_t> gens;
  const Field& f = grp.field();
  for (std::size_t c = 0; c < grp.dim(); ++c)
    for (std::uint32_t s = 0; s < f.m(); ++s) {
      std::vector<std::uint32_t> co(f.m(), 0);
      co[s] = 1;
      Vec x(grp.dim(), 0);
      x[c] = f.from_coords(co);
      gens.push_back(grp.encode(x));
    }
  return gens;
}

}  // namespace

void GroupAction::validate(const ChainComplex& c) const {
  require(perm.size() == c.num_levels(), "DimensionMismatch", "one permutation table per level");
  std::uint64_t order = group.size();
  std::vector<std::uint64_t> gens = prime_generators(group);
  for (std::size_t i = 0; i < c.num_levels(); ++i) {
    std::size_t dim = c.dim(i);
    require(perm[i].size() == order * dim, "DimensionMismatch", "permutation table size");
    for (std::uint64_t g = 0; g < order; ++g) {
      std::vector<char> hit(dim, 0);
      for (std::uint32_t x = 0; x < dim; ++x) {
        std::uint32_t y = act(i, g, x);
        require(y < dim && !hit[y], "NotAPermutation", "group element does not permute the basis");
        hit[y] = 1;
        if (g == 0) require(y == x, "NotAnAction", "identity must act trivially");
        else if (y == x) fail(ErrorKind::invalid_argument, "ActionNotFree", "nonzero group element fixes a basis vector");
      }
      for (std::uint64_t e : gens)
        for (std::uint32_t x = 0; x < dim; ++x)
          require(act(i, group.add(g, e), x) == act(i, e, act(i, g, x)), "NotAnAction",
                  "action is not a homomorphism");
    }
  }
  const Field& f = c.field();
  for (std::size_t i = 1; i < c.num_levels(); ++i) {
    SparseMatrix d = c.boundary(i);
    for (std::uint64_t e : gens)
      for (std::uint32_t x = 0; x < d.rows(); ++x)
        for (auto [y, v] : d.row(x))
          if (d.at(act(i - 1, e, x), act(i, e, y)) != v)
            fail(ErrorKind::invalid_argument, "ActionNotCompatible", "action does not commute with the boundary");
  }
  (void)f;
}

ChainComplex balanced_product(const ChainComplex& a, const GroupAction& ga, const ChainComplex& b,
                              const GroupAction& gb) {
  require(a.field() == b.field(), "FieldMismatch", "factors over different fields");
  require(ga.group.field() == gb.group.field() && ga.group.dim() == gb.group.dim(), "GroupMismatch",
          "factors carry actions of different groups");
  ga.validate(a);
  gb.validate(b);
  const Field& f = a.field();
  const VectorGroup& grp = ga.group;
  std::uint64_t order = grp.size();
  std::size_t r = a.top() + b.top();
  // per level of A: orbit minimum rank and the group element moving x onto it
  std::vector<std::vector<std::uint32_t>> min_rank(a.num_levels()), mins(a.num_levels());
  std::vector<std::vector<std::uint64_t>> to_min(a.num_levels());
  for (std::size_t j = 0; j < a.num_levels(); ++j) {
    std::size_t n = a.dim(j);
    min_rank[j].assign(n, 0);
    to_min[j].assign(n, 0);
    std::vector<char> is_min(n, 0);
    for (std::uint32_t x = 0; x < n; ++x) {
      std::uint32_t best = x;
      std::uint64_t bg = 0;
      for (std::uint64_t g = 1; g < order; ++g) {
        std::uint32_t y = ga.act(j, g, x);
        if (y < best) best = y, bg = g;
      }
      to_min[j][x] = bg;
      if (best == x) is_min[x] = 1;
    }
    for (std::uint32_t x = 0; x < n; ++x)
      if (is_min[x]) {
        min_rank[j][x] = static_cast<std::uint32_t>(mins[j].size());
        mins[j].push_back(x);
      }
    for (std::uint32_t x = 0; x < n; ++x) min_rank[j][x] = min_rank[j][ga.act(j, to_min[j][x], x)];
  }
  std::vector<std::size_t> dims(r + 1, 0);
  std::vector<std::vector<std::size_t>> off(r + 1);
  for (std::size_t i = 0; i <= r; ++i) {
    auto [lo, hi] = block_range(a, b, i);
    off[i].assign(a.top() + 1, 0);
    for (std::size_t j = lo; j <= hi; ++j) {
      off[i][j] = dims[i];
      dims[i] += mins[j].size() * b.dim(i - j);
    }
  }
  // canonical index of the class of (x, y) with x in A_j, y in B_{i-j}
  auto index = [&](std::size_t i, std::size_t j, std::uint32_t x, std::uint32_t y) -> std::uint32_t {
    std::uint64_t g = to_min[j][x];
    std::uint32_t yy = gb.act(i - j, grp.neg(g), y);
    return static_cast<std::uint32_t>(off[i][j] + min_rank[j][x] * b.dim(i - j) + yy);
  };
  std::vector<SparseMatrix> bd;
  for (std::size_t i = 1; i <= r; ++i) {
    std::vector<Triplet> t;
    auto [lo, hi] = block_range(a, b, i);
    for (std::size_t j = lo; j <= hi; ++j) {
      SparseMatrix dat = a.boundary(j).transpose();
      SparseMatrix dbt = b.boundary(i - j).transpose();
      elem s = sign_of(f, j);
      for (std::uint32_t x : mins[j])
        for (std::uint32_t y = 0; y < b.dim(i - j); ++y) {
          std::uint32_t col = index(i, j, x, y);
          if (j >= 1)
            for (auto [x2, v] : dat.row(x)) t.emplace_back(index(i - 1, j - 1, x2, y), col, v);
          if (i - j >= 1)
            for (auto [y2, v] : dbt.row(y)) t.emplace_back(index(i - 1, j, x, y2), col, f.mul(s, v));
        }
    }
    bd.push_back(SparseMatrix::from_triplets(f, dims[i - 1], dims[i], t));
  }
  ChainComplex c(f, dims, std::move(bd));
  std::vector<std::vector<std::string>> labels(r + 1), types(r + 1);
  std::vector<std::vector<std::uint32_t>> blocks(r + 1);
  for (std::size_t i = 0; i <= r; ++i) {
    auto [lo, hi] = block_range(a, b, i);
    BlockIds ids;
    for (std::size_t j = lo; j <= hi; ++j)
      for (std::uint32_t x : mins[j])
        for (std::size_t y = 0; y < b.dim(i - j); ++y) {
          if (a.has_labels() && b.has_labels()) labels[i].push_back("(" + a.label(j, x) + "," + b.label(i - j, y) + ")");
          if (a.has_types() && b.has_types()) types[i].push_back(a.type(j, x) + b.type(i - j, y));
          blocks[i].push_back(ids.get(j, a.block(j, x), b.block(i - j, y)));
        }
  }
  if (a.has_labels() && b.has_labels()) c.set_labels(std::move(labels));
  if (a.has_types() && b.has_types()) c.set_types(std::move(types));
  if (a.has_blocks() || b.has_blocks()) c.set_blocks(std::move(blocks));
  c.validate();
  return c;
}

bool kunneth_check(const ChainComplex& a, const ChainComplex& b, std::size_t i) {
  ChainComplex c = tensor_product(a, b);
  std::size_t lhs = i <= c.top() ? cohomology_dim(c, i) : 0;
  std::size_t rhs = 0;
  for (std::size_t j = 0; j <= std::min(i, a.top()); ++j)
    if (i - j <= b.top()) rhs += cohomology_dim(a, j) * cohomology_dim(b, i - j);
  return lhs == rhs;
}

ProductDistanceReport product_distance_check(const ChainComplex& a, const ChainComplex& b, std::size_t i,
                                             std::uint64_t budget) {
  ChainComplex c = tensor_product(a, b);
  ProductDistanceReport rep;
  rep.product = cosystolic_distance(c, i, DistanceMode::exact, budget).value;
  for (std::size_t j = 0; j <= std::min(i, a.top()); ++j) {
    if (i - j > b.top()) continue;
    std::uint64_t da = cosystolic_distance(a, j, DistanceMode::exact, budget).value;
    std::uint64_t db = cosystolic_distance(b, i - j, DistanceMode::exact, budget).value;
    rep.bound = std::min(rep.bound, std::max(da, db));
  }
  rep.ok = rep.product >= rep.bound;
  return rep;
}

std::size_t locality(const ChainComplex& c) {
  std::size_t w = 0;
  for (std::size_t i = 1; i < c.num_levels(); ++i) {
    SparseMatrix d = c.boundary(i);
    w = std::max({w, d.max_row_weight(), d.max_col_weight()});
  }
  return w;
}

std::size_t CubicalType::level() const { return static_cast<std::size_t>(std::count(t.begin(), t.end(), '*')); }

bool CubicalType::valid(std::size_t expected_level) const {
  for (char ch : t)
    if (ch != '0' && ch != '1' && ch != '*') return false;
  return level() == expected_level;
}

nlohmann::json complex_to_json(const ChainComplex& c) {
  nlohmann::json j;
  j["schema"] = "rmlift.complex/1";
  j["field"] = field_to_json(c.field());
  j["levels"] = c.dims();
  nlohmann::json bds = nlohmann::json::array();
  for (std::size_t i = 1; i < c.num_levels(); ++i) bds.push_back(sparse_to_json(c.field(), c.boundary(i)));
  j["boundaries"] = bds;
  if (c.has_labels()) j["labels"] = c.labels();
  if (c.has_blocks()) j["blocks"] = c.blocks();
  if (c.has_types()) j["types"] = c.types();
  return j;
}

ChainComplex complex_from_json(const nlohmann::json& j) {
  Field f = field_from_json(j.at("field"));
  auto dims = j.at("levels").get<std::vector<std::size_t>>();
  std::vector<SparseMatrix> bd;
  for (const auto& m : j.at("boundaries")) bd.push_back(sparse_from_json(f, m));
  ChainComplex c(f, dims, std::move(bd));
  if (j.contains("labels")) c.set_labels(j.at("labels").get<std::vector<std::vector<std::string>>>());
  if (j.contains("blocks")) c.set_blocks(j.at("blocks").get<std::vector<std::vector<std::uint32_t>>>());
  if (j.contains("types")) c.set_types(j.at("types").get<std::vector<std::vector<std::string>>>());
  return c;
}

}  // namespace rmlift
