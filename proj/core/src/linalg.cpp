#include "rmlift/linalg.hpp"

#include <algorithm>
#include <map>
#include <numeric>

#include <nlohmann/json.hpp>

#include "rmlift/error.hpp"

namespace rmlift {

std::size_t weight(const Vec& v) {
  return static_cast<std::size_t>(std::count_if(v.begin(), v.end(), [](elem x) { return x != 0; }));
}

SparseVec to_sparse(const Vec& v) {
  SparseVec s;
  for (std::size_t i = 0; i < v.size(); ++i)
    if (v[i] != 0) s.emplace_back(static_cast<std::uint32_t>(i), v[i]);
  return s;
}

Vec to_dense(const SparseVec& v, std::size_t n) {
  Vec d(n, 0);
  for (auto [i, x] : v) d[i] = x;
  return d;
}

SparseVec axpy(const Field& f, const SparseVec& a, elem c, const SparseVec& b) {
  if (c == 0) return a;
  SparseVec r;
  r.reserve(a.size() + b.size());
  std::size_t i = 0, j = 0;
  while (i < a.size() || j < b.size()) {
    if (j == b.size() || (i < a.size() && a[i].first < b[j].first)) {
      r.push_back(a[i++]);
    } else if (i == a.size() || b[j].first < a[i].first) {
      r.emplace_back(b[j].first, f.mul(c, b[j].second));
      ++j;
    } else {
      elem s = f.add(a[i].second, f.mul(c, b[j].second));
      if (s != 0) r.emplace_back(a[i].first, s);
      ++i;
      ++j;
    }
  }
  return r;
}

elem dot(const Field& f, const SparseVec& a, const SparseVec& b) {
  elem acc = 0;
  std::size_t i = 0, j = 0;
  while (i < a.size() && j < b.size()) {
    if (a[i].first < b[j].first) {
      ++i;
    } else if (b[j].first < a[i].first) {
      ++j;
    } else {
      acc = f.add(acc, f.mul(a[i].second, b[j].second));
      ++i;
      ++j;
    }
  }
  return acc;
}

elem dot(const Field& f, const Vec& a, const Vec& b) {
  require(a.size() == b.size(), "LengthMismatch", "dot product of vectors of different length");
  elem acc = 0;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (a[i] && b[i]) acc = f.add(acc, f.mul(a[i], b[i]));
  return acc;
}

SparseMatrix SparseMatrix::from_triplets(const Field& f, std::size_t rows, std::size_t cols,
                                         const std::vector<Triplet>& entries) {
  SparseMatrix m(rows, cols);
  std::vector<std::vector<std::pair<std::uint32_t, elem>>> tmp(rows);
  for (const auto& [i, j, v] : entries) {
    require(i < rows && j < cols, "IndexOutOfRange", "triplet outside matrix bounds");
    if (v != 0) tmp[i].emplace_back(j, v);
  }
  for (std::size_t i = 0; i < rows; ++i) {
    auto& t = tmp[i];
    std::sort(t.begin(), t.end(), [](auto& a, auto& b) { return a.first < b.first; });
    SparseVec r;
    for (auto& [j, v] : t) {
      if (!r.empty() && r.back().first == j) {
        r.back().second = f.add(r.back().second, v);
        if (r.back().second == 0) r.pop_back();
      } else {
        r.emplace_back(j, v);
      }
    }
    m.data_[i] = std::move(r);
  }
  return m;
}

SparseMatrix SparseMatrix::from_dense(const Mat& d, std::size_t cols) {
  SparseMatrix m(d.size(), cols);
  for (std::size_t i = 0; i < d.size(); ++i) m.data_[i] = to_sparse(d[i]);
  return m;
}

SparseMatrix SparseMatrix::identity(std::size_t n) {
  SparseMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m.data_[i] = {{static_cast<std::uint32_t>(i), 1}};
  return m;
}

elem SparseMatrix::at(std::size_t i, std::size_t j) const {
  const auto& r = data_[i];
  auto it = std::lower_bound(r.begin(), r.end(), j, [](auto& e, std::size_t c) { return e.first < c; });
  return (it != r.end() && it->first == j) ? it->second : 0;
}

SparseMatrix SparseMatrix::transpose() const {
  SparseMatrix t(cols_, rows_);
  std::vector<std::size_t> cnt(cols_, 0);
  for (const auto& r : data_)
    for (auto& e : r) ++cnt[e.first];
  for (std::size_t j = 0; j < cols_; ++j) t.data_[j].reserve(cnt[j]);
  for (std::size_t i = 0; i < rows_; ++i)
    for (auto& [j, v] : data_[i]) t.data_[j].emplace_back(static_cast<std::uint32_t>(i), v);
  return t;
}

Vec SparseMatrix::apply(const Field& f, const Vec& x) const {
  require(x.size() == cols_, "DimensionMismatch", "matrix-vector size mismatch");
  Vec y(rows_, 0);
  for (std::size_t i = 0; i < rows_; ++i) {
    elem acc = 0;
    for (auto [j, v] : data_[i])
      if (x[j]) acc = f.add(acc, f.mul(v, x[j]));
    y[i] = acc;
  }
  return y;
}

SparseVec SparseMatrix::apply(const Field& f, const SparseVec& x) const {
  SparseVec y;
  for (std::size_t i = 0; i < rows_; ++i) {
    elem v = dot(f, data_[i], x);
    if (v) y.emplace_back(static_cast<std::uint32_t>(i), v);
  }
  return y;
}

SparseMatrix SparseMatrix::multiply(const Field& f, const SparseMatrix& b) const {
  require(cols_ == b.rows_, "DimensionMismatch", "matrix product size mismatch");
  SparseMatrix c(rows_, b.cols_);
  std::vector<elem> acc(b.cols_, 0);
  std::vector<std::uint32_t> touched;
  std::vector<char> mark(b.cols_, 0);
  for (std::size_t i = 0; i < rows_; ++i) {
    touched.clear();
    for (auto [k, v] : data_[i])
      for (auto [j, w] : b.data_[k]) {
        if (!mark[j]) {
          mark[j] = 1;
          touched.push_back(j);
        }
        acc[j] = f.add(acc[j], f.mul(v, w));
      }
    std::sort(touched.begin(), touched.end());
    SparseVec r;
    for (auto j : touched) {
      if (acc[j]) r.emplace_back(j, acc[j]);
      acc[j] = 0;
      mark[j] = 0;
    }
    c.data_[i] = std::move(r);
  }
  return c;
}

SparseMatrix SparseMatrix::kron(const Field& f, const SparseMatrix& b) const {
  SparseMatrix c(rows_ * b.rows_, cols_ * b.cols_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t k = 0; k < b.rows_; ++k) {
      SparseVec r;
      for (auto [j, v] : data_[i])
        for (auto [l, w] : b.data_[k])
          r.emplace_back(static_cast<std::uint32_t>(j * b.cols_ + l), f.mul(v, w));
      c.data_[i * b.rows_ + k] = std::move(r);
    }
  return c;
}

SparseMatrix SparseMatrix::scaled(const Field& f, elem c) const {
  SparseMatrix s(rows_, cols_);
  if (c == 0) return s;
  for (std::size_t i = 0; i < rows_; ++i) {
    s.data_[i] = data_[i];
    for (auto& e : s.data_[i]) e.second = f.mul(e.second, c);
  }
  return s;
}

bool SparseMatrix::is_zero() const {
  for (const auto& r : data_)
    if (!r.empty()) return false;
  return true;
}

std::size_t SparseMatrix::nnz() const {
  std::size_t n = 0;
  for (const auto& r : data_) n += r.size();
  return n;
}

std::size_t SparseMatrix::max_row_weight() const {
  std::size_t w = 0;
  for (const auto& r : data_) w = std::max(w, r.size());
  return w;
}

std::size_t SparseMatrix::max_col_weight() const {
  std::vector<std::size_t> cnt(cols_, 0);
  for (const auto& r : data_)
    for (auto& e : r) ++cnt[e.first];
  return cnt.empty() ? 0 : *std::max_element(cnt.begin(), cnt.end());
}

Mat SparseMatrix::to_dense() const {
  Mat d(rows_, Vec(cols_, 0));
  for (std::size_t i = 0; i < rows_; ++i)
    for (auto [j, v] : data_[i]) d[i][j] = v;
  return d;
}

EchelonBasis::EchelonBasis(const Field& f, std::size_t n, std::vector<std::uint32_t> column_order)
    : f_(f), n_(n) {
  if (column_order.empty()) {
    col_of_.resize(n);
    std::iota(col_of_.begin(), col_of_.end(), 0u);
  } else {
    require(column_order.size() == n, "BadOrder", "column order must be a permutation of the columns");
    col_of_ = std::move(column_order);
  }
  pos_of_.assign(n, 0);
  std::vector<char> seen(n, 0);
  for (std::size_t p = 0; p < n; ++p) {
    require(col_of_[p] < n && !seen[col_of_[p]], "BadOrder", "column order must be a permutation");
    seen[col_of_[p]] = 1;
    pos_of_[col_of_[p]] = static_cast<std::uint32_t>(p);
  }
}

SparseVec EchelonBasis::to_pos(const SparseVec& v) const {
  SparseVec r;
  r.reserve(v.size());
  for (auto [c, x] : v) {
    require(c < n_, "IndexOutOfRange", "vector index beyond ambient dimension");
    if (x) r.emplace_back(pos_of_[c], x);
  }
  std::sort(r.begin(), r.end(), [](auto& a, auto& b) { return a.first < b.first; });
  return r;
}

SparseVec EchelonBasis::from_pos(const SparseVec& v) const {
  SparseVec r;
  r.reserve(v.size());
  for (auto [p, x] : v) r.emplace_back(col_of_[p], x);
  std::sort(r.begin(), r.end(), [](auto& a, auto& b) { return a.first < b.first; });
  return r;
}

SparseVec EchelonBasis::reduce_pos(SparseVec v) const {
  std::size_t i = 0;
  while (i < v.size()) {
    auto it = pivot_row_.find(v[i].first);
    if (it == pivot_row_.end()) {
      ++i;
      continue;
    }
    const SparseVec& row = rows_[it->second];
    elem c = f_.neg(f_.div(v[i].second, row.front().second));
    // entries before i are untouched because every entry of row is at position >= pivot
    SparseVec head(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(i));
    SparseVec tail(v.begin() + static_cast<std::ptrdiff_t>(i), v.end());
    tail = axpy(f_, tail, c, row);
    head.insert(head.end(), tail.begin(), tail.end());
    v = std::move(head);
  }
  return v;
}

bool EchelonBasis::insert(const SparseVec& v) {
  SparseVec r = reduce_pos(to_pos(v));
  if (r.empty()) return false;
  elem lead_inv = f_.inv(r.front().second);
  for (auto& e : r) e.second = f_.mul(e.second, lead_inv);
  pivot_row_[r.front().first] = rows_.size();
  rows_.push_back(std::move(r));
  reduced_ = false;
  return true;
}

bool EchelonBasis::contains(const SparseVec& v) const { return reduce_pos(to_pos(v)).empty(); }

SparseVec EchelonBasis::reduce(const SparseVec& v) const { return from_pos(reduce_pos(to_pos(v))); }

void EchelonBasis::make_reduced() {
  if (reduced_) return;
  std::vector<std::size_t> order(rows_.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return rows_[a].front().first > rows_[b].front().first; });
  for (std::size_t idx : order) {
    SparseVec& row = rows_[idx];
    SparseVec tail(row.begin() + 1, row.end());
    tail = reduce_pos(tail);
    SparseVec r{row.front()};
    r.insert(r.end(), tail.begin(), tail.end());
    row = std::move(r);
  }
  reduced_ = true;
}

std::vector<SparseVec> EchelonBasis::basis() const {
  auto* self = const_cast<EchelonBasis*>(this);
  self->make_reduced();
  std::vector<std::size_t> order(rows_.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return rows_[a].front().first < rows_[b].front().first; });
  std::vector<SparseVec> out;
  for (auto i : order) out.push_back(from_pos(rows_[i]));
  return out;
}

std::vector<std::uint32_t> EchelonBasis::pivot_columns() const {
  std::vector<std::uint32_t> cols;
  for (const auto& r : rows_) cols.push_back(col_of_[r.front().first]);
  std::sort(cols.begin(), cols.end());
  return cols;
}

std::vector<SparseVec> EchelonBasis::complement_kernel() const {
  auto* self = const_cast<EchelonBasis*>(this);
  self->make_reduced();
  std::vector<char> is_pivot(n_, 0);
  for (const auto& r : rows_) is_pivot[r.front().first] = 1;
  std::vector<SparseVec> kv(n_);
  for (const auto& r : rows_) {
    std::uint32_t lead = r.front().first;
    for (std::size_t k = 1; k < r.size(); ++k) kv[r[k].first].emplace_back(lead, f_.neg(r[k].second));
  }
  std::vector<SparseVec> out;
  for (std::uint32_t p = 0; p < n_; ++p) {
    if (is_pivot[p]) continue;
    SparseVec v = kv[p];
    v.emplace_back(p, 1);
    out.push_back(from_pos(v));
  }
  return out;
}

std::vector<std::uint32_t> weight_order(const SparseMatrix& a) {
  std::vector<std::size_t> cnt(a.cols(), 0);
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (auto& e : a.row(i)) ++cnt[e.first];
  std::vector<std::uint32_t> order(a.cols());
  std::iota(order.begin(), order.end(), 0u);
  std::stable_sort(order.begin(), order.end(), [&](auto x, auto y) { return cnt[x] < cnt[y]; });
  return order;
}

std::size_t rank(const Field& f, const SparseMatrix& a) {
  if (a.rows() == 0 || a.cols() == 0) return 0;
  if (a.rows() < a.cols()) {
    EchelonBasis eb(f, a.cols(), weight_order(a));
    for (std::size_t i = 0; i < a.rows(); ++i) eb.insert(a.row(i));
    return eb.rank();
  }
  SparseMatrix t = a.transpose();
  EchelonBasis eb(f, t.cols(), weight_order(t));
  for (std::size_t i = 0; i < t.rows(); ++i) eb.insert(t.row(i));
  return eb.rank();
}

std::vector<SparseVec> kernel(const Field& f, const SparseMatrix& a) {
  EchelonBasis eb(f, a.cols(), weight_order(a));
  for (std::size_t i = 0; i < a.rows(); ++i) eb.insert(a.row(i));
  return eb.complement_kernel();
}

std::vector<SparseVec> row_space(const Field& f, const SparseMatrix& a) {
  EchelonBasis eb(f, a.cols());
  for (std::size_t i = 0; i < a.rows(); ++i) eb.insert(a.row(i));
  return eb.basis();
}

bool in_row_space(const Field& f, const SparseMatrix& a, const SparseVec& v) {
  EchelonBasis eb(f, a.cols());
  for (std::size_t i = 0; i < a.rows(); ++i) eb.insert(a.row(i));
  return eb.contains(v);
}

namespace {

// in-place reduced row echelon form, returns pivot columns
std::vector<std::size_t> dense_rref(const Field& f, Mat& a) {
  std::vector<std::size_t> pivots;
  if (a.empty()) return pivots;
  std::size_t rows = a.size(), cols = a[0].size(), r = 0;
  for (std::size_t c = 0; c < cols && r < rows; ++c) {
    std::size_t piv = rows;
    for (std::size_t i = r; i < rows; ++i)
      if (a[i][c]) {
        piv = i;
        break;
      }
    if (piv == rows) continue;
    std::swap(a[r], a[piv]);
    elem inv = f.inv(a[r][c]);
    for (auto& x : a[r]) x = f.mul(x, inv);
    for (std::size_t i = 0; i < rows; ++i) {
      if (i == r || a[i][c] == 0) continue;
      elem m = f.neg(a[i][c]);
      for (std::size_t j = c; j < cols; ++j)
        if (a[r][j]) a[i][j] = f.add(a[i][j], f.mul(m, a[r][j]));
    }
    pivots.push_back(c);
    ++r;
  }
  return pivots;
}

}  // namespace

std::size_t dense_rank(const Field& f, Mat a) { return dense_rref(f, a).size(); }

std::optional<Mat> dense_inverse(const Field& f, Mat a) {
  std::size_t n = a.size();
  for (std::size_t i = 0; i < n; ++i) {
    require(a[i].size() == n, "NotSquare", "inverse of a non-square matrix");
    a[i].resize(2 * n, 0);
    a[i][n + i] = 1;
  }
  auto piv = dense_rref(f, a);
  if (piv.size() < n || (n > 0 && piv[n - 1] != n - 1)) return std::nullopt;
  Mat inv(n, Vec(n));
  for (std::size_t i = 0; i < n; ++i) inv[i].assign(a[i].begin() + static_cast<std::ptrdiff_t>(n), a[i].end());
  return inv;
}

std::optional<Vec> dense_solve(const Field& f, const Mat& a, const Vec& b) {
  std::size_t rows = a.size();
  require(b.size() == rows, "DimensionMismatch", "right-hand side has wrong length");
  std::size_t cols = rows ? a[0].size() : 0;
  Mat aug(rows, Vec(cols + 1));
  for (std::size_t i = 0; i < rows; ++i) {
    std::copy(a[i].begin(), a[i].end(), aug[i].begin());
    aug[i][cols] = b[i];
  }
  auto piv = dense_rref(f, aug);
  if (!piv.empty() && piv.back() == cols) return std::nullopt;
  Vec x(cols, 0);
  for (std::size_t r = 0; r < piv.size(); ++r) x[piv[r]] = aug[r][cols];
  return x;
}

Mat dense_transpose(const Mat& a) {
  if (a.empty()) return {};
  Mat t(a[0].size(), Vec(a.size()));
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < a[i].size(); ++j) t[j][i] = a[i][j];
  return t;
}

Mat dense_multiply(const Field& f, const Mat& a, const Mat& b) {
  if (a.empty()) return {};
  std::size_t n = a.size(), k = b.size(), m = k ? b[0].size() : 0;
  require(a[0].size() == k, "DimensionMismatch", "matrix product size mismatch");
  Mat c(n, Vec(m, 0));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t l = 0; l < k; ++l) {
      if (!a[i][l]) continue;
      for (std::size_t j = 0; j < m; ++j)
        if (b[l][j]) c[i][j] = f.add(c[i][j], f.mul(a[i][l], b[l][j]));
    }
  return c;
}

nlohmann::json sparse_to_json(const Field& f, const SparseMatrix& m) {
  nlohmann::json entries = nlohmann::json::array();
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (auto [j, v] : m.row(i)) entries.push_back({i, j, f.coords(v)});
  return {{"rows", m.rows()}, {"cols", m.cols()}, {"entries", entries}};
}

SparseMatrix sparse_from_json(const Field& f, const nlohmann::json& j) {
  std::vector<Triplet> t;
  for (const auto& e : j.at("entries"))
    t.emplace_back(e.at(0).get<std::uint32_t>(), e.at(1).get<std::uint32_t>(),
                   f.from_coords(e.at(2).get<std::vector<std::uint32_t>>()));
  return SparseMatrix::from_triplets(f, j.at("rows").get<std::size_t>(), j.at("cols").get<std::size_t>(), t);
}

}  // namespace rmlift
